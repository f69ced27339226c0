#include <gtest/gtest.h>

#include <functional>

#include "dgsim/dense.hpp"
#include "dgsim/io.hpp"
#include "support.hpp"

using namespace dgsim;
using namespace dgsim::io;
using dgsim::testing::Gen;
using dgsim::testing::max_diff;

namespace {

std::string message_of(const std::function<void()>& f) {
  try {
    f();
  } catch (const ParseError& e) {
    return e.what();
  }
  return "";
}

json circuit_doc() {
  return json::parse(R"({
    "schema": "dgsim.circuit/1", "n": 2,
    "input": {"lambdas": [1, 1]},
    "gates": [{"kind": "rx", "angle": 0.5}, {"kind": "matchgate", "j": 2, "k": 3, "angle": 0.25}, {"kind": "fswap", "line": 1}],
    "measure": {"lines": [1, 2], "x": "01"}
  })");
}

}  // namespace

TEST(ParseText, ReportsLineAndColumn) {
  const std::string msg = message_of([] { parse_text("{\n  \"n\": 2,\n  oops\n}", "bad.json"); });
  EXPECT_NE(msg.find("bad.json:3:"), std::string::npos) << msg;
  EXPECT_THROW(load_file("/nonexistent/file.json"), ParseError);
}

TEST(Schema, MissingOrWrongSchemaIsRejected) {
  EXPECT_THROW(schema_of(json::parse(R"({"n": 1})")), ParseError);
  EXPECT_THROW(parse_state(json::parse(R"({"schema": "dgsim.gates/1", "n": 1, "lambdas": [1]})")), ParseError);
  EXPECT_EQ(schema_of(circuit_doc()), kCircuitSchema);
}

TEST(State, RoundTripIsExact) {
  Gen g(101);
  for (int n = 1; n <= 4; ++n) {
    const DGaussState s = g.state(n);
    const json doc = json::parse(dump(to_json(s)));
    EXPECT_EQ(max_diff(parse_state(doc).extended(), s.extended()), 0.0);
  }
  const DGaussState d = parse_state(json::parse(R"({"schema": "dgsim.state/1", "n": 2, "lambdas": [1, -0.5]})"));
  EXPECT_EQ(max_diff(d.extended(), from_diagonal(DiagonalSpec({1, -0.5})).extended()), 0.0);
}

TEST(State, RejectsBadMatrices) {
  json doc = to_json(from_diagonal(DiagonalSpec({0.5})));
  doc["M"] = json::array({0.0, 0.5, 0.5, 0.0});
  const std::string msg = message_of([&] { parse_state(doc); });
  EXPECT_NE(msg.find("/M"), std::string::npos) << msg;
  EXPECT_NE(msg.find("antisymmetric"), std::string::npos) << msg;
  doc = to_json(from_diagonal(DiagonalSpec({0.5})));
  doc["mu"] = json::array({0.0});
  EXPECT_THROW(parse_state(doc), ParseError);
  EXPECT_THROW(parse_state(json::parse(R"({"schema": "dgsim.state/1", "n": 1, "lambdas": [1.5]})")), ParseError);
}

TEST(UnknownFields, RejectedWithLocation) {
  json doc = circuit_doc();
  doc["gates"][1]["speed"] = 3;
  std::string msg = message_of([&] { parse_circuit(doc); });
  EXPECT_NE(msg.find("/gates/1/speed"), std::string::npos) << msg;
  doc = circuit_doc();
  doc["measure"]["basis"] = "z";
  msg = message_of([&] { parse_circuit(doc); });
  EXPECT_NE(msg.find("/measure/basis"), std::string::npos) << msg;
  doc = circuit_doc();
  doc["extra"] = true;
  msg = message_of([&] { parse_circuit(doc); });
  EXPECT_NE(msg.find("/extra"), std::string::npos) << msg;
}

TEST(Hamiltonian, RoundTrip) {
  Gen g(102);
  const Hamiltonian h{g.antisym(6), g.vector(6)};
  const Hamiltonian back = parse_hamiltonian(json::parse(dump(to_json(h))));
  EXPECT_EQ(max_diff(back.h.mat(), h.h.mat()), 0.0);
  EXPECT_EQ(max_diff(back.d, h.d), 0.0);
}

TEST(Gates, SugarAndRoundTrip) {
  const Gate x = parse_gate(json::parse(R"({"kind": "rx", "angle": 0.5})"), 3, "/g");
  EXPECT_LT(max_diff(gate_rotation(x, 3).mat(), gate_rotation(line1_rotation('x', 0.5, 3), 3).mat()), 1e-15);
  EXPECT_THROW(parse_gate(json::parse(R"({"kind": "matchgate", "j": 1, "k": 5, "angle": 0.1})"), 3, "/g"), ParseError);
  EXPECT_THROW(parse_gate(json::parse(R"({"kind": "fswap", "line": 3})"), 3, "/g"), ParseError);
  EXPECT_THROW(parse_gate(json::parse(R"({"kind": "cz", "angle": 0.1})"), 3, "/g"), ParseError);

  Gen g(103);
  const GateSequence seq = compile(g.rotation(7));
  const GateSequence back = parse_gates(json::parse(dump(to_json(seq))));
  ASSERT_EQ(back.gates.size(), seq.gates.size());
  EXPECT_EQ(max_diff(sequence_rotation(back), sequence_rotation(seq)), 0.0);
}

TEST(Circuit, ParsesAndRoundTrips) {
  const Circuit c = parse_circuit(circuit_doc());
  EXPECT_EQ(c.n, 2);
  EXPECT_EQ(c.gates.size(), 3u);
  EXPECT_EQ(c.lines, (std::vector<int>{1, 2}));
  ASSERT_TRUE(std::holds_alternative<ExpectationMode>(c.mode));
  EXPECT_EQ(std::get<ExpectationMode>(c.mode).x, (std::vector<int>{0, 1}));
  const Circuit back = parse_circuit(json::parse(dump(to_json(c))));
  EXPECT_EQ(max_diff(run(back).extended(), run(c).extended()), 0.0);
}

TEST(Circuit, MeasurementValidation) {
  json doc = circuit_doc();
  doc["measure"] = json::parse(R"({"lines": [2, 1], "x": "00"})");
  EXPECT_NE(message_of([&] { parse_circuit(doc); }).find("/measure/lines"), std::string::npos);
  doc["measure"] = json::parse(R"({"lines": [1], "x": "01"})");
  EXPECT_THROW(parse_circuit(doc), ParseError);
  doc["measure"] = json::parse(R"({"lines": [1], "x": "0", "shots": 10})");
  EXPECT_THROW(parse_circuit(doc), ParseError);
  doc["measure"] = json::parse(R"({"lines": [1, 2], "shots": 10, "seed": 7})");
  const Circuit c = parse_circuit(doc);
  ASSERT_TRUE(std::holds_alternative<SampleMode>(c.mode));
  EXPECT_EQ(std::get<SampleMode>(c.mode).shots, 10);
  EXPECT_EQ(std::get<SampleMode>(c.mode).seed, 7u);
}

TEST(Dense, VectorIsNormalizedAndMatrixRoundTrips) {
  const DenseOp psi = parse_dense(json::parse(R"({"schema": "dgsim.dense/1", "n": 1, "kind": "vector", "re": [3, 4]})"));
  EXPECT_NEAR(psi.mat()(0, 0).real(), 0.36, 1e-15);
  EXPECT_NEAR(psi.mat()(0, 1).real(), 0.48, 1e-15);
  Gen g(104);
  const DenseOp rho = dense(g.state(2));
  EXPECT_EQ(max_abs_diff(parse_dense(json::parse(dump(to_json(rho)))), rho), 0.0);
  EXPECT_THROW(parse_dense(json::parse(R"({"schema": "dgsim.dense/1", "n": 1, "kind": "vector", "re": [1, 0, 0]})")),
               ParseError);
}

TEST(Dump, IsDeterministic) {
  Gen a(105), b(105);
  EXPECT_EQ(dump(to_json(a.state(3))), dump(to_json(b.state(3))));
  EXPECT_EQ(dump(json::object()).back(), '\n');
}
