#include <cmath>
#include <fstream>
#include <iostream>
#include <map>
#include <optional>
#include <string>

#include <CLI11.hpp>

#include "dgsim/dense.hpp"
#include "dgsim/embedding.hpp"
#include "dgsim/io.hpp"

using namespace dgsim;
using io::json;

namespace {

constexpr const char* kVersion = "0.1.0";

enum Exit { kOk = 0, kNegative = 1, kParse = 2, kNumeric = 3, kCap = 4 };

struct Options {
  std::string input;
  std::string out;
  std::optional<std::int64_t> shots;
  std::optional<std::uint64_t> seed;
  std::optional<double> tol;
  int n_max = kOracleMaxQubits;
  std::optional<int> corrupt_gate;
  bool displaced = false;
};

struct Outcome {
  json doc;
  int code = kOk;
};

json result(const char* command) { return {{"schema", io::kResultSchema}, {"command", command}}; }

std::string bits(const std::vector<int>& x) {
  std::string s;
  for (int b : x) s += static_cast<char>('0' + b);
  return s;
}

Outcome cmd_run(const Options& o) {
  Circuit c = io::parse_circuit(io::load_file(o.input));
  if (o.seed && !o.shots && !std::holds_alternative<SampleMode>(c.mode)) {
    throw io::ParseError("--seed needs --shots for an expectation circuit");
  }
  if (o.shots || o.seed) {
    SampleMode m = std::holds_alternative<SampleMode>(c.mode) ? std::get<SampleMode>(c.mode) : SampleMode{};
    if (o.shots) m.shots = *o.shots;
    if (o.seed) m.seed = *o.seed;
    c.mode = m;
  }
  const DGaussState s = run(c);
  json doc = result("run");
  doc["n"] = c.n;
  doc["lines"] = c.lines;
  if (const auto* e = std::get_if<ExpectationMode>(&c.mode)) {
    doc["x"] = bits(e->x);
    doc["value"] = expectation(s, MeasurementOp(c.lines, e->x));
  } else {
    const auto& m = std::get<SampleMode>(c.mode);
    std::map<std::string, std::int64_t> counts;
    for (auto& shot : sample(s, c.lines, m.shots, m.seed)) ++counts[shot];
    doc["shots"] = m.shots;
    doc["seed"] = m.seed;
    doc["counts"] = counts;
  }
  return {doc};
}

Outcome cmd_compile(const Options& o) {
  const auto ham = io::parse_hamiltonian(io::load_file(o.input));
  const DGUnitary u(ham.h, ham.d);
  const GateSequence seq = compile(u.rotation());
  const double residual = (sequence_rotation(seq) - u.rotation().mat()).cwiseAbs().maxCoeff();
  const double count = static_cast<double>(seq.gates.size());
  json doc = io::to_json(seq);
  doc["stats"] = {{"count", seq.gates.size()}, {"c", count / std::pow(seq.n, 3)}, {"residual", residual}};
  std::cerr << "gates: " << seq.gates.size() << ", count/n^3 = " << count / std::pow(seq.n, 3)
            << ", residual = " << residual << "\n";
  return {doc};
}

DenseOp dense_initial(const Circuit& c) {
  return std::visit(
      [&](const auto& in) -> DenseOp {
        using T = std::decay_t<decltype(in)>;
        auto single = [](double x, double y, double z) {
          CMat m(2, 2);
          m << 1 + z, cplx(x, -y), cplx(x, y), 1 - z;
          return DenseOp(1, 0.5 * m);
        };
        if constexpr (std::is_same_v<T, DiagonalSpec>) {
          DenseOp rho = single(0, 0, in.lambdas()[0]);
          for (int q = 1; q < c.n; ++q) rho = tensor(rho, single(0, 0, in.lambdas()[q]));
          return rho;
        } else if constexpr (std::is_same_v<T, ProductInput>) {
          const auto& b = in.blochs;
          DenseOp rho = single(b[0][0], b[0][1], b[0][2]);
          for (int q = 1; q < c.n; ++q) rho = tensor(rho, single(b[q][0], b[q][1], b[q][2]));
          return rho;
        } else {
          return dense(in);
        }
      },
      c.input);
}

// dense-oracle state for commands that accept either a dense document or something to synthesize
DenseOp dense_state_input(const json& doc) {
  const std::string schema = io::schema_of(doc);
  if (schema == io::kDenseSchema) return io::parse_dense(doc);
  if (schema == io::kStateSchema) return dense(io::parse_state(doc));
  if (schema == io::kCircuitSchema) return dense(run(io::parse_circuit(doc)));
  throw io::ParseError("/schema: expected a dense, state or circuit document");
}

DenseOp dense_unitary_input(const json& doc) {
  const std::string schema = io::schema_of(doc);
  if (schema == io::kDenseSchema) return io::parse_dense(doc);
  if (schema == io::kGatesSchema) {
    const GateSequence seq = io::parse_gates(doc);
    require_oracle_size(seq.n, kDenseMaxQubits, "gate sequence");
    return sequence_unitary(seq);
  }
  if (schema == io::kHamiltonianSchema) {
    const auto h = io::parse_hamiltonian(doc);
    const int n = static_cast<int>(h.h.dim() / 2);
    require_oracle_size(n, kDenseMaxQubits, "hamiltonian");
    return exp_quadratic(n, h.h, h.d);
  }
  throw io::ParseError("/schema: expected a dense, gates or hamiltonian document");
}

Outcome cmd_embed(const Options& o) {
  const json in = io::load_file(o.input);
  const std::string schema = io::schema_of(in);
  if (schema == io::kDenseSchema) return {io::to_json(embed_dense(io::parse_dense(in)))};
  const DGaussState s = schema == io::kCircuitSchema ? run(io::parse_circuit(in)) : io::parse_state(in);
  // second moments of E(ρ); the embedded state itself is Gaussian only for pure input
  const Mat sigma = embedded_covariance(s);
  return {io::to_json(DGaussState(AntisymMat(sigma, 1e-9), Vec::Zero(sigma.rows())))};
}

Outcome cmd_test_state(const Options& o) {
  const DenseOp rho = dense_state_input(io::load_file(o.input));
  require_state(rho, "test-state");
  const bool displaced = o.displaced || odd_part_norm(rho) > 1e-10;
  const StateTest t = displaced ? displaced_state_test(rho) : gaussian_state_test(rho);
  const double tol = o.tol.value_or(kVerdictTol);
  const bool gaussian = t.overlap >= 1.0 - tol;
  json doc = result("test-state");
  doc["test"] = displaced ? "displaced" : "even";
  doc["overlap"] = t.overlap;
  doc["tol"] = tol;
  doc["gaussian"] = gaussian;
  return {doc, gaussian ? kOk : kNegative};
}

Outcome cmd_test_unitary(const Options& o) {
  const DenseOp u = dense_unitary_input(io::load_file(o.input));
  require_unitary(u, "test-unitary");
  const bool displaced = o.displaced || odd_part_norm(u) > 1e-10;
  const UnitaryTest t = displaced ? displaced_unitary_test(u) : gaussian_unitary_test(u);
  const double tol = o.tol.value_or(kVerdictTol);
  const bool gaussian = t.deviation <= tol;
  json doc = result("test-unitary");
  doc["test"] = displaced ? "displaced" : "even";
  doc["deviation"] = t.deviation;
  doc["tol"] = tol;
  doc["gaussian"] = gaussian;
  return {doc, gaussian ? kOk : kNegative};
}

Outcome cmd_oracle_verify(const Options& o) {
  if (o.n_max < 1 || o.n_max > kOracleMaxQubits) {
    throw SizeLimitError("--n-max must lie in [1, " + std::to_string(kOracleMaxQubits) + "]");
  }
  const Circuit c = io::parse_circuit(io::load_file(o.input));
  if (c.n > o.n_max) {
    throw SizeLimitError("circuit has " + std::to_string(c.n) + " qubits, above --n-max " + std::to_string(o.n_max));
  }
  const double tol = o.tol.value_or(1e-7);

  GateSequence dense_gates{c.n, c.gates};
  if (o.corrupt_gate) {
    const int g = *o.corrupt_gate;
    if (g < 0 || g >= static_cast<int>(c.gates.size())) throw io::ParseError("--corrupt-gate: no such gate index");
    std::visit(
        [](auto& gate) {
          if constexpr (requires { gate.plane; }) {
            gate.plane = PlaneRotation(gate.plane.j, gate.plane.k, gate.plane.angle + 0.1);
          } else {
            throw io::ParseError("--corrupt-gate: fswap has no angle");
          }
        },
        dense_gates.gates[static_cast<std::size_t>(g)]);
  }

  const DGaussState s0 = initial_state(c);
  check_circuit(c);
  const DGaussState s = evolve(s0, c.gates);
  const DenseOp rho0 = dense_initial(c);
  const DenseOp rho = conjugate(sequence_unitary(dense_gates), rho0);

  json checkpoints = json::array();
  double worst = 0.0;
  auto add = [&](json cp, double dev) {
    cp["deviation"] = dev;
    checkpoints.push_back(std::move(cp));
    worst = std::max(worst, dev);
  };
  add({{"name", "initial_state"}}, (extended_covariance(rho0) - s0.extended()).cwiseAbs().maxCoeff());
  add({{"name", "post_state"}}, (extended_covariance(rho) - s.extended()).cwiseAbs().maxCoeff());

  std::vector<std::vector<int>> strings;
  if (const auto* e = std::get_if<ExpectationMode>(&c.mode)) {
    strings.push_back(e->x);
  } else {
    const std::size_t k = c.lines.size();
    for (std::uint64_t v = 0; v < (std::uint64_t{1} << k); ++v) {
      std::vector<int> x(k);
      for (std::size_t a = 0; a < k; ++a) x[a] = static_cast<int>((v >> (k - 1 - a)) & 1);
      strings.push_back(std::move(x));
    }
  }
  for (const auto& x : strings) {
    const double cov = expectation(s, MeasurementOp(c.lines, x));
    const double den = born_probability(rho, c.lines, x);
    add({{"name", "probability"}, {"x", bits(x)}, {"covariance", cov}, {"dense", den}}, std::abs(cov - den));
  }

  json doc = result("oracle-verify");
  doc["n"] = c.n;
  doc["lines"] = c.lines;
  doc["tol"] = tol;
  doc["checkpoints"] = checkpoints;
  doc["max_deviation"] = worst;
  doc["pass"] = worst < tol;
  return {doc, worst < tol ? kOk : kNegative};
}

void emit(const Outcome& r, const Options& o) {
  const std::string text = io::dump(r.doc);
  if (o.out.empty()) {
    std::cout << text;
    return;
  }
  std::ofstream f(o.out, std::ios::binary);
  if (!f || !(f << text)) throw io::ParseError(o.out + ": cannot write output");
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Displaced fermionic Gaussian circuit simulator"};
  app.require_subcommand(1);
  Options o;

  auto* run_cmd = app.add_subcommand("run", "Simulate a circuit file");
  run_cmd->add_option("circuit", o.input, "dgsim.circuit/1 document")->required();
  run_cmd->add_option("--shots", o.shots, "Override the shot count (switches to sampling)");
  run_cmd->add_option("--seed", o.seed, "Override the sampling seed");

  auto* compile_cmd = app.add_subcommand("compile", "Compile a hamiltonian into gates");
  compile_cmd->add_option("hamiltonian", o.input, "dgsim.hamiltonian/1 document")->required();

  auto* embed_cmd = app.add_subcommand("embed", "Even embedding of a state");
  embed_cmd->add_option("input", o.input, "state, circuit or dense document")->required();

  auto* ts_cmd = app.add_subcommand("test-state", "Gaussianity test for a pure state");
  ts_cmd->add_option("input", o.input, "dense, state or circuit document")->required();
  ts_cmd->add_option("--tol", o.tol, "Verdict threshold on 1 - overlap");
  ts_cmd->add_flag("--displaced", o.displaced, "Run the displaced test even on even input");

  auto* tu_cmd = app.add_subcommand("test-unitary", "Gaussianity test for a unitary");
  tu_cmd->add_option("input", o.input, "dense, gates or hamiltonian document")->required();
  tu_cmd->add_option("--tol", o.tol, "Verdict threshold on the Wick deviation");
  tu_cmd->add_flag("--displaced", o.displaced, "Run the displaced test even on even input");

  auto* ov_cmd = app.add_subcommand("oracle-verify", "Compare the covariance and dense paths");
  ov_cmd->add_option("circuit", o.input, "dgsim.circuit/1 document")->required();
  ov_cmd->add_option("--n-max", o.n_max, "Largest qubit count to accept");
  ov_cmd->add_option("--tol", o.tol, "Deviation threshold");
  ov_cmd->add_option("--corrupt-gate", o.corrupt_gate, "Perturb this gate's angle on the dense path (0-based)");

  auto* version_cmd = app.add_subcommand("version", "Print the version");

  for (auto* sub : {run_cmd, compile_cmd, embed_cmd, ts_cmd, tu_cmd, ov_cmd}) {
    sub->add_option("--out", o.out, "Write the result here instead of stdout");
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kParse;
  }

  try {
    Outcome r;
    if (*version_cmd) {
      std::cout << "dgsim " << kVersion << "\n";
      return kOk;
    }
    if (*run_cmd) r = cmd_run(o);
    else if (*compile_cmd) r = cmd_compile(o);
    else if (*embed_cmd) r = cmd_embed(o);
    else if (*ts_cmd) r = cmd_test_state(o);
    else if (*tu_cmd) r = cmd_test_unitary(o);
    else r = cmd_oracle_verify(o);
    emit(r, o);
    return r.code;
  } catch (const io::ParseError& e) {
    std::cerr << "parse error: " << e.what() << "\n";
    return kParse;
  } catch (const DimensionError& e) {
    std::cerr << "parse error: " << e.what() << "\n";
    return kParse;
  } catch (const IndexError& e) {
    std::cerr << "parse error: " << e.what() << "\n";
    return kParse;
  } catch (const SizeLimitError& e) {
    std::cerr << "size limit: " << e.what() << "\n";
    return kCap;
  } catch (const BudgetError& e) {
    std::cerr << "size limit: " << e.what() << "\n";
    return kCap;
  } catch (const std::exception& e) {
    std::cerr << "numerical error: " << e.what() << "\n";
    return kNumeric;
  }
}
