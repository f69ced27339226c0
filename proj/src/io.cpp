#include "dgsim/io.hpp"

#include <fstream>
#include <initializer_list>
#include <sstream>

namespace dgsim::io {

namespace {

template <class... F>
struct overloaded : F... {
  using F::operator()...;
};

[[noreturn]] void fail(const std::string& where, const std::string& msg) {
  throw ParseError((where.empty() ? std::string("/") : where) + ": " + msg);
}

void expect_object(const json& j, const std::string& where) {
  if (!j.is_object()) fail(where, "expected an object");
}

void allow_only(const json& j, const std::string& where, std::initializer_list<const char*> keys) {
  expect_object(j, where);
  for (const auto& [key, value] : j.items()) {
    bool known = false;
    for (const char* k : keys) known = known || key == k;
    if (!known) fail(where + "/" + key, "unknown field '" + key + "'");
  }
}

const json& field(const json& j, const char* key, const std::string& where) {
  auto it = j.find(key);
  if (it == j.end()) fail(where, std::string("missing field '") + key + "'");
  return *it;
}

void expect_schema(const json& doc, const char* schema) {
  expect_object(doc, "");
  const json& s = field(doc, "schema", "");
  if (!s.is_string() || s.get<std::string>() != schema) {
    fail("/schema", std::string("expected \"") + schema + "\"");
  }
}

long long as_int(const json& j, const std::string& where) {
  if (!j.is_number_integer()) fail(where, "expected an integer");
  return j.get<long long>();
}

double as_double(const json& j, const std::string& where) {
  if (!j.is_number()) fail(where, "expected a number");
  return j.get<double>();
}

std::vector<double> as_doubles(const json& j, const std::string& where, std::size_t size) {
  if (!j.is_array()) fail(where, "expected an array of numbers");
  if (j.size() != size) {
    std::ostringstream os;
    os << "expected " << size << " entries, got " << j.size();
    fail(where, os.str());
  }
  std::vector<double> out;
  out.reserve(size);
  for (std::size_t a = 0; a < j.size(); ++a) out.push_back(as_double(j[a], where + "/" + std::to_string(a)));
  return out;
}

std::vector<int> as_ints(const json& j, const std::string& where) {
  if (!j.is_array()) fail(where, "expected an array of integers");
  std::vector<int> out;
  for (std::size_t a = 0; a < j.size(); ++a) out.push_back(static_cast<int>(as_int(j[a], where + "/" + std::to_string(a))));
  return out;
}

int qubit_count(const json& doc, const std::string& where) {
  const long long n = as_int(field(doc, "n", where), where + "/n");
  if (n < 1 || n > 100000) fail(where + "/n", "qubit count must be a positive integer");
  return static_cast<int>(n);
}

Mat square(const std::vector<double>& flat, Eigen::Index dim) {
  Mat m(dim, dim);
  for (Eigen::Index r = 0; r < dim; ++r)
    for (Eigen::Index c = 0; c < dim; ++c) m(r, c) = flat[static_cast<std::size_t>(r * dim + c)];
  return m;
}

AntisymMat antisym_field(const json& j, const std::string& where, Eigen::Index dim) {
  const Mat m = square(as_doubles(j, where, static_cast<std::size_t>(dim * dim)), dim);
  const double scale = std::max(1.0, m.cwiseAbs().maxCoeff());
  if (dim > 0 && (m + m.transpose()).cwiseAbs().maxCoeff() > 1e-12 * scale) fail(where, "matrix is not antisymmetric");
  return AntisymMat(m);
}

Vec vec_field(const json& j, const std::string& where, Eigen::Index size) {
  const auto v = as_doubles(j, where, static_cast<std::size_t>(size));
  return Eigen::Map<const Vec>(v.data(), size);
}

json flat(const Mat& m) {
  json out = json::array();
  for (Eigen::Index r = 0; r < m.rows(); ++r)
    for (Eigen::Index c = 0; c < m.cols(); ++c) out.push_back(m(r, c));
  return out;
}

json flat(const Vec& v) {
  json out = json::array();
  for (Eigen::Index a = 0; a < v.size(); ++a) out.push_back(v(a));
  return out;
}

DGaussState covariance_input(const json& j, int n, const std::string& where) {
  allow_only(j, where, {"M", "mu"});
  const AntisymMat m = antisym_field(field(j, "M", where), where + "/M", 2 * n);
  const Vec mu = vec_field(field(j, "mu", where), where + "/mu", 2 * n);
  return DGaussState(m, mu);
}

json covariance_json(const DGaussState& s) { return {{"M", flat(s.M())}, {"mu", flat(s.mu())}}; }

std::vector<int> bitstring(const json& j, const std::string& where) {
  std::vector<int> bits;
  if (j.is_string()) {
    for (char c : j.get<std::string>()) {
      if (c != '0' && c != '1') fail(where, "bitstring must contain only 0 and 1");
      bits.push_back(c - '0');
    }
    return bits;
  }
  bits = as_ints(j, where);
  for (int b : bits)
    if (b != 0 && b != 1) fail(where, "bits must be 0 or 1");
  return bits;
}

}  // namespace

json parse_text(std::string_view text, const std::string& source) {
  try {
    return json::parse(text.begin(), text.end());
  } catch (const json::parse_error& e) {
    std::size_t line = 1, col = 1;
    const std::size_t stop = std::min<std::size_t>(e.byte > 0 ? e.byte - 1 : 0, text.size());
    for (std::size_t a = 0; a < stop; ++a) {
      if (text[a] == '\n') {
        ++line;
        col = 1;
      } else {
        ++col;
      }
    }
    std::ostringstream os;
    os << source << ":" << line << ":" << col << ": invalid JSON";
    throw ParseError(os.str());
  }
}

json load_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ParseError(path + ": cannot open file");
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_text(buf.str(), path);
}

std::string dump(const json& doc) { return doc.dump(2) + "\n"; }

std::string schema_of(const json& doc) {
  if (!doc.is_object()) throw ParseError("/: expected an object");
  auto it = doc.find("schema");
  if (it == doc.end() || !it->is_string()) throw ParseError("/: missing field 'schema'");
  return it->get<std::string>();
}

DGaussState parse_state(const json& doc) {
  expect_schema(doc, kStateSchema);
  const int n = qubit_count(doc, "");
  if (doc.contains("lambdas")) {
    allow_only(doc, "", {"schema", "n", "lambdas"});
    const auto l = as_doubles(doc["lambdas"], "/lambdas", static_cast<std::size_t>(n));
    for (std::size_t a = 0; a < l.size(); ++a)
      if (!(std::abs(l[a]) <= 1.0)) fail("/lambdas/" + std::to_string(a), "diagonal entries must lie in [-1, 1]");
    return from_diagonal(DiagonalSpec(l));
  }
  allow_only(doc, "", {"schema", "n", "M", "mu"});
  json cov = {{"M", field(doc, "M", "")}, {"mu", field(doc, "mu", "")}};
  return covariance_input(cov, n, "");
}

json to_json(const DGaussState& s) {
  return {{"schema", kStateSchema}, {"n", s.n()}, {"M", flat(s.M())}, {"mu", flat(s.mu())}};
}

Hamiltonian parse_hamiltonian(const json& doc) {
  expect_schema(doc, kHamiltonianSchema);
  allow_only(doc, "", {"schema", "n", "h", "d"});
  const int n = qubit_count(doc, "");
  return {antisym_field(field(doc, "h", ""), "/h", 2 * n), vec_field(field(doc, "d", ""), "/d", 2 * n)};
}

json to_json(const Hamiltonian& h) {
  return {{"schema", kHamiltonianSchema}, {"n", h.h.dim() / 2}, {"h", flat(h.h.mat())}, {"d", flat(h.d)}};
}

Gate parse_gate(const json& g, int n, const std::string& where) {
  expect_object(g, where);
  const json& kind_j = field(g, "kind", where);
  if (!kind_j.is_string()) fail(where + "/kind", "expected a string");
  const std::string kind = kind_j.get<std::string>();
  Gate out;
  if (kind == "matchgate" || kind == "line1") {
    allow_only(g, where, {"kind", "j", "k", "angle"});
    const int j = static_cast<int>(as_int(field(g, "j", where), where + "/j"));
    const int k = static_cast<int>(as_int(field(g, "k", where), where + "/k"));
    const double angle = as_double(field(g, "angle", where), where + "/angle");
    if (j == k) fail(where, "plane axes must differ");
    if (kind == "matchgate") out = Matchgate{PlaneRotation(j, k, angle)};
    else out = Line1Gate{PlaneRotation(j, k, angle)};
  } else if (kind == "fswap") {
    allow_only(g, where, {"kind", "line"});
    out = FSwap{static_cast<int>(as_int(field(g, "line", where), where + "/line"))};
  } else if (kind == "rx" || kind == "ry" || kind == "rz") {
    allow_only(g, where, {"kind", "angle"});
    out = line1_rotation(kind[1], as_double(field(g, "angle", where), where + "/angle"), n);
  } else {
    fail(where + "/kind", "unknown gate kind '" + kind + "'");
  }
  try {
    check_gate(out, n);
  } catch (const IndexError& e) {
    fail(where, e.what());
  }
  return out;
}

json to_json(const Gate& g) {
  return std::visit(overloaded{
                        [](const Matchgate& m) -> json {
                          return {{"kind", "matchgate"}, {"j", m.plane.j}, {"k", m.plane.k}, {"angle", m.plane.angle}};
                        },
                        [](const Line1Gate& l) -> json {
                          return {{"kind", "line1"}, {"j", l.plane.j}, {"k", l.plane.k}, {"angle", l.plane.angle}};
                        },
                        [](const FSwap& f) -> json { return {{"kind", "fswap"}, {"line", f.line}}; },
                    },
                    g);
}

namespace {

std::vector<Gate> gate_list(const json& j, int n, const std::string& where) {
  if (!j.is_array()) fail(where, "expected an array of gates");
  std::vector<Gate> out;
  out.reserve(j.size());
  for (std::size_t a = 0; a < j.size(); ++a) out.push_back(parse_gate(j[a], n, where + "/" + std::to_string(a)));
  return out;
}

json gate_list_json(const std::vector<Gate>& gates) {
  json out = json::array();
  for (const auto& g : gates) out.push_back(to_json(g));
  return out;
}

}  // namespace

GateSequence parse_gates(const json& doc) {
  expect_schema(doc, kGatesSchema);
  allow_only(doc, "", {"schema", "n", "gates", "stats"});
  const int n = qubit_count(doc, "");
  return {n, gate_list(field(doc, "gates", ""), n, "/gates")};
}

json to_json(const GateSequence& seq) {
  return {{"schema", kGatesSchema}, {"n", seq.n}, {"gates", gate_list_json(seq.gates)}};
}

Circuit parse_circuit(const json& doc) {
  expect_schema(doc, kCircuitSchema);
  allow_only(doc, "", {"schema", "n", "input", "gates", "measure"});
  Circuit c;
  c.n = qubit_count(doc, "");

  const json& in = field(doc, "input", "");
  allow_only(in, "/input", {"lambdas", "bloch", "covariance"});
  if (in.size() != 1) fail("/input", "exactly one of lambdas, bloch, covariance is required");
  if (in.contains("lambdas")) {
    const auto l = as_doubles(in["lambdas"], "/input/lambdas", static_cast<std::size_t>(c.n));
    for (std::size_t a = 0; a < l.size(); ++a)
      if (!(std::abs(l[a]) <= 1.0)) fail("/input/lambdas/" + std::to_string(a), "diagonal entries must lie in [-1, 1]");
    c.input = DiagonalSpec(l);
  } else if (in.contains("bloch")) {
    const json& b = in["bloch"];
    if (!b.is_array() || b.size() != static_cast<std::size_t>(c.n)) fail("/input/bloch", "expected n Bloch vectors");
    ProductInput p;
    for (std::size_t a = 0; a < b.size(); ++a) {
      const auto v = as_doubles(b[a], "/input/bloch/" + std::to_string(a), 3);
      p.blochs.push_back({v[0], v[1], v[2]});
    }
    c.input = std::move(p);
  } else {
    c.input = covariance_input(in["covariance"], c.n, "/input/covariance");
  }

  if (doc.contains("gates")) c.gates = gate_list(doc["gates"], c.n, "/gates");

  const json& m = field(doc, "measure", "");
  allow_only(m, "/measure", {"lines", "x", "shots", "seed"});
  c.lines = as_ints(field(m, "lines", "/measure"), "/measure/lines");
  for (std::size_t a = 0; a < c.lines.size(); ++a) {
    const int l = c.lines[a];
    if (l < 1 || l > c.n || (a > 0 && l <= c.lines[a - 1])) {
      fail("/measure/lines/" + std::to_string(a), "lines must be strictly increasing within [1, n]");
    }
  }
  if (m.contains("x")) {
    if (m.contains("shots") || m.contains("seed")) fail("/measure", "x cannot be combined with shots or seed");
    auto x = bitstring(m["x"], "/measure/x");
    if (x.size() != c.lines.size()) fail("/measure/x", "bitstring length must match lines");
    c.mode = ExpectationMode{std::move(x)};
  } else if (m.contains("shots")) {
    SampleMode s;
    s.shots = as_int(m["shots"], "/measure/shots");
    if (s.shots < 1) fail("/measure/shots", "shots must be at least 1");
    if (m.contains("seed")) {
      const json& seed = m["seed"];
      if (!seed.is_number_unsigned() && !(seed.is_number_integer() && seed.get<long long>() >= 0)) {
        fail("/measure/seed", "seed must be a nonnegative integer");
      }
      s.seed = seed.get<std::uint64_t>();
    }
    c.mode = s;
  } else {
    fail("/measure", "either x or shots is required");
  }
  return c;
}

json to_json(const Circuit& c) {
  json in = std::visit(overloaded{
                           [](const DiagonalSpec& d) -> json { return {{"lambdas", d.lambdas()}}; },
                           [](const ProductInput& p) -> json {
                             json b = json::array();
                             for (const auto& r : p.blochs) b.push_back({r[0], r[1], r[2]});
                             return {{"bloch", b}};
                           },
                           [](const DGaussState& s) -> json { return {{"covariance", covariance_json(s)}}; },
                       },
                       c.input);
  json m = {{"lines", c.lines}};
  std::visit(overloaded{
                 [&](const ExpectationMode& e) {
                   std::string x;
                   for (int b : e.x) x += static_cast<char>('0' + b);
                   m["x"] = x;
                 },
                 [&](const SampleMode& s) {
                   m["shots"] = s.shots;
                   m["seed"] = s.seed;
                 },
             },
             c.mode);
  return {{"schema", kCircuitSchema}, {"n", c.n}, {"input", in}, {"gates", gate_list_json(c.gates)}, {"measure", m}};
}

DenseOp parse_dense(const json& doc) {
  expect_schema(doc, kDenseSchema);
  allow_only(doc, "", {"schema", "n", "kind", "re", "im"});
  const int n = qubit_count(doc, "");
  require_oracle_size(n, kDenseMaxQubits, "dense input");
  const json& kind_j = field(doc, "kind", "");
  const std::string kind = kind_j.is_string() ? kind_j.get<std::string>() : "";
  if (kind != "vector" && kind != "matrix") fail("/kind", "expected \"vector\" or \"matrix\"");
  const std::size_t dim = std::size_t{1} << n;
  const std::size_t size = kind == "vector" ? dim : dim * dim;
  const auto re = as_doubles(field(doc, "re", ""), "/re", size);
  const auto im = doc.contains("im") ? as_doubles(doc["im"], "/im", size) : std::vector<double>(size, 0.0);
  if (kind == "vector") {
    Eigen::VectorXcd v(static_cast<Eigen::Index>(dim));
    for (std::size_t a = 0; a < dim; ++a) v(static_cast<Eigen::Index>(a)) = cplx(re[a], im[a]);
    if (v.norm() < 1e-12) fail("/re", "state vector is zero");
    return DenseOp::from_vector(n, v.normalized());
  }
  CMat m(static_cast<Eigen::Index>(dim), static_cast<Eigen::Index>(dim));
  for (std::size_t r = 0; r < dim; ++r)
    for (std::size_t c = 0; c < dim; ++c) m(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(c)) = cplx(re[r * dim + c], im[r * dim + c]);
  return DenseOp(n, std::move(m));
}

json to_json(const DenseOp& op) {
  json re = json::array(), im = json::array();
  const CMat& m = op.mat();
  for (Eigen::Index r = 0; r < m.rows(); ++r) {
    for (Eigen::Index c = 0; c < m.cols(); ++c) {
      re.push_back(m(r, c).real());
      im.push_back(m(r, c).imag());
    }
  }
  return {{"schema", kDenseSchema}, {"n", op.n()}, {"kind", "matrix"}, {"re", re}, {"im", im}};
}

}  // namespace dgsim::io
