#include <pybind11/complex.h>
#include <pybind11/eigen.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "dgsim/dense.hpp"
#include "dgsim/embedding.hpp"
#include "dgsim/io.hpp"

namespace py = pybind11;
using namespace dgsim;

namespace {

int qubits_of(Eigen::Index dim) {
  int n = 0;
  while ((Eigen::Index{1} << n) < dim) ++n;
  if ((Eigen::Index{1} << n) != dim || n == 0) throw DimensionError("dense operand size must be a power of two");
  return n;
}

// a 1-d array is a state vector, a 2-d one a density matrix or unitary
DenseOp dense_operand(const py::array& a) {
  if (a.ndim() == 1) {
    const auto v = a.cast<Eigen::VectorXcd>();
    return DenseOp::from_vector(qubits_of(v.size()), v / v.norm());
  }
  const auto m = a.cast<CMat>();
  if (m.rows() != m.cols()) throw DimensionError("dense operand must be square");
  return DenseOp(qubits_of(m.rows()), m);
}

DGaussState state_of(const Mat& mt) { return DGaussState::from_extended(AntisymMat(mt, 1e-9)); }

std::string run_json(const std::string& text) {
  const Circuit c = io::parse_circuit(io::parse_text(text, "<string>"));
  const DGaussState s = run(c);
  io::json doc = {{"n", c.n}, {"lines", c.lines}, {"M", io::to_json(s)["M"]}, {"mu", io::to_json(s)["mu"]}};
  if (const auto* e = std::get_if<ExpectationMode>(&c.mode)) {
    doc["value"] = expectation(s, MeasurementOp(c.lines, e->x));
  } else {
    const auto& m = std::get<SampleMode>(c.mode);
    doc["samples"] = sample(s, c.lines, m.shots, m.seed);
  }
  return doc.dump();
}

}  // namespace

PYBIND11_MODULE(_dgsim, m) {
  m.doc() = "Displaced fermionic Gaussian states: covariance simulator and dense checks";

  py::register_exception<Error>(m, "Error");

  m.def("pfaffian", [](const Mat& a) { return pfaffian(AntisymMat(a, 1e-9)); }, py::arg("a"));

  m.def("from_diagonal", [](const std::vector<double>& l) { return from_diagonal(DiagonalSpec(l)).extended(); },
        py::arg("lambdas"), "extended covariance M̃ of ⊗ (1 + λ_j Z)/2");
  m.def("wick_moment", [](const Mat& mt, const std::vector<int>& J) { return wick_moment(state_of(mt), J); },
        py::arg("mt"), py::arg("J"), "Tr(γ_J† ρ) from the extended covariance");
  m.def("dense", [](const Mat& mt) { return dense(state_of(mt)).mat(); }, py::arg("mt"));
  m.def("extended_covariance", [](const py::array& rho) { return extended_covariance(dense_operand(rho)); },
        py::arg("rho"));

  m.def("evolve",
        [](const Mat& mt, const Mat& rotation) {
          return conjugate_state(DGUnitary::from_rotation(Rotation(rotation, 1e-9)), state_of(mt)).extended();
        },
        py::arg("mt"), py::arg("rotation"), "R M̃ Rᵀ");
  m.def("rotation", [](const Mat& h, const Vec& d) { return DGUnitary(AntisymMat(h, 1e-9), d).rotation().mat(); },
        py::arg("h"), py::arg("d"), "rotation of exp(½γᵀhγ + i dᵀγ)");
  m.def("expectation",
        [](const Mat& mt, const std::vector<int>& lines, const std::vector<int>& x) {
          return expectation(state_of(mt), MeasurementOp(lines, x));
        },
        py::arg("mt"), py::arg("lines"), py::arg("x"));
  m.def("sample",
        [](const Mat& mt, const std::vector<int>& lines, std::int64_t shots, std::uint64_t seed) {
          return sample(state_of(mt), lines, shots, seed);
        },
        py::arg("mt"), py::arg("lines"), py::arg("shots"), py::arg("seed") = 0);

  m.def("_run", &run_json, py::arg("circuit"));
  m.def("_compile", [](const Mat& r) { return io::to_json(compile(Rotation(r, 1e-9))).dump(); }, py::arg("rotation"));
  m.def("sequence_rotation", [](const std::string& text) {
    return sequence_rotation(io::parse_gates(io::parse_text(text, "<string>")));
  });

  m.def("embed", [](const Mat& mt) { return embedded_covariance(state_of(mt)); }, py::arg("mt"),
        "second moments of the even embedding");
  m.def("embed_dense", [](const py::array& rho) { return embed_dense(dense_operand(rho)).mat(); }, py::arg("rho"));

  m.def("gaussian_state_test",
        [](const py::array& psi) {
          const auto t = gaussian_state_test(dense_operand(psi));
          return py::make_tuple(t.overlap, t.gaussian);
        },
        py::arg("psi"));
  m.def("displaced_state_test",
        [](const py::array& psi) {
          const auto t = displaced_state_test(dense_operand(psi));
          return py::make_tuple(t.overlap, t.gaussian);
        },
        py::arg("psi"));
  m.def("gaussian_unitary_test",
        [](const py::array& u) {
          const auto t = gaussian_unitary_test(dense_operand(u));
          return py::make_tuple(t.deviation, t.gaussian);
        },
        py::arg("u"));
  m.def("displaced_unitary_test",
        [](const py::array& u) {
          const auto t = displaced_unitary_test(dense_operand(u));
          return py::make_tuple(t.deviation, t.gaussian);
        },
        py::arg("u"));
}
