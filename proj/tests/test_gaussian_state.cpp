#include <gtest/gtest.h>

#include "dgsim/dense.hpp"
#include "dgsim/error.hpp"
#include "dgsim/gaussian_state.hpp"
#include "support.hpp"

using namespace dgsim;
using dgsim::testing::Gen;
using dgsim::testing::dense_diagonal;
using dgsim::testing::max_diff;
using dgsim::testing::random_pair;

namespace {

Mat canonical_ext(const std::vector<double>& l) {
  const auto dim = static_cast<Eigen::Index>(2 * l.size() + 1);
  Mat c = Mat::Zero(dim, dim);
  for (std::size_t j = 0; j < l.size(); ++j) {
    c(2 * j, 2 * j + 1) = -l[j];
    c(2 * j + 1, 2 * j) = l[j];
  }
  return c;
}

}  // namespace

TEST(FromDiagonal, BasisAndMixedStates) {
  const DGaussState mixed = from_diagonal(DiagonalSpec({0, 0, 0}));
  EXPECT_EQ(mixed.extended().cwiseAbs().maxCoeff(), 0.0);
  EXPECT_LT(max_abs_diff(dense(mixed), DenseOp::identity(3) * 0.125), 1e-14);
  const DenseOp zero = dense(from_diagonal(DiagonalSpec({1, 1})));
  EXPECT_NEAR(zero.mat()(0, 0).real(), 1.0, 1e-14);
  const DenseOp zo = dense(from_diagonal(DiagonalSpec({1, -1})));
  EXPECT_NEAR(zo.mat()(1, 1).real(), 1.0, 1e-14);
  EXPECT_NEAR(zo.mat().cwiseAbs().sum(), 1.0, 1e-14);
  EXPECT_THROW(DiagonalSpec({1.2}), PreconditionError);
}

TEST(FromDiagonal, CovarianceMatchesDenseProduct) {
  Gen g(41);
  for (int n = 1; n <= 4; ++n) {
    const auto l = g.lambdas(n);
    EXPECT_LT(max_diff(extended_covariance(dense_diagonal(l)), from_diagonal(DiagonalSpec(l)).extended()), 1e-14);
  }
}

TEST(Wick, TrivialMoments) {
  Gen g(42);
  const DGaussState s = g.state(3);
  EXPECT_EQ(wick_moment(s, std::vector<int>{}), cplx(1.0));
  for (int j = 1; j <= 6; ++j) {
    const cplx m = wick_moment(s, std::vector<int>{j});
    EXPECT_NEAR(m.real(), s.mu()(j - 1), 1e-15);
    EXPECT_NEAR(m.imag(), 0.0, 1e-15);
  }
  EXPECT_THROW(wick_moment(s, std::vector<int>{2, 1}), IndexError);
  EXPECT_THROW(wick_moment(s, std::vector<int>{7}), IndexError);
}

TEST(Wick, AllMomentsMatchIndependentDenseState) {
  Gen g(43);
  for (int rep = 0; rep < 50; ++rep) {
    const int n = 1 + rep % 3;
    const auto p = random_pair(g, n, rep % 5 == 0);
    const auto table = moments(p.rho);
    double worst = 0.0;
    for (SubsetMask m = 0; m < table.values().size(); ++m) {
      worst = std::max(worst, std::abs(table[m] - wick_moment(p.state, subset_indices(m))));
    }
    EXPECT_LT(worst, 1e-8) << "rep " << rep;
  }
}

TEST(Validate, SmallCases) {
  EXPECT_TRUE(validate(AntisymMat::zero(5)).valid);
  const auto basis = validate(AntisymMat(canonical_ext({1, -1})));
  EXPECT_TRUE(basis.valid);
  EXPECT_TRUE(basis.pure);
  EXPECT_EQ(basis.rank, 4);
  EXPECT_FALSE(validate(AntisymMat(canonical_ext({1.5, 0.2}))).valid);
  EXPECT_FALSE(validate(AntisymMat(canonical_ext({0.5, 0.2}))).pure);
  const CMat complex_form = cplx(0, 1) * canonical_ext({0.3}).cast<cplx>();
  EXPECT_TRUE(validate(complex_form).valid);
  EXPECT_THROW(validate(CMat(canonical_ext({0.3}).cast<cplx>())), DimensionError);
}

TEST(Validate, AgreesWithDensePositivity) {
  Gen g(44);
  for (int rep = 0; rep < 200; ++rep) {
    const int n = 1 + rep % 3;
    std::vector<double> l(n);
    for (auto& x : l) x = g.uniform(0.0, 1.25);
    const Rotation q = g.rotation(2 * n + 1);
    const Mat mt = q.mat().transpose() * canonical_ext(l) * q.mat();
    const bool valid = validate(AntisymMat(mt, 1e-10)).valid;
    const DenseOp rho = dense(DGaussState::trusted(0.5 * (mt - mt.transpose())));
    Eigen::SelfAdjointEigenSolver<CMat> es(rho.mat(), Eigen::EigenvaluesOnly);
    const bool psd = es.eigenvalues().minCoeff() >= -1e-9;
    EXPECT_EQ(valid, psd) << "rep " << rep;
  }
}

TEST(State, ConstructorRejectsInadmissible) {
  Mat m = Mat::Zero(2, 2);
  m(0, 1) = -1.5;
  m(1, 0) = 1.5;
  EXPECT_THROW(DGaussState(AntisymMat(m), Vec::Zero(2)), PreconditionError);
  EXPECT_THROW(DGaussState(AntisymMat::zero(2), Vec::Zero(3)), DimensionError);
  Vec mu(2);
  mu << 0.6, 0.8;
  EXPECT_NO_THROW(DGaussState(AntisymMat::zero(2), mu));
  EXPECT_FALSE(DGaussState(AntisymMat::zero(2), mu).is_even());
}

TEST(StateCanonicalForm, BlocksAreNonnegative) {
  Gen g(45);
  for (int n = 1; n <= 5; ++n) {
    const DGaussState s = g.state(n);
    const auto cf = state_canonical_form(s.extended());
    const Mat c = cf.R.mat() * s.extended() * cf.R.mat().transpose();
    std::vector<double> l = cf.lambdas;
    for (double x : l) EXPECT_GE(x, -1e-12);
    EXPECT_LT(max_diff(c, canonical_ext(l)), 1e-9);
    EXPECT_NEAR(cf.R.mat().determinant(), 1.0, 1e-10);
  }
}

TEST(Thermal, ClosedForms) {
  EXPECT_EQ(from_thermal(AntisymMat::zero(4), Vec::Zero(4)).extended().cwiseAbs().maxCoeff(), 0.0);
  const double beta = 0.8;
  Mat h(2, 2);
  h << 0, beta, -beta, 0;
  const DenseOp rho = dense(from_thermal(AntisymMat(h), Vec::Zero(2)));
  const double l = std::tanh(beta);
  EXPECT_NEAR(rho.mat()(0, 0).real(), (1 + l) / 2, 1e-12);
  EXPECT_NEAR(rho.mat()(1, 1).real(), (1 - l) / 2, 1e-12);
}

TEST(Thermal, MatchesDenseGibbsState) {
  Gen g(46);
  for (int rep = 0; rep < 10; ++rep) {
    const int n = 1 + rep % 3;
    const AntisymMat h = g.antisym(2 * n, 0.5);
    const Vec d = 0.5 * g.vector(2 * n);
    const DenseOp gibbs = dgsim::testing::dense_thermal(n, h, d);
    EXPECT_LT(max_diff(extended_covariance(gibbs), from_thermal(h, d).extended()), 1e-8);
  }
}

TEST(Thermal, RoundTripAndSaturation) {
  const auto zero = to_thermal(from_diagonal(DiagonalSpec({0, 0})));
  ASSERT_TRUE(std::holds_alternative<ThermalGenerator>(zero));
  EXPECT_LT(std::get<ThermalGenerator>(zero).h.mat().cwiseAbs().maxCoeff(), 1e-15);

  Gen g(47);
  for (int rep = 0; rep < 20; ++rep) {
    const int n = 1 + rep % 4;
    std::vector<double> l(n);
    for (auto& x : l) x = g.uniform(-0.95, 0.95);
    const DGaussState s = conjugate_state(g.unitary(n), from_diagonal(DiagonalSpec(l)));
    const auto t = to_thermal(s);
    ASSERT_TRUE(std::holds_alternative<ThermalGenerator>(t));
    const auto& gen = std::get<ThermalGenerator>(t);
    EXPECT_LT(max_diff(from_thermal(gen.h, gen.d).extended(), s.extended()), 1e-8);
  }

  const auto pure = to_thermal(g.state(3, true));
  ASSERT_TRUE(std::holds_alternative<Saturation>(pure));
  EXPECT_EQ(std::get<Saturation>(pure).modes, (std::vector<int>{1, 2, 3}));
}

TEST(Purity, ClosedFormsAndDenseValue) {
  EXPECT_NEAR(purity(from_diagonal(DiagonalSpec({1, -1, 1}))), 1.0, 1e-14);
  EXPECT_NEAR(purity(from_diagonal(DiagonalSpec({0, 0, 0}))), 0.125, 1e-14);
  Gen g(48);
  for (int rep = 0; rep < 20; ++rep) {
    const auto p = random_pair(g, 1 + rep % 4);
    EXPECT_NEAR(purity(p.state), dense_purity(p.rho), 1e-8);
  }
}

TEST(Dense, OutputIsAState) {
  Gen g(49);
  for (int n = 1; n <= 4; ++n) EXPECT_NO_THROW(require_state(dense(g.state(n)), "dense"));
}
