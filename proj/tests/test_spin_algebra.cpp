#include <gtest/gtest.h>

#include <cmath>
#include <limits>

#include <Eigen/Eigenvalues>

#include "aklt/errors.hpp"
#include "aklt/spin_algebra.hpp"

namespace aklt {
namespace {

constexpr double kTol = 1e-12;
const double kA2Grid[] = {1.0, 1.5, 2.0, 3.0, 5.0, 6.46, 10.0};

SpinOperator projector(const SpinState& v) { return v * v.adjoint(); }

// Closed-form S_b = +-3/2 eigenvectors, checked against the spin matrices below.
SpinState closed_form_extremal(Axis axis, int sign) {
  const double r3 = std::sqrt(3.0);
  const cplx i(0, 1);
  SpinState v;
  if (axis == Axis::z) {
    v.setZero();
    v(sign > 0 ? 0 : 3) = 1.0;
    return v;
  }
  if (axis == Axis::x) {
    v << 1.0, sign * r3, r3, sign * 1.0;
  } else {
    v << 1.0, double(sign) * i * r3, -r3, -double(sign) * i;
  }
  return v / (2.0 * std::sqrt(2.0));
}

TEST(SpinComponent, ZIsDiagonal) {
  SpinOperator expected = SpinOperator::Zero();
  expected.diagonal() << 1.5, 0.5, -0.5, -1.5;
  EXPECT_LT((spin_component(Axis::z) - expected).norm(), kTol);
}

TEST(SpinComponent, SpectrumOfEveryAxis) {
  for (Axis b : kAxes) {
    Eigen::SelfAdjointEigenSolver<SpinOperator> es(spin_component(b));
    const Eigen::Vector4d ev = es.eigenvalues();
    EXPECT_NEAR(ev(0), -1.5, kTol);
    EXPECT_NEAR(ev(1), -0.5, kTol);
    EXPECT_NEAR(ev(2), 0.5, kTol);
    EXPECT_NEAR(ev(3), 1.5, kTol);
    EXPECT_LT((spin_component(b) - spin_component(b).adjoint()).norm(), kTol);
  }
}

TEST(SpinComponent, AngularMomentumAlgebra) {
  const cplx i(0, 1);
  const SpinOperator sx = spin_component(Axis::x), sy = spin_component(Axis::y), sz = spin_component(Axis::z);
  EXPECT_LT((commutator(sx, sy) - i * sz).norm(), kTol);
  EXPECT_LT((commutator(sy, sz) - i * sx).norm(), kTol);
  EXPECT_LT((commutator(sz, sx) - i * sy).norm(), kTol);
  EXPECT_LT((sx * sx + sy * sy + sz * sz - 3.75 * SpinOperator::Identity()).norm(), kTol);
}

TEST(SpinEigenstate, ClosedFormOracleIsValid) {
  for (Axis b : kAxes) {
    for (int sign : {+1, -1}) {
      const SpinState v = closed_form_extremal(b, sign);
      EXPECT_NEAR(v.norm(), 1.0, kTol);
      EXPECT_LT((spin_component(b) * v - 1.5 * sign * v).norm(), kTol);
    }
  }
}

TEST(SpinEigenstate, PhaseConventionAndDeterminism) {
  for (Axis b : kAxes) {
    for (double m : {1.5, 0.5, -0.5, -1.5}) {
      const SpinState v = spin_eigenstate(b, m);
      EXPECT_LT((spin_component(b) * v - m * v).norm(), kTol);
      const double top = v.cwiseAbs().maxCoeff();
      int k = 0;
      while (std::abs(v(k)) < top - 1e-9) ++k;
      EXPECT_GT(v(k).real(), 0.0);
      EXPECT_NEAR(v(k).imag(), 0.0, kTol);
      const SpinState again = spin_eigenstate(b, m);
      EXPECT_EQ(v, again);
    }
  }
}

TEST(FilterUndeformed, MatchesClosedFormProjector) {
  for (Axis b : kAxes) {
    const SpinOperator expected =
        std::sqrt(2.0 / 3.0) * (projector(closed_form_extremal(b, +1)) + projector(closed_form_extremal(b, -1)));
    EXPECT_LT((filter_undeformed(b) - expected).norm(), kTol);
  }
}

TEST(FilterUndeformed, ZInItsOwnBasis) {
  SpinOperator expected = SpinOperator::Zero();
  expected(0, 0) = expected(3, 3) = std::sqrt(2.0 / 3.0);
  EXPECT_LT((filter_undeformed(Axis::z) - expected).norm(), kTol);
}

TEST(FilterUndeformed, CompletenessAndRank) {
  std::array<SpinOperator, 3> f{filter_undeformed(Axis::x), filter_undeformed(Axis::y), filter_undeformed(Axis::z)};
  EXPECT_LT(completeness_residual(f), kTol);
  for (const auto& op : f) {
    Eigen::SelfAdjointEigenSolver<SpinOperator> es(op.adjoint() * op);
    const Eigen::Vector4d ev = es.eigenvalues();
    EXPECT_NEAR(ev(0), 0.0, kTol);
    EXPECT_NEAR(ev(1), 0.0, kTol);
    EXPECT_NEAR(ev(2), 2.0 / 3.0, kTol);
    EXPECT_NEAR(ev(3), 2.0 / 3.0, kTol);
  }
}

TEST(Deformation, SpecialValues) {
  auto diag = [](double e, double m) {
    SpinOperator d = SpinOperator::Zero();
    d.diagonal() << e, m, m, e;
    return d;
  };
  EXPECT_LT((deformation(DeformationParam(3.0)) - SpinOperator::Identity()).norm(), kTol);
  EXPECT_LT((deformation(DeformationParam(12.0)) - diag(0.5, 1.0)).norm(), kTol);
  EXPECT_LT((deformation(DeformationParam(1.0)) - diag(std::sqrt(3.0), 1.0)).norm(), kTol);
}

TEST(Deformation, DiagonalPositive) {
  for (double a2 : {0.01, 0.5, 1.0, 7.0, 1e4}) {
    const SpinOperator d = deformation(DeformationParam(a2));
    EXPECT_EQ((d - SpinOperator(d.diagonal().asDiagonal())).norm(), 0.0);
    for (int k = 0; k < 4; ++k) EXPECT_GT(d(k, k).real(), 0.0);
  }
}

TEST(DeformationParam, RejectsNonPositive) {
  EXPECT_THROW(DeformationParam(0.0), DomainError);
  EXPECT_THROW(DeformationParam(-2.0), DomainError);
  EXPECT_THROW(DeformationParam(std::nan("")), DomainError);
  EXPECT_THROW(DeformationParam(std::numeric_limits<double>::infinity()), DomainError);
}

TEST(FilterDeformed, CompletenessOnGrid) {
  for (double a2 : kA2Grid) {
    const DeformationParam a(a2);
    std::array<SpinOperator, 3> f{filter_deformed(Axis::x, a), filter_deformed(Axis::y, a),
                                  filter_deformed(Axis::z, a)};
    EXPECT_LT(completeness_residual(f), kTol) << "a2 = " << a2;
  }
  const DeformationParam a(2.5);
  std::array<SpinOperator, 3> f{filter_deformed(Axis::x, a), filter_deformed(Axis::y, a),
                                filter_deformed(Axis::z, a)};
  EXPECT_LT(completeness_residual(f), kTol);
}

TEST(FilterDeformed, ClosedFormPrefactors) {
  for (double a2 : kA2Grid) {
    const DeformationParam a(a2);
    const SpinOperator d = deformation(a);
    const double cxy = std::sqrt(4.0 / 3.0 * a2 / (1.0 + a2));
    const double cz = std::sqrt(a2) * std::sqrt((a2 - 1.0) / 6.0);
    EXPECT_LT((filter_deformed(Axis::x, a) - cxy * d * filter_undeformed(Axis::x) * d).norm(), kTol);
    EXPECT_LT((filter_deformed(Axis::y, a) - cxy * d * filter_undeformed(Axis::y) * d).norm(), kTol);
    EXPECT_LT((filter_deformed(Axis::z, a) - cz * d * filter_undeformed(Axis::z) * d).norm(), kTol);
  }
}

TEST(FilterDeformed, ZVanishesExactlyAtOne) {
  const SpinOperator fz = filter_deformed(Axis::z, DeformationParam(1.0));
  EXPECT_EQ(fz.cwiseAbs().maxCoeff(), 0.0);
}

TEST(FilterDeformed, AklTPointIsUndeformed) {
  const DeformationParam a(3.0);
  for (Axis b : kAxes) {
    const SpinOperator fd = filter_deformed(b, a), fu = filter_undeformed(b);
    const cplx overlap = (fu.adjoint() * fd).trace();
    const cplx phase = overlap / std::abs(overlap);
    EXPECT_LT((fd - phase * fu).norm(), kTol);
  }
}

TEST(FilterDeformed, RankTwoWithEqualSingularValues) {
  for (double a2 : {1.5, 2.0, 3.0, 5.0, 6.46, 10.0}) {
    for (Axis b : kAxes) {
      Eigen::JacobiSVD<SpinOperator> svd(filter_deformed(b, DeformationParam(a2)));
      const Eigen::Vector4d s = svd.singularValues();
      EXPECT_GT(s(1), 1e-6);
      EXPECT_NEAR(s(0), s(1), 1e-12);
      EXPECT_LT(s(2), kTol);
      EXPECT_LT(s(3), kTol);
    }
  }
}

TEST(FilterDeformed, PovmElementsHermitianPositive) {
  for (double a2 : kA2Grid) {
    for (Axis b : kAxes) {
      const SpinOperator e = povm_element(b, DeformationParam(a2));
      EXPECT_LT((e - e.adjoint()).norm(), kTol);
      Eigen::SelfAdjointEigenSolver<SpinOperator> es(e);
      EXPECT_GT(es.eigenvalues().minCoeff(), -kTol);
    }
  }
}

TEST(FilterDeformed, RejectsSubunit) {
  EXPECT_THROW(filter_deformed(Axis::x, DeformationParam(0.5)), DomainError);
  EXPECT_THROW(povm_element(Axis::z, DeformationParam(0.99)), DomainError);
}

TEST(ProjectiveBasis, Orthonormal) {
  const auto basis = projective_basis_a1();
  Eigen::Matrix4cd u;
  for (int k = 0; k < 4; ++k) u.col(k) = basis[k];
  EXPECT_LT((u.adjoint() * u - Eigen::Matrix4cd::Identity()).norm(), kTol);
  EXPECT_LT((u * u.adjoint() - Eigen::Matrix4cd::Identity()).norm(), kTol);
}

TEST(ProjectiveBasis, FiltersAreComplementaryProjectors) {
  const auto basis = projective_basis_a1();
  const DeformationParam one(1.0);
  const SpinOperator fx = filter_deformed(Axis::x, one), fy = filter_deformed(Axis::y, one);
  EXPECT_LT((fx - projector(basis[0]) - projector(basis[1])).norm(), kTol);
  EXPECT_LT((fy - projector(basis[2]) - projector(basis[3])).norm(), kTol);
  EXPECT_LT((fx * fx - fx).norm(), kTol);
  EXPECT_LT((fy * fy - fy).norm(), kTol);
  EXPECT_LT((fx * fy).norm(), kTol);
  EXPECT_LT((fx * basis[0] - basis[0]).norm(), kTol);
  EXPECT_LT((fx * basis[2]).norm(), kTol);
}

TEST(SubunitOperators, Completeness) {
  for (double a2 : {0.01, 0.25, 0.5, 0.75, 0.999}) {
    EXPECT_LT(completeness_residual(subunit_operators(DeformationParam(a2))), kTol) << "a2 = " << a2;
  }
}

TEST(SubunitOperators, EOperator) {
  SpinOperator expected = SpinOperator::Zero();
  expected(1, 1) = expected(2, 2) = 0.5;
  EXPECT_LT((subunit_e(DeformationParam(0.75)) - expected).norm(), kTol);
  EXPECT_LT((subunit_operators(DeformationParam(0.75))[2] - expected).norm(), kTol);
  EXPECT_EQ(subunit_e(DeformationParam(1.0)).cwiseAbs().maxCoeff(), 0.0);
}

TEST(SubunitOperators, DomainErrors) {
  EXPECT_THROW(subunit_operators(DeformationParam(1.0)), DomainError);
  EXPECT_THROW(subunit_operators(DeformationParam(2.0)), DomainError);
  EXPECT_THROW(subunit_e(DeformationParam(1.5)), DomainError);
}

}  // namespace
}  // namespace aklt
