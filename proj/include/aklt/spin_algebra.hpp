#pragma once

// Operator algebra on a single spin-3/2 site.
//
// All matrices are dense 4x4 in the fixed S_z basis ordering
//   index 0: |3/2>, 1: |1/2>, 2: |-1/2>, 3: |-3/2>.

#include <array>
#include <complex>

#include <Eigen/Dense>

namespace aklt {

using cplx = std::complex<double>;
using SpinOperator = Eigen::Matrix4cd;
using SpinState = Eigen::Vector4cd;

enum class Axis { x = 0, y = 1, z = 2 };

inline constexpr std::array<Axis, 3> kAxes{Axis::x, Axis::y, Axis::z};

char axis_name(Axis axis) noexcept;

/// Deformation of the AKLT ground state, parametrised by a^2 > 0.
class DeformationParam {
 public:
  /// Throws DomainError unless a_squared is finite and strictly positive.
  explicit DeformationParam(double a_squared);

  double a_squared() const noexcept { return a_squared_; }
  double a() const noexcept;

  bool operator==(const DeformationParam&) const = default;

 private:
  double a_squared_;
};

SpinOperator spin_component(Axis axis);

/// Eigenvector of S_axis with eigenvalue m (m in {3/2, 1/2, -1/2, -3/2}).
/// Phase convention: the largest-magnitude component (lowest index on ties)
/// is real and positive.
SpinState spin_eigenstate(Axis axis, double m);

/// F_b = sqrt(2/3) (|3/2><3/2| + |-3/2><-3/2|) in the S_b eigenbasis.
SpinOperator filter_undeformed(Axis axis);

/// D(a) = diag(sqrt(3)/a, 1, 1, sqrt(3)/a).
SpinOperator deformation(DeformationParam a);

/// Deformed three-outcome filter, valid for a^2 >= 1. Throws DomainError
/// for a^2 < 1 (use subunit_operators there).
SpinOperator filter_deformed(Axis axis, DeformationParam a);

/// The POVM element E_b(a) = F_b(a)^dagger F_b(a).
SpinOperator povm_element(Axis axis, DeformationParam a);

/// Orthonormal basis {|0>,|1>,|2>,|3>} in which F_x(1) and F_y(1) are
/// complementary projectors.
std::array<SpinState, 4> projective_basis_a1();

/// {a F_x(a), a F_y(a), E(a)} for 0 < a^2 < 1, with
/// E(a) = diag(0, sqrt(1-a^2), sqrt(1-a^2), 0). Throws DomainError otherwise.
std::array<SpinOperator, 3> subunit_operators(DeformationParam a);

/// E(a) alone; defined on 0 < a^2 <= 1, where it vanishes at the upper end.
SpinOperator subunit_e(DeformationParam a);

/// Frobenius norm of sum_k M_k^dagger M_k - I.
template <typename Range>
double completeness_residual(const Range& kraus_ops) {
  SpinOperator sum = SpinOperator::Zero();
  for (const auto& m : kraus_ops) sum += m.adjoint() * m;
  return (sum - SpinOperator::Identity()).norm();
}

SpinOperator commutator(const SpinOperator& lhs, const SpinOperator& rhs);

}  // namespace aklt
