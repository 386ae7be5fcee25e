#include "aklt/spin_algebra.hpp"

#include <cmath>
#include <string>

#include "aklt/errors.hpp"

namespace aklt {

const char* category_name(ErrorCategory c) noexcept {
  switch (c) {
    case ErrorCategory::usage: return "usage";
    case ErrorCategory::domain: return "domain";
    case ErrorCategory::argument: return "argument";
    case ErrorCategory::size: return "size";
    case ErrorCategory::estimation: return "estimation";
    case ErrorCategory::io: return "io";
    case ErrorCategory::check_failed: return "check-failed";
  }
  return "unknown";
}

char axis_name(Axis axis) noexcept {
  switch (axis) {
    case Axis::x: return 'x';
    case Axis::y: return 'y';
    case Axis::z: return 'z';
  }
  return '?';
}

DeformationParam::DeformationParam(double a_squared) : a_squared_(a_squared) {
  if (!std::isfinite(a_squared) || a_squared <= 0.0) {
    throw DomainError("deformation parameter a^2 must be finite and > 0, got " +
                      std::to_string(a_squared));
  }
}

double DeformationParam::a() const noexcept { return std::sqrt(a_squared_); }

namespace {

constexpr double kSpin = 1.5;

// <m+1| S_+ |m> for m = 1/2, -1/2, -3/2 (column index 1, 2, 3).
SpinOperator raising() {
  SpinOperator sp = SpinOperator::Zero();
  for (int k = 1; k < 4; ++k) {
    const double m = kSpin - k;
    sp(k - 1, k) = std::sqrt(kSpin * (kSpin + 1) - m * (m + 1));
  }
  return sp;
}

int index_of_m(double m) {
  const double idx = kSpin - m;
  const int k = static_cast<int>(std::lround(idx));
  if (k < 0 || k > 3 || std::abs(idx - k) > 1e-12) {
    throw ArgumentError("spin-3/2 projection must be one of 3/2, 1/2, -1/2, -3/2");
  }
  return k;
}

void fix_phase(SpinState& v) {
  int best = 0;
  const double max_abs = v.cwiseAbs().maxCoeff();
  for (int k = 0; k < 4; ++k) {
    if (std::abs(v(k)) >= max_abs - 1e-9) {
      best = k;
      break;
    }
  }
  const cplx phase = std::abs(v(best)) > 0 ? std::conj(v(best)) / std::abs(v(best)) : cplx(1.0);
  v *= phase;
  v(best) = cplx(v(best).real(), 0.0);
}

}  // namespace

SpinOperator spin_component(Axis axis) {
  switch (axis) {
    case Axis::z: {
      SpinOperator sz = SpinOperator::Zero();
      for (int k = 0; k < 4; ++k) sz(k, k) = kSpin - k;
      return sz;
    }
    case Axis::x: {
      const SpinOperator sp = raising();
      return 0.5 * (sp + sp.adjoint());
    }
    case Axis::y: {
      const SpinOperator sp = raising();
      return (sp - sp.adjoint()) / cplx(0.0, 2.0);
    }
  }
  return SpinOperator::Zero();
}

SpinState spin_eigenstate(Axis axis, double m) {
  const int k = index_of_m(m);
  if (axis == Axis::z) {
    SpinState e = SpinState::Zero();
    e(k) = 1.0;
    return e;
  }
  Eigen::SelfAdjointEigenSolver<SpinOperator> solver(spin_component(axis));
  // Eigenvalues come back ascending: -3/2, -1/2, 1/2, 3/2.
  SpinState v = solver.eigenvectors().col(3 - k);
  v.normalize();
  fix_phase(v);
  return v;
}

SpinOperator filter_undeformed(Axis axis) {
  const SpinState up = spin_eigenstate(axis, 1.5);
  const SpinState down = spin_eigenstate(axis, -1.5);
  return std::sqrt(2.0 / 3.0) * (up * up.adjoint() + down * down.adjoint());
}

SpinOperator deformation(DeformationParam a) {
  const double edge = std::sqrt(3.0 / a.a_squared());
  SpinOperator d = SpinOperator::Zero();
  d(0, 0) = edge;
  d(1, 1) = 1.0;
  d(2, 2) = 1.0;
  d(3, 3) = edge;
  return d;
}

namespace {

// F_b(a) without the a^2 >= 1 restriction on the x and y outcomes.
SpinOperator filter_deformed_unchecked(Axis axis, DeformationParam a) {
  const double a2 = a.a_squared();
  const double prefactor = axis == Axis::z ? std::sqrt(a2) * std::sqrt(std::max(a2 - 1.0, 0.0) / 6.0)
                                           : std::sqrt(4.0 / 3.0 * a2 / (1.0 + a2));
  const SpinOperator d = deformation(a);
  return prefactor * d.adjoint() * filter_undeformed(axis) * d;
}

}  // namespace

SpinOperator filter_deformed(Axis axis, DeformationParam a) {
  if (a.a_squared() < 1.0) {
    throw DomainError("filter_deformed requires a^2 >= 1; use subunit_operators for a^2 < 1");
  }
  return filter_deformed_unchecked(axis, a);
}

SpinOperator povm_element(Axis axis, DeformationParam a) {
  const SpinOperator f = filter_deformed(axis, a);
  return f.adjoint() * f;
}

std::array<SpinState, 4> projective_basis_a1() {
  const cplx i(0.0, 1.0);
  // Components in the order (3/2, 1/2, -1/2, -3/2).
  std::array<SpinState, 4> basis;
  basis[0] << 1.0, 1.0, 1.0, 1.0;
  // |0>, |1> span the image of F_x(1); |2>, |3> that of F_y(1).
  basis[1] << 1.0, -1.0, 1.0, -1.0;
  basis[2] << 1.0, i, -1.0, -i;
  basis[3] << 1.0, -i, -1.0, i;
  for (auto& v : basis) v *= 0.5;
  return basis;
}

std::array<SpinOperator, 3> subunit_operators(DeformationParam a) {
  const double a2 = a.a_squared();
  if (a2 >= 1.0) {
    throw DomainError("subunit_operators requires 0 < a^2 < 1");
  }
  return {a.a() * filter_deformed_unchecked(Axis::x, a), a.a() * filter_deformed_unchecked(Axis::y, a),
          subunit_e(a)};
}

SpinOperator subunit_e(DeformationParam a) {
  const double a2 = a.a_squared();
  if (a2 > 1.0) throw DomainError("E(a) requires 0 < a^2 <= 1");
  SpinOperator e = SpinOperator::Zero();
  e(1, 1) = std::sqrt(1.0 - a2);
  e(2, 2) = std::sqrt(1.0 - a2);
  return e;
}

SpinOperator commutator(const SpinOperator& lhs, const SpinOperator& rhs) {
  return lhs * rhs - rhs * lhs;
}

}  // namespace aklt
