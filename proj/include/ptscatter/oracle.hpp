#pragma once

// Brute-force references for the closed forms.
//
// Tier (a): adaptive Dormand-Prince 5(4) integration of
//     psi'' = (V(x) - k^2) psi
// across the stack, with V looked up pointwise. psi and psi' are carried
// through interfaces by the integration itself; steps are only clipped so
// that no step straddles a discontinuity of V.
//
// Tier (b): exact propagation of (psi, psi') through each constant segment,
//     [psi, psi'](x + w) = [[cos qw, sin(qw)/q], [-q sin qw, cos qw]] [psi, psi'](x),
// multiplied segment by segment.
//
// Both convert to plane-wave amplitudes only at the outer edges of the
// support, through W(x) = [[e^{ikx}, e^{-ikx}], [ik e^{ikx}, -ik e^{-ikx}]].

#include "ptscatter/cell.hpp"
#include "ptscatter/core.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

namespace ptscatter {

template <typename Scalar = double>
struct IntegrationSettings {
  Scalar rel_tol = Scalar(1e-10);
  Scalar abs_tol = Scalar(1e-12);
  Scalar max_step = std::numeric_limits<Scalar>::infinity();
  /// Order of the propagated solution. Only the 5(4) pair is implemented.
  int method_order = 5;
  long max_steps = 5'000'000;

  void validate() const {
    if (!(rel_tol > 0) || !(abs_tol > 0)) throw InvalidArgument("integration tolerances must be > 0");
    if (!(max_step > 0)) throw InvalidArgument("max_step must be > 0");
    if (method_order != 5) throw InvalidArgument("only the order-5 Dormand-Prince pair is available");
    if (max_steps < 1) throw InvalidArgument("max_steps must be >= 1");
  }
};

enum class IncidenceSide { left, right };

template <typename Scalar = double>
struct IncidenceResult {
  Complex<Scalar> t;
  Complex<Scalar> r;
};

namespace detail {

template <typename Scalar>
Matrix2c<Scalar> plane_wave_basis(Scalar k, Scalar x) {
  const auto i = imag_unit<Scalar>;
  const Complex<Scalar> e = std::polar(Scalar(1), k * x);
  Matrix2c<Scalar> w;
  w << e, std::conj(e), i * k * e, -i * k * std::conj(e);
  return w;
}

template <typename Scalar>
Matrix2c<Scalar> plane_wave_basis_inverse(Scalar k, Scalar x) {
  const auto i = imag_unit<Scalar>;
  const Complex<Scalar> e = std::polar(Scalar(1), k * x);
  Matrix2c<Scalar> w;
  w << std::conj(e), std::conj(e) / (i * k), e, -e / (i * k);
  return w / Scalar(2);
}

// Dormand-Prince 5(4) tableau.
template <typename Scalar> struct DormandPrince {
  static constexpr Scalar c2 = Scalar(1) / 5, c3 = Scalar(3) / 10, c4 = Scalar(4) / 5, c5 = Scalar(8) / 9;
  static constexpr Scalar a21 = Scalar(1) / 5;
  static constexpr Scalar a31 = Scalar(3) / 40, a32 = Scalar(9) / 40;
  static constexpr Scalar a41 = Scalar(44) / 45, a42 = Scalar(-56) / 15, a43 = Scalar(32) / 9;
  static constexpr Scalar a51 = Scalar(19372) / 6561, a52 = Scalar(-25360) / 2187, a53 = Scalar(64448) / 6561,
                          a54 = Scalar(-212) / 729;
  static constexpr Scalar a61 = Scalar(9017) / 3168, a62 = Scalar(-355) / 33, a63 = Scalar(46732) / 5247,
                          a64 = Scalar(49) / 176, a65 = Scalar(-5103) / 18656;
  static constexpr Scalar b1 = Scalar(35) / 384, b3 = Scalar(500) / 1113, b4 = Scalar(125) / 192,
                          b5 = Scalar(-2187) / 6784, b6 = Scalar(11) / 84;
  // b(5th) - b(4th)
  static constexpr Scalar e1 = Scalar(71) / 57600, e3 = Scalar(-71) / 16695, e4 = Scalar(71) / 1920,
                          e5 = Scalar(-17253) / 339200, e6 = Scalar(22) / 525, e7 = Scalar(-1) / 40;
};

// Integrates y' = [[0, 1], [V(x) - k^2, 0]] y from `from` to `to` (either
// direction). State is any 2xC complex Eigen matrix.
template <typename Scalar, typename State>
State integrate_schrodinger(const PotentialStack<Scalar>& stack, Scalar k, State y, Scalar from, Scalar to,
                            const IntegrationSettings<Scalar>& settings) {
  using T = DormandPrince<Scalar>;
  settings.validate();
  const Scalar k2 = k * k;

  std::vector<Scalar> cuts = stack.breakpoints();
  const Scalar lo = std::min(from, to), hi = std::max(from, to);
  std::vector<Scalar> pts{lo};
  for (Scalar c : cuts)
    if (c > lo && c < hi) pts.push_back(c);
  pts.push_back(hi);
  if (from > to) std::reverse(pts.begin(), pts.end());

  long steps = 0;
  Scalar h_guess = std::min(settings.max_step,
                            Scalar(0.05) / (k + Scalar(1)));
  for (std::size_t s = 0; s + 1 < pts.size(); ++s) {
    const Scalar a = pts[s], b = pts[s + 1];
    if (a == b) continue;
    const Scalar dir = b > a ? Scalar(1) : Scalar(-1);
    // Lookups stay strictly inside the segment, so the one-sided value of V
    // is used at its ends.
    const Scalar in_lo = std::nextafter(std::min(a, b), std::max(a, b));
    const Scalar in_hi = std::nextafter(std::max(a, b), std::min(a, b));
    auto rhs = [&](Scalar x, const State& v) -> State {
      const Complex<Scalar> pot = stack.potential_at(std::clamp(x, in_lo, in_hi));
      State out;
      out.row(0) = v.row(1);
      out.row(1) = (pot - k2) * v.row(0);
      return out;
    };

    Scalar x = a;
    Scalar h = std::min({h_guess, std::abs(b - a), settings.max_step});
    while (dir * (b - x) > 0) {
      if (++steps > settings.max_steps)
        throw IntegrationFailure("step limit " + std::to_string(settings.max_steps) + " exceeded near x=" +
                                 std::to_string(static_cast<double>(x)));
      bool last = false;
      if (h >= std::abs(b - x)) {
        h = std::abs(b - x);
        last = true;
      }
      const Scalar hs = dir * h;
      const State k1 = rhs(x, y);
      const State k2s = rhs(x + T::c2 * hs, y + hs * (T::a21 * k1));
      const State k3 = rhs(x + T::c3 * hs, y + hs * (T::a31 * k1 + T::a32 * k2s));
      const State k4 = rhs(x + T::c4 * hs, y + hs * (T::a41 * k1 + T::a42 * k2s + T::a43 * k3));
      const State k5 =
          rhs(x + T::c5 * hs, y + hs * (T::a51 * k1 + T::a52 * k2s + T::a53 * k3 + T::a54 * k4));
      const State k6 = rhs(x + hs, y + hs * (T::a61 * k1 + T::a62 * k2s + T::a63 * k3 + T::a64 * k4 +
                                             T::a65 * k5));
      const State ynew = y + hs * (T::b1 * k1 + T::b3 * k3 + T::b4 * k4 + T::b5 * k5 + T::b6 * k6);
      const State k7 = rhs(x + hs, ynew);
      const State err = hs * (T::e1 * k1 + T::e3 * k3 + T::e4 * k4 + T::e5 * k5 + T::e6 * k6 + T::e7 * k7);

      Scalar ratio = 0;
      for (Eigen::Index i = 0; i < err.size(); ++i) {
        const Scalar scale =
            settings.abs_tol + settings.rel_tol * std::max(std::abs(y(i)), std::abs(ynew(i)));
        ratio = std::max(ratio, std::abs(err(i)) / scale);
      }
      if (!std::isfinite(ratio))
        throw IntegrationFailure("non-finite error estimate near x=" + std::to_string(static_cast<double>(x)));

      const Scalar grow =
          ratio == 0 ? Scalar(5) : std::clamp(Scalar(0.9) * std::pow(ratio, Scalar(-0.2)), Scalar(0.2), Scalar(5));
      const Scalar h_min = Scalar(16) * std::numeric_limits<Scalar>::epsilon() *
                           std::max({Scalar(1), std::abs(a), std::abs(b)});
      if (ratio <= 1) {
        x = last || std::abs(b - (x + hs)) < h_min ? b : x + hs;
        y = ynew;
        if (!last) h_guess = h;
      } else if (h * grow < h_min) {
        throw IntegrationFailure("step size underflow near x=" + std::to_string(static_cast<double>(x)) +
                                 "; tolerance unreachable");
      }
      h = std::max(std::min(h * grow, settings.max_step), h_min);
    }
  }
  return y;
}

} // namespace detail

/// Transfer matrix of `stack` by direct integration of the Schroedinger
/// equation (tier a).
template <typename Scalar>
TransferMatrix<Scalar> integrate_transfer_matrix(const PotentialStack<Scalar>& stack, WaveNumber<Scalar> k,
                                                 const IntegrationSettings<Scalar>& settings = {}) {
  const Scalar x0 = stack.left_edge(), x1 = stack.right_edge();
  // Columns: solutions that are pure e^{ikx} and pure e^{-ikx} left of x0.
  const Matrix2c<Scalar> start = detail::plane_wave_basis(k.value(), x0);
  const Matrix2c<Scalar> end = detail::integrate_schrodinger(stack, k.value(), start, x0, x1, settings);
  return TransferMatrix<Scalar>(detail::plane_wave_basis_inverse(k.value(), x1) * end, k);
}

/// Scattering amplitudes for one incidence side by shooting from the
/// transmitted side, where the solution is a single outgoing plane wave.
template <typename Scalar>
IncidenceResult<Scalar> incidence_scattering(const PotentialStack<Scalar>& stack, WaveNumber<Scalar> k,
                                             IncidenceSide side,
                                             const IntegrationSettings<Scalar>& settings = {}) {
  using Column = Eigen::Matrix<Complex<Scalar>, 2, 1>;
  const auto i = imag_unit<Scalar>;
  const Scalar kv = k.value();
  const Scalar x0 = stack.left_edge(), x1 = stack.right_edge();
  if (side == IncidenceSide::left) {
    // psi = e^{ikx} right of x1 (t normalised to 1), integrate right to left.
    const Complex<Scalar> e = std::polar(Scalar(1), kv * x1);
    Column y;
    y << e, i * kv * e;
    y = detail::integrate_schrodinger(stack, kv, y, x1, x0, settings);
    const Column ab = detail::plane_wave_basis_inverse(kv, x0) * y;
    return {Scalar(1) / ab(0), ab(1) / ab(0)};
  }
  // psi = e^{-ikx} left of x0, integrate left to right.
  const Complex<Scalar> e = std::polar(Scalar(1), -kv * x0);
  Column y;
  y << e, -i * kv * e;
  y = detail::integrate_schrodinger(stack, kv, y, x0, x1, settings);
  const Column ab = detail::plane_wave_basis_inverse(kv, x1) * y;
  return {Scalar(1) / ab(1), ab(0) / ab(1)};
}

/// Transfer matrix by exact (psi, psi') propagation through each constant
/// segment (tier b). Gaps are propagated as free segments.
template <typename Scalar>
TransferMatrix<Scalar> propagate_slabs(const PotentialStack<Scalar>& stack, WaveNumber<Scalar> k) {
  const Scalar kv = k.value();
  const Scalar x0 = stack.left_edge(), x1 = stack.right_edge();
  const auto pts = stack.breakpoints();
  Matrix2c<Scalar> phi = Matrix2c<Scalar>::Identity();
  for (std::size_t s = 0; s + 1 < pts.size(); ++s) {
    const Scalar a = pts[s], w = pts[s + 1] - pts[s];
    const Complex<Scalar> pot = stack.potential_at(a + w / Scalar(2));
    const Complex<Scalar> q2 = Complex<Scalar>(kv * kv) - pot;
    const Complex<Scalar> qw = std::sqrt(q2) * w;
    const Complex<Scalar> c = std::cos(qw);
    const Complex<Scalar> s_over_q = w * detail::sinc(qw);
    Matrix2c<Scalar> p;
    p << c, s_over_q, -q2 * s_over_q, c;
    phi = p * phi;
  }
  return TransferMatrix<Scalar>(
      detail::plane_wave_basis_inverse(kv, x1) * phi * detail::plane_wave_basis(kv, x0), k);
}

} // namespace ptscatter
