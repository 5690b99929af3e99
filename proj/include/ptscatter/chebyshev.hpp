#pragma once

// Chebyshev polynomials T_n and U_{n-1} for real arguments, evaluated through
// their angle forms
//     |x| <= 1:  T_n = cos(n theta),   U_{n-1} = sin(n theta) / sin(theta),   x = cos(theta)
//     |x| >  1:  T_n = cosh(n psi),    U_{n-1} = sinh(n psi) / sinh(psi),     |x| = cosh(psi)
// with theta and psi obtained from the gap 1 - x rather than from x. Near
// x = 1 the gap is the only well-conditioned input: acos(1 - d) computed from
// a rounded x loses half its digits, 2 asin(sqrt(d / 2)) loses none.

#include "ptscatter/core.hpp"

#include <cmath>
#include <cstdint>
#include <numbers>

namespace ptscatter {

template <typename Scalar = double>
struct ChebyshevPair {
  Scalar t_n;
  Scalar u_n_minus_1;
  std::int64_t n;
  Scalar x;
};

/// T_n = t_n e^{log_scale}, U_{n-1} = u_n_minus_1 e^{log_scale}.
///
/// For |x| > 1 and large n the polynomials overflow long before the Pell
/// identity stops being meaningful; in scaled form it reads
/// t^2 - (x^2 - 1) u^2 = e^{-2 log_scale}.
template <typename Scalar = double>
struct ScaledChebyshevPair {
  Scalar t_n;
  Scalar u_n_minus_1;
  Scalar log_scale;
  std::int64_t n;
  Scalar x;
};

/// arccos(x) for x in [-1, 1] given gap = 1 - x computed independently of x.
template <typename Scalar>
Scalar stable_arccos(Scalar x, Scalar gap) {
  using std::asin;
  using std::sqrt;
  if (x > Scalar(0.5)) return Scalar(2) * asin(sqrt(std::max(gap, Scalar(0)) / Scalar(2)));
  if (x < Scalar(-0.5))
    return std::numbers::pi_v<Scalar> -
           Scalar(2) * asin(sqrt(std::max(Scalar(1) + x, Scalar(0)) / Scalar(2)));
  return std::acos(x);
}

template <typename Scalar>
Scalar stable_arccos(Scalar x) {
  return stable_arccos(x, Scalar(1) - x);
}

namespace detail {

// Evaluation for x >= 0 with gap = 1 - x. Sign symmetry is applied by callers.
template <typename Scalar>
ScaledChebyshevPair<Scalar> chebyshev_nonnegative(std::int64_t n, Scalar x, Scalar gap, bool scaled) {
  using std::cos;
  using std::sin;
  using std::sqrt;
  if (n == 0) return {Scalar(1), Scalar(0), Scalar(0), n, x};
  if (n == 1) return {x, Scalar(1), Scalar(0), n, x};
  const Scalar nn = static_cast<Scalar>(n);

  if (gap >= Scalar(0)) {
    if (gap == Scalar(0)) return {Scalar(1), nn, Scalar(0), n, x};
    const Scalar theta = stable_arccos(x, gap);
    // sin(theta) = sqrt((1 - x)(1 + x)), exact in the gap.
    const Scalar sin_theta = sqrt(gap * (Scalar(2) - gap));
    return {cos(nn * theta), sin(nn * theta) / sin_theta, Scalar(0), n, x};
  }

  const Scalar d = -gap;  // x - 1 > 0
  const Scalar sinh_psi = sqrt(d * (Scalar(2) + d));
  const Scalar psi = std::log1p(d + sinh_psi);
  const Scalar npsi = nn * psi;
  if (scaled && npsi > Scalar(20)) {
    const Scalar q = std::exp(Scalar(-2) * npsi);
    return {(Scalar(1) + q) / Scalar(2), (Scalar(1) - q) / (Scalar(2) * sinh_psi), npsi, n, x};
  }
  return {std::cosh(npsi), std::sinh(npsi) / sinh_psi, Scalar(0), n, x};
}

template <typename Scalar>
ScaledChebyshevPair<Scalar> chebyshev_any(std::int64_t n, Scalar x, Scalar gap, bool scaled) {
  if (n < 0) throw InvalidArgument("Chebyshev degree must be >= 0");
  if (x >= Scalar(0)) return chebyshev_nonnegative(n, x, gap, scaled);
  // T_n(-x) = (-1)^n T_n(x), U_{n-1}(-x) = (-1)^{n-1} U_{n-1}(x).
  auto p = chebyshev_nonnegative(n, -x, Scalar(1) + x, scaled);
  const bool odd = (n % 2) != 0;
  return {odd ? -p.t_n : p.t_n, odd ? p.u_n_minus_1 : -p.u_n_minus_1, p.log_scale, n, x};
}

} // namespace detail

/// T_n(x) and U_{n-1}(x), with gap = 1 - x supplied by a caller that knows it
/// more accurately than 1 - x can be recovered from x.
template <typename Scalar>
ChebyshevPair<Scalar> chebyshev_pair(std::int64_t n, Scalar x, Scalar gap) {
  auto p = detail::chebyshev_any(n, x, gap, false);
  return {p.t_n, p.u_n_minus_1, n, x};
}

template <typename Scalar>
ChebyshevPair<Scalar> chebyshev_pair(std::int64_t n, Scalar x) {
  return chebyshev_pair(n, x, Scalar(1) - x);
}

template <typename Scalar>
ScaledChebyshevPair<Scalar> scaled_chebyshev_pair(std::int64_t n, Scalar x) {
  return detail::chebyshev_any(n, x, Scalar(1) - x, true);
}

/// T_n(x). Overflows to +-inf for large n|x| > 1.
template <typename Scalar>
Scalar cheb_t(std::int64_t n, Scalar x) {
  return chebyshev_pair(n, x).t_n;
}

/// U_n(x). Overflows to +-inf for large n|x| > 1.
template <typename Scalar>
Scalar cheb_u(std::int64_t n, Scalar x) {
  if (n < 0) throw InvalidArgument("Chebyshev degree must be >= 0");
  return chebyshev_pair(n + 1, x).u_n_minus_1;
}

} // namespace ptscatter
