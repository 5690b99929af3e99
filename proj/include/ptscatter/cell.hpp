#pragma once

// Closed-form transfer matrices of a rectangular complex slab and of the
// balanced gain/loss unit cell
//
//     V(x) = +iV  on [0, b),    V(x) = -iV  on [b, 2b).
//
// Inside a slab of height U the local wave number is q = sqrt(k^2 - U); for
// the cell halves this gives q = rho e^{-i phi} (gain, +iV) and
// q = rho e^{+i phi} (loss, -iV) with rho = (k^4 + V^2)^{1/4} and
// phi = atan(V / k^2) / 2 in (0, pi/4).
//
// The cell matrix has the form
//     [ (xi + i chi) e^{-2ikb}     i (eta - tau) e^{-2ikb} ]
//     [ i (eta + tau) e^{+2ikb}    (xi - i chi) e^{+2ikb}  ]
// with real xi, chi, eta, tau and xi^2 + chi^2 + eta^2 - tau^2 = 1.

#include "ptscatter/core.hpp"

#include <cmath>
#include <complex>

namespace ptscatter {

template <typename Scalar = double>
struct CellParams {
  Scalar rho;
  Scalar phi;
  Scalar alpha;   // b rho cos(phi)
  Scalar beta;    // b rho sin(phi)
  Scalar u_plus;  // k/rho + rho/k
  Scalar u_minus; // k/rho - rho/k
  Scalar xi;
  Scalar chi;
  Scalar eta;
  Scalar tau;
  /// 1 - xi evaluated without subtracting from 1; xi -> 1 as b -> 0.
  Scalar xi_gap;
  Complex<Scalar> k1; // rho e^{-i phi}, inside the +iV half
  Complex<Scalar> k2; // rho e^{+i phi} = sqrt(k^2 + iV), inside the -iV half
  Scalar k;
  Scalar v;
  Scalar b;
};

template <typename Scalar = double>
struct WaveParams {
  Scalar rho;
  Scalar phi;
  Scalar alpha;
  Scalar beta;
  Scalar u_plus;
  Scalar u_minus;
};

template <typename Scalar>
WaveParams<Scalar> wave_params(WaveNumber<Scalar> k_, Scalar v, Scalar b) {
  using std::cos;
  using std::sin;
  if (!(v > Scalar(0)) || !std::isfinite(v))
    throw InvalidArgument("gain/loss strength V must be finite and > 0");
  if (!(b > Scalar(0)) || !std::isfinite(b))
    throw InvalidArgument("half-cell width b must be finite and > 0");
  const Scalar k = k_.value();
  const Scalar rho = std::sqrt(std::hypot(k * k, v));
  const Scalar phi = std::atan2(v, k * k) / Scalar(2);
  return {rho, phi, b * rho * cos(phi), b * rho * sin(phi), k / rho + rho / k, k / rho - rho / k};
}

template <typename Scalar>
CellParams<Scalar> unit_cell_elements(WaveNumber<Scalar> k_, Scalar v, Scalar b) {
  using std::cos;
  using std::cosh;
  using std::sin;
  using std::sinh;
  const auto w = wave_params(k_, v, b);
  const Scalar k = k_.value();

  const Scalar sa = sin(w.alpha), ca = cos(w.alpha);
  const Scalar shb = sinh(w.beta), chb = cosh(w.beta);
  const Scalar sp = sin(w.phi), cp = cos(w.phi);
  const Scalar mix = chb * chb * sa * sa + ca * ca * shb * shb;

  CellParams<Scalar> p{};
  p.rho = w.rho;
  p.phi = w.phi;
  p.alpha = w.alpha;
  p.beta = w.beta;
  p.u_plus = w.u_plus;
  p.u_minus = w.u_minus;
  p.xi = (cos(Scalar(2) * w.alpha) + cosh(Scalar(2) * w.beta)) / Scalar(2) - cos(Scalar(2) * w.phi) * mix;
  p.chi = (w.u_plus * cp * sin(Scalar(2) * w.alpha) + w.u_minus * sp * sinh(Scalar(2) * w.beta)) / Scalar(2);
  // (cosh 2beta - cos 2alpha) / 2 = sinh^2 beta + sin^2 alpha, free of cancellation.
  p.eta = (shb * shb + sa * sa) * sin(Scalar(2) * w.phi);
  p.tau = (w.u_plus * sp * sinh(Scalar(2) * w.beta) + w.u_minus * cp * sin(Scalar(2) * w.alpha)) / Scalar(2);
  p.xi_gap = Scalar(2) * sa * sa - Scalar(2) * sp * sp * mix;
  p.k1 = std::polar(w.rho, -w.phi);
  p.k2 = std::polar(w.rho, w.phi);
  p.k = k;
  p.v = v;
  p.b = b;
  return p;
}

/// The cell matrix with the e^{-+2ikb} phases stripped:
/// [[xi + i chi, i(eta - tau)], [i(eta + tau), xi - i chi]].
template <typename Scalar>
Matrix2c<Scalar> reduced_cell_matrix(const CellParams<Scalar>& p) {
  const auto i = imag_unit<Scalar>;
  Matrix2c<Scalar> m;
  m << Complex<Scalar>(p.xi, p.chi), i * (p.eta - p.tau), i * (p.eta + p.tau),
      Complex<Scalar>(p.xi, -p.chi);
  return m;
}

template <typename Scalar>
TransferMatrix<Scalar> unit_cell_matrix(const CellParams<Scalar>& p) {
  const Complex<Scalar> phase = std::polar(Scalar(1), Scalar(2) * p.k * p.b);
  Matrix2c<Scalar> m = reduced_cell_matrix(p);
  m.row(0) *= std::conj(phase);
  m.row(1) *= phase;
  return TransferMatrix<Scalar>(m, WaveNumber<Scalar>(p.k));
}

template <typename Scalar>
TransferMatrix<Scalar> unit_cell_matrix(WaveNumber<Scalar> k, Scalar v, Scalar b) {
  return unit_cell_matrix(unit_cell_elements(k, v, b));
}

namespace detail {

// sin(z) / z, series below |z| = 1e-4.
template <typename Scalar>
Complex<Scalar> sinc(Complex<Scalar> z) {
  if (std::abs(z) < Scalar(1e-4)) {
    const Complex<Scalar> z2 = z * z;
    return Scalar(1) - z2 / Scalar(6) + z2 * z2 / Scalar(120);
  }
  return std::sin(z) / z;
}

} // namespace detail

/// Transfer matrix of one slab of complex height on [offset, offset + width),
/// amplitudes referenced to x = 0.
///
/// Written in terms of cos(qw) and w sinc(qw) = sin(qw)/q, which are even in
/// q, so the branch of the square root is irrelevant and q -> 0 (k^2 = height)
/// needs no special casing beyond the sinc series.
template <typename Scalar>
TransferMatrix<Scalar> barrier_matrix(WaveNumber<Scalar> k_, Complex<Scalar> height, Scalar width,
                                      Scalar offset = Scalar(0)) {
  if (!(width > Scalar(0)) || !std::isfinite(width))
    throw InvalidArgument("barrier width must be finite and > 0");
  const auto i = imag_unit<Scalar>;
  const Scalar k = k_.value();
  const Complex<Scalar> q2 = Complex<Scalar>(k * k) - height;
  const Complex<Scalar> q = std::sqrt(q2);
  const Complex<Scalar> c = std::cos(q * width);
  const Complex<Scalar> s = width * detail::sinc(q * width); // sin(qw)/q
  const Complex<Scalar> sum = (k * s + q2 * s / k) / Scalar(2);
  const Complex<Scalar> diff = (q2 * s / k - k * s) / Scalar(2);
  const Complex<Scalar> e = std::polar(Scalar(1), k * width);
  TransferMatrix<Scalar> local((c + i * sum) * std::conj(e), i * diff * std::conj(e), -i * diff * e,
                               (c - i * sum) * e, k_);
  return translate(local, offset);
}

template <typename Scalar>
TransferMatrix<Scalar> barrier_matrix(WaveNumber<Scalar> k, const Layer<Scalar>& layer) {
  return barrier_matrix(k, layer.height, layer.width, layer.offset);
}

} // namespace ptscatter
