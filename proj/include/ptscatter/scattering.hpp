#pragma once

#include "ptscatter/core.hpp"
#include "ptscatter/stack.hpp"

#include <cstdint>
#include <vector>

namespace ptscatter {

template <typename Scalar = double>
struct ScatteringCoefficients {
  Complex<Scalar> t;       // same for both incidence sides
  Complex<Scalar> r_left;  // incidence from the left
  Complex<Scalar> r_right; // incidence from the right
  Scalar big_t;
  Scalar big_r_left;
  Scalar big_r_right;
};

/// |M22| below this is treated as a pole of the scattering amplitudes.
inline constexpr double pole_tolerance = 1e-14;

/// Scattering amplitudes from (A+, B+) = M (A-, B-).
///
/// Left incidence (A- = 1, B- = r_l, A+ = t, B+ = 0) gives r_l = -M21/M22;
/// right incidence (A- = 0, B- = t, A+ = r_r, B+ = 1) gives r_r = M12/M22;
/// both give t = det M / M22 = 1/M22.
template <typename Scalar>
ScatteringCoefficients<Scalar> scattering_from_matrix(const TransferMatrix<Scalar>& m) {
  const Complex<Scalar> m22 = m.m22();
  if (!(std::abs(m22) >= Scalar(pole_tolerance)))
    throw SpectralPole("|M22| = " + std::to_string(static_cast<double>(std::abs(m22))) +
                       " at k=" + std::to_string(static_cast<double>(m.at_k().value())) +
                       ": scattering amplitudes have a pole");
  ScatteringCoefficients<Scalar> s;
  s.t = Scalar(1) / m22;
  s.r_left = -m.m21() / m22;
  s.r_right = m.m12() / m22;
  s.big_t = std::norm(s.t);
  s.big_r_left = std::norm(s.r_left);
  s.big_r_right = std::norm(s.r_right);
  return s;
}

template <typename Scalar = double>
struct TransmissionRow {
  std::int64_t n;
  Scalar k;
  Scalar big_t;
  Scalar big_r_left;
  Scalar big_r_right;
  Scalar absdet_err;
};

/// T, R_l, R_r of the N-cell stack over an (N, k) grid, N-major.
template <typename Scalar>
std::vector<TransmissionRow<Scalar>> transmission_surface(Scalar v, Scalar total_length,
                                                          const std::vector<std::int64_t>& n_values,
                                                          const std::vector<Scalar>& k_values) {
  std::vector<TransmissionRow<Scalar>> rows;
  rows.reserve(n_values.size() * k_values.size());
  for (const auto n : n_values) {
    const PeriodicSpec<Scalar> spec(v, n, total_length);
    for (const auto kv : k_values) {
      const WaveNumber<Scalar> k(kv);
      const auto m = periodic_matrix(spec, k);
      const auto s = scattering_from_matrix(m);
      rows.push_back({n, kv, s.big_t, s.big_r_left, s.big_r_right, determinant_error(m)});
    }
  }
  return rows;
}

} // namespace ptscatter
