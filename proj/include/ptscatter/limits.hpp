#pragma once

// Large-N behaviour of the N-cell gain/loss stack at fixed length L.
//
// With b = L/(2N), to leading order
//     xi -> 1 - (kL)^2 / (2N^2),   chi -> kL/N,   arccos xi -> kL/N,
//     T_N(xi) -> cos kL,   chi U_{N-1}(xi) -> sin kL,
//     (eta +- tau) U_{N-1}(xi) -> V b / (2k) sin kL,
// so the diagonal phases cancel against e^{-+ikL} and the stack matrix tends
// to the identity with off-diagonals of order 1/N.

#include "ptscatter/cell.hpp"
#include "ptscatter/core.hpp"
#include "ptscatter/stack.hpp"

#include <Eigen/Dense>

#include <cmath>
#include <complex>
#include <cstdint>
#include <limits>
#include <string>
#include <vector>

namespace ptscatter {

template <typename Scalar = double>
struct AsymptoticPrediction {
  Scalar xi_pred;
  Scalar chi_pred;
  Scalar arccos_xi_pred;
  Scalar t_n_pred;
  Scalar u_pred;             // sin kL / sin(kL/N)
  Scalar u_pred_small_angle; // sin kL / (kL/N)
  Scalar chi_u_pred;
  Complex<Scalar> diag_pred; // e^{ikL}; T_N - i chi U_{N-1} tends to its conjugate
  Scalar offdiag_scale_pred; // V b / (2k) sin kL, signed
};

template <typename Scalar>
AsymptoticPrediction<Scalar> predict_asymptotics(WaveNumber<Scalar> k_, Scalar v, Scalar total_length,
                                                 std::int64_t n) {
  if (n < 1) throw InvalidArgument("need n >= 1");
  const Scalar k = k_.value();
  const Scalar nn = static_cast<Scalar>(n);
  const Scalar kl = k * total_length;
  const Scalar b = total_length / (Scalar(2) * nn);
  AsymptoticPrediction<Scalar> p;
  p.xi_pred = Scalar(1) - kl * kl / (Scalar(2) * nn * nn);
  p.chi_pred = kl / nn;
  p.arccos_xi_pred = kl / nn;
  p.t_n_pred = std::cos(kl);
  p.u_pred = std::sin(kl) / std::sin(kl / nn);
  p.u_pred_small_angle = std::sin(kl) / (kl / nn);
  p.chi_u_pred = std::sin(kl);
  p.diag_pred = std::polar(Scalar(1), kl);
  p.offdiag_scale_pred = v * b / (Scalar(2) * k) * std::sin(kl);
  return p;
}

template <typename Scalar = double>
struct ConvergenceRecord {
  std::int64_t n;
  Scalar k;
  Scalar deviation_inf;     // max |Omega - Ref|
  Scalar offdiag_measured;  // max(|dOmega_12|, |dOmega_21|)
  Scalar offdiag_predicted; // |V b/(2k) sin kL| for the balanced stack, 0 where none exists
  Scalar diag_measured_err; // max(|dOmega_11|, |dOmega_22|)
};

template <typename Scalar = double>
struct LogLogFit {
  Scalar slope;
  Scalar intercept; // log(y) = intercept + slope * log(x)
};

/// Least-squares line through (log x, log y). Needs >= 2 points, all positive.
template <typename Scalar>
LogLogFit<Scalar> fit_log_log(const std::vector<Scalar>& x, const std::vector<Scalar>& y) {
  if (x.size() != y.size() || x.size() < 2) throw InvalidArgument("log-log fit needs >= 2 paired points");
  Scalar sx = 0, sy = 0;
  const Scalar m = static_cast<Scalar>(x.size());
  for (std::size_t i = 0; i < x.size(); ++i) {
    if (!(x[i] > 0) || !(y[i] > 0)) throw InvalidArgument("log-log fit needs positive data");
    sx += std::log(x[i]);
    sy += std::log(y[i]);
  }
  const Scalar mx = sx / m, my = sy / m;
  Scalar sxx = 0, sxy = 0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    const Scalar dx = std::log(x[i]) - mx;
    sxx += dx * dx;
    sxy += dx * (std::log(y[i]) - my);
  }
  if (sxx == 0) throw InvalidArgument("log-log fit needs distinct x values");
  const Scalar slope = sxy / sxx;
  return {slope, my - slope * mx};
}

template <typename Scalar>
LogLogFit<Scalar> fit_log_log(const std::vector<ConvergenceRecord<Scalar>>& records) {
  std::vector<Scalar> x, y;
  for (const auto& r : records) {
    x.push_back(static_cast<Scalar>(r.n));
    y.push_back(r.deviation_inf);
  }
  return fit_log_log(x, y);
}

/// Every step either decreases or grows by at most `jitter` (relative).
template <typename Scalar>
bool is_decreasing_within(const std::vector<Scalar>& values, Scalar jitter) {
  for (std::size_t i = 1; i < values.size(); ++i)
    if (values[i] > values[i - 1] * (Scalar(1) + jitter)) return false;
  return true;
}

/// Log-spaced integer schedule from lo to hi inclusive; duplicates dropped.
inline std::vector<std::int64_t> log_spaced_schedule(std::int64_t lo, std::int64_t hi, int count) {
  if (lo < 1 || hi < lo || count < 1) throw InvalidArgument("bad log schedule");
  std::vector<std::int64_t> out;
  for (int i = 0; i < count; ++i) {
    const double f = count == 1 ? 0.0 : double(i) / double(count - 1);
    const auto n = static_cast<std::int64_t>(
        std::llround(std::exp(std::log(double(lo)) + f * (std::log(double(hi)) - std::log(double(lo))))));
    if (out.empty() || n != out.back()) out.push_back(n);
  }
  return out;
}

namespace detail {

inline void require_increasing(const std::vector<std::int64_t>& schedule) {
  if (schedule.empty()) throw InvalidArgument("N schedule must not be empty");
  for (std::size_t i = 0; i < schedule.size(); ++i) {
    if (schedule[i] < 1) throw InvalidArgument("N schedule entries must be >= 1");
    if (i > 0 && schedule[i] <= schedule[i - 1])
      throw InvalidArgument("N schedule must be strictly increasing");
  }
}

template <typename Scalar>
ConvergenceRecord<Scalar> compare(std::int64_t n, Scalar k, const Matrix2c<Scalar>& measured,
                                  const Matrix2c<Scalar>& reference, Scalar offdiag_predicted) {
  const Matrix2c<Scalar> d = measured - reference;
  return {n,
          k,
          d.cwiseAbs().maxCoeff(),
          std::max(std::abs(d(0, 1)), std::abs(d(1, 0))),
          offdiag_predicted,
          std::max(std::abs(d(0, 0)), std::abs(d(1, 1)))};
}

} // namespace detail

/// Distance of the closed-form N-cell matrix from the identity over a schedule.
template <typename Scalar>
std::vector<ConvergenceRecord<Scalar>> convergence_study(WaveNumber<Scalar> k, Scalar v, Scalar total_length,
                                                         const std::vector<std::int64_t>& n_schedule) {
  detail::require_increasing(n_schedule);
  std::vector<ConvergenceRecord<Scalar>> out;
  out.reserve(n_schedule.size());
  for (const auto n : n_schedule) {
    const auto omega = periodic_matrix(PeriodicSpec<Scalar>(v, n, total_length), k);
    const Scalar predicted = std::abs(predict_asymptotics(k, v, total_length, n).offdiag_scale_pred);
    out.push_back(detail::compare<Scalar>(n, k.value(), omega.matrix(), Matrix2c<Scalar>::Identity(), predicted));
  }
  return out;
}

template <typename Scalar = double>
struct HeightFit {
  Complex<Scalar> height;
  Scalar residual; // max |B(height) - target|
  int iterations;
};

/// Complex height U whose single slab of width L on [0, L] best matches
/// `target` in the entrywise least-squares sense. Gauss-Newton on the
/// holomorphic map U -> B(U), with halving line search.
template <typename Scalar>
HeightFit<Scalar> fit_effective_height(const TransferMatrix<Scalar>& target, Scalar total_length,
                                       Complex<Scalar> initial) {
  using Vec4 = Eigen::Matrix<Complex<Scalar>, 4, 1>;
  const auto k = target.at_k();
  auto residual = [&](Complex<Scalar> u) -> Vec4 {
    const Matrix2c<Scalar> d = barrier_matrix(k, u, total_length).matrix() - target.matrix();
    return Eigen::Map<const Vec4>(d.data());
  };

  Complex<Scalar> u = initial;
  Vec4 r = residual(u);
  int it = 0;
  for (; it < 100; ++it) {
    const Scalar h = std::sqrt(std::numeric_limits<Scalar>::epsilon()) * std::max(Scalar(1), std::abs(u));
    const Vec4 jac = (residual(u + h) - residual(u - h)) / (Scalar(2) * h);
    const Scalar jj = jac.squaredNorm();
    if (jj == Scalar(0)) break;
    Complex<Scalar> step = -jac.dot(r) / jj; // dot() conjugates its left operand
    bool improved = false;
    for (int halving = 0; halving < 40; ++halving) {
      const Vec4 trial = residual(u + step);
      if (trial.squaredNorm() < r.squaredNorm()) {
        u += step;
        r = trial;
        improved = true;
        break;
      }
      step /= Scalar(2);
    }
    if (!improved || std::abs(step) <= Scalar(1e-15) * std::max(Scalar(1), std::abs(u))) break;
  }
  return {u, r.cwiseAbs().maxCoeff(), it};
}

enum class HeightMatch { both, full_imbalance, slab_average, neither };

inline std::string to_string(HeightMatch m) {
  switch (m) {
  case HeightMatch::both: return "both";
  case HeightMatch::full_imbalance: return "full_imbalance";
  case HeightMatch::slab_average: return "slab_average";
  case HeightMatch::neither: return "neither";
  }
  return "neither";
}

template <typename Scalar = double>
struct GeneralizedLimitResult {
  Complex<Scalar> effective_height; // fitted at the largest N
  Scalar fit_residual;
  std::vector<Complex<Scalar>> fitted_heights; // one per schedule entry
  std::vector<ConvergenceRecord<Scalar>> records; // Omega(N) against B(effective_height)
  Complex<Scalar> full_imbalance_height;  // v1 + i (1 - eps) v2
  Complex<Scalar> slab_average_height;    // v1 + i (1 - eps) v2 / 2
  Scalar full_imbalance_residual;         // max |B(candidate) - Omega(N_max)|
  Scalar slab_average_residual;
  HeightMatch match;
  bool converged;
};

/// Alternating v1 + i v2 / v1 - i eps v2 stacks over a schedule of N, each
/// composed slab by slab, and the single barrier of width L they approach.
///
/// Convergence is judged on the fitted heights: |U(N) - U(N_max)| must shrink
/// along the schedule (2% jitter allowed). A failure is flagged, not thrown.
template <typename Scalar>
GeneralizedLimitResult<Scalar> generalized_limit_study(Scalar v1, Scalar v2, Scalar eps, Scalar total_length,
                                                       const std::vector<std::int64_t>& n_schedule,
                                                       WaveNumber<Scalar> k) {
  detail::require_increasing(n_schedule);
  GeneralizedLimitResult<Scalar> res;
  res.full_imbalance_height = Complex<Scalar>(v1, (Scalar(1) - eps) * v2);
  res.slab_average_height = Complex<Scalar>(v1, (Scalar(1) - eps) * v2 / Scalar(2));

  std::vector<TransferMatrix<Scalar>> omegas;
  omegas.reserve(n_schedule.size());
  Complex<Scalar> guess = res.slab_average_height;
  for (const auto n : n_schedule) {
    omegas.push_back(compose_stack(build_alternating(v1, v2, eps, n, total_length), k));
    const auto fit = fit_effective_height(omegas.back(), total_length, guess);
    res.fitted_heights.push_back(fit.height);
    guess = fit.height;
    res.fit_residual = fit.residual;
  }
  res.effective_height = res.fitted_heights.back();

  const Matrix2c<Scalar> limit = barrier_matrix(k, res.effective_height, total_length).matrix();
  for (std::size_t i = 0; i < n_schedule.size(); ++i)
    res.records.push_back(detail::compare(n_schedule[i], k.value(), omegas[i].matrix(), limit, Scalar(0)));

  const auto& last = omegas.back();
  res.full_imbalance_residual =
      max_abs_difference(barrier_matrix(k, res.full_imbalance_height, total_length), last);
  res.slab_average_residual = max_abs_difference(barrier_matrix(k, res.slab_average_height, total_length), last);

  auto near = [&](Complex<Scalar> c) {
    return std::abs(res.effective_height - c) <= Scalar(0.05) + Scalar(0.01) * std::abs(c);
  };
  const bool a = near(res.full_imbalance_height), b = near(res.slab_average_height);
  res.match = a && b ? HeightMatch::both
              : a    ? HeightMatch::full_imbalance
              : b    ? HeightMatch::slab_average
                     : HeightMatch::neither;

  std::vector<Scalar> drift;
  for (std::size_t i = 0; i + 1 < res.fitted_heights.size(); ++i)
    drift.push_back(std::abs(res.fitted_heights[i] - res.effective_height));
  res.converged = std::isfinite(res.fit_residual) && is_decreasing_within(drift, Scalar(0.02));
  return res;
}

} // namespace ptscatter
