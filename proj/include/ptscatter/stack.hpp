#pragma once

// N identical gain/loss cells on [0, L], L = 2Nb.
//
// With the cell matrix written as D(2kb) K, D(theta) = diag(e^{-i theta}, e^{i theta}),
// and cell j placed by translate(., 2jb), the product telescopes to D(kL) K^N.
// K is unimodular with trace 2 xi, so K^N = U_{N-1}(xi) K - U_{N-2}(xi) I,
// which gives the closed form in periodic_matrix().

#include "ptscatter/cell.hpp"
#include "ptscatter/chebyshev.hpp"
#include "ptscatter/core.hpp"

#include <cstdint>
#include <vector>

namespace ptscatter {

template <typename Scalar = double>
class PeriodicSpec {
public:
  PeriodicSpec(Scalar v, std::int64_t n_cells, Scalar total_length)
      : v_(v), n_(n_cells), length_(total_length) {
    if (!(v > Scalar(0)) || !std::isfinite(v)) throw InvalidArgument("V must be finite and > 0");
    if (n_cells < 1) throw InvalidArgument("need at least one cell");
    if (!(total_length > Scalar(0)) || !std::isfinite(total_length))
      throw InvalidArgument("total length L must be finite and > 0");
  }

  Scalar v() const { return v_; }
  std::int64_t n_cells() const { return n_; }
  Scalar total_length() const { return length_; }
  /// Half-cell width, always derived from L and N.
  Scalar b() const { return length_ / (Scalar(2) * static_cast<Scalar>(n_)); }

private:
  Scalar v_;
  std::int64_t n_;
  Scalar length_;
};

/// Closed-form N-cell matrix
///     [ (T_N + i chi U_{N-1}) e^{-ikL}    i (eta - tau) U_{N-1} e^{-ikL} ]
///     [ i (eta + tau) U_{N-1} e^{ikL}     (T_N - i chi U_{N-1}) e^{ikL}  ]
/// with T_N, U_{N-1} evaluated at xi. Cost is independent of N.
template <typename Scalar>
TransferMatrix<Scalar> periodic_matrix(const PeriodicSpec<Scalar>& spec, WaveNumber<Scalar> k) {
  const auto cell = unit_cell_elements(k, spec.v(), spec.b());
  const auto cheb = chebyshev_pair(spec.n_cells(), cell.xi, cell.xi_gap);
  const auto i = imag_unit<Scalar>;
  const Scalar u = cheb.u_n_minus_1;
  const Complex<Scalar> e = std::polar(Scalar(1), k.value() * spec.total_length());
  return TransferMatrix<Scalar>(Complex<Scalar>(cheb.t_n, cell.chi * u) * std::conj(e),
                                i * ((cell.eta - cell.tau) * u) * std::conj(e),
                                i * ((cell.eta + cell.tau) * u) * e,
                                Complex<Scalar>(cheb.t_n, -cell.chi * u) * e, k);
}

/// Product of per-layer slab matrices, leftmost layer applied first.
template <typename Scalar>
TransferMatrix<Scalar> compose_stack(const PotentialStack<Scalar>& stack, WaveNumber<Scalar> k) {
  Matrix2c<Scalar> acc = Matrix2c<Scalar>::Identity();
  for (const auto& layer : stack.layers()) acc = barrier_matrix(k, layer).matrix() * acc;
  return TransferMatrix<Scalar>(acc, k);
}

/// 2N contiguous layers on [0, L] of alternating heights v1 + i v2 and
/// v1 - i eps v2, each L/(2N) wide. (0, V, 1) is the balanced gain/loss stack.
template <typename Scalar>
PotentialStack<Scalar> build_alternating(Scalar v1, Scalar v2, Scalar eps, std::int64_t n_cells,
                                         Scalar total_length) {
  if (n_cells < 1) throw InvalidArgument("need at least one cell");
  if (!(total_length > Scalar(0)) || !std::isfinite(total_length))
    throw InvalidArgument("total length L must be finite and > 0");
  const std::int64_t slabs = 2 * n_cells;
  const Scalar denom = static_cast<Scalar>(slabs);
  const Scalar width = total_length / denom;
  const Complex<Scalar> gain(v1, v2);
  const Complex<Scalar> loss(v1, -eps * v2);
  std::vector<Layer<Scalar>> layers;
  layers.reserve(static_cast<std::size_t>(slabs));
  for (std::int64_t j = 0; j < slabs; ++j) {
    // i*L/(2N) per slab, never a running sum of widths.
    const Scalar offset = static_cast<Scalar>(j) * total_length / denom;
    layers.emplace_back(j % 2 == 0 ? gain : loss, width, offset);
  }
  return PotentialStack<Scalar>(std::move(layers));
}

template <typename Scalar>
PotentialStack<Scalar> build_periodic(const PeriodicSpec<Scalar>& spec) {
  return build_alternating(Scalar(0), spec.v(), Scalar(1), spec.n_cells(), spec.total_length());
}

} // namespace ptscatter
