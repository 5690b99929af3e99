#pragma once

// Transfer-matrix algebra for one-dimensional stationary scattering.
//
// Units: hbar = 1, 2m = 1, so H = -d^2/dx^2 + V(x) and E = k^2.
//
// Plane-wave convention: outside the scatterer
//     psi(x) = A e^{ikx} + B e^{-ikx},
// and the transfer matrix M maps the left amplitudes onto the right ones,
//     (A+, B+)^T = M (A-, B-)^T.
// All amplitudes are referenced to the global origin x = 0, so matrices of
// disjoint regions compose by plain multiplication, rightmost region first:
//     M_net = M_2 * M_1   (region 1 to the left of region 2).

#include <Eigen/Core>

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstdint>
#include <limits>
#include <stdexcept>
#include <string>
#include <vector>

namespace ptscatter {

class Error : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

/// Bad parameters: non-positive k, overlapping layers, empty ranges, ...
class InvalidArgument : public Error {
public:
  using Error::Error;
};

/// Two matrices evaluated at different wave numbers were combined.
class IncompatibleMatrices : public Error {
public:
  using Error::Error;
};

/// |M22| vanished: 1/M22 has a pole (spectral-singularity-like point).
class SpectralPole : public Error {
public:
  using Error::Error;
};

/// The ODE step controller could not meet the requested tolerance.
class IntegrationFailure : public Error {
public:
  using Error::Error;
};

template <typename Scalar> using Complex = std::complex<Scalar>;
template <typename Scalar> using Matrix2c = Eigen::Matrix<Complex<Scalar>, 2, 2>;

template <typename Scalar> constexpr Complex<Scalar> imag_unit{Scalar(0), Scalar(1)};

/// Wave number of the incident plane wave. Always finite and > 0.
template <typename Scalar = double>
class WaveNumber {
public:
  explicit WaveNumber(Scalar k) : k_(k) {
    if (!(k > Scalar(0)) || !std::isfinite(k))
      throw InvalidArgument("wave number k must be finite and > 0 (got " +
                            std::to_string(static_cast<double>(k)) + ")");
  }

  Scalar value() const { return k_; }
  operator Scalar() const { return k_; }

  friend bool operator==(WaveNumber a, WaveNumber b) { return a.k_ == b.k_; }

  template <typename To> WaveNumber<To> cast() const { return WaveNumber<To>(static_cast<To>(k_)); }

private:
  Scalar k_;
};

/// One rectangular slab of constant complex potential on [offset, offset + width).
template <typename Scalar = double>
struct Layer {
  Complex<Scalar> height;
  Scalar width;
  Scalar offset;

  Layer(Complex<Scalar> height_, Scalar width_, Scalar offset_)
      : height(height_), width(width_), offset(offset_) {
    if (!(width > Scalar(0)) || !std::isfinite(width))
      throw InvalidArgument("layer width must be finite and > 0");
    if (!std::isfinite(height.real()) || !std::isfinite(height.imag()))
      throw InvalidArgument("layer height must be finite");
    if (!std::isfinite(offset))
      throw InvalidArgument("layer offset must be finite");
  }

  Scalar right_edge() const { return offset + width; }

  template <typename To> Layer<To> cast() const {
    return Layer<To>(Complex<To>(static_cast<To>(height.real()), static_cast<To>(height.imag())),
                     static_cast<To>(width), static_cast<To>(offset));
  }
};

/// Ordered, non-overlapping sequence of layers. Gaps are free space.
template <typename Scalar = double>
class PotentialStack {
public:
  PotentialStack() = default;

  explicit PotentialStack(std::vector<Layer<Scalar>> layers) : layers_(std::move(layers)) {
    std::stable_sort(layers_.begin(), layers_.end(),
                     [](const Layer<Scalar>& a, const Layer<Scalar>& b) { return a.offset < b.offset; });
    for (std::size_t i = 1; i < layers_.size(); ++i) {
      const Scalar edge = layers_[i - 1].right_edge();
      const Scalar next = layers_[i].offset;
      // Contiguous layers built from i*w offsets may overlap by a few ulps.
      const Scalar slack = Scalar(64) * std::numeric_limits<Scalar>::epsilon() *
                           std::max({Scalar(1), std::abs(edge), std::abs(next)});
      if (edge - next > slack)
        throw InvalidArgument("layers " + std::to_string(i - 1) + " and " + std::to_string(i) +
                              " overlap");
    }
  }

  const std::vector<Layer<Scalar>>& layers() const { return layers_; }
  std::size_t size() const { return layers_.size(); }
  bool empty() const { return layers_.empty(); }

  Scalar left_edge() const { return layers_.empty() ? Scalar(0) : layers_.front().offset; }

  Scalar right_edge() const {
    Scalar edge = left_edge();
    for (const auto& layer : layers_) edge = std::max(edge, layer.right_edge());
    return edge;
  }

  /// L = rightmost edge - leftmost edge.
  Scalar total_support() const { return right_edge() - left_edge(); }

  /// V(x), right-continuous at interfaces; zero in gaps and outside.
  Complex<Scalar> potential_at(Scalar x) const {
    auto it = std::upper_bound(layers_.begin(), layers_.end(), x,
                               [](Scalar v, const Layer<Scalar>& l) { return v < l.offset; });
    if (it == layers_.begin()) return {};
    --it;
    return x < it->right_edge() ? it->height : Complex<Scalar>{};
  }

  /// Sorted layer edges, duplicates removed.
  std::vector<Scalar> breakpoints() const {
    std::vector<Scalar> pts;
    pts.reserve(2 * layers_.size());
    for (const auto& l : layers_) {
      pts.push_back(l.offset);
      pts.push_back(l.right_edge());
    }
    std::sort(pts.begin(), pts.end());
    pts.erase(std::unique(pts.begin(), pts.end()), pts.end());
    return pts;
  }

  template <typename To> PotentialStack<To> cast() const {
    std::vector<Layer<To>> out;
    out.reserve(layers_.size());
    for (const auto& l : layers_) out.push_back(l.template cast<To>());
    return PotentialStack<To>(std::move(out));
  }

private:
  std::vector<Layer<Scalar>> layers_;
};

/// 2x2 complex transfer matrix tagged with the wave number it belongs to.
///
/// Unimodularity (det = 1) is a property of every physical matrix but is not
/// enforced here; tests measure the drift instead.
template <typename Scalar = double>
class TransferMatrix {
public:
  using ComplexType = Complex<Scalar>;
  using MatrixType = Matrix2c<Scalar>;

  TransferMatrix(const MatrixType& m, WaveNumber<Scalar> k) : m_(m), k_(k) {}

  TransferMatrix(ComplexType m11, ComplexType m12, ComplexType m21, ComplexType m22,
                 WaveNumber<Scalar> k)
      : k_(k) {
    m_ << m11, m12, m21, m22;
  }

  static TransferMatrix identity(WaveNumber<Scalar> k) {
    return TransferMatrix(MatrixType::Identity(), k);
  }

  const MatrixType& matrix() const { return m_; }
  WaveNumber<Scalar> at_k() const { return k_; }

  ComplexType m11() const { return m_(0, 0); }
  ComplexType m12() const { return m_(0, 1); }
  ComplexType m21() const { return m_(1, 0); }
  ComplexType m22() const { return m_(1, 1); }
  ComplexType operator()(int i, int j) const { return m_(i, j); }

  ComplexType determinant() const { return m_(0, 0) * m_(1, 1) - m_(0, 1) * m_(1, 0); }

  /// Largest entry modulus.
  Scalar max_abs() const { return m_.cwiseAbs().maxCoeff(); }

private:
  MatrixType m_;
  WaveNumber<Scalar> k_;
};

/// Amplitudes of e^{+ikx} and e^{-ikx} on the right (+) and left (-).
template <typename Scalar = double>
struct PlaneWaveAmplitudes {
  Complex<Scalar> a_plus;
  Complex<Scalar> b_plus;
  Complex<Scalar> a_minus;
  Complex<Scalar> b_minus;
};

/// Right amplitudes from left amplitudes.
template <typename Scalar>
PlaneWaveAmplitudes<Scalar> propagate(const TransferMatrix<Scalar>& m, Complex<Scalar> a_minus,
                                      Complex<Scalar> b_minus) {
  return {m.m11() * a_minus + m.m12() * b_minus, m.m21() * a_minus + m.m22() * b_minus, a_minus,
          b_minus};
}

/// m2 * m1: the region of m1 lies to the left of the region of m2.
template <typename Scalar>
TransferMatrix<Scalar> multiply(const TransferMatrix<Scalar>& m2, const TransferMatrix<Scalar>& m1) {
  if (!(m2.at_k() == m1.at_k()))
    throw IncompatibleMatrices("cannot compose transfer matrices at k=" +
                               std::to_string(static_cast<double>(m2.at_k().value())) + " and k=" +
                               std::to_string(static_cast<double>(m1.at_k().value())));
  return TransferMatrix<Scalar>(m2.matrix() * m1.matrix(), m1.at_k());
}

template <typename Scalar>
TransferMatrix<Scalar> operator*(const TransferMatrix<Scalar>& m2, const TransferMatrix<Scalar>& m1) {
  return multiply(m2, m1);
}

/// n-fold repeated product m * m * ... * m. n = 0 gives the identity.
///
/// Deliberately O(n): this is the reference path the closed-form power is
/// checked against.
template <typename Scalar>
TransferMatrix<Scalar> power_direct(const TransferMatrix<Scalar>& m, std::int64_t n) {
  if (n < 0) throw InvalidArgument("power_direct needs n >= 0");
  Matrix2c<Scalar> acc = Matrix2c<Scalar>::Identity();
  for (std::int64_t i = 0; i < n; ++i) acc = m.matrix() * acc;
  return TransferMatrix<Scalar>(acc, m.at_k());
}

/// Transfer matrix of the same scatterer shifted right by d:
/// D(kd) M D(-kd) with D(theta) = diag(e^{-i theta}, e^{i theta}).
template <typename Scalar>
TransferMatrix<Scalar> translate(const TransferMatrix<Scalar>& m, Scalar d) {
  if (d == Scalar(0)) return m;
  const Scalar k = m.at_k().value();
  const Complex<Scalar> phase = std::polar(Scalar(1), Scalar(-2) * k * d);
  return TransferMatrix<Scalar>(m.m11(), m.m12() * phase, m.m21() * std::conj(phase), m.m22(),
                                m.at_k());
}

/// max_ij |a_ij - b_ij|.
template <typename Scalar>
Scalar max_abs_difference(const TransferMatrix<Scalar>& a, const TransferMatrix<Scalar>& b) {
  return (a.matrix() - b.matrix()).cwiseAbs().maxCoeff();
}

/// max_ij |a_ij - b_ij| / max_ij |b_ij|.
template <typename Scalar>
Scalar max_relative_difference(const TransferMatrix<Scalar>& a, const TransferMatrix<Scalar>& ref) {
  return max_abs_difference(a, ref) / std::max(ref.max_abs(), std::numeric_limits<Scalar>::min());
}

/// max_ij |m_ij - delta_ij|.
template <typename Scalar>
Scalar deviation_from_identity(const TransferMatrix<Scalar>& m) {
  return (m.matrix() - Matrix2c<Scalar>::Identity()).cwiseAbs().maxCoeff();
}

template <typename Scalar>
Scalar determinant_error(const TransferMatrix<Scalar>& m) {
  return std::abs(m.determinant() - Complex<Scalar>(1));
}

} // namespace ptscatter
