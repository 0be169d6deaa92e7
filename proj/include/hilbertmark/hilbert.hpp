#ifndef HILBERTMARK_HILBERT_HPP_
#define HILBERTMARK_HILBERT_HPP_

// Axis-wise discrete analytic signal and its amplitude/phase decomposition.
//
// A real slice x of length N is mapped to x + i*H{x}, where the discrete
// Hilbert transform H is realized in the DFT domain: the DC bin and (for even
// N) the Nyquist bin keep weight 1, strictly positive frequencies get weight
// 2 and strictly negative frequencies weight 0.

#include <cmath>
#include <complex>
#include <numbers>
#include <vector>

#include <Eigen/Dense>
#include <unsupported/Eigen/FFT>

#include "hilbertmark/types.hpp"

namespace hilbertmark {

template <typename Scalar>
using ComplexVector = Eigen::Matrix<std::complex<Scalar>, Eigen::Dynamic, 1>;

template <typename Scalar>
using RealVector = Eigen::Matrix<Scalar, Eigen::Dynamic, 1>;

/// Amplitude/phase pair such that amplitude .* cos(phase) equals the source.
template <typename Scalar>
struct AnalyticDecomposition {
  Field<Scalar> amplitude;  ///< modulus, >= 0
  Field<Scalar> phase;      ///< principal argument in (-pi, pi]
  Axis axis = Axis::columns;

  Eigen::Index rows() const { return amplitude.rows(); }
  Eigen::Index cols() const { return amplitude.cols(); }
};

using Decomposition = AnalyticDecomposition<double>;

/// DFT-bin weight of the analytic-signal multiplier for bin k of an N-point DFT.
template <typename Scalar>
constexpr Scalar analytic_bin_weight(Eigen::Index k, Eigen::Index n) {
  if (k == 0) return Scalar(1);
  if (n % 2 == 0 && k == n / 2) return Scalar(1);
  return k < (n + 1) / 2 ? Scalar(2) : Scalar(0);
}

namespace detail {

/// Analytic signal of one slice, reusing the caller's FFT plan cache.
template <typename Scalar, typename Derived>
ComplexVector<Scalar> analytic_slice(Eigen::FFT<Scalar>& fft, const Eigen::MatrixBase<Derived>& x) {
  using Complex = std::complex<Scalar>;
  const Eigen::Index n = x.size();
  // kissfft cannot plan a 1-point transform; the DC bin is the whole signal anyway.
  if (n == 1) return ComplexVector<Scalar>::Constant(1, Complex(x(0), Scalar(0)));
  std::vector<Complex> time(static_cast<std::size_t>(n));
  for (Eigen::Index k = 0; k < n; ++k) time[static_cast<std::size_t>(k)] = Complex(x(k), Scalar(0));

  std::vector<Complex> spectrum(time.size());
  fft.fwd(spectrum.data(), time.data(), n);
  for (Eigen::Index k = 0; k < n; ++k) {
    spectrum[static_cast<std::size_t>(k)] *= analytic_bin_weight<Scalar>(k, n);
  }
  fft.inv(time.data(), spectrum.data(), n);

  // The real part of the analytic signal is the input itself; only the
  // quadrature component comes from the inverse transform.
  ComplexVector<Scalar> out(n);
  for (Eigen::Index k = 0; k < n; ++k) out(k) = Complex(x(k), time[static_cast<std::size_t>(k)].imag());
  return out;
}

template <typename Scalar>
Scalar principal_phase(const std::complex<Scalar>& z) {
  if (z == std::complex<Scalar>(0)) return Scalar(0);
  Scalar p = std::arg(z);
  if (p <= -std::numbers::pi_v<Scalar>) p = std::numbers::pi_v<Scalar>;
  return p;
}

}  // namespace detail

/// Discrete analytic signal of a real vector. Throws ValidationError on
/// empty or non-finite input.
template <typename Derived>
ComplexVector<typename Derived::Scalar> analytic_signal(const Eigen::MatrixBase<Derived>& signal) {
  using Scalar = typename Derived::Scalar;
  if (signal.size() < 1) throw ValidationError("analytic_signal: empty input");
  if (!signal.allFinite()) throw ValidationError("analytic_signal: non-finite input");
  Eigen::FFT<Scalar> fft;
  return detail::analytic_slice<Scalar>(fft, signal);
}

/// Runs `analytic_signal` over every column (or row) of `source` and splits
/// each sample into modulus and principal argument.
template <typename Derived>
AnalyticDecomposition<typename Derived::Scalar> decompose(const Eigen::MatrixBase<Derived>& source,
                                                          Axis axis = Axis::columns) {
  using Scalar = typename Derived::Scalar;
  if (source.rows() < 1 || source.cols() < 1) throw ValidationError("decompose: empty field");
  if (!source.allFinite()) throw ValidationError("decompose: non-finite input");

  AnalyticDecomposition<Scalar> dec;
  dec.axis = axis;
  dec.amplitude.resize(source.rows(), source.cols());
  dec.phase.resize(source.rows(), source.cols());

  Eigen::FFT<Scalar> fft;
  const Eigen::Index slices = axis == Axis::columns ? source.cols() : source.rows();
  for (Eigen::Index s = 0; s < slices; ++s) {
    ComplexVector<Scalar> z;
    if (axis == Axis::columns) {
      z = detail::analytic_slice<Scalar>(fft, RealVector<Scalar>(source.col(s)));
    } else {
      z = detail::analytic_slice<Scalar>(fft, RealVector<Scalar>(source.row(s).transpose()));
    }
    for (Eigen::Index k = 0; k < z.size(); ++k) {
      const Scalar amp = std::abs(z(k));
      const Scalar ph = amp == Scalar(0) ? Scalar(0) : detail::principal_phase(z(k));
      if (axis == Axis::columns) {
        dec.amplitude(k, s) = amp;
        dec.phase(k, s) = ph;
      } else {
        dec.amplitude(s, k) = amp;
        dec.phase(s, k) = ph;
      }
    }
  }
  return dec;
}

/// amplitude .* cos(phase)
template <typename Scalar>
Field<Scalar> reconstruct(const AnalyticDecomposition<Scalar>& dec) {
  require_same_shape(dec.amplitude, dec.phase, "reconstruct");
  return (dec.amplitude.array() * dec.phase.array().cos()).matrix();
}

}  // namespace hilbertmark

#endif  // HILBERTMARK_HILBERT_HPP_
