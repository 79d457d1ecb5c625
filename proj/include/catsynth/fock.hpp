#pragma once

// Truncated single-mode Fock space: state vectors, coherent and displaced
// number states, displacement-operator matrices, overlaps.

#include <complex>
#include <cstddef>
#include <span>
#include <vector>

namespace catsynth {

using Complex = std::complex<double>;

/// Tail weight 1 - sum|c_n|^2 that constructors approximating an
/// infinite-dimensional state are allowed to drop.
inline constexpr double kTailTolerance = 1e-10;

/// Pure single-mode state with amplitudes for photon numbers 0..cutoff.
class FockVector {
 public:
  FockVector() : amps_(1) {}
  explicit FockVector(std::size_t cutoff) : amps_(cutoff + 1) {}
  explicit FockVector(std::vector<Complex> amplitudes);

  static FockVector basis(std::size_t n, std::size_t cutoff);

  std::size_t cutoff() const noexcept { return amps_.size() - 1; }
  std::size_t size() const noexcept { return amps_.size(); }

  Complex operator[](std::size_t n) const noexcept { return amps_[n]; }
  Complex& operator[](std::size_t n) noexcept { return amps_[n]; }
  /// Amplitude at n, zero beyond the cutoff.
  Complex at_or_zero(std::size_t n) const noexcept { return n < amps_.size() ? amps_[n] : Complex{}; }

  std::span<const Complex> amplitudes() const noexcept { return amps_; }
  std::span<Complex> amplitudes() noexcept { return amps_; }

  double norm_squared() const noexcept;
  bool is_finite() const noexcept;

  /// Copy scaled to unit norm. Throws ZeroProbability on a null vector.
  FockVector normalized() const;
  /// Copy zero-padded (or truncated) to a new cutoff.
  FockVector resized(std::size_t cutoff) const;

 private:
  std::vector<Complex> amps_;
};

/// Dense complex matrix, row-major.
class ComplexMatrix {
 public:
  ComplexMatrix() = default;
  ComplexMatrix(std::size_t rows, std::size_t cols) : rows_(rows), cols_(cols), data_(rows * cols) {}

  static ComplexMatrix identity(std::size_t n);

  std::size_t rows() const noexcept { return rows_; }
  std::size_t cols() const noexcept { return cols_; }

  Complex operator()(std::size_t r, std::size_t c) const noexcept { return data_[r * cols_ + c]; }
  Complex& operator()(std::size_t r, std::size_t c) noexcept { return data_[r * cols_ + c]; }

  ComplexMatrix adjoint() const;
  ComplexMatrix operator*(const ComplexMatrix& rhs) const;

 private:
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<Complex> data_;
};

/// ln sqrt(n!) from a cached table.
double log_sqrt_factorial(std::size_t n);
/// sqrt(n!) in floating point; overflows to inf past n = 170.
double sqrt_factorial(std::size_t n);

/// Automatic cutoff ceil(M^2 + 6M + 20) for the largest amplitude M in a
/// computation.
std::size_t auto_cutoff(double max_amplitude);

/// Coherent amplitudes e^{-|g|^2/2} g^n / sqrt(n!) for n < count, without
/// any tail check.
std::vector<Complex> coherent_amplitudes(Complex gamma, std::size_t count);

/// |gamma> truncated at cutoff. Throws CutoffTooSmall if the dropped
/// Poisson tail exceeds kTailTolerance.
FockVector coherent_vector(Complex gamma, std::size_t cutoff);

/// Matrix of D(alpha) = exp(alpha a^+ - alpha^* a) on photon numbers
/// 0..cutoff, built element-wise from the associated-Laguerre closed form.
/// Requires |alpha|^2 + 6|alpha| + 10 <= cutoff.
ComplexMatrix displacement_matrix(Complex alpha, std::size_t cutoff);
/// Single-threaded reference for displacement_matrix.
ComplexMatrix displacement_matrix_serial(Complex alpha, std::size_t cutoff);

/// D(alpha)|k>, i.e. column k of displacement_matrix.
FockVector displaced_number_state(std::size_t k, Complex alpha, std::size_t cutoff);

/// Matrix-vector product; the vector is zero-padded or truncated to the
/// matrix column count.
FockVector apply(const ComplexMatrix& op, const FockVector& state);

/// sum conj(a_n) b_n with implicit zero padding.
Complex inner_product(const FockVector& a, const FockVector& b);

/// |<a|b>|^2 for states normalized within 1e-9; NotNormalized otherwise.
double fidelity_pure(const FockVector& a, const FockVector& b);

}  // namespace catsynth
