#include "catsynth/fock.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "catsynth/error.hpp"

namespace catsynth {

std::string_view to_string(ErrorKind kind) noexcept {
  switch (kind) {
    case ErrorKind::CutoffTooSmall: return "CutoffTooSmall";
    case ErrorKind::IndexOutOfRange: return "IndexOutOfRange";
    case ErrorKind::NotNormalized: return "NotNormalized";
    case ErrorKind::DegenerateQudit: return "DegenerateQudit";
    case ErrorKind::LeadingTermVanishes: return "LeadingTermVanishes";
    case ErrorKind::NonConvergence: return "NonConvergence";
    case ErrorKind::ZeroProbability: return "ZeroProbability";
    case ErrorKind::DegenerateBS: return "DegenerateBS";
    case ErrorKind::UnsupportedInput: return "UnsupportedInput";
    case ErrorKind::AllStartsInfeasible: return "AllStartsInfeasible";
    case ErrorKind::InvalidArgument: return "InvalidArgument";
  }
  return "Unknown";
}

namespace {

constexpr std::size_t kFactorialTableSize = 4096;

const std::vector<double>& log_sqrt_factorial_table() {
  static const std::vector<double> table = [] {
    std::vector<double> t(kFactorialTableSize);
    t[0] = 0.0;
    for (std::size_t n = 1; n < t.size(); ++n) t[n] = t[n - 1] + 0.5 * std::log(static_cast<double>(n));
    return t;
  }();
  return table;
}

const std::vector<double>& sqrt_factorial_table() {
  static const std::vector<double> table = [] {
    std::vector<double> t(171);
    t[0] = 1.0;
    for (std::size_t n = 1; n < t.size(); ++n) t[n] = t[n - 1] * std::sqrt(static_cast<double>(n));
    return t;
  }();
  return table;
}

void require_displacement_cutoff(Complex alpha, std::size_t cutoff) {
  const double a = std::abs(alpha);
  if (a * a + 6.0 * a + 10.0 > static_cast<double>(cutoff)) {
    throw Error(ErrorKind::CutoffTooSmall, "displacement |alpha|=" + std::to_string(a) +
                                               " needs cutoff >= |alpha|^2+6|alpha|+10, got " +
                                               std::to_string(cutoff));
  }
}

// Laguerre values L_j^{(k)}(x) for j = 0..count-1 by the forward three-term
// recurrence (j+1) L_{j+1} = (2j+1+k-x) L_j - (j+k) L_{j-1}.
void laguerre_column(std::size_t k, double x, std::span<double> out) {
  if (out.empty()) return;
  out[0] = 1.0;
  if (out.size() == 1) return;
  const double kd = static_cast<double>(k);
  out[1] = 1.0 + kd - x;
  for (std::size_t j = 1; j + 1 < out.size(); ++j) {
    const double jd = static_cast<double>(j);
    out[j + 1] = ((2.0 * jd + 1.0 + kd - x) * out[j] - (jd + kd) * out[j - 1]) / (jd + 1.0);
  }
}

// Fills the k-th sub- and super-diagonal of D(alpha):
//   <n+k|D|n> = e^{-x/2} sqrt(n!/(n+k)!) alpha^k      L_n^{(k)}(x)
//   <n|D|n+k> = e^{-x/2} sqrt(n!/(n+k)!) (-alpha^*)^k L_n^{(k)}(x)
void fill_diagonal(ComplexMatrix& d, Complex alpha, std::size_t k, std::vector<double>& lag) {
  const std::size_t dim = d.rows();
  const std::size_t len = dim - k;
  const double x = std::norm(alpha);
  const double mag = std::abs(alpha);
  lag.resize(len);
  laguerre_column(k, x, lag);
  const double arg = std::arg(alpha);
  const Complex phase_lower = std::polar(1.0, static_cast<double>(k) * arg);
  // (-alpha^*)^k = (-1)^k e^{-ik arg}
  const Complex phase_upper = std::polar((k % 2 == 0) ? 1.0 : -1.0, -static_cast<double>(k) * arg);
  const double log_mag_k = k == 0 ? 0.0 : static_cast<double>(k) * std::log(mag);
  for (std::size_t n = 0; n < len; ++n) {
    const double log_pref = -0.5 * x + log_mag_k + log_sqrt_factorial(n) - log_sqrt_factorial(n + k);
    const double value = std::exp(log_pref) * lag[n];
    d(n + k, n) = value * phase_lower;
    if (k != 0) d(n, n + k) = value * phase_upper;
  }
}

}  // namespace

FockVector::FockVector(std::vector<Complex> amplitudes) : amps_(std::move(amplitudes)) {
  if (amps_.empty()) amps_.resize(1);
}

FockVector FockVector::basis(std::size_t n, std::size_t cutoff) {
  if (n > cutoff) throw Error(ErrorKind::IndexOutOfRange, "basis index " + std::to_string(n) + " > cutoff");
  FockVector v(cutoff);
  v[n] = 1.0;
  return v;
}

double FockVector::norm_squared() const noexcept {
  double s = 0.0;
  for (const auto& c : amps_) s += std::norm(c);
  return s;
}

bool FockVector::is_finite() const noexcept {
  return std::all_of(amps_.begin(), amps_.end(),
                     [](const Complex& c) { return std::isfinite(c.real()) && std::isfinite(c.imag()); });
}

FockVector FockVector::normalized() const {
  const double n2 = norm_squared();
  if (!(n2 > 0.0) || !std::isfinite(n2)) throw Error(ErrorKind::ZeroProbability, "cannot normalize a null vector");
  FockVector out(*this);
  const double inv = 1.0 / std::sqrt(n2);
  for (auto& c : out.amps_) c *= inv;
  return out;
}

FockVector FockVector::resized(std::size_t cutoff) const {
  std::vector<Complex> amps(amps_.begin(), amps_.begin() + static_cast<std::ptrdiff_t>(std::min(amps_.size(), cutoff + 1)));
  amps.resize(cutoff + 1);
  return FockVector(std::move(amps));
}

ComplexMatrix ComplexMatrix::identity(std::size_t n) {
  ComplexMatrix m(n, n);
  for (std::size_t i = 0; i < n; ++i) m(i, i) = 1.0;
  return m;
}

ComplexMatrix ComplexMatrix::adjoint() const {
  ComplexMatrix out(cols_, rows_);
  for (std::size_t r = 0; r < rows_; ++r)
    for (std::size_t c = 0; c < cols_; ++c) out(c, r) = std::conj((*this)(r, c));
  return out;
}

ComplexMatrix ComplexMatrix::operator*(const ComplexMatrix& rhs) const {
  if (cols_ != rhs.rows_) throw Error(ErrorKind::InvalidArgument, "matrix shape mismatch");
  ComplexMatrix out(rows_, rhs.cols_);
  for (std::size_t r = 0; r < rows_; ++r)
    for (std::size_t k = 0; k < cols_; ++k) {
      const Complex a = (*this)(r, k);
      if (a == Complex{}) continue;
      for (std::size_t c = 0; c < rhs.cols_; ++c) out(r, c) += a * rhs(k, c);
    }
  return out;
}

double log_sqrt_factorial(std::size_t n) {
  const auto& t = log_sqrt_factorial_table();
  if (n < t.size()) return t[n];
  return 0.5 * std::lgamma(static_cast<double>(n) + 1.0);
}

double sqrt_factorial(std::size_t n) {
  const auto& t = sqrt_factorial_table();
  if (n < t.size()) return t[n];
  return std::exp(log_sqrt_factorial(n));
}

std::size_t auto_cutoff(double max_amplitude) {
  const double m = std::abs(max_amplitude);
  return static_cast<std::size_t>(std::ceil(m * m + 6.0 * m + 20.0));
}

std::vector<Complex> coherent_amplitudes(Complex gamma, std::size_t count) {
  std::vector<Complex> out(count);
  if (count == 0) return out;
  out[0] = std::exp(-0.5 * std::norm(gamma));
  for (std::size_t n = 1; n < count; ++n) out[n] = out[n - 1] * gamma / std::sqrt(static_cast<double>(n));
  return out;
}

FockVector coherent_vector(Complex gamma, std::size_t cutoff) {
  FockVector v(coherent_amplitudes(gamma, cutoff + 1));
  const double tail = 1.0 - v.norm_squared();
  if (tail > kTailTolerance) {
    throw Error(ErrorKind::CutoffTooSmall, "coherent |gamma|=" + std::to_string(std::abs(gamma)) +
                                               " drops tail " + std::to_string(tail) + " at cutoff " +
                                               std::to_string(cutoff));
  }
  return v;
}

ComplexMatrix displacement_matrix_serial(Complex alpha, std::size_t cutoff) {
  require_displacement_cutoff(alpha, cutoff);
  const std::size_t dim = cutoff + 1;
  if (alpha == Complex{}) return ComplexMatrix::identity(dim);
  ComplexMatrix d(dim, dim);
  std::vector<double> lag;
  for (std::size_t k = 0; k < dim; ++k) fill_diagonal(d, alpha, k, lag);
  return d;
}

ComplexMatrix displacement_matrix(Complex alpha, std::size_t cutoff) {
  require_displacement_cutoff(alpha, cutoff);
  const std::size_t dim = cutoff + 1;
  if (alpha == Complex{}) return ComplexMatrix::identity(dim);
  ComplexMatrix d(dim, dim);
  const auto n = static_cast<std::ptrdiff_t>(dim);
#pragma omp parallel
  {
    std::vector<double> lag;
#pragma omp for schedule(dynamic, 4)
    for (std::ptrdiff_t k = 0; k < n; ++k) fill_diagonal(d, alpha, static_cast<std::size_t>(k), lag);
  }
  return d;
}

FockVector displaced_number_state(std::size_t k, Complex alpha, std::size_t cutoff) {
  if (k > cutoff) throw Error(ErrorKind::IndexOutOfRange, "k=" + std::to_string(k) + " > cutoff");
  const ComplexMatrix d = displacement_matrix(alpha, cutoff);
  FockVector v(cutoff);
  for (std::size_t m = 0; m <= cutoff; ++m) v[m] = d(m, k);
  return v;
}

FockVector apply(const ComplexMatrix& op, const FockVector& state) {
  FockVector out(op.rows() - 1);
  const std::size_t cols = std::min(op.cols(), state.size());
  for (std::size_t r = 0; r < op.rows(); ++r) {
    Complex acc{};
    for (std::size_t c = 0; c < cols; ++c) acc += op(r, c) * state[c];
    out[r] = acc;
  }
  return out;
}

Complex inner_product(const FockVector& a, const FockVector& b) {
  const std::size_t n = std::min(a.size(), b.size());
  Complex acc{};
  for (std::size_t i = 0; i < n; ++i) acc += std::conj(a[i]) * b[i];
  return acc;
}

double fidelity_pure(const FockVector& a, const FockVector& b) {
  for (const FockVector* v : {&a, &b}) {
    const double n2 = v->norm_squared();
    if (std::abs(n2 - 1.0) > 1e-9) {
      throw Error(ErrorKind::NotNormalized, "state norm^2 = " + std::to_string(n2));
    }
  }
  return std::clamp(std::norm(inner_product(a, b)), 0.0, 1.0);
}

}  // namespace catsynth
