#include "catsynth/cat_states.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <string>

#include "catsynth/error.hpp"

namespace catsynth {

namespace {

// i^k, exact.
Complex i_power(long k) {
  switch (((k % 4) + 4) % 4) {
    case 0: return {1.0, 0.0};
    case 1: return {0.0, 1.0};
    case 2: return {-1.0, 0.0};
    default: return {0.0, -1.0};
  }
}

// (cos, sin) of alpha*beta + k*(phi + pi/2). The k quarter turns are applied
// exactly so that structurally vanishing terms come out as exact zeros.
struct Trig {
  double c;
  double s;
};

Trig cat_trig(const CatSpec& spec, std::size_t k) {
  const double base = spec.alpha() * spec.beta() + static_cast<double>(k) * spec.phase();
  const double c = std::cos(base);
  const double s = std::sin(base);
  switch (k % 4) {
    case 0: return {c, s};
    case 1: return {-s, c};
    case 2: return {-c, -s};
    default: return {s, -c};
  }
}

double parity_trig(const CatSpec& spec, std::size_t k) {
  const Trig t = cat_trig(spec, k);
  return spec.parity() == Parity::Even ? t.c : t.s;
}

// Qudit amplitudes (iA)^k / sqrt(k!) trig_k over the displaced basis, up to
// a common positive factor e^{-A^2/2} that keeps large A finite.
std::vector<Complex> qudit_amplitudes(std::size_t n, const CatSpec& spec) {
  const double amp = spec.amplitude();
  const double log_amp = std::log(amp);
  std::vector<Complex> b(n + 1);
  for (std::size_t k = 0; k <= n; ++k) {
    const double mag = std::exp(static_cast<double>(k) * log_amp - log_sqrt_factorial(k) - 0.5 * amp * amp);
    b[k] = mag * parity_trig(spec, k) * i_power(static_cast<long>(k));
  }
  return b;
}

FockVector displace_imag(const FockVector& v, double alpha, std::size_t cutoff) {
  if (alpha == 0.0) return v.resized(cutoff);
  return apply(displacement_matrix(Complex(0.0, alpha), cutoff), v);
}

void check_tail(const FockVector& v, const char* what) {
  const double tail = 1.0 - v.norm_squared();
  if (tail > kTailTolerance) {
    throw Error(ErrorKind::CutoffTooSmall, std::string(what) + " drops tail " + std::to_string(tail) +
                                               " at cutoff " + std::to_string(v.cutoff()));
  }
}

}  // namespace

std::string_view to_string(Parity p) noexcept { return p == Parity::Even ? "even" : "odd"; }

Parity parse_parity(std::string_view text) {
  std::string lower(text);
  std::transform(lower.begin(), lower.end(), lower.begin(), [](unsigned char ch) { return std::tolower(ch); });
  if (lower == "even" || lower == "+") return Parity::Even;
  if (lower == "odd" || lower == "-") return Parity::Odd;
  throw Error(ErrorKind::InvalidArgument, "parity must be even or odd, got '" + std::string(text) + "'");
}

CatSpec::CatSpec(double beta, Parity parity, double alpha) : beta_(beta), parity_(parity), alpha_(alpha) {
  if (!(beta > 0.0) || !std::isfinite(beta)) throw Error(ErrorKind::InvalidArgument, "cat amplitude beta must be > 0");
  if (!std::isfinite(alpha)) throw Error(ErrorKind::InvalidArgument, "representation alpha must be finite");
}

double CatSpec::amplitude() const noexcept { return std::hypot(alpha_, beta_); }

double CatSpec::phase() const noexcept { return std::atan(alpha_ / beta_); }

double cat_normalization(double beta, Parity parity) {
  const double b2 = 2.0 * beta * beta;
  const double s = parity == Parity::Even ? 2.0 + 2.0 * std::exp(-b2) : -2.0 * std::expm1(-b2);
  return 1.0 / std::sqrt(s);
}

FockVector scs_vector(const CatSpec& spec, std::size_t cutoff) {
  const double beta = spec.beta();
  const double norm = cat_normalization(beta, spec.parity());
  const double log_beta = std::log(beta);
  const std::size_t first = spec.parity() == Parity::Even ? 0 : 1;
  FockVector v(cutoff);
  // (-1)^n + 1 = 2 on even n; (-1)^n - 1 = -2 on odd n.
  const double sign = spec.parity() == Parity::Even ? 2.0 : -2.0;
  for (std::size_t n = first; n <= cutoff; n += 2) {
    v[n] = sign * norm * std::exp(-0.5 * beta * beta + static_cast<double>(n) * log_beta - log_sqrt_factorial(n));
  }
  check_tail(v, "cat state");
  return v;
}

std::vector<Complex> alpha_rep_amplitudes(const CatSpec& spec, std::size_t n_max) {
  const double amp = spec.amplitude();
  const double log_amp = std::log(amp);
  const Complex odd_factor = spec.parity() == Parity::Even ? Complex(1.0) : Complex(0.0, 1.0);
  std::vector<Complex> a(n_max + 1);
  for (std::size_t k = 0; k <= n_max; ++k) {
    const double mag = 2.0 * std::exp(static_cast<double>(k) * log_amp - log_sqrt_factorial(k));
    a[k] = odd_factor * mag * parity_trig(spec, k) * i_power(static_cast<long>(k));
  }
  return a;
}

std::vector<Complex> displaced_cat_amplitudes(const CatSpec& spec, std::size_t n_max) {
  const double amp = spec.amplitude();
  const double log_amp = std::log(amp);
  const double log_pref = std::log(2.0 * cat_normalization(spec.beta(), spec.parity())) - 0.5 * amp * amp;
  const Complex odd_factor = spec.parity() == Parity::Even ? Complex(1.0) : Complex(0.0, 1.0);
  std::vector<Complex> a(n_max + 1);
  for (std::size_t k = 0; k <= n_max; ++k) {
    const double mag = std::exp(log_pref + static_cast<double>(k) * log_amp - log_sqrt_factorial(k));
    a[k] = odd_factor * mag * parity_trig(spec, k) * i_power(static_cast<long>(k));
  }
  return a;
}

FockVector scq_vector(std::size_t n, const CatSpec& spec, std::size_t cutoff) {
  if (n > cutoff) throw Error(ErrorKind::CutoffTooSmall, "qudit order exceeds cutoff");
  const auto b = qudit_amplitudes(n, spec);
  double n2 = 0.0;
  for (const auto& x : b) n2 += std::norm(x);
  if (!(n2 > 1e-300)) {
    throw Error(ErrorKind::DegenerateQudit, "every retained term of the order-" + std::to_string(n) + " " +
                                                std::string(to_string(spec.parity())) + " qudit vanishes");
  }
  FockVector local(cutoff);
  const double inv = 1.0 / std::sqrt(n2);
  for (std::size_t k = 0; k <= n; ++k) local[k] = b[k] * inv;
  FockVector out = displace_imag(local, spec.alpha(), cutoff);
  check_tail(out, "cat qudit");
  return out;
}

double scq_fidelity(std::size_t n, const CatSpec& spec) {
  const auto a = displaced_cat_amplitudes(spec, n);
  double s = 0.0;
  for (const auto& x : a) s += std::norm(x);
  return std::min(s, 1.0);
}

ScqBound scq_fidelity_max_alpha(std::size_t n, Parity parity, double beta, double alpha_range) {
  auto f = [&](double alpha) { return scq_fidelity(n, CatSpec(beta, parity, alpha)); };
  constexpr int kGrid = 1000;
  const double step = 2.0 * alpha_range / kGrid;
  ScqBound best{f(0.0), 0.0};
  for (int i = 0; i <= kGrid; ++i) {
    const double a = -alpha_range + step * i;
    const double v = f(a);
    if (v > best.fidelity) best = {v, a};
  }
  // golden section on the bracketing cell
  double lo = best.alpha - step, hi = best.alpha + step;
  const double g = 0.5 * (std::sqrt(5.0) - 1.0);
  double x1 = hi - g * (hi - lo), x2 = lo + g * (hi - lo);
  double f1 = f(x1), f2 = f(x2);
  for (int it = 0; it < 60; ++it) {
    if (f1 > f2) {
      hi = x2;
      x2 = x1;
      f2 = f1;
      x1 = hi - g * (hi - lo);
      f1 = f(x1);
    } else {
      lo = x1;
      x1 = x2;
      f1 = f2;
      x2 = lo + g * (hi - lo);
      f2 = f(x2);
    }
  }
  const double mid = 0.5 * (lo + hi);
  const double fm = f(mid);
  if (fm > best.fidelity) best = {fm, mid};
  return best;
}

CreationPolynomial scq_polynomial(std::size_t n, const CatSpec& spec) {
  const double lead = parity_trig(spec, n);
  if (std::abs(lead) < 1e-12) {
    throw Error(ErrorKind::LeadingTermVanishes, "order-" + std::to_string(n) + " trigonometric factor vanishes");
  }
  const double amp = spec.amplitude();
  std::vector<Complex> c(n + 1);
  for (std::size_t k = 0; k <= n; ++k) {
    const long shift = static_cast<long>(k) - static_cast<long>(n);
    // n!/k! (A)^{k-n}
    const double mag = std::exp(2.0 * (log_sqrt_factorial(n) - log_sqrt_factorial(k)) + static_cast<double>(shift) * std::log(amp));
    c[k] = mag * i_power(shift) * (parity_trig(spec, k) / lead);
  }
  c[n] = 1.0;
  return CreationPolynomial(std::move(c));
}

FockVector scq_from_roots(const RootSet& roots, const CatSpec& spec, std::size_t n, std::size_t cutoff) {
  if (roots.roots.size() != n) {
    throw Error(ErrorKind::InvalidArgument,
                "expected " + std::to_string(n) + " roots, got " + std::to_string(roots.roots.size()));
  }
  const FockVector local = CreationPolynomial::from_roots(roots.roots).apply_to_vacuum(cutoff);
  const double n2 = local.norm_squared();
  FockVector out = displace_imag(local, spec.alpha(), cutoff);
  const double inv = 1.0 / std::sqrt(n2);
  for (auto& c : out.amplitudes()) c *= inv;
  check_tail(out, "root-form qudit");
  return out;
}

}  // namespace catsynth
