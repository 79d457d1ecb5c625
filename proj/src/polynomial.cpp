#include "catsynth/polynomial.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <string>

#include "catsynth/error.hpp"

namespace catsynth {

CreationPolynomial::CreationPolynomial(std::vector<Complex> coeffs) : coeffs_(std::move(coeffs)) {
  if (coeffs_.empty() || coeffs_.back() == Complex{}) {
    throw Error(ErrorKind::InvalidArgument, "polynomial needs a nonzero leading coefficient");
  }
}

Complex CreationPolynomial::evaluate(Complex z) const noexcept {
  Complex acc{};
  for (auto it = coeffs_.rbegin(); it != coeffs_.rend(); ++it) acc = acc * z + *it;
  return acc;
}

CreationPolynomial CreationPolynomial::monic() const {
  std::vector<Complex> c(coeffs_);
  const Complex lead = c.back();
  for (auto& x : c) x /= lead;
  c.back() = 1.0;
  return CreationPolynomial(std::move(c));
}

CreationPolynomial CreationPolynomial::from_roots(std::span<const Complex> roots, Complex scale) {
  std::vector<Complex> c{scale};
  for (const Complex& z : roots) {
    c.push_back(Complex{});
    for (std::size_t k = c.size() - 1; k > 0; --k) c[k] = c[k - 1] - z * c[k];
    c[0] = -z * c[0];
  }
  return CreationPolynomial(std::move(c));
}

FockVector CreationPolynomial::apply_to_vacuum(std::size_t cutoff) const {
  if (degree() > cutoff) {
    throw Error(ErrorKind::CutoffTooSmall, "polynomial degree " + std::to_string(degree()) + " exceeds cutoff");
  }
  FockVector v(cutoff);
  for (std::size_t k = 0; k < coeffs_.size(); ++k) v[k] = coeffs_[k] * sqrt_factorial(k);
  return v;
}

namespace {

struct Eval {
  Complex p;
  Complex dp;
  double scale;  // sum |c_k| |z|^k, for a relative residual
};

Eval evaluate_with_derivative(std::span<const Complex> c, Complex z) {
  Complex p{}, dp{};
  double scale = 0.0;
  const double az = std::abs(z);
  for (std::size_t i = c.size(); i-- > 0;) {
    dp = dp * z + p;
    p = p * z + c[i];
    scale = scale * az + std::abs(c[i]);
  }
  return {p, dp, scale};
}

}  // namespace

RootSet polynomial_roots(const CreationPolynomial& poly, const RootFinderOptions& options) {
  if (poly.degree() < 1) throw Error(ErrorKind::InvalidArgument, "root finding needs degree >= 1");
  RootSet out;
  out.scale = poly.leading();

  std::vector<Complex> c(poly.coeffs().begin(), poly.coeffs().end());
  for (auto& x : c) x /= out.scale;

  std::size_t zeros = 0;
  while (c.size() > 1 && c.front() == Complex{}) {
    c.erase(c.begin());
    ++zeros;
  }
  out.roots.assign(zeros, Complex{});
  const std::size_t deg = c.size() - 1;
  if (deg == 0) return out;
  if (deg == 1) {
    out.roots.push_back(-c[0] / c[1]);
    return out;
  }

  double radius = 0.0;
  for (std::size_t k = 0; k < deg; ++k) radius = std::max(radius, std::abs(c[k]));
  radius += 1.0;
  std::vector<Complex> z(deg);
  for (std::size_t j = 0; j < deg; ++j) {
    z[j] = std::polar(radius, 2.0 * std::numbers::pi * static_cast<double>(j) / static_cast<double>(deg) + 0.4);
  }

  std::vector<bool> done(deg, false);
  int polish = 2;
  for (int it = 0; it < options.max_iterations; ++it) {
    bool all_done = true;
    for (std::size_t j = 0; j < deg; ++j) {
      const Eval e = evaluate_with_derivative(c, z[j]);
      done[j] = std::abs(e.p) <= options.residual * e.scale;
      if (e.p == Complex{}) continue;
      all_done = all_done && done[j];
      const Complex ratio = e.p / e.dp;
      Complex repulsion{};
      for (std::size_t i = 0; i < deg; ++i) {
        if (i != j) repulsion += 1.0 / (z[j] - z[i]);
      }
      const Complex step = ratio / (1.0 - ratio * repulsion);
      if (std::isfinite(step.real()) && std::isfinite(step.imag())) z[j] -= step;
    }
    if (all_done && polish-- <= 0) {
      out.roots.insert(out.roots.end(), z.begin(), z.end());
      return out;
    }
  }
  throw Error(ErrorKind::NonConvergence,
              "Aberth iteration did not reach residual " + std::to_string(options.residual) + " for degree " +
                  std::to_string(deg));
}

double root_matching_distance(std::span<const Complex> a, std::span<const Complex> b) {
  if (a.size() != b.size()) return std::numeric_limits<double>::infinity();
  std::vector<bool> used_a(a.size(), false), used_b(b.size(), false);
  double worst = 0.0;
  for (std::size_t round = 0; round < a.size(); ++round) {
    double best = std::numeric_limits<double>::infinity();
    std::size_t bi = 0, bj = 0;
    for (std::size_t i = 0; i < a.size(); ++i) {
      if (used_a[i]) continue;
      for (std::size_t j = 0; j < b.size(); ++j) {
        if (used_b[j]) continue;
        const double d = std::abs(a[i] - b[j]);
        if (d < best) {
          best = d;
          bi = i;
          bj = j;
        }
      }
    }
    used_a[bi] = used_b[bj] = true;
    worst = std::max(worst, best);
  }
  return worst;
}

}  // namespace catsynth
