#pragma once

// Polynomials in a single creation operator and their root (factored) form.

#include <cstddef>
#include <span>
#include <vector>

#include "catsynth/fock.hpp"

namespace catsynth {

/// f(a^+) = sum_k coeffs[k] (a^+)^k. The leading coefficient is nonzero.
class CreationPolynomial {
 public:
  explicit CreationPolynomial(std::vector<Complex> coeffs);

  std::size_t degree() const noexcept { return coeffs_.size() - 1; }
  std::span<const Complex> coeffs() const noexcept { return coeffs_; }
  Complex operator[](std::size_t k) const noexcept { return coeffs_[k]; }
  Complex leading() const noexcept { return coeffs_.back(); }

  Complex evaluate(Complex z) const noexcept;
  CreationPolynomial monic() const;

  /// scale * prod_j (z - roots[j]).
  static CreationPolynomial from_roots(std::span<const Complex> roots, Complex scale = 1.0);

  /// f(a^+)|0>: Fock amplitudes coeffs[k] sqrt(k!) on 0..cutoff.
  FockVector apply_to_vacuum(std::size_t cutoff) const;

 private:
  std::vector<Complex> coeffs_;
};

struct RootSet {
  std::vector<Complex> roots;
  Complex scale{1.0};

  CreationPolynomial expand() const { return CreationPolynomial::from_roots(roots, scale); }
};

struct RootFinderOptions {
  double residual = 1e-12;
  int max_iterations = 500;
};

/// All complex roots with multiplicity, by Aberth-Ehrlich simultaneous
/// iteration started on the circle |z| = 1 + max|c_k/c_n|. Exact zero
/// roots are deflated first. Throws NonConvergence past the budget.
RootSet polynomial_roots(const CreationPolynomial& p, const RootFinderOptions& options = {});

/// Largest distance in a greedy nearest-pair matching of two root
/// multisets (smallest available pair first); infinity on size mismatch.
double root_matching_distance(std::span<const Complex> a, std::span<const Complex> b);

}  // namespace catsynth
