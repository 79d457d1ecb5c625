#pragma once

// Even/odd Schroedinger cat states, their expansion over the displaced
// number basis {D(i alpha)|k>}, and the finite truncations of that expansion
// (cat qudits) in amplitude and root form.

#include <cstddef>
#include <string_view>
#include <vector>

#include "catsynth/fock.hpp"
#include "catsynth/polynomial.hpp"

namespace catsynth {

enum class Parity { Even, Odd };

std::string_view to_string(Parity p) noexcept;
/// "even"/"odd" (case-insensitive); InvalidArgument otherwise.
Parity parse_parity(std::string_view text);

/// Target cat N(|-beta> +/- |beta>) together with the real displacement
/// alpha of the representation basis D(i alpha)|k>.
class CatSpec {
 public:
  CatSpec(double beta, Parity parity, double alpha = 0.0);

  double beta() const noexcept { return beta_; }
  Parity parity() const noexcept { return parity_; }
  double alpha() const noexcept { return alpha_; }

  /// sqrt(alpha^2 + beta^2)
  double amplitude() const noexcept;
  /// arctan(alpha / beta)
  double phase() const noexcept;

  CatSpec with_alpha(double alpha) const { return CatSpec(beta_, parity_, alpha); }
  CatSpec with_beta(double beta) const { return CatSpec(beta, parity_, alpha_); }

 private:
  double beta_;
  Parity parity_;
  double alpha_;
};

/// N_+ = (2(1 + e^{-2 beta^2}))^{-1/2}, N_- = (2(1 - e^{-2 beta^2}))^{-1/2}.
double cat_normalization(double beta, Parity parity);

/// Normalized cat state in the Fock basis. CutoffTooSmall if the dropped
/// tail exceeds kTailTolerance.
FockVector scs_vector(const CatSpec& spec, std::size_t cutoff);

/// a_k for k = 0..n_max:
///   even  2 (i A)^k / sqrt(k!) cos(alpha beta + k (phi + pi/2))
///   odd  2i (i A)^k / sqrt(k!) sin(alpha beta + k (phi + pi/2))
/// so that <k, i alpha|cat> = N e^{-A^2/2} a_k.
std::vector<Complex> alpha_rep_amplitudes(const CatSpec& spec, std::size_t n_max);

/// <k, i alpha|cat> for k = 0..n_max, i.e. alpha_rep_amplitudes with the
/// prefactor N e^{-A^2/2} folded in (log-domain, safe for large A).
std::vector<Complex> displaced_cat_amplitudes(const CatSpec& spec, std::size_t n_max);

/// Cat qudit: the (n+1)-term truncation in the D(i alpha)|k> basis,
/// normalized and expressed in the Fock basis. DegenerateQudit when every
/// retained term vanishes.
FockVector scq_vector(std::size_t n, const CatSpec& spec, std::size_t cutoff);

/// |<qudit|cat>|^2, equal to the cat weight retained by the truncation.
/// Zero for a degenerate qudit.
double scq_fidelity(std::size_t n, const CatSpec& spec);

struct ScqBound {
  double fidelity;
  double alpha;
};

/// max over real alpha of scq_fidelity(n, CatSpec(beta, parity, alpha)):
/// dense grid on [-alpha_range, alpha_range] refined by golden section.
ScqBound scq_fidelity_max_alpha(std::size_t n, Parity parity, double beta, double alpha_range = 5.0);

/// Monic degree-n polynomial whose z^k coefficient is
/// n! (iA)^{k-n} trig_k / (k! trig_n). LeadingTermVanishes if trig_n = 0.
CreationPolynomial scq_polynomial(std::size_t n, const CatSpec& spec);

/// D(i alpha) prod_j (a^+ - z_j) |0>, normalized.
FockVector scq_from_roots(const RootSet& roots, const CatSpec& spec, std::size_t n, std::size_t cutoff);

}  // namespace catsynth
