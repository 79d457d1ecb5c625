#pragma once

// Conditional linear-optical state generation: a main mode mixed with m
// auxiliary Fock-state modes on a cascade of beam splitters, auxiliary
// displacements, vacuum post-selection on every auxiliary mode and a final
// displacement D(i alpha0) of the main mode.

#include <cstddef>
#include <optional>
#include <span>
#include <vector>

#include "catsynth/cat_states.hpp"
#include "catsynth/fock.hpp"

namespace catsynth {

struct InputSpec {
  enum class Kind { Vacuum, Fock, Coherent, Kitten };

  Kind kind = Kind::Vacuum;
  std::size_t photons = 0;  // Fock
  Complex gamma{};          // Coherent
  double beta_in = 0.0;     // Kitten
  Parity parity = Parity::Even;
  /// Kitten replaced by |0> + b^2/sqrt2 |2> (even) or |1> + b^2/sqrt6 |3> (odd).
  bool kitten_two_term = false;

  static InputSpec vacuum() { return {}; }
  static InputSpec fock(std::size_t k0);
  static InputSpec coherent(Complex gamma);
  static InputSpec kitten(double beta_in, Parity parity, bool two_term = false);

  double max_amplitude() const noexcept;
  /// Photon count the input contributes to the polynomial degree (k0 for
  /// Fock input, zero otherwise).
  std::size_t fock_photons() const noexcept { return kind == Kind::Fock ? photons : 0; }
};

/// Kitten amplitude above which the input is no longer a "kitten".
inline constexpr double kKittenWarnBeta = 1.5;

struct SchemeConfig {
  InputSpec input;
  std::vector<std::size_t> aux_photons;  // k_1..k_m
  std::vector<double> bs_theta;          // t_k = cos, r_k = sin
  std::vector<Complex> aux_alpha;        // D_k(alpha_k) on auxiliary mode k
  double alpha0 = 0.0;                   // final D_0(i alpha0)
  std::size_t cutoff = 0;                // 0 selects the automatic policy

  std::size_t modes() const noexcept { return aux_photons.size(); }
  /// k0 (Fock input) + sum k_j.
  std::size_t total_photons() const noexcept;
  double max_amplitude() const noexcept;
  /// Input truncation cutoff: the explicit cutoff, else auto_cutoff.
  std::size_t working_cutoff() const noexcept;
  /// InvalidArgument on inconsistent lengths, empty cascade or non-finite values.
  void validate() const;
};

struct ConditionalResult {
  FockVector state;  // normalized, main mode
  double success_probability = 0.0;
  std::optional<double> fidelity;
};

/// Main-mode amplitudes after post-selection but before D_0(i alpha0); the
/// squared norm is the success probability.
struct ConditionalCore {
  FockVector amplitudes;
  double probability = 0.0;
};

/// Amplitudes c(n0, nk) of two modes on photon numbers 0..dim-1 each.
class TwoModeAmplitudes {
 public:
  explicit TwoModeAmplitudes(std::size_t dim) : dim_(dim), data_(dim * dim) {}

  /// |a>_0 |b>_k, truncated to dim.
  static TwoModeAmplitudes product(const FockVector& a, const FockVector& b, std::size_t dim);

  std::size_t dim() const noexcept { return dim_; }
  Complex operator()(std::size_t n0, std::size_t nk) const noexcept { return data_[n0 * dim_ + nk]; }
  Complex& operator()(std::size_t n0, std::size_t nk) noexcept { return data_[n0 * dim_ + nk]; }

  /// Distribution of n0 + nk, length 2*dim - 1.
  std::vector<double> total_photon_distribution() const;

 private:
  std::size_t dim_;
  std::vector<Complex> data_;
};

/// Beam splitter a0^+ -> t a0^+ + r ak^+, ak^+ -> -r a0^+ + t ak^+ with
/// t = cos(theta), r = sin(theta), as the induced unitary on each fixed
/// total-photon block. CutoffTooSmall when the input has weight on
/// n0 + nk > dim - 1.
TwoModeAmplitudes apply_beam_splitter(const TwoModeAmplitudes& joint, double theta);
/// Single-threaded reference for apply_beam_splitter.
TwoModeAmplitudes apply_beam_splitter_serial(const TwoModeAmplitudes& joint, double theta);

/// One cascade stage: mix `main` with |k> on a beam splitter, displace the
/// auxiliary mode by alpha and project it on vacuum. Returns the
/// unnormalized main-mode amplitudes (support grows by k).
FockVector contract_stage(const FockVector& main, std::size_t k, double theta, Complex alpha);

/// Input state of the main mode at the config's working cutoff.
FockVector input_state(const SchemeConfig& config);

/// Sequential mode contraction of the whole cascade. ZeroProbability if
/// the heralding probability falls below 1e-300.
ConditionalCore conditional_core(const SchemeConfig& config);

/// |<target| D(i alpha0) |core>|^2 / |core|^2, evaluated against the
/// closed-form displaced cat amplitudes (no truncation of the output).
double conditional_fidelity(const ConditionalCore& core, double alpha0, const CatSpec& target);

/// D(alpha) applied to an arbitrary finite vector, with the output cutoff
/// grown until the truncated weight is below kTailTolerance (never below
/// min_cutoff). Norm is preserved up to that tail.
FockVector displace_with_tail_control(const FockVector& v, Complex alpha, std::size_t min_cutoff = 0);

/// Full simulation: conditional state, heralding probability and (when a
/// target is given) fidelity with the target cat.
ConditionalResult run_scheme(const SchemeConfig& config, const std::optional<CatSpec>& target = std::nullopt);

struct AnalyticM1 {
  FockVector state;
  Complex z1;
  double probability = 0.0;
};

/// Closed-form single-stage output for coherent input |gamma>:
/// D0(i a0) D0(gamma t1) (a0^+ - z1)^{k1} |0>, z1 = -(t1 (alpha1 + gamma r1) / r1)^*.
AnalyticM1 analytic_conditional_m1(Complex gamma, double theta1, Complex alpha1, std::size_t k1, double alpha0,
                                   std::size_t cutoff);

struct AnalyticM2 {
  FockVector state;
  Complex z1;
  Complex z2;
  double probability = 0.0;
};

/// Closed-form two-stage output for coherent input.
AnalyticM2 analytic_conditional_m2(Complex gamma, double theta1, double theta2, Complex alpha1, Complex alpha2,
                                   std::size_t k1, std::size_t k2, double alpha0, std::size_t cutoff);

struct SchemeRoot {
  Complex z;
  std::size_t multiplicity;
};

/// Roots of the main-mode polynomial for Vacuum/Fock/Coherent inputs: one
/// root per auxiliary mode with multiplicity k_j, plus the input root with
/// multiplicity k0 for Fock input. The output is
/// D0(i alpha0) D0(gamma T) prod_j (a0^+ - z_j)^{k_j} |0> up to a factor,
/// with T the product of all transmissions. UnsupportedInput for kittens.
std::vector<SchemeRoot> scheme_roots(const SchemeConfig& config);

/// Inverse of scheme_roots for fixed beam splitters and Vacuum/Coherent
/// input: auxiliary displacements placing the mode-j root at roots[j].
std::vector<Complex> aux_alpha_for_roots(const SchemeConfig& config, std::span<const Complex> roots);

struct OracleResult {
  FockVector state;
  double probability = 0.0;
};

/// Independent cross-check of conditional_core: propagate the multimode
/// creation polynomial through the beam-splitter substitutions, replace
/// every auxiliary a_k^+ by -alpha_k^* and read off the main-mode
/// coefficients. Coherent input travels as displacements; kittens as the
/// superposition of two coherent branches. UnsupportedInput for m > 4.
OracleResult polynomial_oracle(const SchemeConfig& config);

}  // namespace catsynth
