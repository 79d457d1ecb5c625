#pragma once

// Derivative-free search over cascade parameters for the highest fidelity
// with a target cat, and the beta-sweep driver built on it.

#include <cstdint>
#include <functional>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "catsynth/cat_states.hpp"
#include "catsynth/scheme.hpp"

namespace catsynth {

enum class ParamKind { Theta, AlphaRe, AlphaIm, Alpha0, GammaRe, GammaIm };

struct FreeParameter {
  ParamKind kind;
  std::size_t index = 0;  // auxiliary mode for Theta/AlphaRe/AlphaIm
  double lo = 0.0;
  double hi = 0.0;

  std::string name() const;
};

struct Bounds {
  double theta_lo = 0.05, theta_hi = 1.52;
  double alpha = 4.0;   // |Re|, |Im| of alpha_k
  double alpha0 = 4.0;
  double gamma = 3.0;   // |Re|, |Im| of gamma
};

/// Free parameters plus the template that supplies everything else.
struct SearchSpace {
  SchemeConfig fixed;
  std::vector<FreeParameter> free;

  /// Every theta_k, Re/Im alpha_k and alpha0 free; gamma too when
  /// free_gamma and the input is coherent.
  static SearchSpace all_free(SchemeConfig tmpl, bool free_gamma = false, const Bounds& bounds = {});

  std::size_t dimension() const noexcept { return free.size(); }
  SchemeConfig materialize(std::span<const double> params) const;
  /// Values of the free parameters in a config, clamped to the bounds.
  std::vector<double> extract(const SchemeConfig& config) const;
  std::vector<double> clamp(std::span<const double> params) const;
  /// InvalidArgument on empty/non-finite bounds or theta bounds outside (0, pi/2).
  void validate() const;
};

struct OptimizerBudget {
  int restarts = 64;
  std::uint64_t seed = 1;
  int max_evaluations = 2000;   // per start
  double tolerance = 1e-9;      // simplex diameter
  int threads = 0;              // 0: OpenMP default, 1: serial
  bool analytic_seed = true;
  std::vector<std::vector<double>> warm_starts;
};

struct OptimizationOutcome {
  SchemeConfig best_config;
  std::vector<double> best_params;
  double fidelity = 0.0;
  double success_probability = 0.0;
  int restarts_used = 0;
  long objective_evaluations = 0;
  std::uint64_t seed = 0;
  int best_start = -1;
};

inline constexpr double kInfeasiblePenalty = 10.0;

/// 1 - fidelity of the materialized config; 1 + kInfeasiblePenalty when
/// the config cannot be evaluated (zero heralding probability and the like).
double objective(std::span<const double> params, const SearchSpace& space, const CatSpec& target);

struct NelderMeadResult {
  std::vector<double> x;
  double value = 0.0;
  long evaluations = 0;
};

/// Bounded Nelder-Mead with dimension-adaptive coefficients. Trial points
/// are clamped to [lo, hi]; the simplex is rebuilt around the incumbent
/// after each converged pass until a pass stops improving or the
/// evaluation budget is spent.
NelderMeadResult nelder_mead(const std::function<double(std::span<const double>)>& f, std::vector<double> x0,
                             std::span<const double> lo, std::span<const double> hi, int max_evaluations,
                             double tolerance);

/// Deterministic start points: Halton sequence shifted by a seeded
/// Cranley-Patterson rotation, scaled into the bounds.
std::vector<std::vector<double>> start_points(const SearchSpace& space, int count, std::uint64_t seed);

/// Start built from the roots of the best-alpha cat qudit, grouped to the
/// cascade's multiplicities and mapped onto auxiliary displacements.
/// Empty for kitten input or when no root form exists.
std::optional<std::vector<double>> analytic_start(const SearchSpace& space, const CatSpec& target);

/// Multi-start search. Starts run concurrently; the winner is chosen by
/// higher fidelity, then higher probability (fidelity ties within 1e-12),
/// then lower start index. AllStartsInfeasible if no start escapes the
/// penalty region.
OptimizationOutcome optimize(const SearchSpace& space, const CatSpec& target, const OptimizerBudget& budget);

struct SweepPoint {
  double beta = 0.0;
  double fidelity = 0.0;
  double probability = 0.0;
  std::optional<SchemeConfig> best_config;
  std::vector<double> best_params;
  double scq_bound_alpha0 = 0.0;   // cat qudit of the same order, alpha = 0
  double scq_bound_max = 0.0;      // alpha-maximized
  double scq_bound_alpha = 0.0;
  std::optional<std::string> error;
};

/// One optimize call per beta on lo, lo+step, ... <= hi (+1e-9), each
/// warm-started from the previous optimum, together with the qudit
/// bounds for the cascade's total photon number. Per-point failures are
/// recorded in SweepPoint::error.
std::vector<SweepPoint> sweep_beta(const SearchSpace& space, Parity parity, double lo, double hi, double step,
                                   const OptimizerBudget& budget);

}  // namespace catsynth
