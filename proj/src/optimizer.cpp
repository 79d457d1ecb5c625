#include "catsynth/optimizer.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <numbers>
#include <numeric>
#include <random>

#include <omp.h>

#include "catsynth/error.hpp"
#include "catsynth/polynomial.hpp"

namespace catsynth {

std::string FreeParameter::name() const {
  const std::string k = std::to_string(index + 1);
  switch (kind) {
    case ParamKind::Theta: return "theta" + k;
    case ParamKind::AlphaRe: return "re_alpha" + k;
    case ParamKind::AlphaIm: return "im_alpha" + k;
    case ParamKind::Alpha0: return "alpha0";
    case ParamKind::GammaRe: return "re_gamma";
    case ParamKind::GammaIm: return "im_gamma";
  }
  return "?";
}

SearchSpace SearchSpace::all_free(SchemeConfig tmpl, bool free_gamma, const Bounds& b) {
  SearchSpace s;
  const std::size_t m = tmpl.modes();
  tmpl.bs_theta.resize(m, std::numbers::pi / 4);
  tmpl.aux_alpha.resize(m);
  for (std::size_t j = 0; j < m; ++j) s.free.push_back({ParamKind::Theta, j, b.theta_lo, b.theta_hi});
  for (std::size_t j = 0; j < m; ++j) {
    s.free.push_back({ParamKind::AlphaRe, j, -b.alpha, b.alpha});
    s.free.push_back({ParamKind::AlphaIm, j, -b.alpha, b.alpha});
  }
  s.free.push_back({ParamKind::Alpha0, 0, -b.alpha0, b.alpha0});
  if (free_gamma && tmpl.input.kind == InputSpec::Kind::Coherent) {
    s.free.push_back({ParamKind::GammaRe, 0, -b.gamma, b.gamma});
    s.free.push_back({ParamKind::GammaIm, 0, -b.gamma, b.gamma});
  }
  s.fixed = std::move(tmpl);
  return s;
}

SchemeConfig SearchSpace::materialize(std::span<const double> params) const {
  SchemeConfig c = fixed;
  for (std::size_t i = 0; i < free.size(); ++i) {
    const FreeParameter& p = free[i];
    const double v = params[i];
    switch (p.kind) {
      case ParamKind::Theta: c.bs_theta[p.index] = v; break;
      case ParamKind::AlphaRe: c.aux_alpha[p.index].real(v); break;
      case ParamKind::AlphaIm: c.aux_alpha[p.index].imag(v); break;
      case ParamKind::Alpha0: c.alpha0 = v; break;
      case ParamKind::GammaRe: c.input.gamma.real(v); break;
      case ParamKind::GammaIm: c.input.gamma.imag(v); break;
    }
  }
  return c;
}

std::vector<double> SearchSpace::extract(const SchemeConfig& c) const {
  std::vector<double> x(free.size());
  for (std::size_t i = 0; i < free.size(); ++i) {
    const FreeParameter& p = free[i];
    switch (p.kind) {
      case ParamKind::Theta: x[i] = c.bs_theta[p.index]; break;
      case ParamKind::AlphaRe: x[i] = c.aux_alpha[p.index].real(); break;
      case ParamKind::AlphaIm: x[i] = c.aux_alpha[p.index].imag(); break;
      case ParamKind::Alpha0: x[i] = c.alpha0; break;
      case ParamKind::GammaRe: x[i] = c.input.gamma.real(); break;
      case ParamKind::GammaIm: x[i] = c.input.gamma.imag(); break;
    }
  }
  return clamp(x);
}

std::vector<double> SearchSpace::clamp(std::span<const double> params) const {
  std::vector<double> x(params.begin(), params.end());
  for (std::size_t i = 0; i < free.size(); ++i) x[i] = std::clamp(x[i], free[i].lo, free[i].hi);
  return x;
}

void SearchSpace::validate() const {
  fixed.validate();
  if (free.empty()) throw Error(ErrorKind::InvalidArgument, "search space has no free parameters");
  for (const auto& p : free) {
    if (!std::isfinite(p.lo) || !std::isfinite(p.hi) || !(p.lo < p.hi)) {
      throw Error(ErrorKind::InvalidArgument, "bad bounds for " + p.name());
    }
    if (p.kind == ParamKind::Theta && !(p.lo > 0.0 && p.hi < std::numbers::pi / 2)) {
      throw Error(ErrorKind::InvalidArgument, p.name() + " bounds must lie inside (0, pi/2)");
    }
    if ((p.kind == ParamKind::Theta || p.kind == ParamKind::AlphaRe || p.kind == ParamKind::AlphaIm) &&
        p.index >= fixed.modes()) {
      throw Error(ErrorKind::InvalidArgument, p.name() + " refers to a missing auxiliary mode");
    }
  }
}

namespace {

struct Evaluation {
  double value;
  double fidelity;
  double probability;
  bool feasible;
};

Evaluation evaluate(std::span<const double> params, const SearchSpace& space, const CatSpec& target) {
  try {
    const SchemeConfig c = space.materialize(params);
    const ConditionalCore core = conditional_core(c);
    const double f = conditional_fidelity(core, c.alpha0, target);
    if (!std::isfinite(f)) return {1.0 + kInfeasiblePenalty, 0.0, 0.0, false};
    return {1.0 - f, f, core.probability, true};
  } catch (const Error&) {
    return {1.0 + kInfeasiblePenalty, 0.0, 0.0, false};
  }
}

double simplex_diameter(const std::vector<std::vector<double>>& simplex, std::size_t best) {
  double d = 0.0;
  for (const auto& v : simplex)
    for (std::size_t i = 0; i < v.size(); ++i) d = std::max(d, std::abs(v[i] - simplex[best][i]));
  return d;
}

double radical_inverse(std::uint64_t i, unsigned base) {
  double inv = 1.0 / base, f = inv, r = 0.0;
  while (i > 0) {
    r += f * static_cast<double>(i % base);
    i /= base;
    f *= inv;
  }
  return r;
}

constexpr std::array<unsigned, 24> kPrimes{2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37,
                                           41, 43, 47, 53, 59, 61, 67, 71, 73, 79, 83, 89};

}  // namespace

double objective(std::span<const double> params, const SearchSpace& space, const CatSpec& target) {
  return evaluate(params, space, target).value;
}

NelderMeadResult nelder_mead(const std::function<double(std::span<const double>)>& f, std::vector<double> x0,
                             std::span<const double> lo, std::span<const double> hi, int max_evaluations,
                             double tolerance) {
  const std::size_t n = x0.size();
  const double nd = static_cast<double>(n);
  const double c_reflect = 1.0;
  const double c_expand = n >= 2 ? 1.0 + 2.0 / nd : 2.0;
  const double c_contract = n >= 2 ? 0.75 - 0.5 / nd : 0.5;
  const double c_shrink = n >= 2 ? 1.0 - 1.0 / nd : 0.5;

  NelderMeadResult res;
  auto clamp = [&](std::vector<double>& x) {
    for (std::size_t i = 0; i < n; ++i) x[i] = std::clamp(x[i], lo[i], hi[i]);
  };
  auto eval = [&](const std::vector<double>& x) {
    ++res.evaluations;
    return f(x);
  };

  clamp(x0);
  res.x = x0;
  res.value = eval(x0);
  if (n == 0) return res;

  std::vector<std::vector<double>> simplex(n + 1);
  std::vector<double> values(n + 1);
  std::vector<std::size_t> order(n + 1);
  std::vector<double> centroid(n), trial(n), trial2(n);

  while (res.evaluations < max_evaluations) {
    const double pass_start = res.value;
    simplex[0] = res.x;
    values[0] = res.value;
    for (std::size_t i = 0; i < n; ++i) {
      simplex[i + 1] = res.x;
      const double h = 0.1 * (hi[i] - lo[i]);
      simplex[i + 1][i] = (res.x[i] + h <= hi[i]) ? res.x[i] + h : res.x[i] - h;
      values[i + 1] = eval(simplex[i + 1]);
    }

    while (res.evaluations < max_evaluations) {
      std::iota(order.begin(), order.end(), 0);
      std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return values[a] < values[b]; });
      const std::size_t best = order.front(), worst = order.back(), second = order[n - 1];
      if (simplex_diameter(simplex, best) < tolerance) break;

      std::fill(centroid.begin(), centroid.end(), 0.0);
      for (std::size_t v = 0; v <= n; ++v) {
        if (v == worst) continue;
        for (std::size_t i = 0; i < n; ++i) centroid[i] += simplex[v][i] / nd;
      }
      for (std::size_t i = 0; i < n; ++i) trial[i] = centroid[i] + c_reflect * (centroid[i] - simplex[worst][i]);
      clamp(trial);
      const double fr = eval(trial);

      if (fr < values[best]) {
        for (std::size_t i = 0; i < n; ++i) trial2[i] = centroid[i] + c_expand * (trial[i] - centroid[i]);
        clamp(trial2);
        const double fe = eval(trial2);
        if (fe < fr) {
          simplex[worst] = trial2;
          values[worst] = fe;
        } else {
          simplex[worst] = trial;
          values[worst] = fr;
        }
      } else if (fr < values[second]) {
        simplex[worst] = trial;
        values[worst] = fr;
      } else {
        const bool outside = fr < values[worst];
        for (std::size_t i = 0; i < n; ++i) {
          trial2[i] = outside ? centroid[i] + c_contract * (trial[i] - centroid[i])
                              : centroid[i] + c_contract * (simplex[worst][i] - centroid[i]);
        }
        clamp(trial2);
        const double fc = eval(trial2);
        if (fc < std::min(fr, values[worst])) {
          simplex[worst] = trial2;
          values[worst] = fc;
        } else {
          for (std::size_t v = 0; v <= n; ++v) {
            if (v == best) continue;
            for (std::size_t i = 0; i < n; ++i) simplex[v][i] = simplex[best][i] + c_shrink * (simplex[v][i] - simplex[best][i]);
            values[v] = eval(simplex[v]);
          }
        }
      }
    }
    const auto it = std::min_element(values.begin(), values.end());
    if (*it < res.value) {
      res.value = *it;
      res.x = simplex[static_cast<std::size_t>(it - values.begin())];
    }
    if (pass_start - res.value < 1e-12) break;
  }
  return res;
}

std::vector<std::vector<double>> start_points(const SearchSpace& space, int count, std::uint64_t seed) {
  const std::size_t d = space.dimension();
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  std::vector<double> shift(d);
  for (auto& s : shift) s = unit(rng);
  std::vector<std::vector<double>> pts;
  pts.reserve(static_cast<std::size_t>(std::max(count, 0)));
  for (int i = 0; i < count; ++i) {
    std::vector<double> x(d);
    for (std::size_t k = 0; k < d; ++k) {
      // beyond the prime table, fall back to the seeded stream
      double u = k < kPrimes.size() ? radical_inverse(static_cast<std::uint64_t>(i) + 1, kPrimes[k]) : unit(rng);
      u += shift[k];
      u -= std::floor(u);
      x[k] = space.free[k].lo + u * (space.free[k].hi - space.free[k].lo);
    }
    pts.push_back(std::move(x));
  }
  return pts;
}

std::optional<std::vector<double>> analytic_start(const SearchSpace& space, const CatSpec& target) {
  const SchemeConfig& tmpl = space.fixed;
  if (tmpl.input.kind == InputSpec::Kind::Kitten) return std::nullopt;
  const std::size_t n = tmpl.total_photons();
  if (n == 0) return std::nullopt;

  const ScqBound bound = scq_fidelity_max_alpha(n, target.parity(), target.beta());
  std::vector<Complex> roots;
  try {
    roots = polynomial_roots(scq_polynomial(n, target.with_alpha(bound.alpha))).roots;
  } catch (const Error&) {
    return std::nullopt;
  }
  std::sort(roots.begin(), roots.end(), [](Complex a, Complex b) { return std::arg(a) < std::arg(b); });

  // multiplicity groups: input root first (not steerable), then each mode
  std::vector<std::size_t> sizes;
  const std::size_t k0 = tmpl.input.fock_photons();
  if (k0 > 0) sizes.push_back(k0);
  for (auto k : tmpl.aux_photons) sizes.push_back(k);
  std::vector<Complex> means;
  std::size_t pos = 0;
  for (auto s : sizes) {
    Complex acc{};
    for (std::size_t i = 0; i < s; ++i) acc += roots[pos + i];
    means.push_back(s > 0 ? acc / static_cast<double>(s) : Complex{});
    pos += s;
  }

  std::vector<std::size_t> perm(means.size());
  std::iota(perm.begin(), perm.end(), 0);
  const bool theta_free = std::any_of(space.free.begin(), space.free.end(),
                                      [](const FreeParameter& p) { return p.kind == ParamKind::Theta; });
  const std::vector<double> thetas = theta_free ? std::vector<double>{0.5, std::numbers::pi / 4, 1.1}
                                                : std::vector<double>{-1.0};
  std::optional<std::vector<double>> best;
  double best_value = 0.0;
  int budget = 5040;
  do {
    for (double th : thetas) {
      SchemeConfig c = tmpl;
      if (th > 0) std::fill(c.bs_theta.begin(), c.bs_theta.end(), th);
      c.alpha0 = bound.alpha;
      std::vector<Complex> want(c.modes());
      const std::size_t offset = k0 > 0 ? 1 : 0;
      for (std::size_t j = 0; j < c.modes(); ++j) want[j] = means[perm[j + offset]];
      try {
        c.aux_alpha = aux_alpha_for_roots(c, want);
      } catch (const Error&) {
        continue;
      }
      const std::vector<double> x = space.extract(c);
      const double v = objective(x, space, target);
      if (!best || v < best_value) {
        best = x;
        best_value = v;
      }
    }
  } while (--budget > 0 && std::next_permutation(perm.begin(), perm.end()));
  return best;
}

OptimizationOutcome optimize(const SearchSpace& space, const CatSpec& target, const OptimizerBudget& budget) {
  space.validate();
  if (budget.restarts < 1) throw Error(ErrorKind::InvalidArgument, "budget needs at least one restart");

  std::vector<std::vector<double>> starts;
  if (budget.analytic_seed) {
    if (auto a = analytic_start(space, target)) starts.push_back(std::move(*a));
  }
  for (const auto& w : budget.warm_starts) {
    if (w.size() == space.dimension()) starts.push_back(space.clamp(w));
  }
  for (auto& p : start_points(space, budget.restarts, budget.seed)) starts.push_back(std::move(p));

  std::vector<double> lo, hi;
  for (const auto& p : space.free) {
    lo.push_back(p.lo);
    hi.push_back(p.hi);
  }

  struct StartResult {
    std::vector<double> x;
    Evaluation eval;
    long evaluations;
  };
  std::vector<StartResult> results(starts.size());
  const auto count = static_cast<std::ptrdiff_t>(starts.size());
  const int threads = budget.threads > 0 ? budget.threads : omp_get_max_threads();
#pragma omp parallel for schedule(dynamic, 1) num_threads(threads)
  for (std::ptrdiff_t s = 0; s < count; ++s) {
    const auto f = [&](std::span<const double> x) { return objective(x, space, target); };
    NelderMeadResult nm = nelder_mead(f, starts[static_cast<std::size_t>(s)], lo, hi, budget.max_evaluations, budget.tolerance);
    const Evaluation e = evaluate(nm.x, space, target);
    results[static_cast<std::size_t>(s)] = {std::move(nm.x), e, nm.evaluations + 1};
  }

  OptimizationOutcome out;
  out.seed = budget.seed;
  out.restarts_used = static_cast<int>(results.size());
  for (std::size_t s = 0; s < results.size(); ++s) {
    const StartResult& r = results[s];
    out.objective_evaluations += r.evaluations;
    if (!r.eval.feasible) continue;
    bool better = out.best_start < 0;
    if (!better) {
      const StartResult& cur = results[static_cast<std::size_t>(out.best_start)];
      if (r.eval.fidelity > cur.eval.fidelity + 1e-12) {
        better = true;
      } else if (std::abs(r.eval.fidelity - cur.eval.fidelity) <= 1e-12 && r.eval.probability > cur.eval.probability) {
        better = true;
      }
    }
    if (better) out.best_start = static_cast<int>(s);
  }
  if (out.best_start < 0) throw Error(ErrorKind::AllStartsInfeasible, "every start ended in the penalty region");

  out.best_params = results[static_cast<std::size_t>(out.best_start)].x;
  out.best_config = space.materialize(out.best_params);
  const ConditionalCore core = conditional_core(out.best_config);
  out.fidelity = conditional_fidelity(core, out.best_config.alpha0, target);
  out.success_probability = core.probability;
  return out;
}

std::vector<SweepPoint> sweep_beta(const SearchSpace& space, Parity parity, double lo, double hi, double step,
                                   const OptimizerBudget& budget) {
  if (!(step > 0.0) || !std::isfinite(lo) || !std::isfinite(hi) || !(lo > 0.0) || !(hi > lo)) {
    throw Error(ErrorKind::InvalidArgument, "beta range must satisfy 0 < lo < hi with step > 0");
  }
  std::vector<SweepPoint> out;
  std::vector<double> warm;
  const std::size_t n = space.fixed.total_photons();
  const auto steps = static_cast<long>(std::floor((hi - lo) / step + 1e-9));
  for (long i = 0; i <= steps; ++i) {
    SweepPoint pt;
    pt.beta = lo + static_cast<double>(i) * step;
    const CatSpec target(pt.beta, parity);
    pt.scq_bound_alpha0 = scq_fidelity(n, target);
    const ScqBound b = scq_fidelity_max_alpha(n, parity, pt.beta);
    pt.scq_bound_max = b.fidelity;
    pt.scq_bound_alpha = b.alpha;
    OptimizerBudget local = budget;
    if (!warm.empty()) local.warm_starts.push_back(warm);
    try {
      const OptimizationOutcome r = optimize(space, target, local);
      pt.fidelity = r.fidelity;
      pt.probability = r.success_probability;
      pt.best_config = r.best_config;
      pt.best_params = r.best_params;
      warm = r.best_params;
    } catch (const Error& e) {
      pt.error = e.what();
    }
    out.push_back(std::move(pt));
  }
  return out;
}

}  // namespace catsynth
