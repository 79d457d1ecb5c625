#include <doctest.h>

#include <random>

#include "catsynth/error.hpp"
#include "catsynth/optimizer.hpp"

using namespace catsynth;

namespace {

SearchSpace space_for(InputSpec in, std::vector<std::size_t> k) {
  SchemeConfig c;
  c.input = in;
  c.aux_photons = std::move(k);
  return SearchSpace::all_free(c);
}

OptimizerBudget small_budget(int restarts = 8, std::uint64_t seed = 1) {
  OptimizerBudget b;
  b.restarts = restarts;
  b.seed = seed;
  b.max_evaluations = 1500;
  return b;
}

}  // namespace

TEST_CASE("search space mapping") {
  const SearchSpace s = space_for(InputSpec::coherent(0.5), {2, 3});
  CHECK(s.dimension() == 2 + 4 + 1);
  const std::vector<double> x{0.3, 0.9, 0.1, -0.2, 1.5, 2.5, -0.7};
  const SchemeConfig c = s.materialize(x);
  CHECK(c.bs_theta[1] == 0.9);
  CHECK(c.aux_alpha[1] == Complex(1.5, 2.5));
  CHECK(c.alpha0 == -0.7);
  CHECK(s.extract(c) == x);

  const auto clamped = s.clamp(std::vector<double>{9.0, -9.0, 0, 0, 0, 0, 0});
  CHECK(clamped[0] == s.free[0].hi);
  CHECK(clamped[1] == s.free[1].lo);

  SchemeConfig g;
  g.input = InputSpec::coherent(0.5);
  g.aux_photons = {1};
  CHECK(SearchSpace::all_free(g, true).dimension() == 6);

  SearchSpace bad = s;
  bad.free[0].hi = 2.0;
  CHECK_THROWS_AS(bad.validate(), Error);
  CHECK(s.free[3].name().size() > 0);
}

TEST_CASE("objective contract") {
  // vacuum through an idle stage against a nearly vanishing even cat
  const SearchSpace s = space_for(InputSpec::vacuum(), {0});
  CHECK(objective(std::vector<double>{0.7, 0.0, 0.0, 0.0}, s, CatSpec(1e-4, Parity::Even)) < 1e-7);

  // theta at zero keeps the auxiliary photon away from the main mode
  SearchSpace z = space_for(InputSpec::vacuum(), {1});
  z.free.erase(z.free.begin());
  z.fixed.bs_theta = {0.0};
  CHECK(objective(std::vector<double>{0.0, 0.0, 0.0}, z, CatSpec(1.0, Parity::Odd)) == 1.0 + kInfeasiblePenalty);
}

TEST_CASE("bounded Nelder-Mead") {
  auto rosen = [](std::span<const double> x) {
    return 100.0 * std::pow(x[1] - x[0] * x[0], 2) + std::pow(1.0 - x[0], 2);
  };
  const std::vector<double> lo{-2.0, -2.0}, hi{2.0, 2.0};
  const auto r = nelder_mead(rosen, {-1.2, 1.0}, lo, hi, 4000, 1e-12);
  CHECK(r.x[0] == doctest::Approx(1.0).epsilon(1e-5));
  CHECK(r.x[1] == doctest::Approx(1.0).epsilon(1e-5));
  CHECK(r.evaluations <= 4000);

  // minimum outside the box lands on the boundary
  auto shifted = [](std::span<const double> x) { return std::pow(x[0] - 5.0, 2) + x[1] * x[1]; };
  const auto b = nelder_mead(shifted, {0.0, 0.5}, lo, hi, 2000, 1e-12);
  CHECK(b.x[0] == doctest::Approx(2.0));
  CHECK(b.x[1] <= hi[1]);
}

TEST_CASE("start points are seeded, deterministic and in bounds") {
  const SearchSpace s = space_for(InputSpec::fock(2), {1, 2});
  const auto a = start_points(s, 16, 42), b = start_points(s, 16, 42), c = start_points(s, 16, 43);
  CHECK(a == b);
  CHECK(a != c);
  const auto prefix = start_points(s, 8, 42);
  CHECK(std::equal(prefix.begin(), prefix.end(), a.begin()));
  for (const auto& p : a) {
    for (std::size_t i = 0; i < p.size(); ++i) {
      CHECK(p[i] >= s.free[i].lo);
      CHECK(p[i] <= s.free[i].hi);
    }
  }
  CHECK(analytic_start(space_for(InputSpec::kitten(1.0, Parity::Even), {1, 1}), CatSpec(1.5, Parity::Even)) ==
        std::nullopt);
}

TEST_CASE("grid oracle: one photon, odd target at beta = 0.4") {
  const CatSpec target(0.4, Parity::Odd);
  // the output family is D(i a0)(a^+ - z)|0>, z ranging over the plane
  double best = 0.0;
  const std::size_t cutoff = 30;
  for (int ia = -100; ia <= 100; ++ia) {
    const double a0 = 0.01 * ia;
    const FockVector back = apply(displacement_matrix(Complex(0.0, -a0), cutoff), scs_vector(target, cutoff));
    const Complex c0 = std::conj(back[0]), c1 = std::conj(back[1]);
    for (int ix = -200; ix <= 200; ++ix) {
      for (int iy = -200; iy <= 200; ++iy) {
        const Complex z(0.01 * ix, 0.01 * iy);
        best = std::max(best, std::norm(c1 - z * c0) / (1.0 + std::norm(z)));
      }
    }
  }
  const OptimizationOutcome o = optimize(space_for(InputSpec::vacuum(), {1}), target, small_budget());
  CHECK(o.fidelity >= best - 1e-9);
  CHECK(o.fidelity - best <= 1e-3);
}

TEST_CASE("optimize: determinism, recomputation and thread independence") {
  const SearchSpace s = space_for(InputSpec::fock(1), {1, 1});
  const CatSpec target(1.2, Parity::Even);
  OptimizerBudget b = small_budget(6, 9);
  const OptimizationOutcome x = optimize(s, target, b);
  const OptimizationOutcome y = optimize(s, target, b);
  CHECK(x.fidelity == y.fidelity);
  CHECK(x.success_probability == y.success_probability);
  CHECK(x.best_params == y.best_params);
  CHECK(x.objective_evaluations == y.objective_evaluations);
  b.threads = 3;
  const OptimizationOutcome z = optimize(s, target, b);
  CHECK(z.fidelity == x.fidelity);
  CHECK(z.best_params == x.best_params);

  const ConditionalResult r = run_scheme(x.best_config, target);
  CHECK(*r.fidelity == doctest::Approx(x.fidelity).epsilon(1e-12));
  CHECK(r.success_probability == doctest::Approx(x.success_probability).epsilon(1e-12));
  CHECK(x.restarts_used >= 6);
  CHECK(x.seed == 9);
}

TEST_CASE("optimize: more restarts never hurt") {
  const SearchSpace s = space_for(InputSpec::vacuum(), {2, 1});
  const CatSpec target(1.6, Parity::Odd);
  const double f4 = optimize(s, target, small_budget(4, 5)).fidelity;
  const double f12 = optimize(s, target, small_budget(12, 5)).fidelity;
  CHECK(f12 >= f4 - 1e-12);
}

TEST_CASE("optimize: degenerate even target is reached by the vacuum") {
  const OptimizationOutcome o = optimize(space_for(InputSpec::vacuum(), {0}), CatSpec(1e-3, Parity::Even),
                                         small_budget(2));
  CHECK(o.fidelity > 1 - 1e-6);
}

TEST_CASE("property: optimized fidelity respects the qudit bound") {
  const std::vector<std::pair<InputSpec, std::vector<std::size_t>>> cases{
      {InputSpec::vacuum(), {2}}, {InputSpec::fock(1), {1, 1}}, {InputSpec::vacuum(), {1, 2}}};
  for (const auto& [in, k] : cases) {
    const SearchSpace s = space_for(in, k);
    for (Parity p : {Parity::Even, Parity::Odd}) {
      for (double beta : {0.8, 1.5}) {
        const OptimizationOutcome o = optimize(s, CatSpec(beta, p), small_budget(4));
        CHECK(o.fidelity <= scq_fidelity_max_alpha(s.fixed.total_photons(), p, beta).fidelity + 1e-9);
      }
    }
  }
}

TEST_CASE("sweep") {
  const SearchSpace s = space_for(InputSpec::fock(1), {1});
  CHECK_THROWS_AS(sweep_beta(s, Parity::Odd, 1.0, 1.0, 0.25, small_budget(2)), Error);
  CHECK_THROWS_AS(sweep_beta(s, Parity::Odd, 1.0, 2.0, 0.0, small_budget(2)), Error);

  const auto pts = sweep_beta(s, Parity::Odd, 0.5, 1.5, 0.25, small_budget(3));
  REQUIRE(pts.size() == 5);
  CHECK(pts.back().beta == doctest::Approx(1.5));
  for (const auto& p : pts) {
    CHECK(!p.error);
    CHECK(p.fidelity <= p.scq_bound_max + 1e-9);
    CHECK(p.scq_bound_alpha0 <= p.scq_bound_max + 1e-12);
    CHECK(p.best_config.has_value());
  }
}
