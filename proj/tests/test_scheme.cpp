#include <doctest.h>

#include <numbers>
#include <numeric>
#include <random>

#include "catsynth/error.hpp"
#include "catsynth/polynomial.hpp"
#include "catsynth/scheme.hpp"
#include "support.hpp"

using namespace catsynth;

namespace {

SchemeConfig cascade(InputSpec in, std::vector<std::size_t> k, std::vector<double> theta, std::vector<Complex> alpha,
                     double alpha0 = 0.0) {
  SchemeConfig c;
  c.input = in;
  c.aux_photons = std::move(k);
  c.bs_theta = std::move(theta);
  c.aux_alpha = std::move(alpha);
  c.alpha0 = alpha0;
  return c;
}

// D0(i a0) D0(shift) prod (a^+ - z)^{mult} |0>, normalized
FockVector root_form(const std::vector<SchemeRoot>& roots, Complex shift, double alpha0, std::size_t cutoff) {
  std::vector<Complex> z;
  for (const auto& r : roots) z.insert(z.end(), r.multiplicity, r.z);
  const FockVector poly = CreationPolynomial::from_roots(z).apply_to_vacuum(z.size());
  FockVector v = displace_with_tail_control(poly, shift, cutoff);
  v = displace_with_tail_control(v, Complex(0.0, alpha0), cutoff);
  return v.normalized();
}

double product_of_transmissions(const SchemeConfig& c) {
  double t = 1.0;
  for (double th : c.bs_theta) t *= std::cos(th);
  return t;
}

}  // namespace

TEST_CASE("beam splitter on small inputs") {
  const FockVector one = FockVector::basis(1, 3), vac = FockVector::basis(0, 3);
  const auto in = TwoModeAmplitudes::product(one, vac, 4);
  const auto same = apply_beam_splitter(in, 0.0);
  for (std::size_t i = 0; i < 4; ++i)
    for (std::size_t j = 0; j < 4; ++j) CHECK(same(i, j) == in(i, j));

  const double th = 0.6, t = std::cos(th), r = std::sin(th);
  const auto out = apply_beam_splitter(in, th);
  CHECK(std::abs(out(1, 0) - t) < 1e-15);
  CHECK(std::abs(out(0, 1) - r) < 1e-15);

  const auto hom = apply_beam_splitter(TwoModeAmplitudes::product(one, one, 4), std::numbers::pi / 4);
  CHECK(std::abs(hom(1, 1)) < 1e-15);
  CHECK(std::abs(hom(2, 0)) == doctest::Approx(std::sqrt(0.5)));
}

TEST_CASE("property: beam splitter conserves the photon-number distribution") {
  std::mt19937_64 rng(5);
  std::normal_distribution<double> g;
  for (int trial = 0; trial < 10; ++trial) {
    const std::size_t dim = 24;
    TwoModeAmplitudes in(dim);
    for (std::size_t i = 0; i < dim; ++i)
      for (std::size_t j = 0; i + j < dim; ++j) in(i, j) = {g(rng), g(rng)};
    const double theta = 0.1 + 0.13 * trial;
    const auto out = apply_beam_splitter(in, theta);
    const auto serial = apply_beam_splitter_serial(in, theta);
    const auto before = in.total_photon_distribution(), after = out.total_photon_distribution();
    for (std::size_t n = 0; n < before.size(); ++n) CHECK(after[n] == doctest::Approx(before[n]).epsilon(1e-12));
    for (std::size_t i = 0; i < dim; ++i)
      for (std::size_t j = 0; j < dim; ++j) CHECK(out(i, j) == serial(i, j));
  }

  TwoModeAmplitudes corner(4);
  corner(3, 3) = 1.0;
  CHECK_THROWS_AS(apply_beam_splitter(corner, 0.3), Error);
}

TEST_CASE("single stage contraction equals explicit two-mode evolution") {
  const FockVector main = coherent_vector(Complex(0.6, 0.3), 30);
  for (std::size_t k : {0u, 1u, 3u}) {
    const double theta = 0.8;
    const Complex alpha(-0.4, 0.9);
    const std::size_t dim = 60;
    const auto joint = apply_beam_splitter(TwoModeAmplitudes::product(main, FockVector::basis(k, k), dim), theta);
    const ComplexMatrix d = displacement_matrix(alpha, dim - 1);
    const FockVector fast = contract_stage(main, k, theta, alpha);
    for (std::size_t n0 = 0; n0 < 25; ++n0) {
      Complex ref{};
      for (std::size_t nk = 0; nk < dim; ++nk) ref += d(0, nk) * joint(n0, nk);
      CHECK(std::abs(fast.at_or_zero(n0) - ref) < 1e-12);
    }
  }
}

TEST_CASE("vacuum input without displacements yields a number state") {
  for (auto k : {std::vector<std::size_t>{1}, {2, 3}, {1, 1, 2}}) {
    const std::size_t n = std::accumulate(k.begin(), k.end(), std::size_t{0});
    const SchemeConfig c = cascade(InputSpec::vacuum(), k, std::vector<double>(k.size(), 0.7),
                                   std::vector<Complex>(k.size()));
    const ConditionalResult r = run_scheme(c);
    CHECK(fidelity_pure(r.state, FockVector::basis(n, n)) == doctest::Approx(1.0).epsilon(1e-14));
    for (std::size_t j = 0; j <= r.state.cutoff(); ++j) {
      if (j != n) CHECK(std::abs(r.state[j]) < 1e-14);
    }
  }
  const double th = 0.9;
  const ConditionalResult one = run_scheme(cascade(InputSpec::vacuum(), {1}, {th}, {Complex{}}));
  CHECK(one.success_probability == doctest::Approx(std::pow(std::sin(th), 2)).epsilon(1e-14));
}

TEST_CASE("zero heralding probability is reported") {
  // no coupling: the auxiliary photon always reaches its detector
  const SchemeConfig c = cascade(InputSpec::vacuum(), {1}, {0.0}, {Complex{}});
  try {
    run_scheme(c);
    FAIL("expected ZeroProbability");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::ZeroProbability);
  }
}

TEST_CASE("config validation") {
  SchemeConfig c = cascade(InputSpec::vacuum(), {1, 2}, {0.5}, {Complex{}, Complex{}});
  CHECK_THROWS_AS(c.validate(), Error);
  c = cascade(InputSpec::vacuum(), {}, {}, {});
  CHECK_THROWS_AS(c.validate(), Error);
  c = cascade(InputSpec::vacuum(), {1}, {std::nan("")}, {Complex{}});
  CHECK_THROWS_AS(c.validate(), Error);
}

TEST_CASE("single-stage closed form") {
  const Complex gamma(0.7, -0.2), alpha(0.3, 0.5);
  const double theta = 0.65, t = std::cos(theta), r = std::sin(theta);
  for (std::size_t k : {0u, 1u, 4u}) {
    const SchemeConfig c = cascade(InputSpec::coherent(gamma), {k}, {theta}, {alpha}, 0.4);
    const ConditionalResult sim = run_scheme(c);
    const AnalyticM1 a = analytic_conditional_m1(gamma, theta, alpha, k, 0.4, sim.state.cutoff());
    CHECK(fidelity_pure(sim.state, a.state) >= 1 - 1e-9);
    CHECK(std::abs(a.probability - sim.success_probability) <= 1e-8 * sim.success_probability);
    CHECK(std::abs(a.z1 + std::conj(t * (alpha + gamma * r) / r)) < 1e-14);
  }
  const FockVector shifted = analytic_conditional_m1(gamma, theta, alpha, 0, 0.4, 40).state;
  CHECK(fidelity_pure(shifted, coherent_vector(gamma * t + Complex(0.0, 0.4), 40)) == doctest::Approx(1.0));

  CHECK(std::abs(analytic_conditional_m1(0.0, theta, alpha, 2, 0.0, 30).z1 + std::conj(t * alpha / r)) < 1e-14);
  CHECK(std::abs(analytic_conditional_m1(gamma, theta, 0.0, 2, 0.0, 30).z1 + std::conj(gamma * t)) < 1e-14);
  CHECK_THROWS_AS(analytic_conditional_m1(gamma, 0.0, alpha, 1, 0.0, 30), Error);
}

TEST_CASE("two-stage closed form") {
  const Complex gamma(0.9, 0.4);
  const double th1 = 0.5, th2 = 1.1, t1 = std::cos(th1), t2 = std::cos(th2), r2 = std::sin(th2);

  const AnalyticM2 plain = analytic_conditional_m2(gamma, th1, th2, 0.0, 0.0, 2, 1, 0.0, 40);
  CHECK(std::abs(plain.z1 + t1 * std::conj(gamma) * t2) < 1e-14);
  CHECK(std::abs(plain.z2 + t1 * t2 * std::conj(gamma)) < 1e-14);

  const Complex a2(0.4, -0.8);
  const AnalyticM2 vac = analytic_conditional_m2(0.0, th1, th2, Complex(0.2, 0.1), a2, 1, 2, 0.0, 40);
  CHECK(std::abs(vac.z2 + t2 * std::conj(a2) / r2) < 1e-14);

  std::mt19937_64 rng(21);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  for (int trial = 0; trial < 20; ++trial) {
    const Complex g = std::polar(1.5 * u(rng), 6.3 * u(rng));
    const double a = 0.1 + 1.37 * u(rng), b = 0.1 + 1.37 * u(rng);
    const Complex x1 = std::polar(2.0 * u(rng), 6.3 * u(rng)), x2 = std::polar(2.0 * u(rng), 6.3 * u(rng));
    const std::size_t k1 = trial % 4, k2 = (trial / 4) % 4;
    const SchemeConfig c = cascade(InputSpec::coherent(g), {k1, k2}, {a, b}, {x1, x2}, u(rng) - 0.5);
    const ConditionalResult sim = run_scheme(c);
    const AnalyticM2 an = analytic_conditional_m2(g, a, b, x1, x2, k1, k2, c.alpha0, sim.state.cutoff());
    CHECK(fidelity_pure(sim.state, an.state) >= 1 - 1e-9);
    CHECK(std::abs(an.probability - sim.success_probability) <= 1e-8 * sim.success_probability);
  }
}

TEST_CASE("property: root-form structure of the output") {
  std::mt19937_64 rng(8);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  for (int trial = 0; trial < 40; ++trial) {
    SchemeConfig c = catsynth::testing::random_config(rng);
    const auto roots = scheme_roots(c);
    std::size_t degree = 0;
    for (const auto& r : roots) degree += r.multiplicity;
    CHECK(degree == c.total_photons());
    const ConditionalResult sim = run_scheme(c);
    const Complex shift = c.input.kind == InputSpec::Kind::Coherent ? c.input.gamma * product_of_transmissions(c)
                                                                     : Complex{};
    CHECK(fidelity_pure(sim.state, root_form(roots, shift, c.alpha0, sim.state.cutoff())) >= 1 - 1e-9);

    if (c.input.kind != InputSpec::Kind::Fock && c.modes() <= 2) {
      // placing the roots back through the auxiliary displacements recovers them
      std::vector<Complex> z;
      for (const auto& r : roots) z.push_back(r.z);
      const auto alphas = aux_alpha_for_roots(c, z);
      for (std::size_t j = 0; j < c.modes(); ++j) CHECK(std::abs(alphas[j] - c.aux_alpha[j]) < 1e-9);
    }
  }
  CHECK_THROWS_AS(scheme_roots(cascade(InputSpec::kitten(1.0, Parity::Even), {1}, {0.5}, {Complex{}})), Error);
}

TEST_CASE("property: simulator and polynomial oracle agree") {
  std::mt19937_64 rng(2024);
  for (int trial = 0; trial < 60; ++trial) {
    const SchemeConfig c = catsynth::testing::random_config(rng, true);
    const ConditionalResult sim = run_scheme(c);
    const OracleResult o = polynomial_oracle(c);
    CHECK(fidelity_pure(sim.state, o.state) >= 1 - 1e-9);
    CHECK(std::abs(o.probability - sim.success_probability) <= 1e-8 * sim.success_probability);
  }
  SchemeConfig big = cascade(InputSpec::vacuum(), {1, 1, 1, 1, 1}, std::vector<double>(5, 0.5),
                             std::vector<Complex>(5));
  CHECK_THROWS_AS(polynomial_oracle(big), Error);
}

TEST_CASE("property: probability bounds and final-displacement invariance") {
  std::mt19937_64 rng(99);
  for (int trial = 0; trial < 30; ++trial) {
    SchemeConfig c = catsynth::testing::random_config(rng, true);
    const double p = run_scheme(c).success_probability;
    CHECK(p >= 0.0);
    CHECK(p <= 1.0);
    for (double a0 : {-1.7, 0.0, 2.3}) {
      c.alpha0 = a0;
      CHECK(run_scheme(c).success_probability == doctest::Approx(p).epsilon(1e-13));
    }
  }
}

TEST_CASE("fidelity with a target and the kitten two-term input") {
  const CatSpec target(1.2, Parity::Odd);
  const SchemeConfig c = cascade(InputSpec::kitten(0.8, Parity::Odd), {2}, {0.7}, {Complex(0.1, -0.3)}, 0.2);
  const ConditionalResult r = run_scheme(c, target);
  REQUIRE(r.fidelity);
  const FockVector cat = scs_vector(target, r.state.cutoff());
  CHECK(*r.fidelity == doctest::Approx(fidelity_pure(r.state, cat)).epsilon(1e-10));

  SchemeConfig two = c;
  two.input = InputSpec::kitten(0.8, Parity::Odd, true);
  const FockVector in = input_state(two);
  CHECK(in.norm_squared() == doctest::Approx(1.0));
  CHECK(std::abs(in[3] / in[1] - 0.64 / std::sqrt(6.0)) < 1e-14);
  const ConditionalResult rt = run_scheme(two);
  CHECK(fidelity_pure(rt.state, polynomial_oracle(two).state) >= 1 - 1e-9);
}
