#include <doctest.h>

#include <random>

#include "catsynth/error.hpp"
#include "catsynth/polynomial.hpp"

using namespace catsynth;

TEST_CASE("roots of small polynomials") {
  const CreationPolynomial p({2.0, -3.0, 1.0});  // (z-1)(z-2)
  const RootSet r = polynomial_roots(p);
  const std::vector<Complex> expect{1.0, 2.0};
  CHECK(root_matching_distance(r.roots, expect) < 1e-14);
  CHECK(r.scale == Complex(1.0));

  const CreationPolynomial zeros({0.0, 0.0, 1.0, 3.0});
  const RootSet rz = polynomial_roots(zeros);
  CHECK(std::count(rz.roots.begin(), rz.roots.end(), Complex(0.0)) == 2);
  CHECK(root_matching_distance(rz.roots, std::vector<Complex>{0.0, 0.0, -1.0 / 3.0}) < 1e-14);

  CHECK_THROWS_AS(polynomial_roots(CreationPolynomial({Complex(4.0)})), Error);
  CHECK_THROWS_AS(CreationPolynomial({1.0, 0.0}), Error);
}

TEST_CASE("from_roots, evaluate and vacuum action") {
  const std::vector<Complex> z{Complex(1.0, 1.0), Complex(-0.5, 0.0)};
  const auto p = CreationPolynomial::from_roots(z, 2.0);
  CHECK(p.degree() == 2);
  for (Complex root : z) CHECK(std::abs(p.evaluate(root)) < 1e-15);
  CHECK(p.evaluate(3.0) == 2.0 * (3.0 - z[0]) * (3.0 - z[1]));

  // (a^+)^2 |0> = sqrt(2) |2>
  const FockVector v = CreationPolynomial({0.0, 0.0, 1.0}).apply_to_vacuum(5);
  CHECK(v[2].real() == doctest::Approx(std::sqrt(2.0)));
  CHECK(v.norm_squared() == doctest::Approx(2.0));
}

TEST_CASE("property: polynomial -> roots -> polynomial preserves coefficients") {
  std::mt19937_64 rng(11);
  std::normal_distribution<double> g;
  for (int trial = 0; trial < 60; ++trial) {
    const std::size_t degree = 1 + static_cast<std::size_t>(trial % 12);
    std::vector<Complex> c(degree + 1);
    for (auto& x : c) x = {g(rng), g(rng)};
    const CreationPolynomial p(c);
    const CreationPolynomial back = polynomial_roots(p).expand();
    double scale = 0.0, err = 0.0;
    for (std::size_t k = 0; k <= degree; ++k) {
      scale = std::max(scale, std::abs(p[k]));
      err = std::max(err, std::abs(p[k] - back[k]));
    }
    CHECK(err <= 1e-9 * scale);
  }
}

TEST_CASE("root matching is permutation invariant") {
  const std::vector<Complex> a{1.0, Complex(0, 2), -3.0};
  const std::vector<Complex> b{-3.0, 1.0, Complex(0, 2)};
  CHECK(root_matching_distance(a, b) == 0.0);
  CHECK(root_matching_distance(a, std::vector<Complex>{1.0, Complex(0, 2), -2.5}) == doctest::Approx(0.5));
}
