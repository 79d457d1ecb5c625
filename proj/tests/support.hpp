#pragma once

#include <cmath>
#include <random>

#include <boost/multiprecision/cpp_complex.hpp>

#include "catsynth/fock.hpp"
#include "catsynth/scheme.hpp"

namespace catsynth::testing {

// D(alpha) from the ladder recurrence D[m][n] = (sqrt(m) D[m-1][n-1] - alpha^* D[m][n-1]) / sqrt(n),
// seeded with the coherent column D[m][0] = <m|alpha>. The recurrence cancels badly in double
// precision, so it runs with 50 decimal digits.
inline ComplexMatrix ladder_displacement(Complex alpha, std::size_t cutoff) {
  using Wide = boost::multiprecision::cpp_complex_50;
  const std::size_t d = cutoff + 1;
  const Wide a(alpha.real(), alpha.imag());
  std::vector<Wide> prev(d), cur(d);
  ComplexMatrix out(d, d);
  Wide c = exp(Wide(-0.5 * std::norm(alpha)));
  for (std::size_t m = 0; m < d; ++m) {
    prev[m] = c;
    c *= a / sqrt(Wide(static_cast<double>(m + 1)));
  }
  auto store = [&](std::size_t n, const std::vector<Wide>& col) {
    for (std::size_t m = 0; m < d; ++m) out(m, n) = {static_cast<double>(col[m].real()), static_cast<double>(col[m].imag())};
  };
  store(0, prev);
  for (std::size_t n = 1; n < d; ++n) {
    const Wide inv = Wide(1) / sqrt(Wide(static_cast<double>(n)));
    for (std::size_t m = 0; m < d; ++m) {
      Wide v = -conj(a) * prev[m];
      if (m > 0) v += sqrt(Wide(static_cast<double>(m))) * prev[m - 1];
      cur[m] = v * inv;
    }
    store(n, cur);
    std::swap(prev, cur);
  }
  return out;
}

inline double max_abs_diff(const ComplexMatrix& a, const ComplexMatrix& b, std::size_t block) {
  double worst = 0.0;
  for (std::size_t i = 0; i < block; ++i)
    for (std::size_t j = 0; j < block; ++j) worst = std::max(worst, std::abs(a(i, j) - b(i, j)));
  return worst;
}

// Random cascade with m <= 3 and k_j <= 4 in the ranges of the oracle property.
inline SchemeConfig random_config(std::mt19937_64& rng, bool allow_kitten = false) {
  std::uniform_real_distribution<double> u(0.0, 1.0);
  std::uniform_int_distribution<int> modes(1, 3), photons(0, 4), kinds(0, allow_kitten ? 3 : 2);
  SchemeConfig c;
  const int m = modes(rng);
  for (int j = 0; j < m; ++j) {
    c.aux_photons.push_back(static_cast<std::size_t>(photons(rng)));
    c.bs_theta.push_back(0.1 + 1.37 * u(rng));
    c.aux_alpha.push_back(std::polar(2.0 * u(rng), 2.0 * M_PI * u(rng)));
  }
  c.alpha0 = 4.0 * u(rng) - 2.0;
  switch (kinds(rng)) {
    case 0: c.input = InputSpec::vacuum(); break;
    case 1: c.input = InputSpec::fock(static_cast<std::size_t>(photons(rng))); break;
    case 2: c.input = InputSpec::coherent(std::polar(1.5 * u(rng), 2.0 * M_PI * u(rng))); break;
    default: c.input = InputSpec::kitten(0.3 + 0.9 * u(rng), u(rng) < 0.5 ? Parity::Even : Parity::Odd); break;
  }
  return c;
}

}  // namespace catsynth::testing
