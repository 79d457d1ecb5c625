// Polynomial-substitution cross-check for the cascade simulator. Works on
// the explicit multimode creation polynomial, so it shares no code path
// with the column recursion in scheme.cpp.

#include <cmath>
#include <map>
#include <string>
#include <vector>

#include "catsynth/error.hpp"
#include "catsynth/polynomial.hpp"
#include "catsynth/scheme.hpp"

namespace catsynth {

namespace {

constexpr std::size_t kMaxOracleModes = 4;

using Exponents = std::vector<unsigned>;
using Multinomial = std::map<Exponents, Complex>;

double binomial(unsigned n, unsigned k) {
  return std::exp(std::lgamma(n + 1.0) - std::lgamma(k + 1.0) - std::lgamma(n - k + 1.0));
}

// (x0, xk) -> (t x0 + r xk, -r x0 + t xk)
Multinomial substitute_beam_splitter(const Multinomial& f, std::size_t k, double t, double r) {
  Multinomial out;
  for (const auto& [e, c] : f) {
    const unsigned e0 = e[0], ek = e[k];
    for (unsigned i = 0; i <= e0; ++i) {
      // choose i factors of t x0 from (t x0 + r xk)^e0
      const Complex ci = c * binomial(e0, i) * std::pow(t, i) * std::pow(r, e0 - i);
      for (unsigned j = 0; j <= ek; ++j) {
        // choose j factors of -r x0 from (-r x0 + t xk)^ek
        const double cj = binomial(ek, j) * std::pow(-r, j) * std::pow(t, ek - j);
        Exponents ne = e;
        ne[0] = i + j;
        ne[k] = (e0 - i) + (ek - j);
        out[ne] += ci * cj;
      }
    }
  }
  return out;
}

// Main-mode amplitudes of the branch that starts from f0(a0^+) D0(gamma)|0>:
// D0(gamma T) g(a0^+)|0> with every auxiliary prefactor folded into g.
FockVector branch(const std::vector<Complex>& f0, Complex gamma, const SchemeConfig& config, std::size_t cutoff) {
  const std::size_t m = config.modes();
  Multinomial f;
  for (std::size_t d = 0; d < f0.size(); ++d) {
    if (f0[d] == Complex{}) continue;
    Exponents e(m + 1, 0);
    e[0] = static_cast<unsigned>(d);
    Complex c = f0[d];
    for (std::size_t j = 0; j < m; ++j) {
      e[j + 1] = static_cast<unsigned>(config.aux_photons[j]);
      c /= sqrt_factorial(config.aux_photons[j]);
    }
    f[e] += c;
  }

  Complex main_disp = gamma;
  Complex prefactor = 1.0;
  std::vector<Complex> bra(m);
  for (std::size_t j = 0; j < m; ++j) {
    const double t = std::cos(config.bs_theta[j]), r = std::sin(config.bs_theta[j]);
    f = substitute_beam_splitter(f, j + 1, t, r);
    // D0(d) -> D0(d t) Dj(d r); then <0|Dj(alpha) Dj(d r) = e^{i Im(alpha (d r)^*)} <-(alpha + d r)|
    const Complex aux_disp = main_disp * r;
    main_disp *= t;
    const Complex shifted = config.aux_alpha[j] + aux_disp;
    prefactor *= std::polar(std::exp(-0.5 * std::norm(shifted)), std::imag(config.aux_alpha[j] * std::conj(aux_disp)));
    bra[j] = -std::conj(shifted);
  }

  // <-A| h(a^+) = h(-A^*) <-A|
  std::vector<Complex> g;
  for (const auto& [e, c] : f) {
    Complex v = c * prefactor;
    for (std::size_t j = 0; j < m; ++j) v *= std::pow(bra[j], static_cast<int>(e[j + 1]));
    if (g.size() <= e[0]) g.resize(e[0] + 1);
    g[e[0]] += v;
  }
  FockVector local(g.empty() ? 0 : g.size() - 1);
  for (std::size_t l = 0; l < g.size(); ++l) local[l] = g[l] * sqrt_factorial(l);
  if (main_disp == Complex{}) return local.resized(std::max(cutoff, local.cutoff()));
  return displace_with_tail_control(local, main_disp, cutoff).resized(std::max(cutoff, local.cutoff()));
}

}  // namespace

OracleResult polynomial_oracle(const SchemeConfig& config) {
  config.validate();
  if (config.modes() > kMaxOracleModes) {
    throw Error(ErrorKind::UnsupportedInput, "oracle supports at most " + std::to_string(kMaxOracleModes) + " modes");
  }
  const InputSpec& in = config.input;
  std::size_t cutoff = std::max(config.cutoff, auto_cutoff(config.max_amplitude()) + config.total_photons());

  FockVector pre;
  switch (in.kind) {
    case InputSpec::Kind::Vacuum: pre = branch({1.0}, {}, config, cutoff); break;
    case InputSpec::Kind::Fock: {
      std::vector<Complex> f0(in.photons + 1);
      f0.back() = 1.0 / sqrt_factorial(in.photons);
      pre = branch(f0, {}, config, cutoff);
      break;
    }
    case InputSpec::Kind::Coherent: pre = branch({1.0}, in.gamma, config, cutoff); break;
    case InputSpec::Kind::Kitten: {
      if (in.kitten_two_term) {
        // polynomial on vacuum: Fock amplitudes / sqrt(k!)
        const FockVector v = input_state(config);
        std::vector<Complex> f0(v.size());
        for (std::size_t k = 0; k < v.size(); ++k) f0[k] = v[k] / sqrt_factorial(k);
        pre = branch(f0, {}, config, cutoff);
        break;
      }
      // N (|-b> +/- |b>)
      const double n = cat_normalization(in.beta_in, in.parity);
      const double sign = in.parity == Parity::Even ? 1.0 : -1.0;
      const FockVector minus = branch({1.0}, -in.beta_in, config, cutoff);
      const FockVector plus = branch({1.0}, in.beta_in, config, cutoff);
      const std::size_t len = std::max(minus.cutoff(), plus.cutoff());
      pre = FockVector(len);
      for (std::size_t l = 0; l <= len; ++l) pre[l] = n * (minus.at_or_zero(l) + sign * plus.at_or_zero(l));
      break;
    }
  }

  OracleResult out;
  out.probability = pre.norm_squared();
  if (!(out.probability >= 1e-300)) throw Error(ErrorKind::ZeroProbability, "oracle heralding probability vanishes");
  FockVector state = displace_with_tail_control(pre, Complex(0.0, config.alpha0), cutoff);
  const double inv = 1.0 / std::sqrt(out.probability);
  for (auto& c : state.amplitudes()) c *= inv;
  out.state = std::move(state);
  return out;
}

}  // namespace catsynth
