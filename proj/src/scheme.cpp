#include "catsynth/scheme.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "catsynth/error.hpp"
#include "catsynth/polynomial.hpp"

namespace catsynth {

namespace {

constexpr double kZeroProbability = 1e-300;
constexpr double kDegenerateCoefficient = 1e-14;
constexpr std::size_t kMaxOutputCutoff = 4000;

double sqrt_of(std::size_t n) { return std::sqrt(static_cast<double>(n)); }

bool finite(Complex z) { return std::isfinite(z.real()) && std::isfinite(z.imag()); }

// Next column of the beam-splitter block N+1 from a column of block N.
// raise_main: input (n0+1, nk) from (n0, nk), scaled by 1/sqrt(n0+1);
// otherwise input (n0, nk+1) from (n0, nk), scaled by 1/sqrt(nk+1).
void raise_column(std::span<const Complex> prev, std::span<Complex> next, double t, double r, bool raise_main,
                  double inv_norm) {
  const std::size_t total = prev.size();  // block index N+1 == prev.size()
  const double c_main = raise_main ? t : -r;
  const double c_aux = raise_main ? r : t;
  for (std::size_t p = 0; p <= total; ++p) {
    const std::size_t q = total - p;
    Complex acc{};
    if (p > 0) acc += c_main * sqrt_of(p) * prev[p - 1];
    if (q > 0) acc += c_aux * sqrt_of(q) * prev[p];
    next[p] = acc * inv_norm;
  }
}

double dropped_weight(const TwoModeAmplitudes& joint) {
  const std::size_t dim = joint.dim();
  double w = 0.0;
  for (std::size_t n0 = 0; n0 < dim; ++n0)
    for (std::size_t nk = dim - n0; nk < dim; ++nk) w += std::norm(joint(n0, nk));
  return w;
}

void check_joint_support(const TwoModeAmplitudes& joint) {
  double total = 0.0;
  for (std::size_t n0 = 0; n0 < joint.dim(); ++n0)
    for (std::size_t nk = 0; nk < joint.dim(); ++nk) total += std::norm(joint(n0, nk));
  const double w = dropped_weight(joint);
  if (w > 1e-20 * std::max(total, 1e-300)) {
    throw Error(ErrorKind::CutoffTooSmall,
                "two-mode amplitudes reach total photon number >= " + std::to_string(joint.dim()) + " (weight " +
                    std::to_string(w) + ")");
  }
}

template <bool Parallel>
TwoModeAmplitudes beam_splitter_impl(const TwoModeAmplitudes& joint, double theta) {
  check_joint_support(joint);
  const std::size_t dim = joint.dim();
  const double t = std::cos(theta), r = std::sin(theta);
  TwoModeAmplitudes out(dim);
  // Block N holds columns indexed by n0 (nk = N - n0), each of length N+1
  // over the output main-mode count p.
  std::vector<Complex> prev(1, Complex(1.0)), cur;
  out(0, 0) = joint(0, 0);
  for (std::size_t total = 1; total < dim; ++total) {
    const std::size_t width = total + 1;
    cur.assign(width * width, Complex{});
    const auto n = static_cast<std::ptrdiff_t>(width);
#pragma omp parallel for if (Parallel && width > 24) schedule(static)
    for (std::ptrdiff_t i = 0; i < n; ++i) {
      const auto n0 = static_cast<std::size_t>(i);
      std::span<Complex> next(cur.data() + n0 * width, width);
      if (n0 > 0) {
        raise_column(std::span<const Complex>(prev.data() + (n0 - 1) * total, total), next, t, r, true,
                     1.0 / sqrt_of(n0));
      } else {
        raise_column(std::span<const Complex>(prev.data(), total), next, t, r, false, 1.0 / sqrt_of(total));
      }
    }
#pragma omp parallel for if (Parallel && width > 24) schedule(static)
    for (std::ptrdiff_t i = 0; i < n; ++i) {
      const auto p = static_cast<std::size_t>(i);
      Complex acc{};
      for (std::size_t n0 = 0; n0 < width; ++n0) acc += cur[n0 * width + p] * joint(n0, total - n0);
      out(p, total - p) = acc;
    }
    std::swap(prev, cur);
  }
  return out;
}

FockVector scaled(FockVector v, Complex factor) {
  for (auto& c : v.amplitudes()) c *= factor;
  return v;
}

}  // namespace

InputSpec InputSpec::fock(std::size_t k0) {
  InputSpec s;
  s.kind = Kind::Fock;
  s.photons = k0;
  return s;
}

InputSpec InputSpec::coherent(Complex gamma) {
  InputSpec s;
  s.kind = Kind::Coherent;
  s.gamma = gamma;
  return s;
}

InputSpec InputSpec::kitten(double beta_in, Parity parity, bool two_term) {
  InputSpec s;
  s.kind = Kind::Kitten;
  s.beta_in = beta_in;
  s.parity = parity;
  s.kitten_two_term = two_term;
  return s;
}

double InputSpec::max_amplitude() const noexcept {
  switch (kind) {
    case Kind::Coherent: return std::abs(gamma);
    case Kind::Kitten: return beta_in;
    default: return 0.0;
  }
}

std::size_t SchemeConfig::total_photons() const noexcept {
  std::size_t n = input.fock_photons();
  for (auto k : aux_photons) n += k;
  return n;
}

double SchemeConfig::max_amplitude() const noexcept {
  double m = std::max(input.max_amplitude(), std::abs(alpha0));
  for (const auto& a : aux_alpha) m = std::max(m, std::abs(a));
  return m;
}

std::size_t SchemeConfig::working_cutoff() const noexcept {
  return cutoff != 0 ? cutoff : auto_cutoff(input.max_amplitude());
}

void SchemeConfig::validate() const {
  const std::size_t m = aux_photons.size();
  if (m == 0) throw Error(ErrorKind::InvalidArgument, "the cascade needs at least one auxiliary mode");
  if (bs_theta.size() != m || aux_alpha.size() != m) {
    throw Error(ErrorKind::InvalidArgument, "aux_photons, bs_theta and aux_alpha must have equal length (" +
                                                std::to_string(m) + ", " + std::to_string(bs_theta.size()) +
                                                ", " + std::to_string(aux_alpha.size()) + ")");
  }
  for (double th : bs_theta)
    if (!std::isfinite(th)) throw Error(ErrorKind::InvalidArgument, "beam-splitter angle is not finite");
  for (const auto& a : aux_alpha)
    if (!finite(a)) throw Error(ErrorKind::InvalidArgument, "auxiliary displacement is not finite");
  if (!std::isfinite(alpha0)) throw Error(ErrorKind::InvalidArgument, "alpha0 is not finite");
  if (input.kind == InputSpec::Kind::Coherent && !finite(input.gamma)) {
    throw Error(ErrorKind::InvalidArgument, "coherent amplitude is not finite");
  }
  if (input.kind == InputSpec::Kind::Kitten && !(input.beta_in > 0.0 && std::isfinite(input.beta_in))) {
    throw Error(ErrorKind::InvalidArgument, "kitten amplitude must be > 0");
  }
  if (input.kind == InputSpec::Kind::Fock && cutoff != 0 && input.photons > cutoff) {
    throw Error(ErrorKind::CutoffTooSmall, "Fock input exceeds cutoff");
  }
}

TwoModeAmplitudes TwoModeAmplitudes::product(const FockVector& a, const FockVector& b, std::size_t dim) {
  TwoModeAmplitudes out(dim);
  for (std::size_t i = 0; i < std::min(dim, a.size()); ++i)
    for (std::size_t j = 0; j < std::min(dim, b.size()); ++j) out(i, j) = a[i] * b[j];
  return out;
}

std::vector<double> TwoModeAmplitudes::total_photon_distribution() const {
  std::vector<double> dist(2 * dim_ - 1, 0.0);
  for (std::size_t n0 = 0; n0 < dim_; ++n0)
    for (std::size_t nk = 0; nk < dim_; ++nk) dist[n0 + nk] += std::norm((*this)(n0, nk));
  return dist;
}

TwoModeAmplitudes apply_beam_splitter(const TwoModeAmplitudes& joint, double theta) {
  return beam_splitter_impl<true>(joint, theta);
}

TwoModeAmplitudes apply_beam_splitter_serial(const TwoModeAmplitudes& joint, double theta) {
  return beam_splitter_impl<false>(joint, theta);
}

FockVector contract_stage(const FockVector& main, std::size_t k, double theta, Complex alpha) {
  const double t = std::cos(theta), r = std::sin(theta);
  const std::size_t len = main.cutoff();
  FockVector out(len + k);
  // <0| D(alpha) = <-alpha|
  std::vector<Complex> bra = coherent_amplitudes(-alpha, len + k + 1);
  for (auto& b : bra) b = std::conj(b);

  // Column U|0, k>, built by raising the auxiliary mode from |0, 0>.
  std::vector<Complex> col(1, Complex(1.0)), next;
  for (std::size_t j = 0; j < k; ++j) {
    next.assign(j + 2, Complex{});
    raise_column(col, next, t, r, false, 1.0 / sqrt_of(j + 1));
    std::swap(col, next);
  }
  for (std::size_t n0 = 0;; ++n0) {
    const Complex c = main[n0];
    if (c != Complex{}) {
      const std::size_t total = n0 + k;
      for (std::size_t p = 0; p <= total; ++p) out[p] += c * col[p] * bra[total - p];
    }
    if (n0 == len) break;
    next.assign(col.size() + 1, Complex{});
    raise_column(col, next, t, r, true, 1.0 / sqrt_of(n0 + 1));
    std::swap(col, next);
  }
  return out;
}

FockVector input_state(const SchemeConfig& config) {
  const InputSpec& in = config.input;
  const std::size_t cutoff = config.working_cutoff();
  switch (in.kind) {
    case InputSpec::Kind::Vacuum: return FockVector::basis(0, 0);
    case InputSpec::Kind::Fock: return FockVector::basis(in.photons, in.photons);
    case InputSpec::Kind::Coherent: return coherent_vector(in.gamma, cutoff);
    case InputSpec::Kind::Kitten: {
      if (!in.kitten_two_term) return scs_vector(CatSpec(in.beta_in, in.parity), cutoff);
      const double b2 = in.beta_in * in.beta_in;
      FockVector v(3);
      if (in.parity == Parity::Even) {
        v[0] = 1.0;
        v[2] = b2 / std::sqrt(2.0);
      } else {
        v = FockVector(3);
        v[1] = 1.0;
        v[3] = b2 / std::sqrt(6.0);
      }
      return v.normalized();
    }
  }
  throw Error(ErrorKind::UnsupportedInput, "unknown input kind");
}

ConditionalCore conditional_core(const SchemeConfig& config) {
  config.validate();
  FockVector state = input_state(config);
  for (std::size_t j = 0; j < config.modes(); ++j) {
    state = contract_stage(state, config.aux_photons[j], config.bs_theta[j], config.aux_alpha[j]);
  }
  const double p = state.norm_squared();
  if (!(p >= kZeroProbability)) {
    throw Error(ErrorKind::ZeroProbability, "heralding probability " + std::to_string(p) + " below 1e-300");
  }
  return {std::move(state), p};
}

double conditional_fidelity(const ConditionalCore& core, double alpha0, const CatSpec& target) {
  const auto bra = displaced_cat_amplitudes(target.with_alpha(alpha0), core.amplitudes.cutoff());
  Complex overlap{};
  for (std::size_t l = 0; l < bra.size(); ++l) overlap += std::conj(bra[l]) * core.amplitudes[l];
  return std::min(std::norm(overlap) / core.probability, 1.0);
}

FockVector displace_with_tail_control(const FockVector& v, Complex alpha, std::size_t min_cutoff) {
  const std::size_t support = v.cutoff();
  if (alpha == Complex{}) return v.resized(std::max(min_cutoff, support));
  const double a = std::abs(alpha);
  const double spread = std::sqrt(static_cast<double>(support)) + a;
  std::size_t cutoff = std::max({min_cutoff, support, static_cast<std::size_t>(std::ceil(spread * spread + 8.0 * spread + 20.0)),
                                 static_cast<std::size_t>(std::ceil(a * a + 6.0 * a + 10.0))});
  const double n2 = v.norm_squared();
  while (cutoff <= kMaxOutputCutoff) {
    FockVector out = apply(displacement_matrix(alpha, cutoff), v);
    const double tail = 1.0 - out.norm_squared() / n2;
    if (tail <= kTailTolerance) return out;
    cutoff += cutoff / 2;
  }
  throw Error(ErrorKind::CutoffTooSmall, "displacement output tail does not converge below cutoff 4000");
}

ConditionalResult run_scheme(const SchemeConfig& config, const std::optional<CatSpec>& target) {
  ConditionalCore core = conditional_core(config);
  std::size_t min_cutoff = config.cutoff;
  if (target) min_cutoff = std::max(min_cutoff, auto_cutoff(target->beta()));
  ConditionalResult result;
  result.success_probability = core.probability;
  result.state = scaled(displace_with_tail_control(core.amplitudes, Complex(0.0, config.alpha0), min_cutoff),
                        1.0 / std::sqrt(core.probability));
  if (target) result.fidelity = fidelity_pure(result.state, scs_vector(*target, result.state.cutoff()));
  return result;
}

AnalyticM1 analytic_conditional_m1(Complex gamma, double theta1, Complex alpha1, std::size_t k1, double alpha0,
                                   std::size_t cutoff) {
  const double t = std::cos(theta1), r = std::sin(theta1);
  if (std::abs(r) < kDegenerateCoefficient) throw Error(ErrorKind::DegenerateBS, "r1 = 0");
  const Complex shifted = alpha1 + gamma * r;
  AnalyticM1 out;
  out.z1 = -std::conj(t * shifted / r);
  const Complex phase = std::polar(1.0, std::imag(alpha1 * std::conj(gamma) * r));
  const Complex pref = phase / sqrt_factorial(k1) * std::exp(-0.5 * std::norm(shifted)) * std::pow(Complex(-r), static_cast<int>(k1));
  const std::vector<Complex> roots(k1, out.z1);
  const FockVector local = scaled(CreationPolynomial::from_roots(roots).apply_to_vacuum(k1), pref);
  out.probability = local.norm_squared();
  // D(i a0) D(g t) = e^{i Im(i a0 (g t)^*)} D(i a0 + g t)
  const Complex a0(0.0, alpha0);
  const Complex disp = gamma * t;
  const Complex comp = std::polar(1.0, std::imag(a0 * std::conj(disp)));
  out.state = scaled(displace_with_tail_control(local, a0 + disp, cutoff), comp / std::sqrt(out.probability));
  return out;
}

AnalyticM2 analytic_conditional_m2(Complex gamma, double theta1, double theta2, Complex alpha1, Complex alpha2,
                                   std::size_t k1, std::size_t k2, double alpha0, std::size_t cutoff) {
  const double t1 = std::cos(theta1), r1 = std::sin(theta1);
  const double t2 = std::cos(theta2), r2 = std::sin(theta2);
  if (std::abs(r1) < kDegenerateCoefficient || std::abs(r2) < kDegenerateCoefficient ||
      std::abs(t2) < kDegenerateCoefficient) {
    throw Error(ErrorKind::DegenerateBS, "analytic two-stage form needs r1, r2, t2 != 0");
  }
  const Complex s1 = alpha1 + gamma * r1;
  const Complex s2 = alpha2 + gamma * t1 * r2;
  AnalyticM2 out;
  out.z1 = r2 * std::conj(s2) / t2 - t1 * std::conj(s1) / (r1 * t2);
  out.z2 = -t2 * std::conj(s2) / r2;
  const double phi1 = std::imag(alpha1 * std::conj(gamma) * r1);
  const double phi2 = std::imag(alpha2 * std::conj(gamma) * t1 * r2);
  const Complex pref = std::polar(1.0, phi1 + phi2) / (sqrt_factorial(k1) * sqrt_factorial(k2)) *
                       std::exp(-0.5 * std::norm(s1) - 0.5 * std::norm(s2)) *
                       std::pow(Complex(-r1 * t2), static_cast<int>(k1)) * std::pow(Complex(-r2), static_cast<int>(k2));
  std::vector<Complex> roots(k1, out.z1);
  roots.insert(roots.end(), k2, out.z2);
  const FockVector local = scaled(CreationPolynomial::from_roots(roots).apply_to_vacuum(k1 + k2), pref);
  out.probability = local.norm_squared();
  const Complex a0(0.0, alpha0);
  const Complex disp = gamma * t1 * t2;
  const Complex comp = std::polar(1.0, std::imag(a0 * std::conj(disp)));
  out.state = scaled(displace_with_tail_control(local, a0 + disp, cutoff), comp / std::sqrt(out.probability));
  return out;
}

namespace {

struct CascadeGeometry {
  std::vector<double> t, r;
  std::vector<Complex> shifted;  // A_l = alpha_l + gamma r_l prod_{p<l} t_p
  Complex gamma{};

  // prod_{from <= p < to} t_p (0-based, half-open)
  double transmission(std::size_t from, std::size_t to) const {
    double acc = 1.0;
    for (std::size_t p = from; p < to; ++p) acc *= t[p];
    return acc;
  }
};

CascadeGeometry geometry(const SchemeConfig& config) {
  config.validate();
  if (config.input.kind == InputSpec::Kind::Kitten) {
    throw Error(ErrorKind::UnsupportedInput, "kitten input has no finite root form");
  }
  CascadeGeometry g;
  const std::size_t m = config.modes();
  g.gamma = config.input.kind == InputSpec::Kind::Coherent ? config.input.gamma : Complex{};
  for (std::size_t j = 0; j < m; ++j) {
    g.t.push_back(std::cos(config.bs_theta[j]));
    g.r.push_back(std::sin(config.bs_theta[j]));
  }
  for (std::size_t j = 0; j < m; ++j) g.shifted.push_back(config.aux_alpha[j] + g.gamma * g.r[j] * g.transmission(0, j));
  return g;
}

}  // namespace

std::vector<SchemeRoot> scheme_roots(const SchemeConfig& config) {
  const CascadeGeometry g = geometry(config);
  const std::size_t m = config.modes();
  std::vector<SchemeRoot> out;
  const std::size_t k0 = config.input.fock_photons();
  if (k0 > 0) {
    Complex acc{};
    for (std::size_t l = 0; l < m; ++l) acc += g.r[l] * g.transmission(0, l) * std::conj(g.shifted[l]);
    const double all = g.transmission(0, m);
    if (std::abs(all) < kDegenerateCoefficient) throw Error(ErrorKind::DegenerateBS, "a transmission vanishes");
    out.push_back({acc / all, k0});
  }
  for (std::size_t j = 0; j < m; ++j) {
    Complex acc = -g.t[j] * std::conj(g.shifted[j]);
    for (std::size_t l = j + 1; l < m; ++l) acc += g.r[j] * g.r[l] * g.transmission(j + 1, l) * std::conj(g.shifted[l]);
    const double denom = g.r[j] * g.transmission(j + 1, m);
    if (std::abs(denom) < kDegenerateCoefficient) throw Error(ErrorKind::DegenerateBS, "root of mode " + std::to_string(j + 1) + " is at infinity");
    out.push_back({acc / denom, config.aux_photons[j]});
  }
  return out;
}

std::vector<Complex> aux_alpha_for_roots(const SchemeConfig& config, std::span<const Complex> roots) {
  const CascadeGeometry g = geometry(config);
  const std::size_t m = config.modes();
  if (roots.size() != m) throw Error(ErrorKind::InvalidArgument, "need one root per auxiliary mode");
  std::vector<Complex> conj_shift(m);
  for (std::size_t j = m; j-- > 0;) {
    if (std::abs(g.t[j]) < kDegenerateCoefficient) throw Error(ErrorKind::DegenerateBS, "t = 0");
    Complex acc = -roots[j] * g.r[j] * g.transmission(j + 1, m);
    for (std::size_t l = j + 1; l < m; ++l) acc += g.r[j] * g.r[l] * g.transmission(j + 1, l) * conj_shift[l];
    conj_shift[j] = acc / g.t[j];
  }
  std::vector<Complex> alpha(m);
  for (std::size_t j = 0; j < m; ++j) alpha[j] = std::conj(conj_shift[j]) - g.gamma * g.r[j] * g.transmission(0, j);
  return alpha;
}

}  // namespace catsynth
