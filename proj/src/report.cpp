#include "catsynth/report.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <sstream>

#include "catsynth/error.hpp"

namespace catsynth::report {

namespace {

[[noreturn]] void schema_error(const std::string& what) { throw Error(ErrorKind::InvalidArgument, "config: " + what); }

double number(const json& v, const std::string& field) {
  if (!v.is_number()) schema_error(field + " must be a number");
  const double x = v.get<double>();
  if (!std::isfinite(x)) schema_error(field + " must be finite");
  return x;
}

std::size_t count(const json& v, const std::string& field) {
  if (!v.is_number_integer() || v.get<long long>() < 0) schema_error(field + " must be a non-negative integer");
  return v.get<std::size_t>();
}

Complex complex_pair(const json& v, const std::string& field) {
  if (v.is_number()) return {number(v, field), 0.0};
  if (!v.is_array() || v.size() != 2) schema_error(field + " must be [re, im]");
  return {number(v[0], field + "[0]"), number(v[1], field + "[1]")};
}

bool is_free(const json& v) { return v.is_string() && v.get<std::string>() == "free"; }

Parity parity_field(const json& v, const std::string& field) {
  if (!v.is_string()) schema_error(field + " must be \"even\" or \"odd\"");
  try {
    return parse_parity(v.get<std::string>());
  } catch (const Error&) {
    schema_error(field + " must be \"even\" or \"odd\"");
  }
}

InputSpec parse_input(const json& in, bool& gamma_free) {
  if (!in.is_object() || !in.contains("kind") || !in["kind"].is_string()) schema_error("input.kind is required");
  const std::string kind = in["kind"].get<std::string>();
  if (kind == "vacuum") return InputSpec::vacuum();
  if (kind == "fock") {
    if (!in.contains("k0")) schema_error("fock input needs k0");
    return InputSpec::fock(count(in["k0"], "input.k0"));
  }
  if (kind == "coherent") {
    if (!in.contains("gamma")) schema_error("coherent input needs gamma");
    if (is_free(in["gamma"])) {
      gamma_free = true;
      return InputSpec::coherent({});
    }
    return InputSpec::coherent(complex_pair(in["gamma"], "input.gamma"));
  }
  if (kind == "kitten") {
    if (!in.contains("beta_in")) schema_error("kitten input needs beta_in");
    const double b = number(in["beta_in"], "input.beta_in");
    if (!(b > 0.0)) schema_error("input.beta_in must be > 0");
    const Parity p = in.contains("parity") ? parity_field(in["parity"], "input.parity") : Parity::Even;
    const bool two = in.contains("two_term") && in["two_term"].is_boolean() && in["two_term"].get<bool>();
    return InputSpec::kitten(b, p, two);
  }
  schema_error("unknown input.kind '" + kind + "'");
}

}  // namespace

std::optional<CatSpec> Job::target() const {
  if (!target_beta || !target_parity) return std::nullopt;
  return CatSpec(*target_beta, *target_parity);
}

Job parse_job(const json& doc) {
  if (!doc.is_object()) schema_error("document must be a JSON object");
  for (const char* key : {"input", "aux_photons"}) {
    if (!doc.contains(key)) schema_error(std::string("missing field '") + key + "'");
  }
  Job job;
  job.canonical = doc;
  bool gamma_free = false;
  SchemeConfig cfg;
  cfg.input = parse_input(doc["input"], gamma_free);

  const json& aux = doc["aux_photons"];
  if (!aux.is_array() || aux.empty()) schema_error("aux_photons must be a non-empty array");
  for (const auto& k : aux) cfg.aux_photons.push_back(count(k, "aux_photons[]"));
  const std::size_t m = cfg.aux_photons.size();

  Bounds bounds;
  if (doc.contains("optimizer")) {
    const json& opt = doc["optimizer"];
    if (!opt.is_object()) schema_error("optimizer must be an object");
    if (opt.contains("restarts")) job.budget.restarts = static_cast<int>(count(opt["restarts"], "optimizer.restarts"));
    if (opt.contains("seed")) job.budget.seed = count(opt["seed"], "optimizer.seed");
    if (opt.contains("max_evaluations")) {
      job.budget.max_evaluations = static_cast<int>(count(opt["max_evaluations"], "optimizer.max_evaluations"));
    }
    if (opt.contains("tolerance")) job.budget.tolerance = number(opt["tolerance"], "optimizer.tolerance");
    if (job.budget.restarts < 1) schema_error("optimizer.restarts must be >= 1");
    if (opt.contains("bounds")) {
      const json& b = opt["bounds"];
      if (!b.is_object()) schema_error("optimizer.bounds must be an object");
      if (b.contains("theta")) {
        if (!b["theta"].is_array() || b["theta"].size() != 2) schema_error("bounds.theta must be [lo, hi]");
        bounds.theta_lo = number(b["theta"][0], "bounds.theta[0]");
        bounds.theta_hi = number(b["theta"][1], "bounds.theta[1]");
      }
      if (b.contains("alpha")) bounds.alpha = number(b["alpha"], "bounds.alpha");
      if (b.contains("alpha0")) bounds.alpha0 = number(b["alpha0"], "bounds.alpha0");
      if (b.contains("gamma")) bounds.gamma = number(b["gamma"], "bounds.gamma");
    }
  }

  std::vector<FreeParameter> free;
  const json theta = doc.value("bs_theta", json("free"));
  if (is_free(theta)) {
    cfg.bs_theta.assign(m, 0.785);
    for (std::size_t j = 0; j < m; ++j) free.push_back({ParamKind::Theta, j, bounds.theta_lo, bounds.theta_hi});
  } else {
    if (!theta.is_array() || theta.size() != m) schema_error("bs_theta must hold one angle per auxiliary mode");
    for (const auto& t : theta) cfg.bs_theta.push_back(number(t, "bs_theta[]"));
  }

  const json alpha = doc.value("aux_alpha", json("free"));
  if (is_free(alpha)) {
    cfg.aux_alpha.assign(m, Complex{});
    for (std::size_t j = 0; j < m; ++j) {
      free.push_back({ParamKind::AlphaRe, j, -bounds.alpha, bounds.alpha});
      free.push_back({ParamKind::AlphaIm, j, -bounds.alpha, bounds.alpha});
    }
  } else {
    if (!alpha.is_array() || alpha.size() != m) schema_error("aux_alpha must hold one [re, im] per auxiliary mode");
    for (const auto& a : alpha) cfg.aux_alpha.push_back(complex_pair(a, "aux_alpha[]"));
  }

  const json a0 = doc.value("alpha0", json("free"));
  if (is_free(a0)) {
    free.push_back({ParamKind::Alpha0, 0, -bounds.alpha0, bounds.alpha0});
  } else {
    cfg.alpha0 = number(a0, "alpha0");
  }
  if (gamma_free) {
    free.push_back({ParamKind::GammaRe, 0, -bounds.gamma, bounds.gamma});
    free.push_back({ParamKind::GammaIm, 0, -bounds.gamma, bounds.gamma});
  }

  if (doc.contains("cutoff")) cfg.cutoff = count(doc["cutoff"], "cutoff");

  if (doc.contains("target")) {
    const json& t = doc["target"];
    if (!t.is_object()) schema_error("target must be an object");
    if (t.contains("beta")) {
      const double b = number(t["beta"], "target.beta");
      if (!(b > 0.0)) schema_error("target.beta must be > 0");
      job.target_beta = b;
    }
    if (!t.contains("parity")) schema_error("target.parity is required");
    job.target_parity = parity_field(t["parity"], "target.parity");
  }

  cfg.validate();
  job.space.fixed = std::move(cfg);
  job.space.free = std::move(free);
  if (!job.space.free.empty()) job.space.validate();
  return job;
}

Job load_job(const std::filesystem::path& file) {
  std::ifstream in(file);
  if (!in) throw Error(ErrorKind::InvalidArgument, "cannot open config " + file.string());
  json doc;
  try {
    doc = json::parse(in);
  } catch (const json::parse_error& e) {
    throw Error(ErrorKind::InvalidArgument, "malformed JSON in " + file.string() + ": " + e.what());
  }
  return parse_job(doc);
}

json to_json(const SchemeConfig& c) {
  json in;
  switch (c.input.kind) {
    case InputSpec::Kind::Vacuum: in = {{"kind", "vacuum"}}; break;
    case InputSpec::Kind::Fock: in = {{"kind", "fock"}, {"k0", c.input.photons}}; break;
    case InputSpec::Kind::Coherent:
      in = {{"kind", "coherent"}, {"gamma", {c.input.gamma.real(), c.input.gamma.imag()}}};
      break;
    case InputSpec::Kind::Kitten:
      in = {{"kind", "kitten"},
            {"beta_in", c.input.beta_in},
            {"parity", std::string(to_string(c.input.parity))},
            {"two_term", c.input.kitten_two_term}};
      break;
  }
  json alpha = json::array();
  for (const auto& a : c.aux_alpha) alpha.push_back({a.real(), a.imag()});
  json out = {{"input", in}, {"aux_photons", c.aux_photons}, {"bs_theta", c.bs_theta}, {"aux_alpha", alpha},
              {"alpha0", c.alpha0}};
  if (c.cutoff != 0) out["cutoff"] = c.cutoff;
  return out;
}

json to_json(const ConditionalResult& r) {
  json amps = json::array();
  for (const auto& a : r.state.amplitudes()) amps.push_back({a.real(), a.imag()});
  json out = {{"cutoff", r.state.cutoff()}, {"amplitudes", amps}, {"success_probability", r.success_probability}};
  if (r.fidelity) out["fidelity"] = *r.fidelity;
  return out;
}

json to_json(const OptimizationOutcome& o) {
  return {{"best_config", to_json(o.best_config)},
          {"best_params", o.best_params},
          {"fidelity", o.fidelity},
          {"success_probability", o.success_probability},
          {"restarts_used", o.restarts_used},
          {"objective_evaluations", o.objective_evaluations},
          {"seed", o.seed},
          {"best_start", o.best_start}};
}

std::string config_digest(const json& canonical) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char ch : canonical.dump()) {
    h ^= ch;
    h *= 0x100000001b3ULL;
  }
  static constexpr char kHex[] = "0123456789abcdef";
  std::string out(16, '0');
  for (int i = 15; i >= 0; --i) {
    out[static_cast<std::size_t>(i)] = kHex[h & 0xf];
    h >>= 4;
  }
  return out;
}

json RunManifest::to_json() const {
  return {{"command", command},
          {"config_digest", config_digest},
          {"seed", seed},
          {"tool_version", tool_version},
          {"wall_time_seconds", wall_time_seconds}};
}

void write_manifest(const std::filesystem::path& data_file, const RunManifest& manifest) {
  std::filesystem::path path = data_file;
  path += ".manifest.json";
  std::ofstream out(path);
  if (!out) throw Error(ErrorKind::InvalidArgument, "cannot write " + path.string());
  out << manifest.to_json().dump(2) << '\n';
}

std::string format_number(double value) {
  if (std::isnan(value)) return "nan";
  if (std::isinf(value)) return value > 0 ? "inf" : "-inf";
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof(buf), value, std::chars_format::general, 9);
  return std::string(buf, res.ptr);
}

void CsvTable::add_row(std::vector<std::string> row) {
  if (row.size() != header_.size()) throw Error(ErrorKind::InvalidArgument, "CSV row width mismatch");
  rows_.push_back(std::move(row));
}

std::string CsvTable::str() const {
  auto field = [](const std::string& s) {
    if (s.find_first_of(",\"\n\r") == std::string::npos) return s;
    std::string q = "\"";
    for (char c : s) {
      if (c == '"') q += '"';
      q += c;
    }
    return q + "\"";
  };
  std::ostringstream os;
  auto line = [&](const std::vector<std::string>& r) {
    for (std::size_t i = 0; i < r.size(); ++i) os << (i ? "," : "") << field(r[i]);
    os << '\n';
  };
  line(header_);
  for (const auto& r : rows_) line(r);
  return os.str();
}

void CsvTable::write(const std::filesystem::path& file) const {
  std::ofstream out(file, std::ios::binary);
  if (!out) throw Error(ErrorKind::InvalidArgument, "cannot write " + file.string());
  out << str();
}

}  // namespace catsynth::report
