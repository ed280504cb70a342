#include "kamlie/config.hpp"

#include <cstdio>
#include <fstream>
#include <functional>
#include <sstream>

namespace kamlie {

namespace {

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

double to_double(const std::string& v) {
  std::size_t pos = 0;
  const double x = std::stod(v, &pos);
  if (pos != v.size()) throw std::invalid_argument("trailing characters");
  return x;
}

long long to_int(const std::string& v) {
  std::size_t pos = 0;
  const long long x = std::stoll(v, &pos);
  if (pos != v.size()) throw std::invalid_argument("trailing characters");
  return x;
}

std::vector<double> to_list(const std::string& v) {
  std::vector<double> out;
  std::stringstream ss(v);
  std::string item;
  while (std::getline(ss, item, ',')) out.push_back(to_double(trim(item)));
  if (out.empty()) throw std::invalid_argument("empty list");
  return out;
}

std::string hex(double x) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%a", x);
  return buf;
}

std::string hex_list(const std::vector<double>& v) {
  std::string out;
  for (std::size_t i = 0; i < v.size(); ++i) out += (i ? "," : "") + hex(v[i]);
  return out;
}

using Setter = std::function<void(RunConfig&, const std::string&)>;

const std::map<std::string, Setter>& setters() {
  static const std::map<std::string, Setter> table = {
      {"group", [](RunConfig& c, const std::string& v) { c.group = v; }},
      {"d", [](RunConfig& c, const std::string& v) { c.d = static_cast<int>(to_int(v)); }},
      {"omega", [](RunConfig& c, const std::string& v) { c.omega = v; }},
      {"omega_scan", [](RunConfig& c, const std::string& v) { c.omega_scan = static_cast<int>(to_int(v)); }},
      {"mass", [](RunConfig& c, const std::string& v) { c.mass = to_double(v); }},
      {"eps", [](RunConfig& c, const std::string& v) { c.eps = to_list(v); }},
      {"gamma", [](RunConfig& c, const std::string& v) { c.gamma = to_list(v); }},
      {"tau", [](RunConfig& c, const std::string& v) { c.tau = to_double(v); }},
      {"s0", [](RunConfig& c, const std::string& v) { c.s0 = to_double(v); }},
      {"s", [](RunConfig& c, const std::string& v) { c.s = to_double(v); }},
      {"N0", [](RunConfig& c, const std::string& v) { c.N0 = static_cast<int>(to_int(v)); }},
      {"growth", [](RunConfig& c, const std::string& v) { c.growth = to_double(v); }},
      {"max_steps", [](RunConfig& c, const std::string& v) { c.max_steps = static_cast<int>(to_int(v)); }},
      {"M_max", [](RunConfig& c, const std::string& v) { c.M_max = static_cast<int>(to_int(v)); }},
      {"L_max", [](RunConfig& c, const std::string& v) { c.L_max = static_cast<int>(to_int(v)); }},
      {"H_cap", [](RunConfig& c, const std::string& v) { c.H_cap = static_cast<int>(to_int(v)); }},
      {"lambda_points", [](RunConfig& c, const std::string& v) { c.lambda_points = static_cast<int>(to_int(v)); }},
      {"forcing", [](RunConfig& c, const std::string& v) { c.forcing = v; }},
      {"profile_delta", [](RunConfig& c, const std::string& v) { c.profile_delta = to_double(v); }},
      {"series_tol", [](RunConfig& c, const std::string& v) { c.series_tol = to_double(v); }},
      {"skip_rel", [](RunConfig& c, const std::string& v) { c.skip_rel = to_double(v); }},
      {"accept_rel", [](RunConfig& c, const std::string& v) { c.accept_rel = to_double(v); }},
      {"probe_lambda_index", [](RunConfig& c, const std::string& v) { c.probe_lambda_index = static_cast<int>(to_int(v)); }},
      {"sieve_gamma", [](RunConfig& c, const std::string& v) { c.sieve_gamma = to_list(v); }},
      {"sieve_L_max", [](RunConfig& c, const std::string& v) { c.sieve_L_max = static_cast<int>(to_int(v)); }},
      {"sieve_M_max", [](RunConfig& c, const std::string& v) { c.sieve_M_max = static_cast<int>(to_int(v)); }},
      {"sieve_lambda_points", [](RunConfig& c, const std::string& v) { c.sieve_lambda_points = static_cast<int>(to_int(v)); }},
      {"stability_t_end", [](RunConfig& c, const std::string& v) { c.stability_t_end = to_double(v); }},
      {"stability_samples", [](RunConfig& c, const std::string& v) { c.stability_samples = static_cast<int>(to_int(v)); }},
      {"stability_tol", [](RunConfig& c, const std::string& v) { c.stability_tol = to_double(v); }},
      {"stability_compare_t", [](RunConfig& c, const std::string& v) { c.stability_compare_t = to_double(v); }},
      {"stability_compare_samples", [](RunConfig& c, const std::string& v) { c.stability_compare_samples = static_cast<int>(to_int(v)); }},
      {"verify_mutation", [](RunConfig& c, const std::string& v) { c.verify_mutation = v; }},
      {"output_dir", [](RunConfig& c, const std::string& v) { c.output_dir = v; }},
      {"seed", [](RunConfig& c, const std::string& v) { c.seed = static_cast<std::uint64_t>(to_int(v)); }},
      {"workers", [](RunConfig& c, const std::string& v) { c.workers = static_cast<int>(to_int(v)); }},
  };
  return table;
}

}  // namespace

RunConfig parse_config(const std::string& text, const std::string& source) {
  RunConfig c;
  c.source = source;
  std::istringstream in(text);
  std::string raw;
  int line = 0;
  while (std::getline(in, raw)) {
    ++line;
    const std::string body = trim(raw.substr(0, raw.find('#')));
    if (body.empty()) continue;
    const auto eq = body.find('=');
    if (eq == std::string::npos) throw ConfigError(source, line, "expected `key = value`");
    const std::string key = trim(body.substr(0, eq));
    const std::string value = trim(body.substr(eq + 1));
    const auto it = setters().find(key);
    if (it == setters().end()) throw ConfigError(source, line, "unknown key `" + key + "`");
    if (c.lines.count(key)) throw ConfigError(source, line, "duplicate key `" + key + "`");
    if (value.empty()) throw ConfigError(source, line, "empty value for `" + key + "`");
    try {
      it->second(c, value);
    } catch (const std::exception&) {
      throw ConfigError(source, line, "cannot parse value `" + value + "` for `" + key + "`");
    }
    c.lines[key] = line;
  }
  return c;
}

RunConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError(path, 0, "cannot open config file");
  std::stringstream ss;
  ss << in.rdbuf();
  return parse_config(ss.str(), path);
}

void validate(const RunConfig& c, Purpose purpose) {
  auto fail = [&](const std::string& key, const std::string& msg) {
    const auto it = c.lines.find(key);
    throw ConfigError(c.source, it == c.lines.end() ? 0 : it->second,
                      msg + (it == c.lines.end() ? " (default value of `" + key + "`)" : ""));
  };
  if (c.group != "SU2" && c.group != "SO3") fail("group", "group must be SU2 or SO3");
  if (c.d < 1) fail("d", "d must be positive");
  if (c.omega != "default") {
    std::vector<double> w;
    try {
      w = to_list(c.omega);
    } catch (const std::exception&) {
      fail("omega", "omega must be `default` or a comma list");
    }
    if (static_cast<int>(w.size()) != c.d) fail("omega", "omega needs d components");
  }
  if (c.tau <= c.d) fail("tau", "tau must exceed d");
  if (purpose == Purpose::sieve && c.tau <= c.d + 2) fail("tau", "sieve runs need tau > d + 2");
  if (c.s0 <= (c.d + 1) / 2.0) fail("s0", "s0 must exceed (d + 1) / 2");
  if (c.s < c.s0) fail("s", "s must be at least s0");
  for (double e : c.eps)
    if (e < 0.0) fail("eps", "eps must be nonnegative");
  for (double g : c.gamma)
    if (g <= 0.0) fail("gamma", "gamma must be positive");
  if (c.N0 < 2) fail("N0", "N0 must be at least 2");
  if (c.growth <= 1.0) fail("growth", "growth must exceed 1");
  if (c.max_steps < 1) fail("max_steps", "max_steps must be positive");
  if (c.M_max < 1) fail("M_max", "M_max must be positive");
  if (c.L_max < 1) fail("L_max", "L_max must be positive");
  if (c.H_cap < 1) fail("H_cap", "H_cap must be positive");
  if (c.lambda_points < 1) fail("lambda_points", "lambda_points must be positive");
  if (c.probe_lambda_index < 0 || c.probe_lambda_index >= c.lambda_points)
    fail("probe_lambda_index", "probe_lambda_index outside the lambda grid");
  if (c.forcing != "potential" && c.forcing != "cubic") fail("forcing", "forcing must be potential or cubic");
  if (c.mass <= 0.0) fail("mass", "mass must be positive");
  if (c.series_tol <= 0.0) fail("series_tol", "series_tol must be positive");
  if (c.skip_rel < 0.0) fail("skip_rel", "skip_rel must be nonnegative");
  if (c.accept_rel <= 0.0) fail("accept_rel", "accept_rel must be positive");
  for (double g : c.sieve_gamma)
    if (g < 0.0) fail("sieve_gamma", "sieve_gamma must be nonnegative");
  if (c.sieve_L_max < 1 || c.sieve_M_max < 1 || c.sieve_lambda_points < 1)
    fail("sieve_L_max", "sieve sizes must be positive");
  if (c.stability_tol <= 0.0) fail("stability_tol", "stability_tol must be positive");
  if (c.stability_samples < 2) fail("stability_samples", "stability_samples must be at least 2");
  if (c.stability_compare_samples < 2) fail("stability_compare_samples", "stability_compare_samples must be at least 2");
  if (c.verify_mutation != "none" && c.verify_mutation != "sign_flip")
    fail("verify_mutation", "verify_mutation must be none or sign_flip");
  if (c.workers < 0) fail("workers", "workers must be nonnegative");
}

std::string canonical_text(const RunConfig& c) {
  std::ostringstream os;
  os << "group = " << c.group << "\n"
     << "d = " << c.d << "\n"
     << "omega = " << c.omega << "\n"
     << "omega_scan = " << c.omega_scan << "\n"
     << "mass = " << hex(c.mass) << "\n"
     << "eps = " << hex_list(c.eps) << "\n"
     << "gamma = " << hex_list(c.gamma) << "\n"
     << "tau = " << hex(c.tau) << "\n"
     << "s0 = " << hex(c.s0) << "\n"
     << "s = " << hex(c.s) << "\n"
     << "N0 = " << c.N0 << "\n"
     << "growth = " << hex(c.growth) << "\n"
     << "max_steps = " << c.max_steps << "\n"
     << "M_max = " << c.M_max << "\n"
     << "L_max = " << c.L_max << "\n"
     << "H_cap = " << c.H_cap << "\n"
     << "lambda_points = " << c.lambda_points << "\n"
     << "forcing = " << c.forcing << "\n"
     << "profile_delta = " << hex(c.profile_delta) << "\n"
     << "series_tol = " << hex(c.series_tol) << "\n"
     << "skip_rel = " << hex(c.skip_rel) << "\n"
     << "accept_rel = " << hex(c.accept_rel) << "\n"
     << "probe_lambda_index = " << c.probe_lambda_index << "\n"
     << "sieve_gamma = " << hex_list(c.sieve_gamma) << "\n"
     << "sieve_L_max = " << c.sieve_L_max << "\n"
     << "sieve_M_max = " << c.sieve_M_max << "\n"
     << "sieve_lambda_points = " << c.sieve_lambda_points << "\n"
     << "stability_t_end = " << hex(c.stability_t_end) << "\n"
     << "stability_samples = " << c.stability_samples << "\n"
     << "stability_tol = " << hex(c.stability_tol) << "\n"
     << "stability_compare_t = " << hex(c.stability_compare_t) << "\n"
     << "stability_compare_samples = " << c.stability_compare_samples << "\n"
     << "verify_mutation = " << c.verify_mutation << "\n"
     << "seed = " << c.seed << "\n";
  return os.str();
}

GroupSpec group_of(const RunConfig& c) { return c.group == "SO3" ? GroupSpec::so3() : GroupSpec::su2(); }

FrequencyDirection frequency_of(const RunConfig& c) {
  if (c.omega == "default") return default_frequency(c.d, c.omega_scan);
  FrequencyDirection f;
  f.omega_tilde = to_list(c.omega);
  const DiophantineResult r = diophantine_check(f, c.omega_scan);
  f.gamma0 = r.min_scaled / 4.0;
  f.certified_up_to = r.certified_up_to;
  return f;
}

NlsModel model_of(const RunConfig& c, double eps) {
  NlsModel m;
  m.group = group_of(c);
  m.d = c.d;
  m.freq = frequency_of(c);
  m.mass = c.mass;
  m.eps = eps;
  m.forcing = c.forcing == "cubic" ? default_profile(c.d, c.profile_delta, m.group) : default_potential(c.d, m.group);
  m.L_max = c.L_max;
  m.M_max = c.M_max;
  m.H_cap = c.H_cap;
  return m;
}

Schedule schedule_of(const RunConfig& c, double gamma) {
  Schedule s;
  s.N0 = c.N0;
  s.growth = c.growth;
  s.max_steps = c.max_steps;
  s.tau = c.tau;
  s.gamma = gamma;
  s.s0 = c.s0;
  s.s = c.s;
  s.series_tol = c.series_tol;
  s.skip_rel = c.skip_rel;
  s.accept_rel = c.accept_rel;
  return s;
}

}  // namespace kamlie
