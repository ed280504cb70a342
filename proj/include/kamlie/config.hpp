#pragma once

#include <cstdint>
#include <map>
#include <stdexcept>
#include <string>
#include <vector>

#include "kamlie/kam_driver.hpp"

namespace kamlie {

class ConfigError : public std::runtime_error {
 public:
  ConfigError(std::string source, int line, const std::string& msg)
      : std::runtime_error(source + (line > 0 ? ":" + std::to_string(line) : std::string()) + ": " + msg),
        line(line) {}
  int line;
};

enum class Purpose { reduce, sieve, stability, verify, bench };

/// Flat `key = value` file; `#` starts a comment. Lists are comma separated.
struct RunConfig {
  std::string group = "SU2";
  int d = 2;
  /// "default" or an explicit comma list of components.
  std::string omega = "default";
  int omega_scan = 200;
  double mass = 1.0;
  std::vector<double> eps = {1e-3};
  std::vector<double> gamma = {1e-2};
  double tau = 5.0;
  double s0 = 2.0;
  double s = 4.0;
  int N0 = 4;
  double growth = 1.5;
  int max_steps = 4;
  int M_max = 24;
  int L_max = 12;
  int H_cap = 12;
  int lambda_points = 200;
  /// "potential" or "cubic".
  std::string forcing = "potential";
  double profile_delta = 0.1;
  double series_tol = 1e-14;
  double skip_rel = 1e-13;
  double accept_rel = 1e-6;
  /// Index on the lambda grid whose transform is kept for stability runs.
  int probe_lambda_index = 100;

  std::vector<double> sieve_gamma = {1e-2, 3e-3, 1e-3};
  int sieve_L_max = 8;
  int sieve_M_max = 80;
  int sieve_lambda_points = 2000;

  /// 0 means 100 / eps.
  double stability_t_end = 0.0;
  int stability_samples = 20000;
  double stability_tol = 1e-10;
  double stability_compare_t = 10.0;
  int stability_compare_samples = 201;

  /// "none" or "sign_flip" (negates A_1 before verification).
  std::string verify_mutation = "none";

  std::string output_dir = "runs";
  std::uint64_t seed = 1;
  int workers = 0;

  /// Line of each key as read, for validation messages.
  std::map<std::string, int> lines;
  std::string source = "<config>";
};

RunConfig parse_config(const std::string& text, const std::string& source = "<config>");
RunConfig load_config(const std::string& path);

/// Throws ConfigError naming the line of the offending key.
void validate(const RunConfig& c, Purpose purpose);

/// Every result-affecting key in a fixed order, one `key = value` per line,
/// floats in hexadecimal notation.
std::string canonical_text(const RunConfig& c);

GroupSpec group_of(const RunConfig& c);
FrequencyDirection frequency_of(const RunConfig& c);
NlsModel model_of(const RunConfig& c, double eps);
Schedule schedule_of(const RunConfig& c, double gamma);

}  // namespace kamlie
