#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <unistd.h>

#include <cmath>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

#include "kamlie/commands.hpp"
#include "kamlie/config.hpp"
#include "kamlie/report.hpp"

using namespace kamlie;
namespace fs = std::filesystem;

namespace {

struct Scratch {
  fs::path root = fs::temp_directory_path() / ("kamlie_cli_" + std::to_string(::getpid()));
  Scratch() {
    fs::remove_all(root);
    fs::create_directories(root);
  }
  ~Scratch() { fs::remove_all(root); }
};

fs::path scratch_root() {
  static const Scratch s;
  return s.root;
}

const char* kSmall =
    "eps = 1e-3\n"
    "M_max = 8\n"
    "lambda_points = 24\n"
    "probe_lambda_index = 11\n"
    "sieve_L_max = 4\n"
    "sieve_M_max = 20\n"
    "sieve_lambda_points = 200\n"
    "stability_samples = 2000\n"
    "stability_compare_t = 2\n";

/// Writes a config whose output goes to its own subdirectory of the scratch root.
std::string write_config(const std::string& name, const std::string& body) {
  const fs::path dir = scratch_root() / name;
  fs::create_directories(dir);
  const fs::path cfg = dir / "run.cfg";
  std::ofstream(cfg) << body << "output_dir = " << (dir / "runs").string() << "\n";
  return cfg.string();
}

struct Outcome {
  int code;
  std::string out, err;
};

Outcome run(const std::string& cmd, const std::string& cfg) {
  std::ostringstream out, err;
  const int code = run_command(cmd, cfg, out, err);
  return {code, out.str(), err.str()};
}

fs::path run_dir_of(const std::string& cfg) { return run_directory(load_config(cfg), false); }

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

double num(const CsvTable& t, std::size_t row, const std::string& col) {
  return std::stod(t.rows.at(row).at(static_cast<std::size_t>(t.column(col))));
}

std::string cell(const CsvTable& t, std::size_t row, const std::string& col) {
  return t.rows.at(row).at(static_cast<std::size_t>(t.column(col)));
}

}  // namespace

TEST_CASE("parse errors carry the line number") {
  auto message = [](const std::string& text) {
    try {
      parse_config(text, "x.cfg");
    } catch (const ConfigError& e) {
      return std::string(e.what());
    }
    return std::string();
  };
  CHECK(message("eps = 1e-3\nnot a pair\n").find("x.cfg:2:") == 0);
  CHECK(message("# c\n\nbogus = 1\n").find("x.cfg:3:") == 0);
  CHECK(message("# c\n\nbogus = 1\n").find("unknown key `bogus`") != std::string::npos);
  CHECK(message("eps = 1\neps = 2\n").find("duplicate key `eps`") != std::string::npos);
  CHECK(message("gamma =\n").find("empty value") != std::string::npos);
  CHECK(message("M_max = many\n").find("x.cfg:1:") == 0);
}

TEST_CASE("validation rejects invariant violations at the offending line") {
  auto message = [](const std::string& text, Purpose p) {
    try {
      validate(parse_config(text, "v.cfg"), p);
    } catch (const ConfigError& e) {
      return std::string(e.what());
    }
    return std::string();
  };
  CHECK(message("d = 2\ntau = 2\n", Purpose::reduce).find("v.cfg:2:") == 0);
  CHECK(message("tau = 3\n", Purpose::reduce).empty());
  CHECK(message("tau = 3\n", Purpose::sieve).find("v.cfg:1:") == 0);
  CHECK(message("tau = 4\n", Purpose::sieve).find("v.cfg:1:") == 0);
  CHECK(message("tau = 5\n", Purpose::sieve).empty());
  CHECK(message("s0 = 1.5\n", Purpose::reduce).find("v.cfg:1:") == 0);
  CHECK(message("s0 = 1.6\ns = 1.6\n", Purpose::reduce).empty());
  CHECK(message("verify_mutation = scramble\n", Purpose::verify).find("v.cfg:1:") == 0);
  CHECK(message("probe_lambda_index = 24\nlambda_points = 24\n", Purpose::reduce).find("v.cfg:1:") == 0);

  const std::string cfg = write_config("tau_eq_d", "tau = 2\n");
  const Outcome o = run("reduce", cfg);
  CHECK(o.code == kExitConfig);
  CHECK(o.err.find(":1:") != std::string::npos);
  CHECK(run("frobnicate", cfg).code == kExitConfig);
}

TEST_CASE("manifest hash is deterministic and sensitive to every value") {
  const RunConfig a = parse_config(kSmall);
  CHECK(manifest_hash(a) == manifest_hash(parse_config(kSmall, "elsewhere.cfg")));
  RunConfig c = a;
  c.eps = {std::nextafter(1e-3, 1.0)};
  CHECK(manifest_hash(c) != manifest_hash(a));
  c = a;
  c.seed = 2;
  CHECK(manifest_hash(c) != manifest_hash(a));
  CHECK(canonical_text(a).find("eps = ") != std::string::npos);
}

TEST_CASE("reduce at eps = 0 accepts everything with zero residuals") {
  const std::string cfg = write_config("eps0", "eps = 0\nM_max = 8\nlambda_points = 12\nprobe_lambda_index = 3\n");
  const Outcome o = run("reduce", cfg);
  REQUIRE(o.code == kExitOk);
  const fs::path dir = run_dir_of(cfg);
  const CsvTable acc = read_csv(dir / "acceptance.csv");
  REQUIRE(acc.rows.size() == 12);
  for (std::size_t i = 0; i < acc.rows.size(); ++i) {
    CHECK(cell(acc, i, "accepted") == "1");
    CHECK(num(acc, i, "final_residual") == 0.0);
  }
  const CsvTable res = read_csv(dir / "residuals.csv");
  for (std::size_t i = 0; i < res.rows.size(); ++i) CHECK(num(res, i, "residual_after") == 0.0);
  const CsvTable sum = read_csv(dir / "summary.csv");
  CHECK(num(sum, 0, "acceptance_rate") == 1.0);
  CHECK(num(sum, 0, "max_abs_r") == 0.0);

  SUBCASE("stability at eps = 0 gives the band (1, 1)") {
    REQUIRE(run("stability", cfg).code == kExitOk);
    const CsvTable band = read_csv(dir / "stability_band.csv");
    REQUIRE(band.rows.size() == 2);
    for (std::size_t i = 0; i < band.rows.size(); ++i) {
      const double tol = cell(band, i, "source") == "conjugated" ? 1e-14 : 1e-8;
      CHECK(num(band, i, "inf") == doctest::Approx(1.0).epsilon(tol));
      CHECK(num(band, i, "sup") == doctest::Approx(1.0).epsilon(tol));
    }
  }
}

TEST_CASE("small reduce writes the expected artifacts, byte-identical across reruns") {
  const std::string cfg1 = write_config("small_a", kSmall);
  const std::string cfg2 = write_config("small_b", kSmall);
  REQUIRE(run("reduce", cfg1).code == kExitOk);
  REQUIRE(run("reduce", cfg2).code == kExitOk);
  const fs::path d1 = run_dir_of(cfg1), d2 = run_dir_of(cfg2);
  // Output directory is not part of the hashed content.
  CHECK(d1.filename() == d2.filename());

  const std::string hash = d1.filename().string();
  for (const char* f : {"acceptance.csv", "residuals.csv", "eigenvalues.csv", "summary.csv"}) {
    INFO(f);
    REQUIRE(fs::exists(d1 / f));
    const CsvTable t = read_csv(d1 / f);
    CHECK(t.columns.front() == "run");
    REQUIRE(!t.rows.empty());
    for (const auto& r : t.rows) CHECK(r.front() == hash);
  }
  CHECK(read_csv(d1 / "acceptance.csv").columns ==
        std::vector<std::string>{"run", "eps", "gamma", "index", "lambda", "accepted", "steps", "failed_step",
                                 "reason", "final_residual", "final_relative", "witness"});
  CHECK(slurp(d1 / "manifest.txt").find(hash) != std::string::npos);
  CHECK(slurp(d1 / "manifest.txt").find(kCodeVersion) != std::string::npos);

  for (const auto& entry : fs::directory_iterator(d1)) {
    const fs::path other = d2 / entry.path().filename();
    INFO(entry.path().filename().string());
    REQUIRE(fs::exists(other));
    CHECK(slurp(entry.path()) == slurp(other));
  }
  CHECK(fs::exists(d1 / "transform_e0_g0_0.op"));

  SUBCASE("stability after reduce writes band and comparison files") {
    REQUIRE(run("stability", cfg1).code == kExitOk);
    const CsvTable band = read_csv(d1 / "stability_band.csv");
    REQUIRE(band.rows.size() == 2);
    CHECK(num(band, 0, "half_width") > 0.0);
    CHECK(num(band, 0, "t_end") == 1e5);
    const CsvTable cmp = read_csv(d1 / "stability_compare.csv");
    REQUIRE(cmp.rows.size() == 1);
    CHECK(cell(cmp, 0, "passed") == "1");
    CHECK(fs::exists(d1 / "stability_trajectory_e0.csv"));
  }
}

TEST_CASE("stability without a reduction points at reduce") {
  const std::string cfg = write_config("no_reduce", std::string(kSmall) + "seed = 7\n");
  const Outcome o = run("stability", cfg);
  CHECK(o.code == kExitMissing);
  CHECK(o.err.find("run `kamlie reduce` with this config first") != std::string::npos);
}

TEST_CASE("sieve emits one sample row for one gamma and a fit row for a sweep") {
  const std::string one = write_config("sieve_one", std::string(kSmall) + "sieve_gamma = 3e-3\n");
  CHECK(run("sieve", one).code == kExitMissing);
  REQUIRE(run("reduce", one).code == kExitOk);
  REQUIRE(run("sieve", one).code == kExitOk);
  const CsvTable t1 = read_csv(run_dir_of(one) / "sieve_fractions.csv");
  REQUIRE(t1.rows.size() == 1);
  CHECK(cell(t1, 0, "kind") == "sample");
  CHECK(cell(t1, 0, "slope").empty());

  const std::string sweep = write_config("sieve_sweep", kSmall);
  REQUIRE(run("reduce", sweep).code == kExitOk);
  REQUIRE(run("sieve", sweep).code == kExitOk);
  const fs::path dir = run_dir_of(sweep);
  const CsvTable t = read_csv(dir / "sieve_fractions.csv");
  REQUIRE(t.rows.size() == 4);
  CHECK(cell(t, 3, "kind") == "fit");
  // Least squares on the emitted sample rows, redone here.
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  for (std::size_t i = 0; i < 3; ++i) {
    const double x = std::log(num(t, i, "gamma")), y = std::log(num(t, i, "fraction"));
    sx += x;
    sy += y;
    sxx += x * x;
    sxy += x * y;
  }
  const double slope = (3 * sxy - sx * sy) / (3 * sxx - sx * sx);
  CHECK(num(t, 3, "slope") == doctest::Approx(slope).epsilon(1e-12));
  CHECK(num(t, 3, "intercept") == doctest::Approx((sy - slope * sx) / 3).epsilon(1e-12));
  for (const char* f : {"sieve_prune_stats.csv", "sieve_witnesses.csv", "sieve_tail.csv"}) CHECK(fs::exists(dir / f));

  const std::string bad = write_config("sieve_tau", std::string(kSmall) + "tau = 3\n");
  CHECK(run("sieve", bad).code == kExitConfig);
  CHECK(run("reduce", bad).code == kExitOk);
}

TEST_CASE("verify passes on a clean run and locates an injected sign flip") {
  const std::string clean = write_config("verify_clean", kSmall);
  const Outcome a = run("verify", clean);
  INFO(a.out);
  CHECK(a.code == kExitOk);
  const CsvTable v = read_csv(run_dir_of(clean) / "verify.csv");
  REQUIRE(!v.rows.empty());
  for (std::size_t i = 0; i < v.rows.size(); ++i) CHECK(cell(v, i, "passed") == "1");

  const std::string bad = write_config("verify_flip", std::string(kSmall) + "verify_mutation = sign_flip\n");
  const Outcome b = run("verify", bad);
  INFO(b.out);
  CHECK(b.code == kExitCheckFailed);
  const CsvTable w = read_csv(run_dir_of(bad) / "verify.csv");
  bool located = false;
  for (std::size_t i = 0; i < w.rows.size(); ++i)
    if (cell(w, i, "passed") == "0" && !cell(w, i, "where").empty()) located = true;
  CHECK(located);
}
