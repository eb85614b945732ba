// dtlab: desk-scale statistics of divisor counts of modular form
// coefficients, with the lcm/totient sums that control their moments.
//
// Subcommands: coeffs, moments, lcm-sums, density, decompose, sato-tate,
// diagnostics.  Progress goes to stderr; data goes to the --out CSV and its
// JSON mirror, and reruns with equal flags produce byte-identical files.
// Exit codes: 0 success, 2 configuration, 3 budget, 4 I/O.
#include <cstdlib>
#include <filesystem>
#include <iostream>
#include <set>
#include <sstream>

#include <CLI11.hpp>

#include "dtlab/angles.hpp"
#include "dtlab/divisor_stats.hpp"
#include "dtlab/errors.hpp"
#include "dtlab/lcm_sums.hpp"
#include "dtlab/newform.hpp"
#include "dtlab/options.hpp"
#include "dtlab/report_io.hpp"

namespace fs = std::filesystem;
using namespace dtlab;

namespace {

struct CacheConfig {
  std::string dir;
  bool auto_build = true;
  uint32_t series_budget = kDefaultSeriesBudget;
};

std::string resolve_cache_dir(const std::string& flag_value) {
  if (!flag_value.empty()) return flag_value;
  if (const char* env = std::getenv("DTLAB_CACHE_DIR"); env && *env)
    return env;
  return "dtlab-cache";
}

fs::path cache_path(const CacheConfig& cfg, const NewformSpec& spec,
                    uint32_t n_max) {
  return fs::path(cfg.dir) / coeff_cache_filename(spec, n_max);
}

// Reuse a cache file when its header matches; otherwise expand and store.
CoeffTable obtain_table(const CacheConfig& cfg, uint32_t weight,
                        uint32_t n_max) {
  NewformSpec spec = make_newform_spec(weight);
  fs::path path = cache_path(cfg, spec, n_max);
  if (cache_header_matches(path.string(), spec, n_max)) {
    std::cerr << "coefficients: cache hit " << path.string() << "\n";
    return read_coeff_cache(path.string());
  }
  if (!cfg.auto_build)
    throw ConfigError("coefficient cache missing and auto-build disabled: " +
                      path.string());
  std::cerr << "coefficients: expanding weight " << weight << " to n="
            << n_max << "\n";
  CoeffTable table = expand_coefficients(spec, n_max, cfg.series_budget);
  std::error_code ec;
  fs::create_directories(cfg.dir, ec);
  if (ec) throw IoError("cannot create cache directory: " + cfg.dir);
  write_coeff_cache(path.string(), table);
  std::cerr << "coefficients: wrote " << path.string() << "\n";
  return table;
}

uint32_t grid_n_max(const std::vector<double>& grid) {
  double top = std::ceil(grid.back());
  if (top < 2) throw ConfigError("grid top must be at least 2");
  if (top > double(kMaxSeriesBudget))
    throw BudgetError("grid top exceeds the series hard ceiling");
  return uint32_t(top);
}

std::set<uint64_t> parse_prime_set(const std::string& csv) {
  std::set<uint64_t> out;
  std::stringstream ss(csv);
  std::string item;
  while (std::getline(ss, item, ',')) {
    if (item.empty()) continue;
    try {
      out.insert(std::stoull(item));
    } catch (const std::exception&) {
      throw ConfigError("malformed prime list entry: " + item);
    }
  }
  return out;
}

void announce_outputs(const std::string& csv_path, const std::string& json_path) {
  std::cout << csv_path << "\n" << json_path << "\n";
}

// Flags shared by every table-consuming subcommand.
struct CommonFlags {
  std::string cache_dir_flag;
  bool no_auto_build = false;
  uint32_t series_budget = kDefaultSeriesBudget;
  uint32_t sieve_limit = FactorSieve::kDefaultLimit;

  void attach(CLI::App* cmd, bool with_sieve = true) {
    cmd->add_option("--cache-dir", cache_dir_flag,
                    "coefficient cache directory (default: $DTLAB_CACHE_DIR "
                    "or ./dtlab-cache)");
    cmd->add_flag("--no-auto-build", no_auto_build,
                  "fail instead of expanding coefficients on cache miss");
    cmd->add_option("--series-budget", series_budget,
                    "largest coefficient index the expander may compute");
    if (with_sieve)
      cmd->add_option("--sieve-limit", sieve_limit,
                      "trial-division sieve bound");
  }

  CacheConfig cache() const {
    return {resolve_cache_dir(cache_dir_flag), !no_auto_build, series_budget};
  }
};

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{
      "divisor statistics of integral modular form coefficients"};
  app.require_subcommand(1);

  // ---- coeffs ----
  auto* c_coeffs = app.add_subcommand(
      "coeffs", "expand and cache a coefficient table");
  uint32_t co_weight = 12, co_nmax = kDefaultSeriesBudget;
  CommonFlags co_common;
  c_coeffs->add_option("--weight", co_weight, "newform weight")->required();
  c_coeffs->add_option("--nmax", co_nmax, "table length")->required();
  co_common.attach(c_coeffs, /*with_sieve=*/false);

  // ---- moments ----
  auto* c_moments = app.add_subcommand(
      "moments", "divisor-count moments over primes with angle in a window");
  uint32_t mo_weight = 12, mo_r = 1;
  std::string mo_lo = "0", mo_hi = "pi", mo_grid, mo_out = "moments.csv";
  CommonFlags mo_common;
  c_moments->add_option("--weight", mo_weight)->required();
  c_moments->add_option("--r", mo_r, "moment order");
  c_moments->add_option("--lo", mo_lo, "window lower angle");
  c_moments->add_option("--hi", mo_hi, "window upper angle");
  c_moments->add_option("--grid", mo_grid, "x grid start:factor:count")
      ->required();
  c_moments->add_option("--out", mo_out, "output CSV path");
  mo_common.attach(c_moments);

  // ---- lcm-sums ----
  auto* c_lcm = app.add_subcommand(
      "lcm-sums", "tuple sums of lcm/totient summands on a geometric grid");
  std::string lc_kind = "inv_lcm", lc_grid, lc_out = "lcm-sums.csv";
  uint32_t lc_r = 2;
  unsigned lc_threads = 1;
  c_lcm->add_option("--kind", lc_kind,
                    "inv_phi_lcm | lcm_over_phi_sq | inv_lcm");
  c_lcm->add_option("--r", lc_r, "tuple rank");
  c_lcm->add_option("--grid", lc_grid, "x grid start:factor:count")->required();
  c_lcm->add_option("--out", lc_out, "output CSV path");
  c_lcm->add_option("--threads", lc_threads, "worker threads");

  // ---- density ----
  auto* c_density = app.add_subcommand(
      "density", "divisibility density against the multiplicative model");
  uint32_t de_weight = 12;
  uint64_t de_delta = 2;
  std::string de_lo = "0", de_hi = "pi", de_grid, de_out = "density.csv";
  std::string de_exceptional;
  double de_x = 0;
  CommonFlags de_common;
  c_density->add_option("--weight", de_weight)->required();
  c_density->add_option("--delta", de_delta, "modulus")->required();
  c_density->add_option("--lo", de_lo);
  c_density->add_option("--hi", de_hi);
  auto* de_x_opt = c_density->add_option("--x", de_x, "single evaluation point");
  auto* de_grid_opt =
      c_density->add_option("--grid", de_grid, "x grid start:factor:count");
  de_x_opt->excludes(de_grid_opt);
  c_density->add_option("--out", de_out, "output CSV path");
  c_density->add_option("--exceptional", de_exceptional,
                        "comma-separated exceptional primes (default: "
                        "built-in list for the weight)");
  de_common.attach(c_density);

  // ---- decompose ----
  auto* c_dec = app.add_subcommand(
      "decompose", "partition the divisor-count sum by factor shape");
  uint32_t dc_weight = 12, dc_r = 1;
  double dc_x = 0, dc_c = 0.5, dc_beta = 0;
  std::string dc_out = "decompose.csv";
  CommonFlags dc_common;
  c_dec->add_option("--weight", dc_weight)->required();
  c_dec->add_option("--x", dc_x, "prime bound")->required();
  c_dec->add_option("--c", dc_c, "head exponent in (0,1)");
  c_dec->add_option("--r", dc_r, "moment order");
  c_dec->add_option("--beta", dc_beta,
                    "tail split parameter (default (weight-1)/2 + 0.01)");
  c_dec->add_option("--out", dc_out, "output CSV path");
  dc_common.attach(c_dec);

  // ---- sato-tate ----
  auto* c_census = app.add_subcommand(
      "sato-tate", "angle equidistribution census against the semicircle law");
  uint32_t st_weight = 12;
  std::string st_lo = "0", st_hi = "pi", st_grid, st_out = "sato-tate.csv";
  CommonFlags st_common;
  c_census->add_option("--weight", st_weight)->required();
  c_census->add_option("--lo", st_lo);
  c_census->add_option("--hi", st_hi);
  c_census->add_option("--grid", st_grid, "x grid start:factor:count")
      ->required();
  c_census->add_option("--out", st_out, "output CSV path");
  st_common.attach(c_census, /*with_sieve=*/false);

  // ---- diagnostics ----
  auto* c_diag = app.add_subcommand(
      "diagnostics", "per-modulus divisibility ratios for the window conditions");
  uint32_t dg_weight = 12;
  uint64_t dg_delta_max = 12;
  double dg_x = 0;
  std::string dg_lo = "0", dg_hi = "pi", dg_out = "diagnostics.csv";
  CommonFlags dg_common;
  c_diag->add_option("--weight", dg_weight)->required();
  c_diag->add_option("--x", dg_x, "prime bound")->required();
  c_diag->add_option("--delta-max", dg_delta_max, "largest modulus");
  c_diag->add_option("--lo", dg_lo);
  c_diag->add_option("--hi", dg_hi);
  c_diag->add_option("--out", dg_out, "output CSV path");
  dg_common.attach(c_diag);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  try {
    if (app.got_subcommand(c_coeffs)) {
      CacheConfig cfg = co_common.cache();
      if (co_nmax > cfg.series_budget)
        throw BudgetError("requested nmax exceeds the series budget");
      CoeffTable table = obtain_table(cfg, co_weight, co_nmax);
      std::cout << cache_path(cfg, table.spec, table.n_max).string() << "\n";

    } else if (app.got_subcommand(c_moments)) {
      auto grid = parse_grid(mo_grid);
      Interval window(parse_angle(mo_lo), parse_angle(mo_hi));
      CoeffTable table = obtain_table(mo_common.cache(), mo_weight,
                                      grid_n_max(grid));
      FactorSieve sieve = build_factor_sieve(mo_common.sieve_limit);
      AngleTable angles = angle_table(table, sieve, grid.back());
      BigFactorizer factorizer(sieve);
      std::cerr << "moments: factoring " << angles.records.size()
                << " coefficients\n";
      MomentReport report =
          divisor_moment(angles, factorizer, window, mo_r, grid);
      if (report.failure_count)
        std::cerr << "moments: " << report.failure_count
                  << " coefficients resisted factoring and were dropped\n";
      announce_outputs(mo_out, write_report_pair(mo_out, report));

    } else if (app.got_subcommand(c_lcm)) {
      auto grid = parse_grid(lc_grid);
      uint32_t limit = std::max<uint32_t>(2, uint32_t(std::ceil(grid.back())));
      FactorSieve sieve = build_factor_sieve(limit);
      LcmSumReport report =
          lcm_sum_report(parse_lcm_kind(lc_kind), lc_r, grid, sieve, lc_threads);
      announce_outputs(lc_out, write_report_pair(lc_out, report));

    } else if (app.got_subcommand(c_density)) {
      std::vector<double> grid;
      if (de_grid_opt->count())
        grid = parse_grid(de_grid);
      else if (de_x_opt->count())
        grid = {de_x};
      else
        throw ConfigError("density: provide --x or --grid");
      Interval window(parse_angle(de_lo), parse_angle(de_hi));
      CoeffTable table = obtain_table(de_common.cache(), de_weight,
                                      grid_n_max(grid));
      FactorSieve sieve = build_factor_sieve(de_common.sieve_limit);
      AngleTable angles = angle_table(table, sieve, grid.back());
      std::set<uint64_t> exceptional =
          de_exceptional.empty() ? default_exceptional_primes(de_weight)
                                 : parse_prime_set(de_exceptional);
      DensityReport report =
          density_report(angles, de_delta, window, grid, exceptional, sieve);
      announce_outputs(de_out, write_report_pair(de_out, report));

    } else if (app.got_subcommand(c_dec)) {
      if (dc_beta == 0) dc_beta = (dc_weight - 1) / 2.0 + 0.01;
      std::vector<double> grid{dc_x};
      CoeffTable table = obtain_table(dc_common.cache(), dc_weight,
                                      grid_n_max(grid));
      FactorSieve sieve = build_factor_sieve(dc_common.sieve_limit);
      AngleTable angles = angle_table(table, sieve, dc_x);
      BigFactorizer factorizer(sieve);
      std::cerr << "decompose: factoring " << angles.records.size()
                << " coefficients\n";
      DecompositionReport report =
          decompose_divisor_sum(angles, factorizer, dc_x, dc_r, dc_c, dc_beta);
      announce_outputs(dc_out, write_report_pair(dc_out, report));

    } else if (app.got_subcommand(c_census)) {
      auto grid = parse_grid(st_grid);
      Interval window(parse_angle(st_lo), parse_angle(st_hi));
      CoeffTable table = obtain_table(st_common.cache(), st_weight,
                                      grid_n_max(grid));
      FactorSieve sieve = build_factor_sieve(FactorSieve::kDefaultLimit);
      AngleTable angles = angle_table(table, sieve, grid.back());
      CensusReport report = sato_tate_census(angles, window, grid);
      announce_outputs(st_out, write_report_pair(st_out, report));

    } else if (app.got_subcommand(c_diag)) {
      std::vector<double> grid{dg_x};
      Interval window(parse_angle(dg_lo), parse_angle(dg_hi));
      CoeffTable table = obtain_table(dg_common.cache(), dg_weight,
                                      grid_n_max(grid));
      FactorSieve sieve = build_factor_sieve(dg_common.sieve_limit);
      AngleTable angles = angle_table(table, sieve, dg_x);
      ConditionReport report =
          condition_diagnostics(angles, window, dg_x, dg_delta_max, sieve);
      if (!report.rows.empty() && !report.rows.back().within_window)
        std::cerr << "diagnostics: delta range extends beyond the x^(1/25) "
                     "window; ratios outside it are exploratory\n";
      announce_outputs(dg_out, write_report_pair(dg_out, report));
    }
  } catch (const BudgetError& e) {
    std::cerr << "budget error: " << e.what() << "\n";
    return 3;
  } catch (const IoError& e) {
    std::cerr << "i/o error: " << e.what() << "\n";
    return 4;
  } catch (const ConfigError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return 2;
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
  return 0;
}
