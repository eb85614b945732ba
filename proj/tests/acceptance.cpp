// Acceptance gate: one line per criterion, [PASS] or [FAIL], exit 0 iff all
// pass.  argv[1] is the path to the CLI binary, consumed by the determinism
// criterion; the numeric criteria run in-process against the library.
#include <chrono>
#include <cmath>
#include <cstdarg>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <map>
#include <numbers>
#include <numeric>
#include <sstream>
#include <string>
#include <sys/wait.h>
#include <vector>

#include "dtlab/angles.hpp"
#include "dtlab/divisor_stats.hpp"
#include "dtlab/errors.hpp"
#include "dtlab/lcm_sums.hpp"
#include "dtlab/newform.hpp"
#include "oracles.hpp"

using namespace dtlab;
using std::numbers::pi;
namespace fs = std::filesystem;

namespace {

constexpr double kEulerGamma = 0.5772156649015329;

std::string tool_path;  // set from argv[1]

// ---- shared fixtures, built once on first use ----

const FactorSieve& sieve() {
  static FactorSieve s(2'000'000);
  return s;
}

const CoeffTable& table_w12() {
  static CoeffTable t = expand_coefficients(make_newform_spec(12), 100'000);
  return t;
}

const AngleTable& angles() {
  static AngleTable at = angle_table(table_w12(), sieve(), 100'000);
  return at;
}

const BigFactorizer& factorizer() {
  static BigFactorizer f(sieve());
  return f;
}

const DivisorTable& divisors() {
  static DivisorTable dt = build_divisor_table(angles(), factorizer());
  return dt;
}

// Cumulative d(n) and d(n)^2 sums with checkpoints at 1e4, 1e5, 1e6.
struct DivisorSums {
  uint64_t d_total = 0;                   // sum of d(n), n <= 1e6
  std::vector<double> sq_ratio;           // (S2(x)/x)/(log x)^3 at checkpoints
};

const DivisorSums& divisor_sums() {
  static DivisorSums out = [] {
    DivisorSums s;
    uint64_t sq = 0;
    const uint64_t checkpoints[] = {10'000, 100'000, 1'000'000};
    size_t next = 0;
    for (uint64_t n = 1; n <= 1'000'000; ++n) {
      uint64_t d = sieve().divisor_count_of(n);
      s.d_total += d;
      sq += d * d;
      if (next < 3 && n == checkpoints[next]) {
        double x = double(n);
        s.sq_ratio.push_back(double(sq) / x / std::pow(std::log(x), 3.0));
        ++next;
      }
    }
    return s;
  }();
  return out;
}

struct Outcome {
  bool ok;
  std::string detail;
};

std::string fmt(const char* format, ...) {
  char buf[512];
  va_list ap;
  va_start(ap, format);
  std::vsnprintf(buf, sizeof buf, format, ap);
  va_end(ap);
  return buf;
}

// ---- criterion 1: divisor mean baseline ----

Outcome mean_baseline() {
  double x = 1e6;
  double mean = double(divisor_sums().d_total) / x;
  double target = std::log(x) + 2 * kEulerGamma - 1;
  double dev = std::abs(mean - target);
  return {dev <= 0.01, fmt("x=1e6 |mean - (log x + 2g - 1)| = %.6f <= 0.01", dev)};
}

// ---- criterion 2: squared-divisor growth shape ----

Outcome squared_divisor_shape() {
  const auto& r = divisor_sums().sq_ratio;
  double c1 = std::abs(r[1] - r[0]) / r[0];
  double c2 = std::abs(r[2] - r[1]) / r[1];
  bool ok = c2 < c1 && c2 <= 0.15;
  return {ok, fmt("ratios %.6f %.6f %.6f, changes %.5f > %.5f, final <= 0.15",
                  r[0], r[1], r[2], c1, c2)};
}

// ---- criterion 3: coefficient table invariants ----

Outcome coefficient_invariants() {
  const auto& t = table_w12();
  if (t.a[1] != 1) return {false, "a[1] != 1"};

  uint64_t mult_checked = 0;
  for (uint64_t m = 2; m * m <= 10'000; ++m)
    for (uint64_t n = m + 1; m * n <= 10'000; ++n) {
      if (std::gcd(m, n) != 1) continue;
      if (t.a[m * n] != t.a[m] * t.a[n])
        return {false, fmt("multiplicativity fails at %llu * %llu",
                           (unsigned long long)m, (unsigned long long)n)};
      ++mult_checked;
    }

  uint64_t hecke_checked = 0;
  mpz_class pk;
  for (uint32_t p : sieve().primes_up_to(100.0)) {
    mpz_ui_pow_ui(pk.get_mpz_t(), p, 11);
    uint64_t prev = 1, cur = p;
    while (cur * p <= 10'000) {
      uint64_t nxt = cur * p;
      if (t.a[nxt] != t.a[cur] * t.a[p] - pk * t.a[prev])
        return {false, fmt("Hecke recursion fails at %llu",
                           (unsigned long long)nxt)};
      prev = cur;
      cur = nxt;
      ++hecke_checked;
    }
  }

  mpz_class bound;
  for (uint32_t p : sieve().primes_up_to(10'000.0)) {
    mpz_ui_pow_ui(bound.get_mpz_t(), p, 11);
    bound *= 4;
    if (t.a[p] * t.a[p] > bound)
      return {false, fmt("coefficient bound fails at p=%u", p)};
  }

  CoeffTable ea = expand_coefficients(make_newform_spec(16), 5000,
                                      kDefaultSeriesBudget,
                                      ExpansionRoute::eta_power);
  CoeffTable eb = expand_coefficients(make_newform_spec(16), 5000,
                                      kDefaultSeriesBudget,
                                      ExpansionRoute::eisenstein_delta);
  for (uint32_t n = 1; n <= 5000; ++n)
    if (ea.a[n] != eb.a[n])
      return {false, fmt("route disagreement at n=%u (weight 16)", n)};

  return {true, fmt("%llu coprime pairs, %llu prime-power steps, bound to 1e4, "
                    "routes agree to 5000",
                    (unsigned long long)mult_checked,
                    (unsigned long long)hecke_checked)};
}

// ---- criterion 4: angle equidistribution census ----

Outcome angle_census() {
  std::vector<double> grid{100'000};
  CensusReport mid = sato_tate_census(angles(), Interval(pi / 4, 3 * pi / 4), grid);
  CensusReport half = sato_tate_census(angles(), Interval(0, pi / 2), grid);
  double dev_mid = std::abs(mid.rows[0].frequency - 0.818310);
  double dev_half = std::abs(half.rows[0].frequency - 0.5);
  bool ok = dev_mid <= 0.03 && dev_half <= 0.03;
  return {ok, fmt("x=1e5 |freq - 0.818310| = %.6f, |freq - 0.5| = %.6f, both <= 0.03",
                  dev_mid, dev_half)};
}

// ---- criterion 5: tuple-sum oracle equivalence ----

// One enumeration pass per (x, r) accumulating all three summand kinds.
struct TripleSum {
  mpq_class inv_phi, over_phi_sq, inv;
};

TripleSum enumerate_all_kinds(uint64_t n, uint32_t r) {
  TripleSum out;
  std::map<uint64_t, uint64_t> phi_memo;
  auto phi = [&](uint64_t m) {
    auto it = phi_memo.find(m);
    if (it != phi_memo.end()) return it->second;
    uint64_t v = oracle::phi_of(m);
    phi_memo.emplace(m, v);
    return v;
  };
  std::vector<uint64_t> idx(r, 1);
  while (true) {
    uint64_t m = 1;
    for (uint32_t t = 0; t < r; ++t) m = oracle::lcm2(m, idx[t]);
    uint64_t ph = phi(m);
    out.inv_phi += mpq_class(1, static_cast<unsigned long>(ph));
    mpq_class w(mpz_class(static_cast<unsigned long>(m)),
                mpz_class(static_cast<unsigned long>(ph)) * ph);
    w.canonicalize();
    out.over_phi_sq += w;
    out.inv += mpq_class(1, static_cast<unsigned long>(m));
    uint32_t t = 0;
    for (; t < r; ++t) {
      if (++idx[t] <= n) break;
      idx[t] = 1;
    }
    if (t == r) break;
  }
  return out;
}

Outcome oracle_equivalence() {
  for (uint64_t x = 1; x <= 50; ++x)
    for (uint32_t r : {1u, 2u, 3u}) {
      TripleSum ref = enumerate_all_kinds(x, r);
      const struct {
        LcmKind kind;
        const mpq_class& want;
      } checks[] = {{LcmKind::inv_phi_lcm, ref.inv_phi},
                    {LcmKind::lcm_over_phi_sq, ref.over_phi_sq},
                    {LcmKind::inv_lcm, ref.inv}};
      for (const auto& c : checks) {
        LcmSumValue got = lcm_sum(c.kind, double(x), r, sieve(), SumMode::exact);
        if (got.exact != c.want)
          return {false, fmt("mismatch kind=%s x=%llu r=%u", lcm_kind_name(c.kind),
                             (unsigned long long)x, r)};
      }
    }

  if (inv_phi_lcm_sum(3, 2, sieve()).exact != mpq_class(13, 2))
    return {false, "spot value 13/2 failed"};
  if (phi_r_constrained({6, 2, 6.0, 2.0}, sieve()) != 7)
    return {false, "spot value 7 failed"};
  if (inv_lcm_sum(3, 2, sieve()).exact != mpq_class(23, 6))
    return {false, "spot value 23/6 failed"};

  return {true, "450 exact equalities (x <= 50, r <= 3, 3 kinds) and 3 spot values"};
}

// ---- criterion 6: tuple-sum growth shape ----

Outcome tuple_growth_shape() {
  std::vector<double> grid{500, 2000, 8000, 32'000};
  LcmSumReport rep = lcm_sum_report(LcmKind::inv_lcm, 2, grid, sieve());
  GrowthDiagnostic g = growth_diagnostic(rep);
  bool decreasing = true;
  for (size_t i = 0; i + 1 < g.changes.size(); ++i)
    decreasing = decreasing && g.changes[i + 1] < g.changes[i];
  double last = g.changes.back();
  bool ok = decreasing && last <= 0.2;
  std::ostringstream os;
  os << "changes";
  for (double c : g.changes) os << ' ' << fmt("%.5f", c);
  os << " strictly decreasing, final <= 0.2";
  return {ok, os.str()};
}

// ---- criterion 7: prescribed-lcm count identity ----

Outcome lcm_count_identity() {
  for (uint64_t m = 1; m <= 500; ++m)
    for (uint32_t r : {1u, 2u, 3u})
      if (phi_r_full(m, r, sieve()) != oracle::phi_r_brute(m, r, double(m), 1.0))
        return {false, fmt("count formula fails at m=%llu r=%u",
                           (unsigned long long)m, r)};

  for (uint64_t x = 1; x <= 30; ++x)
    for (uint32_t r : {1u, 2u, 3u}) {
      // Group all tuples from [1, x]^r by their lcm, then check the counts
      // per value and their total.
      std::map<uint64_t, uint64_t> by_lcm;
      std::vector<uint64_t> idx(r, 1);
      while (true) {
        uint64_t m = 1;
        for (uint32_t t = 0; t < r; ++t) m = oracle::lcm2(m, idx[t]);
        ++by_lcm[m];
        uint32_t t = 0;
        for (; t < r; ++t) {
          if (++idx[t] <= x) break;
          idx[t] = 1;
        }
        if (t == r) break;
      }
      uint64_t total = 0;
      for (const auto& [m, cnt] : by_lcm) {
        uint64_t got = phi_r_constrained({m, r, double(x), 1.0}, sieve());
        if (got != cnt)
          return {false, fmt("window count fails at m=%llu x=%llu r=%u",
                             (unsigned long long)m, (unsigned long long)x, r)};
        total += got;
      }
      uint64_t expect = 1;
      for (uint32_t t = 0; t < r; ++t) expect *= x;
      if (total != expect)
        return {false, fmt("partition total fails at x=%llu r=%u",
                           (unsigned long long)x, r)};
    }
  return {true, "formula = brute force (m <= 500), partition = floor(x)^r (x <= 30)"};
}

// ---- criterion 8: divisibility density model ----

Outcome density_model() {
  auto exc = default_exceptional_primes(12);
  std::vector<double> grid{100'000};

  DensityReport full = density_report(angles(), 11, Interval(0, pi), grid, exc,
                                      sieve());
  double dev_full = std::abs(full.rows[0].density - 11.0 / 120);

  Interval mid(pi / 3, 2 * pi / 3);
  DensityReport windowed = density_report(angles(), 11, mid, grid, exc, sieve());
  double dev_win = std::abs(windowed.rows[0].density - *windowed.rows[0].model);

  bool ok = dev_full <= 0.02 && dev_win <= 0.02;
  return {ok, fmt("x=1e5 |density - 11/120| = %.6f, windowed |density - model| = "
                  "%.6f, both <= 0.02",
                  dev_full, dev_win)};
}

// ---- criterion 9: moment two-sided boundedness ----

Outcome moment_boundedness() {
  std::vector<double> grid{1000, 10'000, 100'000};
  const Interval windows[] = {Interval(0, pi), Interval(pi / 4, 3 * pi / 4)};
  std::ostringstream os;
  bool ok = true;
  for (uint32_t r : {1u, 2u})
    for (const auto& win : windows) {
      MomentReport rep = divisor_moment(divisors(), angles().spec, win, r, grid);
      if (rep.failure_count != 0) return {false, "factoring failures present"};
      double rho0 = rep.rows[0].ratio.value();
      for (const auto& row : rep.rows) {
        double ratio = row.ratio.value();
        if (!(ratio >= rho0 / 3 && ratio <= 3 * rho0)) ok = false;
      }
      os << fmt(" r=%u [%.2f,%.2f] rho0=%.3f last=%.3f", r, win.lo, win.hi, rho0,
                rep.rows.back().ratio.value());
    }
  return {ok, "ratios within [rho0/3, 3 rho0]:" + os.str()};
}

// ---- criterion 10: factor-shape partition ----

Outcome shape_partition() {
  DecompositionReport rep =
      decompose_divisor_sum(angles(), factorizer(), 10'000, 1, 0.5,
                            /*beta=*/(12 - 1) / 2.0 + 0.01);
  mpz_class class_sum = 0;
  uint64_t class_count = 0;
  for (const auto& row : rep.rows) {
    class_sum += row.dr_sum;
    class_count += row.count;
  }

  // Independent total from the divisor table rows below the same bound.
  mpz_class direct = 0;
  uint64_t direct_count = 0;
  for (const auto& row : divisors().rows) {
    if (row.p > 10'000) break;
    direct += row.d;
    ++direct_count;
  }

  bool ok = class_sum == rep.total && direct == rep.total &&
            class_count == direct_count && rep.failure_count == 0;
  return {ok, fmt("class sums = %s = direct sum over %llu primes, failures 0",
                  rep.total.get_str().c_str(), (unsigned long long)direct_count)};
}

// ---- criterion 11: CLI determinism ----

int run_tool(const std::string& args, const fs::path& log) {
  std::string cmd = tool_path + " " + args + " >" + log.string() + " 2>&1";
  int status = std::system(cmd.c_str());
  return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  return {std::istreambuf_iterator<char>(in), {}};
}

Outcome cli_determinism() {
  if (tool_path.empty())
    return {false, "no CLI path given on the command line"};

  std::string tmpl = (fs::temp_directory_path() / "dtlab-accept-XXXXXX").string();
  char* got = mkdtemp(tmpl.data());
  if (!got) return {false, "cannot create scratch directory"};
  fs::path base(got);

  // Each command runs twice in fresh directories, so coefficient caches are
  // rebuilt from scratch on both sides; all produced files must match.
  const std::string commands[] = {
      "coeffs --weight 12 --nmax 500 --cache-dir {D}/cache",
      "moments --weight 12 --r 2 --lo pi/4 --hi '3*pi/4' --grid 100:10:2 "
      "--sieve-limit 100000 --out {D}/m.csv --cache-dir {D}/cache",
      "lcm-sums --kind lcm_over_phi_sq --r 2 --grid 100:4:3 --threads 4 "
      "--out {D}/l.csv",
      "density --weight 12 --delta 7 --x 2000 --sieve-limit 100000 "
      "--out {D}/d.csv --cache-dir {D}/cache",
      "decompose --weight 12 --x 2000 --sieve-limit 100000 --out {D}/dc.csv "
      "--cache-dir {D}/cache",
      "sato-tate --weight 12 --grid 100:10:2 --out {D}/st.csv "
      "--cache-dir {D}/cache",
      "diagnostics --weight 12 --x 2000 --delta-max 8 --sieve-limit 100000 "
      "--out {D}/dg.csv --cache-dir {D}/cache",
  };

  int files_compared = 0;
  for (size_t i = 0; i < std::size(commands); ++i) {
    fs::path da = base / ("a" + std::to_string(i));
    fs::path db = base / ("b" + std::to_string(i));
    fs::create_directories(da);
    fs::create_directories(db);
    for (const fs::path& dir : {da, db}) {
      std::string cmd = commands[i];
      size_t pos;
      while ((pos = cmd.find("{D}")) != std::string::npos)
        cmd.replace(pos, 3, dir.string());
      int code = run_tool(cmd, dir / "log.txt");
      if (code != 0) {
        fs::remove_all(base);
        return {false, fmt("command %zu exited with %d", i, code)};
      }
    }
    // Compare every regular file by relative path and content.
    std::map<std::string, std::string> ca, cb;
    for (const auto& e : fs::recursive_directory_iterator(da))
      if (e.is_regular_file() && e.path().filename() != "log.txt")
        ca[fs::relative(e.path(), da).string()] = slurp(e.path());
    for (const auto& e : fs::recursive_directory_iterator(db))
      if (e.is_regular_file() && e.path().filename() != "log.txt")
        cb[fs::relative(e.path(), db).string()] = slurp(e.path());
    if (ca.empty() || ca != cb) {
      fs::remove_all(base);
      return {false, fmt("command %zu produced differing or missing files", i)};
    }
    files_compared += int(ca.size());
  }
  fs::remove_all(base);
  return {true, fmt("7 commands rerun, %d files byte-identical", files_compared)};
}

}  // namespace

int main(int argc, char** argv) {
  if (argc > 1) tool_path = argv[1];

  struct Criterion {
    const char* name;
    std::function<Outcome()> run;
  };
  const Criterion criteria[] = {
      {"divisor mean baseline", mean_baseline},
      {"squared-divisor growth shape", squared_divisor_shape},
      {"coefficient table invariants", coefficient_invariants},
      {"angle equidistribution census", angle_census},
      {"tuple-sum oracle equivalence", oracle_equivalence},
      {"tuple-sum growth shape", tuple_growth_shape},
      {"prescribed-lcm count identity", lcm_count_identity},
      {"divisibility density model", density_model},
      {"moment two-sided boundedness", moment_boundedness},
      {"factor-shape partition", shape_partition},
      {"CLI determinism", cli_determinism},
  };

  int failures = 0;
  for (size_t i = 0; i < std::size(criteria); ++i) {
    Outcome out;
    auto start = std::chrono::steady_clock::now();
    try {
      out = criteria[i].run();
    } catch (const std::exception& e) {
      out = {false, std::string("exception: ") + e.what()};
    }
    double secs = std::chrono::duration<double>(
                      std::chrono::steady_clock::now() - start)
                      .count();
    std::printf("[%s] criterion %2zu: %s: %s (%.1fs)\n",
                out.ok ? "PASS" : "FAIL", i + 1, criteria[i].name,
                out.detail.c_str(), secs);
    std::fflush(stdout);
    if (!out.ok) ++failures;
  }

  if (failures) {
    std::printf("%d of 11 criteria failed\n", failures);
    return 1;
  }
  std::printf("all 11 criteria passed\n");
  return 0;
}
