#include "dtlab/lcm_sums.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <future>
#include <numeric>

#include "dtlab/errors.hpp"

namespace dtlab {

const char* lcm_kind_name(LcmKind kind) {
  switch (kind) {
    case LcmKind::inv_phi_lcm: return "inv_phi_lcm";
    case LcmKind::lcm_over_phi_sq: return "lcm_over_phi_sq";
    case LcmKind::inv_lcm: return "inv_lcm";
  }
  throw ConfigError("unknown lcm sum kind");
}

LcmKind parse_lcm_kind(const std::string& name) {
  if (name == "inv_phi_lcm") return LcmKind::inv_phi_lcm;
  if (name == "lcm_over_phi_sq") return LcmKind::lcm_over_phi_sq;
  if (name == "inv_lcm") return LcmKind::inv_lcm;
  throw ConfigError("unknown lcm sum kind: " + name);
}

double tuple_ceiling(uint32_t r) {
  switch (r) {
    case 1: return 1e6;
    case 2: return 3e4;
    case 3: return 1500;
    case 4: return 300;
    default: return 0;  // rank itself is over budget
  }
}

namespace {

constexpr unsigned kChunks = 64;
constexpr double kAcceleratedCeiling = 1e7;

// Neumaier compensated accumulation; merge order is fixed by the caller, so
// results are bit-identical for any thread count.
struct Kahan {
  double s = 0, c = 0;
  void add(double v) {
    double t = s + v;
    c += (std::fabs(s) >= std::fabs(v)) ? (s - t) + v : (v - t) + s;
    s = t;
  }
  double total() const { return s + c; }
  void merge(const Kahan& o) {
    add(o.s);
    add(o.c);
  }
};

// Balanced (binary-counter) exact accumulation.  Summing term by term would
// drag a huge canonical denominator through every addition; merging partials
// of equal leaf count keeps small additions small.
struct ExactAcc {
  std::vector<mpq_class> slots;
  std::vector<bool> used;
  void add(mpq_class t) {
    size_t i = 0;
    for (; i < used.size() && used[i]; ++i) {
      t += slots[i];
      used[i] = false;
    }
    if (i == slots.size()) {
      slots.emplace_back();
      used.push_back(false);
    }
    slots[i] = std::move(t);
    used[i] = true;
  }
  mpq_class total() const {
    mpq_class s;
    for (size_t i = 0; i < slots.size(); ++i)
      if (used[i]) s += slots[i];
    return s;
  }
};

struct Acc {
  SumMode mode;
  ExactAcc exact;
  Kahan fp;

  explicit Acc(SumMode m) : mode(m) {}

  // One multiset counted with weight w, lcm m, phi(lcm) = phi.
  void add_leaf(LcmKind kind, uint64_t w, uint64_t m, uint64_t phi) {
    if (mode == SumMode::exact) {
      mpq_class t;
      switch (kind) {
        case LcmKind::inv_phi_lcm:
          t = mpq_class(mpz_class(w), mpz_class(phi));
          break;
        case LcmKind::lcm_over_phi_sq:
          t = mpq_class(mpz_class(w) * m, mpz_class(phi) * phi);
          break;
        case LcmKind::inv_lcm:
          t = mpq_class(mpz_class(w), mpz_class(m));
          break;
      }
      t.canonicalize();
      exact.add(std::move(t));
    } else {
      double v;
      switch (kind) {
        case LcmKind::inv_phi_lcm: v = 1.0 / double(phi); break;
        case LcmKind::lcm_over_phi_sq:
          v = double(m) / (double(phi) * double(phi));
          break;
        case LcmKind::inv_lcm: v = 1.0 / double(m); break;
        default: v = 0; break;
      }
      fp.add(double(w) * v);
    }
  }
};

LcmSumValue finish(std::vector<Acc>&& chunks, SumMode mode) {
  LcmSumValue out;
  out.mode = mode;
  if (mode == SumMode::exact) {
    mpq_class s;
    for (auto& a : chunks) s += a.exact.total();
    out.exact = s;
    out.value = s.get_d();
  } else {
    Kahan k;
    for (auto& a : chunks) k.merge(a.fp);
    out.value = k.total();
  }
  return out;
}

uint64_t factorial(uint32_t r) {
  uint64_t f = 1;
  for (uint32_t i = 2; i <= r; ++i) f *= i;
  return f;
}

// Exponentwise-max merge into reusable storage; no allocation once the
// destination has warmed up its capacity.
void merge_into(const Factorization& a, const Factorization& b,
                Factorization& out) {
  out.factors.clear();
  size_t i = 0, j = 0;
  while (i < a.factors.size() && j < b.factors.size()) {
    if (a.factors[i].p < b.factors[j].p) {
      out.factors.push_back(a.factors[i++]);
    } else if (a.factors[i].p > b.factors[j].p) {
      out.factors.push_back(b.factors[j++]);
    } else {
      out.factors.push_back(
          {a.factors[i].p, std::max(a.factors[i].e, b.factors[j].e)});
      ++i, ++j;
    }
  }
  for (; i < a.factors.size(); ++i) out.factors.push_back(a.factors[i]);
  for (; j < b.factors.size(); ++j) out.factors.push_back(b.factors[j]);
}

// Shared read-only state for the non-decreasing tuple walk.
struct TupleContext {
  LcmKind kind;
  std::span<const uint32_t> values;
  uint32_t r;
  uint64_t r_factorial;
  std::vector<Factorization> facts;

  TupleContext(LcmKind k, std::span<const uint32_t> v, uint32_t rank,
               const FactorSieve& sieve)
      : kind(k), values(v), r(rank), r_factorial(factorial(rank)) {
    facts.reserve(v.size());
    for (uint32_t val : v) facts.push_back(sieve.factorize(val));
  }
};

// One chunk of the walk: leading index in [lo, hi), later coordinates free.
// Carries the merged lcm factorization down the recursion and the product of
// run-length factorials that turns each multiset into its ordered-tuple
// count r!/prod(runs!).
class TupleRun {
 public:
  TupleRun(const TupleContext& ctx, Acc& acc)
      : ctx_(ctx), acc_(acc), merged_(ctx.r + 1) {}

  void run(size_t lo, size_t hi) {
    for (size_t i = lo; i < hi; ++i) descend(1, i, 1, 1);
  }

 private:
  void descend(uint32_t depth, size_t idx, uint32_t run, uint64_t run_denom) {
    if (depth == 1)
      merged_[1] = ctx_.facts[idx];
    else
      merge_into(merged_[depth - 1], ctx_.facts[idx], merged_[depth]);
    uint64_t denom = run_denom * run;
    if (depth == ctx_.r) {
      const Factorization& m = merged_[depth];
      acc_.add_leaf(ctx_.kind, ctx_.r_factorial / denom, value_of(m),
                    euler_phi(m));
      return;
    }
    descend(depth + 1, idx, run + 1, denom);
    for (size_t j = idx + 1; j < ctx_.values.size(); ++j)
      descend(depth + 1, j, 1, denom);
  }

  const TupleContext& ctx_;
  Acc& acc_;
  std::vector<Factorization> merged_;
};

std::vector<uint32_t> totient_table(const FactorSieve& sieve, uint32_t n) {
  std::vector<uint32_t> phi(size_t(n) + 1);
  phi[0] = 0;
  if (n >= 1) phi[1] = 1;
  for (uint32_t k = 2; k <= n; ++k) {
    uint32_t p = sieve.spf(k);
    uint32_t q = k / p;
    phi[k] = phi[q] * (q % p == 0 ? p : p - 1);
  }
  return phi;
}

// phi(a) phi(b) = phi(lcm(a,b)) phi(gcd(a,b)) makes every pair summand a few
// table lookups; this is the hot path for rank 2 in floating point.
void pair_sum_chunk(LcmKind kind, std::span<const uint32_t> values,
                    const std::vector<uint32_t>& phi, size_t lo, size_t hi,
                    Acc& acc) {
  for (size_t i = lo; i < hi; ++i) {
    uint64_t a = values[i];
    for (size_t j = i; j < values.size(); ++j) {
      uint64_t b = values[j];
      uint64_t g = std::gcd(a, b);
      uint64_t m = a / g * b;
      uint64_t ph = uint64_t(phi[a]) * phi[b] / phi[g];
      acc.add_leaf(kind, i == j ? 1 : 2, m, ph);
    }
  }
}

// Fixed chunking of [0, n) used for all parallel paths; independent of the
// thread count so the reduction tree never changes shape.
std::vector<std::pair<size_t, size_t>> chunk_ranges(size_t n) {
  std::vector<std::pair<size_t, size_t>> out;
  size_t step = (n + kChunks - 1) / kChunks;
  for (size_t lo = 0; lo < n; lo += step)
    out.emplace_back(lo, std::min(n, lo + step));
  return out;
}

template <typename Job>
std::vector<Acc> run_chunks(size_t n, SumMode mode, unsigned threads, Job job) {
  auto ranges = chunk_ranges(n);
  std::vector<Acc> accs;
  accs.reserve(ranges.size());
  for (size_t i = 0; i < ranges.size(); ++i) accs.emplace_back(mode);
  if (threads <= 1) {
    for (size_t i = 0; i < ranges.size(); ++i)
      job(ranges[i].first, ranges[i].second, accs[i]);
    return accs;
  }
  std::atomic<size_t> next{0};
  std::vector<std::future<void>> workers;
  for (unsigned t = 0; t < threads; ++t)
    workers.push_back(std::async(std::launch::async, [&] {
      for (size_t i = next.fetch_add(1); i < ranges.size();
           i = next.fetch_add(1))
        job(ranges[i].first, ranges[i].second, accs[i]);
    }));
  for (auto& w : workers) w.get();
  return accs;
}

LcmSumValue accelerated_inv_lcm_pairs(double x, const FactorSieve& sieve,
                                      SumMode mode, unsigned threads);

}  // namespace

LcmSumValue sorted_tuple_sum(LcmKind kind, std::span<const uint32_t> values,
                             uint32_t r, const FactorSieve& sieve, SumMode mode,
                             unsigned threads) {
  if (r < 1) throw ConfigError("tuple rank must be at least 1");
  if (!std::is_sorted(values.begin(), values.end()))
    throw ConfigError("sorted_tuple_sum: values must be ascending");

  if (r == 2 && mode == SumMode::fp && !values.empty()) {
    auto phi = totient_table(sieve, values.back());
    auto accs = run_chunks(values.size(), mode, threads,
                           [&](size_t lo, size_t hi, Acc& acc) {
                             pair_sum_chunk(kind, values, phi, lo, hi, acc);
                           });
    return finish(std::move(accs), mode);
  }

  TupleContext ctx(kind, values, r, sieve);
  auto accs = run_chunks(values.size(), mode, threads,
                         [&](size_t lo, size_t hi, Acc& acc) {
                           TupleRun(ctx, acc).run(lo, hi);
                         });
  return finish(std::move(accs), mode);
}

namespace {

// Pair inverse-lcm aggregation by gcd class:
//   sum_{a,b<=x} 1/lcm(a,b) = sum_{m<=x} (phi(m)/m^2) H(floor(x/m))^2
// with H the harmonic partial sum.
LcmSumValue accelerated_inv_lcm_pairs(double x, const FactorSieve& sieve,
                                      SumMode mode, unsigned threads) {
  uint32_t n = uint32_t(x);
  LcmSumValue out;
  out.mode = mode;
  if (n == 0) {
    out.exact = 0;
    return out;
  }

  if (mode == SumMode::exact) {
    std::vector<mpq_class> h(size_t(n) + 1);
    for (uint32_t k = 1; k <= n; ++k) {
      mpq_class term(1, k);
      h[k] = h[k - 1] + term;
    }
    ExactAcc acc;
    for (uint32_t m = 1; m <= n; ++m) {
      auto f = sieve.factorize(m);
      mpq_class t(mpz_class(euler_phi(f)), mpz_class(m) * m);
      t.canonicalize();
      const mpq_class& hq = h[n / m];
      acc.add(t * hq * hq);
    }
    out.exact = acc.total();
    out.value = out.exact.get_d();
    return out;
  }

  // H(floor(x/m)) takes O(sqrt x) distinct values; record the harmonic prefix
  // only at those points, then stream m ascending.
  std::vector<uint32_t> marks;
  for (uint32_t m = 1; m <= n; m = n / (n / m) + 1) marks.push_back(n / m);
  std::sort(marks.begin(), marks.end());
  std::vector<double> h_at(marks.size());
  {
    Kahan h;
    size_t next = 0;
    for (uint32_t k = 1; k <= n && next < marks.size(); ++k) {
      h.add(1.0 / k);
      while (next < marks.size() && marks[next] == k) h_at[next++] = h.total();
    }
  }
  auto h_of = [&](uint32_t k) {
    return h_at[size_t(std::lower_bound(marks.begin(), marks.end(), k) -
                       marks.begin())];
  };

  auto phi = totient_table(sieve, n);
  auto accs = run_chunks(n, mode, threads, [&](size_t lo, size_t hi, Acc& acc) {
    for (size_t i = lo; i < hi; ++i) {
      uint32_t m = uint32_t(i) + 1;
      double hq = h_of(n / m);
      acc.fp.add(double(phi[m]) / (double(m) * m) * hq * hq);
    }
  });
  return finish(std::move(accs), mode);
}

std::vector<uint32_t> range_values(double x) {
  std::vector<uint32_t> v(size_t(x), 0u);
  std::iota(v.begin(), v.end(), 1u);
  return v;
}

}  // namespace

LcmSumValue lcm_sum(LcmKind kind, double x, uint32_t r, const FactorSieve& sieve,
                    std::optional<SumMode> force_mode, unsigned threads) {
  if (!(x >= 1)) throw ConfigError("lcm_sum: x must be at least 1");
  if (r < 1) throw ConfigError("lcm_sum: rank must be at least 1");
  SumMode mode = force_mode.value_or(x <= kExactModeCutoff ? SumMode::exact
                                                           : SumMode::fp);
  if (mode == SumMode::exact && x > kExactModeCutoff)
    throw BudgetError("lcm_sum: exact mode above the rational cutoff");

  if (kind == LcmKind::inv_lcm && r == 2) {
    if (x > kAcceleratedCeiling)
      throw BudgetError("lcm_sum: x exceeds the aggregated-path budget");
    if (x > double(sieve.limit()))
      throw ConfigError("lcm_sum: x exceeds sieve range");
    return accelerated_inv_lcm_pairs(x, sieve, mode, threads);
  }

  if (x > tuple_ceiling(r))
    throw BudgetError("lcm_sum: x exceeds the tuple enumeration budget at rank " +
                      std::to_string(r));
  if (x > double(sieve.limit()))
    throw ConfigError("lcm_sum: x exceeds sieve range");
  auto values = range_values(x);
  return sorted_tuple_sum(kind, values, r, sieve, mode, threads);
}

LcmSumValue inv_phi_lcm_sum(double x, uint32_t r, const FactorSieve& sieve,
                            unsigned threads) {
  return lcm_sum(LcmKind::inv_phi_lcm, x, r, sieve, {}, threads);
}

LcmSumValue lcm_over_phi_sq_sum(double x, uint32_t r, const FactorSieve& sieve,
                                unsigned threads) {
  return lcm_sum(LcmKind::lcm_over_phi_sq, x, r, sieve, {}, threads);
}

LcmSumValue inv_lcm_sum(double x, uint32_t r, const FactorSieve& sieve,
                        unsigned threads) {
  return lcm_sum(LcmKind::inv_lcm, x, r, sieve, {}, threads);
}

uint64_t phi_r_full(uint64_t m, uint32_t r, const FactorSieve& sieve) {
  if (r < 1 || r > 16) throw ConfigError("phi_r_full: rank out of range");
  auto f = sieve.factorize(m);
  unsigned __int128 out = 1;
  for (const auto& [p, e] : f.factors) {
    unsigned __int128 hi = 1, lo = 1;
    for (uint32_t i = 0; i < r; ++i) hi *= e + 1, lo *= e;
    out *= hi - lo;
    if (out > ~uint64_t(0)) throw OverflowError("phi_r_full: 64-bit overflow");
  }
  return uint64_t(out);
}

uint64_t phi_r_constrained(const PhiRQuery& q, const FactorSieve& sieve) {
  if (q.r < 1 || q.r > 16) throw ConfigError("phi_r_constrained: rank out of range");
  if (!(q.z_lo >= 1) || !(q.z_lo <= q.x_hi))
    throw ConfigError("phi_r_constrained: need 1 <= z_lo <= x_hi");
  auto f = sieve.factorize(q.m);
  const size_t k = f.factors.size();

  uint64_t d_count = divisor_count(f);
  if (d_count > 4096)
    throw BudgetError("phi_r_constrained: divisor lattice too large");

  // All divisors as exponent tuples, plus their values.
  std::vector<std::vector<uint32_t>> exps;
  std::vector<uint64_t> vals;
  exps.reserve(d_count);
  vals.reserve(d_count);
  exps.push_back(std::vector<uint32_t>(k, 0));
  vals.push_back(1);
  for (size_t i = 0; i < k; ++i) {
    size_t sz = exps.size();
    uint64_t pw = 1;
    for (uint32_t e = 1; e <= f.factors[i].e; ++e) {
      pw *= f.factors[i].p;
      for (size_t t = 0; t < sz; ++t) {
        auto ex = exps[t];
        ex[i] = e;
        exps.push_back(std::move(ex));
        vals.push_back(vals[t] * pw);
      }
    }
  }

  auto in_range = [&](uint64_t d) {
    return double(d) >= q.z_lo && double(d) <= q.x_hi;
  };

  // sum over e | m of mu(m/e) (#divisors of e within range)^r
  __int128 total = 0;
  for (size_t a = 0; a < exps.size(); ++a) {
    int mu = 1;
    for (size_t i = 0; i < k; ++i) {
      uint32_t diff = f.factors[i].e - exps[a][i];
      if (diff >= 2) { mu = 0; break; }
      if (diff == 1) mu = -mu;
    }
    if (mu == 0) continue;
    uint64_t cnt = 0;
    for (size_t b = 0; b < exps.size(); ++b) {
      if (!in_range(vals[b])) continue;
      bool divides = true;
      for (size_t i = 0; i < k; ++i)
        if (exps[b][i] > exps[a][i]) { divides = false; break; }
      if (divides) ++cnt;
    }
    unsigned __int128 pw = 1;
    for (uint32_t i = 0; i < q.r; ++i) pw *= cnt;
    total += mu > 0 ? __int128(pw) : -__int128(pw);
  }
  if (total < 0) throw Error("phi_r_constrained: negative lattice sum");
  return uint64_t(total);
}

LcmSumValue smooth_restricted_inv_lcm(double x, double c, double s, uint32_t r,
                                      const FactorSieve& sieve,
                                      unsigned threads) {
  if (!(x > 1) || !(c > 0) || !(c < 1) || !(s >= 1))
    throw ConfigError("smooth_restricted_inv_lcm: need x > 1, 0 < c < 1, s >= 1");
  if (r < 1) throw ConfigError("smooth_restricted_inv_lcm: rank must be at least 1");
  double x_hi = std::pow(x, c);
  double z_lo = std::pow(x, c / 4);
  double y = std::pow(x, 1.0 / s);
  if (x_hi > double(sieve.limit()))
    throw ConfigError("smooth_restricted_inv_lcm: x^c exceeds sieve range");
  if (x_hi > tuple_ceiling(r))
    throw BudgetError("smooth_restricted_inv_lcm: x^c exceeds the tuple budget");

  std::vector<uint32_t> values;
  for (uint64_t d = 1; double(d) <= x_hi; ++d)
    if (double(d) >= z_lo && sieve.is_smooth(d, y)) values.push_back(uint32_t(d));

  SumMode mode = x_hi <= kExactModeCutoff ? SumMode::exact : SumMode::fp;
  return sorted_tuple_sum(LcmKind::inv_lcm, values, r, sieve, mode, threads);
}

LcmSumReport lcm_sum_report(LcmKind kind, uint32_t r,
                            std::span<const double> x_grid,
                            const FactorSieve& sieve, unsigned threads) {
  LcmSumReport report{kind, r, {}};
  double exponent = double((uint64_t(1) << r) - 1);
  for (double x : x_grid) {
    LcmSumRow row{x, lcm_sum(kind, x, r, sieve, {}, threads), 0.0};
    row.ratio = row.sum.value / std::pow(std::log(x), exponent);
    report.rows.push_back(std::move(row));
  }
  return report;
}

GrowthDiagnostic growth_diagnostic(const LcmSumReport& report) {
  if (report.rows.size() < 3)
    throw ConfigError("growth_diagnostic: need at least three grid points");
  GrowthDiagnostic g;
  for (const auto& row : report.rows) g.ratios.push_back(row.ratio);
  for (size_t i = 0; i + 1 < g.ratios.size(); ++i)
    g.changes.push_back(std::fabs(g.ratios[i + 1] - g.ratios[i]) /
                        g.ratios[i]);
  return g;
}

}  // namespace dtlab
