#include "dtlab/newform.hpp"

#include <cstdio>
#include <fstream>
#include <sstream>

#include "dtlab/eisenstein.hpp"
#include "dtlab/errors.hpp"

namespace dtlab {

bool weight_supported(uint32_t weight) {
  switch (weight) {
    case 12: case 16: case 18: case 20: case 22: case 26: return true;
    default: return false;
  }
}

NewformSpec make_newform_spec(uint32_t weight) {
  if (!weight_supported(weight))
    throw ConfigError("unsupported weight " + std::to_string(weight) +
                      " (one rational newform exists only for weights "
                      "12, 16, 18, 20, 22, 26 at level 1)");
  return {weight, 1, "k" + std::to_string(weight)};
}

namespace {

// J = sum_{k>=0} (-1)^k (2k+1) q^{k(k+1)/2}; the weight-12 form is q J^8.
Series theta_cube_series(size_t len) {
  Series j(len);
  for (uint64_t k = 0;; ++k) {
    uint64_t idx = k * (k + 1) / 2;
    if (idx >= len) break;
    long v = long(2 * k + 1);
    j[idx] = (k % 2 == 0) ? v : -v;
  }
  return j;
}

Series delta_eta_power(uint32_t n_max) {
  Series j = theta_cube_series(n_max);  // terms >= n_max cannot reach tau(n_max)
  Series j2 = square(j, n_max);
  Series j4 = square(j2, n_max);
  Series j8 = square(j4, n_max);
  Series d(n_max + 1);
  for (size_t n = 1; n <= n_max; ++n) d[n] = std::move(j8[n - 1]);
  return d;
}

Series delta_from_eisenstein(uint32_t n_max) {
  Series e4 = eisenstein_series(4, n_max);
  Series e6 = eisenstein_series(6, n_max);
  Series e4sq = square(e4, n_max + 1);
  Series e4cube = multiply(e4sq, e4, n_max + 1);
  Series e6sq = square(e6, n_max + 1);
  Series d(n_max + 1);
  for (size_t n = 0; n <= n_max; ++n) {
    mpz_class num = e4cube[n] - e6sq[n];
    if (num % 1728 != 0)
      throw Error("delta_from_eisenstein: discriminant numerator not divisible by 1728");
    d[n] = num / 1728;
  }
  return d;
}

}  // namespace

Series delta_series(uint32_t n_max, ExpansionRoute route) {
  return route == ExpansionRoute::eta_power ? delta_eta_power(n_max)
                                            : delta_from_eisenstein(n_max);
}

CoeffTable expand_coefficients(const NewformSpec& spec, uint32_t n_max,
                               uint32_t budget, ExpansionRoute route) {
  if (!weight_supported(spec.weight) || spec.level != 1)
    throw ConfigError("expand_coefficients: unsupported newform spec");
  if (n_max < 1) throw ConfigError("expand_coefficients: n_max must be positive");
  if (budget > kMaxSeriesBudget)
    throw ConfigError("expand_coefficients: budget exceeds hard ceiling");
  if (n_max > budget)
    throw BudgetError("expand_coefficients: n_max exceeds series budget");

  CoeffTable table{spec, n_max, delta_series(n_max, route)};
  if (spec.weight > 12) {
    Series e = eisenstein_series(spec.weight - 12, n_max);
    table.a = multiply(table.a, e, n_max + 1);
  }
  return table;
}

std::string coeff_cache_filename(const NewformSpec& spec, uint32_t n_max) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "coeff_w%u_n%u.txt", spec.weight, n_max);
  return buf;
}

namespace {

std::string cache_header(const NewformSpec& spec, uint32_t n_max) {
  std::ostringstream os;
  os << "DTLAB-COEFF v1 weight=" << spec.weight << " level=" << spec.level
     << " nmax=" << n_max;
  return os.str();
}

}  // namespace

void write_coeff_cache(const std::string& path, const CoeffTable& table) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot open cache file for writing: " + path);
  out << cache_header(table.spec, table.n_max) << '\n';
  for (uint32_t n = 1; n <= table.n_max; ++n) out << table.a[n] << '\n';
  out.flush();
  if (!out) throw IoError("write failure on cache file: " + path);
}

CoeffTable read_coeff_cache(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open cache file: " + path);

  std::string line;
  if (!std::getline(in, line)) throw IoError("empty cache file: " + path);
  std::istringstream hs(line);
  std::string magic, version, w, l, n;
  hs >> magic >> version >> w >> l >> n;
  auto field = [&](const std::string& kv, const char* key) -> uint32_t {
    std::string prefix = std::string(key) + "=";
    if (kv.rfind(prefix, 0) != 0)
      throw IoError("bad cache header field in " + path);
    return uint32_t(std::stoul(kv.substr(prefix.size())));
  };
  if (magic != "DTLAB-COEFF" || version != "v1")
    throw IoError("bad cache header in " + path);
  uint32_t weight = field(w, "weight");
  uint32_t level = field(l, "level");
  uint32_t n_max = field(n, "nmax");
  if (!weight_supported(weight) || level != 1 || n_max < 1)
    throw IoError("cache header describes an unsupported table: " + path);

  CoeffTable table{make_newform_spec(weight), n_max, Series(size_t(n_max) + 1)};
  for (uint32_t k = 1; k <= n_max; ++k) {
    if (!std::getline(in, line) || line.empty())
      throw IoError("truncated cache file: " + path);
    if (mpz_set_str(table.a[k].get_mpz_t(), line.c_str(), 10) != 0)
      throw IoError("malformed coefficient line in " + path);
  }
  return table;
}

bool cache_header_matches(const std::string& path, const NewformSpec& spec,
                          uint32_t n_max) {
  std::ifstream in(path, std::ios::binary);
  if (!in) return false;
  std::string line;
  if (!std::getline(in, line)) return false;
  return line == cache_header(spec, n_max);
}

}  // namespace dtlab
