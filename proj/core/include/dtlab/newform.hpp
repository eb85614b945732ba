#pragma once

#include <cstdint>
#include <string>

#include "dtlab/series.hpp"

namespace dtlab {

// The six level-one newform weights whose coefficient fields are rational,
// so every Fourier coefficient is a rational integer.
bool weight_supported(uint32_t weight);

struct NewformSpec {
  uint32_t weight;
  uint32_t level = 1;
  std::string label;
};

NewformSpec make_newform_spec(uint32_t weight);

// a[n] for 1 <= n <= n_max; a[0] is kept zero so indices match n.
struct CoeffTable {
  NewformSpec spec;
  uint32_t n_max = 0;
  Series a;
};

inline constexpr uint32_t kDefaultSeriesBudget = 200'000;
inline constexpr uint32_t kMaxSeriesBudget = 1'000'000;

// Production expansion goes through the weight-12 cusp form as q times the
// eighth power of a sparse theta-like series, then raises weight with the
// matching Eisenstein factor.  The alternate route builds the weight-12 form
// from E4^3 - E6^2 instead; both must agree coefficient for coefficient.
enum class ExpansionRoute { eta_power, eisenstein_delta };

Series delta_series(uint32_t n_max,
                    ExpansionRoute route = ExpansionRoute::eta_power);

CoeffTable expand_coefficients(const NewformSpec& spec, uint32_t n_max,
                               uint32_t budget = kDefaultSeriesBudget,
                               ExpansionRoute route = ExpansionRoute::eta_power);

// Plain-text cache, one decimal coefficient per line under a header that pins
// the format version, weight, level, and length.  Rewriting is byte-stable.
std::string coeff_cache_filename(const NewformSpec& spec, uint32_t n_max);
void write_coeff_cache(const std::string& path, const CoeffTable& table);
CoeffTable read_coeff_cache(const std::string& path);
bool cache_header_matches(const std::string& path, const NewformSpec& spec,
                          uint32_t n_max);

}  // namespace dtlab
