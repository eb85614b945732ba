#include "dtlab/options.hpp"

#include <cmath>
#include <numbers>

#include "dtlab/errors.hpp"

namespace dtlab {

namespace {

double parse_number(const std::string& text) {
  size_t used = 0;
  double v;
  try {
    v = std::stod(text, &used);
  } catch (const std::exception&) {
    throw ConfigError("malformed number: " + text);
  }
  if (used != text.size()) throw ConfigError("malformed number: " + text);
  return v;
}

}  // namespace

double parse_angle(const std::string& text) {
  if (text.empty()) throw ConfigError("empty angle");

  size_t pos = text.find("pi");
  if (pos == std::string::npos) {
    double v = parse_number(text);
    if (v < 0 || v > std::numbers::pi)
      throw ConfigError("angle out of [0, pi]: " + text);
    return v;
  }

  // [coef][*]pi[/div]
  double coef = 1.0;
  std::string head = text.substr(0, pos);
  if (!head.empty() && head.back() == '*') head.pop_back();
  if (!head.empty()) coef = parse_number(head);

  double div = 1.0;
  std::string tail = text.substr(pos + 2);
  if (!tail.empty()) {
    if (tail.front() != '/' || tail.size() < 2)
      throw ConfigError("malformed angle: " + text);
    div = parse_number(tail.substr(1));
    if (div == 0) throw ConfigError("zero divisor in angle: " + text);
  }

  double v = coef * std::numbers::pi / div;
  if (v < 0 || v > std::numbers::pi)
    throw ConfigError("angle out of [0, pi]: " + text);
  return v;
}

std::vector<double> parse_grid(const std::string& text) {
  size_t c1 = text.find(':');
  size_t c2 = c1 == std::string::npos ? std::string::npos
                                      : text.find(':', c1 + 1);
  if (c1 == std::string::npos || c2 == std::string::npos)
    throw ConfigError("grid must be start:factor:count, got: " + text);

  double start = parse_number(text.substr(0, c1));
  double factor = parse_number(text.substr(c1 + 1, c2 - c1 - 1));
  double count_raw = parse_number(text.substr(c2 + 1));

  if (!(start > 0)) throw ConfigError("grid start must be positive");
  if (!(factor > 1)) throw ConfigError("grid factor must exceed 1");
  if (!(count_raw >= 1) || count_raw != std::floor(count_raw) ||
      count_raw > 64)
    throw ConfigError("grid count must be an integer in [1, 64]");

  std::vector<double> grid;
  double x = start;
  for (int i = 0; i < int(count_raw); ++i, x *= factor) grid.push_back(x);
  return grid;
}

}  // namespace dtlab
