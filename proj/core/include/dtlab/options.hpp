#pragma once

#include <string>
#include <vector>

namespace dtlab {

// Angle syntax for CLI flags: a decimal number, or "pi"-relative forms
// "pi", "pi/4", "2pi/3", "3*pi/4".  Result must land in [0, pi].
double parse_angle(const std::string& text);

// Geometric grid "start:factor:count" with factor > 1, count >= 1;
// numbers accept scientific notation ("1e3:10:3").
std::vector<double> parse_grid(const std::string& text);

}  // namespace dtlab
