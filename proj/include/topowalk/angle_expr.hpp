#pragma once

#include <string_view>
#include <vector>

namespace topowalk {

/// Evaluate an angle literal such as "0.7", "pi", "-pi/2", "2pi/5", "3*pi/4"
/// or "(pi+1)/3". Throws std::invalid_argument on malformed input.
double parse_angle(std::string_view text);

/// Comma-separated list of angle literals ("pi/7,pi/5").
std::vector<double> parse_angle_list(std::string_view text);

} // namespace topowalk
