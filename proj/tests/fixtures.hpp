#pragma once

#include <cmath>
#include <string>

#include "qot/config.hpp"

namespace fixtures {

// Reference 2720-channel system, built once per test binary.
inline const qot::BuiltLink& reference_link() {
  static const qot::BuiltLink built = qot::build_grid(qot::parse_config(""));
  return built;
}

inline qot::BuiltLink toy_link(int channels, const std::string& extra = "") {
  return qot::build_grid(qot::parse_config("signal.fsu_count = " + std::to_string(channels) + "\n" + extra));
}

inline double relative(double a, double b) { return std::abs(a - b) / std::abs(b); }

}  // namespace fixtures
