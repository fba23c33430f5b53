#pragma once

namespace uqcoh {

inline constexpr const char* version_string = "1.0.0";

// Bumped whenever the JSON report layout changes incompatibly.
inline constexpr int report_schema = 1;

}  // namespace uqcoh
