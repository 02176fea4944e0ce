#pragma once

#include <string>

namespace cvbs {

// 17 significant digits, so every double round-trips.
std::string fmt_double(double x);

// 64-bit FNV-1a, as 16 lowercase hex digits.
std::string fnv1a_hex(const std::string& bytes);

}  // namespace cvbs
