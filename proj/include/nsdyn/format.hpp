#pragma once

#include <string>

namespace nsdyn {

/// Shortest decimal string that round-trips to `value` (never more than 17
/// significant digits). Non-finite values print as nan, inf, -inf.
std::string format_real(double value);

}  // namespace nsdyn
