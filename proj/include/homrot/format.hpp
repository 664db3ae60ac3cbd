#pragma once

#include <string>

namespace homrot {

/// Shortest decimal text that reads back to exactly `value`.
std::string format_double(double value);

}  // namespace homrot
