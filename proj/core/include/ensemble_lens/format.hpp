#pragma once

#include <string>
#include <string_view>

namespace ensemble_lens {

// Shortest decimal text that parses back to exactly the same double.
std::string format_double(double value);

// Hex SHA-256 of a byte string.
std::string sha256_hex(std::string_view bytes);

}  // namespace ensemble_lens
