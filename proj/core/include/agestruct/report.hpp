#pragma once

#include <string>
#include <string_view>

namespace agestruct {

// Round-trip decimal representation (%.17g).
std::string format_real(double value);

// Appends one `key = value` line.
void append_entry(std::string& out, std::string_view key, std::string_view value);
void append_entry(std::string& out, std::string_view key, double value);
void append_entry(std::string& out, std::string_view key, long long value);

}  // namespace agestruct
