#include "agestruct/report.hpp"

#include <fmt/format.h>

namespace agestruct {

std::string format_real(double value) { return fmt::format("{:.17g}", value); }

void append_entry(std::string& out, std::string_view key, std::string_view value) {
  out.append(key);
  out.append(" = ");
  out.append(value);
  out.push_back('\n');
}

void append_entry(std::string& out, std::string_view key, double value) {
  append_entry(out, key, format_real(value));
}

void append_entry(std::string& out, std::string_view key, long long value) {
  append_entry(out, key, fmt::format("{}", value));
}

}  // namespace agestruct
