#include "agestruct/validation.hpp"

#include <algorithm>

#include <fmt/format.h>

namespace agestruct {

void ValidationReport::merge(const ValidationReport& other) {
  checks_.insert(checks_.end(), other.checks_.begin(), other.checks_.end());
}

const Check* ValidationReport::find(const std::string& name) const noexcept {
  auto it = std::find_if(checks_.begin(), checks_.end(),
                         [&](const Check& c) { return c.name == name; });
  return it == checks_.end() ? nullptr : &*it;
}

bool ValidationReport::passed() const noexcept {
  return std::all_of(checks_.begin(), checks_.end(), [](const Check& c) { return c.passed; });
}

bool ValidationReport::admissible() const noexcept { return first_fatal_failure() == nullptr; }

const Check* ValidationReport::first_fatal_failure() const noexcept {
  auto it = std::find_if(checks_.begin(), checks_.end(),
                         [](const Check& c) { return c.fatal && !c.passed; });
  return it == checks_.end() ? nullptr : &*it;
}

std::string ValidationReport::to_text() const {
  std::string out;
  for (const Check& c : checks_) {
    out += fmt::format("{:<24} {:<5} value={:.6g} at={:.6g}{}{}\n", c.name,
                       c.passed ? "ok" : (c.fatal ? "FAIL" : "warn"), c.value, c.location,
                       c.note.empty() ? "" : " ", c.note);
  }
  return out;
}

}  // namespace agestruct
