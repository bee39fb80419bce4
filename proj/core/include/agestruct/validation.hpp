#pragma once

#include <string>
#include <vector>

namespace agestruct {

struct Check {
  std::string name;
  bool passed = true;
  // A failed fatal check puts the model outside the admissible class.
  bool fatal = false;
  double value = 0.0;
  double location = 0.0;
  std::string note;
};

class ValidationReport {
 public:
  void add(Check check) { checks_.push_back(std::move(check)); }
  void merge(const ValidationReport& other);

  const std::vector<Check>& checks() const noexcept { return checks_; }
  const Check* find(const std::string& name) const noexcept;

  bool passed() const noexcept;
  // True unless some fatal check failed.
  bool admissible() const noexcept;
  const Check* first_fatal_failure() const noexcept;

  std::string to_text() const;

 private:
  std::vector<Check> checks_;
};

}  // namespace agestruct
