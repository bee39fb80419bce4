#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace agestruct {

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// The age weight g is outside the admissible class (positive lower bound,
// sub-multiplicativity).
class WeightViolation : public Error {
 public:
  WeightViolation(std::string condition, double location)
      : Error("weight condition violated: " + condition + " at a = " + std::to_string(location)),
        condition_(std::move(condition)),
        location_(location) {}

  const std::string& condition() const noexcept { return condition_; }
  double location() const noexcept { return location_; }

 private:
  std::string condition_;
  double location_;
};

class EllipticityViolation : public Error {
 public:
  EllipticityViolation(std::size_t node, double value, double floor)
      : Error("diffusion coefficient " + std::to_string(value) + " below floor " +
              std::to_string(floor) + " at node " + std::to_string(node)),
        node_(node),
        value_(value) {}

  std::size_t node() const noexcept { return node_; }
  double value() const noexcept { return value_; }

 private:
  std::size_t node_;
  double value_;
};

class SingularSystem : public Error {
 public:
  using Error::Error;
};

class IndexOutOfWindow : public Error {
 public:
  using Error::Error;
};

// A sampled structural hypothesis on the model laws failed.
class HypothesisViolation : public Error {
 public:
  explicit HypothesisViolation(std::string condition)
      : Error("hypothesis violated: " + condition), condition_(std::move(condition)) {}

  const std::string& condition() const noexcept { return condition_; }

 private:
  std::string condition_;
};

// The contraction window shrank below the admissible minimum, or the trust
// radius was exceeded. last_valid_time() is the end of the last accepted window.
class WindowCollapse : public Error {
 public:
  WindowCollapse(double last_valid_time, std::string reason)
      : Error("window collapse after t = " + std::to_string(last_valid_time) + ": " + reason),
        last_valid_time_(last_valid_time),
        reason_(std::move(reason)) {}

  double last_valid_time() const noexcept { return last_valid_time_; }
  const std::string& reason() const noexcept { return reason_; }

 private:
  double last_valid_time_;
  std::string reason_;
};

class MaxIterExceeded : public Error {
 public:
  explicit MaxIterExceeded(int iterations)
      : Error("Picard iteration did not converge in " + std::to_string(iterations) + " iterations"),
        iterations_(iterations) {}

  int iterations() const noexcept { return iterations_; }

 private:
  int iterations_;
};

class Blowup : public Error {
 public:
  Blowup(double time, double norm)
      : Error("solution norm " + std::to_string(norm) + " exceeded trust radius at t = " +
              std::to_string(time)),
        time_(time),
        norm_(norm) {}

  double time() const noexcept { return time_; }
  double norm() const noexcept { return norm_; }

 private:
  double time_;
  double norm_;
};

class NonMonotoneError : public Error {
 public:
  using Error::Error;
};

}  // namespace agestruct
