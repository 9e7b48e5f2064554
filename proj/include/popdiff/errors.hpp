#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>
#include <utility>

namespace popdiff {

// Base of every error thrown by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// A point index or cardinality outside its admissible range.
class RangeError : public Error {
 public:
  using Error::Error;
};

// Two sets over different groups were combined.
class DimensionError : public Error {
 public:
  using Error::Error;
};

// A parameter outside the domain of an operation (c >= 1 for the lemma, ...).
class ParameterError : public Error {
 public:
  using Error::Error;
};

// Malformed F2SET text, rational string, or certificate document.
class FormatError : public Error {
 public:
  using Error::Error;
};

// The input admits no certificate at all (empty A, or 0 not popular).
class DegenerateInput : public Error {
 public:
  using Error::Error;
};

// A plan whose target sizes cannot be met by the set it is applied to.
class PlanInfeasible : public Error {
 public:
  using Error::Error;
};

// A rejection-sampling stage ran out of trials.
class RetryExhausted : public Error {
 public:
  RetryExhausted(std::string stage, std::uint64_t trials, std::string best_deficit)
      : Error("stage '" + stage + "' exhausted " + std::to_string(trials) +
              " trials (best deficit " + best_deficit + ")"),
        stage_(std::move(stage)),
        trials_(trials),
        best_deficit_(std::move(best_deficit)) {}

  const std::string& stage() const noexcept { return stage_; }
  std::uint64_t trials() const noexcept { return trials_; }
  const std::string& best_deficit() const noexcept { return best_deficit_; }

 private:
  std::string stage_;
  std::uint64_t trials_;
  std::string best_deficit_;
};

// An exact search gave up at its node budget; no partial answer is reported.
class SearchBudgetExceeded : public Error {
 public:
  using Error::Error;
};

// An inequality that holds as a theorem failed; always an upstream bug.
class InvariantViolation : public Error {
 public:
  using Error::Error;
};

}  // namespace popdiff
