#pragma once

#include <stdexcept>
#include <string>

namespace dixt {

// Numeric values mirror the dixt_status codes of the C API.
enum class ErrorCode : int {
  InvalidArgument = 1,
  Pole = 2,
  Overflow = 3,
  OrderTooLarge = 4,
  AccuracyLoss = 5,
  BudgetExhausted = 6,
  NonFiniteIntegrand = 7,
  IndexOutOfRange = 8,
  InsufficientDecay = 9,
  PrecisionLoss = 10,
  NonDecay = 11,
  NonFiniteTerm = 12,
};

const char* to_string(ErrorCode code) noexcept;

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what)
      : std::runtime_error(what), code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

}  // namespace dixt
