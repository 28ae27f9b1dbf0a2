#include "dixt/error.hpp"

namespace dixt {

const char* to_string(ErrorCode code) noexcept {
  switch (code) {
    case ErrorCode::InvalidArgument: return "invalid-argument";
    case ErrorCode::Pole: return "pole";
    case ErrorCode::Overflow: return "overflow";
    case ErrorCode::OrderTooLarge: return "order-too-large";
    case ErrorCode::AccuracyLoss: return "accuracy-loss";
    case ErrorCode::BudgetExhausted: return "budget-exhausted";
    case ErrorCode::NonFiniteIntegrand: return "non-finite-integrand";
    case ErrorCode::IndexOutOfRange: return "index-out-of-range";
    case ErrorCode::InsufficientDecay: return "insufficient-decay";
    case ErrorCode::PrecisionLoss: return "precision-loss";
    case ErrorCode::NonDecay: return "non-decay";
    case ErrorCode::NonFiniteTerm: return "non-finite-term";
  }
  return "unknown";
}

}  // namespace dixt
