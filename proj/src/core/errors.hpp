#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>

namespace sigmalab {

// Error taxonomy for the whole library. The C API maps these codes onto its
// status enum, so keep the two lists in sync.
enum class ErrorCode {
  invalid_argument,  // malformed input (bad grammar, null, empty tuple)
  not_prime,         // modulus failed the primality check
  domain,            // precondition violated (index out of range, t >= p, ...)
  mismatch,          // modulus or arity mismatch between operands
  undefined,         // quantity undefined at this modulus (acr needs p >= 7)
  budget,            // search refused: estimated instances exceed the budget
  internal,          // consistency check failed; indicates a library bug
};

class Error : public std::runtime_error {
public:
  Error(ErrorCode code, const std::string& what)
      : std::runtime_error(what), code_(code) {}
  ErrorCode code() const { return code_; }

private:
  ErrorCode code_;
};

// Search refusal carries the estimate so callers can pin budgets from it.
class BudgetError : public Error {
public:
  BudgetError(uint64_t required, uint64_t budget, const std::string& what)
      : Error(ErrorCode::budget, what), required_(required), budget_(budget) {}
  uint64_t required() const { return required_; }
  uint64_t budget() const { return budget_; }

private:
  uint64_t required_, budget_;
};

[[noreturn]] inline void fail(ErrorCode code, const std::string& what) {
  throw Error(code, what);
}

}  // namespace sigmalab
