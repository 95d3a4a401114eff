#pragma once

#include <stdexcept>
#include <string>

namespace symba {

/// Caller violated a precondition (mixed algebras, foreign letters, wrong automaton class).
class UsageError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Malformed concrete syntax. `position` is a byte offset into the source.
class ParseError : public std::runtime_error {
 public:
  ParseError(const std::string& msg, std::size_t position)
      : std::runtime_error(msg + " at offset " + std::to_string(position)), position_(position) {}
  std::size_t position() const { return position_; }

 private:
  std::size_t position_;
};

/// Raised by to_positive on a negated omega-closure.
class PositiveFragmentError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

/// A closure (DFA, ABA, AElim) grew past its configured cap.
class StateCapError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace symba
