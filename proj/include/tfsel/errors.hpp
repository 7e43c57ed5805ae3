#ifndef TFSEL_ERRORS_HPP
#define TFSEL_ERRORS_HPP

#include <stdexcept>
#include <string>

namespace tfsel {

/// Input violates a documented precondition or data invariant.
class ValidationError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Malformed record in an input file. Carries the 1-based line number.
class ParseError : public std::runtime_error {
 public:
  ParseError(std::size_t line, const std::string& what)
      : std::runtime_error("line " + std::to_string(line) + ": " + what), line_(line) {}

  std::size_t line() const noexcept { return line_; }

 private:
  std::size_t line_;
};

class IoError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace tfsel

#endif  // TFSEL_ERRORS_HPP
