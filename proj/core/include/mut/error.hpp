#pragma once

#include <stdexcept>
#include <string>

namespace mut {

/// Malformed balanced-parentheses input.
class ParseError : public std::runtime_error {
public:
    ParseError(const std::string& what, std::size_t position)
        : std::runtime_error(what + " at position " + std::to_string(position)),
          position_(position) {}
    std::size_t position() const noexcept { return position_; }

private:
    std::size_t position_;
};

/// Caller passed something outside an operation's domain.
class ArgumentError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

/// Exhaustive search refused because the input exceeds the configured cap.
class SizeError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// A precondition stated by a lemma (e.g. a budget on a sum) did not hold.
class ContractViolation : public std::logic_error {
public:
    using std::logic_error::logic_error;
};

/// Bit-level decoding failed (truncated or malformed code word / label).
class DecodeError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

}  // namespace mut
