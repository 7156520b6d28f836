#ifndef PSTS_ERROR_HPP
#define PSTS_ERROR_HPP

#include <cstddef>
#include <stdexcept>
#include <string>

namespace psts {

// Input that violates a model invariant (bad ids, negative power, ...).
class ValidationError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// Malformed text input; carries the 1-based line number.
class ParseError : public ValidationError {
public:
    ParseError(std::size_t line, const std::string& what)
        : ValidationError("line " + std::to_string(line) + ": " + what), line_(line)
    {
    }
    std::size_t line() const noexcept { return line_; }

private:
    std::size_t line_;
};

} // namespace psts

#endif
