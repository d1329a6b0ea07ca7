#pragma once

#include <stdexcept>
#include <string>

namespace gl4lab {

// Input that violates a documented precondition (bad modulus, non-unitary
// Satake set, malformed scenario, ...).
class constraint_error : public std::invalid_argument {
public:
    explicit constraint_error(const std::string& what) : std::invalid_argument(what) {}
};

// A computation refused because it would exceed an explicit budget
// (factorization limit, enumeration size, quadrature panel cap).
class resource_error : public std::runtime_error {
public:
    explicit resource_error(const std::string& what) : std::runtime_error(what) {}
};

// Malformed text input (CSV rows, config files, scenario files).  Carries a
// 1-based line number when one is known.
class parse_error : public std::runtime_error {
public:
    parse_error(const std::string& what, long line = 0)
        : std::runtime_error(line > 0 ? "line " + std::to_string(line) + ": " + what : what),
          line_(line) {}
    long line() const { return line_; }

private:
    long line_;
};

} // namespace gl4lab
