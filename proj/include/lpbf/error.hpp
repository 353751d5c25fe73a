#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace lpbf {

/// Malformed input text. `row` is the 1-based data row (0 when not row-specific).
class ParseError : public std::runtime_error {
public:
    ParseError(std::size_t row, const std::string& what)
        : std::runtime_error(row ? "row " + std::to_string(row) + ": " + what : what), row_(row) {}
    std::size_t row() const noexcept { return row_; }

private:
    std::size_t row_;
};

/// A value violates a domain invariant; `field` names the offending field.
class ValidationError : public std::invalid_argument {
public:
    ValidationError(std::string field, const std::string& what)
        : std::invalid_argument(field + ": " + what), field_(std::move(field)) {}
    const std::string& field() const noexcept { return field_; }

private:
    std::string field_;
};

/// Numerical failure inside a time step (linear solve, latent iteration, CFL).
class SolverError : public std::runtime_error {
public:
    SolverError(std::size_t step, const std::string& what)
        : std::runtime_error("step " + std::to_string(step) + ": " + what), step_(step) {}
    std::size_t step() const noexcept { return step_; }

private:
    std::size_t step_;
};

class DomainError : public std::domain_error {
    using std::domain_error::domain_error;
};

}  // namespace lpbf
