#pragma once

#include <stdexcept>
#include <string>

namespace cas {

// Cholesky pivot <= 0 or an otherwise non-PD matrix where PD is required.
struct NotPositiveDefinite : std::runtime_error {
    explicit NotPositiveDefinite(const std::string& what) : std::runtime_error(what) {}
};

// A constrained first direction collapsed to zero (all-zero submatrix,
// truncation removed the whole vector, or a zero pre-integration slope).
struct DegenerateDirection : std::runtime_error {
    explicit DegenerateDirection(const std::string& what) : std::runtime_error(what) {}
};

// The root-finder was handed a function that is not nondecreasing on the
// bracket, violating the documented sign condition.
struct MonotoneContractViolation : std::runtime_error {
    explicit MonotoneContractViolation(const std::string& what) : std::runtime_error(what) {}
};

// An integrand returned a non-finite value; carries the coordinate index
// that was being perturbed when the failure happened (-1 if unknown).
struct EvaluationError : std::runtime_error {
    int coordinate;
    explicit EvaluationError(const std::string& what, int coord = -1)
        : std::runtime_error(what), coordinate(coord) {}
};

} // namespace cas
