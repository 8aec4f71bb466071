#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace vfalg {

class DimensionMismatch : public std::invalid_argument {
public:
    DimensionMismatch(std::size_t expected, std::size_t actual)
        : std::invalid_argument("dimension mismatch: expected " + std::to_string(expected) + ", got " +
                                std::to_string(actual)) {}
};

class CoordinateOutOfRange : public std::out_of_range {
public:
    CoordinateOutOfRange(std::size_t index, std::size_t dimension)
        : std::out_of_range("coordinate z" + std::to_string(index) + " out of range for dimension " +
                            std::to_string(dimension)) {}
};

/// A field's degree exceeds the closure cap it is being encoded against.
class DegreeCapExceeded : public std::domain_error {
public:
    DegreeCapExceeded(int degree, unsigned cap)
        : std::domain_error("degree " + std::to_string(degree) + " exceeds cap " + std::to_string(cap)) {}
};

/// An exact expansion would form more term products than its budget allows.
class ExpansionBudgetExceeded : public std::length_error {
public:
    ExpansionBudgetExceeded(std::size_t needed, std::size_t budget)
        : std::length_error("expansion needs " + std::to_string(needed) + " term products, budget is " +
                            std::to_string(budget)) {}
};

}  // namespace vfalg
