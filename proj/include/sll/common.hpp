#pragma once

#include <stdexcept>
#include <string>

namespace sll {

// Parameter outside its documented domain (bad k, alpha, index, ...).
struct ParameterError : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

// Genotype length does not match the problem length.
struct DimensionError : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

// Consecutive equal function values; monotonicity profile is undefined.
struct PlateauError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Theoretical pair distribution sits at the independence point; no
// population size separates dependent from independent pairs.
struct UndecidableError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct InsufficientSampleError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

}  // namespace sll
