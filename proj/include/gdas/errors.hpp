#pragma once

#include <stdexcept>
#include <string>

namespace gdas {

// Base class for everything this library throws.
class error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// Graph violates a structural assumption (asymmetry, self-loop,
// non-positive weight, disconnected, too small).
class validation_error : public error {
public:
    using error::error;
};

// A parameter is outside its documented domain.
class argument_error : public error {
public:
    using error::error;
};

// The coefficient matrix of the reconstruction system is singular
// (no samples: both H'H and L annihilate the constant vector).
class singular_system_error : public error {
public:
    using error::error;
};

// Iterative solver ran out of iterations; carries the last residual.
class convergence_error : public error {
public:
    convergence_error(const std::string& what, double residual, int iterations)
        : error(what), residual(residual), iterations(iterations) {}

    double residual;
    int iterations;
};

// File or parse failure; message carries path and line where known.
class io_error : public error {
public:
    using error::error;
};

} // namespace gdas
