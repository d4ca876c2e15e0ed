#pragma once

#include <stdexcept>
#include <string>

namespace adpol {

/// Argument outside the domain of a function (z outside [0, L], wavelength <= 0, ...).
class DomainError : public std::domain_error {
public:
    explicit DomainError(const std::string& what) : std::domain_error(what) {}
};

class InvalidProfileError : public std::invalid_argument {
public:
    explicit InvalidProfileError(const std::string& what) : std::invalid_argument(what) {}
};

/// Raised when a direction is requested from a zero-length birefringence or coupling vector.
class UndefinedDirectionError : public std::domain_error {
public:
    explicit UndefinedDirectionError(const std::string& what) : std::domain_error(what) {}
};

/// A sample or profile carries a nonzero component that the selected case requires to vanish.
class CaseMismatchError : public std::invalid_argument {
public:
    explicit CaseMismatchError(const std::string& what) : std::invalid_argument(what) {}
};

class ValidationError : public std::invalid_argument {
public:
    explicit ValidationError(const std::string& what) : std::invalid_argument(what) {}
};

/// Amplitudes lost the (imaginary, real, imaginary) structure needed to map back onto a real Stokes vector.
class PhaseConventionError : public std::runtime_error {
public:
    explicit PhaseConventionError(const std::string& what) : std::runtime_error(what) {}
};

}  // namespace adpol
