#ifndef STA_ERRORS_HPP_
#define STA_ERRORS_HPP_

#include <stdexcept>
#include <string>

namespace sta {

// Numerical failure distinct from invalid input (std::invalid_argument).
struct NumericalError : std::runtime_error {
    explicit NumericalError(const std::string& what) : std::runtime_error(what) {}
};

struct QuadratureError : NumericalError {
    explicit QuadratureError(const std::string& what) : NumericalError(what) {}
};

struct SolverError : NumericalError {
    explicit SolverError(const std::string& what) : NumericalError(what) {}
};

struct FitError : NumericalError {
    explicit FitError(const std::string& what) : NumericalError(what) {}
};

}  // namespace sta

#endif
