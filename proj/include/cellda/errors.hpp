#ifndef CELLDA_ERRORS_HPP
#define CELLDA_ERRORS_HPP

#include <stdexcept>
#include <string>

namespace cellda {

// Malformed or inconsistent input data (bad CSV, empty class, NA where
// not allowed). CLI maps this to exit code 2.
class data_error : public std::runtime_error {
public:
    explicit data_error(const std::string& msg) : std::runtime_error(msg) {}
};

// Numerical failure (non-SPD matrix, zero robust scale, divergence).
// CLI maps this to exit code 3.
class numeric_error : public std::runtime_error {
public:
    explicit numeric_error(const std::string& msg) : std::runtime_error(msg) {}
};

}  // namespace cellda

#endif
