#ifndef CLOAKBOUND_ERRORS_HPP
#define CLOAKBOUND_ERRORS_HPP

#include <stdexcept>
#include <string>

namespace cloakbound {

/// Base class for all library errors.
class Error : public std::runtime_error {
 public:
  explicit Error(const std::string& msg) : std::runtime_error(msg) {}
};

/// Invalid or inconsistent user input (config files, region specs, model parameters).
class ConfigError : public Error {
 public:
  explicit ConfigError(const std::string& msg) : Error(msg) {}
};

/// Linear-algebra failure: singular factorization, rank defect beyond tolerance.
class NumericalError : public Error {
 public:
  explicit NumericalError(const std::string& msg) : Error(msg) {}
};

/// Evaluation of a material law at one of its real poles.
class PoleError : public Error {
 public:
  explicit PoleError(const std::string& msg) : Error(msg) {}
};

}  // namespace cloakbound

#endif
