#pragma once

#include <stdexcept>
#include <string>

namespace hompol {

/// Invalid argument to a model operation (negative length, unknown basis name, ...).
class InputError : public std::invalid_argument {
public:
  using std::invalid_argument::invalid_argument;
};

/// Visibility requested while the distinguishable baseline vanishes.
class UndefinedVisibility : public std::domain_error {
public:
  UndefinedVisibility() : std::domain_error("visibility undefined: distinguishable coincidence rate is zero") {}
};

/// Crossed-polarizer samples carry no information about the phase.
class UnidentifiableError : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

} // namespace hompol
