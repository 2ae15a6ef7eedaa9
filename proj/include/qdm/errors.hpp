#pragma once

#include <sstream>
#include <stdexcept>
#include <string>

namespace qdm {

// Base for every failure raised by the library. Subclasses carry enough
// context in what() to identify the offending input.
class Error : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

// Argument outside the mathematical domain of a formula (E <= 0, d <= 0, ...).
class DomainError : public Error {
public:
  using Error::Error;
};

// Level ordering that makes a phonon channel uphill or a gap non-positive.
class GeometryError : public Error {
public:
  using Error::Error;
};

// Generator admits more than one stationary state.
class DegenerateSteadyStateError : public Error {
public:
  using Error::Error;
};

class NumericalError : public Error {
public:
  NumericalError(const std::string& what, double condition_estimate = 0.0)
      : Error(what), condition_estimate_(condition_estimate) {}
  double condition_estimate() const noexcept { return condition_estimate_; }

private:
  double condition_estimate_;
};

// rho55 or rho66 underflowed; the log term of the photovoltage is undefined.
class VoltageUndefinedError : public Error {
public:
  using Error::Error;
};

// Power maximum sits on the edge of the load grid.
class BoundaryMaximumError : public Error {
public:
  using Error::Error;
};

class ConfigError : public Error {
public:
  using Error::Error;
};

namespace detail {

inline std::string fmt_g(double v) {
  std::ostringstream os;
  os.precision(6);
  os << v;
  return os.str();
}

template <typename E>
[[noreturn]] void rethrow_as(const E& e, const std::string& context) {
  throw E(context + ": " + e.what());
}

}  // namespace detail

// Rethrows the exception being handled with `context` prepended, keeping its
// type. Must be called from inside a catch block.
[[noreturn]] inline void rethrow_with_context(const std::string& context) {
  try {
    throw;
  } catch (const NumericalError& e) {
    throw NumericalError(context + ": " + e.what(), e.condition_estimate());
  } catch (const DegenerateSteadyStateError& e) {
    detail::rethrow_as(e, context);
  } catch (const VoltageUndefinedError& e) {
    detail::rethrow_as(e, context);
  } catch (const BoundaryMaximumError& e) {
    detail::rethrow_as(e, context);
  } catch (const GeometryError& e) {
    detail::rethrow_as(e, context);
  } catch (const DomainError& e) {
    detail::rethrow_as(e, context);
  } catch (const ConfigError& e) {
    detail::rethrow_as(e, context);
  } catch (const Error& e) {
    detail::rethrow_as(e, context);
  }
}

}  // namespace qdm
