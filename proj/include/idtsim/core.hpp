#pragma once

#include <cstdint>
#include <limits>
#include <stdexcept>
#include <string>

namespace idtsim {

inline constexpr double kInf = std::numeric_limits<double>::infinity();

// Conventions used throughout: exp(-inf) == 0 and 0 * inf == 0, so that a
// killed jump (value inf) contributes nothing where its weight vanishes.
inline double mul_weight(double w, double v) {
    if (w == 0.0 || v == 0.0) return 0.0;
    return w * v;
}

class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// Quadrature failed to reach the requested tolerance; carries the partial
// result so callers can decide whether it is still usable.
class NonConvergence : public Error {
public:
    NonConvergence(const std::string& what, double value, double error_estimate,
                   std::int64_t evaluations)
        : Error(what), value(value), error_estimate(error_estimate),
          evaluations(evaluations) {}
    double value;
    double error_estimate;
    std::int64_t evaluations;
};

class OutOfRange : public Error {
public:
    using Error::Error;
};

class Inconclusive : public Error {
public:
    using Error::Error;
};

class NotCompoundPoisson : public Error {
public:
    using Error::Error;
};

class NotInFhat : public Error {
public:
    using Error::Error;
};

class UnboundedSupport : public Error {
public:
    using Error::Error;
};

class ZSamplerUnavailable : public Error {
public:
    using Error::Error;
};

class MSamplerUnavailable : public Error {
public:
    using Error::Error;
};

class InverseUnavailable : public Error {
public:
    using Error::Error;
};

class UnknownFamily : public Error {
public:
    using Error::Error;
};

class AllInfinite : public Error {
public:
    using Error::Error;
};

}  // namespace idtsim
