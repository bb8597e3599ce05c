#pragma once

#include <stdexcept>
#include <string>

namespace permfield {

/// Raised when exact integer arithmetic would exceed its representable range.
/// `parameter()` names the input that has to shrink.
class CapacityError : public std::runtime_error {
public:
    CapacityError(std::string parameter, const std::string& what)
        : std::runtime_error(what), parameter_(std::move(parameter)) {}

    const std::string& parameter() const { return parameter_; }

private:
    std::string parameter_;
};

/// Quadrature did not reach its target; carries the achieved error estimate.
class AccuracyError : public std::runtime_error {
public:
    AccuracyError(double achieved, const std::string& what)
        : std::runtime_error(what), achieved_(achieved) {}

    double achieved() const { return achieved_; }

private:
    double achieved_;
};

} // namespace permfield
