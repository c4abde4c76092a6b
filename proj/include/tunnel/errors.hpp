#pragma once

#include <stdexcept>
#include <string>

namespace tunnel {

/// Argument outside the modeled domain (e.g. k > w, negative widths).
class DomainError : public std::domain_error {
public:
    using std::domain_error::domain_error;
};

/// Iterative numerics that did not reach the requested tolerance.
class ConvergenceError : public std::runtime_error {
public:
    ConvergenceError(const std::string& what, double previous, double last)
        : std::runtime_error(what), previous_(previous), last_(last) {}

    double previous_estimate() const noexcept { return previous_; }
    double last_estimate() const noexcept { return last_; }

private:
    double previous_;
    double last_;
};

/// A located peak sits on the edge of the scanned window.
class WindowError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

class IoError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

}  // namespace tunnel
