#pragma once

#include <stdexcept>
#include <string>

namespace specavg {

/// Real energy coincides (numerically) with an eigenvalue of the operator
/// being inverted.
class singular_system_error : public std::runtime_error {
public:
    explicit singular_system_error(const std::string& what) : std::runtime_error(what) {}
};

/// Energy too close to the spectrum of the unperturbed window operator for
/// the Birman-Schwinger construction.
class resonance_error : public std::runtime_error {
public:
    explicit resonance_error(const std::string& what) : std::runtime_error(what) {}
};

/// Vanishing denominator in a boundary-condition formula, or a transfer
/// entry too small to divide by.
class degenerate_boundary_error : public std::runtime_error {
public:
    explicit degenerate_boundary_error(const std::string& what) : std::runtime_error(what) {}
};

} // namespace specavg
