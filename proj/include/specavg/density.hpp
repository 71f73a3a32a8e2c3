#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

namespace specavg {

/// A density-of-states style result on an energy grid. Deterministic
/// estimators report stderr 0 and samples 1; Monte-Carlo estimators fill in
/// the statistical error. `stability` is the change of a probe quantity
/// under doubling the truncation, when the producing operation computes one;
/// `converged` is the producer's overall confidence flag (never a hard
/// error: the data is still returned).
struct DensityEstimate {
    std::vector<double> energies;
    std::vector<double> values;
    std::vector<double> stderrs;
    std::int64_t samples = 1;
    int truncation = 0;
    std::string method;
    double stability = 0.0;
    bool converged = true;

    void validate() const {
        if (values.size() != energies.size() || stderrs.size() != energies.size())
            throw std::logic_error("DensityEstimate: ragged columns");
        for (std::size_t i = 1; i < energies.size(); ++i)
            if (!(energies[i - 1] < energies[i]))
                throw std::logic_error("DensityEstimate: grid not strictly increasing");
        for (double v : values)
            if (v < 0.0)
                throw std::logic_error("DensityEstimate: negative density value");
        for (double s : stderrs)
            if (s < 0.0)
                throw std::logic_error("DensityEstimate: negative stderr");
    }
};

} // namespace specavg
