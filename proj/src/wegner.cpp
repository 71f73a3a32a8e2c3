#include "specavg/wegner.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

#include "specavg/pruefer.hpp"
#include "specavg/rng.hpp"
#include "specavg/util.hpp"

namespace specavg {

namespace {

constexpr double kChooseMargin = 0.2;
constexpr int kChooseGridPoints = 17;
constexpr int kChooseCap = 1000000;

JacobiSpec constant_window(double level, int n_sites) {
    return JacobiSpec(std::vector<double>(static_cast<std::size_t>(n_sites), level),
                      std::vector<double>(static_cast<std::size_t>(n_sites - 1), 1.0));
}

double final_modified_phase(const JacobiSpec& spec, double energy, int n_sites) {
    return modified_pruefer_flow(spec, energy, 0.0, n_sites).back().theta;
}

} // namespace

RandomModelSpec::RandomModelSpec(double lambda, int n_sites, int truncation,
                                 double interval_lo, double interval_hi,
                                 TailDescriptor tail)
    : lambda_(lambda), n_sites_(n_sites), truncation_(truncation),
      interval_lo_(interval_lo), interval_hi_(interval_hi), tail_(std::move(tail)) {
    if (!(lambda > 0.0 && lambda < 4.0))
        throw std::invalid_argument("RandomModelSpec: lambda must lie in (0, 4)");
    if (n_sites < 1)
        throw std::invalid_argument("RandomModelSpec: need at least one site");
    if (truncation <= n_sites)
        throw std::invalid_argument("RandomModelSpec: truncation must exceed the window");
    if (!(interval_lo <= interval_hi))
        throw std::invalid_argument("RandomModelSpec: empty energy interval");
    if (!(interval_lo > -2.0 + lambda / 2.0 && interval_hi < 2.0 - lambda / 2.0))
        throw std::invalid_argument(
            "RandomModelSpec: interval closure must lie in (-2+lambda/2, 2-lambda/2)");
}

PotentialSample sample_potential(std::uint64_t seed, int n) {
    if (n < 1)
        throw std::invalid_argument("sample_potential: need n >= 1");
    PotentialSample sample;
    sample.seed = seed;
    sample.values.reserve(static_cast<std::size_t>(n));
    SplitMix64 rng(seed);
    for (int i = 0; i < n; ++i)
        sample.values.push_back(rng.next_centered_uniform());
    return sample;
}

JacobiSpec random_operator(const RandomModelSpec& model, const std::vector<double>& v) {
    if (static_cast<int>(v.size()) != model.n_sites())
        throw std::invalid_argument("random_operator: sample length must match the window");
    std::vector<double> potentials(v.size());
    for (std::size_t i = 0; i < v.size(); ++i)
        potentials[i] = model.lambda() * v[i];
    return JacobiSpec(std::move(potentials),
                      std::vector<double>(v.size() - 1, 1.0), 0.0, kHalfPi, model.tail());
}

double phase_spread(double lambda, int n_sites, double energy) {
    if (!(lambda >= 0.0))
        throw std::invalid_argument("phase_spread: lambda must be nonnegative");
    if (n_sites < 1)
        throw std::invalid_argument("phase_spread: need at least one site");
    if (!(std::abs(energy) < 2.0 - lambda / 2.0))
        throw std::domain_error("phase_spread: energy must lie in (-2+lambda/2, 2-lambda/2)");
    const double top = final_modified_phase(constant_window(lambda / 2.0, n_sites), energy, n_sites);
    const double bottom =
        final_modified_phase(constant_window(-lambda / 2.0, n_sites), energy, n_sites);
    return top - bottom;
}

int choose_n_sites(double lambda, double interval_lo, double interval_hi) {
    if (!(lambda > 0.0))
        throw std::invalid_argument("choose_n_sites: lambda must be positive");
    if (!(interval_lo <= interval_hi))
        throw std::invalid_argument("choose_n_sites: empty energy interval");
    std::vector<double> grid;
    if (interval_lo == interval_hi) {
        grid.push_back(interval_lo);
    } else {
        const double step = (interval_hi - interval_lo) / (kChooseGridPoints - 1);
        for (int i = 0; i < kChooseGridPoints; ++i)
            grid.push_back(interval_lo + i * step);
    }
    const auto spread_ok = [&](int n) {
        for (double e : grid)
            if (!(phase_spread(lambda, n, e) > kPi + kChooseMargin))
                return false;
        return true;
    };

    int hi = 1;
    while (!spread_ok(hi)) {
        hi *= 2;
        if (hi > kChooseCap)
            throw std::runtime_error(
                "choose_n_sites: no window up to 1e6 sites reaches the spread target for lambda=" +
                std::to_string(lambda));
    }
    int lo = hi / 2; // spread_ok(lo) false (or lo == 0)
    while (hi - lo > 1) {
        const int mid = lo + (hi - lo) / 2;
        if (spread_ok(mid))
            hi = mid;
        else
            lo = mid;
    }
    // the spread is in practice monotone in the window size, but the search
    // only assumed it; make minimality unconditional
    while (hi > 1 && spread_ok(hi - 1))
        --hi;
    return hi;
}

DensityEstimate averaged_density_mc(const RandomModelSpec& model, int samples,
                                    const std::vector<double>& grid, std::uint64_t seed,
                                    int threads) {
    if (samples < 100)
        throw std::invalid_argument("averaged_density_mc: need at least 100 samples");
    if (grid.empty())
        throw std::invalid_argument("averaged_density_mc: empty energy grid");

    const int n_grid = static_cast<int>(grid.size());
    const int length = model.truncation();
    std::vector<double> slots(static_cast<std::size_t>(samples) * static_cast<std::size_t>(n_grid));
    parallel_for(samples, threads, [&](int s) {
        const PotentialSample sample =
            sample_potential(derive_seed(seed, static_cast<std::uint64_t>(s)), model.n_sites());
        const JacobiSpec spec = random_operator(model, sample.values);
        for (int g = 0; g < n_grid; ++g) {
            const auto states = pruefer_flow(spec, grid[static_cast<std::size_t>(g)], 0.0, length);
            slots[static_cast<std::size_t>(s) * static_cast<std::size_t>(n_grid) +
                  static_cast<std::size_t>(g)] =
                std::exp(-2.0 * states.back().log_radius) / kPi;
        }
    });

    DensityEstimate out;
    out.energies = grid;
    out.method = "wegner-mc";
    out.truncation = length;
    out.samples = samples;
    std::vector<double> column(static_cast<std::size_t>(samples));
    std::vector<double> squares(static_cast<std::size_t>(samples));
    for (int g = 0; g < n_grid; ++g) {
        for (int s = 0; s < samples; ++s) {
            const double x = slots[static_cast<std::size_t>(s) * static_cast<std::size_t>(n_grid) +
                                   static_cast<std::size_t>(g)];
            column[static_cast<std::size_t>(s)] = x;
            squares[static_cast<std::size_t>(s)] = x * x;
        }
        const double mean = pairwise_sum(column) / samples;
        const double sum_sq = pairwise_sum(squares);
        const double var = std::max(0.0, (sum_sq - samples * mean * mean) / (samples - 1));
        out.values.push_back(mean);
        out.stderrs.push_back(std::sqrt(var / samples));
    }
    out.converged = true;
    for (std::size_t i = 0; i < out.values.size(); ++i)
        if (out.stderrs[i] > 0.25 * out.values[i] + 1e-6)
            out.converged = false;
    out.validate();
    return out;
}

double expansion_residual(double lambda, const std::vector<double>& v, double energy) {
    if (!(lambda >= 0.0))
        throw std::invalid_argument("expansion_residual: lambda must be nonnegative");
    if (v.empty())
        throw std::invalid_argument("expansion_residual: empty potential sample");
    const int n = static_cast<int>(v.size());
    std::vector<double> potentials(v.size());
    for (std::size_t i = 0; i < v.size(); ++i)
        potentials[i] = lambda * v[i];
    const JacobiSpec spec(std::move(potentials), std::vector<double>(v.size() - 1, 1.0));
    const ModifiedMap map(energy);
    const auto states = modified_pruefer_flow(spec, energy, 0.0, n);
    double model = states.front().theta + n * map.k();
    for (int i = 1; i <= n; ++i)
        model += lambda * v[static_cast<std::size_t>(i - 1)] *
                 (1.0 + std::cos(2.0 * states[static_cast<std::size_t>(i - 1)].theta));
    return states.back().theta - model;
}

PhaseHistogram phase_pushforward_histogram(double lambda, int n_sites, double energy,
                                           int samples, int bins, std::uint64_t seed) {
    if (samples < 1000)
        throw std::invalid_argument("phase_pushforward_histogram: need at least 1000 samples");
    if (bins < 1)
        throw std::invalid_argument("phase_pushforward_histogram: need at least one bin");
    if (!(lambda >= 0.0))
        throw std::invalid_argument("phase_pushforward_histogram: lambda must be nonnegative");
    if (n_sites < 1)
        throw std::invalid_argument("phase_pushforward_histogram: need at least one site");
    const ModifiedMap map(energy);

    std::vector<double> phases(static_cast<std::size_t>(samples));
    for (int s = 0; s < samples; ++s) {
        const PotentialSample sample =
            sample_potential(derive_seed(seed, static_cast<std::uint64_t>(s)), n_sites);
        std::vector<double> potentials(sample.values.size());
        for (std::size_t i = 0; i < potentials.size(); ++i)
            potentials[i] = lambda * sample.values[i];
        const JacobiSpec spec(std::move(potentials),
                              std::vector<double>(sample.values.size() - 1, 1.0));
        phases[static_cast<std::size_t>(s)] = final_modified_phase(spec, energy, n_sites);
    }

    PhaseHistogram hist;
    hist.samples = samples;
    hist.reference = map.lift(0.0) + n_sites * map.k();

    std::vector<double> offsets(phases.size()), squares(phases.size());
    for (std::size_t i = 0; i < phases.size(); ++i)
        offsets[i] = phases[i] - hist.reference;
    hist.mean_offset = pairwise_sum(offsets) / samples;
    for (std::size_t i = 0; i < offsets.size(); ++i)
        squares[i] = (offsets[i] - hist.mean_offset) * (offsets[i] - hist.mean_offset);
    hist.std_offset = std::sqrt(pairwise_sum(squares) / (samples - 1));

    double lo = *std::min_element(phases.begin(), phases.end());
    double hi = *std::max_element(phases.begin(), phases.end());
    if (hi - lo < 1e-12) {
        lo -= 0.5;
        hi += 0.5;
    }
    hist.edges.resize(static_cast<std::size_t>(bins) + 1);
    for (int b = 0; b <= bins; ++b)
        hist.edges[static_cast<std::size_t>(b)] = lo + (hi - lo) * b / bins;
    hist.counts.assign(static_cast<std::size_t>(bins), 0);
    for (double phase : phases) {
        const int b = std::min(bins - 1,
                               static_cast<int>(std::floor((phase - lo) / (hi - lo) * bins)));
        ++hist.counts[static_cast<std::size_t>(std::max(0, b))];
    }
    return hist;
}

} // namespace specavg
