#include "specavg/averaging.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

#include <Eigen/Dense>

#include "specavg/errors.hpp"
#include "specavg/pruefer.hpp"
#include "specavg/quadrature.hpp"

namespace specavg {

namespace {

constexpr int kMuTrackingNodes = 512;
constexpr double kMuBisectTol = 1e-10;

JacobiSpec perturbed(const JacobiSpec& base, const PerturbationW& w, double mu) {
    JacobiSpec out = base;
    for (int n = 1; n <= base.size(); ++n)
        out = out.with_potential(n, base.potential(n) + mu * w.weights()[static_cast<std::size_t>(n - 1)]);
    return out;
}

double spectral_scale(const std::vector<double>& evals) {
    double scale = 1.0;
    for (double ev : evals)
        scale = std::max(scale, std::abs(ev));
    return scale;
}

void require_matching_sizes(const JacobiSpec& base, const PerturbationW& w, const char* who) {
    if (w.size() != base.size())
        throw std::invalid_argument(std::string(who) + ": weight count must match the window size");
}

} // namespace

PerturbationW::PerturbationW(std::vector<double> weights) : weights_(std::move(weights)) {
    if (weights_.empty())
        throw std::invalid_argument("PerturbationW: needs at least one weight");
    for (double w : weights_)
        if (!(w >= 0.0))
            throw std::invalid_argument("PerturbationW: weights must be nonnegative");
}

bool PerturbationW::strictly_positive() const {
    return std::all_of(weights_.begin(), weights_.end(), [](double w) { return w > 0.0; });
}

std::optional<int> PerturbationW::adjacent_positive_pair() const {
    for (std::size_t m = 0; m + 1 < weights_.size(); ++m)
        if (weights_[m] > 0.0 && weights_[m + 1] > 0.0)
            return static_cast<int>(m) + 1;
    return std::nullopt;
}

BirmanSchwinger birman_schwinger(const JacobiSpec& base, const PerturbationW& w,
                                 double energy) {
    require_matching_sizes(base, w, "birman_schwinger");
    const int n = base.size();
    const std::vector<double> evals = eigenvalues(base);
    double dist = std::numeric_limits<double>::infinity();
    for (double ev : evals)
        dist = std::min(dist, std::abs(ev - energy));
    if (dist < 1e-9 * spectral_scale(evals))
        throw resonance_error("birman_schwinger: energy within 1e-9*norm of the base spectrum");

    Eigen::MatrixXd shifted = -build_finite_operator(base);
    shifted.diagonal().array() += energy;
    const Eigen::MatrixXd resolvent =
        shifted.partialPivLu().solve(Eigen::MatrixXd::Identity(n, n));

    Eigen::VectorXd root_w(n);
    for (int i = 0; i < n; ++i)
        root_w(i) = std::sqrt(w.weights()[static_cast<std::size_t>(i)]);
    BirmanSchwinger result;
    result.matrix = root_w.asDiagonal() * resolvent * root_w.asDiagonal();

    const Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(result.matrix,
                                                                Eigen::EigenvaluesOnly);
    result.eigenvalues.assign(solver.eigenvalues().data(), solver.eigenvalues().data() + n);
    return result;
}

std::vector<double> crossing_mus(const JacobiSpec& base, const PerturbationW& w,
                                 double energy) {
    if (!w.strictly_positive())
        throw std::invalid_argument("crossing_mus: requires strictly positive weights");
    const BirmanSchwinger bs = birman_schwinger(base, w, energy);
    double top = 0.0;
    for (double ev : bs.eigenvalues)
        top = std::max(top, std::abs(ev));
    std::vector<double> mus;
    for (double ev : bs.eigenvalues)
        if (std::abs(ev) > 1e-12 * std::max(1.0, top))
            mus.push_back(1.0 / ev);
    std::sort(mus.begin(), mus.end());
    return mus;
}

BirmanSchwingerReport certify_theorem_conditions(const JacobiSpec& base,
                                                 const PerturbationW& w, double energy,
                                                 double mu_lo, double mu_hi) {
    require_matching_sizes(base, w, "certify_theorem_conditions");
    if (!(mu_lo < mu_hi))
        throw std::invalid_argument("certify_theorem_conditions: need mu_lo < mu_hi");
    if (std::abs(base.beta() - kHalfPi) > 1e-12)
        throw std::invalid_argument("certify_theorem_conditions: base must have beta = pi/2");

    BirmanSchwingerReport report;
    report.energy = energy;
    report.mu_lo = mu_lo;
    report.mu_hi = mu_hi;
    report.adjacent_positive_pair = w.adjacent_positive_pair().has_value();

    // condition (b): two consecutive crossing couplings inside the interval,
    // via the eigenvalue-reciprocal duality
    try {
        const BirmanSchwinger bs = birman_schwinger(base, w, energy);
        report.k_eigenvalues = bs.eigenvalues;
        double top = 0.0;
        for (double ev : bs.eigenvalues)
            top = std::max(top, std::abs(ev));
        for (double ev : bs.eigenvalues)
            if (std::abs(ev) > 1e-12 * std::max(1.0, top))
                report.crossing_mus.push_back(1.0 / ev);
        std::sort(report.crossing_mus.begin(), report.crossing_mus.end());
        int inside = 0;
        for (double mu : report.crossing_mus)
            if (mu_lo < mu && mu < mu_hi)
                ++inside;
        report.condition_b = inside >= 2;
    } catch (const resonance_error&) {
        report.condition_b = std::nullopt;
    }

    // condition (a): follow the eigenvalue branches over a mu grid and
    // bisect each crossing of the energy; ask for two crossings at
    // consecutive branch indices
    const int n = base.size();
    const double step = (mu_hi - mu_lo) / (kMuTrackingNodes - 1);
    std::vector<std::vector<double>> branches(static_cast<std::size_t>(kMuTrackingNodes));
    for (int i = 0; i < kMuTrackingNodes; ++i)
        branches[static_cast<std::size_t>(i)] = eigenvalues(perturbed(base, w, mu_lo + i * step));

    std::vector<std::pair<double, int>> crossings; // (mu*, branch index)
    for (int j = 0; j < n; ++j) {
        for (int i = 0; i + 1 < kMuTrackingNodes; ++i) {
            const double f_lo = branches[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)] - energy;
            const double f_hi = branches[static_cast<std::size_t>(i + 1)][static_cast<std::size_t>(j)] - energy;
            if (!(f_lo * f_hi < 0.0 || (f_lo != 0.0 && f_hi == 0.0)))
                continue;
            double lo = mu_lo + i * step, hi = lo + step, f_at_lo = f_lo;
            while (hi - lo > kMuBisectTol) {
                const double mid = 0.5 * (lo + hi);
                const double f_mid =
                    eigenvalues(perturbed(base, w, mid))[static_cast<std::size_t>(j)] - energy;
                if (f_at_lo * f_mid <= 0.0) {
                    hi = mid;
                } else {
                    lo = mid;
                    f_at_lo = f_mid;
                }
            }
            crossings.emplace_back(0.5 * (lo + hi), j);
        }
    }
    std::sort(crossings.begin(), crossings.end());
    for (std::size_t i = 0; i + 1 < crossings.size(); ++i)
        if (crossings[i + 1].second == crossings[i].second - 1)
            report.condition_a = true;

    const auto phase_at = [&](double mu) {
        return pruefer_flow(perturbed(base, w, mu), energy, base.alpha(), n).back().theta;
    };
    report.phase_rotation = phase_at(mu_hi) - phase_at(mu_lo);
    report.rotation_exceeds_pi = std::abs(report.phase_rotation) > kPi;
    return report;
}

int crossing_count_from_rotation(const JacobiSpec& base, const PerturbationW& w,
                                 double energy, double mu_lo, double mu_hi) {
    require_matching_sizes(base, w, "crossing_count_from_rotation");
    if (std::abs(base.beta() - kHalfPi) > 1e-12)
        throw std::invalid_argument("crossing_count_from_rotation: base must have beta = pi/2");
    const int n = base.size();
    const auto rungs_below = [&](double mu) {
        const double theta = pruefer_flow(perturbed(base, w, mu), energy, base.alpha(), n).back().theta;
        return static_cast<long>(std::floor((theta - kHalfPi) / kPi));
    };
    return static_cast<int>(rungs_below(mu_hi) - rungs_below(mu_lo));
}

AveragedDensityResult one_parameter_averaged_density(const JacobiSpec& base,
                                                     const PerturbationW& w,
                                                     double mu_lo, double mu_hi,
                                                     const std::vector<double>& grid,
                                                     int truncation, int mu_nodes) {
    require_matching_sizes(base, w, "one_parameter_averaged_density");
    if (!(mu_lo <= mu_hi))
        throw std::invalid_argument("one_parameter_averaged_density: need mu_lo <= mu_hi");
    if (truncation <= base.size())
        throw std::invalid_argument("one_parameter_averaged_density: truncation must exceed the window");
    if (mu_nodes < 1)
        throw std::invalid_argument("one_parameter_averaged_density: need at least one mu node");
    if (std::abs(base.alpha()) > 1e-12)
        throw std::invalid_argument("one_parameter_averaged_density: base must have alpha = 0");

    AveragedDensityResult result;
    result.density.energies = grid;
    result.density.method = "one-param-average";
    result.density.truncation = truncation;
    result.density.samples = 1;

    const auto [nodes, weights_gl] = gauss_legendre_rule(mu_nodes);
    const double half = 0.5 * (mu_hi - mu_lo), mid = 0.5 * (mu_hi + mu_lo);

    const auto integral_at = [&](double energy, int length) {
        if (half == 0.0)
            return 0.0;
        double acc = 0.0;
        for (int k = 0; k < mu_nodes; ++k) {
            const double mu = mid + half * nodes[static_cast<std::size_t>(k)];
            const JacobiSpec spec = perturbed(base, w, mu);
            const auto states = pruefer_flow(spec, energy, 0.0, length);
            acc += weights_gl[static_cast<std::size_t>(k)] *
                   std::exp(-2.0 * states.back().log_radius) / kPi;
        }
        return acc * half;
    };

    double worst_rel = 0.0;
    bool factor_two_ok = true;
    for (double e : grid) {
        const double at_l = integral_at(e, truncation);
        const double at_2l = integral_at(e, 2 * truncation);
        result.density.values.push_back(at_l);
        const double scale = std::max(at_l, at_2l);
        if (scale > 1e-12) {
            worst_rel = std::max(worst_rel, std::abs(at_l - at_2l) / scale);
            if (at_l > 2.0 * at_2l || at_2l > 2.0 * at_l)
                factor_two_ok = false;
        }
        try {
            const BirmanSchwinger bs = birman_schwinger(base, w, e);
            double top = 0.0;
            for (double ev : bs.eigenvalues)
                top = std::max(top, std::abs(ev));
            int inside = 0;
            for (double ev : bs.eigenvalues) {
                if (std::abs(ev) <= 1e-12 * std::max(1.0, top))
                    continue;
                const double mu = 1.0 / ev;
                if (mu_lo < mu && mu < mu_hi)
                    ++inside;
            }
            result.certified.push_back(inside >= 2 ? 1 : 0);
        } catch (const resonance_error&) {
            result.certified.push_back(-1);
        }
    }
    result.density.stderrs.assign(grid.size(), 0.0);
    result.density.stability = worst_rel;
    result.density.converged = factor_two_ok;
    result.density.validate();
    return result;
}

} // namespace specavg
