#include "experiment.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <set>
#include <vector>

#include "specavg/averaging.hpp"
#include "specavg/green.hpp"
#include "specavg/identities.hpp"
#include "specavg/jacobi.hpp"
#include "specavg/pruefer.hpp"
#include "specavg/rng.hpp"
#include "specavg/version.hpp"
#include "specavg/wegner.hpp"

namespace specavg::cli {

namespace {

using nlohmann::json;

// ---------- config plumbing ----------

void check_keys(const json& obj, const std::set<std::string>& allowed, const std::string& where) {
    for (const auto& item : obj.items())
        if (!allowed.contains(item.key()))
            throw config_error("unknown key \"" + item.key() + "\" in " + where);
}

const json& need(const json& obj, const char* key, const std::string& where) {
    if (!obj.contains(key))
        throw config_error("missing key \"" + std::string(key) + "\" in " + where);
    return obj.at(key);
}

double need_number(const json& obj, const char* key, const std::string& where) {
    const json& v = need(obj, key, where);
    if (!v.is_number())
        throw config_error("key \"" + std::string(key) + "\" in " + where + " must be a number");
    return v.get<double>();
}

long long need_integer(const json& obj, const char* key, const std::string& where) {
    const json& v = need(obj, key, where);
    if (!v.is_number_integer())
        throw config_error("key \"" + std::string(key) + "\" in " + where + " must be an integer");
    return v.get<long long>();
}

std::string need_string(const json& obj, const char* key, const std::string& where) {
    const json& v = need(obj, key, where);
    if (!v.is_string())
        throw config_error("key \"" + std::string(key) + "\" in " + where + " must be a string");
    return v.get<std::string>();
}

std::vector<double> need_number_array(const json& obj, const char* key, const std::string& where) {
    const json& v = need(obj, key, where);
    if (!v.is_array())
        throw config_error("key \"" + std::string(key) + "\" in " + where + " must be an array");
    std::vector<double> out;
    for (const json& x : v) {
        if (!x.is_number())
            throw config_error("array \"" + std::string(key) + "\" in " + where +
                               " must contain numbers only");
        out.push_back(x.get<double>());
    }
    return out;
}

void default_to(json& obj, const char* key, const json& value) {
    if (!obj.contains(key))
        obj[key] = value;
}

void validate_tail(const json& tail, const std::string& where) {
    if (!tail.is_object())
        throw config_error(where + " must be an object");
    check_keys(tail, {"type", "hoppings", "potentials"}, where);
    const std::string type = need_string(tail, "type", where);
    if (type == "free") {
        if (tail.contains("hoppings") || tail.contains("potentials"))
            throw config_error(where + ": a free tail takes no coefficient arrays");
    } else if (type == "periodic") {
        need_number_array(tail, "hoppings", where);
        need_number_array(tail, "potentials", where);
    } else {
        throw config_error(where + ": type must be \"free\" or \"periodic\"");
    }
}

void validate_model(json& model, const std::string& where) {
    if (!model.is_object())
        throw config_error(where + " must be an object");
    check_keys(model, {"free_sites", "potentials", "hoppings", "alpha", "beta", "tail"}, where);
    const bool by_size = model.contains("free_sites");
    const bool by_arrays = model.contains("potentials") || model.contains("hoppings");
    if (by_size == by_arrays)
        throw config_error(where +
                           ": give either free_sites or potentials+hoppings, not both or neither");
    if (by_size)
        need_integer(model, "free_sites", where);
    else {
        need_number_array(model, "potentials", where);
        need_number_array(model, "hoppings", where);
    }
    default_to(model, "alpha", 0.0);
    default_to(model, "beta", kHalfPi);
    need_number(model, "alpha", where);
    need_number(model, "beta", where);
    default_to(model, "tail", json{{"type", "free"}});
    validate_tail(model.at("tail"), where + ".tail");
}

void validate_grid(json& grid, const std::string& where) {
    if (!grid.is_object())
        throw config_error(where + " must be an object");
    check_keys(grid, {"emin", "emax", "points"}, where);
    need_number(grid, "emin", where);
    need_number(grid, "emax", where);
    need_integer(grid, "points", where);
}

TailDescriptor build_tail(const json& tail) {
    if (tail.at("type").get<std::string>() == "free")
        return TailDescriptor::free_laplacian();
    return TailDescriptor::periodic(tail.at("hoppings").get<std::vector<double>>(),
                                    tail.at("potentials").get<std::vector<double>>());
}

JacobiSpec build_model(const json& model) {
    const double alpha = model.at("alpha").get<double>();
    const double beta = model.at("beta").get<double>();
    const TailDescriptor tail = build_tail(model.at("tail"));
    if (model.contains("free_sites"))
        return JacobiSpec::free_laplacian(static_cast<int>(model.at("free_sites").get<long long>()))
            .with_boundary(alpha, beta)
            .with_tail(tail);
    return JacobiSpec(model.at("potentials").get<std::vector<double>>(),
                      model.at("hoppings").get<std::vector<double>>(), alpha, beta, tail);
}

std::vector<double> build_grid(const json& grid) {
    const double emin = grid.at("emin").get<double>();
    const double emax = grid.at("emax").get<double>();
    const long long points = grid.at("points").get<long long>();
    if (points < 1)
        throw precondition_error("grid.points must be at least 1");
    if (points == 1)
        return {emin};
    if (!(emin < emax))
        throw precondition_error("grid needs emin < emax for more than one point");
    std::vector<double> out;
    out.reserve(static_cast<std::size_t>(points));
    for (long long i = 0; i < points; ++i)
        out.push_back(emin + (emax - emin) * static_cast<double>(i) /
                                 static_cast<double>(points - 1));
    return out;
}

// ---------- output plumbing ----------

struct Table {
    std::vector<std::string> columns;
    json rows = json::array();
};

std::string fmt17(double x) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.17g", x);
    return buf;
}

std::string render_cell(const json& v) {
    if (v.is_number_float())
        return fmt17(v.get<double>());
    if (v.is_number_integer())
        return std::to_string(v.get<long long>());
    if (v.is_boolean())
        return v.get<bool>() ? "true" : "false";
    return v.get<std::string>();
}

std::string to_csv(const Table& table) {
    std::string out;
    for (std::size_t i = 0; i < table.columns.size(); ++i) {
        if (i)
            out += ',';
        out += table.columns[i];
    }
    out += '\n';
    for (const json& row : table.rows) {
        for (std::size_t i = 0; i < table.columns.size(); ++i) {
            if (i)
                out += ',';
            out += render_cell(row.at(table.columns[i]));
        }
        out += '\n';
    }
    return out;
}

void write_file(const std::string& path, const std::string& text) {
    std::ofstream stream(path, std::ios::binary);
    if (!stream)
        throw precondition_error("cannot open output path: " + path);
    stream << text;
    if (!stream)
        throw precondition_error("failed writing output path: " + path);
}

Table density_table(const DensityEstimate& est) {
    Table table;
    table.columns = {"energy", "value", "stderr", "method"};
    for (std::size_t i = 0; i < est.energies.size(); ++i)
        table.rows.push_back({{"energy", est.energies[i]},
                              {"value", est.values[i]},
                              {"stderr", est.stderrs[i]},
                              {"method", est.method}});
    return table;
}

// ---------- kinds ----------

Table run_carmona(const json& config, json& flags) {
    const JacobiSpec spec = build_model(config.at("model"));
    const std::vector<double> grid = build_grid(config.at("grid"));
    std::vector<std::array<double, 2>> windows;
    for (const json& w : config.at("windows")) {
        if (!w.is_array() || w.size() != 2 || !w[0].is_number() || !w[1].is_number())
            throw config_error("windows must be an array of [lo, hi] number pairs");
        windows.push_back({w[0].get<double>(), w[1].get<double>()});
    }
    const CarmonaResult result =
        carmona_density(spec, spec.alpha(), grid, windows,
                        static_cast<int>(config.at("truncation").get<long long>()));
    flags["converged"] = result.density.converged;
    flags["stability"] = result.density.stability;
    flags["window_integrals"] = result.window_integrals;
    flags["window_stability"] = result.window_stability;
    return density_table(result.density);
}

Table run_beta_average(const json& config, json& flags) {
    const JacobiSpec spec = build_model(config.at("model"));
    DensityEstimate est;
    est.energies = build_grid(config.at("grid"));
    est.method = "beta-average";
    est.truncation = spec.size();
    for (double e : est.energies)
        est.values.push_back(beta_averaged_density(spec, e, spec.alpha()));
    est.stderrs.assign(est.energies.size(), 0.0);
    est.validate();
    flags["converged"] = true;
    return density_table(est);
}

Table run_identities(const json& config, json& flags) {
    const auto checks =
        run_identity_battery(static_cast<int>(config.at("specs").get<long long>()),
                             static_cast<int>(config.at("energies").get<long long>()),
                             config.at("seed").get<std::uint64_t>());
    Table table;
    table.columns = {"name", "max_residual", "tolerance", "pass"};
    bool all_pass = true;
    for (const IdentityCheck& c : checks) {
        table.rows.push_back({{"name", c.name},
                              {"max_residual", c.max_residual},
                              {"tolerance", c.tolerance},
                              {"pass", c.pass}});
        all_pass = all_pass && c.pass;
    }
    flags["all_pass"] = all_pass;
    return table;
}

Table run_birman_schwinger(const json& config, json& flags) {
    const JacobiSpec base = build_model(config.at("model"));
    const PerturbationW w(config.at("weights").get<std::vector<double>>());
    const BirmanSchwingerReport report = certify_theorem_conditions(
        base, w, config.at("energy").get<double>(), config.at("mu_lo").get<double>(),
        config.at("mu_hi").get<double>());

    Table table;
    table.columns = {"name", "value"};
    const auto add = [&table](const std::string& name, json value) {
        table.rows.push_back({{"name", name}, {"value", std::move(value)}});
    };
    add("energy", report.energy);
    add("mu_lo", report.mu_lo);
    add("mu_hi", report.mu_hi);
    for (std::size_t i = 0; i < report.k_eigenvalues.size(); ++i)
        add("k_eigenvalue_" + std::to_string(i), report.k_eigenvalues[i]);
    for (std::size_t i = 0; i < report.crossing_mus.size(); ++i)
        add("crossing_mu_" + std::to_string(i), report.crossing_mus[i]);
    add("adjacent_positive_pair", report.adjacent_positive_pair);
    add("condition_a", report.condition_a);
    add("condition_b", report.condition_b.has_value()
                           ? json(*report.condition_b ? "true" : "false")
                           : json("not-evaluable"));
    add("phase_rotation", report.phase_rotation);
    add("rotation_exceeds_pi", report.rotation_exceeds_pi);
    flags["condition_b_evaluable"] = report.condition_b.has_value();
    return table;
}

Table run_one_param(const json& config, json& flags) {
    const JacobiSpec base = build_model(config.at("model"));
    const PerturbationW w(config.at("weights").get<std::vector<double>>());
    const AveragedDensityResult result = one_parameter_averaged_density(
        base, w, config.at("mu_lo").get<double>(), config.at("mu_hi").get<double>(),
        build_grid(config.at("grid")), static_cast<int>(config.at("truncation").get<long long>()),
        static_cast<int>(config.at("mu_nodes").get<long long>()));
    flags["converged"] = result.density.converged;
    flags["stability"] = result.density.stability;
    flags["certified"] = result.certified;
    return density_table(result.density);
}

Table run_wegner_mc(json& config, json& flags) {
    const double lambda = config.at("lambda").get<double>();
    const std::vector<double> interval = config.at("interval").get<std::vector<double>>();
    if (interval.size() != 2)
        throw config_error("interval must be [lo, hi]");
    int n_sites = static_cast<int>(config.at("n_sites").get<long long>());
    if (n_sites == 0) {
        n_sites = choose_n_sites(lambda, interval[0], interval[1]);
        config["n_sites"] = n_sites; // resolved value goes to the sidecar
    }
    int length = static_cast<int>(config.at("length").get<long long>());
    if (length == 0) {
        length = 4 * n_sites;
        config["length"] = length;
    }
    const RandomModelSpec model(lambda, n_sites, length, interval[0], interval[1],
                                build_tail(config.at("tail")));
    const DensityEstimate est = averaged_density_mc(
        model, static_cast<int>(config.at("samples").get<long long>()),
        build_grid(config.at("grid")), config.at("seed").get<std::uint64_t>(),
        static_cast<int>(config.at("threads").get<long long>()));
    flags["converged"] = est.converged;
    flags["resolved_n_sites"] = n_sites;
    flags["resolved_length"] = length;
    return density_table(est);
}

Table run_wegner_scaling(const json& config, json& flags) {
    const std::vector<double> lambdas = config.at("lambdas").get<std::vector<double>>();
    const double energy = config.at("energy").get<double>();
    const int samples = static_cast<int>(config.at("samples").get<long long>());
    const std::uint64_t seed = config.at("seed").get<std::uint64_t>();
    if (lambdas.empty())
        throw precondition_error("wegner-scaling needs at least one lambda");
    if (samples < 1)
        throw precondition_error("wegner-scaling needs at least one sample");

    Table table;
    table.columns = {"lambda", "n_sites", "median_abs_residual", "scaled_residual"};
    double median_lo = std::numeric_limits<double>::infinity(), median_hi = 0.0;
    for (std::size_t li = 0; li < lambdas.size(); ++li) {
        const double lambda = lambdas[li];
        if (!(lambda > 0.0))
            throw precondition_error("wegner-scaling lambdas must be positive");
        const int n = static_cast<int>(std::lround(1.0 / (lambda * lambda)));
        std::vector<double> residuals(static_cast<std::size_t>(samples));
        for (int s = 0; s < samples; ++s) {
            const auto v = sample_potential(
                derive_seed(seed, li * static_cast<std::uint64_t>(samples) +
                                      static_cast<std::uint64_t>(s)),
                n);
            residuals[static_cast<std::size_t>(s)] =
                std::abs(expansion_residual(lambda, v.values, energy));
        }
        std::sort(residuals.begin(), residuals.end());
        const std::size_t mid = residuals.size() / 2;
        const double median = residuals.size() % 2 == 1
                                  ? residuals[mid]
                                  : 0.5 * (residuals[mid - 1] + residuals[mid]);
        median_lo = std::min(median_lo, median);
        median_hi = std::max(median_hi, median);
        table.rows.push_back({{"lambda", lambda},
                              {"n_sites", n},
                              {"median_abs_residual", median},
                              {"scaled_residual", median / (n * lambda * lambda)}});
    }
    flags["median_ratio_max_over_min"] = median_lo > 0.0 ? median_hi / median_lo : 0.0;
    return table;
}

Table run_phase_histogram(json& config, json& flags) {
    const double lambda = config.at("lambda").get<double>();
    int n_sites = static_cast<int>(config.at("n_sites").get<long long>());
    if (n_sites == 0) {
        if (!(lambda > 0.0))
            throw precondition_error("phase-histogram needs n_sites when lambda is 0");
        n_sites = static_cast<int>(std::lround(1.0 / (lambda * lambda)));
        config["n_sites"] = n_sites;
    }
    const PhaseHistogram hist = phase_pushforward_histogram(
        lambda, n_sites, config.at("energy").get<double>(),
        static_cast<int>(config.at("samples").get<long long>()),
        static_cast<int>(config.at("bins").get<long long>()),
        config.at("seed").get<std::uint64_t>());
    Table table;
    table.columns = {"bin_lo", "bin_hi", "count"};
    for (std::size_t b = 0; b < hist.counts.size(); ++b)
        table.rows.push_back({{"bin_lo", hist.edges[b]},
                              {"bin_hi", hist.edges[b + 1]},
                              {"count", hist.counts[b]}});
    flags["reference"] = hist.reference;
    flags["mean_offset"] = hist.mean_offset;
    flags["std_offset"] = hist.std_offset;
    return table;
}

} // namespace

json parse_config_text(const std::string& text) {
    json parsed;
    try {
        parsed = json::parse(text);
    } catch (const json::parse_error& e) {
        throw config_error(std::string("config is not valid JSON: ") + e.what());
    }
    if (parsed.is_object() && parsed.contains("config"))
        return parsed.at("config"); // metadata sidecar: rerun its embedded config
    return parsed;
}

json resolve_config(json raw) {
    if (!raw.is_object())
        throw config_error("config must be a JSON object");
    const std::string kind = need_string(raw, "kind", "config");
    static const std::set<std::string> kinds = {
        "carmona",         "beta-average",  "identities",      "birman-schwinger",
        "one-param-average", "wegner-mc",   "wegner-scaling",  "phase-histogram"};
    if (!kinds.contains(kind))
        throw config_error("unknown experiment kind \"" + kind + "\"");

    default_to(raw, "format", "csv");
    default_to(raw, "seed", 1);
    default_to(raw, "threads", 1);
    need_string(raw, "out", "config");
    const std::string format = need_string(raw, "format", "config");
    if (format != "csv" && format != "json")
        throw config_error("format must be \"csv\" or \"json\"");
    if (!raw.at("seed").is_number_integer() || raw.at("seed").get<long long>() < 0)
        throw config_error("seed must be a nonnegative integer");
    need_integer(raw, "threads", "config");

    std::set<std::string> allowed = {"kind", "out", "format", "seed", "threads"};
    if (kind == "carmona") {
        allowed.insert({"model", "grid", "truncation", "windows"});
        default_to(raw, "windows", json::array());
        validate_model(raw.at("model"), "model");
        validate_grid(raw.at("grid"), "grid");
        need_integer(raw, "truncation", "config");
        if (!raw.at("windows").is_array())
            throw config_error("windows must be an array");
    } else if (kind == "beta-average") {
        allowed.insert({"model", "grid"});
        validate_model(raw.at("model"), "model");
        validate_grid(raw.at("grid"), "grid");
    } else if (kind == "identities") {
        allowed.insert({"specs", "energies"});
        default_to(raw, "specs", 100);
        default_to(raw, "energies", 10);
        need_integer(raw, "specs", "config");
        need_integer(raw, "energies", "config");
    } else if (kind == "birman-schwinger") {
        allowed.insert({"model", "weights", "energy", "mu_lo", "mu_hi"});
        validate_model(raw.at("model"), "model");
        need_number_array(raw, "weights", "config");
        need_number(raw, "energy", "config");
        need_number(raw, "mu_lo", "config");
        need_number(raw, "mu_hi", "config");
    } else if (kind == "one-param-average") {
        allowed.insert({"model", "weights", "mu_lo", "mu_hi", "grid", "truncation", "mu_nodes"});
        default_to(raw, "mu_nodes", 64);
        validate_model(raw.at("model"), "model");
        need_number_array(raw, "weights", "config");
        need_number(raw, "mu_lo", "config");
        need_number(raw, "mu_hi", "config");
        validate_grid(raw.at("grid"), "grid");
        need_integer(raw, "truncation", "config");
        need_integer(raw, "mu_nodes", "config");
    } else if (kind == "wegner-mc") {
        allowed.insert({"lambda", "n_sites", "length", "samples", "interval", "grid", "tail"});
        default_to(raw, "n_sites", 0);
        default_to(raw, "length", 0);
        default_to(raw, "tail", json{{"type", "free"}});
        need_number(raw, "lambda", "config");
        need_integer(raw, "n_sites", "config");
        need_integer(raw, "length", "config");
        need_integer(raw, "samples", "config");
        need_number_array(raw, "interval", "config");
        validate_grid(raw.at("grid"), "grid");
        validate_tail(raw.at("tail"), "tail");
    } else if (kind == "wegner-scaling") {
        allowed.insert({"lambdas", "energy", "samples"});
        default_to(raw, "lambdas", json::array({0.1, 0.05, 0.025}));
        default_to(raw, "energy", 0.3);
        default_to(raw, "samples", 100);
        need_number_array(raw, "lambdas", "config");
        need_number(raw, "energy", "config");
        need_integer(raw, "samples", "config");
    } else { // phase-histogram
        allowed.insert({"lambda", "n_sites", "energy", "samples", "bins"});
        default_to(raw, "n_sites", 0);
        default_to(raw, "samples", 10000);
        default_to(raw, "bins", 60);
        need_number(raw, "lambda", "config");
        need_integer(raw, "n_sites", "config");
        need_number(raw, "energy", "config");
        need_integer(raw, "samples", "config");
        need_integer(raw, "bins", "config");
    }
    check_keys(raw, allowed, "config");
    return raw;
}

void run_experiment(json config) {
    const std::string kind = config.at("kind").get<std::string>();
    json flags = json::object();
    Table table;
    try {
        if (kind == "carmona")
            table = run_carmona(config, flags);
        else if (kind == "beta-average")
            table = run_beta_average(config, flags);
        else if (kind == "identities")
            table = run_identities(config, flags);
        else if (kind == "birman-schwinger")
            table = run_birman_schwinger(config, flags);
        else if (kind == "one-param-average")
            table = run_one_param(config, flags);
        else if (kind == "wegner-mc")
            table = run_wegner_mc(config, flags);
        else if (kind == "wegner-scaling")
            table = run_wegner_scaling(config, flags);
        else
            table = run_phase_histogram(config, flags);
    } catch (const config_error&) {
        throw;
    } catch (const precondition_error&) {
        throw;
    } catch (const std::exception& e) {
        throw precondition_error(e.what());
    }

    const std::string out = config.at("out").get<std::string>();
    if (config.at("format").get<std::string>() == "csv")
        write_file(out, to_csv(table));
    else
        write_file(out, table.rows.dump(2) + "\n");

    const json sidecar{{"config", config},
                       {"flags", flags},
                       {"rows", table.rows.size()},
                       {"version", kVersion}};
    write_file(out + ".meta.json", sidecar.dump(2) + "\n");
}

} // namespace specavg::cli
