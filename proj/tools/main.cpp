#include <cstdint>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>

#include <CLI11.hpp>
#include <json.hpp>

#include "experiment.hpp"

namespace {

int emit_error(int exit_code, const char* category, const std::string& message) {
    const nlohmann::json record{
        {"error", {{"category", category}, {"exit_code", exit_code}, {"message", message}}}};
    std::cerr << record.dump() << "\n";
    return exit_code;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"specavg experiment runner: spectral-averaging batch experiments "
                 "for 1-D Jacobi operators"};
    std::string config_path, out, format;
    std::uint64_t seed = 0;
    int threads = 0, n_sites = 0, length = 0, samples = 0, grid_points = 0;
    double lambda = 0.0, emin = 0.0, emax = 0.0;

    app.add_option("--config", config_path,
                   "experiment config (JSON), or a .meta.json sidecar of a previous run")
        ->required();
    app.add_option("--out", out, "output table path (overrides config)");
    app.add_option("--format", format, "csv or json (overrides config)");
    app.add_option("--seed", seed, "RNG seed (overrides config)");
    app.add_option("--threads", threads, "worker threads (overrides config)");
    app.add_option("--lambda", lambda, "disorder coupling (overrides config)");
    app.add_option("--n-sites", n_sites, "window size (overrides config)");
    app.add_option("--length", length, "truncation length (overrides config)");
    app.add_option("--samples", samples, "Monte-Carlo samples (overrides config)");
    app.add_option("--emin", emin, "energy grid lower edge (overrides config)");
    app.add_option("--emax", emax, "energy grid upper edge (overrides config)");
    app.add_option("--grid", grid_points, "energy grid point count (overrides config)");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        return emit_error(2, "config", e.what());
    }

    try {
        std::ifstream in(config_path, std::ios::binary);
        if (!in)
            throw specavg::cli::config_error("cannot read config file: " + config_path);
        std::stringstream buffer;
        buffer << in.rdbuf();
        nlohmann::json config = specavg::cli::parse_config_text(buffer.str());
        if (!config.is_object())
            throw specavg::cli::config_error("config must be a JSON object");

        if (app.count("--out"))
            config["out"] = out;
        if (app.count("--format"))
            config["format"] = format;
        if (app.count("--seed"))
            config["seed"] = seed;
        if (app.count("--threads"))
            config["threads"] = threads;
        if (app.count("--lambda"))
            config["lambda"] = lambda;
        if (app.count("--n-sites"))
            config["n_sites"] = n_sites;
        if (app.count("--length"))
            config["length"] = length;
        if (app.count("--samples"))
            config["samples"] = samples;
        if (app.count("--emin") || app.count("--emax") || app.count("--grid")) {
            if (!config.contains("grid") || !config["grid"].is_object())
                config["grid"] = nlohmann::json::object();
            if (app.count("--emin"))
                config["grid"]["emin"] = emin;
            if (app.count("--emax"))
                config["grid"]["emax"] = emax;
            if (app.count("--grid"))
                config["grid"]["points"] = grid_points;
        }

        specavg::cli::run_experiment(specavg::cli::resolve_config(std::move(config)));
        return 0;
    } catch (const specavg::cli::config_error& e) {
        return emit_error(2, "config", e.what());
    } catch (const specavg::cli::precondition_error& e) {
        return emit_error(3, "precondition", e.what());
    } catch (const std::exception& e) {
        return emit_error(3, "precondition", e.what());
    }
}
