#pragma once

#include <stdexcept>
#include <string>

#include <json.hpp>

namespace specavg::cli {

/// Structural problems: unparseable text, unknown kind or keys, wrong
/// value types. Exit code 2.
struct config_error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// Well-formed configs whose values violate an operation precondition, and
/// output-path failures. Exit code 3.
struct precondition_error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// Parse config text. Accepts either a bare experiment config or a metadata
/// sidecar (an object with a "config" member), so any run can be reproduced
/// straight from its sidecar.
nlohmann::json parse_config_text(const std::string& text);

/// Fill in defaults and reject structural problems. The result still may
/// contain values the library will refuse; those surface as
/// precondition_error from run_experiment.
nlohmann::json resolve_config(nlohmann::json raw);

/// Execute a resolved config: writes the primary table to config["out"]
/// (CSV or JSON per config["format"]) and the fully resolved config plus
/// convergence flags to "<out>.meta.json". Numerical non-convergence is
/// recorded in the sidecar, not treated as failure.
void run_experiment(nlohmann::json config);

} // namespace specavg::cli
