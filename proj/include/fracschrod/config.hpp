#pragma once

#include <cstdint>
#include <filesystem>
#include <stdexcept>
#include <string>
#include <vector>

#include "fracschrod/grid.hpp"
#include "fracschrod/linsolve.hpp"

#include <json.hpp>

namespace fracschrod {

class ConfigError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

enum class ProblemKind { example1, example2, custom };

std::string to_string(ProblemKind kind);
ProblemKind problem_kind_from_string(const std::string& s);

/// Full description of one invocation: problem selection, mesh, solver
/// settings and output plumbing.  `example1` fixes the domain [0,2]^2,
/// `example2` fixes [-5,5]^2; only `custom` accepts explicit bounds.
struct RunConfig {
    ProblemKind problem = ProblemKind::example2;
    double alpha = 1.5;
    double x_min = -5.0, x_max = 5.0, y_min = -5.0, y_max = 5.0;
    int mx = 0, my = 0;
    double tau = 0.05;
    double t_final = 5.0;

    SolverSettings solver;

    std::filesystem::path out_dir = "out";
    std::vector<double> snapshot_times;
    int diag_stride = 1;

    std::uint64_t seed = 0;
    int threads = 1;

    std::vector<int> levels = {16, 32, 64, 128};          ///< convergence sweep, M per level
    std::vector<double> alphas;                            ///< sweep orders; default per command
    double energy_drift_tol = 1e-8;
    double order_band_lo = 1.7;
    double order_band_hi = 2.4;

    GridSpec grid() const;
    void validate() const;  ///< throws ConfigError
};

/// Parses the flat key=value format with [section] headers; '#' and ';'
/// start comments.  Unknown sections or keys are errors.  Recognized layout:
///
///   [problem] kind alpha x_min x_max y_min y_max
///   [grid]    mx my tau t_final
///   [solver]  tol max_iter precond dense_cap
///   [output]  dir snapshot_times diag_stride
///   [run]     seed threads levels alphas energy_drift_tol order_band
RunConfig load_config(const std::filesystem::path& path);

/// Applies environment overrides (FRACSCHROD_DENSE_CAP).
void apply_env_overrides(RunConfig& config);

/// Echo used in JSON summaries.
nlohmann::json config_to_json(const RunConfig& config);

}  // namespace fracschrod
