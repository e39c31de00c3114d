// fracschrod: solver harness for the 2D Riesz space-fractional nonlinear
// Schroedinger equation.  Subcommands:
//   converge  manufactured-solution error/order sweep
//   energy    long-horizon discrete-energy table with drift check
//   run       single simulation with snapshot and diagnostics export
//
// Exit codes: 0 success, 2 configuration error, 3 solver failure,
// 4 acceptance-band failure.

#include <CLI11.hpp>
#include <json.hpp>

#include <atomic>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <mutex>
#include <optional>
#include <thread>

#include "fracschrod/config.hpp"
#include "fracschrod/diagnostics.hpp"
#include "fracschrod/frac_laplacian.hpp"
#include "fracschrod/problem.hpp"
#include "fracschrod/snapshot.hpp"
#include "fracschrod/stepper.hpp"

using namespace fracschrod;
using nlohmann::json;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitConfig = 2;
constexpr int kExitSolver = 3;
constexpr int kExitBand = 4;

std::string fmt(double v, const char* spec = "%.17g") {
    char buf[64];
    std::snprintf(buf, sizeof(buf), spec, v);
    return buf;
}

ProblemDef problem_for(const RunConfig& cfg) {
    switch (cfg.problem) {
        case ProblemKind::example1: return make_polynomial_mms_problem(cfg.alpha);
        case ProblemKind::example2: return make_gaussian_problem();
        case ProblemKind::custom: {
            // The custom kind is a zero field unless driven through the
            // library API; it exists so config plumbing can be exercised.
            ProblemDef p;
            p.initial = [](double, double) { return Complex{0.0, 0.0}; };
            return p;
        }
    }
    throw ConfigError("unreachable problem kind");
}

/// Runs `rows` jobs on a fixed-width pool; results land by index, so output
/// order never depends on scheduling.
void parallel_rows(int threads, int rows, const std::function<void(int)>& job) {
    if (threads <= 1 || rows <= 1) {
        for (int i = 0; i < rows; ++i) job(i);
        return;
    }
    std::atomic<int> next{0};
    std::vector<std::thread> pool;
    const int width = std::min(threads, rows);
    pool.reserve(width);
    for (int w = 0; w < width; ++w) {
        pool.emplace_back([&]() {
            for (int i = next.fetch_add(1); i < rows; i = next.fetch_add(1)) job(i);
        });
    }
    for (std::thread& t : pool) t.join();
}

// ---------------------------------------------------------------------------
// converge

struct ConvergeRow {
    double alpha = 0.0;
    int m = 0;
    bool ok = false;
    double error = 0.0;
    int max_iterations = 0;
    std::string message;
};

int cmd_converge(RunConfig cfg) {
    if (cfg.alphas.empty()) cfg.alphas = {1.2, 1.5, 1.9, 2.0};
    if (cfg.levels.size() < 1) throw ConfigError("converge: need at least one level");
    const double t_final = (cfg.t_final > 0.0) ? cfg.t_final : 1.0;

    std::filesystem::create_directories(cfg.out_dir);

    const int n_rows = static_cast<int>(cfg.alphas.size() * cfg.levels.size());
    std::vector<ConvergeRow> rows(n_rows);

    parallel_rows(cfg.threads, n_rows, [&](int idx) {
        const double alpha = cfg.alphas[idx / cfg.levels.size()];
        const int m = cfg.levels[idx % cfg.levels.size()];
        ConvergeRow& row = rows[idx];
        row.alpha = alpha;
        row.m = m;
        try {
            GridSpec g;
            g.x_min = g.y_min = 0.0;
            g.x_max = g.y_max = 2.0;
            g.mx = g.my = m;
            g.alpha = alpha;
            g.tau = 2.0 / m;  // tau = h = 2/m; conventional row label 1/m
            g.t_final = t_final;
            const FracLaplacian op(g);
            const ProblemDef problem = make_polynomial_mms_problem(alpha);
            const RunResult res = run(problem, op, cfg.solver);
            if (!res.completed) {
                row.message = res.message;
                return;
            }
            row.ok = true;
            row.error = res.final_linf_error.value();
            for (const DiagnosticsRecord& r : res.series) {
                row.max_iterations = std::max(row.max_iterations, r.solver.iterations);
            }
        } catch (const std::exception& e) {
            row.message = e.what();
        }
    });

    // CSV + JSON, merged in sweep order.
    std::ofstream csv(cfg.out_dir / "converge.csv");
    csv << "alpha,m,h,tau,linf_error,order,max_iterations\n";
    json summary;
    summary["command"] = "converge";
    summary["config"] = config_to_json(cfg);
    summary["t_final"] = t_final;
    summary["order_band"] = {cfg.order_band_lo, cfg.order_band_hi};
    summary["results"] = json::array();

    bool all_pass = true;
    bool any_failed_row = false;
    const std::size_t L = cfg.levels.size();
    for (std::size_t a = 0; a < cfg.alphas.size(); ++a) {
        json entry;
        entry["alpha"] = cfg.alphas[a];
        entry["levels"] = json::array();
        std::vector<double> errs;
        std::optional<double> prev_err;
        std::vector<double> orders;
        for (std::size_t l = 0; l < L; ++l) {
            const ConvergeRow& row = rows[a * L + l];
            const double h = 2.0 / row.m;
            std::optional<double> order;
            if (row.ok && prev_err) order = std::log2(*prev_err / row.error);
            csv << fmt(row.alpha, "%.4g") << ',' << row.m << ',' << fmt(h) << ',' << fmt(h) << ',';
            if (row.ok) {
                csv << fmt(row.error);
                prev_err = row.error;
            } else {
                csv << "failed";
                prev_err.reset();
                any_failed_row = true;
            }
            csv << ',';
            if (order) {
                csv << fmt(*order, "%.4f");
                orders.push_back(*order);
            }
            csv << ',' << row.max_iterations << '\n';

            json jl;
            jl["m"] = row.m;
            jl["h"] = h;
            jl["tau"] = h;
            jl["ok"] = row.ok;
            if (row.ok) {
                jl["linf_error"] = row.error;
                jl["max_iterations"] = row.max_iterations;
            } else {
                jl["message"] = row.message;
            }
            if (order) jl["order"] = *order;
            entry["levels"].push_back(jl);
        }
        int in_band = 0;
        for (double o : orders) {
            if (o >= cfg.order_band_lo && o <= cfg.order_band_hi) ++in_band;
        }
        // The reference orders fluctuate outside the band roughly once per
        // column, so one outlier is tolerated; fewer transitions than levels-1
        // means a run failed and the column cannot pass.
        const int transitions = static_cast<int>(orders.size());
        const int required = std::max(0, static_cast<int>(L) - 1 - 1);
        const bool pass = transitions == static_cast<int>(L) - 1 && in_band >= std::max(required, std::min(transitions, 1));
        entry["orders"] = orders;
        entry["in_band_count"] = in_band;
        entry["transitions"] = transitions;
        entry["pass"] = pass;
        if (!pass && L >= 2) all_pass = false;
        summary["results"].push_back(entry);

        std::cout << "alpha " << cfg.alphas[a] << ": ";
        for (std::size_t l = 0; l < L; ++l) {
            const ConvergeRow& row = rows[a * L + l];
            std::cout << (row.ok ? fmt(row.error, "%.3e") : std::string("failed")) << ' ';
        }
        std::cout << "| orders";
        for (double o : orders) std::cout << ' ' << fmt(o, "%.2f");
        std::cout << (pass || L < 2 ? "  [ok]" : "  [out of band]") << '\n';
    }
    summary["pass"] = all_pass;

    std::ofstream(cfg.out_dir / "converge.json") << summary.dump(2) << '\n';

    if (any_failed_row) return kExitSolver;
    return all_pass ? kExitOk : kExitBand;
}

// ---------------------------------------------------------------------------
// energy

struct EnergyColumn {
    double alpha = 0.0;
    bool ok = false;
    std::string message;
    std::vector<std::pair<double, double>> table;  // (t, E)
    double drift = 0.0;
    double mass_drift = 0.0;
    int max_iterations = 0;
};

int cmd_energy(RunConfig cfg) {
    if (cfg.alphas.empty()) cfg.alphas = {1.2, 1.5, 1.8};
    const int m = (cfg.mx > 0) ? cfg.mx : 200;
    const double tau = cfg.tau > 0.0 ? cfg.tau : 0.05;
    const double t_report = cfg.t_final > 0.0 ? cfg.t_final : 5.0;

    std::filesystem::create_directories(cfg.out_dir);

    const int n_rows = static_cast<int>(cfg.alphas.size());
    std::vector<EnergyColumn> cols(n_rows);

    parallel_rows(cfg.threads, n_rows, [&](int idx) {
        EnergyColumn& col = cols[idx];
        col.alpha = cfg.alphas[idx];
        try {
            GridSpec g;
            g.x_min = g.y_min = -5.0;
            g.x_max = g.y_max = 5.0;
            g.mx = g.my = m;
            g.alpha = col.alpha;
            g.tau = tau;
            // One step beyond the last reporting time: the energy at level n
            // pairs levels n and n+1.
            g.t_final = t_report + tau;
            const FracLaplacian op(g);
            const RunResult res = run(make_gaussian_problem(), op, cfg.solver);
            if (!res.completed) {
                col.message = res.message;
                return;
            }
            col.ok = true;
            double mass_min = res.series.front().mass, mass_max = mass_min;
            for (const DiagnosticsRecord& r : res.series) {
                col.max_iterations = std::max(col.max_iterations, r.solver.iterations);
                mass_min = std::min(mass_min, r.mass);
                mass_max = std::max(mass_max, r.mass);
            }
            col.mass_drift = (mass_max - mass_min) / mass_min;
            // Report rows every 0.5 time units.
            for (double t = 0.5; t <= t_report + 1e-9; t += 0.5) {
                const int n = static_cast<int>(std::llround(t / tau));
                if (n >= 0 && n < static_cast<int>(res.series.size())) {
                    col.table.emplace_back(res.series[n].time, res.series[n].energy);
                }
            }
            double e0 = col.table.front().second;
            for (const auto& [t, e] : col.table) {
                col.drift = std::max(col.drift, std::fabs(e - e0) / std::fabs(e0));
            }
            write_diagnostics_csv(cfg.out_dir / ("diagnostics_alpha" + fmt(col.alpha, "%.4g") + ".csv"),
                                  res.series, cfg.diag_stride);
        } catch (const std::exception& e) {
            col.message = e.what();
        }
    });

    std::ofstream csv(cfg.out_dir / "energy.csv");
    csv << "alpha,t,energy\n";
    json summary;
    summary["command"] = "energy";
    summary["config"] = config_to_json(cfg);
    summary["drift_tol"] = cfg.energy_drift_tol;
    summary["results"] = json::array();

    bool all_pass = true;
    bool any_failed = false;
    for (const EnergyColumn& col : cols) {
        if (!col.ok) {
            any_failed = true;
            std::cout << "alpha " << col.alpha << ": failed: " << col.message << '\n';
            json e;
            e["alpha"] = col.alpha;
            e["ok"] = false;
            e["message"] = col.message;
            summary["results"].push_back(e);
            continue;
        }
        for (const auto& [t, en] : col.table) {
            csv << fmt(col.alpha, "%.4g") << ',' << fmt(t, "%.6g") << ',' << fmt(en) << '\n';
        }
        const bool drift_ok = col.drift <= cfg.energy_drift_tol;
        const bool mass_ok = col.mass_drift < 0.01;
        if (!(drift_ok && mass_ok)) all_pass = false;
        json e;
        e["alpha"] = col.alpha;
        e["ok"] = true;
        e["energy_drift"] = col.drift;
        e["mass_drift"] = col.mass_drift;
        e["max_iterations"] = col.max_iterations;
        e["pass"] = drift_ok && mass_ok;
        json rows = json::array();
        for (const auto& [t, en] : col.table) rows.push_back({{"t", t}, {"energy", en}});
        e["table"] = rows;
        summary["results"].push_back(e);

        std::cout << "alpha " << col.alpha << ": E(" << col.table.front().first << ") = "
                  << fmt(col.table.front().second) << ", drift " << fmt(col.drift, "%.3e")
                  << (drift_ok ? "  [ok]" : "  [drift too large]")
                  << (mass_ok ? "" : "  [mass drift >= 1%]") << '\n';
    }
    summary["pass"] = all_pass && !any_failed;
    std::ofstream(cfg.out_dir / "energy.json") << summary.dump(2) << '\n';

    if (any_failed) return kExitSolver;
    return all_pass ? kExitOk : kExitBand;
}

// ---------------------------------------------------------------------------
// run

int cmd_run(RunConfig cfg) {
    if (cfg.mx == 0) cfg.mx = 160;
    if (cfg.my == 0) cfg.my = cfg.mx;
    GridSpec g = cfg.grid();
    g.validate();
    std::filesystem::create_directories(cfg.out_dir);

    const FracLaplacian op(g);
    const ProblemDef problem = problem_for(cfg);

    std::vector<bool> written(cfg.snapshot_times.size(), false);
    RunCallbacks callbacks;
    callbacks.on_level = [&](int level, double time, const ComplexField& u) {
        for (std::size_t i = 0; i < cfg.snapshot_times.size(); ++i) {
            if (!written[i] && std::fabs(time - cfg.snapshot_times[i]) <= g.tau / 2.0) {
                written[i] = true;
                char name[64];
                std::snprintf(name, sizeof(name), "snap_n%06d_t%.6g", level, time);
                write_snapshot_csv(cfg.out_dir / (std::string(name) + ".csv"), u, time);
                write_snapshot_binary(cfg.out_dir / (std::string(name) + ".bin"), u, time);
            }
        }
    };

    const RunResult res = run(problem, op, cfg.solver, callbacks);
    write_diagnostics_csv(cfg.out_dir / "diagnostics.csv", res.series, cfg.diag_stride);

    if (!res.completed) {
        std::cerr << "run failed: " << res.message << '\n';
        return kExitSolver;
    }
    std::cout << "completed " << res.series.size() << " records; final mass "
              << fmt(discrete_mass(res.final_state.curr), "%.12g");
    if (res.final_linf_error) std::cout << "; final linf error " << fmt(*res.final_linf_error, "%.6e");
    std::cout << '\n';
    return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"2D Riesz space-fractional nonlinear Schroedinger solver"};
    app.require_subcommand(1);

    std::string config_path;
    std::vector<double> alphas;
    std::vector<int> levels;
    double tol = -1.0;
    std::string out_dir;
    int threads = 0;
    std::int64_t seed = -1;

    auto add_common = [&](CLI::App* sub) {
        sub->add_option("--config", config_path, "configuration file (key=value with sections)");
        sub->add_option("--alpha", alphas, "fractional order(s), overrides config");
        sub->add_option("--tol", tol, "solver relative-residual tolerance");
        sub->add_option("--out", out_dir, "output directory");
        sub->add_option("--threads", threads, "parallel sweep width");
        sub->add_option("--seed", seed, "seed echoed into summaries");
        return sub;
    };

    CLI::App* converge = add_common(app.add_subcommand("converge", "manufactured-solution order sweep"));
    converge->add_option("--levels", levels, "mesh counts M per level (tau = h = 2/M)");
    CLI::App* energy = add_common(app.add_subcommand("energy", "discrete-energy conservation table"));
    CLI::App* runcmd = add_common(app.add_subcommand("run", "single simulation with exports"));

    CLI11_PARSE(app, argc, argv);

    try {
        RunConfig cfg;
        if (!config_path.empty()) {
            cfg = load_config(config_path);
        } else {
            apply_env_overrides(cfg);
        }
        if (!alphas.empty()) {
            cfg.alphas = alphas;
            cfg.alpha = alphas.front();
        }
        if (!levels.empty()) cfg.levels = levels;
        if (tol > 0.0) cfg.solver.tol = tol;
        if (!out_dir.empty()) cfg.out_dir = out_dir;
        if (threads > 0) cfg.threads = threads;
        if (seed >= 0) cfg.seed = static_cast<std::uint64_t>(seed);

        if (converge->parsed()) {
            if (config_path.empty()) {
                cfg.problem = ProblemKind::example1;
                cfg.x_min = cfg.y_min = 0.0;
                cfg.x_max = cfg.y_max = 2.0;
                cfg.t_final = 1.0;
            }
            cfg.validate();
            return cmd_converge(cfg);
        }
        if (energy->parsed()) {
            if (config_path.empty()) {
                cfg.problem = ProblemKind::example2;
                cfg.t_final = 5.0;
                cfg.tau = 0.05;
                cfg.mx = cfg.my = 200;
            }
            cfg.validate();
            return cmd_energy(cfg);
        }
        if (runcmd->parsed()) {
            if (config_path.empty()) {
                cfg.problem = ProblemKind::example2;
                cfg.alpha = alphas.empty() ? 1.8 : alphas.front();
                cfg.tau = 1.0 / 16.0;
                cfg.t_final = 4.0;
                cfg.mx = cfg.my = 160;
                cfg.snapshot_times = {0.0, 2.0, 4.0};
            }
            cfg.validate();
            return cmd_run(cfg);
        }
        return kExitConfig;
    } catch (const ConfigError& e) {
        std::cerr << "configuration error: " << e.what() << '\n';
        return kExitConfig;
    } catch (const SolveFailure& e) {
        std::cerr << "solver failure: " << e.what() << '\n';
        return kExitSolver;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kExitConfig;
    }
}
