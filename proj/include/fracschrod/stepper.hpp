#pragma once

#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "fracschrod/diagnostics.hpp"
#include "fracschrod/frac_laplacian.hpp"
#include "fracschrod/grid.hpp"
#include "fracschrod/linsolve.hpp"
#include "fracschrod/problem.hpp"

namespace fracschrod {

/// Two consecutive time levels of the three-level scheme.
struct SchemeState {
    ComplexField prev;  ///< U^{n-1}
    ComplexField curr;  ///< U^n
    int step = 0;       ///< n
    double time = 0.0;  ///< n * tau
};

/// Samples U^0 from the initial datum and takes the explicit Taylor first
/// step U^1 = U^0 + tau (i L U^0 + i |U^0|^2 U^0 + g(., ., 0)); returns the
/// state at n = 1.  Warns on stderr when the initial datum exceeds 1e-12 at
/// boundary nodes.
SchemeState first_step(const ProblemDef& problem, const FracLaplacian& op);

/// One implicit step of the scheme
///   (1/tau - i |U^n|^2 - i L) U^{n+1} = (1/tau + i |U^n|^2 + i L) U^{n-1} + 2 g^n,
/// with the source evaluated at the leapfrog center t_n.  Emits the record
/// for index n (energy pairs U^n with the fresh U^{n+1}) and returns the
/// shifted state.  Solver failures propagate as SolveFailure.
SchemeState advance(SchemeState state, const ProblemDef& problem, const FracLaplacian& op,
                    const SolverSettings& settings, DiagnosticsRecord& record);

struct RunCallbacks {
    /// Invoked for every computed level (0, 1, ..., N) with its time and field.
    std::function<void(int level, double time, const ComplexField&)> on_level;
};

struct RunResult {
    SchemeState final_state;
    std::vector<DiagnosticsRecord> series;  ///< records n = 0 .. N-1
    std::optional<double> final_linf_error; ///< at t_final when exact is known
    bool completed = true;
    std::string message;
};

/// Marches first_step + (N-1) implicit steps, N = round(t_final / tau).
/// Degenerate N < 2 runs return right after the first step with a warning in
/// `message`.  On solver failure the partial series is returned with
/// completed = false.
RunResult run(const ProblemDef& problem, const FracLaplacian& op, const SolverSettings& settings,
              const RunCallbacks& callbacks = {});

}  // namespace fracschrod
