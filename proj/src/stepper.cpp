#include "fracschrod/stepper.hpp"

#include <cmath>
#include <iostream>
#include <utility>

namespace fracschrod {

namespace {

double boundary_magnitude(const ProblemDef& problem, const GridSpec& g) {
    double m = 0.0;
    for (int j = 0; j <= g.mx; ++j) {
        const double x = g.x_min + j * g.hx();
        m = std::max(m, std::abs(problem.initial(x, g.y_min)));
        m = std::max(m, std::abs(problem.initial(x, g.y_max)));
    }
    for (int k = 0; k <= g.my; ++k) {
        const double y = g.y_min + k * g.hy();
        m = std::max(m, std::abs(problem.initial(g.x_min, y)));
        m = std::max(m, std::abs(problem.initial(g.x_max, y)));
    }
    return m;
}

double max_error_at(const ComplexField& u, const ProblemDef& problem, double t) {
    const GridSpec& g = u.grid();
    double m = 0.0;
    for (int iy = 0; iy < g.ny(); ++iy) {
        for (int ix = 0; ix < g.nx(); ++ix) {
            m = std::max(m, std::abs(problem.exact(g.x(ix), g.y(iy), t) - u(ix, iy)));
        }
    }
    return m;
}

std::vector<double> squared_moduli(const ComplexField& u) {
    std::vector<double> p(u.size());
    const Complex* d = u.data();
    for (std::size_t i = 0; i < u.size(); ++i) p[i] = std::norm(d[i]);
    return p;
}

DiagnosticsRecord make_record(int step, double time, const ComplexField& u_n,
                              const ComplexField& u_np1, const ProblemDef& problem,
                              const FracLaplacian& op, const SolveReport& report) {
    DiagnosticsRecord r;
    r.step = step;
    r.time = time;
    r.mass = discrete_mass(u_n);
    r.energy = discrete_energy(u_n, u_np1, op);
    if (problem.has_exact()) r.linf_error = max_error_at(u_n, problem, time);
    r.solver = report;
    return r;
}

}  // namespace

SchemeState first_step(const ProblemDef& problem, const FracLaplacian& op) {
    const GridSpec& g = op.grid();
    g.validate();

    const double bmag = boundary_magnitude(problem, g);
    if (bmag > 1e-12) {
        std::cerr << "warning: initial datum reaches " << bmag
                  << " on the boundary; homogeneous Dirichlet truncation assumes it is negligible\n";
    }

    ComplexField u0 = sample_interior(g, problem.initial);
    const ComplexField lu0 = op.apply(u0);

    ComplexField u1(g);
    const double tau = g.tau;
    const Complex i_unit(0.0, 1.0);
    for (int iy = 0; iy < g.ny(); ++iy) {
        for (int ix = 0; ix < g.nx(); ++ix) {
            Complex rhs = i_unit * (lu0(ix, iy) + std::norm(u0(ix, iy)) * u0(ix, iy));
            if (problem.has_source()) rhs += problem.source(g.x(ix), g.y(iy), 0.0);
            u1(ix, iy) = u0(ix, iy) + tau * rhs;
        }
    }

    SchemeState s;
    s.prev = std::move(u0);
    s.curr = std::move(u1);
    s.step = 1;
    s.time = tau;
    return s;
}

SchemeState advance(SchemeState state, const ProblemDef& problem, const FracLaplacian& op,
                    const SolverSettings& settings, DiagnosticsRecord& record) {
    if (state.step < 1) {
        throw std::invalid_argument("advance: state must hold at least levels 0 and 1");
    }
    const GridSpec& g = op.grid();
    const double tau = g.tau;
    const double t_n = state.time;
    const Complex i_unit(0.0, 1.0);

    std::vector<double> pot = squared_moduli(state.curr);

    ComplexField rhs = op.apply(state.prev);
    {
        Complex* r = rhs.data();
        const Complex* pv = state.prev.data();
        for (std::size_t i = 0; i < rhs.size(); ++i) {
            r[i] = pv[i] / tau + i_unit * (pot[i] * pv[i] + r[i]);
        }
        if (problem.has_source()) {
            // The source sits at the leapfrog center; collecting the
            // (U^{n+1}, U^{n-1}) terms doubles it on the right-hand side.
            for (int iy = 0; iy < g.ny(); ++iy) {
                for (int ix = 0; ix < g.nx(); ++ix) {
                    rhs(ix, iy) += 2.0 * problem.source(g.x(ix), g.y(iy), t_n);
                }
            }
        }
    }

    const StepSystem sys(op, tau, std::move(pot));
    auto [next, report] = solve(sys, rhs, settings);

    record = make_record(state.step, t_n, state.curr, next, problem, op, report);

    SchemeState out;
    out.prev = std::move(state.curr);
    out.curr = std::move(next);
    out.step = state.step + 1;
    out.time = static_cast<double>(out.step) * tau;
    return out;
}

RunResult run(const ProblemDef& problem, const FracLaplacian& op, const SolverSettings& settings,
              const RunCallbacks& callbacks) {
    const GridSpec& g = op.grid();
    const int n_steps = g.num_steps();

    RunResult result;
    result.final_state = first_step(problem, op);

    if (callbacks.on_level) {
        callbacks.on_level(0, 0.0, result.final_state.prev);
        callbacks.on_level(1, g.tau, result.final_state.curr);
    }
    result.series.push_back(make_record(0, 0.0, result.final_state.prev, result.final_state.curr,
                                        problem, op, SolveReport{}));

    if (n_steps < 2) {
        result.message = "degenerate run: fewer than two time steps; stopped after the first step";
        std::cerr << "warning: " << result.message << "\n";
        if (problem.has_exact()) {
            result.final_linf_error = max_error_at(result.final_state.curr, problem,
                                                   result.final_state.time);
        }
        return result;
    }

    for (int n = 1; n < n_steps; ++n) {
        DiagnosticsRecord record;
        try {
            result.final_state =
                advance(std::move(result.final_state), problem, op, settings, record);
        } catch (const SolveFailure& failure) {
            result.completed = false;
            result.message = failure.what();
            return result;
        }
        result.series.push_back(record);
        if (callbacks.on_level) {
            callbacks.on_level(result.final_state.step, result.final_state.time,
                               result.final_state.curr);
        }
    }

    if (problem.has_exact()) {
        result.final_linf_error =
            max_error_at(result.final_state.curr, problem, result.final_state.time);
    }
    return result;
}

}  // namespace fracschrod
