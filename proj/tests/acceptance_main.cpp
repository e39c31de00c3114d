// Acceptance suite: runs every primary criterion at its stated tolerance and
// prints one PASS/FAIL line per criterion.  Exit code is the number of
// failing criteria.
//
// FRACSCHROD_FAST=1 skips the optional finest convergence level (M = 256).

#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <numbers>
#include <random>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "fracschrod/coeffs.hpp"
#include "fracschrod/diagnostics.hpp"
#include "fracschrod/frac_laplacian.hpp"
#include "fracschrod/linsolve.hpp"
#include "fracschrod/problem.hpp"
#include "fracschrod/spectral.hpp"
#include "fracschrod/stepper.hpp"
#include "oracle_utils.hpp"

using namespace fracschrod;

namespace {

int g_checks_failed = 0;

void expect(bool ok, const std::string& what) {
    if (!ok) {
        ++g_checks_failed;
        std::printf("    check failed: %s\n", what.c_str());
    }
}

double elapsed_s(std::chrono::steady_clock::time_point t0) {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

GridSpec square_grid(double lo, double hi, int m, double alpha, double tau, double t_final) {
    GridSpec g;
    g.x_min = g.y_min = lo;
    g.x_max = g.y_max = hi;
    g.mx = g.my = m;
    g.alpha = alpha;
    g.tau = tau;
    g.t_final = t_final;
    return g;
}

// Reference max-norm errors for the manufactured run, one column per alpha,
// rows labeled 1/M for M = 16..256: label 1/M means M cells on the length-2
// domain, tau = h = 2/M.
struct RefErrorColumn {
    double alpha;
    double err[5];
};
constexpr RefErrorColumn kRefErrors[] = {
    {1.2, {4.62e-2, 9.67e-3, 1.81e-3, 5.48e-4, 1.21e-4}},
    {1.5, {3.01e-2, 1.05e-2, 2.29e-3, 5.24e-4, 1.26e-4}},
    {1.9, {4.70e-2, 7.60e-3, 1.55e-3, 3.89e-4, 1.08e-4}},
    {2.0, {2.08e-2, 5.55e-3, 1.27e-3, 3.07e-4, 7.65e-5}},
};

// Reference discrete energies at t = 0.5, 1.0, ..., 5.0 (tau = h = 1/20).
struct RefEnergyColumn {
    double alpha;
    double energy[10];
};
constexpr RefEnergyColumn kRefEnergies[] = {
    {1.2,
     {2.6252539243441122, 2.6252539243434061, 2.6252539243427715, 2.6252539243406749,
      2.6252539243384239, 2.6252539243365343, 2.6252539243381099, 2.6252539243396047,
      2.6252539243401332, 2.6252539243413202}},
    {1.5,
     {2.8186429624622438, 2.8186429624639984, 2.8186429624659994, 2.8186429624668641,
      2.8186429624676719, 2.8186429624698901, 2.8186429624709093, 2.8186429624729565,
      2.8186429624734930, 2.8186429624735556}},
    {1.8,
     {3.1334617831273350, 3.1334617831271649, 3.1334617831260112, 3.1334617831288387,
      3.1334617831306835, 3.1334617831308118, 3.1334617831335723, 3.1334617831349845,
      3.1334617831369416, 3.1334617831445417}},
};

// ---------------------------------------------------------------------------

bool criterion_convergence() {
    const auto t0 = std::chrono::steady_clock::now();
    const bool fast = std::getenv("FRACSCHROD_FAST") != nullptr;
    std::vector<int> levels = {16, 32, 64, 128};
    if (!fast) levels.push_back(256);

    bool pass = true;
    for (const RefErrorColumn& col : kRefErrors) {
        std::vector<double> errs;
        for (int m : levels) {
            const GridSpec g = square_grid(0.0, 2.0, m, col.alpha, 2.0 / m, 1.0);
            const FracLaplacian op(g);
            const RunResult res = run(make_polynomial_mms_problem(col.alpha), op, SolverSettings{});
            if (!res.completed) {
                std::printf("    alpha=%.1f M=%d run failed: %s\n", col.alpha, m, res.message.c_str());
                pass = false;
                errs.clear();
                break;
            }
            errs.push_back(res.final_linf_error.value());
        }
        if (errs.empty()) continue;

        std::vector<double> orders;
        int in_band = 0;
        for (std::size_t i = 1; i < errs.size(); ++i) {
            const double o = std::log2(errs[i - 1] / errs[i]);
            orders.push_back(o);
            if (o >= 1.7 && o <= 2.4) ++in_band;
        }
        // 3 of 4 transitions must land in band; without the optional fifth
        // level only 3 transitions exist and a single outlier is allowed.
        const int required = static_cast<int>(orders.size()) - 1;
        const bool band_ok = in_band >= std::max(required, 1);

        // finest required level (M = 128) within a factor of 5 of the reference
        const double ratio128 = errs[3] / col.err[3];
        const bool finest_ok = ratio128 >= 0.2 && ratio128 <= 5.0;
        bool extra_ok = true;
        if (errs.size() == 5) {
            const double ratio256 = errs[4] / col.err[4];
            extra_ok = ratio256 >= 0.2 && ratio256 <= 5.0;
        }

        std::printf("    alpha=%.1f errors:", col.alpha);
        for (double e : errs) std::printf(" %.3e", e);
        std::printf("  orders:");
        for (double o : orders) std::printf(" %.2f", o);
        std::printf("  in-band %d/%zu  err(1/128)/ref %.2f%s\n", in_band, orders.size(), ratio128,
                    band_ok && finest_ok && extra_ok ? "" : "  <-- out of tolerance");
        if (!(band_ok && finest_ok && extra_ok)) pass = false;
    }
    std::printf("    [%.1f s]\n", elapsed_s(t0));
    return pass;
}

bool criterion_energy() {
    const auto t0 = std::chrono::steady_clock::now();
    bool pass = true;
    for (const RefEnergyColumn& col : kRefEnergies) {
        const double tau = 1.0 / 20.0;
        const GridSpec g = square_grid(-5.0, 5.0, 200, col.alpha, tau, 5.0 + tau);
        const FracLaplacian op(g);
        const RunResult res = run(make_gaussian_problem(), op, SolverSettings{1e-10, 500, true, 4096});
        if (!res.completed) {
            std::printf("    alpha=%.1f run failed: %s\n", col.alpha, res.message.c_str());
            pass = false;
            continue;
        }
        double drift = 0.0, worst_rel = 0.0;
        const double e_first = res.series[10].energy;  // t = 0.5
        for (int i = 0; i < 10; ++i) {
            const int n = 10 * (i + 1);  // t = 0.5 (i+1)
            const double e = res.series[n].energy;
            drift = std::max(drift, std::fabs(e - e_first) / std::fabs(e_first));
            worst_rel = std::max(worst_rel, std::fabs(e - col.energy[i]) / std::fabs(col.energy[i]));
        }
        const bool ok = drift <= 1e-8 && worst_rel <= 1e-4;
        std::printf("    alpha=%.1f E(0.5)=%.17g drift=%.2e worst-vs-ref=%.2e%s\n", col.alpha,
                    e_first, drift, worst_rel, ok ? "" : "  <-- out of tolerance");
        if (!ok) pass = false;
    }
    std::printf("    [%.1f s]\n", elapsed_s(t0));
    return pass;
}

bool criterion_oracle_equivalence() {
    const auto t0 = std::chrono::steady_clock::now();
    std::mt19937_64 rng(2024);
    std::uniform_int_distribution<int> pick_m(6, 24);
    std::uniform_real_distribution<double> pick_alpha(1.01, 2.0);
    std::uniform_real_distribution<double> pick_tau(0.01, 0.2);

    bool pass = true;
    double worst_apply = 0.0, worst_solve = 0.0;
    const int n_systems = 52;
    for (int trial = 0; trial < n_systems; ++trial) {
        const int m = (trial == 0) ? 40 : pick_m(rng);  // one larger system, rest small
        const double alpha = (trial % 7 == 0) ? 2.0 : pick_alpha(rng);
        const double tau = pick_tau(rng);
        const GridSpec g = square_grid(0.0, 2.0, m, alpha, tau, 1.0);
        const FracLaplacian op(g);
        const ComplexField u = oracle::random_field(g, 100 + trial);

        // FFT apply against the dense Kronecker assembly
        const Eigen::MatrixXd d = op.assemble_dense();
        const double apply_diff = oracle::rel_l2_diff(op.apply(u), oracle::dense_matvec(d, u, -1.0));
        worst_apply = std::max(worst_apply, apply_diff);

        // Krylov against dense LU on the full step system
        std::vector<double> pot(u.size());
        const ComplexField pf = oracle::random_field(g, 200 + trial);
        for (std::size_t i = 0; i < pot.size(); ++i) pot[i] = std::norm(pf.data()[i]);
        const StepSystem sys(op, tau, pot);
        const ComplexField b = oracle::random_field(g, 300 + trial);
        const auto [x, report] = solve(sys, b, SolverSettings{1e-12, 600, true, 4096});
        expect(report.converged, "krylov converged on trial " + std::to_string(trial));

        const Eigen::MatrixXcd a = assemble_dense_system(sys);
        Eigen::VectorXcd bv(static_cast<Eigen::Index>(b.size()));
        for (std::size_t i = 0; i < b.size(); ++i) bv(static_cast<Eigen::Index>(i)) = b.data()[i];
        const Eigen::VectorXcd xv = a.partialPivLu().solve(bv);
        double num = 0.0, den = 0.0;
        for (std::size_t i = 0; i < b.size(); ++i) {
            num += std::norm(x.data()[i] - xv(static_cast<Eigen::Index>(i)));
            den += std::norm(xv(static_cast<Eigen::Index>(i)));
        }
        worst_solve = std::max(worst_solve, std::sqrt(num / den));
    }
    std::printf("    %d systems: worst apply diff %.2e (<=1e-12), worst solve diff %.2e (<=1e-9)\n",
                n_systems, worst_apply, worst_solve);
    if (worst_apply > 1e-12 || worst_solve > 1e-9) pass = false;
    std::printf("    [%.1f s]\n", elapsed_s(t0));
    return pass && g_checks_failed == 0;
}

bool criterion_property_suite() {
    const auto t0 = std::chrono::steady_clock::now();
    const int before = g_checks_failed;
    constexpr double kPi = std::numbers::pi;

    // weight sequence: sign/symmetry/decay and symbol residual at J = 4096
    for (double alpha : {1.1, 1.2, 1.5, 1.8, 1.9, 2.0}) {
        const FracWeights w = compute_weights(alpha, 4097);
        expect(w.half[0] > 0.0, "c0 > 0");
        bool signs = true, decay = true;
        for (std::size_t j = 1; j < w.half.size(); ++j) {
            signs = signs && w.half[j] <= 0.0;
            if (j >= 2) decay = decay && std::fabs(w.half[j]) <= std::fabs(w.half[j - 1]);
        }
        expect(signs, "c_j <= 0 for all j >= 1");
        expect(decay, "|c_j| decays monotonically");
        for (double theta : {kPi / 4.0, kPi / 2.0, kPi}) {
            expect(generating_function_residual(w, theta) < 1e-3,
                   "symbol residual < 1e-3 at alpha " + std::to_string(alpha));
        }
    }

    // max-norm embedding inequality on 100 random fields per alpha
    for (double alpha : {1.2, 1.5, 1.8, 2.0}) {
        const GridSpec g = square_grid(0.0, 2.0, 32, alpha, 0.01, 0.1);
        const double c_alpha = sobolev_embedding_constant(alpha, g);
        for (int trial = 0; trial < 100; ++trial) {
            const ComplexField u = oracle::random_field(g, 5000 + 100 * trial);
            const SobolevNorms n = sobolev_norms(u, alpha);
            expect(field_max_norm(u) <= c_alpha * n.full + 1e-8,
                   "embedding bound at alpha " + std::to_string(alpha));
        }
    }

    // two-sided seminorm equivalences, 100 random fields per alpha
    for (double alpha : {1.2, 1.5, 1.8, 2.0}) {
        const double lo = std::pow(2.0 / kPi, alpha);
        const double lo2 = std::pow(2.0 / kPi, 2.0 * alpha);
        for (int m : {16, 64}) {
            const GridSpec g = square_grid(0.0, 2.0, m, alpha, 0.01, 0.1);
            const FracLaplacian op(g);
            for (int trial = 0; trial < 50; ++trial) {
                const ComplexField u = oracle::random_field(g, 9000 + m + 50 * trial);
                const SobolevNorms n = sobolev_norms(u, alpha);
                const double quad = op.energy_quadratic_form(u);
                expect(quad >= lo * n.semi_half * n.semi_half - 1e-8, "H^{a/2} lower bound");
                expect(quad <= n.semi_half * n.semi_half + 1e-8, "H^{a/2} upper bound");
                const double lu = field_l2_norm(op.apply(u));
                expect(lu * lu >= lo2 * n.semi_alpha * n.semi_alpha - 1e-8, "H^a lower bound");
                expect(lu * lu <= n.semi_alpha * n.semi_alpha + 1e-8, "H^a upper bound");
            }
        }
    }

    // quadratic-form energy equals the dense square-root oracle
    for (double alpha : {1.3, 1.7, 2.0}) {
        const GridSpec g = square_grid(0.0, 2.0, 10, alpha, 0.01, 0.1);
        const FracLaplacian op(g);
        for (int trial = 0; trial < 5; ++trial) {
            const ComplexField u = oracle::random_field(g, 400 + trial);
            const double fast = op.energy_quadratic_form(u);
            const double ref = oracle::dense_sqrt_energy(op, u);
            expect(std::fabs(fast - ref) <= 1e-10 * std::fabs(ref), "energy square-root identity");
        }
    }

    // the operator inner product is real to roundoff
    for (double alpha : {1.2, 1.6, 2.0}) {
        const GridSpec g = square_grid(0.0, 2.0, 20, alpha, 0.01, 0.1);
        const FracLaplacian op(g);
        for (int trial = 0; trial < 10; ++trial) {
            const ComplexField u = oracle::random_field(g, 600 + trial);
            const ComplexField lu = op.apply(u);
            Complex ip{0.0, 0.0};
            for (std::size_t i = 0; i < u.size(); ++i) ip += lu.data()[i] * std::conj(u.data()[i]);
            ip *= g.hx() * g.hy();
            const double u2 = field_l2_norm(u) * field_l2_norm(u);
            expect(std::fabs(ip.imag()) <= 1e-12 * u2, "Im((Lx+Ly)U, U) at roundoff");
        }
    }

    std::printf("    property checks failed: %d\n", g_checks_failed - before);
    std::printf("    [%.1f s]\n", elapsed_s(t0));
    return g_checks_failed == before;
}

bool criterion_alpha2_degeneration() {
    const auto t0 = std::chrono::steady_clock::now();
    bool pass = true;

    // weights are exact integers
    const FracWeights w = compute_weights(2.0, 64);
    pass = pass && w.half[0] == 2.0 && w.half[1] == -1.0;
    for (std::size_t j = 2; j < w.half.size(); ++j) pass = pass && w.half[j] == 0.0;

    // operator equality against the hand-coded 5-point stencil
    const GridSpec g = square_grid(0.0, 2.0, 64, 2.0, 1.0 / 32.0, 1.0);
    const FracLaplacian op(g);
    const ComplexField u = oracle::random_field(g, 77);
    const double op_diff = oracle::rel_l2_diff(op.apply(u), oracle::five_point_apply(u));
    std::printf("    operator vs 5-point stencil: rel diff %.2e (<=1e-14)\n", op_diff);
    pass = pass && op_diff <= 1e-14;

    // one full implicit step against a dense classical Crank-Nicolson-leapfrog
    // reference built from the stencil alone
    {
        const GridSpec gs = square_grid(0.0, 2.0, 16, 2.0, 1.0 / 8.0, 1.0);
        const FracLaplacian ops(gs);
        const ProblemDef problem = make_polynomial_mms_problem(2.0);
        SchemeState s = first_step(problem, ops);

        // reference: A x = B prev + 2 g with 5-point dense blocks
        const std::size_t n = gs.unknowns();
        Eigen::MatrixXcd a = Eigen::MatrixXcd::Zero(n, n), bm = Eigen::MatrixXcd::Zero(n, n);
        for (std::size_t col = 0; col < n; ++col) {
            ComplexField e(gs);
            e.data()[col] = Complex(1.0, 0.0);
            const ComplexField le = oracle::five_point_apply(e);
            for (std::size_t row = 0; row < n; ++row) {
                const Complex lv = le.data()[row];
                const double pot = std::norm(s.curr.data()[row]);
                const Complex diag =
                    row == col ? Complex(1.0 / gs.tau, 0.0) - Complex(0.0, 1.0) * pot : Complex{};
                a(row, col) = diag - Complex(0.0, 1.0) * lv;
                bm(row, col) = (row == col ? Complex(1.0 / gs.tau, 0.0) + Complex(0.0, 1.0) * pot
                                           : Complex{}) +
                               Complex(0.0, 1.0) * lv;
            }
        }
        Eigen::VectorXcd prev(n);
        for (std::size_t i = 0; i < n; ++i) prev(static_cast<Eigen::Index>(i)) = s.prev.data()[i];
        Eigen::VectorXcd rhs = bm * prev;
        for (int iy = 0; iy < gs.ny(); ++iy) {
            for (int ix = 0; ix < gs.nx(); ++ix) {
                rhs(static_cast<Eigen::Index>(iy) * gs.nx() + ix) +=
                    2.0 * problem.source(gs.x(ix), gs.y(iy), s.time);
            }
        }
        const Eigen::VectorXcd ref = a.partialPivLu().solve(rhs);

        DiagnosticsRecord rec;
        const SchemeState after = advance(std::move(s), problem, ops,
                                          SolverSettings{1e-13, 500, true, 4096}, rec);
        double num = 0.0, den = 0.0;
        for (std::size_t i = 0; i < n; ++i) {
            num += std::norm(after.curr.data()[i] - ref(static_cast<Eigen::Index>(i)));
            den += std::norm(ref(static_cast<Eigen::Index>(i)));
        }
        const double step_diff = std::sqrt(num / den);
        std::printf("    one scheme step vs dense classical reference: rel diff %.2e (<=1e-10)\n",
                    step_diff);
        pass = pass && step_diff <= 1e-10;
    }

    std::printf("    [%.1f s]\n", elapsed_s(t0));
    return pass;
}

}  // namespace

int main() {
    struct Criterion {
        const char* name;
        bool (*fn)();
    };
    const Criterion criteria[] = {
        {"convergence-order reproduction vs reference errors", criterion_convergence},
        {"discrete energy conservation vs reference values", criterion_energy},
        {"operator/solver oracle equivalence", criterion_oracle_equivalence},
        {"analytic property suite", criterion_property_suite},
        {"alpha=2 degeneration to the classical scheme", criterion_alpha2_degeneration},
    };

    int failures = 0;
    for (const Criterion& c : criteria) {
        std::printf("==> %s\n", c.name);
        const bool ok = c.fn();
        std::printf("%s: %s\n", ok ? "PASS" : "FAIL", c.name);
        if (!ok) ++failures;
    }
    std::printf("%d/5 criteria passed\n", 5 - failures);
    return failures;
}
