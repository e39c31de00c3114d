#include <doctest.h>

#include <Eigen/Dense>

#include <cmath>

#include "fracschrod/linsolve.hpp"
#include "oracle_utils.hpp"

using namespace fracschrod;

namespace {

GridSpec grid_of(int m, double alpha, double tau, double lo = 0.0, double hi = 2.0) {
    GridSpec g;
    g.x_min = g.y_min = lo;
    g.x_max = g.y_max = hi;
    g.mx = g.my = m;
    g.alpha = alpha;
    g.tau = tau;
    g.t_final = 1.0;
    return g;
}

std::vector<double> random_potential(const GridSpec& g, std::uint64_t seed) {
    const ComplexField f = oracle::random_field(g, seed);
    std::vector<double> p(f.size());
    for (std::size_t i = 0; i < p.size(); ++i) p[i] = std::norm(f.data()[i]);
    return p;
}

FracLaplacian zeroed_operator(const GridSpec& g) {
    FracWeights w;
    w.alpha = g.alpha;
    w.half.assign(static_cast<std::size_t>(std::max(g.mx, g.my)), 0.0);
    return FracLaplacian(g, w);
}

}  // namespace

TEST_CASE("apply_system on a unit impulse reads 1 + 4i (alpha=2, h=tau=1, zero potential)") {
    const GridSpec g = grid_of(8, 2.0, 1.0, 0.0, 8.0);  // h = 1
    const FracLaplacian op(g);
    const StepSystem sys(op, 1.0, std::vector<double>(g.unknowns(), 0.0));
    ComplexField v(g);
    v(3, 3) = Complex(1.0, 0.0);
    const ComplexField av = sys.apply(v);
    CHECK(av(3, 3).real() == doctest::Approx(1.0).epsilon(1e-14));
    CHECK(av(3, 3).imag() == doctest::Approx(4.0).epsilon(1e-14));
}

TEST_CASE("apply_system with a zeroed operator is (1/tau) V - i pot V") {
    const GridSpec g = grid_of(6, 1.5, 0.25);
    const FracLaplacian op = zeroed_operator(g);
    const std::vector<double> pot = random_potential(g, 3);
    const StepSystem sys(op, g.tau, pot);
    const ComplexField v = oracle::random_field(g, 4);
    const ComplexField av = sys.apply(v);
    for (std::size_t i = 0; i < v.size(); ++i) {
        const Complex expect = v.data()[i] / g.tau - Complex(0.0, 1.0) * pot[i] * v.data()[i];
        CHECK(std::abs(av.data()[i] - expect) < 1e-14);
    }
}

TEST_CASE("apply_system equals the dense system matrix on random input") {
    const GridSpec g = grid_of(10, 1.6, 0.05);  // 9x9 interior
    const FracLaplacian op(g);
    const StepSystem sys(op, g.tau, random_potential(g, 5));
    const ComplexField v = oracle::random_field(g, 6);
    const Eigen::MatrixXcd a = assemble_dense_system(sys);
    Eigen::VectorXcd vv(static_cast<Eigen::Index>(v.size()));
    for (std::size_t i = 0; i < v.size(); ++i) vv(static_cast<Eigen::Index>(i)) = v.data()[i];
    const Eigen::VectorXcd ref = a * vv;
    const ComplexField av = sys.apply(v);
    double num = 0.0, den = 0.0;
    for (std::size_t i = 0; i < v.size(); ++i) {
        num += std::norm(av.data()[i] - ref(static_cast<Eigen::Index>(i)));
        den += std::norm(ref(static_cast<Eigen::Index>(i)));
    }
    CHECK(std::sqrt(num / den) < 1e-12);
}

TEST_CASE("solve recovers a manufactured solution") {
    const GridSpec g = grid_of(12, 1.5, 0.02);
    const FracLaplacian op(g);
    const StepSystem sys(op, g.tau, random_potential(g, 7));
    const ComplexField x_true = oracle::random_field(g, 8);
    const ComplexField b = sys.apply(x_true);
    SolverSettings settings;
    settings.tol = 1e-10;
    const auto [x, report] = solve(sys, b, settings);
    CHECK(report.converged);
    CHECK(report.final_residual <= settings.tol);
    CHECK(report.method == SolveMethod::krylov);
    CHECK(oracle::rel_l2_diff(x, x_true) < 1e-8);
}

TEST_CASE("diagonal system (zeroed operator) matches closed-form division") {
    const GridSpec g = grid_of(8, 1.5, 0.1);
    const FracLaplacian op = zeroed_operator(g);
    const std::vector<double> pot = random_potential(g, 9);
    const StepSystem sys(op, g.tau, pot);
    const ComplexField b = oracle::random_field(g, 10);
    const auto [x, report] = solve(sys, b, SolverSettings{1e-13, 200, true, 4096});
    CHECK(report.converged);
    for (std::size_t i = 0; i < b.size(); ++i) {
        const Complex denom = Complex(1.0 / g.tau, -pot[i]);
        CHECK(std::abs(x.data()[i] - b.data()[i] / denom) < 1e-13 * std::abs(b.data()[i]) + 1e-13);
    }
}

TEST_CASE("Krylov solution agrees with dense LU") {
    const GridSpec g = grid_of(10, 1.8, 0.05);  // 81 unknowns
    const FracLaplacian op(g);
    const StepSystem sys(op, g.tau, random_potential(g, 11));
    const ComplexField b = oracle::random_field(g, 12);
    const auto [x, report] = solve(sys, b, SolverSettings{1e-12, 400, true, 4096});
    CHECK(report.converged);

    const Eigen::MatrixXcd a = assemble_dense_system(sys);
    Eigen::VectorXcd bv(static_cast<Eigen::Index>(b.size()));
    for (std::size_t i = 0; i < b.size(); ++i) bv(static_cast<Eigen::Index>(i)) = b.data()[i];
    const Eigen::VectorXcd xv = a.partialPivLu().solve(bv);
    double num = 0.0, den = 0.0;
    for (std::size_t i = 0; i < b.size(); ++i) {
        num += std::norm(x.data()[i] - xv(static_cast<Eigen::Index>(i)));
        den += std::norm(xv(static_cast<Eigen::Index>(i)));
    }
    CHECK(std::sqrt(num / den) < 1e-9);
}

TEST_CASE("non-convergence raises SolveFailure carrying the best iterate") {
    const GridSpec g = grid_of(10, 1.5, 0.05);
    const FracLaplacian op(g);
    const StepSystem sys(op, g.tau, random_potential(g, 13));
    const ComplexField b = oracle::random_field(g, 14);
    SolverSettings s;
    s.tol = 1e-16;      // unreachable
    s.max_iter = 1;
    s.dense_cap = 0;    // forbid the dense fallback
    s.use_preconditioner = false;
    try {
        solve(sys, b, s);
        FAIL("expected SolveFailure");
    } catch (const SolveFailure& f) {
        CHECK_FALSE(f.report().converged);
        CHECK(f.report().iterations >= 1);
        CHECK(f.best_iterate().size() == b.size());
    }
}

TEST_CASE("dense fallback rescues a stalled iteration below the cap") {
    const GridSpec g = grid_of(8, 1.5, 0.05);
    const FracLaplacian op(g);
    const StepSystem sys(op, g.tau, random_potential(g, 15));
    const ComplexField b = oracle::random_field(g, 16);
    SolverSettings s;
    s.tol = 1e-10;
    s.max_iter = 1;  // starve Krylov so the fallback has to finish the job
    const auto [x, report] = solve(sys, b, s);
    CHECK(report.converged);
    CHECK(report.method == SolveMethod::dense_lu);
    CHECK(report.final_residual <= s.tol);
}

TEST_CASE("preconditioned iteration count stays within the engineering budget at 160x160") {
    GridSpec g = grid_of(160, 1.5, 0.05, -5.0, 5.0);
    const FracLaplacian op(g);
    // Example-2-like potential: moduli of a smooth bump sampled on the grid
    ComplexField u0(g);
    for (int iy = 0; iy < g.ny(); ++iy) {
        for (int ix = 0; ix < g.nx(); ++ix) {
            const double r2 = g.x(ix) * g.x(ix) + g.y(iy) * g.y(iy);
            u0(ix, iy) = Complex(std::exp(-r2), 0.0);
        }
    }
    std::vector<double> pot(u0.size());
    for (std::size_t i = 0; i < pot.size(); ++i) pot[i] = std::norm(u0.data()[i]);
    const StepSystem sys(op, g.tau, pot);
    const ComplexField b = oracle::random_field(g, 17);
    const auto [x, report] = solve(sys, b, SolverSettings{1e-10, 500, true, 4096});
    CHECK(report.converged);
    CHECK(report.iterations <= 200);
}
