#pragma once

#include <functional>

#include "fracschrod/grid.hpp"

namespace fracschrod {

/// Problem data for a run: initial condition, optional source term for
/// manufactured runs, optional exact solution for error measurement.
struct ProblemDef {
    std::function<Complex(double x, double y)> initial;
    std::function<Complex(double x, double y, double t)> source;  ///< may be empty
    std::function<Complex(double x, double y, double t)> exact;   ///< may be empty

    bool has_source() const { return static_cast<bool>(source); }
    bool has_exact() const { return static_cast<bool>(exact); }
};

/// Riesz fractional derivative of the quartic bump x^4 (2-x)^4 on [0, 2]
/// (zero-extended), evaluated analytically: the bump expands into monomials,
/// each left Riemann-Liouville derivative is a Gamma-ratio power, the right
/// derivative mirrors the expansion through x -> 2-x, and the two halves
/// combine with the -1/(2 cos(alpha pi / 2)) Riesz factor.  At alpha = 2 the
/// result is the plain second derivative.
double riesz_derivative_quartic_bump(double x, double alpha);

/// The quartic bump itself.
double quartic_bump(double x);

/// Manufactured-solution problem on [0, 2]^2 with exact solution
/// u = i sin(t) x^4 (2-x)^4 y^4 (2-y)^4 and the analytically derived source.
/// Drives the convergence study.
ProblemDef make_polynomial_mms_problem(double alpha);

/// Decaying Gaussian initial datum (2/sqrt(pi)) exp(-(x^2+y^2)) on [-5, 5]^2,
/// source-free.  Drives the conservation study.
ProblemDef make_gaussian_problem();

}  // namespace fracschrod
