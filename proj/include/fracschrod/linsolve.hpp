#pragma once

#include <Eigen/Dense>

#include <cstddef>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "fracschrod/frac_laplacian.hpp"
#include "fracschrod/grid.hpp"

namespace fracschrod {

struct SolverSettings {
    double tol = 1e-10;           ///< relative residual target
    int max_iter = 500;
    bool use_preconditioner = true;
    std::size_t dense_cap = 4096; ///< ceiling for the dense LU fallback
};

enum class SolveMethod { krylov, dense_lu };

struct SolveReport {
    int iterations = 0;
    double final_residual = 0.0;  ///< ||b - A u|| / ||b||
    bool converged = true;
    SolveMethod method = SolveMethod::krylov;
};

/// The left operator of one implicit step:
///   A v = (1/tau) v - i |U^n|^2 v - i (Lx + Ly) v,
/// matrix-free with one fractional-Laplacian apply per call.  The Hermitian
/// part (1/tau) I keeps A invertible for every tau > 0.
class StepSystem {
public:
    /// `potential` holds |U^n|^2 in the field's x-fastest layout.
    StepSystem(const FracLaplacian& op, double tau, std::vector<double> potential);

    const FracLaplacian& op() const { return *op_; }
    double tau() const { return tau_; }
    const std::vector<double>& potential() const { return potential_; }

    ComplexField apply(const ComplexField& v) const;

private:
    const FracLaplacian* op_;
    double tau_;
    std::vector<double> potential_;
};

/// Raised when neither the Krylov iteration nor the dense fallback reaches
/// the residual target; carries the best iterate so the caller can report
/// before aborting.  Silent continuation is not an option.
class SolveFailure : public std::runtime_error {
public:
    SolveFailure(const std::string& msg, SolveReport report, ComplexField best)
        : std::runtime_error(msg), report_(report), best_(std::move(best)) {}

    const SolveReport& report() const { return report_; }
    const ComplexField& best_iterate() const { return best_; }

private:
    SolveReport report_;
    ComplexField best_;
};

/// Solves A u = rhs by preconditioned BiCGSTAB; the preconditioner is the
/// circulant (Strang) approximation of (1/tau) I - i (Lx + Ly), inverted per
/// application by 2D FFT diagonalization.  Falls back to dense LU when the
/// iteration stalls and the system is at most `dense_cap` unknowns.
std::pair<ComplexField, SolveReport> solve(const StepSystem& sys, const ComplexField& rhs,
                                           const SolverSettings& settings = {});

/// Dense counterpart of StepSystem::apply for oracle tests; honors the cap.
Eigen::MatrixXcd assemble_dense_system(const StepSystem& sys,
                                       std::size_t cap = FracLaplacian::default_dense_cap());

}  // namespace fracschrod
