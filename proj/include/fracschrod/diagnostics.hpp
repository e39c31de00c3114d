#pragma once

#include <filesystem>
#include <optional>
#include <vector>

#include "fracschrod/frac_laplacian.hpp"
#include "fracschrod/grid.hpp"
#include "fracschrod/linsolve.hpp"

namespace fracschrod {

/// Per-step conserved quantities and error data.  Record n pairs the levels
/// (U^n, U^{n+1}): the energy belongs to that pair, mass and error to level n.
struct DiagnosticsRecord {
    int step = 0;
    double time = 0.0;
    double mass = 0.0;    ///< ||U^n||_2
    double energy = 0.0;  ///< E^n
    std::optional<double> linf_error;
    SolveReport solver;
};

/// ||U||_2 = sqrt(hx hy sum |U|^2).
double discrete_mass(const ComplexField& u);

/// E^n = (||Lambda^a U^{n+1}||^2 + ||Lambda^a U^n||^2)/2
///       - (hx hy / 2) sum |U^n|^2 |U^{n+1}|^2,
/// with the quadratic forms evaluated through the operator (no square root).
double discrete_energy(const ComplexField& u_n, const ComplexField& u_np1,
                       const FracLaplacian& op);

/// Columns: n, t, mass, energy, linf_error, iterations, residual.
/// Energy prints with 17 significant digits; a missing error prints empty.
void write_diagnostics_csv(const std::filesystem::path& path,
                           const std::vector<DiagnosticsRecord>& series, int stride = 1);

}  // namespace fracschrod
