#pragma once

#include <Eigen/Dense>

#include <cstddef>
#include <vector>

#include "fracschrod/coeffs.hpp"
#include "fracschrod/fft_utils.hpp"
#include "fracschrod/grid.hpp"

namespace fracschrod {

/// 2D discrete fractional Laplacian Lx + Ly on the interior grid, applied
/// matrix-free: each grid line is a symmetric-Toeplitz product evaluated by
/// circulant embedding and FFT, O(M log M) per line.
///
/// Sign convention: apply() returns (Lx + Ly) u, whose negative is the
/// symmetric positive definite matrix D = I (x) Cx + Cy (x) I returned by
/// assemble_dense().
///
/// Immutable after construction; apply() may be called concurrently because
/// every call owns its transform buffers.
class FracLaplacian {
public:
    explicit FracLaplacian(const GridSpec& grid);
    FracLaplacian(const GridSpec& grid, const FracWeights& weights);

    const GridSpec& grid() const { return grid_; }

    /// Per-axis weights already scaled by 1/h^alpha, index 0 .. n-1.
    const std::vector<double>& scaled_weights_x() const { return wx_; }
    const std::vector<double>& scaled_weights_y() const { return wy_; }

    /// (Lx + Ly) u.
    ComplexField apply(const ComplexField& u) const;

    /// Dense D = -(Lx + Ly) in lexicographic (x-fastest) ordering.  Intended
    /// as a cross-check oracle for small grids; refuses sizes above `cap`
    /// unknowns (default 4096, overridable via FRACSCHROD_DENSE_CAP).
    Eigen::MatrixXd assemble_dense(std::size_t cap = default_dense_cap()) const;

    /// ||Lambda^alpha u||^2 = (-(Lx+Ly) u, u), computed from one apply and
    /// clamped at zero.  The matrix square root never appears here.
    double energy_quadratic_form(const ComplexField& u) const;

    static std::size_t default_dense_cap();

private:
    void build_symbols(const FracWeights& weights);

    GridSpec grid_;
    std::vector<double> wx_, wy_;
    std::vector<Complex> symbol_x_, symbol_y_;  // FFT of circulant embeddings
    detail::BatchPlan plans_x_;                 // length 2 nx, batch ny
    detail::BatchPlan plans_y_;                 // length 2 ny, batch nx
};

}  // namespace fracschrod
