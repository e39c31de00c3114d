#include "fracschrod/frac_laplacian.hpp"

#include <fftw3.h>

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <stdexcept>
#include <string>

namespace fracschrod {

namespace {

// One-off FFT of the circulant embedding of a symmetric Toeplitz first
// column: [w0 .. w_{n-1} 0 w_{n-1} .. w1], length 2n.
std::vector<Complex> embedding_symbol(const std::vector<double>& w) {
    const int n = static_cast<int>(w.size());
    const int len = 2 * n;
    detail::ComplexBuffer buf = detail::alloc_complex(len);
    for (int r = 0; r < n; ++r) buf[r] = Complex(w[r], 0.0);
    buf[n] = Complex(0.0, 0.0);
    for (int r = 1; r < n; ++r) buf[len - r] = Complex(w[r], 0.0);

    {
        std::lock_guard<std::mutex> lock(detail::fftw_planner_mutex());
        fftw_plan p = fftw_plan_dft_1d(len, reinterpret_cast<fftw_complex*>(buf.get()),
                                       reinterpret_cast<fftw_complex*>(buf.get()),
                                       FFTW_FORWARD, FFTW_ESTIMATE);
        fftw_execute(p);
        fftw_destroy_plan(p);
    }
    return std::vector<Complex>(buf.get(), buf.get() + len);
}

}  // namespace

FracLaplacian::FracLaplacian(const GridSpec& grid)
    : FracLaplacian(grid, compute_weights(grid.alpha,
                                          static_cast<std::size_t>(std::max(grid.mx, grid.my)) - 1)) {}

FracLaplacian::FracLaplacian(const GridSpec& grid, const FracWeights& weights)
    : grid_(grid),
      plans_x_(2 * grid.nx(), grid.ny()),
      plans_y_(2 * grid.ny(), grid.nx()) {
    grid_.validate();
    if (weights.alpha != grid_.alpha) {
        throw std::invalid_argument("FracLaplacian: weights and grid disagree on alpha");
    }
    // The bounded-domain sums reach offsets up to max(mx, my) - 2.
    const std::size_t need = static_cast<std::size_t>(std::max(grid_.nx(), grid_.ny()));
    if (weights.half.size() < need) {
        throw std::invalid_argument("FracLaplacian: weight sequence shorter than the grid needs");
    }
    build_symbols(weights);
}

void FracLaplacian::build_symbols(const FracWeights& weights) {
    const double sx = std::pow(grid_.hx(), -grid_.alpha);
    const double sy = std::pow(grid_.hy(), -grid_.alpha);
    wx_.resize(grid_.nx());
    wy_.resize(grid_.ny());
    for (int j = 0; j < grid_.nx(); ++j) wx_[j] = weights.half[j] * sx;
    for (int j = 0; j < grid_.ny(); ++j) wy_[j] = weights.half[j] * sy;
    symbol_x_ = embedding_symbol(wx_);
    symbol_y_ = embedding_symbol(wy_);
}

ComplexField FracLaplacian::apply(const ComplexField& u) const {
    if (!u.grid().same_mesh(grid_)) {
        throw std::invalid_argument("FracLaplacian::apply: field does not conform to the operator grid");
    }
    const int nx = grid_.nx(), ny = grid_.ny();
    const int lx = 2 * nx, ly = 2 * ny;
    ComplexField out(grid_);

    // x-direction pass: one padded circulant product per row.
    {
        detail::ComplexBuffer buf = detail::alloc_complex(static_cast<std::size_t>(ny) * lx);
        for (int iy = 0; iy < ny; ++iy) {
            Complex* row = buf.get() + static_cast<std::size_t>(iy) * lx;
            for (int ix = 0; ix < nx; ++ix) row[ix] = u(ix, iy);
        }
        plans_x_.forward(buf.get());
        const double scale = 1.0 / lx;
        for (int iy = 0; iy < ny; ++iy) {
            Complex* row = buf.get() + static_cast<std::size_t>(iy) * lx;
            for (int k = 0; k < lx; ++k) row[k] *= symbol_x_[k] * scale;
        }
        plans_x_.backward(buf.get());
        for (int iy = 0; iy < ny; ++iy) {
            Complex* row = buf.get() + static_cast<std::size_t>(iy) * lx;
            for (int ix = 0; ix < nx; ++ix) out(ix, iy) = -row[ix];
        }
    }

    // y-direction pass on the transposed layout.
    {
        detail::ComplexBuffer buf = detail::alloc_complex(static_cast<std::size_t>(nx) * ly);
        for (int ix = 0; ix < nx; ++ix) {
            Complex* col = buf.get() + static_cast<std::size_t>(ix) * ly;
            for (int iy = 0; iy < ny; ++iy) col[iy] = u(ix, iy);
        }
        plans_y_.forward(buf.get());
        const double scale = 1.0 / ly;
        for (int ix = 0; ix < nx; ++ix) {
            Complex* col = buf.get() + static_cast<std::size_t>(ix) * ly;
            for (int k = 0; k < ly; ++k) col[k] *= symbol_y_[k] * scale;
        }
        plans_y_.backward(buf.get());
        for (int ix = 0; ix < nx; ++ix) {
            Complex* col = buf.get() + static_cast<std::size_t>(ix) * ly;
            for (int iy = 0; iy < ny; ++iy) out(ix, iy) -= col[iy];
        }
    }

    return out;
}

Eigen::MatrixXd FracLaplacian::assemble_dense(std::size_t cap) const {
    const std::size_t n = grid_.unknowns();
    if (n > cap) {
        throw std::length_error("FracLaplacian::assemble_dense: " + std::to_string(n) +
                                " unknowns exceed the dense cap of " + std::to_string(cap));
    }
    const int nx = grid_.nx(), ny = grid_.ny();
    Eigen::MatrixXd d = Eigen::MatrixXd::Zero(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(n));
    for (int iy = 0; iy < ny; ++iy) {
        for (int ix = 0; ix < nx; ++ix) {
            const Eigen::Index row = static_cast<Eigen::Index>(iy) * nx + ix;
            for (int jx = 0; jx < nx; ++jx) {
                d(row, static_cast<Eigen::Index>(iy) * nx + jx) += wx_[std::abs(ix - jx)];
            }
            for (int jy = 0; jy < ny; ++jy) {
                d(row, static_cast<Eigen::Index>(jy) * nx + ix) += wy_[std::abs(iy - jy)];
            }
        }
    }
    return d;
}

double FracLaplacian::energy_quadratic_form(const ComplexField& u) const {
    const ComplexField lu = apply(u);
    long double acc = 0.0L;
    const Complex* a = lu.data();
    const Complex* b = u.data();
    for (std::size_t i = 0; i < u.size(); ++i) {
        // Re[(-Lu) conj(u)]
        acc -= static_cast<long double>(a[i].real() * b[i].real() + a[i].imag() * b[i].imag());
    }
    const double q = static_cast<double>(acc) * grid_.hx() * grid_.hy();
    return q > 0.0 ? q : 0.0;
}

std::size_t FracLaplacian::default_dense_cap() {
    if (const char* env = std::getenv("FRACSCHROD_DENSE_CAP")) {
        char* end = nullptr;
        const unsigned long long v = std::strtoull(env, &end, 10);
        if (end != env && v > 0) return static_cast<std::size_t>(v);
    }
    return 4096;
}

}  // namespace fracschrod
