#pragma once

#include <cmath>
#include <complex>
#include <cstddef>
#include <vector>

namespace fracschrod {

using Complex = std::complex<double>;

/// Rectangular domain, mesh counts and time-stepping parameters shared by
/// every module.  Interior unknowns per axis are mx-1 and my-1; the boundary
/// ring carries homogeneous Dirichlet data and is never stored.
struct GridSpec {
    double x_min = 0.0, x_max = 1.0;
    double y_min = 0.0, y_max = 1.0;
    int mx = 2, my = 2;      ///< cells per axis (>= 2)
    double alpha = 2.0;      ///< fractional order in (1, 2]
    double tau = 1.0;        ///< time step
    double t_final = 1.0;

    double hx() const { return (x_max - x_min) / mx; }
    double hy() const { return (y_max - y_min) / my; }
    int nx() const { return mx - 1; }
    int ny() const { return my - 1; }
    std::size_t unknowns() const { return static_cast<std::size_t>(nx()) * ny(); }
    int num_steps() const { return static_cast<int>(std::llround(t_final / tau)); }

    /// Coordinates of interior node (ix, iy), 0-based: x = x_min + (ix+1) hx.
    double x(int ix) const { return x_min + (ix + 1) * hx(); }
    double y(int iy) const { return y_min + (iy + 1) * hy(); }

    /// Throws std::invalid_argument when a field is out of contract.
    void validate() const;

    bool same_mesh(const GridSpec& o) const {
        return mx == o.mx && my == o.my && x_min == o.x_min && x_max == o.x_max &&
               y_min == o.y_min && y_max == o.y_max;
    }
};

/// Complex-valued grid function on the interior nodes.  Out-of-range values
/// are zero by the boundary condition, which every operator relies on.
/// Storage is lexicographic with x fastest, matching the repo-wide
/// vectorization order.
class ComplexField {
public:
    ComplexField() = default;
    explicit ComplexField(const GridSpec& grid)
        : grid_(grid), values_(grid.unknowns(), Complex{0.0, 0.0}) {}

    const GridSpec& grid() const { return grid_; }
    int nx() const { return grid_.nx(); }
    int ny() const { return grid_.ny(); }
    std::size_t size() const { return values_.size(); }

    Complex& operator()(int ix, int iy) { return values_[static_cast<std::size_t>(iy) * nx() + ix]; }
    const Complex& operator()(int ix, int iy) const {
        return values_[static_cast<std::size_t>(iy) * nx() + ix];
    }

    Complex* data() { return values_.data(); }
    const Complex* data() const { return values_.data(); }

    bool conforms(const ComplexField& o) const { return grid_.same_mesh(o.grid_); }

private:
    GridSpec grid_;
    std::vector<Complex> values_;
};

/// Throws std::invalid_argument naming `where` when the two fields live on
/// different meshes.
void require_conforms(const ComplexField& a, const ComplexField& b, const char* where);

/// Samples f(x, y) at every interior node.
template <class F>
ComplexField sample_interior(const GridSpec& grid, F&& f) {
    ComplexField u(grid);
    for (int iy = 0; iy < grid.ny(); ++iy) {
        for (int ix = 0; ix < grid.nx(); ++ix) {
            u(ix, iy) = f(grid.x(ix), grid.y(iy));
        }
    }
    return u;
}

/// sqrt(hx hy sum |u|^2), the discrete L2 norm of Eq-style inner products.
double field_l2_norm(const ComplexField& u);

/// max |u| over interior nodes.
double field_max_norm(const ComplexField& u);

}  // namespace fracschrod
