#include "fracschrod/spectral.hpp"

#include <fftw3.h>

#include <cmath>
#include <numbers>
#include <stdexcept>

#include "fracschrod/fft_utils.hpp"

namespace fracschrod {

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

int signed_bin(int b, int m) { return b < (m + 1) / 2 ? b : b - m; }

void run_2d(Complex* buf, int rows, int cols, bool forward) {
    std::lock_guard<std::mutex> lock(detail::fftw_planner_mutex());
    fftw_plan p = fftw_plan_dft_2d(rows, cols, reinterpret_cast<fftw_complex*>(buf),
                                   reinterpret_cast<fftw_complex*>(buf),
                                   forward ? FFTW_FORWARD : FFTW_BACKWARD, FFTW_ESTIMATE);
    fftw_execute(p);
    fftw_destroy_plan(p);
}

// Adaptive Simpson quadrature; enough for the smooth decaying integrands here.
double simpson(double (*f)(double, double), double p, double a, double b, double fa, double fb,
               double fm, double eps, int depth) {
    const double m = 0.5 * (a + b);
    const double lm = 0.5 * (a + m), rm = 0.5 * (m + b);
    const double flm = f(lm, p), frm = f(rm, p);
    const double whole = (b - a) / 6.0 * (fa + 4.0 * fm + fb);
    const double left = (m - a) / 6.0 * (fa + 4.0 * flm + fm);
    const double right = (b - m) / 6.0 * (fm + 4.0 * frm + fb);
    if (depth <= 0 || std::fabs(left + right - whole) < 15.0 * eps) {
        return left + right + (left + right - whole) / 15.0;
    }
    return simpson(f, p, a, m, fa, fm, flm, eps / 2.0, depth - 1) +
           simpson(f, p, m, b, fm, fb, frm, eps / 2.0, depth - 1);
}

double embed_integrand(double k, double alpha) { return 1.0 / (1.0 + std::pow(k, alpha)); }

double band_integral(double alpha, double band) {
    // 2 * int_0^band dk / (1 + k^alpha)
    const double fa = embed_integrand(0.0, alpha);
    const double fb = embed_integrand(band, alpha);
    const double fm = embed_integrand(0.5 * band, alpha);
    return 2.0 * simpson(embed_integrand, alpha, 0.0, band, fa, fb, fm, 1e-13, 50);
}

}  // namespace

double SpectralField::k1(int b) const {
    return kTwoPi * signed_bin(b, grid.mx) / (grid.x_max - grid.x_min);
}

double SpectralField::k2(int b) const {
    return kTwoPi * signed_bin(b, grid.my) / (grid.y_max - grid.y_min);
}

double SpectralField::cell() const {
    const double dk1 = kTwoPi / (grid.x_max - grid.x_min);
    const double dk2 = kTwoPi / (grid.y_max - grid.y_min);
    return dk1 * dk2;
}

SpectralField forward_transform(const ComplexField& u) {
    const GridSpec& g = u.grid();
    const int mx = g.mx, my = g.my;
    detail::ComplexBuffer buf = detail::alloc_complex(static_cast<std::size_t>(mx) * my);
    // Zero extension: boundary row/column stay zero, interior node j sits at
    // grid position j (phases follow the x_j = j h convention).
    for (int iy = 0; iy < g.ny(); ++iy) {
        for (int ix = 0; ix < g.nx(); ++ix) {
            buf[static_cast<std::size_t>(iy + 1) * mx + (ix + 1)] = u(ix, iy);
        }
    }
    run_2d(buf.get(), my, mx, true);

    SpectralField s;
    s.grid = g;
    s.coef.assign(buf.get(), buf.get() + static_cast<std::size_t>(mx) * my);
    const double scale = g.hx() * g.hy() / kTwoPi;
    for (Complex& c : s.coef) c *= scale;
    return s;
}

ComplexField inverse_transform(const SpectralField& s) {
    const GridSpec& g = s.grid;
    const int mx = g.mx, my = g.my;
    detail::ComplexBuffer buf = detail::alloc_complex(static_cast<std::size_t>(mx) * my);
    std::copy(s.coef.begin(), s.coef.end(), buf.get());
    run_2d(buf.get(), my, mx, false);

    ComplexField u(g);
    const double scale = kTwoPi / (g.hx() * g.hy() * mx * my);
    for (int iy = 0; iy < g.ny(); ++iy) {
        for (int ix = 0; ix < g.nx(); ++ix) {
            u(ix, iy) = buf[static_cast<std::size_t>(iy + 1) * mx + (ix + 1)] * scale;
        }
    }
    return u;
}

SobolevNorms sobolev_norms(const ComplexField& u, double alpha) {
    if (!(alpha > 1.0) || !(alpha <= 2.0)) {
        throw std::domain_error("sobolev_norms: alpha must lie in (1, 2]");
    }
    const SpectralField s = forward_transform(u);
    const int mx = u.grid().mx, my = u.grid().my;

    long double sum_l2 = 0.0L, sum_half = 0.0L, sum_alpha = 0.0L;
    for (int by = 0; by < my; ++by) {
        const double a2 = std::pow(std::fabs(s.k2(by)), alpha);
        for (int bx = 0; bx < mx; ++bx) {
            const double a1 = std::pow(std::fabs(s.k1(bx)), alpha);
            const double p = std::norm(s.coef[static_cast<std::size_t>(by) * mx + bx]);
            sum_l2 += p;
            sum_half += (a1 + a2) * p;
            sum_alpha += (2.0 * a1 * a2 + a1 * a1 + a2 * a2) * p;
        }
    }
    const double cell = s.cell();
    SobolevNorms out;
    out.l2 = std::sqrt(static_cast<double>(sum_l2) * cell);
    out.semi_half = std::sqrt(static_cast<double>(sum_half) * cell);
    out.semi_alpha = std::sqrt(static_cast<double>(sum_alpha) * cell);
    out.full = std::sqrt(static_cast<double>(sum_l2 + sum_half + sum_alpha) * cell);
    return out;
}

double sobolev_embedding_constant(double alpha, const GridSpec& grid) {
    if (!(alpha > 1.0) || !(alpha <= 2.0)) {
        throw std::domain_error("sobolev_embedding_constant: alpha must lie in (1, 2]");
    }
    const double ix = band_integral(alpha, std::numbers::pi / grid.hx());
    const double iy = band_integral(alpha, std::numbers::pi / grid.hy());
    return std::sqrt(ix * iy) / kTwoPi;
}

}  // namespace fracschrod
