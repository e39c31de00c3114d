#include "fracschrod/problem.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

namespace fracschrod {

namespace {

// x^4 (2-x)^4 = 16 x^4 - 32 x^5 + 24 x^6 - 8 x^7 + x^8
constexpr double kBumpCoef[5] = {16.0, -32.0, 24.0, -8.0, 1.0};

double left_rl_derivative(double x, double alpha) {
    // D^alpha x^p = Gamma(p+1)/Gamma(p+1-alpha) x^{p-alpha}, term by term.
    double s = 0.0;
    for (int m = 0; m < 5; ++m) {
        const double p = 4.0 + m;
        s += kBumpCoef[m] * std::tgamma(p + 1.0) / std::tgamma(p + 1.0 - alpha) *
             std::pow(x, p - alpha);
    }
    return s;
}

}  // namespace

double quartic_bump(double x) {
    const double a = x * x;
    const double b = (2.0 - x) * (2.0 - x);
    return a * a * b * b;
}

double riesz_derivative_quartic_bump(double x, double alpha) {
    if (!(alpha > 1.0) || !(alpha <= 2.0)) {
        throw std::domain_error("riesz_derivative_quartic_bump: alpha must lie in (1, 2]");
    }
    const double factor = -1.0 / (2.0 * std::cos(alpha * std::numbers::pi / 2.0));
    return factor * (left_rl_derivative(x, alpha) + left_rl_derivative(2.0 - x, alpha));
}

ProblemDef make_polynomial_mms_problem(double alpha) {
    ProblemDef p;
    p.exact = [](double x, double y, double t) {
        return Complex(0.0, std::sin(t) * quartic_bump(x) * quartic_bump(y));
    };
    p.initial = [exact = p.exact](double x, double y) { return exact(x, y, 0.0); };
    // g = u_t - i L_alpha u - i |u|^2 u for the exact solution above:
    // real part carries the fractional term and the cubic nonlinearity, the
    // imaginary part the time derivative.
    p.source = [alpha](double x, double y, double t) {
        const double px = quartic_bump(x), py = quartic_bump(y);
        const double lx = riesz_derivative_quartic_bump(x, alpha);
        const double ly = riesz_derivative_quartic_bump(y, alpha);
        const double st = std::sin(t);
        const double bump = px * py;
        const double re = st * (lx * py + px * ly) + st * st * st * bump * bump * bump;
        return Complex(re, std::cos(t) * bump);
    };
    return p;
}

ProblemDef make_gaussian_problem() {
    ProblemDef p;
    p.initial = [](double x, double y) {
        return Complex(2.0 / std::sqrt(std::numbers::pi) * std::exp(-(x * x + y * y)), 0.0);
    };
    return p;
}

}  // namespace fracschrod
