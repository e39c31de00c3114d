#include "fracschrod/grid.hpp"

#include <stdexcept>
#include <string>

namespace fracschrod {

void GridSpec::validate() const {
    if (!(x_max > x_min) || !(y_max > y_min)) {
        throw std::invalid_argument("GridSpec: domain bounds must satisfy x_max > x_min, y_max > y_min");
    }
    if (mx < 2 || my < 2) {
        throw std::invalid_argument("GridSpec: mesh counts mx, my must be >= 2");
    }
    if (!(alpha > 1.0) || !(alpha <= 2.0)) {
        throw std::invalid_argument("GridSpec: alpha must lie in (1, 2]");
    }
    if (!(tau > 0.0)) {
        throw std::invalid_argument("GridSpec: tau must be positive");
    }
    if (!(t_final > 0.0)) {
        throw std::invalid_argument("GridSpec: t_final must be positive");
    }
}

void require_conforms(const ComplexField& a, const ComplexField& b, const char* where) {
    if (!a.conforms(b)) {
        throw std::invalid_argument(std::string(where) + ": fields live on different meshes");
    }
}

double field_l2_norm(const ComplexField& u) {
    long double s = 0.0L;
    const Complex* p = u.data();
    for (std::size_t i = 0; i < u.size(); ++i) {
        s += static_cast<long double>(std::norm(p[i]));
    }
    return std::sqrt(static_cast<double>(s) * u.grid().hx() * u.grid().hy());
}

double field_max_norm(const ComplexField& u) {
    double m = 0.0;
    const Complex* p = u.data();
    for (std::size_t i = 0; i < u.size(); ++i) {
        m = std::max(m, std::abs(p[i]));
    }
    return m;
}

}  // namespace fracschrod
