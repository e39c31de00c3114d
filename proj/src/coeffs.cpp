#include "fracschrod/coeffs.hpp"

#include <cmath>
#include <complex>
#include <stdexcept>

namespace fracschrod {

FracWeights compute_weights(double alpha, std::size_t count) {
    if (!(alpha > 1.0) || !(alpha <= 2.0)) {
        throw std::domain_error("compute_weights: alpha must lie in (1, 2]");
    }
    if (count == 0) {
        throw std::domain_error("compute_weights: count must be >= 1");
    }

    FracWeights w;
    w.alpha = alpha;
    w.half.resize(count);
    w.half[0] = std::tgamma(alpha + 1.0) / std::pow(std::tgamma(alpha / 2.0 + 1.0), 2);
    for (std::size_t s = 1; s < count; ++s) {
        const double sd = static_cast<double>(s);
        w.half[s] = (1.0 - (alpha + 1.0) / (alpha / 2.0 + sd)) * w.half[s - 1];
    }
    return w;
}

double generating_function_residual(const FracWeights& w, double theta) {
    // c_0 + 2 sum_{j>=1} c_j cos(j theta); the imaginary parts cancel by
    // symmetry, so the truncated symbol is real.
    long double sum = w.half[0];
    for (std::size_t j = 1; j < w.half.size(); ++j) {
        sum += 2.0L * static_cast<long double>(w.half[j]) *
               std::cos(static_cast<long double>(j) * static_cast<long double>(theta));
    }
    const long double exact = std::pow(std::fabs(2.0L * std::sin(static_cast<long double>(theta) / 2.0L)),
                                       static_cast<long double>(w.alpha));
    return static_cast<double>(std::fabs(sum - exact));
}

}  // namespace fracschrod
