#pragma once

#include <cstddef>
#include <vector>

namespace fracschrod {

/// Fractional centered-difference weights for a Riesz derivative of order
/// alpha in (1, 2].
///
/// The full sequence is symmetric (c_j == c_{-j}), so only the nonnegative
/// half is stored.  It satisfies c_0 > 0, c_j <= 0 for j >= 1, |c_j| decays
/// monotonically, and the full sequence sums to zero over all of Z.
struct FracWeights {
    double alpha = 0.0;
    std::vector<double> half;  ///< half[j] = c_j for j = 0 .. max_index()

    std::size_t max_index() const { return half.size() - 1; }

    /// c_{|j|}; indices beyond the stored range read as 0.
    double at(std::ptrdiff_t j) const {
        const std::size_t a = static_cast<std::size_t>(j < 0 ? -j : j);
        return a < half.size() ? half[a] : 0.0;
    }
};

/// Computes the weight sequence c_0 .. c_{count-1}.
///
/// c_0 is seeded from one Gamma evaluation; every later entry comes from the
/// multiplicative recurrence c_s = (1 - (alpha+1)/(alpha/2+s)) c_{s-1}, which
/// is stable and O(count).
///
/// Throws std::domain_error if alpha is outside (1, 2] or count == 0.
FracWeights compute_weights(double alpha, std::size_t count);

/// | sum_{|j| <= J} c_j e^{i j theta}  -  |2 sin(theta/2)|^alpha |.
///
/// The truncated weight sequence approximates the operator symbol; the
/// residual decays with J and certifies a computed sequence.
double generating_function_residual(const FracWeights& w, double theta);

}  // namespace fracschrod
