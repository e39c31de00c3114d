#pragma once

#include <vector>

#include "fracschrod/grid.hpp"

namespace fracschrod {

/// Semi-discrete Fourier transform of a zero-extended grid function,
/// evaluated on the uniform frequency lattice k = 2 pi m / (domain length)
/// per axis, m = -M/2 .. M/2-1 (FFT bin order).  With rectangle-rule weights
/// equal to the lattice spacing, Parseval holds to roundoff, which makes the
/// lattice the natural quadrature for every norm below.
struct SpectralField {
    GridSpec grid;
    std::vector<Complex> coef;  ///< size mx*my, row-major [ky][kx] in FFT bin order

    /// Frequency of x-bin b (signed lattice multiple of 2 pi / (x_max - x_min)).
    double k1(int b) const;
    /// Frequency of y-bin b.
    double k2(int b) const;
    /// Frequency-cell area dk1 * dk2.
    double cell() const;
};

SpectralField forward_transform(const ComplexField& u);
ComplexField inverse_transform(const SpectralField& s);

struct SobolevNorms {
    double l2 = 0.0;         ///< ||u||_2
    double semi_half = 0.0;  ///< |u|_{H^{alpha/2}}
    double semi_alpha = 0.0; ///< |u|_{H^alpha}
    double full = 0.0;       ///< ||u||_{H^alpha}
};

/// Spectral-quadrature fractional Sobolev norms.  The identity
/// full^2 == l2^2 + semi_half^2 + semi_alpha^2 holds by construction.
SobolevNorms sobolev_norms(const ComplexField& u, double alpha);

/// The embedding constant C_alpha of the discrete Sobolev inequality
/// ||u||_inf <= C_alpha ||u||_{H^alpha}: numeric integral of
/// 1/((1+|k1|^alpha)(1+|k2|^alpha)) over the frequency band, square-rooted
/// and divided by 2 pi.
double sobolev_embedding_constant(double alpha, const GridSpec& grid);

}  // namespace fracschrod
