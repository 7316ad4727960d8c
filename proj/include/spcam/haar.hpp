#pragma once

#include "spcam/core.hpp"

namespace spcam {

/// Multilevel 2D Haar coefficients, same shape as the source image.
/// Level L stores its detail bands in the standard pyramid layout with the
/// remaining approximation in the top-left block.
struct WaveletCoeffs {
    std::size_t rows = 0;
    std::size_t cols = 0;
    unsigned levels = 0;
    std::vector<double> values;

    WaveletCoeffs() = default;
    WaveletCoeffs(std::size_t r, std::size_t c, unsigned lv)
        : rows(r), cols(c), levels(lv), values(r * c, 0.0) {}

    std::size_t size() const { return values.size(); }
};

/// Full decomposition depth for an r x c image (a 1 x c or r x 1 shape is
/// treated as a 1D signal).
unsigned haar_max_levels(std::size_t rows, std::size_t cols);

/// Orthonormal multilevel 2D Haar analysis. Sides must be powers of two and
/// levels <= haar_max_levels; levels == 0 selects the full depth.
WaveletCoeffs haar_analyze(const SceneImage& x, unsigned levels = 0);

/// Exact inverse of haar_analyze.
SceneImage haar_synthesize(const WaveletCoeffs& f);

/// Mutual coherence sqrt(n) . max |<phi_j, psi_k>| over all row pairs of two
/// dense n x n bases (complex modulus).
double coherence(const ComplexField& phi_basis, const std::vector<double>& psi_basis,
                 std::size_t n);

/// Dense orthonormal 1D Haar analysis matrix (row k = k-th Haar function),
/// full depth; rows x cols = n x n, row-major. Test-scoped like
/// dense_noiselet.
std::vector<double> dense_haar_1d(NoiseletOrder order);

}  // namespace spcam
