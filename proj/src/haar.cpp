#include "spcam/haar.hpp"

#include "spcam/noiselet.hpp"

#include <cmath>

namespace spcam {

namespace {

constexpr double kInvSqrt2 = 0.70710678118654752440;

// One analysis step along a strided length-len slice: pairwise
// (a+b)/sqrt2 into the first half, (a-b)/sqrt2 into the second.
void step_analyze(double* data, std::size_t len, std::size_t stride,
                  std::vector<double>& tmp) {
    const std::size_t half = len / 2;
    for (std::size_t i = 0; i < half; ++i) {
        const double a = data[(2 * i) * stride];
        const double b = data[(2 * i + 1) * stride];
        tmp[i] = (a + b) * kInvSqrt2;
        tmp[half + i] = (a - b) * kInvSqrt2;
    }
    for (std::size_t i = 0; i < len; ++i)
        data[i * stride] = tmp[i];
}

void step_synthesize(double* data, std::size_t len, std::size_t stride,
                     std::vector<double>& tmp) {
    const std::size_t half = len / 2;
    for (std::size_t i = 0; i < half; ++i) {
        const double s = data[i * stride];
        const double d = data[(half + i) * stride];
        tmp[2 * i] = (s + d) * kInvSqrt2;
        tmp[2 * i + 1] = (s - d) * kInvSqrt2;
    }
    for (std::size_t i = 0; i < len; ++i)
        data[i * stride] = tmp[i];
}

void check_shape(std::size_t rows, std::size_t cols, unsigned levels) {
    if (rows == 0 || cols == 0 || !is_power_of_two(rows) || !is_power_of_two(cols))
        throw Error("haar transform requires power-of-two sides, got " +
                    std::to_string(rows) + "x" + std::to_string(cols));
    if (levels > haar_max_levels(rows, cols))
        throw Error("haar levels " + std::to_string(levels) + " too deep for " +
                    std::to_string(rows) + "x" + std::to_string(cols));
}

}  // namespace

unsigned haar_max_levels(std::size_t rows, std::size_t cols) {
    if (rows == 1)
        return static_cast<unsigned>(std::countr_zero(cols));
    if (cols == 1)
        return static_cast<unsigned>(std::countr_zero(rows));
    return static_cast<unsigned>(std::countr_zero(std::min(rows, cols)));
}

WaveletCoeffs haar_analyze(const SceneImage& x, unsigned levels) {
    if (levels == 0)
        levels = haar_max_levels(x.rows, x.cols);
    check_shape(x.rows, x.cols, levels);

    WaveletCoeffs f(x.rows, x.cols, levels);
    f.values = x.pixels;
    std::vector<double> tmp(std::max(x.rows, x.cols));

    std::size_t r = x.rows, c = x.cols;
    for (unsigned lv = 0; lv < levels; ++lv) {
        if (c > 1)
            for (std::size_t row = 0; row < r; ++row)
                step_analyze(f.values.data() + row * x.cols, c, 1, tmp);
        if (r > 1)
            for (std::size_t col = 0; col < c; ++col)
                step_analyze(f.values.data() + col, r, x.cols, tmp);
        if (c > 1) c /= 2;
        if (r > 1) r /= 2;
    }
    return f;
}

SceneImage haar_synthesize(const WaveletCoeffs& f) {
    check_shape(f.rows, f.cols, f.levels);
    SceneImage x(f.rows, f.cols);
    x.pixels = f.values;
    std::vector<double> tmp(std::max(f.rows, f.cols));

    // Recompute the block sizes the analysis ended at, then undo in reverse.
    std::size_t r = f.rows, c = f.cols;
    for (unsigned lv = 0; lv < f.levels; ++lv) {
        if (c > 1) c /= 2;
        if (r > 1) r /= 2;
    }
    for (unsigned lv = 0; lv < f.levels; ++lv) {
        const std::size_t rr = (f.rows == 1) ? 1 : r * 2;
        const std::size_t cc = (f.cols == 1) ? 1 : c * 2;
        if (rr > 1)
            for (std::size_t col = 0; col < cc; ++col)
                step_synthesize(x.pixels.data() + col, rr, f.cols, tmp);
        if (cc > 1)
            for (std::size_t row = 0; row < rr; ++row)
                step_synthesize(x.pixels.data() + row * f.cols, cc, 1, tmp);
        r = rr;
        c = cc;
    }
    return x;
}

double coherence(const ComplexField& phi_basis, const std::vector<double>& psi_basis,
                 std::size_t n) {
    if (phi_basis.rows != n || phi_basis.cols != n || psi_basis.size() != n * n)
        throw Error("coherence requires two n x n bases");
    double worst = 0.0;
    for (std::size_t j = 0; j < n; ++j) {
        for (std::size_t k = 0; k < n; ++k) {
            double acc_re = 0.0, acc_im = 0.0;
            const double* psi = psi_basis.data() + k * n;
            for (std::size_t t = 0; t < n; ++t) {
                acc_re += phi_basis.re[j * n + t] * psi[t];
                acc_im += phi_basis.im[j * n + t] * psi[t];
            }
            worst = std::max(worst, acc_re * acc_re + acc_im * acc_im);
        }
    }
    return std::sqrt(static_cast<double>(n)) * std::sqrt(worst);
}

std::vector<double> dense_haar_1d(NoiseletOrder order) {
    const std::size_t n = order.n;
    if (n > kDenseLimit)
        throw Error("dense haar basis exceeds the dense limit");
    std::vector<double> basis(n * n);
    SceneImage unit(1, n);
    for (std::size_t t = 0; t < n; ++t) {
        unit.pixels.assign(n, 0.0);
        unit.pixels[t] = 1.0;
        const WaveletCoeffs col = haar_analyze(unit);
        for (std::size_t k = 0; k < n; ++k)
            basis[k * n + t] = col.values[k];
    }
    return basis;
}

}  // namespace spcam
