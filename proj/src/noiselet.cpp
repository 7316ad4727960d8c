#include "spcam/noiselet.hpp"

#include <cmath>
#include <cstdlib>

namespace spcam {

namespace {

void check_vector(const ComplexField& v, NoiseletOrder order) {
    if (v.cols != 1)
        throw Error("fnt expects a column vector");
    if (v.size() != order.n)
        throw Error("fnt length mismatch: vector has " + std::to_string(v.size()) +
                    " entries, order expects " + std::to_string(order.n));
}

// One in-place pass of the unscaled complex butterfly
//   u' = (1-i) u + (1+i) w,  w' = (1+i) u + (1-i) w        (forward)
//   u' = (1+i) u + (1-i) w,  w' = (1-i) u + (1+i) w        (inverse)
// applied at every stride h = 1, 2, 4, ..., n/2. The 1/2 carried by each
// Kronecker factor is applied once at the end as a global 1/n.
void butterfly_passes(double* re, double* im, std::size_t n, Direction dir) {
    for (std::size_t h = 1; h < n; h <<= 1) {
        for (std::size_t i = 0; i < n; i += h << 1) {
            for (std::size_t j = i; j < i + h; ++j) {
                const double a = re[j], b = im[j];
                const double c = re[j + h], d = im[j + h];
                if (dir == Direction::forward) {
                    re[j] = a + b + c - d;
                    im[j] = b - a + c + d;
                    re[j + h] = a - b + c + d;
                    im[j + h] = a + b + d - c;
                } else {
                    re[j] = a - b + c + d;
                    im[j] = a + b + d - c;
                    re[j + h] = a + b + c - d;
                    im[j + h] = b - a + c + d;
                }
            }
        }
    }
    const double scale = 1.0 / static_cast<double>(n);
    for (std::size_t i = 0; i < n; ++i) {
        re[i] *= scale;
        im[i] *= scale;
    }
}

}  // namespace

ComplexField dense_noiselet(NoiseletOrder order, std::size_t dense_limit) {
    if (order.n > dense_limit)
        throw Error("dense noiselet matrix of size " + std::to_string(order.n) +
                    " exceeds the dense limit " + std::to_string(dense_limit));
    ComplexField m(1, 1);
    m.re[0] = 1.0;
    m.im[0] = 0.0;
    for (unsigned s = 0; s < order.q; ++s) {
        const std::size_t k = m.rows;
        ComplexField next(2 * k, 2 * k);
        for (std::size_t r = 0; r < k; ++r) {
            for (std::size_t c = 0; c < k; ++c) {
                const double a = 0.5 * m.re[r * k + c];
                const double b = 0.5 * m.im[r * k + c];
                // (1-i)/2 * z and (1+i)/2 * z, all dyadic: exact in double
                const double pr = a + b, pi = b - a;  // (1-i) z / 2
                const double qr = a - b, qi = a + b;  // (1+i) z / 2
                next.set(r, c, {pr, pi});
                next.set(r, c + k, {qr, qi});
                next.set(r + k, c, {qr, qi});
                next.set(r + k, c + k, {pr, pi});
            }
        }
        m = std::move(next);
    }
    return m;
}

ComplexField fnt(const ComplexField& v, NoiseletOrder order, Direction dir) {
    check_vector(v, order);
    ComplexField out = v;
    butterfly_passes(out.re.data(), out.im.data(), out.size(), dir);
    return out;
}

void fnt_inplace(ComplexField& v, Direction dir) {
    if (!is_power_of_two(v.size()))
        throw Error("fnt length is not a power of two");
    butterfly_passes(v.re.data(), v.im.data(), v.size(), dir);
}

ComplexField fnt2d(const ComplexField& a, Direction dir) {
    ComplexField out = a;
    fnt2d_inplace(out, dir);
    return out;
}

void fnt2d_inplace(ComplexField& a, Direction dir) {
    if (!is_power_of_two(a.rows) || !is_power_of_two(a.cols))
        throw Error("fnt2d requires power-of-two dimensions, got " +
                    std::to_string(a.rows) + "x" + std::to_string(a.cols));
    // N_r . A . N_c^T on the row-major buffer equals the flat length r*c
    // transform: the Kronecker factors of N_{rc} split into the row and
    // column transforms.
    butterfly_passes(a.re.data(), a.im.data(), a.size(), dir);
}

std::size_t mirror_row(std::size_t j, NoiseletOrder order) {
    if (j < 1 || j > order.n)
        throw Error("row index out of range: " + std::to_string(j));
    return order.n + 1 - j;
}

namespace detail {

void modified_fnt_unchecked(std::int64_t* re, std::int64_t* im, std::size_t n) {
    for (std::size_t h = 1; h < n; h <<= 1) {
        for (std::size_t i = 0; i < n; i += h << 1) {
            for (std::size_t j = i; j < i + h; ++j) {
                const std::int64_t a = re[j], b = im[j];
                const std::int64_t c = re[j + h], d = im[j + h];
                // (u, w) -> (u + i w, w + i u)
                re[j] = a - d;
                im[j] = b + c;
                re[j + h] = c - b;
                im[j + h] = d + a;
            }
        }
    }
    // global (1+i) prefactor as one integer rotation pass
    for (std::size_t i = 0; i < n; ++i) {
        const std::int64_t a = re[i], b = im[i];
        re[i] = a - b;
        im[i] = a + b;
    }
}

}  // namespace detail

IntComplexField modified_fnt(const IntComplexField& v, NoiseletOrder order) {
    if (v.cols != 1)
        throw Error("modified_fnt expects a column vector");
    if (v.size() != order.n)
        throw Error("modified_fnt length mismatch");
    std::int64_t maxabs = 0;
    for (std::size_t i = 0; i < v.size(); ++i) {
        maxabs = std::max(maxabs, std::abs(v.re[i]));
        maxabs = std::max(maxabs, std::abs(v.im[i]));
    }
    // Worst case doubles per stage plus once in the rotation: 2 n maxabs.
    // Keep that within int64 with one spare bit.
    const std::int64_t budget = std::int64_t{1} << 61;
    if (maxabs > 0 && maxabs > budget / static_cast<std::int64_t>(order.n))
        throw Error("modified_fnt input magnitude " + std::to_string(maxabs) +
                    " risks 64-bit overflow at n=" + std::to_string(order.n));
    IntComplexField out = v;
    detail::modified_fnt_unchecked(out.re.data(), out.im.data(), out.size());
    return out;
}

std::complex<double> modified_scale(NoiseletOrder order) {
    // sqrt(2n) exp(i pi (q+1)/4). For odd q the phase lands on {1,i,-1,-i}
    // and sqrt(2n) = 2^((q+1)/2); for even q the sqrt(2)'s combine into
    // sqrt(n)(+-1+-i). Both branches are exact powers of two in double.
    const double root_n = std::ldexp(1.0, static_cast<int>(order.q / 2));
    const double root_2n = std::ldexp(1.0, static_cast<int>((order.q + 1) / 2));
    switch ((order.q + 1) % 8) {
        case 0: return {root_2n, 0.0};
        case 1: return {root_n, root_n};
        case 2: return {0.0, root_2n};
        case 3: return {-root_n, root_n};
        case 4: return {-root_2n, 0.0};
        case 5: return {-root_n, -root_n};
        case 6: return {0.0, -root_2n};
        case 7: return {root_n, -root_n};
    }
    return {};
}

double verify_modified_relation(NoiseletOrder order, std::size_t dense_limit) {
    const ComplexField n_dense = dense_noiselet(order, dense_limit);
    const std::complex<double> scale = modified_scale(order);
    double worst = 0.0;
    IntComplexField e(order.n);
    for (std::size_t col = 0; col < order.n; ++col) {
        e.re.assign(order.n, 0);
        e.im.assign(order.n, 0);
        e.re[col] = 1;
        const IntComplexField t = modified_fnt(e, order);
        for (std::size_t row = 0; row < order.n; ++row) {
            const std::complex<double> want = scale * n_dense.at(row, col);
            const double dr = static_cast<double>(t.re[row]) - want.real();
            const double di = static_cast<double>(t.im[row]) - want.imag();
            worst = std::max(worst, std::max(std::abs(dr), std::abs(di)));
        }
    }
    return worst;
}

}  // namespace spcam
