#pragma once

#include <bit>
#include <complex>
#include <cstddef>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

namespace spcam {

class Error : public std::runtime_error {
public:
    explicit Error(const std::string& what) : std::runtime_error(what) {}
};

inline bool is_power_of_two(std::size_t n) {
    return n > 0 && std::has_single_bit(n);
}

/// Size descriptor for transforms of dimension n = 2^q.
struct NoiseletOrder {
    unsigned q = 0;
    std::size_t n = 1;

    static NoiseletOrder from_exponent(unsigned q) {
        if (q >= 63)
            throw Error("noiselet order too large: q=" + std::to_string(q));
        return NoiseletOrder{q, std::size_t{1} << q};
    }

    static NoiseletOrder from_size(std::size_t n) {
        if (!is_power_of_two(n))
            throw Error("size is not a power of two: " + std::to_string(n));
        return NoiseletOrder{static_cast<unsigned>(std::countr_zero(n)), n};
    }

    bool even_q() const { return (q % 2) == 0; }
};

/// Complex array held as separate real and imaginary planes.
/// Vectors use cols == 1; matrices are row-major.
struct ComplexField {
    std::size_t rows = 0;
    std::size_t cols = 1;
    std::vector<double> re;
    std::vector<double> im;

    ComplexField() = default;
    ComplexField(std::size_t r, std::size_t c)
        : rows(r), cols(c), re(r * c, 0.0), im(r * c, 0.0) {}

    static ComplexField vector(std::size_t n) { return ComplexField(n, 1); }

    std::size_t size() const { return re.size(); }

    std::complex<double> at(std::size_t i) const { return {re[i], im[i]}; }
    std::complex<double> at(std::size_t r, std::size_t c) const {
        return at(r * cols + c);
    }
    void set(std::size_t i, std::complex<double> z) {
        re[i] = z.real();
        im[i] = z.imag();
    }
    void set(std::size_t r, std::size_t c, std::complex<double> z) {
        set(r * cols + c, z);
    }
};

/// Integer counterpart of ComplexField for the modified noiselet transform.
struct IntComplexField {
    std::size_t rows = 0;
    std::size_t cols = 1;
    int width = 64;  // bit width of the representation
    std::vector<std::int64_t> re;
    std::vector<std::int64_t> im;

    IntComplexField() = default;
    explicit IntComplexField(std::size_t n)
        : rows(n), cols(1), re(n, 0), im(n, 0) {}

    std::size_t size() const { return re.size(); }
};

/// Grayscale image; pixel values are reflectance/transmittance in [0,1].
struct SceneImage {
    std::size_t rows = 0;
    std::size_t cols = 0;
    std::vector<double> pixels;

    SceneImage() = default;
    SceneImage(std::size_t r, std::size_t c, double fill = 0.0)
        : rows(r), cols(c), pixels(r * c, fill) {}

    std::size_t size() const { return pixels.size(); }
    double& at(std::size_t r, std::size_t c) { return pixels[r * cols + c]; }
    double at(std::size_t r, std::size_t c) const { return pixels[r * cols + c]; }
};

}  // namespace spcam
