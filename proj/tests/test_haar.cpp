#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <random>

#include "oracle.hpp"
#include "spcam/haar.hpp"
#include "spcam/noiselet.hpp"

using namespace spcam;

namespace {

SceneImage random_image(std::size_t rows, std::size_t cols, std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    std::normal_distribution<double> gauss;
    SceneImage img(rows, cols);
    for (double& v : img.pixels)
        v = gauss(rng);
    return img;
}

double norm2(const std::vector<double>& v) {
    double acc = 0.0;
    for (double x : v)
        acc += x * x;
    return std::sqrt(acc);
}

}  // namespace

TEST_CASE("constant image concentrates on the scaling coefficient") {
    const double c = 0.37;
    SceneImage img(16, 16, c);
    const WaveletCoeffs f = haar_analyze(img);
    CHECK(f.values[0] == doctest::Approx(c * 16.0).epsilon(1e-12));
    double rest = 0.0;
    for (std::size_t i = 1; i < f.size(); ++i)
        rest = std::max(rest, std::abs(f.values[i]));
    CHECK(rest < 1e-12);
}

TEST_CASE("2x2 analysis closed form") {
    SceneImage img(2, 2);
    const double a = 1.0, b = 2.0, c = 3.0, d = 5.0;
    img.at(0, 0) = a;
    img.at(0, 1) = b;
    img.at(1, 0) = c;
    img.at(1, 1) = d;
    const WaveletCoeffs f = haar_analyze(img);
    CHECK(f.values[0] == doctest::Approx((a + b + c + d) / 2).epsilon(1e-12));
    CHECK(f.values[1] == doctest::Approx((a - b + c - d) / 2).epsilon(1e-12));
    CHECK(f.values[2] == doctest::Approx((a + b - c - d) / 2).epsilon(1e-12));
    CHECK(f.values[3] == doctest::Approx((a - b - c + d) / 2).epsilon(1e-12));
}

TEST_CASE("round trip, Parseval and linearity") {
    const SceneImage x = random_image(64, 64, 3);
    const WaveletCoeffs f = haar_analyze(x);
    CHECK(norm2(f.values) == doctest::Approx(norm2(x.pixels)).epsilon(1e-10));

    const SceneImage back = haar_synthesize(f);
    double worst = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i)
        worst = std::max(worst, std::abs(back.pixels[i] - x.pixels[i]));
    CHECK(worst < 1e-10);

    const SceneImage y = random_image(64, 64, 4);
    const double alpha = 0.3, beta = -1.7;
    SceneImage mix(64, 64);
    for (std::size_t i = 0; i < mix.size(); ++i)
        mix.pixels[i] = alpha * x.pixels[i] + beta * y.pixels[i];
    const WaveletCoeffs fy = haar_analyze(y);
    const WaveletCoeffs fmix = haar_analyze(mix);
    worst = 0.0;
    for (std::size_t i = 0; i < fmix.size(); ++i)
        worst = std::max(worst,
                         std::abs(fmix.values[i] - alpha * f.values[i] - beta * fy.values[i]));
    CHECK(worst < 1e-10);
}

TEST_CASE("synthesis basics") {
    WaveletCoeffs zeros(8, 8, 3);
    const SceneImage z = haar_synthesize(zeros);
    for (double v : z.pixels)
        CHECK(v == 0.0);

    WaveletCoeffs unit(8, 8, 3);
    unit.values[0] = 1.0;
    const SceneImage flat = haar_synthesize(unit);
    for (double v : flat.pixels)
        CHECK(v == doctest::Approx(1.0 / 8.0).epsilon(1e-12));
}

TEST_CASE("rectangular and 1D shapes") {
    const SceneImage x = random_image(4, 16, 9);
    const WaveletCoeffs f = haar_analyze(x);
    CHECK(f.levels == 2);
    const SceneImage back = haar_synthesize(f);
    for (std::size_t i = 0; i < x.size(); ++i)
        CHECK(back.pixels[i] == doctest::Approx(x.pixels[i]).epsilon(1e-12));

    const SceneImage row = random_image(1, 32, 10);
    const WaveletCoeffs fr = haar_analyze(row);
    CHECK(fr.levels == 5);
    const SceneImage row_back = haar_synthesize(fr);
    for (std::size_t i = 0; i < row.size(); ++i)
        CHECK(row_back.pixels[i] == doctest::Approx(row.pixels[i]).epsilon(1e-12));

    CHECK_THROWS_AS(haar_analyze(random_image(6, 8, 1)), Error);
    CHECK_THROWS_AS(haar_analyze(random_image(8, 8, 1), 4), Error);
}

TEST_CASE("dense 1D basis matches the reference recursion") {
    for (unsigned q = 1; q <= 6; ++q) {
        const std::size_t n = std::size_t{1} << q;
        const oracle::Dense want = oracle::haar_ref(n);
        const std::vector<double> got = dense_haar_1d(NoiseletOrder::from_exponent(q));
        double worst = 0.0;
        for (std::size_t r = 0; r < n; ++r)
            for (std::size_t c = 0; c < n; ++c)
                worst = std::max(worst,
                                 std::abs(want.at(r, c).real() - got[r * n + c]));
        CHECK(worst < 1e-12);
    }
}

TEST_CASE("coherence of the canonical basis with itself") {
    const std::size_t n = 16;
    ComplexField eye(n, n);
    std::vector<double> eye_r(n * n, 0.0);
    for (std::size_t i = 0; i < n; ++i) {
        eye.set(i, i, 1.0);
        eye_r[i * n + i] = 1.0;
    }
    CHECK(coherence(eye, eye_r, n) == doctest::Approx(4.0).epsilon(1e-12));
}

TEST_CASE("noiselets are flat against Haar") {
    for (unsigned q = 1; q <= 8; ++q) {
        const NoiseletOrder order = NoiseletOrder::from_exponent(q);
        const double mu = coherence(dense_noiselet(order), dense_haar_1d(order), order.n);
        CHECK(mu == doctest::Approx(1.0).epsilon(1e-9));
    }
}

TEST_CASE("Walsh-Hadamard coherence with Haar is maximal") {
    // +-1/sqrt(n) matrix by the Sylvester recursion
    const std::size_t n = 16;
    std::vector<double> h(n * n, 1.0);
    for (std::size_t s = 1; s < n; s <<= 1)
        for (std::size_t r = 0; r < n; ++r)
            for (std::size_t c = 0; c < n; ++c)
                if ((r & s) && (c & s))
                    h[r * n + c] *= -1.0;
    ComplexField wh(n, n);
    for (std::size_t i = 0; i < n * n; ++i)
        wh.re[i] = h[i] / 4.0;

    // brute-force pinned value: the constant row coincides with the Haar
    // scaling function, so the coherence reaches sqrt(n) = 4
    const double mu = coherence(wh, dense_haar_1d(NoiseletOrder::from_exponent(4)), n);
    CHECK(mu == doctest::Approx(4.0).epsilon(1e-9));
    CHECK(mu > 1.0);
}

TEST_CASE("2D coherence equals the product of 1D coherences") {
    // Kronecker-factored 2D bases for 4x4 images
    const NoiseletOrder o2 = NoiseletOrder::from_exponent(2);
    const std::size_t side = 4, n = 16;
    const ComplexField n1d = dense_noiselet(o2);
    const std::vector<double> h1d = dense_haar_1d(o2);

    ComplexField phi2d(n, n);
    std::vector<double> psi2d(n * n);
    for (std::size_t ar = 0; ar < side; ++ar)
        for (std::size_t br = 0; br < side; ++br)
            for (std::size_t ac = 0; ac < side; ++ac)
                for (std::size_t bc = 0; bc < side; ++bc) {
                    const std::size_t r = ar * side + br, c = ac * side + bc;
                    const auto za = n1d.at(ar, ac);
                    const auto zb = n1d.at(br, bc);
                    phi2d.set(r, c, za * zb);
                    psi2d[r * n + c] = h1d[ar * side + ac] * h1d[br * side + bc];
                }
    const double mu2d = coherence(phi2d, psi2d, n);
    const double mu1d = coherence(n1d, h1d, side);
    CHECK(mu2d == doctest::Approx(mu1d * mu1d).epsilon(1e-9));

    // and the Mallat 2D Haar basis used by the solver is just as flat
    std::vector<double> mallat(n * n);
    for (std::size_t t = 0; t < n; ++t) {
        SceneImage unit(side, side);
        unit.pixels[t] = 1.0;
        const WaveletCoeffs col = haar_analyze(unit);
        for (std::size_t k = 0; k < n; ++k)
            mallat[k * n + t] = col.values[k];
    }
    // 2D noiselet rows on row-major pixels: N_4 (x) N_4 with row-major vec
    const double mu_mallat = coherence(phi2d, mallat, n);
    CHECK(mu_mallat == doctest::Approx(1.0).epsilon(1e-9));
}
