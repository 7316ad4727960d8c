#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <random>

#include "spcam/haar.hpp"
#include "spcam/sweep.hpp"

using namespace spcam;

namespace {

SceneImage sparse_phantom(std::size_t side, std::size_t support, std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    std::normal_distribution<double> gauss;
    WaveletCoeffs f(side, side, haar_max_levels(side, side));
    for (std::size_t s = 0; s < support; ++s)
        f.values[rng() % f.size()] = gauss(rng) + 0.3;
    SceneImage x = haar_synthesize(f);
    double lo = x.pixels[0], hi = x.pixels[0];
    for (double v : x.pixels) {
        lo = std::min(lo, v);
        hi = std::max(hi, v);
    }
    for (double& v : x.pixels)
        v = 0.05 + 0.9 * (v - lo) / std::max(hi - lo, 1e-9);
    return x;
}

}  // namespace

TEST_CASE("ratio to measurement count") {
    CHECK(ratio_to_m(1.0, 4096) == 4096);
    CHECK(ratio_to_m(0.3, 4096) == 1228);  // nearest even to 1228.8
    CHECK(ratio_to_m(1e-9, 4096) == 2);
    CHECK_THROWS_AS(ratio_to_m(0.0, 4096), Error);
    CHECK_THROWS_AS(ratio_to_m(1.2, 4096), Error);
}

TEST_CASE("noiseless sweep over a sparse phantom is monotone in ratio") {
    const SceneImage phantom = sparse_phantom(32, 50, 3);
    SweepOptions opts;
    opts.ratios = {0.1, 0.3, 1.0};
    opts.seeds = {11, 12, 13, 14, 15};
    opts.sigma = 0.0;
    opts.mode = MeasureMode::plain;
    opts.workers = 4;
    const SweepResult result = run_sweep(phantom, opts);
    REQUIRE(result.rows.size() == 3);
    CHECK(result.rows[0].mean_psnr <= result.rows[1].mean_psnr);
    CHECK(result.rows[1].mean_psnr <= result.rows[2].mean_psnr);

    // the plan is forced to the full basis at ratio 1, so no randomness is left
    CHECK(result.rows[2].std_psnr == 0.0);
    CHECK(result.rows[2].mean_psnr > 90.0);

    for (const SweepPoint& p : result.points) {
        CHECK(p.psnr_db > 0.0);
        if (p.ratio == 1.0)
            CHECK(p.full_path);
    }
}

TEST_CASE("sweep determinism") {
    const SceneImage phantom = sparse_phantom(16, 20, 4);
    SweepOptions opts;
    opts.ratios = {0.5};
    opts.seeds = {3, 4};
    opts.sigma = 2e-3;
    opts.workers = 2;
    const SweepResult a = run_sweep(phantom, opts);
    const SweepResult b = run_sweep(phantom, opts);
    REQUIRE(a.points.size() == b.points.size());
    for (std::size_t i = 0; i < a.points.size(); ++i)
        CHECK(a.points[i].psnr_db == b.points[i].psnr_db);
}
