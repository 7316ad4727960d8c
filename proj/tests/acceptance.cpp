// Acceptance suite: one numbered check per pipeline guarantee, each
// printable and runnable on its own (argv[1] = number, no argument = all).
#include <chrono>
#include <cstdio>
#include <cstdlib>
#include <cstring>
#include <random>
#include <string>

#include "oracle.hpp"
#include "spcam/cli.hpp"
#include "spcam/noiselet.hpp"
#include "spcam/recon.hpp"
#include "spcam/scene.hpp"
#include "spcam/sweep.hpp"

using namespace spcam;
using oracle::cd;

namespace {

double seconds_since(std::chrono::steady_clock::time_point t0) {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

SceneImage sparse_scene(std::size_t side, std::size_t support, std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    std::normal_distribution<double> gauss;
    WaveletCoeffs f(side, side, haar_max_levels(side, side));
    std::size_t placed = 0;
    while (placed < support) {
        const std::size_t at = rng() % f.size();
        if (f.values[at] != 0.0)
            continue;
        double v = gauss(rng);
        f.values[at] = v + (v >= 0.0 ? 0.5 : -0.5);
        ++placed;
    }
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

std::pair<std::vector<std::uint8_t>, std::vector<std::uint8_t>> definition_pair(
    const oracle::Dense& dense, std::size_t k, NoiseletOrder order) {
    const std::size_t n = order.n;
    const double scale =
        order.even_q() ? std::sqrt(double(n)) : std::sqrt(2.0 * double(n));
    std::vector<std::uint8_t> p1(n), p2(n);
    for (std::size_t x = 0; x < n; ++x) {
        const cd phi = dense.at(k - 1, x);
        const double v1 = order.even_q()
                              ? (scale * (phi.real() + phi.imag()) + 1.0) / 2.0
                              : (scale * phi.real() + 1.0) / 2.0;
        const double v2 = order.even_q()
                              ? (scale * (phi.real() - phi.imag()) + 1.0) / 2.0
                              : (scale * phi.imag() + 1.0) / 2.0;
        p1[x] = static_cast<std::uint8_t>(std::lround(v1));
        p2[x] = static_cast<std::uint8_t>(std::lround(v2));
    }
    return {p1, p2};
}

bool criterion_1(std::string& detail) {
    const auto t0 = std::chrono::steady_clock::now();
    double worst_fast = 0.0, worst_unitary = 0.0, worst_2d = 0.0;
    std::mt19937_64 rng(1);
    std::normal_distribution<double> gauss;
    for (unsigned q = 1; q <= 8; ++q) {
        const NoiseletOrder order = NoiseletOrder::from_exponent(q);
        const ComplexField dense = dense_noiselet(order);

        // 1D fast/dense equivalence on a random vector
        ComplexField v = ComplexField::vector(order.n);
        for (std::size_t i = 0; i < order.n; ++i)
            v.set(i, {gauss(rng), gauss(rng)});
        const ComplexField fast = fnt(v, order, Direction::forward);
        for (std::size_t r = 0; r < order.n; ++r) {
            cd acc = 0.0;
            for (std::size_t c = 0; c < order.n; ++c)
                acc += dense.at(r, c) * v.at(c);
            worst_fast = std::max(worst_fast, std::abs(acc - fast.at(r)));
        }

        // unitarity of the dense matrix
        for (std::size_t r = 0; r < order.n; ++r)
            for (std::size_t c = 0; c < order.n; ++c) {
                cd acc = 0.0;
                for (std::size_t t = 0; t < order.n; ++t)
                    acc += dense.at(r, t) * std::conj(dense.at(c, t));
                worst_unitary =
                    std::max(worst_unitary, std::abs(acc - (r == c ? cd(1.0) : cd(0.0))));
            }

        // 2D transform against the dense row/column product
        const std::size_t rows = std::size_t{1} << (q - q / 2);
        const std::size_t cols = std::size_t{1} << (q / 2);
        const ComplexField dr = dense_noiselet(NoiseletOrder::from_size(rows));
        const ComplexField dc = dense_noiselet(NoiseletOrder::from_size(cols));
        ComplexField a(rows, cols);
        for (std::size_t i = 0; i < a.size(); ++i)
            a.set(i, {gauss(rng), gauss(rng)});
        const ComplexField got = fnt2d(a, Direction::forward);
        for (std::size_t r = 0; r < rows; ++r)
            for (std::size_t c = 0; c < cols; ++c) {
                cd acc = 0.0;
                for (std::size_t rr = 0; rr < rows; ++rr)
                    for (std::size_t cc = 0; cc < cols; ++cc)
                        acc += dr.at(r, rr) * a.at(rr, cc) * dc.at(c, cc);
                worst_2d = std::max(worst_2d, std::abs(acc - got.at(r, c)));
            }
    }
    const double elapsed = seconds_since(t0);
    char buf[256];
    std::snprintf(buf, sizeof buf,
                  "fast|dense %.2e, 2d %.2e, unitarity %.2e, %.1fs", worst_fast,
                  worst_2d, worst_unitary, elapsed);
    detail = buf;
    return worst_fast < 1e-10 && worst_2d < 1e-10 && worst_unitary < 1e-12 &&
           elapsed < 30.0;
}

bool criterion_2(std::string& detail) {
    double worst = 0.0;
    for (unsigned q = 0; q <= 8; ++q)
        worst = std::max(worst, verify_modified_relation(NoiseletOrder::from_exponent(q)));
    detail = "max deviation " + std::to_string(worst);
    return worst < 1e-12;
}

bool criterion_3(std::string& detail) {
    for (unsigned q = 1; q <= 8; ++q) {
        const NoiseletOrder order = NoiseletOrder::from_exponent(q);
        const ComplexField n = dense_noiselet(order);
        for (std::size_t j = 1; j <= order.n; ++j) {
            const std::size_t mj = mirror_row(j, order);
            for (std::size_t c = 0; c < order.n; ++c) {
                if (n.re[(j - 1) * order.n + c] != n.re[(mj - 1) * order.n + c] ||
                    n.im[(j - 1) * order.n + c] != -n.im[(mj - 1) * order.n + c]) {
                    detail = "mismatch at q=" + std::to_string(q) +
                             " row " + std::to_string(j);
                    return false;
                }
            }
        }
    }
    detail = "exact conjugate mirrors for q=1..8, all rows";
    return true;
}

bool criterion_4(std::string& detail) {
    std::mt19937_64 rng(4);
    for (unsigned q = 1; q <= 8; ++q) {
        const NoiseletOrder order = NoiseletOrder::from_exponent(q);
        const oracle::Dense dense = oracle::from_field(dense_noiselet(order));
        const SamplingPlan plan = make_plan(order, order.n, 1, order.n, 0);
        const PlaneMap map = resolve_sign_map(plan);
        const PatternSet defs = build_patterns(plan);
        for (std::size_t t = 0; t < map.size(); ++t) {
            std::vector<std::uint8_t> fast =
                gen_pattern_fast(map[t].row, map[t].kind, order);
            if (map[t].complement)
                for (auto& v : fast)
                    v ^= 1;
            if (fast != defs.pattern(t)) {
                detail = "fast/definition mismatch at q=" + std::to_string(q) +
                         " pattern " + std::to_string(t + 1);
                return false;
            }
        }
        // definitional pairs for every row, not only the sampled upper half;
        // the (source, complement) rule depends on q alone
        for (std::size_t k = 1; k <= order.n; ++k) {
            const auto [p1, p2] = definition_pair(dense, k, order);
            const auto a = gen_pattern_fast(k, PatternKind::a, order);
            const auto b = gen_pattern_fast(k, PatternKind::b, order);
            std::vector<std::uint8_t> f1 = map[0].kind == PatternKind::a ? a : b;
            std::vector<std::uint8_t> f2 = map[1].kind == PatternKind::a ? a : b;
            if (map[0].complement)
                for (auto& v : f1)
                    v ^= 1;
            if (map[1].complement)
                for (auto& v : f2)
                    v ^= 1;
            if (f1 != p1 || f2 != p2) {
                detail = "row-level mismatch at q=" + std::to_string(q) + " row " +
                         std::to_string(k);
                return false;
            }
        }
        // packed bundles against singles
        const std::size_t l = std::min<std::size_t>(23, order.n);
        PlaneMap bundle_map;
        for (std::size_t t = 0; t < l; ++t)
            bundle_map.push_back({1 + rng() % order.n,
                                  (rng() & 1) ? PatternKind::a : PatternKind::b,
                                  (rng() & 1) != 0});
        const PackedBundle bundle = gen_bundle(bundle_map, order, order.n, 1);
        for (std::size_t t = 0; t < l; ++t) {
            std::vector<std::uint8_t> single =
                gen_pattern_fast(bundle_map[t].row, bundle_map[t].kind, order);
            if (bundle_map[t].complement)
                for (auto& v : single)
                    v ^= 1;
            if (unpack_plane(bundle, t) != single) {
                detail = "bundle plane mismatch at q=" + std::to_string(q);
                return false;
            }
        }
    }
    detail = "sign-resolved fast patterns and packed bundles are bit-exact, q=1..8";
    return true;
}

bool criterion_5(std::string& detail) {
    double worst = 0.0;
    for (unsigned q : {4u, 6u, 8u, 10u}) {
        const NoiseletOrder order = NoiseletOrder::from_exponent(q);
        const std::size_t rows = std::size_t{1} << (q - q / 2);
        const std::size_t cols = std::size_t{1} << (q / 2);
        const oracle::Dense dense = oracle::from_field(dense_noiselet(order));
        const SceneImage x = synthetic_scene(rows, cols, 50 + q);
        for (double ratio : {0.25, 0.5, 1.0}) {
            const std::size_t m = ratio_to_m(ratio, order.n);
            const SamplingPlan plan = make_plan(order, rows, cols, m, q);
            for (const MeasureMode mode :
                 {MeasureMode::plain, MeasureMode::differential}) {
                const MeasurementRecord rec = measure_with_plan(plan, x, 0.0, mode, 7);
                if (mode == MeasureMode::plain &&
                    measurement_count(rec) != plan.m + 1) {
                    detail = "measurement count is not m+1";
                    return false;
                }
                const ComplexField y = restore_complex(rec);
                for (std::size_t j = 1; j <= plan.m; ++j) {
                    cd acc = 0.0;
                    const std::size_t row = plan.row_at(j);
                    for (std::size_t t = 0; t < order.n; ++t)
                        acc += dense.at(row - 1, t) * x.pixels[t];
                    worst = std::max(worst, std::abs(acc - y.at(j - 1)));
                }
            }
        }
    }
    detail = "max |restored - sensed| = " + std::to_string(worst);
    return worst < 1e-9;
}

bool criterion_6(std::string& detail) {
    double worst = 0.0;
    for (unsigned q = 1; q <= 8; ++q) {
        const NoiseletOrder order = NoiseletOrder::from_exponent(q);
        const double mu = coherence(dense_noiselet(order), dense_haar_1d(order), order.n);
        worst = std::max(worst, std::abs(mu - 1.0));
    }
    detail = "max |coherence - 1| = " + std::to_string(worst);
    return worst < 1e-9;
}

bool criterion_7(std::string& detail) {
    const auto t0 = std::chrono::steady_clock::now();
    const std::size_t side = 64;
    const NoiseletOrder order = NoiseletOrder::from_size(side * side);
    const std::size_t support = 205;  // 5% of 4096
    const std::size_t m = ratio_to_m(0.4, order.n);
    int successes = 0;
    const int trials = 20;
    for (int trial = 0; trial < trials; ++trial) {
        const SceneImage x = sparse_scene(side, support, 1000 + trial);
        const SamplingPlan plan = make_plan(order, side, side, m, 2000 + trial);
        const MeasurementRecord rec =
            measure_with_plan(plan, x, 0.0, MeasureMode::plain, 0);
        const ReconResult res = solve_bpdn(restore_complex(rec), plan, ReconConfig{});
        if (psnr(res.image, x, false) > 60.0)
            ++successes;
    }
    const double elapsed = seconds_since(t0);
    char buf[128];
    std::snprintf(buf, sizeof buf, "%d/%d trials above 60 dB, %.1fs", successes, trials,
                  elapsed);
    detail = buf;
    return successes >= 19 && elapsed < 300.0;
}

bool criterion_8(std::string& detail) {
    const auto t0 = std::chrono::steady_clock::now();
    const SceneImage scene = synthetic_scene(256, 256, 42);
    SweepOptions opts;
    opts.ratios = {0.1, 0.25, 0.5, 1.0};
    opts.seeds = {101, 102, 103};
    opts.sigma = 4e-4;
    opts.mode = MeasureMode::differential;
    const SweepResult result = run_sweep(scene, opts);
    const double elapsed = seconds_since(t0);

    std::string curve;
    bool monotone = true;
    for (std::size_t i = 0; i < result.rows.size(); ++i) {
        char buf[64];
        std::snprintf(buf, sizeof buf, " %.2f:%.1f+-%.1f", result.rows[i].ratio,
                      result.rows[i].mean_psnr, result.rows[i].std_psnr);
        curve += buf;
        if (i > 0) {
            const double slack = result.rows[i - 1].std_psnr + result.rows[i].std_psnr;
            if (result.rows[i].mean_psnr < result.rows[i - 1].mean_psnr - slack)
                monotone = false;
        }
    }
    const double full = result.rows.back().mean_psnr;
    char buf[160];
    std::snprintf(buf, sizeof buf, "curve%s dB, full %.1f dB, %.0fs", curve.c_str(), full,
                  elapsed);
    detail = buf;
    return monotone && full > 30.0 && elapsed < 1800.0;
}

bool criterion_9(std::string& detail) {
    const SceneImage scene = synthetic_scene(256, 256, 42);
    const WaveletCoeffs f = haar_analyze(scene);
    const SceneImage compressed = haar_synthesize(compress_topk(f, 0.08));
    const double db = psnr(compressed, scene, false);
    char buf[64];
    std::snprintf(buf, sizeof buf, "top 8%% keeps %.1f dB", db);
    detail = buf;
    return db >= 35.0 && db <= 45.0;
}

bool criterion_10(std::string& detail) {
    const NoiseletOrder order = NoiseletOrder::from_exponent(16);  // 256x256
    std::mt19937_64 rng(10);
    const int bundle_count = 64;
    std::vector<PlaneMap> maps(bundle_count);
    for (PlaneMap& map : maps)
        for (std::size_t t = 0; t < 23; ++t)
            map.push_back({1 + rng() % order.n,
                           (rng() & 1) ? PatternKind::a : PatternKind::b,
                           (rng() & 1) != 0});

    std::uint64_t sink = 0;
    const auto t0 = std::chrono::steady_clock::now();
    for (const PlaneMap& map : maps) {
        const PackedBundle bundle = gen_bundle(map, order, 256, 256);
        sink ^= bundle.planes[0];
    }
    asm volatile("" : : "r"(sink) : "memory");
    const double elapsed = seconds_since(t0);
    const double bundles_per_s = bundle_count / elapsed;
    const double patterns_per_s = bundles_per_s * 24.0;  // 23 payload + sync
    char buf[128];
    std::snprintf(buf, sizeof buf, "bundles/s: %.0f, patterns/s: %.0f", bundles_per_s,
                  patterns_per_s);
    detail = buf;
    return bundles_per_s >= 25.0;
}

bool criterion_11(std::string& detail) {
    const std::size_t side = 128;
    const NoiseletOrder order = NoiseletOrder::from_size(side * side);
    const SceneImage x = synthetic_scene(side, side, 3);
    const SamplingPlan plan = make_plan(order, side, side, order.n, 0);
    const MeasurementRecord rec = measure_with_plan(plan, x, 0.0, MeasureMode::plain, 0);
    const ComplexField y = restore_complex(rec);

    const auto t0 = std::chrono::steady_clock::now();
    const SceneImage back = solve_full(y, plan);
    const double transform_secs = seconds_since(t0);

    double worst = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i)
        worst = std::max(worst, std::abs(back.pixels[i] - x.pixels[i]));
    char buf[128];
    std::snprintf(buf, sizeof buf, "max pixel error %.2e, inverse stage %.3fs", worst,
                  transform_secs);
    detail = buf;
    return worst < 1e-6 && transform_secs < 1.0;
}

struct Entry {
    int id;
    const char* name;
    bool (*run)(std::string&);
};

const Entry kEntries[] = {
    {1, "fast transforms match the dense unitary matrices", criterion_1},
    {2, "integer transform equals the scaled noiselet matrix", criterion_2},
    {3, "noiselet rows are exact conjugate mirrors", criterion_3},
    {4, "fast binary patterns match their definition bit-exactly", criterion_4},
    {5, "m+1 measurement scheme restores the complex samples", criterion_5},
    {6, "noiselet/Haar coherence equals one", criterion_6},
    {7, "sparse images recover exactly at 40% sampling", criterion_7},
    {8, "noisy sweep rises with the sampling ratio", criterion_8},
    {9, "natural scene keeps ~40 dB at 8% of coefficients", criterion_9},
    {10, "packed bundle generation throughput", criterion_10},
    {11, "full-sampling inverse round trip", criterion_11},
};

}  // namespace

int main(int argc, char** argv) {
    int only = 0;
    if (argc > 1)
        only = std::atoi(argv[1]);
    int failures = 0;
    for (const Entry& entry : kEntries) {
        if (only != 0 && entry.id != only)
            continue;
        std::string detail;
        bool ok = false;
        try {
            ok = entry.run(detail);
        } catch (const std::exception& e) {
            detail = std::string("exception: ") + e.what();
        }
        std::printf("[%s] criterion %d: %s (%s)\n", ok ? "PASS" : "FAIL", entry.id,
                    entry.name, detail.c_str());
        std::fflush(stdout);
        if (!ok)
            ++failures;
    }
    return failures == 0 ? 0 : 1;
}
