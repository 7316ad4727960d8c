#include "spcam/cli.hpp"

#include <chrono>
#include <cmath>
#include <fstream>
#include <iomanip>
#include <ostream>
#include <random>
#include <sstream>

#include <json.hpp>

#include "spcam/noiselet.hpp"
#include "spcam/pgm.hpp"
#include "spcam/scene.hpp"

namespace spcam::cli {

namespace {

NoiseletOrder geometry_order(unsigned q, std::size_t& rows, std::size_t& cols) {
    if (q > 0 && rows == 0 && cols == 0) {
        rows = std::size_t{1} << (q - q / 2);
        cols = std::size_t{1} << (q / 2);
    }
    if (rows == 0 || cols == 0)
        throw Error("geometry required: pass --q or --rows/--cols");
    if (!is_power_of_two(rows) || !is_power_of_two(cols))
        throw Error("geometry sides must be powers of two");
    return NoiseletOrder::from_size(rows * cols);
}

std::size_t resolve_m(std::size_t m, double ratio, std::size_t n) {
    if (m == 0 && ratio > 0.0)
        return ratio_to_m(ratio, n);
    if (m == 0)
        throw Error("pass --m or --ratio");
    if (m % 2 != 0 || m < 2 || m > n)
        throw Error("m must be even and within 2..n");
    return m;
}

SceneImage load_scene(const std::string& path, bool crop) {
    SceneImage img = read_pgm(path);
    if (!is_power_of_two(img.rows) || !is_power_of_two(img.cols)) {
        if (!crop)
            throw Error("image sides are not powers of two (" + std::to_string(img.rows) +
                        "x" + std::to_string(img.cols) + "); pass --crop to center-crop");
        img = center_crop_pow2(img);
    }
    return img;
}

}  // namespace

void cmd_patterns(const PatternsOptions& options, std::ostream& log) {
    std::size_t rows = options.rows, cols = options.cols;
    const NoiseletOrder order = geometry_order(options.q, rows, cols);
    const std::size_t m = resolve_m(options.m, options.ratio, order.n);
    const SamplingPlan plan = make_plan(order, rows, cols, m, options.seed);
    if (!options.plan_out.empty())
        save_plan(options.plan_out, plan);

    const PlaneMap map = resolve_sign_map(plan);
    std::vector<PackedBundle> bundles;
    bundles.reserve((map.size() + kStreamMaxPayloadPlanes - 1) / kStreamMaxPayloadPlanes);

    const auto t0 = std::chrono::steady_clock::now();
    for (std::size_t start = 0; start < map.size(); start += kStreamMaxPayloadPlanes) {
        const std::size_t count = std::min(kStreamMaxPayloadPlanes, map.size() - start);
        const PlaneMap chunk(map.begin() + start, map.begin() + start + count);
        bundles.push_back(gen_bundle(chunk, order, rows, cols));
    }
    const auto t1 = std::chrono::steady_clock::now();
    const double secs = std::chrono::duration<double>(t1 - t0).count();

    write_bundle_stream_file(options.out, bundles);

    const double bundles_per_s = secs > 0.0 ? double(bundles.size()) / secs : 0.0;
    const double patterns_per_s = secs > 0.0 ? double(map.size()) / secs : 0.0;
    log << "frames: " << bundles.size() << ", patterns: " << map.size() << "\n";
    log << "bundles/s: " << bundles_per_s << ", patterns/s: " << patterns_per_s << "\n";
}

void cmd_sample(const SampleOptions& options, std::ostream& log) {
    const SceneImage img = load_scene(options.image, options.crop);
    SamplingPlan plan;
    if (!options.plan.empty()) {
        plan = load_plan(options.plan);
        if (plan.rows != img.rows || plan.cols != img.cols)
            throw Error("plan geometry does not match the image");
    } else {
        const NoiseletOrder order = NoiseletOrder::from_size(img.size());
        const std::size_t m = resolve_m(options.m, options.ratio, order.n);
        plan = make_plan(order, img.rows, img.cols, m, options.seed);
    }
    if (!options.plan_out.empty())
        save_plan(options.plan_out, plan);

    const MeasurementRecord record =
        measure_with_plan(plan, img, options.sigma, options.mode,
                          options.seed ^ 0x9e3779b97f4a7c15ull);
    save_record(options.out, record);
    log << "measurements: " << measurement_count(record) << " (m = " << plan.m
        << ", mode = " << (options.mode == MeasureMode::plain ? "plain" : "differential")
        << ", sigma = " << options.sigma << ")\n";
}

RecoverMetrics cmd_recover(const RecoverOptions& options, std::ostream& log) {
    const MeasurementRecord record = load_record(options.record);
    const ComplexField y = restore_complex(record);

    RecoverMetrics metrics;
    SceneImage estimate;
    // noiseless full sampling short-circuits to the unitary inverse; noisy
    // records go through the denoising solver even at m = n
    if (record.plan.m == record.plan.order.n && record.noise_sigma == 0.0) {
        estimate = solve_full(y, record.plan);
        metrics.full_path = true;
        metrics.converged = true;
    } else {
        ReconConfig cfg;
        cfg.epsilon = options.epsilon >= 0.0 ? options.epsilon : estimate_epsilon(record);
        cfg.max_iters = options.max_iters;
        const ReconResult result = solve_bpdn(y, record.plan, cfg);
        estimate = result.image;
        metrics.residual = result.residual_norm;
        metrics.iterations = result.iterations;
        metrics.converged = result.converged;
    }
    write_pgm(options.out, estimate, options.pgm_bits);

    if (!options.reference.empty()) {
        const SceneImage ref = read_pgm(options.reference);
        metrics.psnr_db = psnr(estimate, ref, true);
        metrics.has_psnr = true;
    }

    nlohmann::json j;
    j["residual"] = metrics.residual;
    j["iterations"] = metrics.iterations;
    j["converged"] = metrics.converged;
    j["full_sampling_inverse"] = metrics.full_path;
    if (metrics.has_psnr)
        j["psnr_db"] = metrics.psnr_db;
    if (!options.metrics_out.empty()) {
        std::ofstream out(options.metrics_out);
        if (!out)
            throw Error("cannot open for writing: " + options.metrics_out);
        out << j.dump(2) << '\n';
    }
    log << j.dump() << "\n";
    return metrics;
}

SweepResult cmd_sweep(const SweepCmdOptions& options, std::ostream& log) {
    const SceneImage img = load_scene(options.image, false);

    SweepOptions sweep;
    sweep.ratios = options.ratios;
    sweep.seeds = options.seeds;
    sweep.sigma = options.sigma;
    sweep.mode = options.mode;
    sweep.workers = options.workers;
    sweep.recon.max_iters = options.max_iters;
    if (options.epsilon >= 0.0) {
        sweep.auto_epsilon = false;
        sweep.recon.epsilon = options.epsilon;
    }
    const SweepResult result = run_sweep(img, sweep);

    std::ostringstream table;
    table << "ratio\tmean_psnr_db\tstd_psnr_db\n";
    table << std::fixed << std::setprecision(6);
    for (const SweepRow& row : result.rows)
        table << row.ratio << '\t' << row.mean_psnr << '\t' << row.std_psnr << '\n';
    log << table.str();

    if (!options.out_prefix.empty()) {
        std::ofstream summary(options.out_prefix + ".tsv");
        if (!summary)
            throw Error("cannot open for writing: " + options.out_prefix + ".tsv");
        summary << table.str();

        std::ofstream points(options.out_prefix + "_points.tsv");
        if (!points)
            throw Error("cannot open for writing: " + options.out_prefix + "_points.tsv");
        points << "ratio\tseed\tm\tpsnr_db\tresidual\titerations\tfull_path\n";
        points << std::fixed << std::setprecision(6);
        for (const SweepPoint& p : result.points)
            points << p.ratio << '\t' << p.seed << '\t' << p.m << '\t' << p.psnr_db << '\t'
                   << p.residual << '\t' << p.iterations << '\t' << (p.full_path ? 1 : 0)
                   << '\n';
    }
    return result;
}

bool cmd_selftest(const SelftestOptions& options, std::ostream& log) {
    bool all_ok = true;
    auto check = [&](const std::string& name, bool ok) {
        log << (ok ? "[pass] " : "[FAIL] ") << name << "\n";
        all_ok = all_ok && ok;
    };

    // transform against the dense matrix
    {
        const NoiseletOrder order = NoiseletOrder::from_exponent(6);
        const ComplexField dense = dense_noiselet(order);
        std::mt19937_64 rng(7);
        std::normal_distribution<double> gauss;
        ComplexField v = ComplexField::vector(order.n);
        for (std::size_t i = 0; i < order.n; ++i)
            v.set(i, {gauss(rng), gauss(rng)});
        const ComplexField fast = fnt(v, order, Direction::forward);
        double worst = 0.0;
        for (std::size_t r = 0; r < order.n; ++r) {
            std::complex<double> acc = 0.0;
            for (std::size_t c = 0; c < order.n; ++c)
                acc += dense.at(r, c) * v.at(c);
            worst = std::max(worst, std::abs(acc - fast.at(r)));
        }
        const ComplexField back = fnt(fast, order, Direction::inverse);
        for (std::size_t i = 0; i < order.n; ++i)
            worst = std::max(worst, std::abs(back.at(i) - v.at(i)));
        check("fast transform matches the dense matrix (q=6)", worst < 1e-10);
    }

    // integer transform relation
    {
        double worst = 0.0;
        for (unsigned q = 0; q <= 6; ++q)
            worst = std::max(worst, verify_modified_relation(NoiseletOrder::from_exponent(q)));
        check("integer transform relation (q<=6)", worst == 0.0);
    }

    // fast pattern path against the definitional one
    {
        bool ok = true;
        for (unsigned q = 1; q <= 6 && ok; ++q) {
            const NoiseletOrder order = NoiseletOrder::from_exponent(q);
            const SamplingPlan plan = make_plan(order, order.n, 1, order.n, 0);
            const PatternSet defs = build_patterns(plan);
            const PlaneMap map = resolve_sign_map(plan);
            for (std::size_t t = 0; t < map.size() && ok; ++t) {
                const auto fast =
                    gen_pattern_fast(map[t].row, map[t].kind, order);
                for (std::size_t x = 0; x < order.n && ok; ++x) {
                    const bool want = defs.get(t, x);
                    const bool got = (fast[x] != 0) != map[t].complement;
                    ok = want == got;
                }
            }
        }
        check("fast pattern path matches the definition (q<=6)", ok);
    }

    // measurement round trip against the dense sensing matrix
    {
        const NoiseletOrder order = NoiseletOrder::from_exponent(6);
        const SceneImage scene = synthetic_scene(8, 8, 11);
        const ComplexField dense = dense_noiselet(order);
        bool ok = true;
        for (const MeasureMode mode : {MeasureMode::plain, MeasureMode::differential}) {
            const SamplingPlan plan = make_plan(order, 8, 8, order.n / 2, 3);
            const MeasurementRecord rec =
                measure_with_plan(plan, scene, 0.0, mode, 5);
            const ComplexField y = restore_complex(rec);
            for (std::size_t j = 1; j <= plan.m; ++j) {
                std::complex<double> want = 0.0;
                const std::size_t row = plan.row_at(j);
                for (std::size_t t = 0; t < order.n; ++t)
                    want += dense.at(row - 1, t) * scene.pixels[t];
                ok = ok && std::abs(want - y.at(j - 1)) < 1e-9;
            }
        }
        check("noiseless measure/restore equals the sensing matrix (q=6)", ok);
    }

    // full-sampling inverse round trip
    {
        const SceneImage scene = synthetic_scene(32, 32, 17);
        const SamplingPlan plan =
            make_plan(NoiseletOrder::from_size(scene.size()), 32, 32, scene.size(), 0);
        const MeasurementRecord rec =
            measure_with_plan(plan, scene, 0.0, MeasureMode::plain, 5);
        const SceneImage back = solve_full(restore_complex(rec), plan);
        double worst = 0.0;
        for (std::size_t i = 0; i < scene.size(); ++i)
            worst = std::max(worst, std::abs(back.pixels[i] - scene.pixels[i]));
        check("full-sampling inverse round trip (32x32)", worst < 1e-9);
    }

    // sparse recovery
    {
        std::mt19937_64 rng(23);
        std::normal_distribution<double> gauss;
        WaveletCoeffs f(32, 32, haar_max_levels(32, 32));
        for (int s = 0; s < 40; ++s)
            f.values[rng() % f.size()] = 1.0 + std::abs(gauss(rng));
        SceneImage truth = haar_synthesize(f);
        double lo = truth.pixels[0], hi = truth.pixels[0];
        for (double v : truth.pixels) {
            lo = std::min(lo, v);
            hi = std::max(hi, v);
        }
        for (double& v : truth.pixels)
            v = 0.05 + 0.9 * (v - lo) / std::max(hi - lo, 1e-12);
        const SamplingPlan plan =
            make_plan(NoiseletOrder::from_size(truth.size()), 32, 32, 512, 2);
        const MeasurementRecord rec =
            measure_with_plan(plan, truth, 0.0, MeasureMode::plain, 5);
        ReconConfig cfg;
        const ReconResult res = solve_bpdn(restore_complex(rec), plan, cfg);
        check("sparse recovery at half sampling (32x32)",
              psnr(res.image, truth, false) > 60.0);
    }

    if (!options.write_scene.empty()) {
        write_pgm(options.write_scene, synthetic_scene(256, 256), 16);
        log << "demo scene written to " << options.write_scene << "\n";
    }
    log << (all_ok ? "selftest passed" : "selftest FAILED") << "\n";
    return all_ok;
}

}  // namespace spcam::cli
