#include "spcam/spc.hpp"

#include <cmath>
#include <fstream>
#include <random>
#include <sstream>

#include <json.hpp>

namespace spcam {

namespace {

void check_scene(const SceneImage& x, const SamplingPlan& plan) {
    if (x.rows != plan.rows || x.cols != plan.cols)
        throw Error("scene geometry does not match the plan");
    for (double v : x.pixels)
        if (!(v >= 0.0 && v <= 1.0))
            throw Error("scene pixel outside [0,1]: " + std::to_string(v));
}

// Dot product of one bit-packed binary pattern with the scene.
double dot_bits(const std::uint64_t* words, std::size_t n, const double* pixels) {
    double acc = 0.0;
    std::size_t base = 0;
    for (std::size_t w = 0; base < n; ++w, base += 64) {
        std::uint64_t v = words[w];
        while (v) {
            const unsigned bit = static_cast<unsigned>(std::countr_zero(v));
            acc += pixels[base + bit];
            v &= v - 1;
        }
    }
    return acc;
}

MeasurementRecord finish_record(const SamplingPlan& plan, std::vector<double> readings,
                                double total, double noise_sigma, MeasureMode mode,
                                std::uint64_t seed) {
    if (noise_sigma < 0.0)
        throw Error("noise sigma must be nonnegative");

    MeasurementRecord rec;
    rec.plan = plan;
    rec.mode = mode;
    rec.noise_sigma = noise_sigma;
    rec.noise_seed = seed;

    double mean = 0.0;
    for (double v : readings)
        mean += v;
    mean /= static_cast<double>(readings.size());
    rec.mean_signal = mean;

    if (mode == MeasureMode::differential)
        for (double& v : readings)
            v -= total / 2.0;

    const double sigma_abs = noise_sigma * mean;
    if (sigma_abs > 0.0) {
        std::mt19937_64 rng(seed);
        std::normal_distribution<double> gauss(0.0, sigma_abs);
        for (double& v : readings)
            v += gauss(rng);
        total += gauss(rng);
    }
    rec.y_tilde = std::move(readings);
    rec.total_intensity = total;
    return rec;
}

}  // namespace

MeasurementRecord measure(const PatternSet& patterns, const SceneImage& x,
                          double noise_sigma, MeasureMode mode, std::uint64_t seed) {
    check_scene(x, patterns.plan);
    const std::size_t n = patterns.n;
    if (n != x.size())
        throw Error("pattern length does not match the pixel count");

    std::vector<double> readings(patterns.m);
    for (std::size_t t = 0; t < patterns.m; ++t)
        readings[t] =
            dot_bits(patterns.bits.data() + t * patterns.words_per_pattern, n, x.pixels.data());
    double total = 0.0;
    for (double v : x.pixels)
        total += v;
    return finish_record(patterns.plan, std::move(readings), total, noise_sigma, mode, seed);
}

MeasurementRecord measure_with_plan(const SamplingPlan& plan, const SceneImage& x,
                                    double noise_sigma, MeasureMode mode,
                                    std::uint64_t seed) {
    check_scene(x, plan);
    const PlaneMap full_map = resolve_sign_map(plan);

    std::vector<double> readings(plan.m);
    for (std::size_t start = 0; start < full_map.size(); start += kStreamMaxPayloadPlanes) {
        const std::size_t count = std::min(kStreamMaxPayloadPlanes, full_map.size() - start);
        const PlaneMap chunk(full_map.begin() + start, full_map.begin() + start + count);
        const PackedBundle bundle = gen_bundle(chunk, plan.order, plan.rows, plan.cols);
        std::vector<double> acc(count, 0.0);
        for (std::size_t xit = 0; xit < bundle.planes.size(); ++xit) {
            const std::uint64_t w = bundle.planes[xit] >> 1;
            const double px = x.pixels[xit];
            std::uint64_t v = w & ((std::uint64_t{1} << count) - 1);
            while (v) {
                const unsigned t = static_cast<unsigned>(std::countr_zero(v));
                acc[t] += px;
                v &= v - 1;
            }
        }
        for (std::size_t t = 0; t < count; ++t)
            readings[start + t] = acc[t];
    }
    double total = 0.0;
    for (double v : x.pixels)
        total += v;
    return finish_record(plan, std::move(readings), total, noise_sigma, mode, seed);
}

ComplexField restore_complex(const MeasurementRecord& record) {
    const SamplingPlan& plan = record.plan;
    if (record.y_tilde.size() != plan.m)
        throw Error("record readings do not match the plan");

    const double total = record.total_intensity;
    std::vector<double> yt = record.y_tilde;
    if (record.mode == MeasureMode::differential)
        for (double& v : yt)
            v += total / 2.0;

    const std::size_t m = plan.m;
    const std::size_t n = plan.order.n;
    ComplexField y = ComplexField::vector(m);
    if (plan.order.even_q()) {
        const double s = 1.0 / std::sqrt(static_cast<double>(n));
        for (std::size_t j = 1; j <= m / 2; ++j) {
            const double y1 = yt[2 * j - 2], y2 = yt[2 * j - 1];
            const double re = s * (y1 + y2 - total);
            const double im = s * (y1 - y2);
            y.set(j - 1, {re, im});
            y.set(m - j, {re, -im});
        }
    } else {
        const double s = 1.0 / std::sqrt(2.0 * static_cast<double>(n));
        for (std::size_t j = 1; j <= m / 2; ++j) {
            const double y1 = yt[2 * j - 2], y2 = yt[2 * j - 1];
            const double re = s * (2.0 * y1 - total);
            const double im = s * (2.0 * y2 - total);
            y.set(j - 1, {re, im});
            y.set(m - j, {re, -im});
        }
    }
    return y;
}

std::size_t measurement_count(const MeasurementRecord& record) {
    const std::size_t base = record.y_tilde.size() + 1;
    return record.mode == MeasureMode::plain ? base : 2 * base;
}

std::size_t required_measurements(std::size_t sparsity, std::size_t n, double mu, double c) {
    if (sparsity < 1)
        throw Error("sparsity must be at least 1");
    if (n < 2)
        throw Error("n must be at least 2");
    if (mu < 1.0)
        throw Error("coherence is at least 1");
    if (c <= 0.0)
        throw Error("constant must be positive");
    const double value = c * static_cast<double>(sparsity) *
                         std::log(static_cast<double>(n)) * mu * mu;
    return static_cast<std::size_t>(std::ceil(value));
}

std::string record_to_json(const MeasurementRecord& record) {
    nlohmann::json j;
    j["format"] = "spcam-record";
    j["version"] = 1;
    j["plan"] = nlohmann::json::parse(plan_to_json(record.plan));
    j["mode"] = record.mode == MeasureMode::plain ? "plain" : "differential";
    j["noise_sigma"] = record.noise_sigma;
    j["mean_signal"] = record.mean_signal;
    j["noise_seed"] = record.noise_seed;
    j["total_intensity"] = record.total_intensity;
    j["y_tilde"] = record.y_tilde;
    return j.dump(2);
}

MeasurementRecord record_from_json(const std::string& text) {
    nlohmann::json j;
    try {
        j = nlohmann::json::parse(text);
    } catch (const nlohmann::json::exception& e) {
        throw Error(std::string("record parse error: ") + e.what());
    }
    MeasurementRecord rec;
    try {
        if (j.at("format").get<std::string>() != "spcam-record")
            throw Error("not a measurement record document");
        rec.plan = plan_from_json(j.at("plan").dump());
        const std::string mode = j.at("mode").get<std::string>();
        if (mode == "plain")
            rec.mode = MeasureMode::plain;
        else if (mode == "differential")
            rec.mode = MeasureMode::differential;
        else
            throw Error("unknown measurement mode: " + mode);
        rec.noise_sigma = j.at("noise_sigma").get<double>();
        rec.mean_signal = j.at("mean_signal").get<double>();
        rec.noise_seed = j.at("noise_seed").get<std::uint64_t>();
        rec.total_intensity = j.at("total_intensity").get<double>();
        rec.y_tilde = j.at("y_tilde").get<std::vector<double>>();
    } catch (const nlohmann::json::exception& e) {
        throw Error(std::string("record field error: ") + e.what());
    }
    if (rec.y_tilde.size() != rec.plan.m)
        throw Error("record readings do not match the plan");
    return rec;
}

void save_record(const std::string& path, const MeasurementRecord& record) {
    std::ofstream out(path);
    if (!out)
        throw Error("cannot open for writing: " + path);
    out << record_to_json(record) << '\n';
}

MeasurementRecord load_record(const std::string& path) {
    std::ifstream in(path);
    if (!in)
        throw Error("cannot open for reading: " + path);
    std::stringstream ss;
    ss << in.rdbuf();
    return record_from_json(ss.str());
}

}  // namespace spcam
