#include <iostream>

#include <CLI11.hpp>

#include "spcam/cli.hpp"

namespace {

std::vector<double> parse_ratios(const std::string& csv) {
    std::vector<double> out;
    std::stringstream ss(csv);
    std::string item;
    while (std::getline(ss, item, ','))
        if (!item.empty())
            out.push_back(std::stod(item));
    return out;
}

std::vector<std::uint64_t> parse_seeds(const std::string& csv) {
    std::vector<std::uint64_t> out;
    std::stringstream ss(csv);
    std::string item;
    while (std::getline(ss, item, ','))
        if (!item.empty())
            out.push_back(std::stoull(item));
    return out;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"single-pixel camera toolkit: noiselet pattern generation, "
                 "measurement simulation and sparse reconstruction"};
    app.require_subcommand(1);

    spcam::cli::PatternsOptions patterns;
    auto* cmd_patterns = app.add_subcommand("patterns", "generate a packed pattern stream");
    cmd_patterns->add_option("--q", patterns.q, "transform exponent (n = 2^q pixels)");
    cmd_patterns->add_option("--rows", patterns.rows, "pattern rows (power of two)");
    cmd_patterns->add_option("--cols", patterns.cols, "pattern cols (power of two)");
    cmd_patterns->add_option("--m", patterns.m, "measurement count (even)");
    cmd_patterns->add_option("--ratio", patterns.ratio, "sampling ratio m/n in (0,1]");
    cmd_patterns->add_option("--seed", patterns.seed, "plan seed");
    cmd_patterns->add_option("--out", patterns.out, "output bundle stream")->required();
    cmd_patterns->add_option("--plan-out", patterns.plan_out, "also save the plan JSON");

    spcam::cli::SampleOptions sample;
    std::string sample_mode = "plain";
    auto* cmd_sample = app.add_subcommand("sample", "simulate a measurement run");
    cmd_sample->add_option("--image", sample.image, "input PGM image")->required();
    cmd_sample->add_option("--plan", sample.plan, "load an existing plan JSON");
    cmd_sample->add_option("--m", sample.m, "measurement count (even)");
    cmd_sample->add_option("--ratio", sample.ratio, "sampling ratio m/n in (0,1]");
    cmd_sample->add_option("--seed", sample.seed, "plan seed");
    cmd_sample->add_option("--sigma", sample.sigma,
                           "noise level relative to the mean signal (default 4e-4)");
    cmd_sample->add_option("--mode", sample_mode, "plain|differential");
    cmd_sample->add_flag("--crop", sample.crop, "center-crop to power-of-two sides");
    cmd_sample->add_option("--out", sample.out, "output record JSON")->required();
    cmd_sample->add_option("--plan-out", sample.plan_out, "also save the plan JSON");

    spcam::cli::RecoverOptions recover;
    auto* cmd_recover = app.add_subcommand("recover", "reconstruct an image from a record");
    cmd_recover->add_option("--record", recover.record, "measurement record JSON")->required();
    cmd_recover->add_option("--out", recover.out, "output PGM image")->required();
    cmd_recover->add_option("--reference", recover.reference, "reference PGM for PSNR");
    cmd_recover->add_option("--metrics-out", recover.metrics_out, "metrics JSON path");
    cmd_recover->add_option("--epsilon", recover.epsilon,
                            "residual ball radius (default: from the record's noise)");
    cmd_recover->add_option("--iters", recover.max_iters, "solver iteration budget");
    cmd_recover->add_option("--bits", recover.pgm_bits, "output PGM depth (8 or 16)");

    spcam::cli::SweepCmdOptions sweep;
    std::string sweep_mode = "differential";
    std::string ratios_csv = "0.1,0.25,0.5,1.0";
    std::string seeds_csv = "1,2,3";
    auto* cmd_sweep = app.add_subcommand("sweep", "PSNR vs sampling-ratio experiment");
    cmd_sweep->add_option("--image", sweep.image, "input PGM image")->required();
    cmd_sweep->add_option("--ratios", ratios_csv, "comma-separated ratios");
    cmd_sweep->add_option("--seeds", seeds_csv, "comma-separated seeds");
    cmd_sweep->add_option("--sigma", sweep.sigma, "noise level (default 4e-4)");
    cmd_sweep->add_option("--mode", sweep_mode, "plain|differential");
    cmd_sweep->add_option("--epsilon", sweep.epsilon,
                          "residual ball radius (default: from the noise model)");
    cmd_sweep->add_option("--iters", sweep.max_iters, "solver iteration budget");
    cmd_sweep->add_option("--workers", sweep.workers,
                          "worker threads (default: SPCAM_WORKERS env or hardware)");
    cmd_sweep->add_option("--out", sweep.out_prefix, "output prefix for the tables");

    spcam::cli::SelftestOptions selftest;
    auto* cmd_selftest = app.add_subcommand("selftest", "run the embedded sanity suite");
    cmd_selftest->add_option("--write-scene", selftest.write_scene,
                             "also write the 256x256 demo scene PGM");

    CLI11_PARSE(app, argc, argv);

    try {
        if (cmd_patterns->parsed()) {
            spcam::cli::cmd_patterns(patterns, std::cout);
        } else if (cmd_sample->parsed()) {
            if (sample_mode == "plain")
                sample.mode = spcam::MeasureMode::plain;
            else if (sample_mode == "differential")
                sample.mode = spcam::MeasureMode::differential;
            else
                throw spcam::Error("unknown mode: " + sample_mode);
            spcam::cli::cmd_sample(sample, std::cout);
        } else if (cmd_recover->parsed()) {
            spcam::cli::cmd_recover(recover, std::cout);
        } else if (cmd_sweep->parsed()) {
            if (sweep_mode == "plain")
                sweep.mode = spcam::MeasureMode::plain;
            else if (sweep_mode == "differential")
                sweep.mode = spcam::MeasureMode::differential;
            else
                throw spcam::Error("unknown mode: " + sweep_mode);
            sweep.ratios = parse_ratios(ratios_csv);
            sweep.seeds = parse_seeds(seeds_csv);
            spcam::cli::cmd_sweep(sweep, std::cout);
        } else if (cmd_selftest->parsed()) {
            if (!spcam::cli::cmd_selftest(selftest, std::cout))
                return 1;
        }
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << std::endl;
        return 1;
    }
    return 0;
}
