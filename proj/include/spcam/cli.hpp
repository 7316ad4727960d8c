#pragma once

#include <iosfwd>

#include "spcam/sweep.hpp"

namespace spcam::cli {

struct PatternsOptions {
    unsigned q = 0;              // 0: take rows/cols
    std::size_t rows = 0;
    std::size_t cols = 0;
    std::size_t m = 0;           // 0: derive from ratio
    double ratio = 0.0;
    std::uint64_t seed = 1;
    std::string out;
    std::string plan_out;        // optional plan dump
};

/// Emit the packed bundle stream for a plan and report generation
/// throughput ("bundles/s: <x>, patterns/s: <y>").
void cmd_patterns(const PatternsOptions& options, std::ostream& log);

struct SampleOptions {
    std::string image;
    std::string plan;            // load instead of building one
    std::size_t m = 0;
    double ratio = 0.0;
    std::uint64_t seed = 1;
    double sigma = 4e-4;
    MeasureMode mode = MeasureMode::plain;
    bool crop = false;           // center-crop to power-of-two sides
    std::string out;
    std::string plan_out;
};

void cmd_sample(const SampleOptions& options, std::ostream& log);

struct RecoverOptions {
    std::string record;
    std::string out;
    std::string reference;       // optional, enables PSNR
    std::string metrics_out;     // optional metrics JSON
    double epsilon = -1.0;       // < 0: derive from the record's noise model
    int max_iters = 5000;
    int pgm_bits = 16;
};

struct RecoverMetrics {
    double psnr_db = 0.0;
    bool has_psnr = false;
    double residual = 0.0;
    int iterations = 0;
    bool converged = false;
    bool full_path = false;
};

RecoverMetrics cmd_recover(const RecoverOptions& options, std::ostream& log);

struct SweepCmdOptions {
    std::string image;
    std::vector<double> ratios;
    std::vector<std::uint64_t> seeds;
    double sigma = 4e-4;
    MeasureMode mode = MeasureMode::differential;
    double epsilon = -1.0;
    int max_iters = 5000;
    int workers = 0;
    std::string out_prefix;      // writes <prefix>.tsv and <prefix>_points.tsv
};

SweepResult cmd_sweep(const SweepCmdOptions& options, std::ostream& log);

struct SelftestOptions {
    std::string write_scene;     // optional path for the demo scene
};

/// Embedded sanity suite over the whole pipeline; prints one line per check
/// and returns true when everything passed.
bool cmd_selftest(const SelftestOptions& options, std::ostream& log);

}  // namespace spcam::cli
