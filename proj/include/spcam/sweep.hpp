#pragma once

#include "spcam/recon.hpp"

namespace spcam {

/// One (sampling ratio, seed) cell of a reconstruction-quality experiment.
struct SweepPoint {
    double ratio = 0.0;
    std::uint64_t seed = 0;
    std::size_t m = 0;
    double psnr_db = 0.0;
    double residual = 0.0;
    int iterations = 0;
    bool full_path = false;  // recovered through the full-sampling inverse
};

struct SweepRow {
    double ratio = 0.0;
    double mean_psnr = 0.0;
    double std_psnr = 0.0;
};

struct SweepResult {
    std::vector<SweepPoint> points;
    std::vector<SweepRow> rows;
};

struct SweepOptions {
    std::vector<double> ratios;
    std::vector<std::uint64_t> seeds;
    double sigma = 4e-4;
    MeasureMode mode = MeasureMode::differential;
    ReconConfig recon;
    bool auto_epsilon = true;  // derive epsilon from the record's noise model
    int workers = 0;           // 0: SPCAM_WORKERS env var, else hardware
};

/// Measurement count for a sampling ratio: nearest even integer, clamped to
/// [2, n].
std::size_t ratio_to_m(double ratio, std::size_t n);

/// Run sample + recover for every (ratio, seed) cell and aggregate the PSNR
/// mean and standard deviation per ratio. Cells are independent and spread
/// across a small thread pool. Exact matches report 300 dB so that the
/// aggregates stay finite.
SweepResult run_sweep(const SceneImage& reference, const SweepOptions& options);

}  // namespace spcam
