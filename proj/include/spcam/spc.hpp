#pragma once

#include "spcam/core.hpp"
#include "spcam/patterns.hpp"

namespace spcam {

enum class MeasureMode { plain, differential };

/// Detector readings for one acquisition run. y_tilde[t] is the reading for
/// pattern t; total_intensity is the single unmodulated reading <I_v, X>
/// that undoes the 0/1 rescaling during restoration. In differential mode
/// the stored readings are (<p,X> - <I_v - p, X>)/2 and total_intensity
/// still holds <I_v, X>.
struct MeasurementRecord {
    SamplingPlan plan;
    MeasureMode mode = MeasureMode::plain;
    double noise_sigma = 0.0;   // relative to mean_signal
    double mean_signal = 0.0;   // mean of the noiseless pattern readings
    std::uint64_t noise_seed = 0;
    double total_intensity = 0.0;
    std::vector<double> y_tilde;
};

/// Measure a pattern set against a scene. Noise is additive Gaussian with
/// standard deviation noise_sigma * mean(<p_t, X>), drawn independently per
/// reading (total intensity included) from the seeded generator.
MeasurementRecord measure(const PatternSet& patterns, const SceneImage& x,
                          double noise_sigma, MeasureMode mode, std::uint64_t seed);

/// Same record as measure(build-from-plan) but generates patterns on the
/// fly in packed bundles, so full-resolution plans never materialize the
/// whole pattern matrix.
MeasurementRecord measure_with_plan(const SamplingPlan& plan, const SceneImage& x,
                                    double noise_sigma, MeasureMode mode,
                                    std::uint64_t seed);

/// Restore the complex measurement vector Y of length m from the real
/// readings:
///   odd q:   y_j = (2 yt_{2j-1} + 2i yt_{2j} - (1+i) <I,X>) / sqrt(2n)
///   even q:  y_j = ((1+i) yt_{2j-1} + (1-i) yt_{2j} - <I,X>) / sqrt(n)
/// for j = 1..m/2, with y_{m+1-j} = conj(y_j). Differential records are
/// first mapped back to plain readings via yt + total_intensity/2.
ComplexField restore_complex(const MeasurementRecord& record);

/// Physical snapshot count: m+1 for plain mode, 2(m+1) for differential.
std::size_t measurement_count(const MeasurementRecord& record);

/// ceil(C * S * ln(n) * mu^2), the sufficient-measurement planning bound.
std::size_t required_measurements(std::size_t sparsity, std::size_t n, double mu, double c);

/// Record (de)serialization as a JSON document.
std::string record_to_json(const MeasurementRecord& record);
MeasurementRecord record_from_json(const std::string& text);
void save_record(const std::string& path, const MeasurementRecord& record);
MeasurementRecord load_record(const std::string& path);

}  // namespace spcam
