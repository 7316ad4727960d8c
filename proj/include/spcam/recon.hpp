#pragma once

#include "spcam/core.hpp"
#include "spcam/haar.hpp"
#include "spcam/spc.hpp"

namespace spcam {

struct ReconConfig {
    double epsilon = 0.0;             // residual ball radius
    int max_iters = 5000;             // total inner iteration budget
    double step_tolerance = 1e-10;    // relative step size stop
    double objective_tolerance = 1e-8;  // residual floor factor when epsilon = 0
};

/// One outer stage of the solver: regularization weight, residual and l1
/// norm of its iterate, and whether it met the residual target.
struct SolverStage {
    double lambda = 0.0;
    double residual = 0.0;
    double l1_norm = 0.0;
    bool feasible = false;
};

struct ReconResult {
    SceneImage image;
    WaveletCoeffs coeffs;
    double residual_norm = 0.0;   // recomputed from the returned coefficients
    double solver_residual = 0.0;  // the solver's own final value
    int iterations = 0;
    bool converged = false;
    std::vector<SolverStage> trace;
};

/// Measurement operator y = Phi Psi F evaluated as Haar synthesis, 2D
/// noiselet transform and plan row selection; Phi is never materialized.
ComplexField forward_op(const WaveletCoeffs& f, const SamplingPlan& plan);

/// Exact adjoint of forward_op under the real inner product on coefficients
/// and Re<.,.> on measurements.
WaveletCoeffs adjoint_op(const ComplexField& y, const SamplingPlan& plan);

/// Basis pursuit denoising: approximately minimize ||F||_1 subject to
/// ||y - forward_op(F)||_2 <= epsilon, via accelerated proximal gradient
/// (soft thresholding) with an outer continuation/bisection loop on the
/// regularization weight until the residual meets the target. epsilon = 0
/// solves basis pursuit down to the configured tolerance budget.
ReconResult solve_bpdn(const ComplexField& y, const SamplingPlan& plan,
                       const ReconConfig& config);

/// Full-sampling shortcut: undo the plan ordering and apply the inverse
/// transform. Requires m = n.
SceneImage solve_full(const ComplexField& y, const SamplingPlan& plan);

/// 10 log10(max(x_ref)^2 / MSE); +infinity when MSE = 0. With register_fit
/// the estimate is first gain/offset least-squares matched to the
/// reference.
double psnr(const SceneImage& x_hat, const SceneImage& x_ref, bool register_fit = false);

/// Keep the ceil(fraction * size) largest-magnitude coefficients, zero the
/// rest; ties broken toward the lower linear index.
WaveletCoeffs compress_topk(const WaveletCoeffs& f, double fraction);

/// Residual ball radius matched to the record's noise model,
/// sigma_abs * sqrt(kappa m / n) with kappa = 5 (plain) or 4 (differential),
/// plus 5% headroom. Returns 0 for noiseless records.
double estimate_epsilon(const MeasurementRecord& record);

}  // namespace spcam
