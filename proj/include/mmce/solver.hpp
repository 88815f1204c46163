#pragma once

#include <mmce/channel.hpp>
#include <mmce/sounding.hpp>
#include <mmce/types.hpp>

#include <Eigen/Dense>

#include <vector>

namespace mmce {

struct SolverOptions {
    double lambda_scale = 1.0;   // per-measurement-entry weight of the data term
    double lambda_max = 1e6;
    double delta_init = 1.0;
    double delta_min = 1e-10;
    double delta_shrink = 0.1;
    double prune_rel = 0.05;     // relative to the largest gain magnitude
    double prune_abs = 1e-4;
    double eps_th = 1e-6;        // relative gain-change termination threshold
    int max_iter = 200;
    int max_backtracks = 20;
    double step_init = 0.05;
};

/// Mutable estimator state between outer iterations.
struct IrState {
    Eigen::VectorXcd gains;
    Eigen::VectorXd aoa;
    Eigen::VectorXd aod;
    double lambda = 1.0;
    double delta = 1.0;
    int iteration = 0;
    double residue = 0.0;  // squared Frobenius data misfit at these parameters

    int path_count() const { return static_cast<int>(gains.size()); }
};

/// One diagnostics row per outer iteration.
struct TraceRow {
    int iteration = 0;
    double lambda = 0.0;
    double delta = 0.0;
    double residue = 0.0;   // misfit entering the iteration (drives lambda)
    double g_value = 0.0;   // log-sum objective after the iteration's updates
    double s_opt = 0.0;     // reduced surrogate after the iteration's updates
    int path_count = 0;     // paths surviving the iteration
    int step_halvings = 0;
    // extra diagnostics, not part of the CSV contract
    double g_before = 0.0;
    double s_before = 0.0;
};

struct IrResult {
    ChannelParams estimate;
    std::vector<TraceRow> trace;
    bool converged = false;
    bool no_paths = false;
    int iterations = 0;
    int jitter_events = 0;
};

struct AngleGradient {
    Eigen::VectorXd aoa;
    Eigen::VectorXd aod;
};

struct DescentStep {
    Eigen::VectorXd aoa;
    Eigen::VectorXd aod;
    int halvings = 0;
    bool accepted = false;
    double s_before = 0.0;
    double s_after = 0.0;
};

/// Diagnostics from one linear solve.
struct SolveInfo {
    double condition = 0.0;
    bool jittered = false;
};

/// Reweighting diagonal: entry l is 1 / (|gain_l|^2 + delta).
Eigen::VectorXd weight_matrix(const Eigen::VectorXcd& gains, double delta);

/// Closed-form gain update: solves
/// (lambda^{-1} diag(weights) + sum_p K_p^H K_p) z = sum_p K_p^H y_p.
Eigen::VectorXcd solve_gains(const Eigen::VectorXd& aoa, const Eigen::VectorXd& aod,
                             const Eigen::VectorXd& weights, double lambda,
                             const SoundingSetup& setup, const MeasurementSet& meas,
                             SolveInfo* info = nullptr);

/// Reduced surrogate: the weighted objective minimized over gains,
/// ||Y||_F^2 - v^H A^{-1} v.
double surrogate_value(const Eigen::VectorXd& aoa, const Eigen::VectorXd& aod,
                       const Eigen::VectorXd& weights, double lambda,
                       const SoundingSetup& setup, const MeasurementSet& meas);

/// Analytic gradient of surrogate_value in every arrival and departure angle.
AngleGradient surrogate_gradient(const Eigen::VectorXd& aoa, const Eigen::VectorXd& aod,
                                 const Eigen::VectorXd& weights, double lambda,
                                 const SoundingSetup& setup, const MeasurementSet& meas);

/// Annealing rule: min(lambda_scale / residue, lambda_max).
double update_lambda(double residue, const SolverOptions& opts);

/// Backtracking gradient step on the angles; never increases the surrogate.
DescentStep descend_angles(const IrState& state, const SoundingSetup& setup,
                           const MeasurementSet& meas, const SolverOptions& opts);

/// Drop paths whose gain magnitude falls below
/// max(prune_abs, prune_rel * max_l |gain_l|).
IrState prune_paths(const IrState& state, const SolverOptions& opts);

/// Sum coherent near-duplicate paths (both angles within tol circularly).
/// Returns the number of paths removed.
int merge_duplicate_paths(Eigen::VectorXcd& gains, Eigen::VectorXd& aoa,
                          Eigen::VectorXd& aod, double tol);

/// Full objective: sum_l log(|z_l|^2 + delta) + lambda * misfit.
double log_sum_objective(const IrState& state, const SoundingSetup& setup,
                         const MeasurementSet& meas);

/// Squared Frobenius data misfit for the given parameters.
double residual_power(const Eigen::VectorXcd& gains, const Eigen::VectorXd& aoa,
                      const Eigen::VectorXd& aod, const SoundingSetup& setup,
                      const MeasurementSet& meas);

/// The full iteratively-reweighted estimator. Measurements are normalized
/// to unit Frobenius energy internally, so the default lambda, delta, and
/// pruning scales are data-scale free; trace rows are in normalized units
/// while the returned gains are rescaled to the input.
IrResult run_ir(const Eigen::VectorXd& init_aoa, const Eigen::VectorXd& init_aod,
                const SoundingSetup& setup, const MeasurementSet& meas,
                const SolverOptions& opts);

}  // namespace mmce
