#pragma once

#include <mmce/baselines.hpp>
#include <mmce/precondition.hpp>
#include <mmce/solver.hpp>

#include <cstdint>
#include <string>
#include <vector>

namespace mmce {

/// Monte Carlo experiment description. Defaults describe the reference
/// scenario: 64x64 arrays, 4 RF chains per side, 3 paths, 24 pilots and
/// 24 combined outputs per pilot.
struct ExperimentConfig {
    int n_r = 64;
    int n_t = 64;
    int rf_rx = 4;
    int rf_tx = 4;
    int n_x = 24;   // pilot count
    int m = 6;      // combining slots; outputs per pilot = m * rf_rx
    int paths = 3;
    double min_separation = 2.0 / 64;
    std::vector<double> snr_db_list = {-10, -5, 0, 5, 10, 15, 20};
    int trials = 100;
    std::uint64_t seed = 1;
    SolverOptions solver;
    int n_init = 0;    // candidate count for the coarse stage; 0 derives it
    int threads = 0;   // sweep workers; 0 uses the hardware count
    bool use_precondition = true;  // false: seed the solver with every grid pair

    int n_out() const { return m * rf_rx; }
};

/// Outcome of one method on one trial.
struct MethodRecord {
    double nmse_db = 0.0;
    double se = 0.0;
    double paths = 0.0;
    double iterations = 0.0;
    double time_ms = 0.0;
    bool failed = false;
};

/// All methods on one trial, in reporting order.
struct TrialRecord {
    MethodRecord ir;
    MethodRecord omp;
    MethodRecord perfect;
};

/// One aggregated (snr, method) row. Means run over every trial; failures
/// counts trials whose method flag was set (non-convergence or an error).
struct SweepRow {
    double snr_db = 0.0;
    std::string method;
    double nmse_db_mean = 0.0;
    double nmse_db_std = 0.0;
    double se_mean = 0.0;
    double paths_mean = 0.0;
    double iters_mean = 0.0;
    double time_ms_mean = 0.0;
    int failures = 0;
};

struct SweepResult {
    std::vector<SweepRow> rows;  // snr-major; methods ordered ir, omp, perfect_csi
};

/// One drawn scenario: sounding setup, true channel, noisy measurements.
struct Scenario {
    SoundingSetup setup;
    ChannelParams truth;
    Eigen::MatrixXcd channel;
    MeasurementSet meas;
};

/// Deterministic per-trial stream seed from the master seed, the SNR value,
/// and the trial index.
std::uint64_t trial_seed(std::uint64_t master, double snr_db, int trial_index);

/// Draw the scenario a given trial operates on. snr_db may be +infinity for
/// a noiseless draw.
Scenario make_scenario(const ExperimentConfig& config, double snr_db, int trial_index);

/// Run every method on one trial. Deterministic in (config, snr_db, index);
/// estimator failures are recorded in the per-method flag, not thrown.
TrialRecord run_trial(const ExperimentConfig& config, double snr_db, int trial_index);

/// Monte Carlo sweep over config.snr_db_list x config.trials. Trials run on
/// a worker pool; aggregation order is fixed, so the result is identical for
/// any worker count.
SweepResult run_sweep(const ExperimentConfig& config);

/// Write the aggregate table as CSV with columns snr_db, method,
/// nmse_db_mean, nmse_db_std, se_mean, paths_mean, iters_mean, time_ms_mean,
/// failures.
void emit_csv(const SweepResult& result, const std::string& path);

}  // namespace mmce
