#pragma once

#include <mmce/channel.hpp>
#include <mmce/sounding.hpp>

#include <Eigen/Dense>

namespace mmce {

/// Sparse channel estimate restricted to the DFT grid.
struct GridEstimate {
    Eigen::VectorXd aoa;   // multiples of 1/n_rx
    Eigen::VectorXd aod;   // multiples of 1/n_tx
    Eigen::VectorXcd gain;

    Eigen::Index path_count() const { return gain.size(); }
    ChannelParams as_params() const { return {aoa, aod, gain}; }
};

/// Greedy on-grid pursuit over the combined dictionary: per round picks the
/// grid pair whose atom correlates best with the residual, re-solves all
/// selected gains jointly, and stops at max_paths atoms or once a round
/// stops reducing the residual.
GridEstimate omp_estimate(const MeasurementSet& meas, const SoundingSetup& setup,
                          int max_paths);

/// 10*log10(|h_true - h_est|_F^2 / |h_true|_F^2), floored at -300 dB.
double nmse(const Eigen::MatrixXcd& h_true, const Eigen::MatrixXcd& h_est);

/// Achievable rate of an n_streams hybrid link built from the estimate and
/// run over the true channel: precoder/combiner are the top right/left
/// singular vectors of h_est, power split evenly across streams.  If the
/// combiner Gram matrix is numerically rank deficient a pseudo-inverse is
/// used and *pinv_used (when given) is set.
double spectral_efficiency(const Eigen::MatrixXcd& h_est, const Eigen::MatrixXcd& h_true,
                           double snr_linear, int n_streams,
                           bool* pinv_used = nullptr);

}  // namespace mmce
