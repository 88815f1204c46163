#pragma once

#include <mmce/rng.hpp>
#include <mmce/types.hpp>

#include <Eigen/Dense>

#include <cstdint>

namespace mmce {

/// Training configuration: analog combiner bank and pilot symbols.
/// combiner stacks the per-slot combiners side by side, so its column
/// count equals slots * rf_chains_rx.
struct SoundingSetup {
    Eigen::MatrixXcd combiner;  // n_rx x n_out
    Eigen::MatrixXcd pilots;    // n_tx x n_pilot
    int rf_chains_rx = 0;
    int slots = 0;

    int n_rx() const { return static_cast<int>(combiner.rows()); }
    int n_tx() const { return static_cast<int>(pilots.rows()); }
    int n_out() const { return static_cast<int>(combiner.cols()); }
    int n_pilot() const { return static_cast<int>(pilots.cols()); }
};

/// Received pilots after combining, plus the per-entry noise power used.
struct MeasurementSet {
    Eigen::MatrixXcd received;  // n_out x n_pilot
    double noise_variance = 0.0;
};

/// Random constant-modulus pilots, entries e^{j phi} / sqrt(n_tx).
Eigen::MatrixXcd generate_pilots(int n_tx, int n_pilot, Rng& rng);

/// Random constant-modulus combiner bank spanning `slots` time slots with
/// `rf_chains` outputs each; entries e^{j phi} / sqrt(n_rx).
Eigen::MatrixXcd generate_combiners(int n_rx, int rf_chains, int slots, Rng& rng);

/// Convenience constructor for a full random setup.
SoundingSetup generate_setup(int n_rx, int n_tx, int rf_chains, int slots,
                             int n_pilot, Rng& rng);

/// Apply the sounding model: received = W^H H X + noise, noise entries
/// circularly-symmetric complex Gaussian with the given per-entry variance.
MeasurementSet measure(const Eigen::MatrixXcd& channel, const SoundingSetup& setup,
                       double noise_variance, Rng& rng);

/// Effective per-pilot matrix, n_out x L. Column l is
/// (a_tx(aod_l)^H x_p) * W^H a_rx(aoa_l). Pilot index p is 0-based.
Eigen::MatrixXcd effective_matrix(const SoundingSetup& setup,
                                  const Eigen::VectorXd& aoa,
                                  const Eigen::VectorXd& aod, int p);

/// Noise variance realizing a target SNR, defined as the ratio of mean
/// per-entry power of W^H H X to per-entry noise power.
double snr_to_noise_variance(const Eigen::MatrixXcd& channel,
                             const SoundingSetup& setup, double snr_db);

}  // namespace mmce
