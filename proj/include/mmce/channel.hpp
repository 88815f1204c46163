#pragma once

#include <mmce/rng.hpp>
#include <mmce/types.hpp>

#include <Eigen/Dense>

#include <cstdint>

namespace mmce {

/// Sparse multipath descriptor: per-path arrival angle, departure angle, gain.
struct ChannelParams {
    Eigen::VectorXd aoa;   // normalized arrival angles, each in [0, 1)
    Eigen::VectorXd aod;   // normalized departure angles, each in [0, 1)
    Eigen::VectorXcd gain; // complex path gains

    int path_count() const { return static_cast<int>(gain.size()); }
};

/// Uniform linear array response for a normalized angle: entry k is
/// exp(j 2 pi k theta), k = 0 .. n-1.
Eigen::VectorXcd steering_vector(int n, double theta);

/// Elementwise derivative of steering_vector with respect to theta:
/// entry k is j 2 pi k exp(j 2 pi k theta).
Eigen::VectorXcd steering_vector_derivative(int n, double theta);

/// Stack steering vectors for several angles into an n x L matrix.
Eigen::MatrixXcd steering_matrix(int n, const Eigen::VectorXd& thetas);

/// Stack steering derivatives the same way.
Eigen::MatrixXcd steering_derivative_matrix(int n, const Eigen::VectorXd& thetas);

/// Assemble the dense channel A_rx * diag(gain) * A_tx^H, n_rx x n_tx.
Eigen::MatrixXcd assemble_channel(const ChannelParams& params, int n_rx, int n_tx);

/// Draw a random sparse channel: angles uniform on [0, 1) with pairwise
/// circular separation >= min_separation on both ends, gains standard
/// complex Gaussian. Throws parameter_error when the separation demand
/// cannot be met.
ChannelParams sample_channel(int n_paths, double min_separation, Rng& rng);
ChannelParams sample_channel(int n_paths, double min_separation, std::uint64_t seed);

}  // namespace mmce
