#pragma once

#include <mmce/sounding.hpp>
#include <mmce/types.hpp>

#include <Eigen/Dense>

namespace mmce {

/// On-grid coarse angle estimates seeding the iterative solver.
struct CoarseEstimate {
    Eigen::VectorXd aoa_grid;          // multiples of 1/n_rx
    Eigen::VectorXd aod_grid;          // multiples of 1/n_tx
    Eigen::VectorXd singular_values;   // descending, one per candidate
};

/// Square matrix whose column k is steering_vector(n, k/n).
Eigen::MatrixXcd dft_dictionary(int n);

/// Coarse screening: successively selects the grid angle pairs that best
/// explain the measurements (normalized correlation through the sounding
/// matrices, deflation between picks, local refinement before snapping back
/// to the grid).  Reports the leading singular values alongside, in
/// descending order; candidate pairs follow the selection sequence, so
/// stronger components come first.
CoarseEstimate precondition(const MeasurementSet& meas, const SoundingSetup& setup,
                            int n_init);

/// Candidate-count policy: twice the expected path count, capped by the
/// measurement rank budget.
int choose_n_init(int expected_paths, int rank_budget);

}  // namespace mmce
