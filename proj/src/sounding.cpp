#include <mmce/channel.hpp>
#include <mmce/errors.hpp>
#include <mmce/sounding.hpp>

#include <cmath>

namespace mmce {

namespace {

Eigen::MatrixXcd random_phase_matrix(int rows, int cols, double scale, Rng& rng) {
    Eigen::MatrixXcd m(rows, cols);
    // Column-major fill so the draw order matches Eigen's storage order.
    for (int c = 0; c < cols; ++c)
        for (int r = 0; r < rows; ++r) m(r, c) = scale * random_phase(rng);
    return m;
}

}  // namespace

Eigen::MatrixXcd generate_pilots(int n_tx, int n_pilot, Rng& rng) {
    if (n_tx <= 0 || n_pilot <= 0)
        throw dimension_error("generate_pilots: sizes must be positive");
    return random_phase_matrix(n_tx, n_pilot, 1.0 / std::sqrt(double(n_tx)), rng);
}

Eigen::MatrixXcd generate_combiners(int n_rx, int rf_chains, int slots, Rng& rng) {
    if (n_rx <= 0 || rf_chains <= 0 || slots <= 0)
        throw dimension_error("generate_combiners: sizes must be positive");
    return random_phase_matrix(n_rx, rf_chains * slots, 1.0 / std::sqrt(double(n_rx)), rng);
}

SoundingSetup generate_setup(int n_rx, int n_tx, int rf_chains, int slots,
                             int n_pilot, Rng& rng) {
    SoundingSetup s;
    s.combiner = generate_combiners(n_rx, rf_chains, slots, rng);
    s.pilots = generate_pilots(n_tx, n_pilot, rng);
    s.rf_chains_rx = rf_chains;
    s.slots = slots;
    return s;
}

MeasurementSet measure(const Eigen::MatrixXcd& channel, const SoundingSetup& setup,
                       double noise_variance, Rng& rng) {
    if (channel.rows() != setup.n_rx() || channel.cols() != setup.n_tx())
        throw dimension_error("measure: channel does not match setup dimensions");
    if (noise_variance < 0.0) throw parameter_error("measure: negative noise variance");

    MeasurementSet m;
    m.received = setup.combiner.adjoint() * channel * setup.pilots;
    m.noise_variance = noise_variance;
    if (noise_variance > 0.0) {
        const double sigma = std::sqrt(noise_variance);
        for (int c = 0; c < m.received.cols(); ++c)
            for (int r = 0; r < m.received.rows(); ++r)
                m.received(r, c) += sigma * complex_gaussian(rng);
    }
    return m;
}

Eigen::MatrixXcd effective_matrix(const SoundingSetup& setup,
                                  const Eigen::VectorXd& aoa,
                                  const Eigen::VectorXd& aod, int p) {
    if (aoa.size() != aod.size())
        throw dimension_error("effective_matrix: aoa and aod length mismatch");
    if (p < 0 || p >= setup.n_pilot())
        throw dimension_error("effective_matrix: pilot index out of range");

    const Eigen::MatrixXcd wa =
        setup.combiner.adjoint() * steering_matrix(setup.n_rx(), aoa);
    const Eigen::VectorXcd tx =
        steering_matrix(setup.n_tx(), aod).adjoint() * setup.pilots.col(p);
    return wa * tx.asDiagonal();
}

double snr_to_noise_variance(const Eigen::MatrixXcd& channel,
                             const SoundingSetup& setup, double snr_db) {
    if (!std::isfinite(snr_db))
        throw parameter_error("snr_to_noise_variance: snr must be finite");
    if (channel.rows() != setup.n_rx() || channel.cols() != setup.n_tx())
        throw dimension_error("snr_to_noise_variance: channel does not match setup");
    const double signal =
        (setup.combiner.adjoint() * channel * setup.pilots).squaredNorm();
    if (signal <= 0.0)
        throw parameter_error("snr_to_noise_variance: zero signal power");
    const double entries = double(setup.n_out()) * double(setup.n_pilot());
    return signal / (entries * std::pow(10.0, snr_db / 10.0));
}

}  // namespace mmce
