#include <mmce/channel.hpp>
#include <mmce/errors.hpp>

#include <cmath>

namespace mmce {

Eigen::VectorXcd steering_vector(int n, double theta) {
    if (n <= 0) throw dimension_error("steering_vector: array size must be positive");
    const double t = wrap_unit(theta);
    Eigen::VectorXcd a(n);
    for (int k = 0; k < n; ++k) a(k) = std::polar(1.0, 2.0 * M_PI * k * t);
    return a;
}

Eigen::VectorXcd steering_vector_derivative(int n, double theta) {
    if (n <= 0) throw dimension_error("steering_vector_derivative: array size must be positive");
    const double t = wrap_unit(theta);
    Eigen::VectorXcd d(n);
    for (int k = 0; k < n; ++k) {
        const Complex phase = std::polar(1.0, 2.0 * M_PI * k * t);
        d(k) = Complex(0.0, 2.0 * M_PI * k) * phase;
    }
    return d;
}

Eigen::MatrixXcd steering_matrix(int n, const Eigen::VectorXd& thetas) {
    Eigen::MatrixXcd a(n, thetas.size());
    for (Eigen::Index l = 0; l < thetas.size(); ++l) a.col(l) = steering_vector(n, thetas(l));
    return a;
}

Eigen::MatrixXcd steering_derivative_matrix(int n, const Eigen::VectorXd& thetas) {
    Eigen::MatrixXcd d(n, thetas.size());
    for (Eigen::Index l = 0; l < thetas.size(); ++l)
        d.col(l) = steering_vector_derivative(n, thetas(l));
    return d;
}

Eigen::MatrixXcd assemble_channel(const ChannelParams& params, int n_rx, int n_tx) {
    if (n_rx <= 0 || n_tx <= 0)
        throw dimension_error("assemble_channel: array sizes must be positive");
    if (params.aoa.size() != params.gain.size() || params.aod.size() != params.gain.size())
        throw dimension_error("assemble_channel: aoa, aod, gain must have equal length");
    const Eigen::MatrixXcd ar = steering_matrix(n_rx, params.aoa);
    const Eigen::MatrixXcd at = steering_matrix(n_tx, params.aod);
    return ar * params.gain.asDiagonal() * at.adjoint();
}

namespace {

bool separated(const Eigen::VectorXd& angles, int used, double candidate, double min_sep) {
    for (int i = 0; i < used; ++i)
        if (circular_distance(angles(i), candidate) < min_sep) return false;
    return true;
}

}  // namespace

ChannelParams sample_channel(int n_paths, double min_separation, Rng& rng) {
    if (n_paths <= 0) throw parameter_error("sample_channel: need at least one path");
    if (min_separation < 0.0) throw parameter_error("sample_channel: negative separation");
    // n_paths points on the unit circle pairwise >= s apart need n_paths * s <= 1.
    if (min_separation * n_paths >= 1.0)
        throw parameter_error("sample_channel: separation infeasible for path count");

    ChannelParams p;
    p.aoa.resize(n_paths);
    p.aod.resize(n_paths);
    p.gain.resize(n_paths);

    std::uniform_real_distribution<double> u(0.0, 1.0);
    const int max_attempts = 10000 * n_paths;
    int attempts = 0;
    int placed = 0;
    while (placed < n_paths) {
        if (++attempts > max_attempts)
            throw parameter_error("sample_channel: separation rejection limit exceeded");
        const double cand_aoa = wrap_unit(u(rng));
        const double cand_aod = wrap_unit(u(rng));
        if (!separated(p.aoa, placed, cand_aoa, min_separation)) continue;
        if (!separated(p.aod, placed, cand_aod, min_separation)) continue;
        p.aoa(placed) = cand_aoa;
        p.aod(placed) = cand_aod;
        ++placed;
    }
    for (int l = 0; l < n_paths; ++l) p.gain(l) = complex_gaussian(rng);
    return p;
}

ChannelParams sample_channel(int n_paths, double min_separation, std::uint64_t seed) {
    Rng rng(seed);
    return sample_channel(n_paths, min_separation, rng);
}

}  // namespace mmce
