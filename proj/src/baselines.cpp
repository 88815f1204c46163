#include <mmce/baselines.hpp>

#include <mmce/errors.hpp>
#include <mmce/precondition.hpp>

#include <Eigen/Dense>

#include <cmath>
#include <vector>

namespace mmce {

GridEstimate omp_estimate(const MeasurementSet& meas, const SoundingSetup& setup,
                          int max_paths) {
    if (max_paths < 1) {
        throw parameter_error("omp_estimate: max_paths must be at least 1");
    }
    if (meas.received.rows() != setup.n_out() || meas.received.cols() != setup.n_pilot()) {
        throw dimension_error("omp_estimate: measurement shape does not match the setup");
    }

    const int nr = setup.n_rx();
    const int nt = setup.n_tx();

    // Grid atoms factor through the sounding matrices: atom (j, k) is the
    // outer product of combined rx column j and piloted tx column k.
    const Eigen::MatrixXcd rxg = setup.combiner.adjoint() * dft_dictionary(nr);
    const Eigen::MatrixXcd txg = setup.pilots.adjoint() * dft_dictionary(nt);
    const Eigen::VectorXd rn = rxg.colwise().norm().transpose().cwiseMax(1e-300);
    const Eigen::VectorXd tn = txg.colwise().norm().transpose().cwiseMax(1e-300);

    const Eigen::Index dim = meas.received.size();
    const Eigen::VectorXcd yv =
        Eigen::Map<const Eigen::VectorXcd>(meas.received.data(), dim);

    Eigen::MatrixXcd basis(dim, max_paths);
    std::vector<int> sel_a, sel_b;
    std::vector<char> used(static_cast<size_t>(nr) * nt, 0);

    Eigen::MatrixXcd residual = meas.received;
    double res_energy = residual.squaredNorm();
    const double res_floor = 1e-24 * res_energy;
    Eigen::VectorXcd coef;

    for (int round = 0; round < max_paths; ++round) {
        if (res_energy <= res_floor) break;

        const Eigen::MatrixXcd corr = rxg.adjoint() * residual * txg;
        int best_a = -1, best_b = -1;
        double best_score = 0.0;
        for (int j = 0; j < nr; ++j) {
            for (int k = 0; k < nt; ++k) {
                if (used[static_cast<size_t>(j) * nt + k]) continue;
                const double score = std::abs(corr(j, k)) / (rn(j) * tn(k));
                if (score > best_score) {
                    best_score = score;
                    best_a = j;
                    best_b = k;
                }
            }
        }
        if (best_a < 0) break;

        const Eigen::MatrixXcd atom = rxg.col(best_a) * txg.col(best_b).adjoint();
        basis.col(round) = Eigen::Map<const Eigen::VectorXcd>(atom.data(), dim);

        const auto active = basis.leftCols(round + 1);
        const Eigen::VectorXcd trial = active.colPivHouseholderQr().solve(yv);
        const Eigen::VectorXcd res_v = yv - active * trial;
        const double new_energy = res_v.squaredNorm();
        if (res_energy - new_energy < 1e-6 * res_energy) break;

        coef = trial;
        sel_a.push_back(best_a);
        sel_b.push_back(best_b);
        used[static_cast<size_t>(best_a) * nt + best_b] = 1;
        residual = res_v.reshaped(meas.received.rows(), meas.received.cols());
        res_energy = new_energy;
    }

    const int found = static_cast<int>(sel_a.size());
    GridEstimate out;
    out.aoa.resize(found);
    out.aod.resize(found);
    out.gain.resize(found);
    for (int i = 0; i < found; ++i) {
        out.aoa(i) = static_cast<double>(sel_a[i]) / nr;
        out.aod(i) = static_cast<double>(sel_b[i]) / nt;
        out.gain(i) = coef(i);
    }
    return out;
}

double nmse(const Eigen::MatrixXcd& h_true, const Eigen::MatrixXcd& h_est) {
    if (h_true.rows() != h_est.rows() || h_true.cols() != h_est.cols()) {
        throw dimension_error("nmse: channel shapes differ");
    }
    const double ref = h_true.squaredNorm();
    if (ref == 0.0) {
        throw parameter_error("nmse: reference channel is zero");
    }
    const double ratio = (h_true - h_est).squaredNorm() / ref;
    return std::max(10.0 * std::log10(ratio), -300.0);
}

double spectral_efficiency(const Eigen::MatrixXcd& h_est, const Eigen::MatrixXcd& h_true,
                           double snr_linear, int n_streams, bool* pinv_used) {
    if (pinv_used) *pinv_used = false;
    if (h_est.rows() != h_true.rows() || h_est.cols() != h_true.cols()) {
        throw dimension_error("spectral_efficiency: channel shapes differ");
    }
    const Eigen::Index max_streams = std::min(h_est.rows(), h_est.cols());
    if (n_streams < 1 || n_streams > max_streams) {
        throw parameter_error("spectral_efficiency: stream count out of range");
    }
    if (!(snr_linear >= 0.0)) {
        throw parameter_error("spectral_efficiency: snr must be nonnegative");
    }

    Eigen::JacobiSVD<Eigen::MatrixXcd> svd(h_est, Eigen::ComputeThinU | Eigen::ComputeThinV);
    const Eigen::MatrixXcd combin = svd.matrixU().leftCols(n_streams);
    const Eigen::MatrixXcd precod = svd.matrixV().leftCols(n_streams);

    const Eigen::MatrixXcd through = combin.adjoint() * h_true * precod;
    const Eigen::MatrixXcd gram = combin.adjoint() * combin;

    Eigen::MatrixXcd whitened;
    Eigen::LDLT<Eigen::MatrixXcd> ldlt(gram);
    const Eigen::VectorXd d = ldlt.vectorD().real();
    const bool healthy = ldlt.info() == Eigen::Success && d.size() > 0 &&
                         d.minCoeff() > 1e-12 * std::max(d.maxCoeff(), 1e-300);
    if (healthy) {
        whitened = ldlt.solve(through);
    } else {
        if (pinv_used) *pinv_used = true;
        whitened = gram.completeOrthogonalDecomposition().pseudoInverse() * through;
    }

    // log2 det(I + c * gram^{-1} B B^H) via the eigenvalues of B^H gram^{-1} B.
    const Eigen::MatrixXcd quad = through.adjoint() * whitened;
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(quad);
    const double per_stream = snr_linear / n_streams;
    double rate = 0.0;
    for (Eigen::Index i = 0; i < es.eigenvalues().size(); ++i) {
        const double lam = std::max(es.eigenvalues()(i), 0.0);
        rate += std::log2(1.0 + per_stream * lam);
    }
    return rate;
}

}  // namespace mmce
