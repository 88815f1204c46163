#include <mmce/errors.hpp>
#include <mmce/solver.hpp>

#include <algorithm>
#include <cmath>
#include <limits>
#include <vector>

namespace mmce {

namespace {

constexpr double kConditionLimit = 1e12;

/// Normal equations of the weighted least-squares gain problem, assembled
/// pilot by pilot, plus the pieces the angle gradient reuses.
struct NormalSystem {
    Eigen::MatrixXcd wa;  // n_out x L, combined receive responses
    Eigen::MatrixXcd tx;  // L x n_pilot, transmit responses against pilots
    Eigen::MatrixXcd a;   // L x L Hermitian system matrix
    Eigen::VectorXcd v;   // L right-hand side
    Eigen::LDLT<Eigen::MatrixXcd> fac;
    double condition = 0.0;
    bool jittered = false;
};

double condition_estimate(const Eigen::LDLT<Eigen::MatrixXcd>& fac) {
    const Eigen::VectorXd d = fac.vectorD().real();
    const double lo = d.minCoeff();
    const double hi = d.maxCoeff();
    if (!(lo > 0.0) || !std::isfinite(hi))
        return std::numeric_limits<double>::infinity();
    return hi / lo;
}

NormalSystem build_system(const Eigen::VectorXd& aoa, const Eigen::VectorXd& aod,
                          const Eigen::VectorXd& weights, double lambda,
                          const SoundingSetup& setup, const MeasurementSet& meas) {
    const Eigen::Index L = aoa.size();
    if (L == 0) throw dimension_error("solver: empty path set");
    if (aod.size() != L || weights.size() != L)
        throw dimension_error("solver: aoa, aod, weights length mismatch");
    if (!(lambda > 0.0)) throw parameter_error("solver: lambda must be positive");
    if (meas.received.rows() != setup.n_out() || meas.received.cols() != setup.n_pilot())
        throw dimension_error("solver: measurements do not match setup");
    if (weights.minCoeff() <= 0.0)
        throw parameter_error("solver: weights must be positive");

    NormalSystem sys;
    sys.wa = setup.combiner.adjoint() * steering_matrix(setup.n_rx(), aoa);
    sys.tx = steering_matrix(setup.n_tx(), aod).adjoint() * setup.pilots;

    sys.a = ((1.0 / lambda) * weights).cast<Complex>().asDiagonal();
    sys.v = Eigen::VectorXcd::Zero(L);
    Eigen::MatrixXcd kp(setup.n_out(), L);
    for (int p = 0; p < setup.n_pilot(); ++p) {
        kp.noalias() = sys.wa * sys.tx.col(p).asDiagonal();
        sys.a.noalias() += kp.adjoint() * kp;
        sys.v.noalias() += kp.adjoint() * meas.received.col(p);
    }

    sys.fac.compute(sys.a);
    sys.condition = condition_estimate(sys.fac);
    if (!(sys.condition < kConditionLimit)) {
        const double jitter =
            1e-12 * std::max(sys.a.real().trace() / double(L), 1e-300);
        sys.a.diagonal().array() += Complex(jitter, 0.0);
        sys.fac.compute(sys.a);
        sys.condition = condition_estimate(sys.fac);
        sys.jittered = true;
        if (!std::isfinite(sys.condition))
            throw solver_error("solver: normal system numerically singular",
                               sys.condition);
    }
    return sys;
}

Eigen::VectorXcd solve_system(const NormalSystem& sys) {
    Eigen::VectorXcd u = sys.fac.solve(sys.v);
    if (!u.allFinite())
        throw solver_error("solver: non-finite gain solution", sys.condition);
    return u;
}

double surrogate_from(const NormalSystem& sys, const Eigen::VectorXcd& u,
                      const MeasurementSet& meas) {
    return meas.received.squaredNorm() - sys.v.dot(u).real();
}

AngleGradient gradient_from(const NormalSystem& sys, const Eigen::VectorXcd& u,
                            const Eigen::VectorXd& aoa, const Eigen::VectorXd& aod,
                            const SoundingSetup& setup, const MeasurementSet& meas) {
    const Eigen::Index L = aoa.size();
    const Eigen::MatrixXcd dwa =
        setup.combiner.adjoint() * steering_derivative_matrix(setup.n_rx(), aoa);
    const Eigen::MatrixXcd dtx =
        steering_derivative_matrix(setup.n_tx(), aod).adjoint() * setup.pilots;

    AngleGradient g;
    g.aoa = Eigen::VectorXd::Zero(L);
    g.aod = Eigen::VectorXd::Zero(L);
    Eigen::VectorXcd rp(setup.n_out());
    for (int p = 0; p < setup.n_pilot(); ++p) {
        rp.noalias() = sys.wa * (sys.tx.col(p).cwiseProduct(u));
        rp -= meas.received.col(p);
        const Eigen::VectorXcd er = dwa.adjoint() * rp;
        const Eigen::VectorXcd et = sys.wa.adjoint() * rp;
        g.aoa += 2.0 *
                 (u.conjugate().cwiseProduct(sys.tx.col(p).conjugate()).cwiseProduct(er))
                     .real();
        g.aod += 2.0 *
                 (u.conjugate().cwiseProduct(dtx.col(p).conjugate()).cwiseProduct(et))
                     .real();
    }
    return g;
}

}  // namespace

Eigen::VectorXd weight_matrix(const Eigen::VectorXcd& gains, double delta) {
    if (!(delta > 0.0)) throw parameter_error("weight_matrix: delta must be positive");
    return (gains.cwiseAbs2().array() + delta).inverse().matrix();
}

Eigen::VectorXcd solve_gains(const Eigen::VectorXd& aoa, const Eigen::VectorXd& aod,
                             const Eigen::VectorXd& weights, double lambda,
                             const SoundingSetup& setup, const MeasurementSet& meas,
                             SolveInfo* info) {
    const NormalSystem sys = build_system(aoa, aod, weights, lambda, setup, meas);
    if (info) {
        info->condition = sys.condition;
        info->jittered = sys.jittered;
    }
    return solve_system(sys);
}

double surrogate_value(const Eigen::VectorXd& aoa, const Eigen::VectorXd& aod,
                       const Eigen::VectorXd& weights, double lambda,
                       const SoundingSetup& setup, const MeasurementSet& meas) {
    const NormalSystem sys = build_system(aoa, aod, weights, lambda, setup, meas);
    return surrogate_from(sys, solve_system(sys), meas);
}

AngleGradient surrogate_gradient(const Eigen::VectorXd& aoa, const Eigen::VectorXd& aod,
                                 const Eigen::VectorXd& weights, double lambda,
                                 const SoundingSetup& setup, const MeasurementSet& meas) {
    const NormalSystem sys = build_system(aoa, aod, weights, lambda, setup, meas);
    const Eigen::VectorXcd u = solve_system(sys);
    return gradient_from(sys, u, aoa, aod, setup, meas);
}

double update_lambda(double residue, const SolverOptions& opts) {
    if (residue <= 0.0) return opts.lambda_max;
    return std::min(opts.lambda_scale / residue, opts.lambda_max);
}

DescentStep descend_angles(const IrState& state, const SoundingSetup& setup,
                           const MeasurementSet& meas, const SolverOptions& opts) {
    const Eigen::VectorXd weights = weight_matrix(state.gains, state.delta);
    const NormalSystem sys =
        build_system(state.aoa, state.aod, weights, state.lambda, setup, meas);
    const Eigen::VectorXcd u = solve_system(sys);
    const double s_old = surrogate_from(sys, u, meas);
    const AngleGradient g = gradient_from(sys, u, state.aoa, state.aod, setup, meas);

    DescentStep step;
    step.aoa = state.aoa;
    step.aod = state.aod;
    step.s_before = s_old;
    step.s_after = s_old;

    const double gmax =
        std::max(g.aoa.cwiseAbs().maxCoeff(), g.aod.cwiseAbs().maxCoeff());
    if (gmax == 0.0 || !std::isfinite(gmax)) return step;

    double eta = opts.step_init / std::max(1.0, gmax);
    for (int k = 0; k <= opts.max_backtracks; ++k) {
        const Eigen::VectorXd aoa_t = wrap_unit(state.aoa - eta * g.aoa);
        const Eigen::VectorXd aod_t = wrap_unit(state.aod - eta * g.aod);
        double s_new;
        try {
            s_new = surrogate_value(aoa_t, aod_t, weights, state.lambda, setup, meas);
        } catch (const solver_error&) {
            eta *= 0.5;
            step.halvings = k + 1;
            continue;
        }
        if (s_new <= s_old) {
            step.aoa = aoa_t;
            step.aod = aod_t;
            step.halvings = k;
            step.accepted = true;
            step.s_after = s_new;
            return step;
        }
        eta *= 0.5;
        step.halvings = k + 1;
    }
    step.halvings = opts.max_backtracks;
    return step;
}

IrState prune_paths(const IrState& state, const SolverOptions& opts) {
    IrState out = state;
    const int L = state.path_count();
    if (L == 0) return out;

    const double peak = state.gains.cwiseAbs().maxCoeff();
    const double threshold = std::max(opts.prune_abs, opts.prune_rel * peak);
    std::vector<int> keep;
    keep.reserve(L);
    for (int l = 0; l < L; ++l)
        if (std::abs(state.gains(l)) >= threshold) keep.push_back(l);

    if (static_cast<int>(keep.size()) == L) return out;
    out.gains.resize(keep.size());
    out.aoa.resize(keep.size());
    out.aod.resize(keep.size());
    for (std::size_t i = 0; i < keep.size(); ++i) {
        out.gains(i) = state.gains(keep[i]);
        out.aoa(i) = state.aoa(keep[i]);
        out.aod(i) = state.aod(keep[i]);
    }
    return out;
}

int merge_duplicate_paths(Eigen::VectorXcd& gains, Eigen::VectorXd& aoa,
                          Eigen::VectorXd& aod, double tol) {
    const int L = static_cast<int>(gains.size());
    std::vector<bool> dead(L, false);
    int removed = 0;
    for (int i = 0; i < L; ++i) {
        if (dead[i]) continue;
        for (int j = i + 1; j < L; ++j) {
            if (dead[j]) continue;
            if (circular_distance(aoa(i), aoa(j)) < tol &&
                circular_distance(aod(i), aod(j)) < tol) {
                gains(i) += gains(j);
                dead[j] = true;
                ++removed;
            }
        }
    }
    if (removed == 0) return 0;
    Eigen::VectorXcd g(L - removed);
    Eigen::VectorXd ra(L - removed), rd(L - removed);
    int w = 0;
    for (int l = 0; l < L; ++l) {
        if (dead[l]) continue;
        g(w) = gains(l);
        ra(w) = aoa(l);
        rd(w) = aod(l);
        ++w;
    }
    gains = std::move(g);
    aoa = std::move(ra);
    aod = std::move(rd);
    return removed;
}

double residual_power(const Eigen::VectorXcd& gains, const Eigen::VectorXd& aoa,
                      const Eigen::VectorXd& aod, const SoundingSetup& setup,
                      const MeasurementSet& meas) {
    if (gains.size() == 0) return meas.received.squaredNorm();
    const Eigen::MatrixXcd wa =
        setup.combiner.adjoint() * steering_matrix(setup.n_rx(), aoa);
    const Eigen::MatrixXcd tx = steering_matrix(setup.n_tx(), aod).adjoint() * setup.pilots;
    return (meas.received - wa * gains.asDiagonal() * tx).squaredNorm();
}

double log_sum_objective(const IrState& state, const SoundingSetup& setup,
                         const MeasurementSet& meas) {
    if (!(state.delta > 0.0))
        throw parameter_error("log_sum_objective: delta must be positive");
    if (!(state.lambda > 0.0))
        throw parameter_error("log_sum_objective: lambda must be positive");
    double logs = 0.0;
    for (int l = 0; l < state.path_count(); ++l)
        logs += std::log(std::norm(state.gains(l)) + state.delta);
    return logs +
           state.lambda * residual_power(state.gains, state.aoa, state.aod, setup, meas);
}

IrResult run_ir(const Eigen::VectorXd& init_aoa, const Eigen::VectorXd& init_aod,
                const SoundingSetup& setup, const MeasurementSet& raw_meas,
                const SolverOptions& opts) {
    if (init_aoa.size() == 0)
        throw parameter_error("run_ir: need at least one initial candidate");
    if (init_aoa.size() != init_aod.size())
        throw dimension_error("run_ir: initial angle vectors length mismatch");

    // The lambda rule and the delta/pruning thresholds are calibrated for
    // unit data energy; the sounding matrices do not scale with the channel,
    // so work on normalized measurements and rescale the gains at the end.
    const double y_scale = raw_meas.received.norm();
    const double scale = y_scale > 0.0 ? y_scale : 1.0;
    MeasurementSet meas;
    meas.received = raw_meas.received / scale;
    meas.noise_variance = raw_meas.noise_variance / (scale * scale);

    IrResult result;
    IrState state;
    state.aoa = wrap_unit(init_aoa);
    state.aod = wrap_unit(init_aod);
    state.gains = Eigen::VectorXcd::Zero(init_aoa.size());
    state.delta = opts.delta_init;
    state.lambda = opts.lambda_max;
    merge_duplicate_paths(state.gains, state.aoa, state.aod, 1e-6);

    SolveInfo info;
    Eigen::VectorXd weights = weight_matrix(state.gains, state.delta);
    state.gains = solve_gains(state.aoa, state.aod, weights, state.lambda, setup, meas,
                              &info);
    if (info.jittered) ++result.jitter_events;
    state.residue = residual_power(state.gains, state.aoa, state.aod, setup, meas);

    {
        TraceRow row;
        row.iteration = 0;
        row.lambda = state.lambda;
        row.delta = state.delta;
        row.residue = state.residue;
        row.g_value = log_sum_objective(state, setup, meas);
        row.s_opt = surrogate_value(state.aoa, state.aod, weights, state.lambda, setup,
                                    meas);
        row.path_count = state.path_count();
        row.g_before = row.g_value;
        row.s_before = row.s_opt;
        result.trace.push_back(row);
    }

    // The misfit is a sum over every measurement entry while each path
    // contributes one log term, so the data weight has to grow with the
    // measurement count; lambda_scale acts as a per-entry weight. Without
    // this, any noise-floor residue lets the penalty erode true paths.
    SolverOptions lambda_opts = opts;
    lambda_opts.lambda_scale =
        opts.lambda_scale * static_cast<double>(meas.received.size());

    Eigen::VectorXcd prev_gains = state.gains;
    for (int it = 1; it <= opts.max_iter; ++it) {
        state.iteration = it;
        const double residue_in = state.residue;
        state.lambda = update_lambda(residue_in, lambda_opts);
        weights = weight_matrix(state.gains, state.delta);

        TraceRow row;
        row.iteration = it;
        row.lambda = state.lambda;
        row.delta = state.delta;
        row.residue = residue_in;
        row.g_before = log_sum_objective(state, setup, meas);

        const DescentStep step = descend_angles(state, setup, meas, opts);
        state.aoa = step.aoa;
        state.aod = step.aod;
        row.s_before = step.s_before;
        row.s_opt = step.s_after;
        row.step_halvings = step.halvings;

        state.gains = solve_gains(state.aoa, state.aod, weights, state.lambda, setup,
                                  meas, &info);
        if (info.jittered) ++result.jitter_events;
        row.g_value = log_sum_objective(state, setup, meas);

        merge_duplicate_paths(state.gains, state.aoa, state.aod, 1e-6);
        state = prune_paths(state, opts);
        row.path_count = state.path_count();
        result.trace.push_back(row);
        result.iterations = it;

        if (state.path_count() == 0) {
            result.no_paths = true;
            break;
        }
        state.residue = residual_power(state.gains, state.aoa, state.aod, setup, meas);

        if (state.gains.size() == prev_gains.size()) {
            const double change = (state.gains - prev_gains).norm();
            const double scale = std::max(prev_gains.norm(), 1e-300);
            if (change <= opts.eps_th * scale) {
                result.converged = true;
            }
        }
        prev_gains = state.gains;
        state.delta = std::max(state.delta * opts.delta_shrink, opts.delta_min);
        if (result.converged) break;
    }

    result.estimate.gain = state.gains * scale;
    result.estimate.aoa = state.aoa;
    result.estimate.aod = state.aod;
    return result;
}

}  // namespace mmce
