#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <mmce/errors.hpp>
#include <mmce/solver.hpp>

#include "oracles.hpp"

using namespace mmce;

namespace {

struct Instance {
    SoundingSetup setup;
    ChannelParams truth;
    MeasurementSet meas;
};

Instance make_instance(int n, int n_out, int n_pilot, int paths, double noise_var,
                       std::uint64_t seed) {
    Instance inst;
    Rng rng(seed);
    inst.setup = generate_setup(n, n, n_out, 1, n_pilot, rng);
    inst.truth = sample_channel(paths, 2.0 / n, rng);
    const Eigen::MatrixXcd h = assemble_channel(inst.truth, n, n);
    inst.meas = measure(h, inst.setup, noise_var, rng);
    return inst;
}

}  // namespace

TEST_CASE("weight matrix known values") {
    Eigen::VectorXcd z(3);
    z << Complex(0, 0), Complex(1, 0), Complex(0, 3);
    const Eigen::VectorXd w = weight_matrix(z, 1.0);
    CHECK(w(0) == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(w(1) == doctest::Approx(0.5).epsilon(1e-12));
    CHECK(w(2) == doctest::Approx(0.1).epsilon(1e-12));
    CHECK_THROWS_AS(weight_matrix(z, 0.0), parameter_error);
    CHECK_THROWS_AS(weight_matrix(z, -1.0), parameter_error);
}

TEST_CASE("lambda update rule") {
    SolverOptions opts;
    opts.lambda_scale = 1.0;
    opts.lambda_max = 1e6;
    CHECK(update_lambda(0.01, opts) == doctest::Approx(100.0).epsilon(1e-12));
    CHECK(update_lambda(0.0, opts) == 1e6);
    CHECK(update_lambda(1e300, opts) > 0.0);
    CHECK(update_lambda(1e300, opts) < 1e-290);
}

TEST_CASE("gain solve on a consistent single-column system") {
    const Instance inst = make_instance(8, 4, 1, 1, 0.0, 101);
    const Eigen::VectorXd w = Eigen::VectorXd::Ones(1);
    const Eigen::VectorXcd z =
        solve_gains(inst.truth.aoa, inst.truth.aod, w, 1e12, inst.setup, inst.meas);

    const Eigen::MatrixXcd k = oracle::naive_effective(inst.setup, inst.truth.aoa,
                                                       inst.truth.aod, 0);
    const Complex want = k.col(0).dot(inst.meas.received.col(0)) / k.col(0).squaredNorm();
    CHECK(std::abs(z(0) - want) < 1e-8 * std::abs(want));
    CHECK(std::abs(z(0) - inst.truth.gain(0)) < 1e-8 * std::abs(inst.truth.gain(0)));
}

TEST_CASE("gain solve recovers a consistent multi-path system") {
    const Instance inst = make_instance(8, 4, 6, 2, 0.0, 103);
    const Eigen::VectorXd w = Eigen::VectorXd::Ones(2);
    const Eigen::VectorXcd z =
        solve_gains(inst.truth.aoa, inst.truth.aod, w, 1e12, inst.setup, inst.meas);
    CHECK((z - inst.truth.gain).norm() < 1e-8 * inst.truth.gain.norm());
}

TEST_CASE("gain solve agrees with a generic coordinate-descent minimizer") {
    for (std::uint64_t seed = 200; seed < 210; ++seed) {
        const Instance inst = make_instance(8, 4, 4, 2, 0.05, seed);
        Rng wrng(seed + 1000);
        Eigen::VectorXd w(2);
        std::uniform_real_distribution<double> u(0.2, 3.0);
        w << u(wrng), u(wrng);
        const double lambda = 50.0;

        const Eigen::VectorXcd z = solve_gains(inst.truth.aoa, inst.truth.aod, w,
                                               lambda, inst.setup, inst.meas);

        const oracle::GainProblem pr = oracle::make_gain_problem(
            inst.setup, inst.meas, inst.truth.aoa, inst.truth.aod, w, lambda);
        const Eigen::VectorXcd ref = oracle::minimize_gains_cd(pr);
        CHECK((z - ref).norm() < 1e-6 * ref.norm());

        const double s = surrogate_value(inst.truth.aoa, inst.truth.aod, w, lambda,
                                         inst.setup, inst.meas);
        const double direct = oracle::weighted_objective(pr, z);
        CHECK(std::abs(s - direct) < 1e-10 * std::max(1.0, std::abs(direct)));
    }
}

TEST_CASE("gain solve satisfies the first-order condition") {
    const Instance inst = make_instance(8, 4, 4, 2, 0.05, 301);
    const Eigen::VectorXd w = Eigen::VectorXd::Constant(2, 0.7);
    const double lambda = 25.0;
    const Eigen::VectorXcd z = solve_gains(inst.truth.aoa, inst.truth.aod, w, lambda,
                                           inst.setup, inst.meas);

    Eigen::VectorXcd grad = (w.array() / lambda).matrix().cast<Complex>().cwiseProduct(z);
    Eigen::VectorXcd v = Eigen::VectorXcd::Zero(2);
    for (int p = 0; p < inst.setup.n_pilot(); ++p) {
        const Eigen::MatrixXcd k =
            oracle::naive_effective(inst.setup, inst.truth.aoa, inst.truth.aod, p);
        grad += k.adjoint() * (k * z - inst.meas.received.col(p));
        v += k.adjoint() * inst.meas.received.col(p);
    }
    CHECK(grad.norm() < 1e-8 * v.norm());
}

TEST_CASE("normal system is Hermitian positive semidefinite") {
    const Instance inst = make_instance(8, 4, 4, 3, 0.05, 303);
    const Eigen::VectorXd w = Eigen::VectorXd::Constant(3, 0.4);
    const double lambda = 10.0;

    Eigen::MatrixXcd a = (w / lambda).cast<Complex>().asDiagonal();
    for (int p = 0; p < inst.setup.n_pilot(); ++p) {
        const Eigen::MatrixXcd k =
            oracle::naive_effective(inst.setup, inst.truth.aoa, inst.truth.aod, p);
        a += k.adjoint() * k;
    }
    CHECK((a - a.adjoint()).norm() < 1e-12 * a.norm());
    const Eigen::VectorXd eig =
        Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd>(a).eigenvalues();
    CHECK(eig.minCoeff() > -1e-12 * eig.maxCoeff());
}

TEST_CASE("surrogate value properties") {
    const Instance inst = make_instance(8, 4, 4, 2, 0.05, 305);
    const Eigen::VectorXd w = Eigen::VectorXd::Ones(2);

    MeasurementSet silent = inst.meas;
    silent.received.setZero();
    CHECK(std::abs(surrogate_value(inst.truth.aoa, inst.truth.aod, w, 5.0, inst.setup,
                                   silent)) < 1e-12);

    const double s = surrogate_value(inst.truth.aoa, inst.truth.aod, w, 5.0,
                                     inst.setup, inst.meas);
    CHECK(s <= inst.meas.received.squaredNorm() + 1e-12);
    CHECK(s >= 0.0);
}

TEST_CASE("solver input validation") {
    const Instance inst = make_instance(8, 4, 4, 2, 0.0, 307);
    const Eigen::VectorXd w = Eigen::VectorXd::Ones(2);
    CHECK_THROWS_AS(solve_gains(Eigen::VectorXd(), Eigen::VectorXd(),
                                Eigen::VectorXd(), 1.0, inst.setup, inst.meas),
                    dimension_error);
    CHECK_THROWS_AS(solve_gains(inst.truth.aoa, inst.truth.aod.head(1), w, 1.0,
                                inst.setup, inst.meas),
                    dimension_error);
    CHECK_THROWS_AS(solve_gains(inst.truth.aoa, inst.truth.aod, w, 0.0, inst.setup,
                                inst.meas),
                    parameter_error);
    CHECK_THROWS_AS(solve_gains(inst.truth.aoa, inst.truth.aod,
                                Eigen::VectorXd::Zero(2), 1.0, inst.setup, inst.meas),
                    parameter_error);
}

TEST_CASE("exact duplicate candidates trigger the jitter path, not a crash") {
    const Instance base = make_instance(8, 4, 4, 1, 0.0, 309);
    Eigen::VectorXd aoa(2), aod(2);
    aoa << base.truth.aoa(0), base.truth.aoa(0);
    aod << base.truth.aod(0), base.truth.aod(0);
    const Eigen::VectorXd w = Eigen::VectorXd::Ones(2);

    SolveInfo info;
    const Eigen::VectorXcd z =
        solve_gains(aoa, aod, w, 1e12, base.setup, base.meas, &info);
    CHECK(info.jittered);
    CHECK(z.allFinite());
    // The duplicated pair still explains the data: summed gains fit the path.
    CHECK(std::abs(z.sum() - base.truth.gain(0)) < 1e-3 * std::abs(base.truth.gain(0)));
}

TEST_CASE("analytic gradient matches finite differences") {
    for (std::uint64_t seed = 400; seed < 405; ++seed) {
        const Instance inst = make_instance(16, 8, 8, 2, 0.02, seed);
        Rng rng(seed + 77);
        std::uniform_real_distribution<double> u(-0.5, 0.5);
        Eigen::VectorXd aoa = inst.truth.aoa, aod = inst.truth.aod;
        for (int l = 0; l < 2; ++l) {
            aoa(l) = wrap_unit(aoa(l) + u(rng) / 16.0);
            aod(l) = wrap_unit(aod(l) + u(rng) / 16.0);
        }
        const Eigen::VectorXd w = Eigen::VectorXd::Constant(2, 0.8);
        const double lambda = 30.0;

        const AngleGradient g =
            surrogate_gradient(aoa, aod, w, lambda, inst.setup, inst.meas);

        Eigen::VectorXd fd_aoa(2), fd_aod(2);
        const double h = 1e-6;
        for (int l = 0; l < 2; ++l) {
            fd_aoa(l) = oracle::central_difference_scalar(
                [&](double t) {
                    Eigen::VectorXd a = aoa;
                    a(l) = t;
                    return surrogate_value(a, aod, w, lambda, inst.setup, inst.meas);
                },
                aoa(l), h);
            fd_aod(l) = oracle::central_difference_scalar(
                [&](double t) {
                    Eigen::VectorXd a = aod;
                    a(l) = t;
                    return surrogate_value(aoa, a, w, lambda, inst.setup, inst.meas);
                },
                aod(l), h);
        }
        Eigen::VectorXd all(4), fd(4);
        all << g.aoa, g.aod;
        fd << fd_aoa, fd_aod;
        CHECK((all - fd).norm() < 1e-5 * fd.norm());
    }
}

TEST_CASE("gradient vanishes at an independently located minimizer") {
    const Instance inst = make_instance(8, 4, 4, 1, 0.0, 411);
    MeasurementSet meas = inst.meas;
    meas.received /= meas.received.norm();

    const Eigen::VectorXd w = Eigen::VectorXd::Ones(1);
    const double lambda = 1e10;
    const auto objective = [&](double a, double b) {
        Eigen::VectorXd aoa(1), aod(1);
        aoa << wrap_unit(a);
        aod << wrap_unit(b);
        return surrogate_value(aoa, aod, w, lambda, inst.setup, meas);
    };

    const auto [a_star, d_star] = oracle::refine_2d(
        objective, inst.truth.aoa(0) + 0.2 / 8.0, inst.truth.aod(0) - 0.15 / 8.0,
        0.5 / 8.0, 16);

    Eigen::VectorXd aoa(1), aod(1);
    aoa << wrap_unit(a_star);
    aod << wrap_unit(d_star);
    const AngleGradient g = surrogate_gradient(aoa, aod, w, lambda, inst.setup, meas);
    // Curvature-normalized stationarity: the natural gradient scale here is
    // (2 pi n)^2 times the data power (unit here).
    const double scale = std::pow(2.0 * M_PI * 8.0, 2.0);
    CHECK(std::abs(g.aoa(0)) / scale < 1e-6);
    CHECK(std::abs(g.aod(0)) / scale < 1e-6);
}

TEST_CASE("gradient is stationary at the truth for noiseless data") {
    const Instance inst = make_instance(16, 8, 8, 1, 0.0, 413);
    MeasurementSet meas = inst.meas;
    meas.received /= meas.received.norm();
    const Eigen::VectorXd w = weight_matrix(inst.truth.gain, 1.0);
    const AngleGradient g =
        surrogate_gradient(inst.truth.aoa, inst.truth.aod, w, 1e12, inst.setup, meas);
    const double scale = std::pow(2.0 * M_PI * 16.0, 2.0);
    CHECK(std::abs(g.aoa(0)) / scale < 1e-6);
    CHECK(std::abs(g.aod(0)) / scale < 1e-6);
}

TEST_CASE("descent leaves a zero-gradient point untouched") {
    const Instance inst = make_instance(8, 4, 4, 2, 0.0, 415);
    IrState state;
    state.aoa = inst.truth.aoa;
    state.aod = inst.truth.aod;
    state.gains = Eigen::VectorXcd::Zero(2);
    state.lambda = 10.0;
    state.delta = 1.0;

    MeasurementSet silent = inst.meas;
    silent.received.setZero();
    SolverOptions opts;
    const DescentStep step = descend_angles(state, inst.setup, silent, opts);
    CHECK(!step.accepted);
    CHECK((step.aoa - state.aoa).cwiseAbs().maxCoeff() == 0.0);
    CHECK((step.aod - state.aod).cwiseAbs().maxCoeff() == 0.0);
}

TEST_CASE("accepted descent steps never increase the surrogate") {
    for (std::uint64_t seed = 500; seed < 505; ++seed) {
        const Instance inst = make_instance(16, 8, 8, 2, 0.05, seed);
        Rng rng(seed + 9);
        std::uniform_real_distribution<double> u(-0.5, 0.5);
        IrState state;
        state.aoa = inst.truth.aoa;
        state.aod = inst.truth.aod;
        for (int l = 0; l < 2; ++l) {
            state.aoa(l) = wrap_unit(state.aoa(l) + u(rng) / 32.0);
            state.aod(l) = wrap_unit(state.aod(l) + u(rng) / 32.0);
        }
        state.lambda = 100.0;
        state.delta = 1.0;
        const Eigen::VectorXd w0 = Eigen::VectorXd::Ones(2);
        state.gains = solve_gains(state.aoa, state.aod, w0, state.lambda, inst.setup,
                                  inst.meas);

        SolverOptions opts;
        const DescentStep step = descend_angles(state, inst.setup, inst.meas, opts);
        CHECK(step.s_after <= step.s_before + 1e-12 * std::abs(step.s_before));
    }
}

TEST_CASE("repeated descent homes in on an off-grid path") {
    const Instance inst = make_instance(16, 8, 8, 1, 0.0, 521);
    const double grid_aoa = std::round(inst.truth.aoa(0) * 16.0) / 16.0;
    const double grid_aod = std::round(inst.truth.aod(0) * 16.0) / 16.0;

    IrState state;
    state.aoa = Eigen::VectorXd::Constant(1, wrap_unit(grid_aoa));
    state.aod = Eigen::VectorXd::Constant(1, wrap_unit(grid_aod));
    state.gains = Eigen::VectorXcd::Zero(1);
    state.lambda = 1e8;
    state.delta = 1.0;

    SolverOptions opts;
    for (int i = 0; i < 50; ++i) {
        const Eigen::VectorXd w = weight_matrix(state.gains, state.delta);
        state.gains =
            solve_gains(state.aoa, state.aod, w, state.lambda, inst.setup, inst.meas);
        const DescentStep step = descend_angles(state, inst.setup, inst.meas, opts);
        state.aoa = step.aoa;
        state.aod = step.aod;
    }
    CHECK(circular_distance(state.aoa(0), inst.truth.aoa(0)) < 1e-4);
    CHECK(circular_distance(state.aod(0), inst.truth.aod(0)) < 1e-4);
}

TEST_CASE("pruning rules") {
    SolverOptions opts;
    opts.prune_rel = 0.01;
    opts.prune_abs = 1e-12;

    IrState equal;
    equal.gains = Eigen::VectorXcd::Constant(3, Complex(0.5, 0.5));
    equal.aoa = Eigen::VectorXd::LinSpaced(3, 0.1, 0.3);
    equal.aod = Eigen::VectorXd::LinSpaced(3, 0.5, 0.7);
    CHECK(prune_paths(equal, opts).path_count() == 3);

    IrState mixed = equal;
    mixed.gains(1) = Complex(1e-9, 0.0);
    const IrState pruned = prune_paths(mixed, opts);
    CHECK(pruned.path_count() == 2);
    CHECK(pruned.aoa(0) == equal.aoa(0));
    CHECK(pruned.aoa(1) == equal.aoa(2));

    IrState tiny;
    tiny.gains = Eigen::VectorXcd::Constant(2, Complex(1e-9, 0.0));
    tiny.aoa = Eigen::VectorXd::Zero(2);
    tiny.aod = Eigen::VectorXd::Zero(2);
    SolverOptions abs_opts;
    abs_opts.prune_abs = 1e-4;
    CHECK(prune_paths(tiny, abs_opts).path_count() == 0);
}

TEST_CASE("duplicate merging sums gains") {
    Eigen::VectorXcd gains(3);
    gains << Complex(1, 0), Complex(0, 1), Complex(0.5, 0);
    Eigen::VectorXd aoa(3), aod(3);
    aoa << 0.2, 0.2 + 1e-9, 0.6;
    aod << 0.4, 0.4 - 1e-9, 0.8;
    const int removed = merge_duplicate_paths(gains, aoa, aod, 1e-6);
    CHECK(removed == 1);
    CHECK(gains.size() == 2);
    CHECK(std::abs(gains(0) - Complex(1, 1)) < 1e-14);
    CHECK(gains(1) == Complex(0.5, 0));
}

TEST_CASE("log-sum objective direct values") {
    const Instance inst = make_instance(8, 4, 4, 2, 0.0, 601);
    IrState state;
    state.gains = Eigen::VectorXcd::Zero(2);
    state.aoa = inst.truth.aoa;
    state.aod = inst.truth.aod;
    state.lambda = 3.0;
    state.delta = 0.25;

    MeasurementSet silent = inst.meas;
    silent.received.setZero();
    CHECK(log_sum_objective(state, inst.setup, silent) ==
          doctest::Approx(2.0 * std::log(0.25)).epsilon(1e-12));

    // More residue, same gains: objective must grow.
    const double g_clean = log_sum_objective(state, inst.setup, silent);
    const double g_noisy = log_sum_objective(state, inst.setup, inst.meas);
    CHECK(g_noisy > g_clean);
}

TEST_CASE("full run converges immediately on an exact on-grid path") {
    const int n = 16;
    SoundingSetup setup;
    Rng rng(711);
    setup = generate_setup(n, n, 4, 2, 8, rng);
    ChannelParams truth;
    truth.aoa = Eigen::VectorXd::Constant(1, 3.0 / n);
    truth.aod = Eigen::VectorXd::Constant(1, 5.0 / n);
    truth.gain = Eigen::VectorXcd::Constant(1, Complex(1.3, -0.7));
    const Eigen::MatrixXcd h = assemble_channel(truth, n, n);
    const MeasurementSet meas = measure(h, setup, 0.0, rng);

    SolverOptions opts;
    opts.lambda_max = 1e12;
    const IrResult res = run_ir(truth.aoa, truth.aod, setup, meas, opts);
    CHECK(res.converged);
    CHECK(res.iterations <= 2);
    REQUIRE(res.estimate.path_count() == 1);
    CHECK(circular_distance(res.estimate.aoa(0), truth.aoa(0)) < 1e-10);
    CHECK(circular_distance(res.estimate.aod(0), truth.aod(0)) < 1e-10);
    CHECK(std::abs(res.estimate.gain(0) - truth.gain(0)) < 1e-8);
}

TEST_CASE("full run recovers off-grid paths from extra candidates") {
    const int n = 32;
    Rng rng(721);
    const SoundingSetup setup = generate_setup(n, n, 4, 4, 16, rng);
    const ChannelParams truth = sample_channel(3, 2.0 / n, rng);
    const Eigen::MatrixXcd h = assemble_channel(truth, n, n);
    const MeasurementSet meas = measure(h, setup, 0.0, rng);

    // Initial candidates: nearest grids of the truth plus three decoys.
    Eigen::VectorXd aoa(6), aod(6);
    for (int l = 0; l < 3; ++l) {
        aoa(l) = wrap_unit(std::round(truth.aoa(l) * n) / n);
        aod(l) = wrap_unit(std::round(truth.aod(l) * n) / n);
        aoa(l + 3) = wrap_unit(truth.aoa(l) + 0.31);
        aod(l + 3) = wrap_unit(truth.aod(l) + 0.17);
    }

    SolverOptions opts;
    const IrResult res = run_ir(aoa, aod, setup, meas, opts);
    REQUIRE(res.estimate.path_count() == 3);

    const Eigen::MatrixXcd h_est = assemble_channel(res.estimate, n, n);
    const double nmse =
        10.0 * std::log10((h - h_est).squaredNorm() / h.squaredNorm());
    CHECK(nmse < -60.0);
}

TEST_CASE("pure-noise measurements yield no significant paths") {
    const int n = 32;
    Rng rng(731);
    const SoundingSetup setup = generate_setup(n, n, 4, 4, 16, rng);
    MeasurementSet meas;
    meas.received.resize(16, 16);
    for (int c = 0; c < 16; ++c)
        for (int r = 0; r < 16; ++r) meas.received(r, c) = 0.1 * complex_gaussian(rng);
    meas.noise_variance = 0.01;

    Eigen::VectorXd aoa(6), aod(6);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    for (int l = 0; l < 6; ++l) {
        aoa(l) = std::floor(u(rng) * n) / n;
        aod(l) = std::floor(u(rng) * n) / n;
    }
    SolverOptions opts;
    const IrResult res = run_ir(aoa, aod, setup, meas, opts);
    if (res.estimate.path_count() > 0) {
        const double explained =
            meas.received.squaredNorm() -
            residual_power(res.estimate.gain, res.estimate.aoa, res.estimate.aod,
                           setup, meas);
        CHECK(explained < 0.05 * meas.received.squaredNorm());
    } else {
        CHECK(res.no_paths);
    }
}

TEST_CASE("iteration trace is monotone where the theory says so") {
    for (std::uint64_t seed = 801; seed < 804; ++seed) {
        const int n = 16;
        Rng rng(seed);
        const SoundingSetup setup = generate_setup(n, n, 4, 2, 8, rng);
        const ChannelParams truth = sample_channel(2, 2.0 / n, rng);
        const Eigen::MatrixXcd h = assemble_channel(truth, n, n);
        const double nv = snr_to_noise_variance(h, setup, 10.0);
        const MeasurementSet meas = measure(h, setup, nv, rng);

        Eigen::VectorXd aoa(4), aod(4);
        for (int l = 0; l < 2; ++l) {
            aoa(l) = wrap_unit(std::round(truth.aoa(l) * n) / n);
            aod(l) = wrap_unit(std::round(truth.aod(l) * n) / n);
            aoa(l + 2) = wrap_unit(truth.aoa(l) + 0.4);
            aod(l + 2) = wrap_unit(truth.aod(l) + 0.23);
        }
        SolverOptions opts;
        const IrResult res = run_ir(aoa, aod, setup, meas, opts);
        for (std::size_t i = 1; i < res.trace.size(); ++i) {
            const TraceRow& row = res.trace[i];
            CHECK(row.g_value <= row.g_before + 1e-9);
            CHECK(row.s_opt <= row.s_before + 1e-9);
        }
    }
}

TEST_CASE("estimates are invariant to integer shifts of the initial angles") {
    const Instance inst = make_instance(16, 8, 8, 2, 0.0, 901);
    Eigen::VectorXd aoa(2), aod(2);
    for (int l = 0; l < 2; ++l) {
        aoa(l) = std::round(inst.truth.aoa(l) * 16.0) / 16.0;
        aod(l) = std::round(inst.truth.aod(l) * 16.0) / 16.0;
    }
    SolverOptions opts;
    const IrResult a = run_ir(aoa, aod, inst.setup, inst.meas, opts);
    const IrResult b = run_ir((aoa.array() + 1.0).matrix(),
                              (aod.array() - 1.0).matrix(), inst.setup, inst.meas, opts);
    REQUIRE(a.estimate.path_count() == b.estimate.path_count());
    for (int l = 0; l < a.estimate.path_count(); ++l) {
        CHECK(circular_distance(a.estimate.aoa(l), b.estimate.aoa(l)) < 1e-9);
        CHECK(circular_distance(a.estimate.aod(l), b.estimate.aod(l)) < 1e-9);
        CHECK(std::abs(a.estimate.gain(l) - b.estimate.gain(l)) < 1e-9);
    }
}

TEST_CASE("run_ir validates its inputs") {
    const Instance inst = make_instance(8, 4, 4, 1, 0.0, 903);
    SolverOptions opts;
    CHECK_THROWS_AS(
        run_ir(Eigen::VectorXd(), Eigen::VectorXd(), inst.setup, inst.meas, opts),
        parameter_error);
    CHECK_THROWS_AS(run_ir(Eigen::VectorXd::Zero(2), Eigen::VectorXd::Zero(1),
                           inst.setup, inst.meas, opts),
                    dimension_error);
}
