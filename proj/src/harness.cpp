#include <mmce/harness.hpp>

#include <mmce/errors.hpp>
#include <mmce/rng.hpp>

#include <algorithm>
#include <atomic>
#include <bit>
#include <charconv>
#include <chrono>
#include <cmath>
#include <exception>
#include <fstream>
#include <mutex>
#include <thread>

namespace mmce {

namespace {

void validate(const ExperimentConfig& c) {
    if (c.n_r < 1 || c.n_t < 1 || c.rf_rx < 1 || c.rf_tx < 1 || c.n_x < 1 || c.m < 1) {
        throw parameter_error("config: array, chain, pilot and slot counts must be positive");
    }
    if (c.paths < 1) throw parameter_error("config: paths must be positive");
    if (c.min_separation < 0.0) throw parameter_error("config: negative separation");
    if (c.n_init < 0) throw parameter_error("config: negative n_init");
    if (c.threads < 0) throw parameter_error("config: negative thread count");
}

double elapsed_ms(std::chrono::steady_clock::time_point start) {
    const auto d = std::chrono::steady_clock::now() - start;
    return std::chrono::duration<double, std::milli>(d).count();
}

int stream_count(const ExperimentConfig& c) {
    const int ns = std::min(c.paths, std::min(c.rf_rx, c.rf_tx));
    return std::clamp(ns, 1, std::min(c.n_r, c.n_t));
}

// Every grid pair, for running the solver without the coarse stage.
void full_grid(int n_r, int n_t, Eigen::VectorXd& aoa, Eigen::VectorXd& aod) {
    aoa.resize(static_cast<Eigen::Index>(n_r) * n_t);
    aod.resize(aoa.size());
    Eigen::Index i = 0;
    for (int j = 0; j < n_r; ++j)
        for (int k = 0; k < n_t; ++k, ++i) {
            aoa(i) = static_cast<double>(j) / n_r;
            aod(i) = static_cast<double>(k) / n_t;
        }
}

std::string format_value(double v) {
    char buf[64];
    const auto r = std::to_chars(buf, buf + sizeof(buf), v);
    return std::string(buf, r.ptr);
}

}  // namespace

std::uint64_t trial_seed(std::uint64_t master, double snr_db, int trial_index) {
    const std::uint64_t snr_bits = std::bit_cast<std::uint64_t>(snr_db);
    return derive_seed(derive_seed(master, snr_bits),
                       static_cast<std::uint64_t>(trial_index));
}

Scenario make_scenario(const ExperimentConfig& config, double snr_db, int trial_index) {
    validate(config);
    Rng rng(trial_seed(config.seed, snr_db, trial_index));

    Scenario sc;
    sc.setup = generate_setup(config.n_r, config.n_t, config.rf_rx, config.m,
                              config.n_x, rng);
    sc.truth = sample_channel(config.paths, config.min_separation, rng);
    sc.channel = assemble_channel(sc.truth, config.n_r, config.n_t);
    const double noise_var =
        std::isinf(snr_db) ? 0.0 : snr_to_noise_variance(sc.channel, sc.setup, snr_db);
    sc.meas = measure(sc.channel, sc.setup, noise_var, rng);
    return sc;
}

TrialRecord run_trial(const ExperimentConfig& config, double snr_db, int trial_index) {
    const Scenario sc = make_scenario(config, snr_db, trial_index);
    const int ns = stream_count(config);
    const double snr_lin =
        std::isinf(snr_db) ? 1e30 : std::pow(10.0, snr_db / 10.0);

    TrialRecord rec;

    {
        const auto start = std::chrono::steady_clock::now();
        rec.perfect.nmse_db = nmse(sc.channel, sc.channel);
        rec.perfect.se = spectral_efficiency(sc.channel, sc.channel, snr_lin, ns);
        rec.perfect.paths = sc.truth.path_count();
        rec.perfect.time_ms = elapsed_ms(start);
    }

    {
        const auto start = std::chrono::steady_clock::now();
        try {
            const GridEstimate est = omp_estimate(sc.meas, sc.setup, config.paths);
            const Eigen::MatrixXcd h =
                assemble_channel(est.as_params(), config.n_r, config.n_t);
            rec.omp.nmse_db = nmse(sc.channel, h);
            rec.omp.se = spectral_efficiency(h, sc.channel, snr_lin, ns);
            rec.omp.paths = est.path_count();
        } catch (const std::exception&) {
            rec.omp.failed = true;
        }
        rec.omp.time_ms = elapsed_ms(start);
    }

    {
        const auto start = std::chrono::steady_clock::now();
        try {
            Eigen::VectorXd init_aoa, init_aod;
            if (config.use_precondition) {
                const int budget = std::min(sc.setup.n_out(), sc.setup.n_pilot());
                int n_init = config.n_init > 0 ? config.n_init
                                               : choose_n_init(config.paths, budget);
                n_init = std::clamp(n_init, 1, budget);
                const CoarseEstimate coarse = precondition(sc.meas, sc.setup, n_init);
                init_aoa = coarse.aoa_grid;
                init_aod = coarse.aod_grid;
            } else {
                full_grid(config.n_r, config.n_t, init_aoa, init_aod);
            }
            const IrResult result =
                run_ir(init_aoa, init_aod, sc.setup, sc.meas, config.solver);
            const Eigen::MatrixXcd h =
                assemble_channel(result.estimate, config.n_r, config.n_t);
            rec.ir.nmse_db = nmse(sc.channel, h);
            rec.ir.se = spectral_efficiency(h, sc.channel, snr_lin, ns);
            rec.ir.paths = result.estimate.path_count();
            rec.ir.iterations = result.iterations;
            rec.ir.failed = !result.converged;
        } catch (const std::exception&) {
            rec.ir.failed = true;
        }
        rec.ir.time_ms = elapsed_ms(start);
    }

    return rec;
}

SweepResult run_sweep(const ExperimentConfig& config) {
    validate(config);
    if (config.trials < 1) throw parameter_error("run_sweep: trials must be positive");
    if (config.snr_db_list.empty()) {
        throw parameter_error("run_sweep: empty snr list");
    }

    const std::size_t snrs = config.snr_db_list.size();
    const std::size_t total = snrs * static_cast<std::size_t>(config.trials);
    std::vector<TrialRecord> records(total);

    int workers = config.threads > 0
                      ? config.threads
                      : static_cast<int>(std::thread::hardware_concurrency());
    workers = std::clamp<int>(workers, 1, static_cast<int>(total));

    const auto task = [&](std::size_t k) {
        const std::size_t s = k / config.trials;
        const int t = static_cast<int>(k % config.trials);
        records[k] = run_trial(config, config.snr_db_list[s], t);
    };

    if (workers == 1) {
        for (std::size_t k = 0; k < total; ++k) task(k);
    } else {
        std::atomic<std::size_t> next{0};
        std::exception_ptr failure;
        std::mutex failure_mu;
        std::vector<std::thread> pool;
        pool.reserve(workers);
        for (int w = 0; w < workers; ++w) {
            pool.emplace_back([&] {
                for (;;) {
                    const std::size_t k = next.fetch_add(1);
                    if (k >= total) return;
                    try {
                        task(k);
                    } catch (...) {
                        std::lock_guard<std::mutex> lock(failure_mu);
                        if (!failure) failure = std::current_exception();
                        return;
                    }
                }
            });
        }
        for (auto& th : pool) th.join();
        if (failure) std::rethrow_exception(failure);
    }

    struct View {
        const char* name;
        const MethodRecord TrialRecord::* member;
    };
    static constexpr View kViews[] = {{"ir", &TrialRecord::ir},
                                      {"omp", &TrialRecord::omp},
                                      {"perfect_csi", &TrialRecord::perfect}};

    SweepResult out;
    out.rows.reserve(snrs * 3);
    for (std::size_t s = 0; s < snrs; ++s) {
        for (const View& view : kViews) {
            SweepRow row;
            row.snr_db = config.snr_db_list[s];
            row.method = view.name;

            const std::size_t base = s * config.trials;
            const double n = config.trials;
            for (int t = 0; t < config.trials; ++t) {
                const MethodRecord& m = records[base + t].*view.member;
                row.nmse_db_mean += m.nmse_db;
                row.se_mean += m.se;
                row.paths_mean += m.paths;
                row.iters_mean += m.iterations;
                row.time_ms_mean += m.time_ms;
                row.failures += m.failed ? 1 : 0;
            }
            row.nmse_db_mean /= n;
            row.se_mean /= n;
            row.paths_mean /= n;
            row.iters_mean /= n;
            row.time_ms_mean /= n;

            double var = 0.0;
            for (int t = 0; t < config.trials; ++t) {
                const MethodRecord& m = records[base + t].*view.member;
                const double d = m.nmse_db - row.nmse_db_mean;
                var += d * d;
            }
            row.nmse_db_std = std::sqrt(var / n);
            out.rows.push_back(std::move(row));
        }
    }
    return out;
}

void emit_csv(const SweepResult& result, const std::string& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("emit_csv: cannot open " + path);

    out << "snr_db,method,nmse_db_mean,nmse_db_std,se_mean,paths_mean,"
           "iters_mean,time_ms_mean,failures\n";
    for (const SweepRow& r : result.rows) {
        out << format_value(r.snr_db) << ',' << r.method << ','
            << format_value(r.nmse_db_mean) << ',' << format_value(r.nmse_db_std) << ','
            << format_value(r.se_mean) << ',' << format_value(r.paths_mean) << ','
            << format_value(r.iters_mean) << ',' << format_value(r.time_ms_mean) << ','
            << r.failures << '\n';
    }
    out.flush();
    if (!out.good()) throw std::runtime_error("emit_csv: write failed for " + path);
}

}  // namespace mmce
