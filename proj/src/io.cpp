#include <mmce/io.hpp>

#include <mmce/errors.hpp>

#include <charconv>
#include <fstream>

namespace mmce {

namespace {

using nlohmann::json;

json complex_out(const Complex& z) { return json::array({z.real(), z.imag()}); }

Complex complex_in(const json& j) {
    if (!j.is_array() || j.size() != 2) {
        throw parameter_error("json: complex entries must be [re, im] pairs");
    }
    return {j[0].get<double>(), j[1].get<double>()};
}

json cvector_out(const Eigen::VectorXcd& v) {
    json a = json::array();
    for (Eigen::Index i = 0; i < v.size(); ++i) a.push_back(complex_out(v(i)));
    return a;
}

Eigen::VectorXcd cvector_in(const json& j) {
    if (!j.is_array()) throw parameter_error("json: expected an array of complex pairs");
    Eigen::VectorXcd v(j.size());
    for (std::size_t i = 0; i < j.size(); ++i) v(i) = complex_in(j[i]);
    return v;
}

json rvector_out(const Eigen::VectorXd& v) {
    json a = json::array();
    for (Eigen::Index i = 0; i < v.size(); ++i) a.push_back(v(i));
    return a;
}

Eigen::VectorXd rvector_in(const json& j) {
    if (!j.is_array()) throw parameter_error("json: expected an array of reals");
    Eigen::VectorXd v(j.size());
    for (std::size_t i = 0; i < j.size(); ++i) v(i) = j[i].get<double>();
    return v;
}

json cmatrix_out(const Eigen::MatrixXcd& m) {
    json rows = json::array();
    for (Eigen::Index r = 0; r < m.rows(); ++r) {
        json row = json::array();
        for (Eigen::Index c = 0; c < m.cols(); ++c) row.push_back(complex_out(m(r, c)));
        rows.push_back(std::move(row));
    }
    return rows;
}

Eigen::MatrixXcd cmatrix_in(const json& j) {
    if (!j.is_array()) throw parameter_error("json: expected an array of matrix rows");
    const std::size_t rows = j.size();
    const std::size_t cols = rows == 0 ? 0 : j[0].size();
    Eigen::MatrixXcd m(rows, cols);
    for (std::size_t r = 0; r < rows; ++r) {
        if (!j[r].is_array() || j[r].size() != cols) {
            throw parameter_error("json: ragged matrix rows");
        }
        for (std::size_t c = 0; c < cols; ++c) m(r, c) = complex_in(j[r][c]);
    }
    return m;
}

template <typename T>
void maybe(const json& j, const char* key, T& target) {
    if (auto it = j.find(key); it != j.end()) target = it->get<T>();
}

std::string short_double(double v) {
    char buf[64];
    const auto r = std::to_chars(buf, buf + sizeof(buf), v);
    return std::string(buf, r.ptr);
}

}  // namespace

void to_json(json& j, const ChannelParams& p) {
    j = json{{"aoa", rvector_out(p.aoa)},
             {"aod", rvector_out(p.aod)},
             {"gains", cvector_out(p.gain)}};
}

void from_json(const json& j, ChannelParams& p) {
    p.aoa = rvector_in(j.at("aoa"));
    p.aod = rvector_in(j.at("aod"));
    p.gain = cvector_in(j.at("gains"));
    if (p.aoa.size() != p.gain.size() || p.aod.size() != p.gain.size()) {
        throw parameter_error("json: aoa, aod and gains disagree on path count");
    }
}

void to_json(json& j, const SoundingSetup& s) {
    j = json{{"combiner", cmatrix_out(s.combiner)},
             {"pilots", cmatrix_out(s.pilots)},
             {"rf_chains_rx", s.rf_chains_rx},
             {"slots", s.slots}};
}

void from_json(const json& j, SoundingSetup& s) {
    s.combiner = cmatrix_in(j.at("combiner"));
    s.pilots = cmatrix_in(j.at("pilots"));
    s.rf_chains_rx = j.value("rf_chains_rx", 0);
    s.slots = j.value("slots", 0);
}

void to_json(json& j, const MeasurementSet& m) {
    j = json{{"received", cmatrix_out(m.received)},
             {"noise_variance", m.noise_variance}};
}

void from_json(const json& j, MeasurementSet& m) {
    m.received = cmatrix_in(j.at("received"));
    m.noise_variance = j.value("noise_variance", 0.0);
}

void to_json(json& j, const CoarseEstimate& c) {
    j = json{{"aoa_grid", rvector_out(c.aoa_grid)},
             {"aod_grid", rvector_out(c.aod_grid)},
             {"singular_values", rvector_out(c.singular_values)}};
}

void from_json(const json& j, CoarseEstimate& c) {
    c.aoa_grid = rvector_in(j.at("aoa_grid"));
    c.aod_grid = rvector_in(j.at("aod_grid"));
    c.singular_values = rvector_in(j.at("singular_values"));
}

void to_json(json& j, const SolverOptions& o) {
    j = json{{"lambda_scale", o.lambda_scale},
             {"lambda_max", o.lambda_max},
             {"delta_init", o.delta_init},
             {"delta_min", o.delta_min},
             {"delta_shrink", o.delta_shrink},
             {"prune_rel", o.prune_rel},
             {"prune_abs", o.prune_abs},
             {"eps_th", o.eps_th},
             {"max_iter", o.max_iter},
             {"max_backtracks", o.max_backtracks},
             {"step_init", o.step_init}};
}

void from_json(const json& j, SolverOptions& o) {
    maybe(j, "lambda_scale", o.lambda_scale);
    maybe(j, "lambda_max", o.lambda_max);
    maybe(j, "delta_init", o.delta_init);
    maybe(j, "delta_min", o.delta_min);
    maybe(j, "delta_shrink", o.delta_shrink);
    maybe(j, "prune_rel", o.prune_rel);
    maybe(j, "prune_abs", o.prune_abs);
    maybe(j, "eps_th", o.eps_th);
    maybe(j, "max_iter", o.max_iter);
    maybe(j, "max_backtracks", o.max_backtracks);
    maybe(j, "step_init", o.step_init);
}

void to_json(json& j, const ExperimentConfig& c) {
    j = json{{"n_r", c.n_r},
             {"n_t", c.n_t},
             {"rf_rx", c.rf_rx},
             {"rf_tx", c.rf_tx},
             {"n_x", c.n_x},
             {"m", c.m},
             {"paths", c.paths},
             {"min_separation", c.min_separation},
             {"snr_db_list", c.snr_db_list},
             {"trials", c.trials},
             {"seed", c.seed},
             {"solver", c.solver},
             {"n_init", c.n_init},
             {"threads", c.threads},
             {"use_precondition", c.use_precondition}};
}

void from_json(const json& j, ExperimentConfig& c) {
    if (!j.is_object()) throw parameter_error("json: config must be an object");
    maybe(j, "n_r", c.n_r);
    maybe(j, "n_t", c.n_t);
    maybe(j, "rf_rx", c.rf_rx);
    maybe(j, "rf_tx", c.rf_tx);
    maybe(j, "n_x", c.n_x);
    maybe(j, "m", c.m);
    maybe(j, "paths", c.paths);
    maybe(j, "min_separation", c.min_separation);
    maybe(j, "snr_db_list", c.snr_db_list);
    maybe(j, "trials", c.trials);
    maybe(j, "seed", c.seed);
    maybe(j, "n_init", c.n_init);
    maybe(j, "threads", c.threads);
    maybe(j, "use_precondition", c.use_precondition);
    if (auto it = j.find("solver"); it != j.end()) c.solver = it->get<SolverOptions>();
}

json read_json_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::runtime_error("cannot open " + path);
    try {
        return json::parse(in);
    } catch (const json::parse_error& e) {
        throw std::runtime_error(path + ": " + e.what());
    }
}

void write_json_file(const json& j, const std::string& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot open " + path);
    out << j.dump(2) << '\n';
    out.flush();
    if (!out.good()) throw std::runtime_error("write failed for " + path);
}

void write_trace_csv(const std::vector<TraceRow>& trace, const std::string& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot open " + path);
    out << "iteration,lambda,delta,residue,G,S_opt,path_count,step_halvings\n";
    for (const TraceRow& r : trace) {
        out << r.iteration << ',' << short_double(r.lambda) << ','
            << short_double(r.delta) << ',' << short_double(r.residue) << ','
            << short_double(r.g_value) << ',' << short_double(r.s_opt) << ','
            << r.path_count << ',' << r.step_halvings << '\n';
    }
    out.flush();
    if (!out.good()) throw std::runtime_error("write failed for " + path);
}

}  // namespace mmce
