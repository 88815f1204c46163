#include <mmce/channel.hpp>
#include <mmce/errors.hpp>
#include <mmce/precondition.hpp>

#include <Eigen/QR>
#include <Eigen/SVD>

#include <algorithm>
#include <cmath>
#include <vector>

namespace mmce {

Eigen::MatrixXcd dft_dictionary(int n) {
    if (n <= 0) throw dimension_error("dft_dictionary: size must be positive");
    Eigen::MatrixXcd d(n, n);
    for (int k = 0; k < n; ++k) d.col(k) = steering_vector(n, double(k) / double(n));
    return d;
}

namespace {

constexpr int kShortlist = 16;       // spaced score peaks examined per round
constexpr int kFinalists = 3;        // shortlist entries refined to full depth
constexpr int kShallowLevels = 4;
constexpr int kDeepLevels = 12;
constexpr int kMaxSweeps = 30;       // joint re-polish passes
constexpr double kGroupTolBins = 0.3;
constexpr double kSweepDoneBins = 1e-4;

struct GridPick {
    int j, k;
    double score;
};

// score-ordered grid pairs, spaced more than one bin apart in both coordinates
std::vector<GridPick> spaced_peaks(const Eigen::MatrixXd& score, int want) {
    const int nr = int(score.rows()), nt = int(score.cols());
    std::vector<GridPick> all;
    all.reserve(size_t(nr) * size_t(nt));
    for (int j = 0; j < nr; ++j)
        for (int k = 0; k < nt; ++k) all.push_back({j, k, score(j, k)});
    std::stable_sort(all.begin(), all.end(),
                     [](const GridPick& a, const GridPick& b) { return a.score > b.score; });
    std::vector<GridPick> out;
    for (const GridPick& c : all) {
        bool near = false;
        for (const GridPick& q : out) {
            const int dj = std::min(std::abs(c.j - q.j), nr - std::abs(c.j - q.j));
            const int dk = std::min(std::abs(c.k - q.k), nt - std::abs(c.k - q.k));
            if (dj <= 1 && dk <= 1) {
                near = true;
                break;
            }
        }
        if (!near) {
            out.push_back(c);
            if (int(out.size()) == want) break;
        }
    }
    return out;
}

// deflation-based search for the grid pairs that best explain the data
class CandidateSearch {
public:
    explicit CandidateSearch(const SoundingSetup& s)
        : setup_(s), nr_(s.n_rx()), nt_(s.n_tx()) {
        rxg_ = s.combiner.adjoint() * dft_dictionary(nr_);
        txg_ = s.pilots.adjoint() * dft_dictionary(nt_);
        rn_ = rxg_.colwise().norm().cwiseMax(1e-300);
        tn_ = txg_.colwise().norm().cwiseMax(1e-300);
    }

    void select(const Eigen::MatrixXcd& y, int n_init, Eigen::VectorXd& aoa,
                Eigen::VectorXd& aod) const {
        const Eigen::Index dim = y.size();
        const Eigen::Map<const Eigen::VectorXcd> yv(y.data(), dim);
        Eigen::MatrixXcd basis(dim, n_init);
        Eigen::MatrixXcd res = y;
        std::vector<double> ta(n_init), tb(n_init);

        for (int i = 0; i < n_init; ++i) {
            pick(res, ta[i], tb[i]);
            basis.col(i) = atom(ta[i], tb[i]);
            const auto active = basis.leftCols(i + 1);
            const Eigen::VectorXcd coef = active.colPivHouseholderQr().solve(yv);
            Eigen::VectorXcd rvec = yv - active * coef;
            res = Eigen::Map<Eigen::MatrixXcd>(rvec.data(), y.rows(), y.cols());
        }

        refine(yv, y.rows(), y.cols(), basis, ta, tb);

        aoa.resize(n_init);
        aod.resize(n_init);
        for (int i = 0; i < n_init; ++i) {
            aoa(i) = snap(ta[i], nr_);
            aod(i) = snap(tb[i], nt_);
        }
    }

private:
    static double snap(double t, int n) {
        const int g = int(std::lround(wrap_unit(t) * n)) % n;
        return double(g) / double(n);
    }

    Eigen::VectorXcd atom(double a, double b) const {
        const Eigen::VectorXcd g = setup_.combiner.adjoint() * steering_vector(nr_, a);
        const Eigen::VectorXcd f = setup_.pilots.adjoint() * steering_vector(nt_, b);
        Eigen::MatrixXcd m = g * f.adjoint();
        return Eigen::VectorXcd(Eigen::Map<Eigen::VectorXcd>(m.data(), m.size()));
    }

    // one 5x5 local search step; ties keep the center
    double level(const Eigen::MatrixXcd& res, double& a, double& b, double stepa,
                 double stepb) const {
        Eigen::MatrixXcd gs(setup_.n_out(), 5), fs(setup_.n_pilot(), 5);
        Eigen::VectorXd gn(5), fn(5);
        for (int q = -2; q <= 2; ++q) {
            gs.col(q + 2) = setup_.combiner.adjoint() * steering_vector(nr_, a + stepa * q);
            fs.col(q + 2) = setup_.pilots.adjoint() * steering_vector(nt_, b + stepb * q);
            gn(q + 2) = std::max(gs.col(q + 2).norm(), 1e-300);
            fn(q + 2) = std::max(fs.col(q + 2).norm(), 1e-300);
        }
        const Eigen::MatrixXcd m = gs.adjoint() * res * fs;
        int ba = 2, bb = 2;
        double best = std::abs(m(2, 2)) / (gn(2) * fn(2));
        for (int p = 0; p < 5; ++p)
            for (int q = 0; q < 5; ++q) {
                const double v = std::abs(m(p, q)) / (gn(p) * fn(q));
                if (v > best) {
                    best = v;
                    ba = p;
                    bb = q;
                }
            }
        a += stepa * (ba - 2);
        b += stepb * (bb - 2);
        return best;
    }

    // halved-step local descent between the given depth levels; spans are in
    // fractions of a grid bin per side
    double polish(const Eigen::MatrixXcd& res, double& a, double& b, double bins,
                  int from_level, int to_level) const {
        const double scale = bins / std::pow(2.0, from_level);
        double stepa = scale / nr_, stepb = scale / nt_;
        double best = -1.0;
        for (int lev = from_level; lev < to_level; ++lev) {
            best = level(res, a, b, stepa, stepb);
            stepa /= 2.0;
            stepb /= 2.0;
        }
        return best;
    }

    // best refined pair for the current residual
    void pick(const Eigen::MatrixXcd& res, double& a, double& b) const {
        const Eigen::MatrixXcd corr = rxg_.adjoint() * res * txg_;
        const Eigen::MatrixXd score =
            corr.cwiseAbs().array() / (rn_ * tn_.transpose()).array();

        struct Probe {
            double a, b, v;
        };
        std::vector<Probe> probes;
        for (const GridPick& c : spaced_peaks(score, kShortlist)) {
            Probe t{double(c.j) / nr_, double(c.k) / nt_, 0.0};
            t.v = polish(res, t.a, t.b, 0.5, 0, kShallowLevels);
            probes.push_back(t);
        }
        std::stable_sort(probes.begin(), probes.end(),
                         [](const Probe& x, const Probe& y) { return x.v > y.v; });

        a = 0.0;
        b = 0.0;
        double best = -1.0;
        for (int c = 0; c < std::min<int>(kFinalists, int(probes.size())); ++c) {
            Probe t = probes[c];
            const double v = polish(res, t.a, t.b, 0.5, kShallowLevels, kDeepLevels);
            if (v > best) {
                best = v;
                a = t.a;
                b = t.b;
            }
        }
    }

    // cyclic re-polish of one representative per duplicate group: joint LS
    // amplitudes, each angle refit against the residual of the others
    void refine(const Eigen::Map<const Eigen::VectorXcd>& yv, Eigen::Index rows,
                Eigen::Index cols, Eigen::MatrixXcd& basis, std::vector<double>& ta,
                std::vector<double>& tb) const {
        const int n = int(ta.size());
        std::vector<int> rep(n);
        for (int m = 0; m < n; ++m) {
            rep[m] = m;
            for (int q = 0; q < m; ++q)
                if (circular_distance(ta[m], ta[rep[q]]) < kGroupTolBins / nr_ &&
                    circular_distance(tb[m], tb[rep[q]]) < kGroupTolBins / nt_) {
                    rep[m] = rep[q];
                    break;
                }
        }
        std::vector<int> reps;
        for (int m = 0; m < n; ++m)
            if (rep[m] == m) reps.push_back(m);

        Eigen::MatrixXcd rb(yv.size(), int(reps.size()));
        for (int c = 0; c < int(reps.size()); ++c) rb.col(c) = basis.col(reps[c]);

        for (int sweep = 0; sweep < kMaxSweeps; ++sweep) {
            double moved = 0.0;
            for (int c = 0; c < int(reps.size()); ++c) {
                const int m = reps[c];
                const Eigen::VectorXcd coef = rb.colPivHouseholderQr().solve(yv);
                Eigen::VectorXcd rvec = yv - rb * coef + rb.col(c) * coef(c);
                const Eigen::MatrixXcd rm =
                    Eigen::Map<Eigen::MatrixXcd>(rvec.data(), rows, cols);
                const double pa = ta[m], pb = tb[m];
                polish(rm, ta[m], tb[m], 0.25, 0, kDeepLevels);
                moved = std::max(moved, std::max(circular_distance(pa, ta[m]),
                                                 circular_distance(pb, tb[m])));
                rb.col(c) = atom(ta[m], tb[m]);
            }
            if (moved * std::max(nr_, nt_) < kSweepDoneBins) break;
        }

        for (int c = 0; c < int(reps.size()); ++c) basis.col(reps[c]) = rb.col(c);
        for (int m = 0; m < n; ++m)
            if (rep[m] != m) {
                ta[m] = ta[rep[m]];
                tb[m] = tb[rep[m]];
            }
    }

    const SoundingSetup& setup_;
    int nr_, nt_;
    Eigen::MatrixXcd rxg_, txg_;
    Eigen::VectorXd rn_, tn_;
};

}  // namespace

CoarseEstimate precondition(const MeasurementSet& meas, const SoundingSetup& setup,
                            int n_init) {
    const int budget = std::min(setup.n_out(), setup.n_pilot());
    if (n_init < 1 || n_init > budget)
        throw parameter_error("precondition: n_init outside the rank budget");
    if (meas.received.rows() != setup.n_out() ||
        meas.received.cols() != setup.n_pilot())
        throw dimension_error("precondition: measurements do not match setup");

    const Eigen::JacobiSVD<Eigen::MatrixXcd> svd(meas.received);

    CoarseEstimate out;
    out.singular_values = svd.singularValues().head(n_init);
    CandidateSearch(setup).select(meas.received, n_init, out.aoa_grid, out.aod_grid);
    return out;
}

int choose_n_init(int expected_paths, int rank_budget) {
    if (expected_paths < 1)
        throw parameter_error("choose_n_init: expected paths must be positive");
    if (rank_budget < 1)
        throw parameter_error("choose_n_init: rank budget must be positive");
    return std::min(2 * expected_paths, rank_budget);
}

}  // namespace mmce
