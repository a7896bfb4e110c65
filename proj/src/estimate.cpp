#include "netrates/estimate.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "netrates/errors.hpp"

namespace netrates {

namespace {
constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();
}

std::string estimator_name(RateEstimator e) {
    return e == RateEstimator::MLE ? "mle" : "umvue";
}

RateEstimator estimator_from_name(const std::string& name) {
    if (name == "mle") return RateEstimator::MLE;
    if (name == "umvue") return RateEstimator::UMVUE;
    throw DataError("unknown estimator: " + name);
}

std::string method_name(SolveMethod m) {
    switch (m) {
        case SolveMethod::WLS: return "wls";
        case SolveMethod::NNLS: return "nnls";
        default: return "lad";
    }
}

SolveMethod method_from_name(const std::string& name) {
    if (name == "wls") return SolveMethod::WLS;
    if (name == "nnls") return SolveMethod::NNLS;
    if (name == "lad") return SolveMethod::LAD;
    throw DataError("unknown method: " + name);
}

double class_rate_mle(long long n_out, double r_time) {
    return static_cast<double>(n_out) / r_time;
}

double class_rate_umvue(long long n_out, double r_time) {
    return static_cast<double>(n_out - 1) / r_time;
}

ClassStats accumulate_stats(const Trajectory& tr, const Graph& g, Model model) {
    if (tr.n != g.num_nodes()) throw DataError("trajectory node count does not match graph");
    if (tr.graph_hash != 0 && tr.graph_hash != g.hash())
        throw DataError("trajectory was generated on a different graph");

    ClassStats stats;
    stats.n = g.num_nodes();
    stats.dmax = g.max_degree();
    stats.model = model;
    stats.t_end = tr.t_end;

    StateTracker st(g, tr.initial);
    double t_prev = 0.0;
    for (const Event& e : tr.events) {
        ClassObs& obs = stats.classes[st.signature(model)];
        obs.r_time += e.t - t_prev;
        obs.n_out += 1;
        st.flip(e.node);
        t_prev = e.t;
    }
    stats.classes[st.signature(model)].r_time += tr.t_end - t_prev;
    return stats;
}

PairwiseStats accumulate_pairwise(const Trajectory& tr, const Graph& g, Model model) {
    if (tr.n != g.num_nodes()) throw DataError("trajectory node count does not match graph");
    PairwiseStats stats;
    StateTracker st(g, tr.initial);
    HoldingSignature cur = st.signature(model);
    double t_prev = 0.0;
    for (const Event& e : tr.events) {
        stats.r_time[cur] += e.t - t_prev;
        st.flip(e.node);
        HoldingSignature next = st.signature(model);
        stats.counts[cur][next] += 1;
        cur = std::move(next);
        t_prev = e.t;
    }
    stats.r_time[cur] += tr.t_end - t_prev;
    return stats;
}

double pairwise_rate_mle(const PairwiseStats& stats, const HoldingSignature& from,
                         const HoldingSignature& to) {
    const auto rit = stats.r_time.find(from);
    if (rit == stats.r_time.end() || !(rit->second > 0.0))
        throw DataError("pairwise_rate_mle: source class never occupied");
    const auto cit = stats.counts.find(from);
    if (cit == stats.counts.end()) return 0.0;
    const auto nit = cit->second.find(to);
    if (nit == cit->second.end()) return 0.0;
    return static_cast<double>(nit->second) / rit->second;
}

ReducedSystem build_system(const ClassStats& stats, RateEstimator estimator, long long n_min) {
    if (n_min < 1) throw DataError("build_system: n_min must be >= 1");
    ReducedSystem sys;
    sys.n = stats.n;
    sys.dmax = stats.dmax;
    sys.model = stats.model;
    sys.estimator = estimator;

    for (const auto& [sig, obs] : stats.classes) {
        if (obs.n_out < n_min) {
            sys.dropped_classes += 1;
            continue;
        }
        sys.classes.push_back(sig);
    }
    if (sys.classes.empty()) throw NumericalError("no holding class retained any departures");

    const int m = static_cast<int>(sys.classes.size());
    const int b = theta_dim(stats.model, stats.dmax);
    sys.F.resize(m, b);
    sys.q.resize(m);
    sys.w.resize(m);
    for (int i = 0; i < m; ++i) {
        const ClassObs& obs = stats.classes.at(sys.classes[static_cast<std::size_t>(i)]);
        const auto row = feature_row(sys.classes[static_cast<std::size_t>(i)], stats.n, stats.dmax);
        for (int j = 0; j < b; ++j) sys.F(i, j) = row[static_cast<std::size_t>(j)];
        sys.q(i) = estimator == RateEstimator::MLE ? obs.mle() : obs.umvue();
        sys.w(i) = 1.0 / obs.variance();
    }
    return sys;
}

std::string theta_component_name(Model model, int j) {
    if (model == Model::Contact) {
        switch (j) {
            case 0: return "mu";
            case 1: return "beta";
            default: return "delta";
        }
    }
    if (j == 0) return "mu";
    if (j == 1) return "beta";
    return "beta*delta^" + std::to_string(j - 1);
}

namespace {

// sqrt(w)-scaled design with identically-zero columns removed.
struct WeightedDesign {
    Eigen::MatrixXd A;
    Eigen::VectorXd y;
    std::vector<int> cols; // original column index per retained column
};

WeightedDesign make_design(const ReducedSystem& sys) {
    const int m = static_cast<int>(sys.F.rows());
    const int b = static_cast<int>(sys.F.cols());
    WeightedDesign d;
    for (int j = 0; j < b; ++j)
        if ((sys.F.col(j).array() != 0.0).any()) d.cols.push_back(j);
    d.A.resize(m, static_cast<int>(d.cols.size()));
    d.y.resize(m);
    for (int i = 0; i < m; ++i) {
        const double s = std::sqrt(sys.w(i));
        for (std::size_t c = 0; c < d.cols.size(); ++c)
            d.A(i, static_cast<int>(c)) = s * sys.F(i, d.cols[c]);
        d.y(i) = s * sys.q(i);
    }
    return d;
}

std::vector<int> dropped_columns(const ReducedSystem& sys, const WeightedDesign& d) {
    std::vector<int> out;
    int next = 0;
    for (int j = 0; j < static_cast<int>(sys.F.cols()); ++j) {
        if (next < static_cast<int>(d.cols.size()) && d.cols[static_cast<std::size_t>(next)] == j)
            ++next;
        else
            out.push_back(j);
    }
    return out;
}

// Rank check shared by all solvers; throws naming the columns that the
// pivoted QR could not resolve.
Eigen::ColPivHouseholderQR<Eigen::MatrixXd> rank_checked_qr(const ReducedSystem& sys,
                                                            const WeightedDesign& d) {
    Eigen::ColPivHouseholderQR<Eigen::MatrixXd> qr(d.A);
    const int rank = static_cast<int>(qr.rank());
    const int kc = static_cast<int>(d.cols.size());
    if (rank < kc) {
        const auto perm = qr.colsPermutation().indices();
        std::string names;
        for (int p = rank; p < kc; ++p) {
            if (!names.empty()) names += ", ";
            names += theta_component_name(sys.model, d.cols[static_cast<std::size_t>(perm[p])]);
        }
        throw NumericalError("underdetermined system (rank " + std::to_string(rank) + " of " +
                             std::to_string(kc) + "); deficient columns: " + names);
    }
    return qr;
}

ThetaEstimate finish(const ReducedSystem& sys, const WeightedDesign& d, SolveMethod method,
                     const Eigen::VectorXd& x, double residual, int rank) {
    ThetaEstimate est;
    est.method = method;
    est.model = sys.model;
    est.theta.assign(static_cast<std::size_t>(sys.F.cols()), kNaN);
    for (std::size_t c = 0; c < d.cols.size(); ++c)
        est.theta[static_cast<std::size_t>(d.cols[c])] = x(static_cast<int>(c));
    est.residual_norm = residual;
    est.diag.rank = rank;
    est.diag.m = static_cast<int>(sys.F.rows());
    est.diag.b = static_cast<int>(sys.F.cols());
    est.diag.dropped_classes = sys.dropped_classes;
    est.diag.dropped_columns = dropped_columns(sys, d);
    return est;
}

} // namespace

ThetaEstimate solve_wls(const ReducedSystem& sys) {
    const WeightedDesign d = make_design(sys);
    auto qr = rank_checked_qr(sys, d);
    const Eigen::VectorXd x = qr.solve(d.y);
    const double residual = (d.A * x - d.y).norm();
    return finish(sys, d, SolveMethod::WLS, x, residual, static_cast<int>(qr.rank()));
}

ThetaEstimate solve_nnls(const ReducedSystem& sys) {
    const WeightedDesign d = make_design(sys);
    auto qr = rank_checked_qr(sys, d);
    const int kc = static_cast<int>(d.cols.size());

    // Lawson-Hanson active set on the scaled design.
    constexpr double kTol = 1e-10;
    const int max_outer = 10 * kc;
    Eigen::VectorXd x = Eigen::VectorXd::Zero(kc);
    std::vector<bool> passive(static_cast<std::size_t>(kc), false);
    int outer = 0;
    int inner_total = 0;

    auto solve_passive = [&](const std::vector<bool>& pset) {
        std::vector<int> idx;
        for (int j = 0; j < kc; ++j)
            if (pset[static_cast<std::size_t>(j)]) idx.push_back(j);
        Eigen::MatrixXd Ap(d.A.rows(), static_cast<int>(idx.size()));
        for (std::size_t c = 0; c < idx.size(); ++c) Ap.col(static_cast<int>(c)) = d.A.col(idx[c]);
        Eigen::VectorXd zp = Ap.colPivHouseholderQr().solve(d.y);
        Eigen::VectorXd z = Eigen::VectorXd::Zero(kc);
        for (std::size_t c = 0; c < idx.size(); ++c) z(idx[c]) = zp(static_cast<int>(c));
        return z;
    };

    for (;;) {
        const Eigen::VectorXd grad = d.A.transpose() * (d.y - d.A * x);
        int best = -1;
        double best_grad = kTol;
        for (int j = 0; j < kc; ++j) {
            if (!passive[static_cast<std::size_t>(j)] && grad(j) > best_grad) {
                best_grad = grad(j);
                best = j;
            }
        }
        if (best < 0) break; // KKT satisfied on the zero set
        if (++outer > max_outer)
            throw NumericalError("nnls: iteration budget exceeded (" + std::to_string(max_outer) +
                                 ")");
        passive[static_cast<std::size_t>(best)] = true;

        for (;;) {
            Eigen::VectorXd z = solve_passive(passive);
            bool feasible = true;
            for (int j = 0; j < kc; ++j) {
                if (passive[static_cast<std::size_t>(j)] && z(j) <= 0.0) {
                    feasible = false;
                    break;
                }
            }
            if (feasible) {
                x = z;
                break;
            }
            if (++inner_total > max_outer * kc)
                throw NumericalError("nnls: inner iteration budget exceeded");
            // step toward z until the first passive coordinate hits zero
            double alpha = 1.0;
            for (int j = 0; j < kc; ++j)
                if (passive[static_cast<std::size_t>(j)] && z(j) <= 0.0)
                    alpha = std::min(alpha, x(j) / (x(j) - z(j)));
            x += alpha * (z - x);
            for (int j = 0; j < kc; ++j)
                if (passive[static_cast<std::size_t>(j)] && x(j) <= kTol * kTol) {
                    x(j) = 0.0;
                    passive[static_cast<std::size_t>(j)] = false;
                }
        }
    }

    const double residual = (d.A * x - d.y).norm();
    ThetaEstimate est =
        finish(sys, d, SolveMethod::NNLS, x, residual, static_cast<int>(qr.rank()));
    est.diag.iterations = outer;
    return est;
}

ThetaEstimate solve_lad(const ReducedSystem& sys) {
    const WeightedDesign d = make_design(sys);
    auto qr = rank_checked_qr(sys, d);
    const int kc = static_cast<int>(d.cols.size());

    constexpr double kEps = 1e-8;
    constexpr double kThetaTol = 1e-8;
    constexpr int kMaxIter = 500;

    auto l1_objective = [&](const Eigen::VectorXd& v) {
        return (d.A * v - d.y).array().abs().sum();
    };

    Eigen::VectorXd x = qr.solve(d.y); // least-squares start
    Eigen::VectorXd best = x;
    double best_obj = l1_objective(x);
    bool converged = false;
    int iter = 0;
    Eigen::MatrixXd Ar(d.A.rows(), kc);
    Eigen::VectorXd yr(d.A.rows());
    while (iter < kMaxIter) {
        ++iter;
        const Eigen::VectorXd r = d.A * x - d.y;
        for (int i = 0; i < static_cast<int>(d.A.rows()); ++i) {
            // IRLS row weight 1/sqrt(|r_i|) against the smoothed residual
            const double s = 1.0 / std::sqrt(std::sqrt(r(i) * r(i) + kEps * kEps));
            Ar.row(i) = s * d.A.row(i);
            yr(i) = s * d.y(i);
        }
        const Eigen::VectorXd x_next = Ar.colPivHouseholderQr().solve(yr);
        const double step = (x_next - x).lpNorm<Eigen::Infinity>();
        x = x_next;
        const double obj = l1_objective(x);
        if (obj < best_obj) {
            best_obj = obj;
            best = x;
        }
        if (step < kThetaTol) {
            converged = true;
            break;
        }
    }

    ThetaEstimate est =
        finish(sys, d, SolveMethod::LAD, best, best_obj, static_cast<int>(qr.rank()));
    est.diag.converged = converged;
    est.diag.iterations = iter;
    return est;
}

Recovered recover_delta_reversible(const std::vector<double>& theta,
                                   const std::vector<double>& column_weights) {
    Recovered rec;
    rec.mu = theta.empty() ? kNaN : theta[0];
    rec.beta = theta.size() < 2 ? kNaN : theta[1];
    rec.delta = kNaN;

    // weighted linear fit of log theta[1+k] on k over positive entries
    double W = 0.0, X = 0.0, Y = 0.0, XX = 0.0, XY = 0.0;
    int points = 0;
    for (std::size_t i = 1; i < theta.size(); ++i) {
        const double v = theta[i];
        if (!(v > 0.0) || !std::isfinite(v)) continue;
        const double k = static_cast<double>(i - 1);
        const double w = i - 1 < column_weights.size() ? column_weights[i - 1] : 1.0;
        if (!(w > 0.0)) continue;
        const double y = std::log(v);
        W += w;
        X += w * k;
        Y += w * y;
        XX += w * k * k;
        XY += w * k * y;
        ++points;
    }
    if (points < 2) return rec; // delta unrecoverable
    const double denom = W * XX - X * X;
    if (!(denom > 0.0)) return rec;
    const double slope = (W * XY - X * Y) / denom;
    rec.delta = std::exp(slope);
    rec.delta_ok = true;
    return rec;
}

ThetaEstimate estimate_theta(const Trajectory& tr, const Graph& g, Model model,
                             RateEstimator estimator, SolveMethod method) {
    const ClassStats stats = accumulate_stats(tr, g, model);
    const ReducedSystem sys = build_system(stats, estimator);
    ThetaEstimate est;
    switch (method) {
        case SolveMethod::WLS: est = solve_wls(sys); break;
        case SolveMethod::NNLS: est = solve_nnls(sys); break;
        case SolveMethod::LAD: est = solve_lad(sys); break;
    }
    if (model == Model::Contact) {
        est.recovered.mu = est.theta[0];
        est.recovered.beta = est.theta[1];
        est.recovered.delta = est.theta[2];
        est.recovered.delta_ok = std::isfinite(est.theta[2]);
    } else {
        // per-column weight: the heaviest retained class touching it
        std::vector<double> colw(static_cast<std::size_t>(sys.dmax) + 1, 0.0);
        for (int i = 0; i < static_cast<int>(sys.F.rows()); ++i)
            for (int k = 0; k <= sys.dmax; ++k)
                if (sys.F(i, k + 1) > 0.0)
                    colw[static_cast<std::size_t>(k)] =
                        std::max(colw[static_cast<std::size_t>(k)], sys.w(i));
        for (double& w : colw)
            if (!(w > 0.0)) w = 1.0;
        est.recovered = recover_delta_reversible(est.theta, colw);
    }
    return est;
}

} // namespace netrates
