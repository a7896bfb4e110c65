#pragma once

#include <Eigen/Dense>
#include <map>
#include <string>
#include <vector>

#include "netrates/dynamics.hpp"
#include "netrates/simulate.hpp"

namespace netrates {

enum class RateEstimator { MLE, UMVUE };
enum class SolveMethod { WLS, NNLS, LAD };

std::string estimator_name(RateEstimator e);
RateEstimator estimator_from_name(const std::string& name);
std::string method_name(SolveMethod m);
SolveMethod method_from_name(const std::string& name);

// Sufficient statistics of one holding class: observed departures and
// total occupancy time.
struct ClassObs {
    long long n_out = 0;
    double r_time = 0.0;

    double mle() const { return static_cast<double>(n_out) / r_time; }
    double umvue() const { return static_cast<double>(n_out - 1) / r_time; }
    // Delta-method variance of an exponential-rate estimate from n_out
    // departures; also used for the UMVUE weight.
    double variance() const { return mle() * mle() / static_cast<double>(n_out); }
};

struct ClassStats {
    std::map<HoldingSignature, ClassObs> classes; // canonical (sorted) order
    double t_end = 0.0;
    int n = 0;
    int dmax = 0;
    Model model = Model::Contact;
};

double class_rate_mle(long long n_out, double r_time);
double class_rate_umvue(long long n_out, double r_time);

// Single replay pass over the trajectory. Each sojourn adds its
// duration to the occupancy of the pre-event class and one departure;
// the final partial sojourn up to t_end adds time only. Throws
// DataError if the trajectory does not match the graph.
ClassStats accumulate_stats(const Trajectory& tr, const Graph& g, Model model);

// Class-to-class transition counts from the same replay.
struct PairwiseStats {
    std::map<HoldingSignature, std::map<HoldingSignature, long long>> counts;
    std::map<HoldingSignature, double> r_time;
};
PairwiseStats accumulate_pairwise(const Trajectory& tr, const Graph& g, Model model);

// N_ij(T) / R_i(T). Throws DataError when the source class was never
// occupied; returns 0 for unobserved destinations of an observed source.
double pairwise_rate_mle(const PairwiseStats& stats, const HoldingSignature& from,
                         const HoldingSignature& to);

// The reduced weighted linear system F theta = q over retained classes.
// Rows follow the canonical class order; weights are inverse estimated
// variances.
struct ReducedSystem {
    Eigen::MatrixXd F;
    Eigen::VectorXd q;
    Eigen::VectorXd w;
    std::vector<HoldingSignature> classes;
    int n = 0;
    int dmax = 0;
    Model model = Model::Contact;
    RateEstimator estimator = RateEstimator::MLE;
    long long dropped_classes = 0; // classes with fewer than n_min departures
};

// Classes with n_out < n_min are dropped (their variance proxy is
// undefined at n_out = 0). UMVUE rows with n_out = 1 carry q = 0 and
// keep the MLE-based weight.
ReducedSystem build_system(const ClassStats& stats, RateEstimator estimator,
                           long long n_min = 1);

struct Diagnostics {
    int rank = 0;
    int m = 0;
    int b = 0;
    long long dropped_classes = 0;
    std::vector<int> dropped_columns; // structurally absent theta components
    bool converged = true;
    int iterations = 0;
};

// Back-recovered (mu, beta, delta); delta_ok is false when delta could
// not be identified.
struct Recovered {
    double mu = 0.0;
    double beta = 0.0;
    double delta = 0.0;
    bool delta_ok = false;
};

struct ThetaEstimate {
    SolveMethod method = SolveMethod::WLS;
    Model model = Model::Contact;
    std::vector<double> theta; // length b; NaN marks unidentifiable components
    double residual_norm = 0.0;
    Recovered recovered;
    Diagnostics diag;
};

// Human-readable name of theta component j ("mu", "beta", "delta",
// "beta*delta^k").
std::string theta_component_name(Model model, int j);

// Weighted least squares via QR on the sqrt(w)-scaled system. Columns
// of F that are identically zero are unidentifiable: they are excluded
// and reported as NaN. A rank deficiency among the remaining columns
// throws NumericalError naming the deficient columns.
ThetaEstimate solve_wls(const ReducedSystem& sys);

// Same objective subject to theta >= 0 (Lawson-Hanson active set).
ThetaEstimate solve_nnls(const ReducedSystem& sys);

// Weighted least absolute deviation via iteratively reweighted least
// squares (smoothing eps = 1e-8, max 500 iterations). Non-convergence
// returns the best iterate with diag.converged = false.
ThetaEstimate solve_lad(const ReducedSystem& sys);

// mu = theta[0], beta = theta[1]; delta from the weighted log-linear
// regression of log theta[1+k] on k over positive entries. Fewer than
// two positive entries leave delta unrecoverable (delta_ok = false).
Recovered recover_delta_reversible(const std::vector<double>& theta,
                                   const std::vector<double>& column_weights = {});

// Full pipeline: accumulate_stats -> build_system -> solver ->
// (reversible only) recover_delta_reversible.
ThetaEstimate estimate_theta(const Trajectory& tr, const Graph& g, Model model,
                             RateEstimator estimator, SolveMethod method);

} // namespace netrates
