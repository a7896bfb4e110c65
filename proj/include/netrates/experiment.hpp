#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "netrates/estimate.hpp"
#include "netrates/graph.hpp"
#include "netrates/rng.hpp"

namespace netrates {

// Flat key = value configuration of one estimation experiment: per
// replication, draw a graph (or reuse a fixed one), draw theta and the
// initial configuration, simulate one trajectory, and estimate theta by
// every requested method at every requested trajectory length.
struct ExperimentConfig {
    Model model = Model::Contact;
    std::string graph_kind; // er | ws | complete | edgelist
    int n = 0;
    double er_p = 0.0;
    bool connected = true;
    int ws_nei = 0;
    double ws_rewire = 0.0;
    std::string edgelist_path;
    long long reps = 0;                      // L
    std::vector<std::uint64_t> event_counts; // M values, each >= 2
    double theta_min = 0.0;
    double theta_max = 3.0;
    RateEstimator estimator = RateEstimator::MLE;
    std::vector<SolveMethod> methods;
    std::uint64_t seed = 0;
    std::string output_dir;
    int workers = 1;

    static ExperimentConfig load(const std::string& path);
    void validate() const;
};

// One raw CSV row: a (replication, M, method) cell.
struct ExperimentRow {
    long long rep = 0;
    std::uint64_t rep_seed = 0;
    std::uint64_t m_requested = 0;
    std::uint64_t events_used = 0;
    SolveMethod method = SolveMethod::WLS;
    std::string status; // "ok" or an error tag
    double true_mu = 0, true_beta = 0, true_delta = 0;
    double est_mu = 0, est_beta = 0, est_delta = 0;
    double residual_norm = 0;
    int rank = 0, m_rows = 0, b = 0;
    long long dropped_classes = 0;
};

struct ExperimentResult {
    std::vector<ExperimentRow> rows;
    std::string raw_path;
    std::string summary_path;
};

// Runs all replications (concurrently up to cfg.workers; output is
// byte-identical regardless) and writes raw.csv and summary.csv under
// cfg.output_dir.
ExperimentResult run_experiment(const ExperimentConfig& cfg);

// Census sampling protocol for random-graph ensembles: the ER edge
// probability is uniform between log(N)/N and 0.2*log(N)/N (interval
// taken between the two endpoint values); the WS neighbor parameter is
// a uniform integer on [3, N/2] clamped so the ring lattice stays
// rewirable (2*nei < n-1), with rewiring probability uniform on
// (0.2, 0.8).
double census_er_p(int n, Rng& rng);
std::pair<int, double> census_ws_params(int n, Rng& rng);

// Full-precision, locale-independent float formatting for CSV cells.
std::string csv_double(double v);

} // namespace netrates
