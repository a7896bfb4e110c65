#include "netrates/experiment.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <map>
#include <sstream>
#include <thread>

#include "netrates/errors.hpp"
#include "netrates/metrics.hpp"
#include "netrates/simulate.hpp"

namespace netrates {

namespace {

std::string trim(const std::string& s) {
    const auto first = s.find_first_not_of(" \t\r\n");
    if (first == std::string::npos) return "";
    const auto last = s.find_last_not_of(" \t\r\n");
    return s.substr(first, last - first + 1);
}

std::vector<std::string> split_list(const std::string& s) {
    std::vector<std::string> out;
    std::string item;
    std::istringstream ss(s);
    while (std::getline(ss, item, ',')) {
        item = trim(item);
        if (!item.empty()) out.push_back(item);
    }
    return out;
}

bool parse_bool(const std::string& v) {
    if (v == "true" || v == "1" || v == "yes") return true;
    if (v == "false" || v == "0" || v == "no") return false;
    throw DataError("expected boolean, got: " + v);
}

} // namespace

ExperimentConfig ExperimentConfig::load(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw DataError("cannot open config: " + path);

    ExperimentConfig cfg;
    std::string raw;
    int lineno = 0;
    bool have_methods = false;
    while (std::getline(in, raw)) {
        ++lineno;
        std::string line = trim(raw.substr(0, raw.find('#')));
        if (line.empty()) continue;
        const auto eq = line.find('=');
        if (eq == std::string::npos)
            throw DataError(path + ":" + std::to_string(lineno) + ": expected 'key = value'");
        const std::string key = trim(line.substr(0, eq));
        const std::string value = trim(line.substr(eq + 1));
        try {
            if (key == "model")
                cfg.model = model_from_name(value);
            else if (key == "graph")
                cfg.graph_kind = value;
            else if (key == "n")
                cfg.n = std::stoi(value);
            else if (key == "p")
                cfg.er_p = std::stod(value);
            else if (key == "connected")
                cfg.connected = parse_bool(value);
            else if (key == "nei")
                cfg.ws_nei = std::stoi(value);
            else if (key == "rewire")
                cfg.ws_rewire = std::stod(value);
            else if (key == "edgelist")
                cfg.edgelist_path = value;
            else if (key == "reps")
                cfg.reps = std::stoll(value);
            else if (key == "events") {
                cfg.event_counts.clear();
                for (const auto& tok : split_list(value))
                    cfg.event_counts.push_back(std::stoull(tok));
            } else if (key == "theta_min")
                cfg.theta_min = std::stod(value);
            else if (key == "theta_max")
                cfg.theta_max = std::stod(value);
            else if (key == "estimator")
                cfg.estimator = estimator_from_name(value);
            else if (key == "methods") {
                cfg.methods.clear();
                for (const auto& tok : split_list(value))
                    cfg.methods.push_back(method_from_name(tok));
                have_methods = true;
            } else if (key == "seed")
                cfg.seed = std::stoull(value);
            else if (key == "output")
                cfg.output_dir = value;
            else if (key == "workers")
                cfg.workers = std::stoi(value);
            else
                throw DataError("unknown key: " + key);
        } catch (const std::logic_error&) {
            throw DataError(path + ":" + std::to_string(lineno) + ": bad value for " + key);
        }
    }
    if (!have_methods) cfg.methods = {SolveMethod::WLS, SolveMethod::NNLS, SolveMethod::LAD};
    cfg.validate();
    return cfg;
}

void ExperimentConfig::validate() const {
    if (graph_kind != "er" && graph_kind != "ws" && graph_kind != "complete" &&
        graph_kind != "edgelist")
        throw DataError("config: graph must be er, ws, complete, or edgelist");
    if (graph_kind == "edgelist") {
        if (edgelist_path.empty()) throw DataError("config: edgelist path required");
    } else if (n < 1) {
        throw DataError("config: n must be >= 1");
    }
    if (graph_kind == "er" && (er_p < 0.0 || er_p > 1.0))
        throw DataError("config: p must be in [0,1]");
    if (graph_kind == "ws" && ws_nei < 1) throw DataError("config: nei must be >= 1");
    if (reps < 1) throw DataError("config: reps must be >= 1");
    if (event_counts.empty()) throw DataError("config: events list required");
    for (std::uint64_t m : event_counts)
        if (m < 2) throw DataError("config: every trajectory length must be >= 2");
    if (!(theta_min >= 0.0) || !(theta_max > theta_min))
        throw DataError("config: need 0 <= theta_min < theta_max");
    if (methods.empty()) throw DataError("config: at least one method required");
    if (output_dir.empty()) throw DataError("config: output directory required");
    if (workers < 1) throw DataError("config: workers must be >= 1");
}

std::string csv_double(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

namespace {

struct RepOutput {
    std::vector<ExperimentRow> rows;
};

ModelParams draw_theta(const ExperimentConfig& cfg, Rng& rng) {
    ModelParams p;
    p.model = cfg.model;
    p.mu = rng.uniform(cfg.theta_min, cfg.theta_max);
    p.beta = rng.uniform(cfg.theta_min, cfg.theta_max);
    p.delta = rng.uniform(cfg.theta_min, cfg.theta_max);
    if (cfg.model == Model::ReversibleContact) {
        // open the interval at zero: the reversible model needs strictly
        // positive rates
        while (p.mu <= 0.0) p.mu = rng.uniform(cfg.theta_min, cfg.theta_max);
        while (p.beta <= 0.0) p.beta = rng.uniform(cfg.theta_min, cfg.theta_max);
        while (p.delta <= 0.0) p.delta = rng.uniform(cfg.theta_min, cfg.theta_max);
    }
    return p;
}

RepOutput run_replication(const ExperimentConfig& cfg, const Graph* shared_graph,
                          long long rep) {
    RepOutput out;
    const std::uint64_t rep_seed = mix_seed(cfg.seed, static_cast<std::uint64_t>(rep) + 1);

    Graph local;
    const Graph* g = shared_graph;
    if (!g) {
        if (cfg.graph_kind == "er")
            local = generate_er(cfg.n, cfg.er_p, mix_seed(rep_seed, 1), cfg.connected);
        else
            local = generate_ws(cfg.n, cfg.ws_nei, cfg.ws_rewire, mix_seed(rep_seed, 1));
        g = &local;
    }

    Rng theta_rng(mix_seed(rep_seed, 2));
    const ModelParams truth = draw_theta(cfg, theta_rng);
    Rng init_rng(mix_seed(rep_seed, 3));
    const Configuration x0 = random_configuration(g->num_nodes(), init_rng);

    const std::uint64_t m_max =
        *std::max_element(cfg.event_counts.begin(), cfg.event_counts.end());

    Trajectory full;
    std::string sim_error;
    try {
        full = simulate(*g, truth, x0, StopRule::events(m_max), mix_seed(rep_seed, 4));
    } catch (const NumericalError& e) {
        sim_error = "absorbing_start";
    }

    for (std::uint64_t m : cfg.event_counts) {
        for (SolveMethod method : cfg.methods) {
            ExperimentRow row;
            row.rep = rep;
            row.rep_seed = rep_seed;
            row.m_requested = m;
            row.method = method;
            row.true_mu = truth.mu;
            row.true_beta = truth.beta;
            row.true_delta = truth.delta;
            if (!sim_error.empty()) {
                row.status = sim_error;
                out.rows.push_back(row);
                continue;
            }

            // prefix of the single simulated trajectory: the first m-1
            // events are exactly the length-m run for the same seed
            Trajectory prefix;
            prefix.model = full.model;
            prefix.n = full.n;
            prefix.seed = full.seed;
            prefix.prng = full.prng;
            prefix.graph_hash = full.graph_hash;
            prefix.initial = full.initial;
            const std::size_t want = static_cast<std::size_t>(m - 1);
            const std::size_t have = std::min(want, full.events.size());
            prefix.events.assign(full.events.begin(),
                                 full.events.begin() + static_cast<std::ptrdiff_t>(have));
            prefix.t_end = have ? prefix.events.back().t : 0.0;
            row.events_used = have;
            if (have == 0) {
                row.status = "no_events";
                out.rows.push_back(row);
                continue;
            }

            try {
                const ThetaEstimate est =
                    estimate_theta(prefix, *g, cfg.model, cfg.estimator, method);
                row.status = "ok";
                row.est_mu = est.recovered.mu;
                row.est_beta = est.recovered.beta;
                row.est_delta = est.recovered.delta;
                row.residual_norm = est.residual_norm;
                row.rank = est.diag.rank;
                row.m_rows = est.diag.m;
                row.b = est.diag.b;
                row.dropped_classes = est.diag.dropped_classes;
            } catch (const NumericalError&) {
                row.status = "underdetermined";
            }
            out.rows.push_back(row);
        }
    }
    return out;
}

void write_raw_csv(const std::string& path, const ExperimentConfig& cfg,
                   const std::vector<ExperimentRow>& rows) {
    std::ofstream out(path);
    if (!out) throw DataError("cannot write: " + path);
    out << "rep,rep_seed,model,estimator,method,M,events_used,status,"
           "true_mu,true_beta,true_delta,est_mu,est_beta,est_delta,"
           "err_mu,err_beta,err_delta,residual_norm,rank,m,b,dropped_classes\n";
    for (const ExperimentRow& r : rows) {
        out << r.rep << ',' << r.rep_seed << ',' << model_name(cfg.model) << ','
            << estimator_name(cfg.estimator) << ',' << method_name(r.method) << ','
            << r.m_requested << ',' << r.events_used << ',' << r.status << ',';
        out << csv_double(r.true_mu) << ',' << csv_double(r.true_beta) << ','
            << csv_double(r.true_delta) << ',';
        if (r.status == "ok") {
            out << csv_double(r.est_mu) << ',' << csv_double(r.est_beta) << ','
                << csv_double(r.est_delta) << ',' << csv_double(std::abs(r.est_mu - r.true_mu))
                << ',' << csv_double(std::abs(r.est_beta - r.true_beta)) << ','
                << csv_double(std::abs(r.est_delta - r.true_delta)) << ','
                << csv_double(r.residual_norm) << ',' << r.rank << ',' << r.m_rows << ',' << r.b
                << ',' << r.dropped_classes;
        } else {
            out << ",,,,,,,,,,";
        }
        out << '\n';
    }
    if (!out) throw DataError("write failed: " + path);
}

void write_summary_csv(const std::string& path, const ExperimentConfig& cfg,
                       const std::vector<ExperimentRow>& rows) {
    std::ofstream out(path);
    if (!out) throw DataError("cannot write: " + path);
    out << "M,method,param,count,mae,smape,std\n";
    const char* params[] = {"mu", "beta", "delta"};
    for (std::uint64_t m : cfg.event_counts) {
        for (SolveMethod method : cfg.methods) {
            for (int pi = 0; pi < 3; ++pi) {
                std::vector<double> est, truth;
                for (const ExperimentRow& r : rows) {
                    if (r.m_requested != m || r.method != method || r.status != "ok") continue;
                    const double e = pi == 0 ? r.est_mu : pi == 1 ? r.est_beta : r.est_delta;
                    const double t = pi == 0 ? r.true_mu : pi == 1 ? r.true_beta : r.true_delta;
                    if (!std::isfinite(e)) continue; // unidentifiable component
                    est.push_back(e);
                    truth.push_back(t);
                }
                out << m << ',' << method_name(method) << ',' << params[pi] << ',';
                if (est.empty()) {
                    out << "0,,,\n";
                    continue;
                }
                const ErrorSummary s = summarize_errors(est, truth);
                out << s.count << ',' << csv_double(s.mae) << ',' << csv_double(s.smape) << ','
                    << csv_double(s.std_abs_err) << '\n';
            }
        }
    }
    if (!out) throw DataError("write failed: " + path);
}

} // namespace

ExperimentResult run_experiment(const ExperimentConfig& cfg) {
    cfg.validate();

    Graph shared;
    const Graph* shared_ptr = nullptr;
    if (cfg.graph_kind == "complete") {
        shared = generate_complete(cfg.n);
        shared_ptr = &shared;
    } else if (cfg.graph_kind == "edgelist") {
        shared = load_edgelist(cfg.edgelist_path);
        shared_ptr = &shared;
    }

    std::vector<RepOutput> outputs(static_cast<std::size_t>(cfg.reps));
    const int workers = std::min<long long>(cfg.workers, cfg.reps);
    if (workers <= 1) {
        for (long long rep = 0; rep < cfg.reps; ++rep)
            outputs[static_cast<std::size_t>(rep)] = run_replication(cfg, shared_ptr, rep);
    } else {
        std::atomic<long long> next{0};
        std::vector<std::thread> pool;
        pool.reserve(static_cast<std::size_t>(workers));
        std::atomic<bool> failed{false};
        for (int wk = 0; wk < workers; ++wk) {
            pool.emplace_back([&]() {
                for (;;) {
                    const long long rep = next.fetch_add(1);
                    if (rep >= cfg.reps || failed.load()) return;
                    try {
                        outputs[static_cast<std::size_t>(rep)] =
                            run_replication(cfg, shared_ptr, rep);
                    } catch (...) {
                        failed.store(true);
                        return;
                    }
                }
            });
        }
        for (auto& th : pool) th.join();
        if (failed.load()) throw NumericalError("experiment replication failed unexpectedly");
    }

    ExperimentResult result;
    for (auto& o : outputs)
        result.rows.insert(result.rows.end(), o.rows.begin(), o.rows.end());

    std::filesystem::create_directories(cfg.output_dir);
    result.raw_path = (std::filesystem::path(cfg.output_dir) / "raw.csv").string();
    result.summary_path = (std::filesystem::path(cfg.output_dir) / "summary.csv").string();
    write_raw_csv(result.raw_path, cfg, result.rows);
    write_summary_csv(result.summary_path, cfg, result.rows);
    return result;
}

double census_er_p(int n, Rng& rng) {
    const double a = std::log(static_cast<double>(n)) / n;
    const double b = 0.2 * a;
    return rng.uniform(std::min(a, b), std::max(a, b));
}

std::pair<int, double> census_ws_params(int n, Rng& rng) {
    // largest nei whose ring lattice stays below the complete graph:
    // 2*nei < n-1, so the rewiring step always has somewhere to go
    const int cap = std::max(1, (n - 2) / 2);
    const int hi = std::max(3, n / 2);
    int nei = 3 + static_cast<int>(rng.uniform_int(static_cast<std::uint64_t>(hi - 3 + 1)));
    nei = std::clamp(nei, 1, cap);
    const double rewire = rng.uniform(0.2, 0.8);
    return {nei, rewire};
}

} // namespace netrates
