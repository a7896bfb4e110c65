// Command-line front end: graph generation, exact trajectory simulation,
// parameter estimation from a single trajectory, holding-class census,
// and the full seeded experiment harness.
//
// Exit codes: 0 success, 1 usage error, 2 data/format error,
// 3 numerical failure.

#include <CLI11.hpp>
#include <cmath>
#include <iostream>

#include "netrates/bounds.hpp"
#include "netrates/errors.hpp"
#include "netrates/estimate.hpp"
#include "netrates/experiment.hpp"
#include "netrates/simulate.hpp"

using namespace netrates;

namespace {

struct GenerateArgs {
    int er_n = 0, ws_n = 0, complete_n = 0;
    double p = 0.1, rewire = 0.0;
    int nei = 1;
    std::uint64_t seed = 0;
    bool connected = false;
    int max_resamples = 1000;
    std::string output;
};

int cmd_generate(const GenerateArgs& a) {
    Graph g;
    if (a.complete_n > 0)
        g = generate_complete(a.complete_n);
    else if (a.er_n > 0)
        g = generate_er(a.er_n, a.p, a.seed, a.connected, a.max_resamples);
    else if (a.ws_n > 0)
        g = generate_ws(a.ws_n, a.nei, a.rewire, a.seed);
    else
        throw CLI::ValidationError("one of --er, --ws, --complete is required");
    save_edgelist(g, a.output);
    std::cout << "n=" << g.num_nodes() << " edges=" << g.num_edges()
              << " dmax=" << g.max_degree() << "\n";
    return 0;
}

struct SimulateArgs {
    std::string graph_path;
    std::string model = "contact";
    double mu = 0, beta = 0, delta = 0;
    std::uint64_t events = 0;
    double time = 0;
    std::uint64_t seed = 0;
    std::string init = "random";
    std::string output;
};

int cmd_simulate(const SimulateArgs& a) {
    const Graph g = load_edgelist(a.graph_path);
    ModelParams p;
    p.model = model_from_name(a.model);
    p.mu = a.mu;
    p.beta = a.beta;
    p.delta = a.delta;
    p.validate();

    if ((a.events == 0) == (a.time == 0))
        throw CLI::ValidationError("exactly one of --events, --time is required");
    const StopRule stop = a.events ? StopRule::events(a.events) : StopRule::time(a.time);

    // one user-facing seed; substreams for the initial draw and the jump
    // process are derived from it
    Rng seeder(a.seed);
    Configuration x0;
    if (a.init == "random") {
        Rng init_rng(mix_seed(a.seed, 1));
        x0 = random_configuration(g.num_nodes(), init_rng);
    } else {
        x0 = Configuration::from_string(a.init);
        if (x0.size() != g.num_nodes())
            throw DataError("--init length does not match the graph");
    }
    const Trajectory tr = simulate(g, p, x0, stop, mix_seed(a.seed, 2));
    write_trajectory(tr, a.output);
    std::cout << "events=" << tr.events.size() << " t_end=" << tr.t_end
              << (tr.absorbed ? " absorbed" : "") << "\n";
    return 0;
}

struct EstimateArgs {
    std::string graph_path;
    std::string traj_path;
    std::string estimator = "mle";
    std::vector<std::string> methods{"wls", "nnls", "lad"};
};

int cmd_estimate(const EstimateArgs& a) {
    const Graph g = load_edgelist(a.graph_path);
    const Trajectory tr = read_trajectory(a.traj_path);
    const RateEstimator estimator = estimator_from_name(a.estimator);
    const int b = theta_dim(tr.model, g.max_degree());

    std::cout << "method,estimator,model,n,m,b,rank";
    for (int j = 0; j < b; ++j) std::cout << ",theta_" << j;
    std::cout << ",mu_hat,beta_hat,delta_hat,residual_norm,dropped_classes,seed,status\n";

    bool numerical_failure = false;
    for (const std::string& mname : a.methods) {
        const SolveMethod method = method_from_name(mname);
        std::cout << mname << ',' << a.estimator << ',' << model_name(tr.model) << ',' << tr.n
                  << ',';
        try {
            const ThetaEstimate est = estimate_theta(tr, g, tr.model, estimator, method);
            std::cout << est.diag.m << ',' << est.diag.b << ',' << est.diag.rank;
            for (double v : est.theta) std::cout << ',' << csv_double(v);
            std::cout << ',' << csv_double(est.recovered.mu) << ','
                      << csv_double(est.recovered.beta) << ',' << csv_double(est.recovered.delta)
                      << ',' << csv_double(est.residual_norm) << ',' << est.diag.dropped_classes
                      << ',' << tr.seed << ",ok\n";
        } catch (const NumericalError& e) {
            numerical_failure = true;
            std::cout << ",,";
            for (int j = 0; j < b; ++j) std::cout << ',';
            std::cout << ",,,,," << tr.seed << ",error:underdetermined\n";
        }
    }
    return numerical_failure ? 3 : 0;
}

struct CensusArgs {
    std::string graph_path;
    std::string family;
    int n_min = 4, n_max = 10;
    int graphs = 50;
    std::string model = "both";
    std::uint64_t seed = 0;
    int cap = 20;
};

void census_row(const Graph& g, Model model, const std::string& family,
                const std::string& params, int cap) {
    const ClassCensus c = enumerate_classes(g, model, cap);
    std::cout << c.n << ',' << model_name(model) << ',' << family << ',' << params << ','
              << c.k_exact << ',' << c.k_bound << ',' << csv_double(c.ratio) << "\n";
}

int cmd_census(const CensusArgs& a) {
    std::vector<Model> models;
    if (a.model == "both")
        models = {Model::Contact, Model::ReversibleContact};
    else
        models = {model_from_name(a.model)};

    std::cout << "n,model,family,params,k_exact,k_bound,ratio\n";
    if (!a.graph_path.empty()) {
        const Graph g = load_edgelist(a.graph_path);
        for (Model m : models) census_row(g, m, "file", a.graph_path, a.cap);
        return 0;
    }
    if (a.family.empty())
        throw CLI::ValidationError("either --graph or --family is required");
    for (int n = a.n_min; n <= a.n_max; ++n) {
        if (a.family == "complete") {
            const Graph g = generate_complete(n);
            for (Model m : models) census_row(g, m, "complete", "", a.cap);
            continue;
        }
        for (int i = 0; i < a.graphs; ++i) {
            const std::uint64_t gseed =
                mix_seed(a.seed, (static_cast<std::uint64_t>(n) << 20) + static_cast<std::uint64_t>(i));
            Rng prng(mix_seed(gseed, 7));
            if (a.family == "er") {
                const double p = census_er_p(n, prng);
                const Graph g = generate_er(n, p, gseed, false);
                char ps[48];
                std::snprintf(ps, sizeof ps, "p=%.6f", p);
                for (Model m : models) census_row(g, m, "er", ps, a.cap);
            } else if (a.family == "ws") {
                const auto [nei, rewire] = census_ws_params(n, prng);
                const Graph g = generate_ws(n, nei, rewire, gseed);
                char ps[64];
                std::snprintf(ps, sizeof ps, "nei=%d rewire=%.6f", nei, rewire);
                for (Model m : models) census_row(g, m, "ws", ps, a.cap);
            } else {
                throw CLI::ValidationError("--family must be er, ws, or complete");
            }
        }
    }
    return 0;
}

struct ExperimentArgs {
    std::string config_path;
    std::string output_override;
};

int cmd_experiment(const ExperimentArgs& a) {
    ExperimentConfig cfg = ExperimentConfig::load(a.config_path);
    if (!a.output_override.empty()) cfg.output_dir = a.output_override;
    const ExperimentResult res = run_experiment(cfg);
    long long ok = 0;
    for (const auto& r : res.rows) ok += r.status == "ok" ? 1 : 0;
    std::cout << "rows=" << res.rows.size() << " ok=" << ok << "\n";
    std::cout << "raw=" << res.raw_path << "\n";
    std::cout << "summary=" << res.summary_path << "\n";
    return 0;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"Simulation and single-trajectory parameter estimation for "
                 "contact-process dynamics on networks"};
    app.require_subcommand(1);

    GenerateArgs ga;
    auto* gen = app.add_subcommand("generate-graph", "Generate a graph and write an edge list");
    auto* er = gen->add_option("--er", ga.er_n, "Erdos-Renyi with N nodes");
    auto* ws = gen->add_option("--ws", ga.ws_n, "Watts-Strogatz with N nodes");
    auto* co = gen->add_option("--complete", ga.complete_n, "Complete graph with N nodes");
    er->excludes(ws)->excludes(co);
    ws->excludes(co);
    gen->add_option("--p", ga.p, "ER edge probability");
    gen->add_option("--nei", ga.nei, "WS neighbors per side");
    gen->add_option("--rewire", ga.rewire, "WS rewiring probability");
    gen->add_option("--seed", ga.seed, "RNG seed");
    gen->add_flag("--connected", ga.connected, "Resample ER until connected");
    gen->add_option("--max-resamples", ga.max_resamples, "ER connectivity resample budget");
    gen->add_option("-o,--output", ga.output, "Output edge-list path")->required();

    SimulateArgs sa;
    auto* sim = app.add_subcommand("simulate", "Simulate one exact trajectory");
    sim->add_option("--graph", sa.graph_path, "Edge-list path")->required();
    sim->add_option("--model", sa.model, "contact | reversible");
    sim->add_option("--mu", sa.mu, "Healing rate")->required();
    sim->add_option("--beta", sa.beta, "Exogenous infection rate")->required();
    sim->add_option("--delta", sa.delta, "Endogenous rate / scaling factor")->required();
    sim->add_option("--events", sa.events, "Stop after M observed states (M-1 events)");
    sim->add_option("--time", sa.time, "Stop at time horizon T");
    sim->add_option("--seed", sa.seed, "RNG seed");
    sim->add_option("--init", sa.init, "Initial bits (e.g. 0101) or 'random'");
    sim->add_option("-o,--output", sa.output, "Output trajectory path")->required();

    EstimateArgs ea;
    auto* est = app.add_subcommand("estimate", "Estimate parameters from a trajectory (CSV)");
    est->add_option("--graph", ea.graph_path, "Edge-list path")->required();
    est->add_option("--traj", ea.traj_path, "Trajectory path")->required();
    est->add_option("--estimator", ea.estimator, "mle | umvue");
    est->add_option("--methods", ea.methods, "Subset of wls,nnls,lad")->delimiter(',');

    CensusArgs ca;
    auto* cen = app.add_subcommand("enumerate-classes",
                                   "Exact holding-class census (CSV), single graph or sweep");
    cen->add_option("--graph", ca.graph_path, "Edge-list path (single census)");
    cen->add_option("--family", ca.family, "er | ws | complete (sweep)");
    cen->add_option("--n-min", ca.n_min, "Sweep lower node count");
    cen->add_option("--n-max", ca.n_max, "Sweep upper node count");
    cen->add_option("--graphs", ca.graphs, "Random graphs per (family, n)");
    cen->add_option("--model", ca.model, "contact | reversible | both");
    cen->add_option("--seed", ca.seed, "RNG seed");
    cen->add_option("--cap", ca.cap, "Enumeration node cap");

    ExperimentArgs xa;
    auto* exp = app.add_subcommand("experiment", "Run the full estimation experiment harness");
    exp->add_option("--config", xa.config_path, "Flat key=value config file")->required();
    exp->add_option("--output", xa.output_override, "Override output directory");

    try {
        app.parse(argc, argv);
        if (gen->parsed()) return cmd_generate(ga);
        if (sim->parsed()) return cmd_simulate(sa);
        if (est->parsed()) return cmd_estimate(ea);
        if (cen->parsed()) return cmd_census(ca);
        if (exp->parsed()) return cmd_experiment(xa);
        return 1;
    } catch (const CLI::ParseError& e) {
        if (e.get_exit_code() == 0) return app.exit(e); // --help
        std::cerr << e.what() << "\n";
        return 1;
    } catch (const DataError& e) {
        std::cerr << "data error: " << e.what() << "\n";
        return 2;
    } catch (const NumericalError& e) {
        std::cerr << "numerical error: " << e.what() << "\n";
        return 3;
    } catch (const std::invalid_argument& e) {
        std::cerr << "invalid argument: " << e.what() << "\n";
        return 1;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    }
}
