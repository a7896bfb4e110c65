#include "netrates/simulate.hpp"

#include <cassert>
#include <cctype>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <sstream>

#include "netrates/errors.hpp"

namespace netrates {

namespace {

double node_rate(const ModelParams& p, bool infected, int m) {
    return infected ? p.mu : infection_rate(p, m);
}

#ifndef NDEBUG
// Cross-checks the incrementally maintained per-node rates against a
// from-scratch recomputation.
void verify_rates(const Graph& g, const StateTracker& st, const ModelParams& p,
                  const std::vector<double>& rates) {
    const auto fresh = enumerate_transitions(g, st.config(), p);
    for (int v = 0; v < g.num_nodes(); ++v) {
        const double expect = fresh[static_cast<std::size_t>(v)].rate;
        assert(std::abs(rates[static_cast<std::size_t>(v)] - expect) <=
               1e-9 * (1.0 + expect));
    }
}
#endif

} // namespace

Trajectory simulate(const Graph& g, const ModelParams& p, const Configuration& x0,
                    const StopRule& stop, std::uint64_t seed) {
    p.validate();
    const int n = g.num_nodes();
    if (x0.size() != n) throw DataError("initial configuration length does not match graph");
    if (stop.kind == StopRule::Kind::Events && stop.observed_states < 1)
        throw DataError("event stop requires at least one observed state");
    if (stop.kind == StopRule::Kind::Time && !(stop.horizon > 0.0))
        throw DataError("time stop requires a positive horizon");

    Trajectory tr;
    tr.model = p.model;
    tr.n = n;
    tr.seed = seed;
    tr.graph_hash = g.hash();
    tr.initial = x0;

    StateTracker st(g, x0);
    std::vector<double> rates(static_cast<std::size_t>(n));
    double total = 0.0;
    for (int v = 0; v < n; ++v) {
        rates[static_cast<std::size_t>(v)] =
            node_rate(p, st.config().get(v), st.infected_neighbors(v));
        total += rates[static_cast<std::size_t>(v)];
    }

    const std::uint64_t target_events =
        stop.kind == StopRule::Kind::Events ? stop.observed_states - 1 : UINT64_MAX;
    if (stop.kind == StopRule::Kind::Events)
        tr.events.reserve(static_cast<std::size_t>(std::min<std::uint64_t>(target_events, 1u << 20)));

    Rng rng(seed);
    double t = 0.0;
    std::uint64_t steps = 0;
    for (;;) {
        if (tr.events.size() >= target_events) {
            tr.t_end = t;
            break;
        }
        if (!(total > 0.0)) {
            tr.absorbed = true;
            if (stop.kind == StopRule::Kind::Time) {
                tr.t_end = stop.horizon;
            } else if (tr.events.empty()) {
                throw NumericalError("absorbing initial state: no event can occur");
            } else {
                tr.t_end = t;
            }
            break;
        }

        const double dt = rng.exponential(total);
        if (stop.kind == StopRule::Kind::Time && t + dt > stop.horizon) {
            tr.t_end = stop.horizon;
            break;
        }
        t += dt;

        // select the flipping node proportionally to its rate
        const double u = rng.uniform01() * total;
        double cum = 0.0;
        int chosen = -1;
        for (int v = 0; v < n; ++v) {
            cum += rates[static_cast<std::size_t>(v)];
            if (u < cum) {
                chosen = v;
                break;
            }
        }
        if (chosen < 0) {
            // ran off the end on accumulated round-off: take the last active node
            for (int v = n - 1; v >= 0; --v) {
                if (rates[static_cast<std::size_t>(v)] > 0.0) {
                    chosen = v;
                    break;
                }
            }
        }

        st.flip(chosen);
        tr.events.push_back({t, chosen, st.config().get(chosen)});

        // O(deg) rate refresh around the flipped node
        auto refresh = [&](int v) {
            double& r = rates[static_cast<std::size_t>(v)];
            const double fresh = node_rate(p, st.config().get(v), st.infected_neighbors(v));
            total += fresh - r;
            r = fresh;
        };
        refresh(chosen);
        for (int u2 : g.neighbors(chosen)) refresh(u2);

        ++steps;
        if ((steps & 0xfffu) == 0) {
            // rebuild the running total to cancel round-off drift
            total = 0.0;
            for (double r : rates) total += r;
        }
#ifndef NDEBUG
        if (steps % 10000 == 0) verify_rates(g, st, p, rates);
#endif
    }
    return tr;
}

Configuration random_configuration(int n, Rng& rng) {
    const double p0 = rng.uniform01();
    Configuration x(n);
    for (int i = 0; i < n; ++i) x.set(i, rng.bernoulli(p0));
    return x;
}

namespace {

std::string hex_double(double v) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%a", v);
    return buf;
}

double parse_double(const std::string& tok, bool& ok) {
    const char* begin = tok.c_str();
    char* end = nullptr;
    const double v = std::strtod(begin, &end);
    ok = end == begin + tok.size() && !tok.empty();
    return v;
}

std::string strip_line(const std::string& line) {
    std::string s = line.substr(0, line.find('#'));
    const auto first = s.find_first_not_of(" \t\r\n");
    if (first == std::string::npos) return "";
    const auto last = s.find_last_not_of(" \t\r\n");
    return s.substr(first, last - first + 1);
}

} // namespace

void write_trajectory(const Trajectory& tr, const std::string& path) {
    std::ofstream out(path);
    if (!out) throw DataError("cannot write trajectory: " + path);
    out << "model " << model_name(tr.model) << "\n";
    out << "n " << tr.n << "\n";
    out << "seed " << tr.seed << "\n";
    out << "prng " << tr.prng << "\n";
    char hex[32];
    std::snprintf(hex, sizeof hex, "%016llx", static_cast<unsigned long long>(tr.graph_hash));
    out << "graph " << hex << "\n";
    out << "t_end " << hex_double(tr.t_end) << "\n";
    out << "initial " << tr.initial.to_string() << "\n";
    if (tr.absorbed) out << "absorbed 1\n";
    std::string line;
    for (const Event& e : tr.events) {
        line = hex_double(e.t);
        line += ' ';
        line += std::to_string(e.node);
        line += e.new_state ? " 1\n" : " 0\n";
        out << line;
    }
    if (!out) throw DataError("write failed: " + path);
}

Trajectory read_trajectory(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw DataError("cannot open trajectory: " + path);

    auto fail = [&path](int lineno, const std::string& msg) -> void {
        throw DataError(path + ":" + std::to_string(lineno) + ": " + msg);
    };

    Trajectory tr;
    bool have_model = false, have_n = false, have_seed = false, have_prng = false;
    bool have_tend = false, have_initial = false;
    Configuration replay;
    double prev_t = 0.0;

    std::string raw;
    int lineno = 0;
    bool in_events = false;
    while (std::getline(in, raw)) {
        ++lineno;
        const std::string line = strip_line(raw);
        if (line.empty()) continue;
        std::istringstream ss(line);
        std::string first;
        ss >> first;

        if (!in_events && !first.empty() && std::isalpha(static_cast<unsigned char>(first[0]))) {
            std::string value;
            ss >> value;
            std::string extra;
            if (value.empty() || (ss >> extra)) fail(lineno, "malformed header line");
            try {
            if (first == "model") {
                tr.model = model_from_name(value);
                have_model = true;
            } else if (first == "n") {
                tr.n = std::stoi(value);
                if (tr.n < 1) fail(lineno, "n must be >= 1");
                have_n = true;
            } else if (first == "seed") {
                tr.seed = std::stoull(value);
                have_seed = true;
            } else if (first == "prng") {
                tr.prng = value;
                have_prng = true;
            } else if (first == "graph") {
                tr.graph_hash = std::stoull(value, nullptr, 16);
            } else if (first == "t_end") {
                bool ok = false;
                tr.t_end = parse_double(value, ok);
                if (!ok || !(tr.t_end >= 0.0)) fail(lineno, "bad t_end");
                have_tend = true;
            } else if (first == "initial") {
                tr.initial = Configuration::from_string(value);
                have_initial = true;
            } else if (first == "absorbed") {
                tr.absorbed = value != "0";
            } else {
                fail(lineno, "unknown header key: " + first);
            }
            } catch (const std::logic_error&) {
                fail(lineno, "bad value for header key " + first);
            }
            continue;
        }

        // first event line: headers must be complete
        if (!in_events) {
            if (!(have_model && have_n && have_seed && have_prng && have_tend && have_initial))
                fail(lineno, "incomplete header before events");
            if (tr.initial.size() != tr.n) fail(lineno, "initial length does not match n");
            replay = tr.initial;
            in_events = true;
        }

        std::string t_tok = first;
        int node = -1;
        int state = -1;
        std::string extra;
        if (!(ss >> node >> state) || (ss >> extra)) fail(lineno, "expected 't node new_state'");
        bool ok = false;
        const double t = parse_double(t_tok, ok);
        if (!ok) fail(lineno, "bad event time");
        if (!(t > prev_t)) fail(lineno, "event times must be strictly increasing");
        if (node < 0 || node >= tr.n) fail(lineno, "event node out of range");
        if (state != 0 && state != 1) fail(lineno, "event state must be 0 or 1");
        if (replay.get(node) == (state == 1)) fail(lineno, "no-op event (node already in that state)");
        replay.set(node, state == 1);
        tr.events.push_back({t, node, state == 1});
        prev_t = t;
    }

    if (!(have_model && have_n && have_seed && have_prng && have_tend && have_initial))
        throw DataError(path + ": incomplete trajectory header");
    if (tr.initial.size() != tr.n) throw DataError(path + ": initial length does not match n");
    if (!tr.events.empty() && tr.events.back().t > tr.t_end)
        throw DataError(path + ": events extend past t_end");
    return tr;
}

} // namespace netrates
