#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "netrates/dynamics.hpp"
#include "netrates/rng.hpp"

namespace netrates {

struct Event {
    double t;
    int node;
    bool new_state;

    bool operator==(const Event& other) const = default;
};

// One continuously observed sample path: the initial configuration plus
// the ordered jump events on (0, t_end]. Replaying the events from
// `initial` reconstructs the configuration at any time.
struct Trajectory {
    Model model = Model::Contact;
    int n = 0;
    std::uint64_t seed = 0;
    std::string prng = Rng::kAlgorithm;
    std::uint64_t graph_hash = 0;
    Configuration initial;
    std::vector<Event> events;
    double t_end = 0.0;
    bool absorbed = false; // simulation ended in a zero-rate state

    bool operator==(const Trajectory& other) const = default;
};

struct StopRule {
    enum class Kind { Events, Time };
    Kind kind = Kind::Events;
    std::uint64_t observed_states = 0; // M; the run records M-1 jump events
    double horizon = 0.0;

    static StopRule events(std::uint64_t m) { return {Kind::Events, m, 0.0}; }
    static StopRule time(double t) { return {Kind::Time, 0, t}; }
};

// Exact Gillespie simulation: sojourn ~ Exponential(total exit rate),
// then the flipped node is chosen with probability rate/total. Per-node
// rates are maintained incrementally, O(deg) per event. Deterministic
// given (graph, params, x0, stop, seed).
//
// An absorbing state under a time stop terminates at the requested
// horizon; an absorbing *start* under an event stop throws
// NumericalError (no event can ever be produced).
Trajectory simulate(const Graph& g, const ModelParams& p, const Configuration& x0,
                    const StopRule& stop, std::uint64_t seed);

// p0 ~ Uniform(0,1), then each node i.i.d. Bernoulli(p0).
Configuration random_configuration(int n, Rng& rng);

// Line-oriented text format. Header lines `model`, `n`, `seed`, `prng`,
// `graph`, `t_end`, `initial`, then one `t node new_state` line per
// event. Times are hex floats so the round-trip is bit-exact. '#'
// starts a comment.
void write_trajectory(const Trajectory& tr, const std::string& path);
Trajectory read_trajectory(const std::string& path);

} // namespace netrates
