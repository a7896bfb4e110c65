#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "netrates/graph.hpp"

namespace netrates {

// The two node-flip dynamics. Contact: a susceptible node with m
// infected neighbors becomes infected at rate beta + delta*m.
// ReversibleContact: the same event fires at rate beta * delta^m.
// Infected nodes heal at rate mu in both models.
enum class Model { Contact, ReversibleContact };

std::string model_name(Model m);
Model model_from_name(const std::string& name);

struct ModelParams {
    Model model = Model::Contact;
    double mu = 0.0;
    double beta = 0.0;
    double delta = 0.0;

    // Contact: mu, beta, delta >= 0. Reversible: mu, beta, delta > 0
    // (zero healing or exogenous rate breaks reversibility).
    void validate() const;
};

// Node-state vector packed into 64-bit words; bit i set means node i is
// infected (failed), clear means susceptible (working).
class Configuration {
public:
    Configuration() = default;
    explicit Configuration(int n) : n_(n), words_((static_cast<std::size_t>(n) + 63) / 64, 0) {}

    // Parses a bit string like "01011"; character i is node i.
    static Configuration from_string(const std::string& bits);

    int size() const { return n_; }
    bool get(int i) const {
        return (words_[static_cast<std::size_t>(i) >> 6] >> (i & 63)) & 1u;
    }
    void set(int i, bool v) {
        const std::uint64_t mask = std::uint64_t{1} << (i & 63);
        if (v)
            words_[static_cast<std::size_t>(i) >> 6] |= mask;
        else
            words_[static_cast<std::size_t>(i) >> 6] &= ~mask;
    }
    void flip(int i) { words_[static_cast<std::size_t>(i) >> 6] ^= std::uint64_t{1} << (i & 63); }

    int infected_count() const;
    std::string to_string() const;

    bool operator==(const Configuration& other) const = default;

private:
    int n_ = 0;
    std::vector<std::uint64_t> words_;
};

// m_k: number of infected neighbors of node k.
int infected_neighbor_count(const Graph& g, const Configuration& x, int k);

// Rate at which a susceptible node with m infected neighbors flips.
double infection_rate(const ModelParams& p, int m);

// base^e by repeated multiplication; keeps library and test arithmetic
// on the identical float path.
double pow_int(double base, int e);

struct Transition {
    int node;
    bool new_state;
    double rate;
};

// One entry per node: infected j -> (j, 0, mu); susceptible k ->
// (k, 1, infection rate of k). Entries are in node order.
std::vector<Transition> enumerate_transitions(const Graph& g, const Configuration& x,
                                              const ModelParams& p);

// Total exit rate of the configuration (absolute diagonal rate).
double holding_rate(const Graph& g, const Configuration& x, const ModelParams& p);

// Canonical holding-class key. Two configurations with equal signatures
// have equal holding rates for every parameter choice of the model.
// Contact: (susceptible count s, sum of m_k over susceptible nodes).
// Reversible: (s, histogram c_j = #{susceptible k : m_k = j}, j=0..dmax).
struct HoldingSignature {
    Model model = Model::Contact;
    int susceptible = 0;
    long long m_total = 0;   // contact only; 0 for reversible
    std::vector<int> hist;   // reversible only; empty for contact

    bool operator==(const HoldingSignature& other) const = default;
    bool operator<(const HoldingSignature& other) const;
};

struct SignatureHash {
    std::size_t operator()(const HoldingSignature& s) const;
};

HoldingSignature signature(const Graph& g, const Configuration& x, Model model);

// Width b of the parameter vector: 3 for contact, dmax+2 for reversible.
int theta_dim(Model model, int dmax);

// Contact: [mu, beta, delta]. Reversible: [mu, beta, beta*delta, ...,
// beta*delta^dmax] (length dmax+2).
std::vector<double> theta_vector(const ModelParams& p, int dmax);

// Coefficient row of the class: feature_row(sig) . theta == holding rate
// of every configuration in the class.
// Contact: [N-s, s, m_total]. Reversible: [N-s, c_0, ..., c_dmax].
std::vector<double> feature_row(const HoldingSignature& sig, int n, int dmax);

// Mirrors (configuration, per-node infected-neighbor counts, class
// signature) under single-node flips in O(deg) per flip. Used by the
// simulator and the trajectory replay.
class StateTracker {
public:
    StateTracker(const Graph& g, Configuration x0);

    const Graph& graph() const { return *g_; }
    const Configuration& config() const { return x_; }
    int infected_neighbors(int k) const { return m_[static_cast<std::size_t>(k)]; }
    int susceptible_count() const { return susceptible_; }
    long long m_total_susceptible() const { return m_total_; }
    const std::vector<int>& susceptible_hist() const { return hist_; }

    void flip(int v);
    HoldingSignature signature(Model model) const;

private:
    const Graph* g_ = nullptr;
    Configuration x_;
    std::vector<int> m_;
    int susceptible_ = 0;
    long long m_total_ = 0;  // over susceptible nodes
    std::vector<int> hist_;  // size dmax+1
};

} // namespace netrates
