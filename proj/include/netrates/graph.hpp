#pragma once

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

namespace netrates {

// Finite undirected simple graph over 0-based contiguous node ids.
// Immutable after construction; adjacency lists and the edge list are
// kept sorted so identical graphs serialize identically.
class Graph {
public:
    Graph() = default;

    // Throws DataError on self-loops, duplicate edges, or endpoints
    // outside [0, n).
    Graph(int n, std::vector<std::pair<int, int>> edges);

    int num_nodes() const { return n_; }
    std::size_t num_edges() const { return edges_.size(); }
    const std::vector<std::pair<int, int>>& edges() const { return edges_; }

    const std::vector<int>& neighbors(int v) const { return adj_[static_cast<std::size_t>(v)]; }
    int degree(int v) const { return static_cast<int>(neighbors(v).size()); }
    int max_degree() const { return max_degree_; }
    bool has_edge(int a, int b) const;

    // FNV-1a over the node count and canonical edge list. Used to tie
    // trajectory files to the graph they were simulated on.
    std::uint64_t hash() const;

private:
    int n_ = 0;
    std::vector<std::pair<int, int>> edges_; // canonical: (lo, hi), sorted
    std::vector<std::vector<int>> adj_;      // sorted neighbor lists
    int max_degree_ = 0;
};

bool is_connected(const Graph& g);

// Erdos-Renyi G(n, p): every unordered pair {i, j} is an edge
// independently with probability p; pairs are scanned in lexicographic
// order so a seed pins the sample. With require_connected, disconnected
// samples are discarded and the next draw continues on the same stream;
// throws NumericalError after max_resamples failures.
Graph generate_er(int n, double p, std::uint64_t seed, bool require_connected,
                  int max_resamples = 1000);

// Watts-Strogatz: ring lattice with `nei` neighbors on each side, then
// each lattice edge (i, i+j) is rewired with probability p_rewire to a
// uniformly random non-self, non-duplicate target. Preserves |E| = n*nei.
Graph generate_ws(int n, int nei, double p_rewire, std::uint64_t seed);

Graph generate_complete(int n);

// Edge-list text format: first non-comment line is the node count N,
// then one "i j" pair per line with 0 <= i, j < N and i != j. '#'
// starts a comment; tokens are whitespace-separated.
Graph load_edgelist(const std::string& path);
void save_edgelist(const Graph& g, const std::string& path);

} // namespace netrates
