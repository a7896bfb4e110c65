#include "netrates/graph.hpp"

#include <algorithm>
#include <deque>
#include <fstream>
#include <set>
#include <sstream>

#include "netrates/errors.hpp"
#include "netrates/rng.hpp"

namespace netrates {

Graph::Graph(int n, std::vector<std::pair<int, int>> edges) : n_(n) {
    if (n < 1) throw DataError("graph needs at least one node");
    adj_.resize(static_cast<std::size_t>(n));
    for (auto& [a, b] : edges) {
        if (a < 0 || a >= n || b < 0 || b >= n)
            throw DataError("edge endpoint out of range: " + std::to_string(a) + " " +
                            std::to_string(b));
        if (a == b) throw DataError("self-loop at node " + std::to_string(a));
        if (a > b) std::swap(a, b);
    }
    std::sort(edges.begin(), edges.end());
    if (std::adjacent_find(edges.begin(), edges.end()) != edges.end())
        throw DataError("duplicate edge in edge list");
    edges_ = std::move(edges);
    for (const auto& [a, b] : edges_) {
        adj_[static_cast<std::size_t>(a)].push_back(b);
        adj_[static_cast<std::size_t>(b)].push_back(a);
    }
    for (auto& nbrs : adj_) {
        std::sort(nbrs.begin(), nbrs.end());
        max_degree_ = std::max(max_degree_, static_cast<int>(nbrs.size()));
    }
}

bool Graph::has_edge(int a, int b) const {
    if (a < 0 || a >= n_ || b < 0 || b >= n_) return false;
    const auto& nbrs = neighbors(a);
    return std::binary_search(nbrs.begin(), nbrs.end(), b);
}

std::uint64_t Graph::hash() const {
    std::uint64_t h = 0xcbf29ce484222325ULL;
    auto mix = [&h](std::uint64_t v) {
        for (int i = 0; i < 8; ++i) {
            h ^= (v >> (8 * i)) & 0xffu;
            h *= 0x100000001b3ULL;
        }
    };
    mix(static_cast<std::uint64_t>(n_));
    for (const auto& [a, b] : edges_) {
        mix(static_cast<std::uint64_t>(a));
        mix(static_cast<std::uint64_t>(b));
    }
    return h;
}

bool is_connected(const Graph& g) {
    const int n = g.num_nodes();
    std::vector<char> seen(static_cast<std::size_t>(n), 0);
    std::deque<int> queue{0};
    seen[0] = 1;
    int found = 1;
    while (!queue.empty()) {
        const int v = queue.front();
        queue.pop_front();
        for (int u : g.neighbors(v)) {
            if (!seen[static_cast<std::size_t>(u)]) {
                seen[static_cast<std::size_t>(u)] = 1;
                ++found;
                queue.push_back(u);
            }
        }
    }
    return found == n;
}

Graph generate_er(int n, double p, std::uint64_t seed, bool require_connected,
                  int max_resamples) {
    if (n < 1) throw DataError("generate_er: n must be >= 1");
    if (p < 0.0 || p > 1.0) throw DataError("generate_er: p must be in [0,1]");
    Rng rng(seed);
    for (int attempt = 0; attempt < std::max(1, max_resamples); ++attempt) {
        std::vector<std::pair<int, int>> edges;
        for (int i = 0; i < n; ++i)
            for (int j = i + 1; j < n; ++j)
                if (rng.bernoulli(p)) edges.emplace_back(i, j);
        Graph g(n, std::move(edges));
        if (!require_connected || is_connected(g)) return g;
    }
    throw NumericalError("generate_er: no connected sample within " +
                         std::to_string(max_resamples) + " attempts");
}

Graph generate_ws(int n, int nei, double p_rewire, std::uint64_t seed) {
    if (n < 3) throw DataError("generate_ws: n must be >= 3");
    if (nei < 1 || nei > (n - 1) / 2)
        throw DataError("generate_ws: nei must be in [1, (n-1)/2]");
    if (p_rewire < 0.0 || p_rewire > 1.0)
        throw DataError("generate_ws: p_rewire must be in [0,1]");

    std::vector<std::set<int>> adj(static_cast<std::size_t>(n));
    auto connect = [&adj](int a, int b) {
        adj[static_cast<std::size_t>(a)].insert(b);
        adj[static_cast<std::size_t>(b)].insert(a);
    };
    auto disconnect = [&adj](int a, int b) {
        adj[static_cast<std::size_t>(a)].erase(b);
        adj[static_cast<std::size_t>(b)].erase(a);
    };

    for (int j = 1; j <= nei; ++j)
        for (int i = 0; i < n; ++i) connect(i, (i + j) % n);

    Rng rng(seed);
    for (int j = 1; j <= nei; ++j) {
        for (int i = 0; i < n; ++i) {
            if (!rng.bernoulli(p_rewire)) continue;
            // saturated node; no valid target remains
            if (static_cast<int>(adj[static_cast<std::size_t>(i)].size()) >= n - 1) continue;
            int w;
            do {
                w = static_cast<int>(rng.uniform_int(static_cast<std::uint64_t>(n)));
            } while (w == i || adj[static_cast<std::size_t>(i)].count(w));
            disconnect(i, (i + j) % n);
            connect(i, w);
        }
    }

    std::vector<std::pair<int, int>> edges;
    for (int i = 0; i < n; ++i)
        for (int u : adj[static_cast<std::size_t>(i)])
            if (i < u) edges.emplace_back(i, u);
    return Graph(n, std::move(edges));
}

Graph generate_complete(int n) {
    if (n < 1) throw DataError("generate_complete: n must be >= 1");
    std::vector<std::pair<int, int>> edges;
    edges.reserve(static_cast<std::size_t>(n) * (n - 1) / 2);
    for (int i = 0; i < n; ++i)
        for (int j = i + 1; j < n; ++j) edges.emplace_back(i, j);
    return Graph(n, std::move(edges));
}

namespace {

// Strips '#' comments and surrounding whitespace; empty result means
// the line carries no tokens.
std::string strip_line(const std::string& line) {
    std::string s = line.substr(0, line.find('#'));
    const auto first = s.find_first_not_of(" \t\r\n");
    if (first == std::string::npos) return "";
    const auto last = s.find_last_not_of(" \t\r\n");
    return s.substr(first, last - first + 1);
}

} // namespace

Graph load_edgelist(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw DataError("cannot open edge list: " + path);

    auto fail = [&path](int lineno, const std::string& msg) -> void {
        throw DataError(path + ":" + std::to_string(lineno) + ": " + msg);
    };

    int n = -1;
    std::vector<std::pair<int, int>> edges;
    std::set<std::pair<int, int>> seen;
    std::string raw;
    int lineno = 0;
    while (std::getline(in, raw)) {
        ++lineno;
        const std::string line = strip_line(raw);
        if (line.empty()) continue;
        std::istringstream ss(line);
        if (n < 0) {
            std::string extra;
            if (!(ss >> n) || n < 1 || (ss >> extra))
                fail(lineno, "expected node count");
            continue;
        }
        int a, b;
        std::string extra;
        if (!(ss >> a >> b) || (ss >> extra)) fail(lineno, "expected edge 'i j'");
        if (a < 0 || a >= n || b < 0 || b >= n)
            fail(lineno, "node index out of range [0," + std::to_string(n) + ")");
        if (a == b) fail(lineno, "self-loop at node " + std::to_string(a));
        auto key = std::minmax(a, b);
        if (!seen.insert(key).second)
            fail(lineno, "duplicate edge " + std::to_string(a) + " " + std::to_string(b));
        edges.emplace_back(a, b);
    }
    if (n < 0) throw DataError(path + ": missing node count line");
    return Graph(n, std::move(edges));
}

void save_edgelist(const Graph& g, const std::string& path) {
    std::ofstream out(path);
    if (!out) throw DataError("cannot write edge list: " + path);
    out << g.num_nodes() << "\n";
    for (const auto& [a, b] : g.edges()) out << a << " " << b << "\n";
    if (!out) throw DataError("write failed: " + path);
}

} // namespace netrates
