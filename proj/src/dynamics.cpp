#include "netrates/dynamics.hpp"

#include <bit>

#include "netrates/errors.hpp"

namespace netrates {

std::string model_name(Model m) {
    return m == Model::Contact ? "contact" : "reversible";
}

Model model_from_name(const std::string& name) {
    if (name == "contact") return Model::Contact;
    if (name == "reversible") return Model::ReversibleContact;
    throw DataError("unknown model: " + name);
}

void ModelParams::validate() const {
    if (!(mu >= 0.0) || !(beta >= 0.0) || !(delta >= 0.0))
        throw std::invalid_argument("rates must be nonnegative and finite");
    if (model == Model::ReversibleContact && (mu <= 0.0 || beta <= 0.0 || delta <= 0.0))
        throw std::invalid_argument("reversible model requires mu, beta, delta > 0");
}

Configuration Configuration::from_string(const std::string& bits) {
    Configuration x(static_cast<int>(bits.size()));
    for (int i = 0; i < x.n_; ++i) {
        const char c = bits[static_cast<std::size_t>(i)];
        if (c == '1')
            x.set(i, true);
        else if (c != '0')
            throw DataError("configuration string must be 0/1 bits");
    }
    return x;
}

int Configuration::infected_count() const {
    int total = 0;
    for (std::uint64_t w : words_) total += std::popcount(w);
    return total;
}

std::string Configuration::to_string() const {
    std::string s(static_cast<std::size_t>(n_), '0');
    for (int i = 0; i < n_; ++i)
        if (get(i)) s[static_cast<std::size_t>(i)] = '1';
    return s;
}

int infected_neighbor_count(const Graph& g, const Configuration& x, int k) {
    if (k < 0 || k >= g.num_nodes()) throw DataError("node out of range");
    int m = 0;
    for (int u : g.neighbors(k)) m += x.get(u) ? 1 : 0;
    return m;
}

double pow_int(double base, int e) {
    double r = 1.0;
    for (int i = 0; i < e; ++i) r *= base;
    return r;
}

double infection_rate(const ModelParams& p, int m) {
    if (p.model == Model::Contact) return p.beta + p.delta * static_cast<double>(m);
    return p.beta * pow_int(p.delta, m);
}

std::vector<Transition> enumerate_transitions(const Graph& g, const Configuration& x,
                                              const ModelParams& p) {
    p.validate();
    const int n = g.num_nodes();
    std::vector<Transition> out;
    out.reserve(static_cast<std::size_t>(n));
    for (int v = 0; v < n; ++v) {
        if (x.get(v))
            out.push_back({v, false, p.mu});
        else
            out.push_back({v, true, infection_rate(p, infected_neighbor_count(g, x, v))});
    }
    return out;
}

double holding_rate(const Graph& g, const Configuration& x, const ModelParams& p) {
    p.validate();
    double total = 0.0;
    for (int v = 0; v < g.num_nodes(); ++v) {
        if (x.get(v))
            total += p.mu;
        else
            total += infection_rate(p, infected_neighbor_count(g, x, v));
    }
    return total;
}

bool HoldingSignature::operator<(const HoldingSignature& other) const {
    if (model != other.model) return model < other.model;
    if (susceptible != other.susceptible) return susceptible < other.susceptible;
    if (m_total != other.m_total) return m_total < other.m_total;
    return hist < other.hist;
}

std::size_t SignatureHash::operator()(const HoldingSignature& s) const {
    std::uint64_t h = 0xcbf29ce484222325ULL;
    auto mix = [&h](std::uint64_t v) {
        h ^= v;
        h *= 0x100000001b3ULL;
        h ^= h >> 32;
    };
    mix(static_cast<std::uint64_t>(s.model));
    mix(static_cast<std::uint64_t>(s.susceptible));
    mix(static_cast<std::uint64_t>(s.m_total));
    for (int c : s.hist) mix(static_cast<std::uint64_t>(c));
    return static_cast<std::size_t>(h);
}

HoldingSignature signature(const Graph& g, const Configuration& x, Model model) {
    const int n = g.num_nodes();
    HoldingSignature sig;
    sig.model = model;
    if (model == Model::ReversibleContact)
        sig.hist.assign(static_cast<std::size_t>(g.max_degree()) + 1, 0);
    for (int v = 0; v < n; ++v) {
        if (x.get(v)) continue;
        ++sig.susceptible;
        const int m = infected_neighbor_count(g, x, v);
        if (model == Model::Contact)
            sig.m_total += m;
        else
            ++sig.hist[static_cast<std::size_t>(m)];
    }
    return sig;
}

int theta_dim(Model model, int dmax) {
    return model == Model::Contact ? 3 : dmax + 2;
}

std::vector<double> theta_vector(const ModelParams& p, int dmax) {
    if (p.model == Model::Contact) return {p.mu, p.beta, p.delta};
    std::vector<double> theta(static_cast<std::size_t>(dmax) + 2);
    theta[0] = p.mu;
    for (int k = 0; k <= dmax; ++k) theta[static_cast<std::size_t>(k) + 1] = p.beta * pow_int(p.delta, k);
    return theta;
}

std::vector<double> feature_row(const HoldingSignature& sig, int n, int dmax) {
    if (sig.model == Model::Contact)
        return {static_cast<double>(n - sig.susceptible), static_cast<double>(sig.susceptible),
                static_cast<double>(sig.m_total)};
    std::vector<double> row(static_cast<std::size_t>(dmax) + 2, 0.0);
    row[0] = static_cast<double>(n - sig.susceptible);
    for (std::size_t j = 0; j < sig.hist.size(); ++j)
        row[j + 1] = static_cast<double>(sig.hist[j]);
    return row;
}

StateTracker::StateTracker(const Graph& g, Configuration x0) : g_(&g), x_(std::move(x0)) {
    const int n = g.num_nodes();
    if (x_.size() != n) throw DataError("configuration length does not match graph");
    m_.assign(static_cast<std::size_t>(n), 0);
    hist_.assign(static_cast<std::size_t>(g.max_degree()) + 1, 0);
    for (int v = 0; v < n; ++v) m_[static_cast<std::size_t>(v)] = infected_neighbor_count(g, x_, v);
    for (int v = 0; v < n; ++v) {
        if (x_.get(v)) continue;
        ++susceptible_;
        m_total_ += m_[static_cast<std::size_t>(v)];
        ++hist_[static_cast<std::size_t>(m_[static_cast<std::size_t>(v)])];
    }
}

void StateTracker::flip(int v) {
    const std::size_t vi = static_cast<std::size_t>(v);
    const int mv = m_[vi];
    if (x_.get(v)) {
        // v heals: joins the susceptible set, neighbors lose one infected neighbor
        x_.set(v, false);
        ++susceptible_;
        m_total_ += mv;
        ++hist_[static_cast<std::size_t>(mv)];
        for (int u : g_->neighbors(v)) {
            const std::size_t ui = static_cast<std::size_t>(u);
            if (!x_.get(u)) {
                --hist_[static_cast<std::size_t>(m_[ui])];
                ++hist_[static_cast<std::size_t>(m_[ui] - 1)];
                --m_total_;
            }
            --m_[ui];
        }
    } else {
        // v becomes infected: leaves the susceptible set, neighbors gain one
        x_.set(v, true);
        --susceptible_;
        m_total_ -= mv;
        --hist_[static_cast<std::size_t>(mv)];
        for (int u : g_->neighbors(v)) {
            const std::size_t ui = static_cast<std::size_t>(u);
            if (!x_.get(u)) {
                --hist_[static_cast<std::size_t>(m_[ui])];
                ++hist_[static_cast<std::size_t>(m_[ui] + 1)];
                ++m_total_;
            }
            ++m_[ui];
        }
    }
}

HoldingSignature StateTracker::signature(Model model) const {
    HoldingSignature sig;
    sig.model = model;
    sig.susceptible = susceptible_;
    if (model == Model::Contact)
        sig.m_total = m_total_;
    else
        sig.hist = hist_;
    return sig;
}

} // namespace netrates
