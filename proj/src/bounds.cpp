#include "netrates/bounds.hpp"

#include <bit>
#include <unordered_set>

#include "netrates/errors.hpp"

namespace netrates {

namespace {

BigInt binomial(long long n, long long k) {
    if (k < 0 || k > n) return 0;
    k = std::min(k, n - k);
    BigInt r = 1;
    for (long long i = 1; i <= k; ++i) {
        r *= n - k + i;
        r /= i;
    }
    return r;
}

} // namespace

BigInt bound_contact(long long n) {
    if (n < 1) throw DataError("bound_contact: n must be >= 1");
    const BigInt nn = n;
    return (nn + 1) * (nn * nn - nn + 6) / 6;
}

BigInt bound_contact_dmax(long long n, long long dmax) {
    if (n < 1) throw DataError("bound_contact_dmax: n must be >= 1");
    if (dmax < 0 || dmax > n - 1) throw DataError("bound_contact_dmax: dmax must be in [0, n-1]");
    BigInt total = 0;
    for (long long s = 0; s <= n; ++s) total += BigInt(s) * std::min(n - s, dmax) + 1;
    return total;
}

BigInt bound_complete(long long n) {
    if (n < 1) throw DataError("bound_complete: n must be >= 1");
    return BigInt(n) + 1;
}

BigInt bound_reversible(long long n) {
    if (n < 1) throw DataError("bound_reversible: n must be >= 1");
    return BigInt(1) << n;
}

BigInt bound_reversible_dmax(long long n, long long dmax) {
    if (n < 1) throw DataError("bound_reversible_dmax: n must be >= 1");
    if (dmax < 0 || dmax > n - 1)
        throw DataError("bound_reversible_dmax: dmax must be in [0, n-1]");
    BigInt total = 0;
    for (long long s = 0; s <= n - dmax; ++s) total += binomial(dmax + s, s);
    for (long long s = n - dmax + 1; s <= n; ++s) total += binomial(n, s);
    return total;
}

ClassCensus enumerate_classes(const Graph& g, Model model, int max_nodes) {
    const int n = g.num_nodes();
    if (n > max_nodes)
        throw DataError("enumerate_classes: n exceeds the enumeration cap of " +
                        std::to_string(max_nodes));

    // Gray-code walk: configuration k and k+1 differ in bit ctz(k+1),
    // so the tracker advances by single flips.
    StateTracker st(g, Configuration(n));
    std::unordered_set<HoldingSignature, SignatureHash> seen;
    const std::uint64_t total = std::uint64_t{1} << n;
    seen.reserve(static_cast<std::size_t>(std::min<std::uint64_t>(total, 1u << 16)));
    seen.insert(st.signature(model));
    for (std::uint64_t k = 1; k < total; ++k) {
        st.flip(std::countr_zero(k));
        seen.insert(st.signature(model));
    }

    ClassCensus census;
    census.n = n;
    census.model = model;
    census.k_exact = seen.size();
    const int dmax = g.max_degree();
    const bool complete = g.num_edges() == static_cast<std::size_t>(n) * (n - 1) / 2;
    if (model == Model::Contact)
        census.k_bound = complete ? bound_complete(n) : bound_contact_dmax(n, dmax);
    else
        census.k_bound = bound_reversible_dmax(n, dmax);
    census.ratio = static_cast<double>(census.k_exact) / static_cast<double>(total);
    return census;
}

} // namespace netrates
