#pragma once

#include <boost/multiprecision/cpp_int.hpp>
#include <cstdint>

#include "netrates/dynamics.hpp"

namespace netrates {

using BigInt = boost::multiprecision::cpp_int;

// Contact process on any N-node graph: K <= (N+1)(N^2 - N + 6)/6.
BigInt bound_contact(long long n);

// Degree-bounded refinement: sum over s of s*min(N-s, dmax) + 1.
// Equals bound_contact(n) at dmax = n-1.
BigInt bound_contact_dmax(long long n, long long dmax);

// Complete graph: exactly N+1 holding classes.
BigInt bound_complete(long long n);

// Reversible contact process: K <= 2^N.
BigInt bound_reversible(long long n);

// Degree-bounded refinement via combinations with replacement:
// sum_{s=0}^{N-dmax} C(dmax+s, s) + sum_{s=N-dmax+1}^{N} C(N, s).
// Equals 2^N at dmax = n-1.
BigInt bound_reversible_dmax(long long n, long long dmax);

struct ClassCensus {
    int n = 0;
    Model model = Model::Contact;
    std::uint64_t k_exact = 0;
    BigInt k_bound;  // tightest applicable analytic bound
    double ratio = 0.0; // k_exact / 2^n
};

// Exact class count by visiting all 2^n configurations in Gray-code
// order with incremental signature updates. Throws DataError above
// max_nodes (default 20).
ClassCensus enumerate_classes(const Graph& g, Model model, int max_nodes = 20);

} // namespace netrates
