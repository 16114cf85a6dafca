#pragma once

#include "dagvisit/bounds.hpp"
#include "dagvisit/visit.hpp"

namespace dagvisit {
// Literal-definition evaluators kept independent of the main implementations;
// the verification suites compare the two routes.
namespace bruteforce {

/// Scans every vertex and every enabler directly.
VertexSet boundary_by_definition(const Dag& d, const VisitRule& r, const VertexSet& visited);

/// DFS over all r-visits, minimizing the max prefix boundary.
int boundary_complexity_by_enumeration(const Dag& d, const VisitRule& r);

/// Reach by exhaustive search over extension states (quantifier definition).
VertexSet enabled_reach_by_search(const Dag& d, const VisitRule& r, const VisitSequence& s,
                                  Vertex v);

/// Smallest subset of vertices meeting every X-to-output path.
int min_post_dominator_exhaustive(const Dag& d, const VertexSet& X);
int min_dominator_exhaustive(const Dag& d, const VertexSet& X);

/// Smallest k over all sequences of S-feasible closed extensions.
int min_s_partition_exhaustive(const Dag& d, int S);

/// Max over all 2^(n-1) segment partitions, literal per-segment evaluation.
long long best_write_partition_exhaustive(const Dag& d_R, const VisitRule& r,
                                          const VisitSequence& v, int M);
long long best_read_partition_exhaustive(const Dag& d_R, const VisitSequence& v, int M);

}  // namespace bruteforce
}  // namespace dagvisit
