#pragma once

#include <atomic>
#include <chrono>

#include "dagvisit/bounds.hpp"
#include "dagvisit/machine.hpp"
#include "dagvisit/maxflow.hpp"

namespace dagvisit {

class limit_error : public dag_error {
public:
    explicit limit_error(const std::string& what) : dag_error(what) {}
};

struct OracleLimits {
    int max_n_subset_dp = 22;
    int max_n_pebbling = 10;
    int max_n_visit_partition = 12;
    int time_budget_ms = 60000;

    /// Reads DAGVISIT_LIMITS="subset=22,pebble=10,viopt=12,ms=60000".
    static OracleLimits from_env();
};

struct CancelToken {
    std::chrono::steady_clock::time_point deadline{};
    const std::atomic<bool>* cancelled = nullptr;

    static CancelToken with_budget_ms(int ms);
    bool expired() const;
    void check(const char* where) const;  // throws limit_error when expired
};

struct BoundaryComplexityResult {
    int value = 0;
    VisitSequence witness;
};

/// Min over r-visits of the max prefix boundary, by bottleneck DP over the
/// subset lattice (boundary depends on the visited set alone).
BoundaryComplexityResult exact_boundary_complexity(const Dag& d, const VisitRule& r,
                                                   const OracleLimits& limits = {});

struct PebblingResult {
    int number = 0;
    PebbleSchedule witness;
};

/// Smallest budget admitting a complete black pebbling, by iterative
/// deepening over budgets with BFS over (pebbled set, satisfied outputs).
PebblingResult exact_pebbling_number(const Dag& d, const OracleLimits& limits = {});

struct CutResult {
    int size = 0;
    VertexSet witness;
};

/// Minimum vertex set meeting every directed path from X to an output
/// (cutting at X itself allowed; X-outputs are forced).
CutResult min_post_dominator(const Dag& d, const VertexSet& X);
/// Mirror with inputs: min_post_dominator on reverse(d).
CutResult min_dominator(const Dag& d, const VertexSet& X);

/// { v in X : succs(v) and X are disjoint }.
VertexSet minimum_set(const Dag& d, const VertexSet& X);

/// Minimum k admitting an S-partition (V_1..V_k): disjoint cover, dominator
/// and minimum set of each V_j at most S, no back edges to earlier sets.
int min_s_partition_k(const Dag& d, int S, const OracleLimits& limits = {});

struct PathSystem {
    int count = 0;
    std::vector<VertexList> paths;
};

/// Max number of source-to-sink paths pairwise vertex-disjoint outside
/// shared_allowed.
PathSystem max_disjoint_paths(const Dag& d, const VertexSet& sources, const VertexSet& sinks,
                              const VertexSet& shared_allowed);

/// Min over r-visits of reverse(d) of the best-partition metric value, by
/// DFS over r-sequences with branch-and-bound on closed prefix segments.
/// restrict_to_top narrows the search to topological visits of reverse(d)
/// while keeping the rule-r boundary (the no-recompute model).
long long exact_visit_partition_bound(const Dag& d, const VisitRule& r_on_reverse, int M,
                                      BoundMetric metric, const OracleLimits& limits = {},
                                      bool restrict_to_top = false);

}  // namespace dagvisit
