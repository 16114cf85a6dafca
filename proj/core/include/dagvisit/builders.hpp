#pragma once

#include "dagvisit/visit.hpp"

namespace dagvisit {

struct BuiltVisit {
    VisitSequence sequence;
    int achieved_boundary = 0;
    double guarantee = 0.0;
    std::vector<std::string> trace;  // recursion log: blocks, levels, pivots
};

/// Any-rule construction peeling enabled reaches off source vertices.
/// Guarantee: (d_out - 1) * depth + 1, or 0 for edgeless graphs.
BuiltVisit build_depth_visit(const Dag& d, const VisitRule& r);

/// Singleton-rule construction via bottleneck levels and blocks.
/// Guarantee: 4 (sqrt(2) + 1) sqrt(d_out * n).
BuiltVisit build_singleton_visit(const Dag& d);

/// Topological-rule construction choosing minimum enabled reaches.
/// Guarantee: 0 / 1 for d_out in {0, 1}; else (D-1)/log2(D) * log2(n) + 1.
BuiltVisit build_topological_visit(const Dag& d);

struct BlockedVisit {
    BuiltVisit visit;
    int side = 0;                          // block side s
    VisitRule rule;                        // DiamondBlocked{s} on d_R
    std::vector<int> block_of;             // vertex -> block id
    std::vector<int> block_order;          // block ids in visit order
    std::vector<int> first_diagonal_step;  // per block-order slot, 0-based step; -1 if none
};

/// DiamondBlocked visit of a reverse q=2 diamond: sub-diamonds of side
/// ceil((2M+q-2)/(q-1)) visited block-by-block in dependency order.
BlockedVisit build_diamond_blocked_visit(const GeneratedDag& d_R, int M);

}  // namespace dagvisit
