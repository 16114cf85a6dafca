#pragma once

#include "dagvisit/families.hpp"
#include "dagvisit/visit.hpp"

namespace dagvisit {

enum class StepKind { Compute, Read, Write };

struct IoStep {
    StepKind op;
    Vertex v;
};

/// Two-level memory trace: cache of M words, unbounded slow memory, inputs
/// initially in slow memory, outputs in slow memory at the end.
struct IoComputation {
    std::vector<IoStep> steps;
    int M = 0;
};

struct ModelViolation {
    std::string kind;  // capacity | missing-operand | cold-read | missing-output | ...
    int step = -1;
    Vertex v = -1;
    std::string detail;
};

struct ComputationReport {
    bool ok = true;
    std::vector<ModelViolation> violations;
    int peak_occupancy = 0;
};

/// Simulates cache/slow state with free evictions: a value occupies cache
/// from each placement until its last use before the next placement, and a
/// compute may retire its dead operands in the same transition.
ComputationReport validate_computation(const Dag& d, const IoComputation& c);

struct IoCounts {
    long long reads = 0;
    long long writes = 0;
    long long total = 0;
};

IoCounts io_counts(const IoComputation& c);

enum class PebbleOp { Place, Remove };

struct PebbleStep {
    PebbleOp op;
    Vertex v;
};

/// Black pebble game: Place(v) needs all predecessors pebbled (inputs are
/// placeable anytime), pebbles are removable anytime, every output must be
/// pebbled at least once. No sliding moves.
struct PebbleSchedule {
    std::vector<PebbleStep> steps;
    int budget = 0;  // max simultaneous pebbles
};

struct PebbleReport {
    bool ok = true;
    std::vector<ModelViolation> violations;
    int peak = 0;
};

PebbleReport validate_pebbling(const Dag& d, const PebbleSchedule& s);

struct DerivedVisit {
    VisitSequence visit;       // r-visit of reverse(d)
    std::vector<int> step_of;  // alignment: visit position -> trace step index
};

/// Backward scan of a valid computation; yields a complete r-visit of
/// reverse(d) for any rule r on reverse(d).
DerivedVisit computation_to_visit(const Dag& d, const VisitRule& r_on_reverse,
                                  const IoComputation& c);

/// Same backward scheme over Place steps of a complete pebbling.
DerivedVisit pebbling_to_visit(const Dag& d, const VisitRule& r_on_reverse,
                               const PebbleSchedule& s);

/// Back-to-front replay of a visit of reverse(d) into a complete pebbling of
/// d whose last-pebbling order reverses the visit.
PebbleSchedule visit_to_pebbling(const Dag& d, const VisitRule& r_on_reverse,
                                 const VisitSequence& v);

struct AstarStats {
    int block_side = 0;
    int blocks = 0;
    long long max_block_io = 0;
    int max_cross_writes = 0;  // per-block vertices with a successor outside
    int max_cross_reads = 0;   // per-block external predecessors loaded
};

/// Blocked diamond evaluation: side-b* sub-blocks with b* = (M-1)/(q-1) + 1,
/// computed block-by-block, layer-by-layer, external operands read on demand
/// and dropped after their last local use. q = 2 only.
IoComputation run_diamond_astar(int q, int b, int M, AstarStats* stats = nullptr);

enum class EvictionPolicy { FurthestNextUse, Lru };

/// Computes vertices in the given topological order with an explicit cache,
/// writing values that are still needed (or outputs) before eviction.
IoComputation greedy_computation(const Dag& d, const VisitSequence& order, int M,
                                 EvictionPolicy policy = EvictionPolicy::FurthestNextUse);

}  // namespace dagvisit
