#pragma once

#include "dagvisit/builders.hpp"

namespace dagvisit {

enum class BoundMetric { Write, Read, Total };
enum class ModelVariant { Standard, FreeInput, NoRecompute };

std::string to_string(BoundMetric m);
std::string to_string(ModelVariant v);

/// Cut positions 0 < i_1 < ... < i_k = n into a visit; segment j is the
/// half-open index range (i_{j-1}, i_j] with i_0 = 0.
struct SegmentPartition {
    std::vector<int> cuts;

    static SegmentPartition whole(int n) { return {{n}}; }
    int segments() const { return static_cast<int>(cuts.size()); }
    void validate(int n) const;
};

struct PartitionBound {
    long long value = 0;
    std::vector<long long> per_segment;
};

/// Sum over segments of max{0, |entering boundary| - M}.
PartitionBound write_bound_for_partition(const Dag& d_R, const VisitRule& r,
                                         const VisitSequence& v, const SegmentPartition& p,
                                         int M);

/// Sum over segments of max{0, minimum post-dominator - M} (in d_R).
PartitionBound read_bound_for_partition(const Dag& d_R, const VisitSequence& v,
                                        const SegmentPartition& p, int M);

struct BestPartition {
    SegmentPartition partition;
    long long value = 0;              // optimal value of the requested metric
    long long write_part = 0;         // write term of the optimal shared partition
    long long read_part = 0;          // read term of the optimal shared partition
    long long independent_value = 0;  // W* + max{R*, W* + |I|-|O|} over separate partitions
};

/// Interval DP over cut positions. For Total the shared-partition expression
/// W + max{R, W + |I| - |O|} is optimized; the independently-maximized
/// combination is reported alongside.
BestPartition best_partition(const Dag& d_R, const VisitRule& r, const VisitSequence& v, int M,
                             BoundMetric metric);

/// floor(b / ceil((2M+q-2)/(q-1)))^2 * M / L, exact integer arithmetic.
long long diamond_lower_bound(int q, int b, long long M, long long L);

/// Cuts at the first diagonal step of each block of a blocked visit.
SegmentPartition diamond_witness_partition(const Dag& d_R, const BlockedVisit& bv, int M);

struct HongKungResult {
    int k = 0;
    long long bound = 0;  // M * (k - 1)
    std::vector<VertexSet> partition_sets;  // 2M-partition of d, first-computed first
    bool properties_ok = false;
};

/// Greedy segment closing on a topological visit of reverse(d); returns the
/// produced 2M-partition and the bound M (k - 1).
HongKungResult hong_kung_bound(const Dag& d, int M);

struct BoundReport {
    BoundMetric metric = BoundMetric::Total;
    ModelVariant variant = ModelVariant::Standard;
    long long value = 0;
    int M = 0;
    int L = 1;
    long long write_component = 0;
    long long read_component = 0;
};

/// Combines write/read components per the model variant; L divides with floor.
BoundReport variant_bound(long long W, long long R, int n_inputs, int n_outputs,
                          ModelVariant variant, BoundMetric metric, int M, int L);

struct CatalogEntry {
    std::string name;
    double value = 0;
};

/// Closed forms used by the acceptance harness (pebbling lower bounds,
/// universal visit bounds, diamond I/O bounds).
std::vector<CatalogEntry> closed_form_catalog(const FamilySpec& spec, int M, int L);

}  // namespace dagvisit
