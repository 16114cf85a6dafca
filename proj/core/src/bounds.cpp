#include "dagvisit/bounds.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>

#include "dagvisit/oracles.hpp"

namespace dagvisit {

std::string to_string(BoundMetric m) {
    switch (m) {
        case BoundMetric::Write: return "write";
        case BoundMetric::Read: return "read";
        case BoundMetric::Total: return "total";
    }
    return "?";
}

std::string to_string(ModelVariant v) {
    switch (v) {
        case ModelVariant::Standard: return "standard";
        case ModelVariant::FreeInput: return "free-input";
        case ModelVariant::NoRecompute: return "no-recompute";
    }
    return "?";
}

void SegmentPartition::validate(int n) const {
    if (cuts.empty() || cuts.back() != n)
        throw dag_error("segment partition must end at the sequence length");
    int prev = 0;
    for (int c : cuts) {
        if (c <= prev || c > n) throw dag_error("segment partition cuts must increase to n");
        prev = c;
    }
}

namespace {

// Entering-boundary sizes of every segment in one sweep over the visit.
std::vector<long long> entering_sizes(const Dag& d_R, const VisitRule& r, const VisitSequence& v,
                                      const SegmentPartition& p) {
    r.check_target(d_R);
    const int n = static_cast<int>(v.order.size());
    p.validate(n);
    std::vector<char> is_source(static_cast<size_t>(d_R.n()), 0);
    for (Vertex x : d_R.inputs()) is_source[static_cast<size_t>(x)] = 1;

    std::vector<long long> sizes;
    std::vector<char> visited(static_cast<size_t>(d_R.n()), 0);
    std::vector<char> in_boundary(static_cast<size_t>(d_R.n()), 0);
    int prev = 0;
    for (int cut : p.cuts) {
        // in_boundary currently reflects the prefix before `prev`.
        long long count = 0;
        for (int i = prev; i < cut; ++i) {
            Vertex x = v.order[static_cast<size_t>(i)];
            if (is_source[static_cast<size_t>(x)] || in_boundary[static_cast<size_t>(x)]) ++count;
        }
        sizes.push_back(count);
        for (int i = prev; i < cut; ++i) {
            Vertex x = v.order[static_cast<size_t>(i)];
            visited[static_cast<size_t>(x)] = 1;
            in_boundary[static_cast<size_t>(x)] = 0;
            for (Vertex w : d_R.succs(x))
                if (!visited[static_cast<size_t>(w)] && !in_boundary[static_cast<size_t>(w)] &&
                    r.has_nonempty_enabler_in(d_R, w, visited))
                    in_boundary[static_cast<size_t>(w)] = 1;
        }
        prev = cut;
    }
    return sizes;
}

}  // namespace

PartitionBound write_bound_for_partition(const Dag& d_R, const VisitRule& r,
                                         const VisitSequence& v, const SegmentPartition& p,
                                         int M) {
    auto check = is_r_sequence(d_R, r, v);
    if (!check.ok || !v.complete(d_R))
        throw dag_error("write_bound_for_partition: not an r-visit of d_R");
    PartitionBound out;
    for (long long s : entering_sizes(d_R, r, v, p)) {
        long long term = std::max(0LL, s - M);
        out.per_segment.push_back(term);
        out.value += term;
    }
    return out;
}

PartitionBound read_bound_for_partition(const Dag& d_R, const VisitSequence& v,
                                        const SegmentPartition& p, int M) {
    const int n = static_cast<int>(v.order.size());
    p.validate(n);
    PartitionBound out;
    int prev = 0;
    for (int cut : p.cuts) {
        VertexSet seg(v.order.begin() + prev, v.order.begin() + cut);
        long long pd = min_post_dominator(d_R, vset::from_unsorted(seg)).size;
        long long term = std::max(0LL, pd - M);
        out.per_segment.push_back(term);
        out.value += term;
        prev = cut;
    }
    return out;
}

BestPartition best_partition(const Dag& d_R, const VisitRule& r, const VisitSequence& v, int M,
                             BoundMetric metric) {
    auto check = is_r_sequence(d_R, r, v);
    if (!check.ok || !v.complete(d_R)) throw dag_error("best_partition: not an r-visit of d_R");
    const int n = d_R.n();
    const long long NEG = std::numeric_limits<long long>::min() / 4;
    const long long delta = static_cast<long long>(d_R.outputs().size()) -
                            static_cast<long long>(d_R.inputs().size());  // |I(G)| - |O(G)|

    // Boundary marks after each prefix i (0..n), plus source marks.
    std::vector<char> is_base(static_cast<size_t>(n), 0);
    for (Vertex x : d_R.inputs()) is_base[static_cast<size_t>(x)] = 1;
    std::vector<std::vector<char>> entering(static_cast<size_t>(n + 1));
    {
        std::vector<char> visited(static_cast<size_t>(n), 0);
        std::vector<char> in_boundary(static_cast<size_t>(n), 0);
        for (int i = 0; i <= n; ++i) {
            entering[static_cast<size_t>(i)].resize(static_cast<size_t>(n));
            for (int x = 0; x < n; ++x)
                entering[static_cast<size_t>(i)][static_cast<size_t>(x)] =
                    static_cast<char>(is_base[static_cast<size_t>(x)] ||
                                      in_boundary[static_cast<size_t>(x)]);
            if (i == n) break;
            Vertex x = v.order[static_cast<size_t>(i)];
            visited[static_cast<size_t>(x)] = 1;
            in_boundary[static_cast<size_t>(x)] = 0;
            for (Vertex w : d_R.succs(x))
                if (!visited[static_cast<size_t>(w)] && !in_boundary[static_cast<size_t>(w)] &&
                    r.has_nonempty_enabler_in(d_R, w, visited))
                    in_boundary[static_cast<size_t>(w)] = 1;
        }
    }
    auto wterm = [&](int i, int j) {
        long long c = 0;
        for (int t = i; t < j; ++t)
            if (entering[static_cast<size_t>(i)][static_cast<size_t>(v.order[static_cast<size_t>(t)])])
                ++c;
        return std::max(0LL, c - M);
    };
    const bool need_read = metric != BoundMetric::Write;
    std::map<std::pair<int, int>, long long> pd_cache;
    auto rterm = [&](int i, int j) {
        auto key = std::make_pair(i, j);
        auto it = pd_cache.find(key);
        if (it != pd_cache.end()) return it->second;
        VertexSet seg(v.order.begin() + i, v.order.begin() + j);
        long long pd = min_post_dominator(d_R, vset::from_unsorted(seg)).size;
        long long term = std::max(0LL, pd - M);
        pd_cache[key] = term;
        return term;
    };

    // Interval DPs; predecessors recorded for witness reconstruction.
    std::vector<long long> W(static_cast<size_t>(n + 1), NEG), R(static_cast<size_t>(n + 1), NEG);
    std::vector<long long> A(static_cast<size_t>(n + 1), NEG), B2(static_cast<size_t>(n + 1), NEG);
    std::vector<int> pw(static_cast<size_t>(n + 1), -1), pa(static_cast<size_t>(n + 1), -1),
        pb(static_cast<size_t>(n + 1), -1), pr(static_cast<size_t>(n + 1), -1);
    W[0] = R[0] = A[0] = B2[0] = 0;
    for (int j = 1; j <= n; ++j)
        for (int i = 0; i < j; ++i) {
            long long w = wterm(i, j);
            long long rr = need_read ? rterm(i, j) : 0;
            if (W[static_cast<size_t>(i)] + w > W[static_cast<size_t>(j)]) {
                W[static_cast<size_t>(j)] = W[static_cast<size_t>(i)] + w;
                pw[static_cast<size_t>(j)] = i;
            }
            if (need_read && R[static_cast<size_t>(i)] + rr > R[static_cast<size_t>(j)]) {
                R[static_cast<size_t>(j)] = R[static_cast<size_t>(i)] + rr;
                pr[static_cast<size_t>(j)] = i;
            }
            if (metric == BoundMetric::Total) {
                if (A[static_cast<size_t>(i)] + w + rr > A[static_cast<size_t>(j)]) {
                    A[static_cast<size_t>(j)] = A[static_cast<size_t>(i)] + w + rr;
                    pa[static_cast<size_t>(j)] = i;
                }
                if (B2[static_cast<size_t>(i)] + 2 * w > B2[static_cast<size_t>(j)]) {
                    B2[static_cast<size_t>(j)] = B2[static_cast<size_t>(i)] + 2 * w;
                    pb[static_cast<size_t>(j)] = i;
                }
            }
        }

    auto reconstruct = [&](const std::vector<int>& parent) {
        SegmentPartition p;
        for (int j = n; j > 0; j = parent[static_cast<size_t>(j)]) p.cuts.push_back(j);
        std::reverse(p.cuts.begin(), p.cuts.end());
        return p;
    };

    BestPartition out;
    switch (metric) {
        case BoundMetric::Write:
            out.partition = reconstruct(pw);
            out.value = W[static_cast<size_t>(n)];
            out.write_part = out.value;
            out.independent_value = out.value;
            break;
        case BoundMetric::Read:
            out.partition = reconstruct(pr);
            out.value = R[static_cast<size_t>(n)];
            out.read_part = out.value;
            out.independent_value = out.value;
            break;
        case BoundMetric::Total: {
            long long via_a = A[static_cast<size_t>(n)];
            long long via_b = B2[static_cast<size_t>(n)] + delta;
            if (via_a >= via_b)
                out.partition = reconstruct(pa);
            else
                out.partition = reconstruct(pb);
            out.value = std::max(via_a, via_b);
            out.write_part =
                write_bound_for_partition(d_R, r, v, out.partition, M).value;
            out.read_part = read_bound_for_partition(d_R, v, out.partition, M).value;
            long long ws = W[static_cast<size_t>(n)], rs = R[static_cast<size_t>(n)];
            out.independent_value = ws + std::max(rs, ws + delta);
            break;
        }
    }
    return out;
}

long long diamond_lower_bound(int q, int b, long long M, long long L) {
    if (q < 2 || b < 1 || M < 1 || L < 1) throw dag_error("diamond_lower_bound: bad parameters");
    long long side = (2 * M + q - 2 + (q - 2)) / (q - 1);  // ceil((2M+q-2)/(q-1))
    long long a = b / side;
    return a * a * M / L;
}

SegmentPartition diamond_witness_partition(const Dag& d_R, const BlockedVisit& bv, int M) {
    (void)M;
    const int n = d_R.n();
    if (!bv.visit.sequence.complete(d_R))
        throw dag_error("diamond_witness_partition: visit does not cover d_R");
    std::vector<int> cuts;
    for (int t : bv.first_diagonal_step)
        if (t > 0) cuts.push_back(t);
    std::sort(cuts.begin(), cuts.end());
    cuts.erase(std::unique(cuts.begin(), cuts.end()), cuts.end());
    if (cuts.empty() || cuts.back() != n) cuts.push_back(n);
    SegmentPartition p{cuts};
    p.validate(n);
    return p;
}

HongKungResult hong_kung_bound(const Dag& d, int M) {
    if (M < 1) throw dag_error("hong_kung_bound: M >= 1 required");
    Dag d_R = reverse(d);
    BuiltVisit top = build_topological_visit(d_R);
    const int n = d.n();
    HongKungResult out;
    VertexSet segment;
    std::vector<VertexSet> segments;
    for (int i = 0; i < n; ++i) {
        segment = vset::unite(segment, {top.sequence.order[static_cast<size_t>(i)]});
        bool close = i == n - 1;
        if (!close) {
            // Dominator of the segment in d equals its post-dominator in d_R.
            int dom = min_post_dominator(d_R, segment).size;
            int sms = static_cast<int>(minimum_set(d, segment).size());
            close = dom >= 2 * M || sms >= 2 * M;
        }
        if (close) {
            segments.push_back(segment);
            segment.clear();
        }
    }
    out.k = static_cast<int>(segments.size());
    out.bound = static_cast<long long>(M) * (out.k - 1);
    // The reversed segment order is a 2M-partition of d; verify (a)-(d).
    out.partition_sets.assign(segments.rbegin(), segments.rend());
    out.properties_ok = true;
    std::vector<int> owner(static_cast<size_t>(n), -1);
    for (size_t j = 0; j < out.partition_sets.size(); ++j)
        for (Vertex v : out.partition_sets[j]) {
            if (owner[static_cast<size_t>(v)] != -1) out.properties_ok = false;
            owner[static_cast<size_t>(v)] = static_cast<int>(j);
        }
    for (int v = 0; v < n; ++v)
        if (owner[static_cast<size_t>(v)] < 0) out.properties_ok = false;
    for (const auto& set : out.partition_sets) {
        if (min_dominator(d, set).size > 2 * M) out.properties_ok = false;
        if (static_cast<int>(minimum_set(d, set).size()) > 2 * M) out.properties_ok = false;
    }
    for (const auto& [u, v] : d.edge_list())
        if (owner[static_cast<size_t>(v)] < owner[static_cast<size_t>(u)])
            out.properties_ok = false;
    return out;
}

BoundReport variant_bound(long long W, long long R, int n_inputs, int n_outputs,
                          ModelVariant variant, BoundMetric metric, int M, int L) {
    BoundReport rep;
    rep.metric = metric;
    rep.variant = variant;
    rep.M = M;
    rep.L = L;
    rep.write_component = W;
    rep.read_component = R;
    const long long delta = static_cast<long long>(n_inputs) - n_outputs;
    long long value = 0;
    switch (variant) {
        case ModelVariant::Standard:
        case ModelVariant::NoRecompute:
            // NoRecompute uses the same combination over top-visit components.
            switch (metric) {
                case BoundMetric::Write: value = W; break;
                case BoundMetric::Read: value = std::max(R, W + delta); break;
                case BoundMetric::Total: value = W + std::max(R, W + delta); break;
            }
            break;
        case ModelVariant::FreeInput:
            switch (metric) {
                case BoundMetric::Write: value = W; break;
                case BoundMetric::Read: value = W - n_outputs; break;
                case BoundMetric::Total: value = 2 * W - n_outputs; break;
            }
            break;
    }
    rep.value = std::max(0LL, value) / L;
    return rep;
}

std::vector<CatalogEntry> closed_form_catalog(const FamilySpec& spec, int M, int L) {
    std::vector<CatalogEntry> out;
    const GeneratedDag g = generate(spec);
    const double n = g.dag.n();
    const double dout = g.dag.max_out_degree();
    const double depth = topological_depth(g.dag);
    out.push_back({"n", n});
    out.push_back({"depth", depth});
    out.push_back({"universal-depth-bound", depth == 0 ? 0.0 : (dout - 1) * depth + 1});
    out.push_back({"universal-singleton-bound", 4 * (std::sqrt(2.0) + 1) * std::sqrt(dout * n)});
    double topo = dout <= 0 ? 0.0 : (dout == 1 ? 1.0 : (dout - 1) / std::log2(dout) * std::log2(n) + 1);
    out.push_back({"universal-topological-bound", topo});
    std::visit(
        [&](const auto& s) {
            using T = std::decay_t<decltype(s)>;
            if constexpr (std::is_same_v<T, PyramidSpec> ||
                          std::is_same_v<T, ReversePyramidSpec>) {
                out.push_back({"pebbling-lower-bound", double((s.q - 1) * (s.b - 1))});
            } else if constexpr (std::is_same_v<T, TreeSpec>) {
                out.push_back({"pebbling-lower-bound", double((s.q - 1) * s.levels)});
            } else if constexpr (std::is_same_v<T, DiamondSpec>) {
                out.push_back(
                    {"diamond-io-lower", double(diamond_lower_bound(s.q, s.b, M, L))});
                if (s.q == 2 && M >= 2) {
                    long long bstar = (M - 1) / (s.q - 1) + 1;
                    long long per_side = (s.b + bstar - 1) / bstar;
                    out.push_back({"diamond-astar-upper", double(4LL * M * per_side * per_side)});
                    out.push_back({"diamond-astar-upper-asymptotic",
                                   double(s.b) * s.b * s.q * s.q / (M + s.q)});
                }
            } else if constexpr (std::is_same_v<T, ChainArborescenceSpec>) {
                out.push_back({"singleton-boundary", 2.0});
                out.push_back({"topological-boundary", std::log2(n + 2) - 1});
            }
        },
        spec);
    return out;
}

}  // namespace dagvisit
