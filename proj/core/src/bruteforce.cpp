#include "dagvisit/bruteforce.hpp"

#include <algorithm>

#include "dagvisit/oracles.hpp"

namespace dagvisit {
namespace bruteforce {

VertexSet boundary_by_definition(const Dag& d, const VisitRule& r, const VertexSet& visited) {
    VertexSet out;
    for (int v = 0; v < d.n(); ++v) {
        if (vset::contains(visited, v)) continue;
        for (const VertexSet& q : r.enablers(d, v))
            if (!q.empty() && vset::is_subset(q, visited)) {
                out.push_back(v);
                break;
            }
    }
    return out;
}

namespace {

void enumerate_visits(const Dag& d, const VisitRule& r, VertexSet& visited, int prefix_max,
                      int& best) {
    if (static_cast<int>(visited.size()) == d.n()) {
        best = std::min(best, prefix_max);
        return;
    }
    if (prefix_max >= best) return;  // cannot improve
    for (int v = 0; v < d.n(); ++v) {
        if (vset::contains(visited, v)) continue;
        bool enabled = false;
        for (const VertexSet& q : r.enablers(d, v))
            if (vset::is_subset(q, visited)) {
                enabled = true;
                break;
            }
        if (!enabled) continue;
        VertexSet next = vset::unite(visited, {v});
        int b = static_cast<int>(boundary_by_definition(d, r, next).size());
        enumerate_visits(d, r, next, std::max(prefix_max, b), best);
    }
}

}  // namespace

int boundary_complexity_by_enumeration(const Dag& d, const VisitRule& r) {
    int best = d.n() + 1;
    VertexSet visited;
    enumerate_visits(d, r, visited, 0, best);
    if (best > d.n()) throw dag_error("no complete r-visit exists");
    return best;
}

VertexSet enabled_reach_by_search(const Dag& d, const VisitRule& r, const VisitSequence& s,
                                  Vertex v) {
    if (!s.contains(v)) throw dag_error("enabled_reach_by_search: v not in sequence");
    VertexSet des = descendants(d, v);
    VertexSet base = vset::from_unsorted(s.order);
    // Explore every extension state (set of visited descendants); a vertex is
    // in the reach when some reachable state can append it.
    std::vector<VertexSet> stack{{}};
    std::vector<VertexSet> seen{{}};
    VertexSet reach;
    while (!stack.empty()) {
        VertexSet ext = stack.back();
        stack.pop_back();
        VertexSet visited = vset::unite(base, ext);
        for (Vertex u : des) {
            if (vset::contains(ext, u) || vset::contains(base, u)) continue;
            bool enabled = false;
            for (const VertexSet& q : r.enablers(d, u))
                if (vset::is_subset(q, visited)) {
                    enabled = true;
                    break;
                }
            if (!enabled) continue;
            if (!vset::contains(reach, u)) reach = vset::unite(reach, {u});
            VertexSet next = vset::unite(ext, {u});
            if (std::find(seen.begin(), seen.end(), next) == seen.end()) {
                seen.push_back(next);
                stack.push_back(next);
            }
        }
    }
    return reach;
}

namespace {

bool cuts_all_paths(const Dag& d, const VertexSet& X, const VertexSet& cut) {
    // A path from X to an output avoiding `cut` disproves the candidate.
    std::vector<char> blocked(static_cast<size_t>(d.n()), 0);
    for (Vertex v : cut) blocked[static_cast<size_t>(v)] = 1;
    std::vector<char> seen(static_cast<size_t>(d.n()), 0);
    VertexList stack;
    for (Vertex v : X)
        if (!blocked[static_cast<size_t>(v)]) {
            if (d.succs(v).empty()) return false;  // length-0 path to an output
            seen[static_cast<size_t>(v)] = 1;
            stack.push_back(v);
        }
    while (!stack.empty()) {
        Vertex u = stack.back();
        stack.pop_back();
        for (Vertex w : d.succs(u)) {
            if (blocked[static_cast<size_t>(w)] || seen[static_cast<size_t>(w)]) continue;
            if (d.succs(w).empty()) return false;
            seen[static_cast<size_t>(w)] = 1;
            stack.push_back(w);
        }
    }
    return true;
}

}  // namespace

int min_post_dominator_exhaustive(const Dag& d, const VertexSet& X) {
    if (X.empty()) return 0;
    const int n = d.n();
    if (n > 20) throw dag_error("exhaustive post-dominator limited to n <= 20");
    for (int size = 0; size <= n; ++size) {
        // All subsets of the given size.
        std::vector<int> idx(static_cast<size_t>(size));
        for (int i = 0; i < size; ++i) idx[static_cast<size_t>(i)] = i;
        for (;;) {
            VertexSet cut(idx.begin(), idx.end());
            if (cuts_all_paths(d, X, cut)) return size;
            int i = size - 1;
            while (i >= 0 && idx[static_cast<size_t>(i)] == n - size + i) --i;
            if (i < 0) break;
            ++idx[static_cast<size_t>(i)];
            for (int j = i + 1; j < size; ++j)
                idx[static_cast<size_t>(j)] = idx[static_cast<size_t>(j - 1)] + 1;
        }
    }
    return n;
}

int min_dominator_exhaustive(const Dag& d, const VertexSet& X) {
    return min_post_dominator_exhaustive(reverse(d), X);
}

namespace {

void spartition_rec(const Dag& d, int S, const VertexSet& used, int count, int& best) {
    if (count >= best) return;
    if (static_cast<int>(used.size()) == d.n()) {
        best = count;
        return;
    }
    // Candidate next blocks: nonempty subsets of the unused vertices whose
    // union with `used` is predecessor-closed.
    VertexSet rest;
    for (int v = 0; v < d.n(); ++v)
        if (!vset::contains(used, v)) rest.push_back(v);
    const int m = static_cast<int>(rest.size());
    for (uint32_t mask = 1; mask < (1u << m); ++mask) {
        VertexSet block;
        for (int i = 0; i < m; ++i)
            if (mask & (1u << i)) block.push_back(rest[static_cast<size_t>(i)]);
        VertexSet next = vset::unite(used, block);
        bool closed = true;
        for (Vertex v : next)
            for (Vertex p : d.preds(v))
                if (!vset::contains(next, p)) {
                    closed = false;
                    break;
                }
        if (!closed) continue;
        if (min_dominator(d, block).size > S) continue;
        if (static_cast<int>(minimum_set(d, block).size()) > S) continue;
        spartition_rec(d, S, next, count + 1, best);
    }
}

}  // namespace

int min_s_partition_exhaustive(const Dag& d, int S) {
    if (d.n() > 10) throw dag_error("exhaustive S-partition limited to n <= 10");
    int best = d.n() + 1;
    VertexSet used;
    spartition_rec(d, S, used, 0, best);
    return best;
}

namespace {

template <typename Eval>
long long best_partition_exhaustive(int n, Eval eval) {
    long long best = 0;
    for (uint32_t mask = 0; mask < (1u << (n - 1)); ++mask) {
        std::vector<int> cuts;
        for (int i = 1; i < n; ++i)
            if (mask & (1u << (i - 1))) cuts.push_back(i);
        cuts.push_back(n);
        best = std::max(best, eval(SegmentPartition{cuts}));
    }
    return best;
}

}  // namespace

long long best_write_partition_exhaustive(const Dag& d_R, const VisitRule& r,
                                          const VisitSequence& v, int M) {
    if (d_R.n() > 16) throw dag_error("exhaustive partitions limited to n <= 16");
    return best_partition_exhaustive(d_R.n(), [&](const SegmentPartition& p) {
        return write_bound_for_partition(d_R, r, v, p, M).value;
    });
}

long long best_read_partition_exhaustive(const Dag& d_R, const VisitSequence& v, int M) {
    if (d_R.n() > 16) throw dag_error("exhaustive partitions limited to n <= 16");
    return best_partition_exhaustive(d_R.n(), [&](const SegmentPartition& p) {
        return read_bound_for_partition(d_R, v, p, M).value;
    });
}

}  // namespace bruteforce
}  // namespace dagvisit
