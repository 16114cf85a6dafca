#include "dagvisit/oracles.hpp"

#include <algorithm>
#include <bit>
#include <cstdlib>
#include <limits>
#include <sstream>
#include <unordered_map>

namespace dagvisit {

OracleLimits OracleLimits::from_env() {
    OracleLimits lim;
    const char* env = std::getenv("DAGVISIT_LIMITS");
    if (!env) return lim;
    std::stringstream ss(env);
    std::string item;
    while (std::getline(ss, item, ',')) {
        auto eq = item.find('=');
        if (eq == std::string::npos) continue;
        std::string key = item.substr(0, eq);
        int value = std::atoi(item.c_str() + eq + 1);
        if (key == "subset") lim.max_n_subset_dp = value;
        if (key == "pebble") lim.max_n_pebbling = value;
        if (key == "viopt") lim.max_n_visit_partition = value;
        if (key == "ms") lim.time_budget_ms = value;
    }
    return lim;
}

CancelToken CancelToken::with_budget_ms(int ms) {
    CancelToken t;
    t.deadline = std::chrono::steady_clock::now() + std::chrono::milliseconds(ms);
    return t;
}

bool CancelToken::expired() const {
    if (cancelled && cancelled->load(std::memory_order_relaxed)) return true;
    return deadline.time_since_epoch().count() != 0 &&
           std::chrono::steady_clock::now() > deadline;
}

void CancelToken::check(const char* where) const {
    if (expired()) throw limit_error(std::string("time budget exceeded in ") + where);
}

// ------------------------------------------------------- boundary subset DP

BoundaryComplexityResult exact_boundary_complexity(const Dag& d, const VisitRule& r,
                                                   const OracleLimits& limits) {
    r.check_target(d);
    const int n = d.n();
    if (n > limits.max_n_subset_dp)
        throw limit_error("exact_boundary_complexity: n exceeds the subset-DP limit");
    if (n == 0) return {0, {}};
    MaskRule mr = compile_mask_rule(d, r);
    const uint32_t full = n == 32 ? ~0u : (1u << n) - 1;
    const uint8_t UNREACHED = 0xff;
    std::vector<uint8_t> value(static_cast<size_t>(full) + 1, UNREACHED);
    std::vector<uint8_t> back(static_cast<size_t>(full) + 1, 0xff);
    CancelToken token = CancelToken::with_budget_ms(limits.time_budget_ms);

    auto boundary_size = [&](uint32_t mask) {
        int b = 0;
        uint32_t rest = full & ~mask;
        while (rest) {
            int v = std::countr_zero(rest);
            rest &= rest - 1;
            if (mr.in_boundary(v, mask)) ++b;
        }
        return b;
    };

    // Masks in increasing popcount via counting sort.
    std::vector<uint32_t> order(static_cast<size_t>(full) + 1);
    {
        std::vector<uint32_t> at(static_cast<size_t>(n + 2), 0);
        for (uint32_t m = 0; m <= full; ++m) ++at[static_cast<size_t>(std::popcount(m)) + 1];
        for (int i = 1; i <= n + 1; ++i) at[static_cast<size_t>(i)] += at[static_cast<size_t>(i - 1)];
        for (uint32_t m = 0; m <= full; ++m)
            order[at[static_cast<size_t>(std::popcount(m))]++] = m;
    }

    value[0] = 0;
    for (uint32_t idx = 1; idx <= full; ++idx) {
        uint32_t mask = order[idx];
        if ((idx & 0xfffff) == 0) token.check("exact_boundary_complexity");
        int best = std::numeric_limits<int>::max();
        int best_v = -1;
        uint32_t rest = mask;
        while (rest) {
            int v = std::countr_zero(rest);
            rest &= rest - 1;
            uint32_t prev = mask & ~(1u << v);
            if (value[prev] == UNREACHED) continue;
            if (!mr.enabled(v, prev)) continue;
            if (value[prev] < best) {
                best = value[prev];
                best_v = v;
            }
        }
        if (best_v < 0) continue;  // unreachable prefix set
        int b = boundary_size(mask);
        value[mask] = static_cast<uint8_t>(std::max(best, b));
        back[mask] = static_cast<uint8_t>(best_v);
    }
    if (value[full] == UNREACHED)
        throw dag_error("exact_boundary_complexity: no complete r-visit exists");

    VertexList order_out(static_cast<size_t>(n));
    uint32_t mask = full;
    for (int i = n - 1; i >= 0; --i) {
        int v = back[mask];
        order_out[static_cast<size_t>(i)] = v;
        mask &= ~(1u << v);
    }
    return {value[full], VisitSequence::of(d, std::move(order_out))};
}

// ------------------------------------------------------------ pebbling BFS

namespace {

struct PebbleSearch {
    const Dag& d;
    int n;
    std::vector<uint32_t> predmask;
    std::vector<int> out_index;  // vertex -> output bit, -1 otherwise
    int n_out = 0;

    explicit PebbleSearch(const Dag& dag) : d(dag), n(dag.n()) {
        predmask.resize(static_cast<size_t>(n));
        out_index.assign(static_cast<size_t>(n), -1);
        for (int v = 0; v < n; ++v)
            for (Vertex p : d.preds(v)) predmask[static_cast<size_t>(v)] |= 1u << p;
        for (Vertex v : d.outputs()) out_index[static_cast<size_t>(v)] = n_out++;
    }

    uint64_t key(uint32_t pebbled, uint32_t done) const {
        return (static_cast<uint64_t>(done) << n) | pebbled;
    }

    // BFS over (pebbled, done) under a budget; reconstructs a schedule.
    bool solve(int budget, PebbleSchedule* out, const CancelToken& token) const {
        const uint32_t goal = n_out == 32 ? ~0u : (1u << n_out) - 1;
        std::unordered_map<uint64_t, std::pair<uint64_t, int>> parent;  // key -> (prev, move)
        std::vector<uint64_t> frontier{key(0, 0)};
        parent[key(0, 0)] = {key(0, 0), 0};
        uint64_t found = 0;
        bool done_flag = goal == 0;
        size_t steps = 0;
        while (!frontier.empty() && !done_flag) {
            std::vector<uint64_t> next;
            for (uint64_t cur : frontier) {
                if ((++steps & 0x3fff) == 0) token.check("exact_pebbling_number");
                uint32_t pebbled = static_cast<uint32_t>(cur & ((1u << n) - 1));
                uint32_t done = static_cast<uint32_t>(cur >> n);
                int count = std::popcount(pebbled);
                for (int v = 0; v < n && !done_flag; ++v) {
                    uint32_t bit = 1u << v;
                    if (!(pebbled & bit) && count + 1 <= budget &&
                        (predmask[static_cast<size_t>(v)] & pebbled) ==
                            predmask[static_cast<size_t>(v)]) {
                        uint32_t nd = done;
                        if (out_index[static_cast<size_t>(v)] >= 0)
                            nd |= 1u << out_index[static_cast<size_t>(v)];
                        uint64_t nk = key(pebbled | bit, nd);
                        if (!parent.count(nk)) {
                            parent[nk] = {cur, v + 1};
                            next.push_back(nk);
                            if (nd == goal) {
                                found = nk;
                                done_flag = true;
                            }
                        }
                    }
                    if (pebbled & bit) {
                        uint64_t nk = key(pebbled & ~bit, done);
                        if (!parent.count(nk)) {
                            parent[nk] = {cur, -(v + 1)};
                            next.push_back(nk);
                        }
                    }
                }
                if (done_flag) break;
            }
            frontier = std::move(next);
        }
        if (!done_flag) return false;
        if (out) {
            std::vector<PebbleStep> rev;
            uint64_t cur = found;
            while (cur != key(0, 0)) {
                auto [prev, move] = parent.at(cur);
                if (move > 0)
                    rev.push_back({PebbleOp::Place, move - 1});
                else
                    rev.push_back({PebbleOp::Remove, -move - 1});
                cur = prev;
            }
            out->steps.assign(rev.rbegin(), rev.rend());
            out->budget = budget;
        }
        return true;
    }
};

}  // namespace

PebblingResult exact_pebbling_number(const Dag& d, const OracleLimits& limits) {
    const int n = d.n();
    if (n > limits.max_n_pebbling)
        throw limit_error("exact_pebbling_number: n exceeds the pebbling limit");
    if (n == 0) return {0, {}};
    PebbleSearch search(d);
    CancelToken token = CancelToken::with_budget_ms(limits.time_budget_ms);
    for (int budget = 1; budget <= n; ++budget) {
        PebblingResult res;
        res.number = budget;
        if (search.solve(budget, &res.witness, token)) return res;
    }
    throw dag_error("exact_pebbling_number: no pebbling found");  // unreachable
}

// ------------------------------------------------------------- cut oracles

CutResult min_post_dominator(const Dag& d, const VertexSet& X) {
    for (Vertex v : X) d.check_vertex(v);
    if (X.empty()) return {0, {}};
    VertexFlowResult flow = max_vertex_flow(d, X, d.outputs(), {});
    return {flow.value, flow.cut};
}

CutResult min_dominator(const Dag& d, const VertexSet& X) {
    return min_post_dominator(reverse(d), X);
}

VertexSet minimum_set(const Dag& d, const VertexSet& X) {
    VertexSet out;
    for (Vertex v : X) {
        d.check_vertex(v);
        if (vset::intersect(d.succs(v), X).empty()) out.push_back(v);
    }
    return out;
}

int min_s_partition_k(const Dag& d, int S, const OracleLimits& limits) {
    if (S < 1) throw dag_error("min_s_partition_k: S >= 1 required");
    const int n = d.n();
    if (n > limits.max_n_visit_partition)
        throw limit_error("min_s_partition_k: n exceeds the visit-partition limit");
    if (n == 0) return 0;
    const uint32_t full = (1u << n) - 1;
    std::vector<uint32_t> predmask(static_cast<size_t>(n), 0);
    for (int v = 0; v < n; ++v)
        for (Vertex p : d.preds(v)) predmask[static_cast<size_t>(v)] |= 1u << p;

    std::vector<char> closed(static_cast<size_t>(full) + 1, 1);
    for (uint32_t m = 0; m <= full; ++m) {
        uint32_t rest = m;
        while (rest) {
            int v = std::countr_zero(rest);
            rest &= rest - 1;
            if ((predmask[static_cast<size_t>(v)] & m) != predmask[static_cast<size_t>(v)]) {
                closed[m] = 0;
                break;
            }
        }
    }

    std::vector<int8_t> feasible(static_cast<size_t>(full) + 1, -1);
    auto block_ok = [&](uint32_t block) {
        int8_t& memo = feasible[block];
        if (memo >= 0) return memo == 1;
        VertexSet verts;
        uint32_t rest = block;
        while (rest) {
            int v = std::countr_zero(rest);
            rest &= rest - 1;
            verts.push_back(v);
        }
        bool ok = min_dominator(d, verts).size <= S &&
                  static_cast<int>(minimum_set(d, verts).size()) <= S;
        memo = ok ? 1 : 0;
        return ok;
    };

    CancelToken token = CancelToken::with_budget_ms(limits.time_budget_ms);
    std::vector<uint8_t> dist(static_cast<size_t>(full) + 1, 0xff);
    dist[0] = 0;
    std::vector<uint32_t> order(static_cast<size_t>(full) + 1);
    {
        std::vector<uint32_t> at(static_cast<size_t>(n + 2), 0);
        for (uint32_t m = 0; m <= full; ++m) ++at[static_cast<size_t>(std::popcount(m)) + 1];
        for (int i = 1; i <= n + 1; ++i) at[static_cast<size_t>(i)] += at[static_cast<size_t>(i - 1)];
        for (uint32_t m = 0; m <= full; ++m) order[at[static_cast<size_t>(std::popcount(m))]++] = m;
    }
    size_t work = 0;
    for (uint32_t idx = 0; idx <= full; ++idx) {
        uint32_t u = order[idx];
        if (dist[u] == 0xff || !closed[u]) continue;
        uint32_t comp = full & ~u;
        for (uint32_t w = comp; w; w = (w - 1) & comp) {
            if ((++work & 0xffff) == 0) token.check("min_s_partition_k");
            uint32_t nu = u | w;
            if (!closed[nu]) continue;
            if (dist[nu] <= dist[u] + 1) continue;
            if (!block_ok(w)) continue;
            dist[nu] = static_cast<uint8_t>(dist[u] + 1);
        }
    }
    if (dist[full] == 0xff) throw dag_error("min_s_partition_k: no partition found");
    return dist[full];
}

PathSystem max_disjoint_paths(const Dag& d, const VertexSet& sources, const VertexSet& sinks,
                              const VertexSet& shared_allowed) {
    if (sources.empty() || sinks.empty())
        throw dag_error("max_disjoint_paths: sources and sinks must be nonempty");
    VertexFlowResult flow = max_vertex_flow(d, sources, sinks, shared_allowed);
    return {flow.value, flow.paths};
}

// ------------------------------------------- exact visit-partition minimum

namespace {

struct ViOptSearch {
    const Dag& d_r;
    const MaskRule& mr;        // boundary rule
    const MaskRule* search_mr = nullptr;  // enabling rule for the visit search
    int n;
    int M;
    BoundMetric metric;
    long long delta;  // |I(G)| - |O(G)|
    uint32_t full;
    uint32_t base_mask = 0;  // inputs of d_R
    std::vector<uint32_t> succmask;
    CancelToken token;

    long long best = std::numeric_limits<long long>::max();

    // Per-depth state along the DFS path.
    std::vector<uint32_t> prefix_mask;    // visited set after depth i
    std::vector<uint32_t> boundary_mask;  // rule boundary after depth i
    std::vector<long long> fw, fr;        // best closed partitions ending at i
    std::unordered_map<uint32_t, long long> pd_memo;
    size_t nodes = 0;

    ViOptSearch(const Dag& dr, const MaskRule& m, int cache, BoundMetric met, long long dlt,
                const CancelToken& tok)
        : d_r(dr), mr(m), n(dr.n()), M(cache), metric(met), delta(dlt), token(tok) {
        full = n == 32 ? ~0u : (1u << n) - 1;
        for (Vertex v : d_r.inputs()) base_mask |= 1u << v;
        succmask.resize(static_cast<size_t>(n));
        for (int v = 0; v < n; ++v)
            for (Vertex w : d_r.succs(v)) succmask[static_cast<size_t>(v)] |= 1u << w;
        prefix_mask.assign(static_cast<size_t>(n + 1), 0);
        boundary_mask.assign(static_cast<size_t>(n + 1), 0);
        fw.assign(static_cast<size_t>(n + 1), 0);
        fr.assign(static_cast<size_t>(n + 1), 0);
    }

    long long pd_term(uint32_t segment) {
        auto it = pd_memo.find(segment);
        if (it != pd_memo.end()) return it->second;
        VertexSet verts;
        uint32_t rest = segment;
        while (rest) {
            int v = std::countr_zero(rest);
            rest &= rest - 1;
            verts.push_back(v);
        }
        long long term = std::max(0LL, (long long)min_post_dominator(d_r, verts).size - M);
        pd_memo.emplace(segment, term);
        return term;
    }

    long long value_at(int depth) const {
        switch (metric) {
            case BoundMetric::Write: return fw[static_cast<size_t>(depth)];
            case BoundMetric::Read: return fr[static_cast<size_t>(depth)];
            case BoundMetric::Total: {
                long long w = fw[static_cast<size_t>(depth)], r = fr[static_cast<size_t>(depth)];
                return w + std::max(r, w + delta);
            }
        }
        return 0;
    }

    void dfs(int depth) {
        if ((++nodes & 0xfff) == 0) token.check("exact_visit_partition_bound");
        if (depth == n) {
            best = std::min(best, value_at(n));
            return;
        }
        uint32_t visited = prefix_mask[static_cast<size_t>(depth)];
        uint32_t rest = full & ~visited;
        while (rest) {
            int v = std::countr_zero(rest);
            rest &= rest - 1;
            if (!(search_mr ? search_mr->enabled(v, visited) : mr.enabled(v, visited))) continue;
            uint32_t nv = visited | (1u << v);
            // Incremental rule boundary.
            uint32_t nb = boundary_mask[static_cast<size_t>(depth)] & ~(1u << v);
            uint32_t cand = succmask[static_cast<size_t>(v)] & ~nv & ~nb;
            while (cand) {
                int w = std::countr_zero(cand);
                cand &= cand - 1;
                if (mr.in_boundary(w, nv)) nb |= 1u << w;
            }
            prefix_mask[static_cast<size_t>(depth + 1)] = nv;
            boundary_mask[static_cast<size_t>(depth + 1)] = nb;
            // Best closed partition ending exactly at depth+1.
            long long bw = 0, br = 0;
            bool need_read = metric != BoundMetric::Write;
            for (int j = depth; j >= 0; --j) {
                uint32_t seg = nv & ~prefix_mask[static_cast<size_t>(j)];
                long long w_term =
                    std::max(0LL, (long long)std::popcount(
                                      (base_mask | boundary_mask[static_cast<size_t>(j)]) & seg) -
                                      M);
                bw = std::max(bw, fw[static_cast<size_t>(j)] + w_term);
                if (need_read) br = std::max(br, fr[static_cast<size_t>(j)] + pd_term(seg));
            }
            fw[static_cast<size_t>(depth + 1)] = bw;
            fr[static_cast<size_t>(depth + 1)] = br;
            // Cutting at any prefix position and once more at n is a
            // partition available in every completion: the tail segment's
            // entering boundary is already determined, so these values
            // lower-bound the max partition of any extension.
            long long lbw = 0, lbr = 0;
            for (int j = 0; j <= depth + 1; ++j) {
                uint32_t tail = full & ~prefix_mask[static_cast<size_t>(j)];
                if (metric != BoundMetric::Read) {
                    long long wtail = std::max(
                        0LL, (long long)std::popcount(
                                 (base_mask | boundary_mask[static_cast<size_t>(j)]) & tail) -
                                 M);
                    lbw = std::max(lbw, fw[static_cast<size_t>(j)] + wtail);
                }
                if (need_read && tail != 0)
                    lbr = std::max(lbr, fr[static_cast<size_t>(j)] + pd_term(tail));
            }
            long long lb = metric == BoundMetric::Write
                               ? lbw
                               : (metric == BoundMetric::Read
                                      ? lbr
                                      : lbw + std::max(lbr, lbw + delta));
            if (lb < best) dfs(depth + 1);
        }
    }
};

}  // namespace

long long exact_visit_partition_bound(const Dag& d, const VisitRule& r_on_reverse, int M,
                                      BoundMetric metric, const OracleLimits& limits,
                                      bool restrict_to_top) {
    const int n = d.n();
    if (n > limits.max_n_visit_partition)
        throw limit_error("exact_visit_partition_bound: n exceeds the visit-partition limit");
    if (n == 0) return 0;
    if (M < 0) throw dag_error("exact_visit_partition_bound: M >= 0 required");
    Dag d_r = reverse(d);
    r_on_reverse.check_target(d_r);
    MaskRule mr = compile_mask_rule(d_r, r_on_reverse);
    long long delta =
        static_cast<long long>(d.inputs().size()) - static_cast<long long>(d.outputs().size());
    CancelToken token = CancelToken::with_budget_ms(limits.time_budget_ms);
    ViOptSearch search(d_r, mr, M, metric, delta, token);
    MaskRule top_mr;
    if (restrict_to_top) {
        top_mr = compile_mask_rule(d_r, VisitRule::top(d_r));
        search.search_mr = &top_mr;
    }

    // Seed the upper bound with a greedy lowest-id visit.
    {
        const MaskRule& step_rule = restrict_to_top ? top_mr : mr;
        VertexList greedy;
        std::vector<char> marks(static_cast<size_t>(n), 0);
        uint32_t visited = 0;
        for (int step = 0; step < n; ++step) {
            int pick = -1;
            for (int v = 0; v < n && pick < 0; ++v)
                if (!marks[static_cast<size_t>(v)] && step_rule.enabled(v, visited)) pick = v;
            if (pick < 0) throw dag_error("exact_visit_partition_bound: stuck visit");
            marks[static_cast<size_t>(pick)] = 1;
            visited |= 1u << pick;
            greedy.push_back(pick);
        }
        VisitSequence seq = VisitSequence::of(d_r, greedy);
        BestPartition bp = best_partition(d_r, r_on_reverse, seq, M, metric);
        search.best = metric == BoundMetric::Total ? bp.independent_value : bp.value;
    }
    search.dfs(0);
    return search.best;
}

}  // namespace dagvisit
