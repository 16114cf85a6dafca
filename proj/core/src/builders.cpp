#include "dagvisit/builders.hpp"

#include <algorithm>
#include <cmath>
#include <queue>

namespace dagvisit {

namespace {

void append_mapped(VertexList& order, const VertexList& sub_order, const VertexList& to_orig) {
    for (Vertex v : sub_order) order.push_back(to_orig[static_cast<size_t>(v)]);
}

BuiltVisit finish(const Dag& d, const VisitRule& r, VertexList order, double guarantee,
                  std::vector<std::string> trace) {
    BuiltVisit out;
    out.sequence = VisitSequence::of(d, std::move(order));
    if (!out.sequence.complete(d)) throw dag_error("builder produced an incomplete visit");
    out.achieved_boundary = boundary_complexity_of_sequence(d, r, out.sequence);
    out.guarantee = guarantee;
    out.trace = std::move(trace);
    return out;
}

// ---------------------------------------------------------------- depth visit

VertexList depth_visit_ids(const Dag& d, const VisitRule& r, std::vector<std::string>& trace,
                           int level) {
    VertexList order;
    std::vector<char> visited(static_cast<size_t>(d.n()), 0);
    for (int v = 0; v < d.n(); ++v) {
        if (visited[static_cast<size_t>(v)] || !r.enabled_by_empty(d, v)) continue;
        order.push_back(v);
        visited[static_cast<size_t>(v)] = 1;
        VertexSet vis_set;
        for (int u = 0; u < d.n(); ++u)
            if (visited[static_cast<size_t>(u)]) vis_set.push_back(u);
        VertexSet reach = enabled_reach_set(d, r, vis_set, v);
        if (reach.empty()) continue;
        if (level <= 2)
            trace.push_back("depth: source " + std::to_string(v) + " reach " +
                            std::to_string(reach.size()));
        RestrictedRule rr = restrict_rule(d, r, VisitSequence::of(d, order), reach);
        VertexList sub = depth_visit_ids(rr.sub.dag, rr.rule, trace, level + 1);
        for (Vertex s : sub) {
            Vertex orig = rr.sub.to_orig[static_cast<size_t>(s)];
            order.push_back(orig);
            visited[static_cast<size_t>(orig)] = 1;
        }
    }
    if (static_cast<int>(order.size()) != d.n())
        throw dag_error("depth visit failed to cover the graph");
    return order;
}

// ------------------------------------------------------------ singleton visit

VertexList sin_visit(const Dag& g, std::vector<std::string>& trace, int level);

// Visit each source of `members` followed by its not-yet-visited descendants.
VertexList sin_case_a(const Dag& g, const VertexSet& members, std::vector<std::string>& trace,
                      int level) {
    InducedSubdag h = induced_subdag(g, members);
    VertexList order;
    std::vector<char> vis(static_cast<size_t>(h.dag.n()), 0);
    for (Vertex w : h.dag.inputs()) {
        order.push_back(h.to_orig[static_cast<size_t>(w)]);
        vis[static_cast<size_t>(w)] = 1;
        VertexSet rest;
        for (Vertex x : descendants(h.dag, w))
            if (!vis[static_cast<size_t>(x)]) rest.push_back(x);
        if (rest.empty()) continue;
        InducedSubdag piece = induced_subdag(h.dag, rest);
        VertexList sub = sin_visit(piece.dag, trace, level + 1);
        for (Vertex s : sub) {
            Vertex hid = piece.to_orig[static_cast<size_t>(s)];
            order.push_back(h.to_orig[static_cast<size_t>(hid)]);
            vis[static_cast<size_t>(hid)] = 1;
        }
    }
    if (order.size() != members.size()) throw dag_error("case-a visit failed to cover its block");
    return order;
}

VertexList sin_visit(const Dag& g, std::vector<std::string>& trace, int level) {
    const int n = g.n();
    VertexList order;
    if (n == 0) return order;
    if (n == 1) return {0};
    const int dout = g.max_out_degree();
    if (dout == 0) {
        for (int v = 0; v < n; ++v) order.push_back(v);
        return order;
    }

    if (g.inputs().size() > 1) {
        // Split off one source and its descendant cone; no boundary crosses it.
        Vertex v = g.inputs().front();
        VertexSet cone = descendants(g, v);
        order.push_back(v);
        InducedSubdag down = induced_subdag(g, cone);
        append_mapped(order, sin_visit(down.dag, trace, level + 1), down.to_orig);
        VertexSet rest;
        rest.reserve(static_cast<size_t>(n) - cone.size() - 1);
        for (int u = 0; u < n; ++u)
            if (u != v && !vset::contains(cone, u)) rest.push_back(u);
        InducedSubdag other = induced_subdag(g, rest);
        append_mapped(order, sin_visit(other.dag, trace, level + 1), other.to_orig);
        return order;
    }

    // Single source: BFS levels, bottlenecks, blocks.
    const Vertex u = g.inputs().front();
    std::vector<int> lev(static_cast<size_t>(n), -1);
    std::vector<Vertex> parent(static_cast<size_t>(n), -1);
    std::queue<Vertex> bfs;
    lev[static_cast<size_t>(u)] = 0;
    bfs.push(u);
    int max_lev = 0;
    while (!bfs.empty()) {
        Vertex x = bfs.front();
        bfs.pop();
        for (Vertex w : g.succs(x))
            if (lev[static_cast<size_t>(w)] < 0) {
                lev[static_cast<size_t>(w)] = lev[static_cast<size_t>(x)] + 1;
                parent[static_cast<size_t>(w)] = x;
                max_lev = std::max(max_lev, lev[static_cast<size_t>(w)]);
                bfs.push(w);
            }
    }
    for (int v = 0; v < n; ++v)
        if (lev[static_cast<size_t>(v)] < 0) throw dag_error("unreachable vertex in sin_visit");

    std::vector<int> level_size(static_cast<size_t>(max_lev + 1), 0);
    for (int v = 0; v < n; ++v) ++level_size[static_cast<size_t>(lev[static_cast<size_t>(v)])];
    const double gamma = 1.0 / std::sqrt(2.0);
    const double thresh = gamma * std::sqrt(static_cast<double>(dout) * n);
    std::vector<int> bottlenecks;
    for (int i = 0; i <= max_lev; ++i)
        if (level_size[static_cast<size_t>(i)] <= thresh) bottlenecks.push_back(i);
    if (bottlenecks.empty() || bottlenecks.front() != 0)
        throw dag_error("source level must be a bottleneck");

    for (size_t j = 0; j < bottlenecks.size(); ++j) {
        int lo = bottlenecks[j];
        int hi = j + 1 < bottlenecks.size() ? bottlenecks[j + 1] : max_lev + 1;
        VertexSet block;
        for (int v = 0; v < n; ++v)
            if (lev[static_cast<size_t>(v)] >= lo && lev[static_cast<size_t>(v)] < hi)
                block.push_back(v);
        if (level <= 2)
            trace.push_back("singleton: block levels [" + std::to_string(lo) + "," +
                            std::to_string(hi) + ") size " + std::to_string(block.size()));
        if (2 * block.size() <= static_cast<size_t>(n)) {
            InducedSubdag sub = induced_subdag(g, block);
            append_mapped(order, sin_visit(sub.dag, trace, level + 1), sub.to_orig);
            continue;
        }
        InducedSubdag gj = induced_subdag(g, block);
        std::vector<size_t> des_count(gj.dag.inputs().size());
        bool heavy = false;
        Vertex heavy_input = -1;
        for (size_t k = 0; k < gj.dag.inputs().size(); ++k) {
            des_count[k] = descendants(gj.dag, gj.dag.inputs()[k]).size();
            if (2 * des_count[k] > static_cast<size_t>(n) && !heavy) {
                heavy = true;
                heavy_input = gj.dag.inputs()[k];
            }
        }
        if (!heavy) {
            append_mapped(order, sin_case_a(gj.dag, [&] {
                              VertexSet all;
                              for (int v = 0; v < gj.dag.n(); ++v) all.push_back(v);
                              return all;
                          }(), trace, level + 1),
                          gj.to_orig);
            continue;
        }
        // Heavy source: pivot y = last vertex in topological order with at
        // least n/2 descendants; walk the BFS parent chain into the block.
        Vertex y = -1;
        for (Vertex cand : topological_order(gj.dag))
            if (2 * descendants(gj.dag, cand).size() >= static_cast<size_t>(n)) y = cand;
        if (y < 0) y = heavy_input;
        Vertex y_orig = gj.to_orig[static_cast<size_t>(y)];
        VertexList chain;  // original ids, block head .. y
        for (Vertex x = y_orig; x != -1 && lev[static_cast<size_t>(x)] >= lo;
             x = parent[static_cast<size_t>(x)])
            chain.push_back(x);
        std::reverse(chain.begin(), chain.end());
        if (level <= 2)
            trace.push_back("singleton: pivot " + std::to_string(y_orig) + " chain " +
                            std::to_string(chain.size()));
        std::vector<char> taken(static_cast<size_t>(gj.dag.n()), 0);
        for (Vertex x : chain) {
            order.push_back(x);
            taken[static_cast<size_t>(gj.to_sub[static_cast<size_t>(x)])] = 1;
        }
        VertexSet reach_local;
        for (Vertex x : descendants(gj.dag, y))
            if (!taken[static_cast<size_t>(x)]) reach_local.push_back(x);
        if (!reach_local.empty()) {
            VertexList ra = sin_case_a(gj.dag, reach_local, trace, level + 1);
            for (Vertex x : ra) {
                order.push_back(gj.to_orig[static_cast<size_t>(x)]);
                taken[static_cast<size_t>(x)] = 1;
            }
        }
        VertexSet rest;
        for (int x = 0; x < gj.dag.n(); ++x)
            if (!taken[static_cast<size_t>(x)]) rest.push_back(x);
        if (!rest.empty()) {
            InducedSubdag sub = induced_subdag(gj.dag, rest);
            VertexList rv = sin_visit(sub.dag, trace, level + 1);
            for (Vertex s : rv)
                order.push_back(
                    gj.to_orig[static_cast<size_t>(sub.to_orig[static_cast<size_t>(s)])]);
        }
    }
    if (static_cast<int>(order.size()) != n)
        throw dag_error("singleton visit failed to cover the graph");
    return order;
}

// ----------------------------------------------------------- topological visit

VertexList topv(const Dag& g, std::vector<std::string>& trace, int level) {
    VertexList order;
    if (g.n() == 0) return order;
    const Vertex u = g.inputs().front();
    order.push_back(u);
    std::vector<char> visited(static_cast<size_t>(g.n()), 0);
    visited[static_cast<size_t>(u)] = 1;
    VisitRule top = VisitRule::top(g);
    for (;;) {
        VertexList candidates;
        for (Vertex w : g.succs(u))
            if (!visited[static_cast<size_t>(w)] && top.has_nonempty_enabler_in(g, w, visited))
                candidates.push_back(w);
        if (candidates.empty()) break;
        Vertex best = -1;
        VertexSet best_reach;
        size_t best_size = 0;
        VertexSet vis_set;
        for (int x = 0; x < g.n(); ++x)
            if (visited[static_cast<size_t>(x)]) vis_set.push_back(x);
        for (Vertex w : candidates) {
            VertexSet with_w = vset::unite(vis_set, {w});
            VertexSet reach = enabled_reach_set(g, top, with_w, w);
            if (best < 0 || reach.size() < best_size) {
                best = w;
                best_reach = std::move(reach);
                best_size = best_reach.size();
            }
        }
        if (level <= 2)
            trace.push_back("topv: pick " + std::to_string(best) + " reach " +
                            std::to_string(best_size));
        VertexSet piece = vset::unite(best_reach, {best});
        InducedSubdag sub = induced_subdag(g, piece);
        VertexList sv = topv(sub.dag, trace, level + 1);
        for (Vertex s : sv) {
            Vertex orig = sub.to_orig[static_cast<size_t>(s)];
            order.push_back(orig);
            visited[static_cast<size_t>(orig)] = 1;
        }
    }
    VertexSet remainder;
    for (int x = 0; x < g.n(); ++x)
        if (!visited[static_cast<size_t>(x)]) remainder.push_back(x);
    if (!remainder.empty()) {
        InducedSubdag sub = induced_subdag(g, remainder);
        append_mapped(order, topv(sub.dag, trace, level + 1), sub.to_orig);
    }
    return order;
}

}  // namespace

BuiltVisit build_depth_visit(const Dag& d, const VisitRule& r) {
    r.check_target(d);
    std::vector<std::string> trace;
    VertexList order = depth_visit_ids(d, r, trace, 0);
    const int depth = topological_depth(d);
    const double guarantee =
        depth == 0 ? 0.0 : static_cast<double>(d.max_out_degree() - 1) * depth + 1.0;
    return finish(d, r, std::move(order), guarantee, std::move(trace));
}

BuiltVisit build_singleton_visit(const Dag& d) {
    std::vector<std::string> trace;
    VertexList order = sin_visit(d, trace, 0);
    const double c = 4.0 * (std::sqrt(2.0) + 1.0);
    const double guarantee =
        c * std::sqrt(static_cast<double>(d.max_out_degree()) * static_cast<double>(d.n()));
    return finish(d, VisitRule::singleton(d), std::move(order), guarantee, std::move(trace));
}

BuiltVisit build_topological_visit(const Dag& d) {
    std::vector<std::string> trace;
    VertexList order = topv(d, trace, 0);
    const int dout = d.max_out_degree();
    double guarantee = 0.0;
    if (dout == 1)
        guarantee = 1.0;
    else if (dout >= 2)
        guarantee = static_cast<double>(dout - 1) / std::log2(static_cast<double>(dout)) *
                        std::log2(static_cast<double>(d.n())) +
                    1.0;
    BuiltVisit out = finish(d, VisitRule::top(d), std::move(order), guarantee, std::move(trace));
    // Top-visits are exactly the topological orderings.
    std::vector<char> seen(static_cast<size_t>(d.n()), 0);
    for (Vertex v : out.sequence.order) {
        for (Vertex p : d.preds(v))
            if (!seen[static_cast<size_t>(p)]) throw dag_error("topv output is not topological");
        seen[static_cast<size_t>(v)] = 1;
    }
    return out;
}

BlockedVisit build_diamond_blocked_visit(const GeneratedDag& d_R, int M) {
    if (!d_R.meta.is_mesh_diamond())
        throw dag_error("diamond-blocked visit requires a q=2 mesh diamond (general q "
                        "blocks are not constructed)");
    if (M < 1) throw dag_error("diamond-blocked visit needs M >= 1");
    const Dag& dag = d_R.dag;
    const int b = d_R.meta.diamond_b;
    const int q = 2;
    const int side = (2 * M + q - 2 + (q - 2)) / (q - 1);  // ceil((2M+q-2)/(q-1)); = 2M at q=2
    if (dag.inputs().size() != 1) throw dag_error("diamond must have a single input");

    // Blocks are aligned at the input corner; partial blocks sit at the far
    // side, matching the padded-diamond reading of the construction.
    auto [ix, iy] = d_R.meta.coords[static_cast<size_t>(dag.inputs().front())];
    const bool flipped = ix == b - 1 && iy == b - 1;
    if (!flipped && (ix != 0 || iy != 0)) throw dag_error("unrecognized diamond orientation");
    auto dist_coords = [&](Vertex v) {
        auto [x, y] = d_R.meta.coords[static_cast<size_t>(v)];
        return flipped ? std::pair<int, int>{b - 1 - x, b - 1 - y} : std::pair<int, int>{x, y};
    };
    const int per_row = (b + side - 1) / side;
    auto block_id = [&](Vertex v) {
        auto [u, w] = dist_coords(v);
        return (u / side) * per_row + (w / side);
    };

    // Rule blocks must agree with ours; build the table directly.
    VisitRule rule = [&] {
        if (!flipped) return VisitRule::diamond_blocked(d_R, side);
        // VisitRule::diamond_blocked aligns at (0,0); rebuild as explicit
        // singleton-within-block families for the flipped alignment.
        std::vector<std::vector<VertexSet>> table(static_cast<size_t>(dag.n()));
        for (int v = 0; v < dag.n(); ++v) {
            for (Vertex p : dag.preds(v))
                if (block_id(p) == block_id(v)) table[static_cast<size_t>(v)].push_back({p});
            if (table[static_cast<size_t>(v)].empty()) table[static_cast<size_t>(v)].push_back({});
        }
        return VisitRule::explicit_rule(dag, std::move(table));
    }();

    // Dependency-respecting deterministic block order.
    std::map<int, VertexList> members;
    for (int v = 0; v < dag.n(); ++v) members[block_id(v)].push_back(v);
    std::vector<int> block_ids;
    for (auto& [id, verts] : members) block_ids.push_back(id);
    std::sort(block_ids.begin(), block_ids.end(), [&](int a, int bnum) {
        int ai = a / per_row, aj = a % per_row, bi = bnum / per_row, bj = bnum % per_row;
        if (ai + aj != bi + bj) return ai + aj < bi + bj;
        return ai < bi;
    });

    BlockedVisit out;
    out.side = side;
    out.rule = rule;
    out.block_of.resize(static_cast<size_t>(dag.n()));
    for (int v = 0; v < dag.n(); ++v) out.block_of[static_cast<size_t>(v)] = block_id(v);

    VertexList order;
    std::vector<std::string> trace;
    for (int id : block_ids) {
        VertexList& verts = members[id];
        // Local layers by distance from the block input corner.
        std::sort(verts.begin(), verts.end(), [&](Vertex a, Vertex c) {
            auto [ua, wa] = dist_coords(a);
            auto [uc, wc] = dist_coords(c);
            int da = (ua % side) + (wa % side), dc = (uc % side) + (wc % side);
            if (da != dc) return da < dc;
            return a < c;
        });
        int first_diag = -1;
        for (Vertex v : verts) {
            auto [u, w] = dist_coords(v);
            if (first_diag < 0 && (u % side) + (w % side) == side - 1)
                first_diag = static_cast<int>(order.size());
            order.push_back(v);
        }
        out.block_order.push_back(id);
        out.first_diagonal_step.push_back(first_diag);
        trace.push_back("block " + std::to_string(id / per_row) + "," +
                        std::to_string(id % per_row) + " size " + std::to_string(verts.size()));
    }
    out.visit = finish(dag, rule, std::move(order), side + 1.0, std::move(trace));
    return out;
}

}  // namespace dagvisit
