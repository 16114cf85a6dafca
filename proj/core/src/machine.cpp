#include "dagvisit/machine.hpp"

#include <algorithm>
#include <limits>
#include <map>
#include <set>
#include <tuple>

namespace dagvisit {

IoCounts io_counts(const IoComputation& c) {
    IoCounts out;
    for (const IoStep& s : c.steps) {
        if (s.op == StepKind::Read) ++out.reads;
        if (s.op == StepKind::Write) ++out.writes;
    }
    out.total = out.reads + out.writes;
    return out;
}

ComputationReport validate_computation(const Dag& d, const IoComputation& c) {
    ComputationReport rep;
    auto fail = [&](std::string kind, int step, Vertex v, std::string detail) {
        rep.ok = false;
        rep.violations.push_back({std::move(kind), step, v, std::move(detail)});
    };
    const int T = static_cast<int>(c.steps.size());
    if (c.M < 0) fail("capacity", -1, -1, "negative cache size");

    std::vector<char> is_input(static_cast<size_t>(d.n()), 0);
    for (Vertex v : d.inputs()) is_input[static_cast<size_t>(v)] = 1;

    // Placements (read/compute) and uses (operand/write) per value.
    std::vector<std::vector<int>> placements(static_cast<size_t>(d.n()));
    std::vector<std::vector<int>> uses(static_cast<size_t>(d.n()));
    std::vector<char> written(static_cast<size_t>(d.n()), 0);
    std::vector<int> compute_count(static_cast<size_t>(d.n()), 0);
    std::vector<int> read_count(static_cast<size_t>(d.n()), 0);

    for (int t = 0; t < T; ++t) {
        const IoStep& s = c.steps[static_cast<size_t>(t)];
        if (s.v < 0 || s.v >= d.n()) {
            fail("bad-vertex", t, s.v, "step vertex out of range");
            continue;
        }
        switch (s.op) {
            case StepKind::Read:
                if (!is_input[static_cast<size_t>(s.v)] && !written[static_cast<size_t>(s.v)])
                    fail("cold-read", t, s.v, "value is not in slow memory");
                placements[static_cast<size_t>(s.v)].push_back(t);
                ++read_count[static_cast<size_t>(s.v)];
                break;
            case StepKind::Compute:
                if (is_input[static_cast<size_t>(s.v)])
                    fail("compute-of-input", t, s.v, "inputs are read, not computed");
                for (Vertex p : d.preds(s.v)) {
                    if (placements[static_cast<size_t>(p)].empty())
                        fail("missing-operand", t, p,
                             "operand never placed before compute of " + std::to_string(s.v));
                    uses[static_cast<size_t>(p)].push_back(t);
                }
                placements[static_cast<size_t>(s.v)].push_back(t);
                ++compute_count[static_cast<size_t>(s.v)];
                break;
            case StepKind::Write:
                if (placements[static_cast<size_t>(s.v)].empty())
                    fail("missing-operand", t, s.v, "write of a value never in cache");
                uses[static_cast<size_t>(s.v)].push_back(t);
                written[static_cast<size_t>(s.v)] = 1;
                break;
        }
    }
    if (!rep.ok) return rep;

    // Occupancy under free eviction: each placement holds its slot until the
    // last use before the next placement; operands may die at the step that
    // consumes them, making room for the result in the same transition.
    std::vector<int> diff_before(static_cast<size_t>(T + 2), 0);
    std::vector<int> diff_after(static_cast<size_t>(T + 2), 0);
    for (int v = 0; v < d.n(); ++v) {
        const auto& pl = placements[static_cast<size_t>(v)];
        const auto& us = uses[static_cast<size_t>(v)];
        size_t ui = 0;
        for (size_t i = 0; i < pl.size(); ++i) {
            int s = pl[i];
            int next_pl = i + 1 < pl.size() ? pl[i + 1] : T + 1;
            int e = s;
            while (ui < us.size() && us[ui] < next_pl) {
                e = std::max(e, us[ui]);
                ++ui;
            }
            // before(t) for t in (s, e]; after(t) for t in [s, max(s, e-1)].
            if (e > s) {
                diff_before[static_cast<size_t>(s + 1)] += 1;
                diff_before[static_cast<size_t>(e + 1)] -= 1;
            }
            int hi = std::max(s, e - 1);
            diff_after[static_cast<size_t>(s)] += 1;
            diff_after[static_cast<size_t>(hi + 1)] -= 1;
        }
    }
    int before = 0, after = 0;
    for (int t = 0; t < T; ++t) {
        before += diff_before[static_cast<size_t>(t)];
        after += diff_after[static_cast<size_t>(t)];
        rep.peak_occupancy = std::max({rep.peak_occupancy, before, after});
        if (before > c.M)
            fail("capacity", t, c.steps[static_cast<size_t>(t)].v,
                 std::to_string(before) + " live values entering step, cache holds " +
                     std::to_string(c.M));
        if (after > c.M)
            fail("capacity", t, c.steps[static_cast<size_t>(t)].v,
                 std::to_string(after) + " live values after step, cache holds " +
                     std::to_string(c.M));
        if (!rep.ok) return rep;  // first capacity break is enough
    }

    for (int v = 0; v < d.n(); ++v) {
        if (is_input[static_cast<size_t>(v)]) {
            if (read_count[static_cast<size_t>(v)] == 0)
                fail("missing-read", -1, v, "input never read");
        } else if (compute_count[static_cast<size_t>(v)] == 0) {
            fail("missing-compute", -1, v, "vertex never computed");
        }
    }
    for (Vertex v : d.outputs())
        if (!is_input[static_cast<size_t>(v)] && !written[static_cast<size_t>(v)])
            fail("missing-output", -1, v, "output not in slow memory at the end");
    return rep;
}

PebbleReport validate_pebbling(const Dag& d, const PebbleSchedule& s) {
    PebbleReport rep;
    auto fail = [&](std::string kind, int step, Vertex v, std::string detail) {
        rep.ok = false;
        rep.violations.push_back({std::move(kind), step, v, std::move(detail)});
    };
    std::vector<char> pebbled(static_cast<size_t>(d.n()), 0);
    std::vector<char> done(static_cast<size_t>(d.n()), 0);
    int count = 0;
    for (int t = 0; t < static_cast<int>(s.steps.size()); ++t) {
        const PebbleStep& st = s.steps[static_cast<size_t>(t)];
        if (st.v < 0 || st.v >= d.n()) {
            fail("bad-vertex", t, st.v, "out of range");
            continue;
        }
        if (st.op == PebbleOp::Place) {
            if (pebbled[static_cast<size_t>(st.v)]) fail("double-place", t, st.v, "");
            for (Vertex p : d.preds(st.v))
                if (!pebbled[static_cast<size_t>(p)])
                    fail("missing-pred", t, st.v,
                         "predecessor " + std::to_string(p) + " unpebbled");
            pebbled[static_cast<size_t>(st.v)] = 1;
            done[static_cast<size_t>(st.v)] = 1;
            ++count;
            rep.peak = std::max(rep.peak, count);
            if (s.budget > 0 && count > s.budget)
                fail("budget", t, st.v, "pebbles exceed declared budget");
        } else {
            if (!pebbled[static_cast<size_t>(st.v)]) fail("remove-empty", t, st.v, "");
            pebbled[static_cast<size_t>(st.v)] = 0;
            --count;
        }
    }
    for (Vertex v : d.outputs())
        if (!done[static_cast<size_t>(v)]) fail("missing-output", -1, v, "output never pebbled");
    return rep;
}

namespace {

DerivedVisit backward_visit(const Dag& d, const VisitRule& r_on_reverse,
                            const std::vector<std::pair<int, Vertex>>& events) {
    // events: (trace step, vertex) in forward order; scanned backward.
    Dag d_r = reverse(d);
    r_on_reverse.check_target(d_r);
    std::vector<char> visited(static_cast<size_t>(d.n()), 0);
    DerivedVisit out;
    for (auto it = events.rbegin(); it != events.rend(); ++it) {
        Vertex v = it->second;
        if (visited[static_cast<size_t>(v)]) continue;
        if (r_on_reverse.is_enabled(d_r, v, visited)) {
            visited[static_cast<size_t>(v)] = 1;
            out.visit.order.push_back(v);
            out.step_of.push_back(it->first);
        }
    }
    out.visit = VisitSequence::of(d, std::move(out.visit.order));
    if (!out.visit.complete(d))
        throw dag_error("backward scan did not produce a complete visit");
    auto check = is_r_sequence(d_r, r_on_reverse, out.visit);
    if (!check.ok) throw dag_error("backward scan produced an invalid r-sequence");
    return out;
}

}  // namespace

DerivedVisit computation_to_visit(const Dag& d, const VisitRule& r_on_reverse,
                                  const IoComputation& c) {
    ComputationReport rep = validate_computation(d, c);
    if (!rep.ok)
        throw dag_error("computation_to_visit: invalid computation (" +
                        rep.violations.front().kind + ")");
    std::vector<char> is_input(static_cast<size_t>(d.n()), 0);
    for (Vertex v : d.inputs()) is_input[static_cast<size_t>(v)] = 1;
    std::vector<std::pair<int, Vertex>> events;
    for (int t = 0; t < static_cast<int>(c.steps.size()); ++t) {
        const IoStep& s = c.steps[static_cast<size_t>(t)];
        bool counts = (s.op == StepKind::Compute && !is_input[static_cast<size_t>(s.v)]) ||
                      (s.op == StepKind::Read && is_input[static_cast<size_t>(s.v)]);
        if (counts) events.emplace_back(t, s.v);
    }
    return backward_visit(d, r_on_reverse, events);
}

DerivedVisit pebbling_to_visit(const Dag& d, const VisitRule& r_on_reverse,
                               const PebbleSchedule& s) {
    PebbleReport rep = validate_pebbling(d, s);
    if (!rep.ok)
        throw dag_error("pebbling_to_visit: invalid schedule (" + rep.violations.front().kind +
                        ")");
    std::vector<std::pair<int, Vertex>> events;
    for (int t = 0; t < static_cast<int>(s.steps.size()); ++t)
        if (s.steps[static_cast<size_t>(t)].op == PebbleOp::Place)
            events.emplace_back(t, s.steps[static_cast<size_t>(t)].v);
    return backward_visit(d, r_on_reverse, events);
}

PebbleSchedule visit_to_pebbling(const Dag& d, const VisitRule& r_on_reverse,
                                 const VisitSequence& v) {
    Dag d_r = reverse(d);
    if (!v.complete(d)) throw dag_error("visit_to_pebbling: visit must cover all vertices");
    auto check = is_r_sequence(d_r, r_on_reverse, v);
    if (!check.ok)
        throw dag_error("visit_to_pebbling: not an r-visit of the reverse DAG (position " +
                        std::to_string(check.first_violation) + ")");

    PebbleSchedule out;
    std::vector<char> finalized(static_cast<size_t>(d.n()), 0);
    std::vector<char> pebbled(static_cast<size_t>(d.n()), 0);
    int count = 0;
    VertexList topo = topological_order(d);
    std::vector<int> topo_pos(static_cast<size_t>(d.n()));
    for (size_t i = 0; i < topo.size(); ++i) topo_pos[static_cast<size_t>(topo[i])] = (int)i;

    for (int i = d.n() - 1; i >= 0; --i) {
        Vertex target = v.order[static_cast<size_t>(i)];
        VertexSet cone = vset::unite(ancestors(d, target), {target});
        VertexList to_place;
        for (Vertex w : cone)
            if (!finalized[static_cast<size_t>(w)]) to_place.push_back(w);
        std::sort(to_place.begin(), to_place.end(),
                  [&](Vertex a, Vertex bb) { return topo_pos[a] < topo_pos[bb]; });
        for (Vertex w : to_place) {
            out.steps.push_back({PebbleOp::Place, w});
            pebbled[static_cast<size_t>(w)] = 1;
            ++count;
            out.budget = std::max(out.budget, count);
        }
        for (Vertex w : to_place)
            if (w != target) {
                out.steps.push_back({PebbleOp::Remove, w});
                pebbled[static_cast<size_t>(w)] = 0;
                --count;
            }
        finalized[static_cast<size_t>(target)] = 1;
    }
    return out;
}

// ------------------------------------------------------------------- A-star

namespace {

struct BlockCache {
    int M;
    long long reads = 0, writes = 0;
    std::set<Vertex> cached;
    std::vector<char>& written;
    std::vector<std::vector<int>>& use_steps;  // per vertex, block-step indexes
    std::vector<size_t>& use_ptr;
    std::vector<IoStep>& steps;
    int now = 0;

    bool has_future_use(Vertex x) const {
        const auto& u = use_steps[static_cast<size_t>(x)];
        size_t p = use_ptr[static_cast<size_t>(x)];
        while (p < u.size() && u[p] <= now) ++p;
        return p < u.size();
    }
    int next_use(Vertex x) const {
        const auto& u = use_steps[static_cast<size_t>(x)];
        size_t p = use_ptr[static_cast<size_t>(x)];
        while (p < u.size() && u[p] <= now) ++p;
        return p < u.size() ? u[p] : std::numeric_limits<int>::max();
    }
    void make_room(const std::set<Vertex>& pinned) {
        while (static_cast<int>(cached.size()) >= M) {
            // Victim preference: dead, then written with the furthest next
            // use, then unwritten (spilled with a write).
            Vertex victim = -1;
            std::tuple<int, int, int> best{};
            for (Vertex x : cached) {
                if (pinned.count(x)) continue;
                bool dead = !has_future_use(x);
                int rank = dead ? 0 : (written[static_cast<size_t>(x)] ? 1 : 2);
                std::tuple<int, int, int> key{rank, dead ? 0 : -next_use(x), x};
                if (victim < 0 || key < best) {
                    victim = x;
                    best = key;
                }
            }
            if (victim < 0) throw dag_error("astar: cache wedged, M too small");
            if (std::get<0>(best) == 2) {
                steps.push_back({StepKind::Write, victim});
                ++writes;
                written[static_cast<size_t>(victim)] = 1;
            }
            cached.erase(victim);
        }
    }
    void read(Vertex x, const std::set<Vertex>& pinned) {
        make_room(pinned);
        steps.push_back({StepKind::Read, x});
        ++reads;
        cached.insert(x);
    }
};

}  // namespace

IoComputation run_diamond_astar(int q, int b, int M, AstarStats* stats) {
    if (q != 2)
        throw dag_error("astar: only q=2 diamonds are supported (general q blocks are not "
                        "constructed)");
    if (b < 2) throw dag_error("astar: diamond needs b >= 2");
    if (M < 2) throw dag_error("astar: needs M >= 2 (one operand plus the result)");
    GeneratedDag g = generate(DiamondSpec{q, b});
    const Dag& dag = g.dag;
    const int side = (M - 1) / (q - 1) + 1;  // largest with (side-1)(q-1)+1 <= M
    const int per_row = (b + side - 1) / side;
    auto block_of = [&](Vertex v) {
        auto [x, y] = g.meta.coords[static_cast<size_t>(v)];
        return (x / side) * per_row + (y / side);
    };
    const Vertex output = dag.outputs().front();

    std::map<int, VertexList> members;
    for (int v = 0; v < dag.n(); ++v) members[block_of(v)].push_back(v);
    std::vector<int> block_ids;
    for (auto& [id, verts] : members) block_ids.push_back(id);
    std::sort(block_ids.begin(), block_ids.end(), [&](int a, int c) {
        int ai = a / per_row, aj = a % per_row, ci = c / per_row, cj = c % per_row;
        if (ai + aj != ci + cj) return ai + aj < ci + cj;
        return ai < ci;
    });

    IoComputation out;
    out.M = M;
    std::vector<char> written(static_cast<size_t>(dag.n()), 0);
    if (stats) {
        *stats = {};
        stats->block_side = side;
        stats->blocks = static_cast<int>(block_ids.size());
    }

    for (int id : block_ids) {
        VertexList verts = members[id];
        std::sort(verts.begin(), verts.end(), [&](Vertex a, Vertex c) {
            auto [xa, ya] = g.meta.coords[static_cast<size_t>(a)];
            auto [xc, yc] = g.meta.coords[static_cast<size_t>(c)];
            int da = (xa % side) + (ya % side), dc = (xc % side) + (yc % side);
            if (da != dc) return da < dc;
            return xa < xc;
        });
        // Per-block operand schedule (block-step indexes per value).
        std::vector<std::vector<int>> use_steps(static_cast<size_t>(dag.n()));
        std::vector<size_t> use_ptr(static_cast<size_t>(dag.n()), 0);
        std::set<Vertex> externals;
        for (int s = 0; s < static_cast<int>(verts.size()); ++s)
            for (Vertex p : dag.preds(verts[static_cast<size_t>(s)])) {
                use_steps[static_cast<size_t>(p)].push_back(s);
                if (block_of(p) != id) externals.insert(p);
            }

        BlockCache cache{M, 0, 0, {}, written, use_steps, use_ptr, out.steps, 0};
        int cross_writes = 0;
        for (int s = 0; s < static_cast<int>(verts.size()); ++s) {
            Vertex v = verts[static_cast<size_t>(s)];
            cache.now = s;
            std::set<Vertex> pinned(dag.preds(v).begin(), dag.preds(v).end());
            if (dag.preds(v).empty()) {
                // The global input is initially stored in slow memory.
                cache.read(v, pinned);
            } else {
                for (Vertex p : dag.preds(v))
                    if (!cache.cached.count(p)) {
                        if (!written[static_cast<size_t>(p)] &&
                            !vset::contains(dag.inputs(), p))
                            throw dag_error("astar: operand not in slow memory");
                        cache.read(p, pinned);
                    }
                // Sliding transition: operands consumed at this step with no
                // later use free their slots for the result.
                for (Vertex p : dag.preds(v))
                    if (!cache.has_future_use(p)) cache.cached.erase(p);
                cache.make_room({});
                out.steps.push_back({StepKind::Compute, v});
                cache.cached.insert(v);
            }
            bool cross = v == output;
            for (Vertex w : dag.succs(v))
                if (block_of(w) != id) cross = true;
            if (cross) {
                out.steps.push_back({StepKind::Write, v});
                ++cache.writes;
                written[static_cast<size_t>(v)] = 1;
                ++cross_writes;
            }
        }
        if (stats) {
            stats->max_block_io = std::max(stats->max_block_io, cache.reads + cache.writes);
            stats->max_cross_writes = std::max(stats->max_cross_writes, cross_writes);
            stats->max_cross_reads =
                std::max(stats->max_cross_reads, static_cast<int>(externals.size()));
        }
    }
    return out;
}

// ------------------------------------------------------------------- greedy

IoComputation greedy_computation(const Dag& d, const VisitSequence& order, int M,
                                 EvictionPolicy policy) {
    if (!order.complete(d)) throw dag_error("greedy: order must cover all vertices");
    {
        std::vector<char> seen(static_cast<size_t>(d.n()), 0);
        for (Vertex v : order.order) {
            for (Vertex p : d.preds(v))
                if (!seen[static_cast<size_t>(p)]) throw dag_error("greedy: order not topological");
            seen[static_cast<size_t>(v)] = 1;
        }
    }
    if (M < d.max_in_degree() + 1)
        throw dag_error("greedy: infeasible cache size, need max in-degree + 1");

    const int n = d.n();
    std::vector<char> is_input(static_cast<size_t>(n), 0);
    for (Vertex v : d.inputs()) is_input[static_cast<size_t>(v)] = 1;
    std::vector<char> is_output(static_cast<size_t>(n), 0);
    for (Vertex v : d.outputs()) is_output[static_cast<size_t>(v)] = 1;

    // use positions: step index where each vertex is consumed as an operand.
    std::vector<std::vector<int>> use_at(static_cast<size_t>(n));
    for (int s = 0; s < n; ++s)
        for (Vertex p : d.preds(order.order[static_cast<size_t>(s)]))
            use_at[static_cast<size_t>(p)].push_back(s);
    std::vector<size_t> uptr(static_cast<size_t>(n), 0);

    IoComputation out;
    out.M = M;
    std::set<Vertex> cached;
    std::vector<char> written(static_cast<size_t>(n), 0);
    std::vector<int> last_touch(static_cast<size_t>(n), -1);
    int clock = 0;

    auto next_use = [&](Vertex x, int s) {
        const auto& u = use_at[static_cast<size_t>(x)];
        size_t p = uptr[static_cast<size_t>(x)];
        while (p < u.size() && u[p] < s) ++p;
        return p < u.size() ? u[p] : std::numeric_limits<int>::max();
    };
    auto make_room = [&](const std::set<Vertex>& pinned, int s) {
        while (static_cast<int>(cached.size()) >= M) {
            Vertex victim = -1;
            long long victim_key = -1;
            for (Vertex x : cached) {
                if (pinned.count(x)) continue;
                long long key;
                if (policy == EvictionPolicy::FurthestNextUse) {
                    int nu = next_use(x, s);
                    key = static_cast<long long>(nu);
                } else {
                    key = static_cast<long long>(std::numeric_limits<int>::max()) -
                          last_touch[static_cast<size_t>(x)];
                }
                if (victim < 0 || key > victim_key) {
                    victim = x;
                    victim_key = key;
                }
            }
            if (victim < 0) throw dag_error("greedy: cache wedged");
            bool needed_later = next_use(victim, s) != std::numeric_limits<int>::max();
            if ((needed_later || is_output[static_cast<size_t>(victim)]) &&
                !written[static_cast<size_t>(victim)]) {
                out.steps.push_back({StepKind::Write, victim});
                written[static_cast<size_t>(victim)] = 1;
            }
            cached.erase(victim);
        }
    };

    for (int s = 0; s < n; ++s) {
        Vertex v = order.order[static_cast<size_t>(s)];
        if (is_input[static_cast<size_t>(v)]) {
            // Inputs are read on demand; touch isolated inputs so the trace
            // covers them.
            if (d.succs(v).empty()) {
                make_room({}, s);
                out.steps.push_back({StepKind::Read, v});
                cached.insert(v);
                last_touch[static_cast<size_t>(v)] = clock++;
            }
            continue;
        }
        std::set<Vertex> pinned(d.preds(v).begin(), d.preds(v).end());
        for (Vertex p : d.preds(v))
            if (!cached.count(p)) {
                if (!is_input[static_cast<size_t>(p)] && !written[static_cast<size_t>(p)])
                    throw dag_error("greedy: operand lost without a write");
                make_room(pinned, s);
                out.steps.push_back({StepKind::Read, p});
                cached.insert(p);
                last_touch[static_cast<size_t>(p)] = clock++;
            }
        make_room(pinned, s + 1);
        out.steps.push_back({StepKind::Compute, v});
        cached.insert(v);
        last_touch[static_cast<size_t>(v)] = clock++;
        for (Vertex p : d.preds(v)) {
            auto& ptr = uptr[static_cast<size_t>(p)];
            const auto& u = use_at[static_cast<size_t>(p)];
            while (ptr < u.size() && u[ptr] <= s) ++ptr;
        }
        if (is_output[static_cast<size_t>(v)] && !written[static_cast<size_t>(v)]) {
            out.steps.push_back({StepKind::Write, v});
            written[static_cast<size_t>(v)] = 1;
        }
    }
    return out;
}

}  // namespace dagvisit
