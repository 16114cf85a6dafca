#include "dagvisit/visit.hpp"

#include <algorithm>

namespace dagvisit {

VisitSequence VisitSequence::of(const Dag& d, VertexList order) {
    VisitSequence s;
    s.pos.assign(static_cast<size_t>(d.n()), -1);
    for (size_t i = 0; i < order.size(); ++i) {
        Vertex v = order[i];
        d.check_vertex(v);
        if (s.pos[static_cast<size_t>(v)] >= 0)
            throw dag_error("repeated vertex " + std::to_string(v) + " in sequence");
        s.pos[static_cast<size_t>(v)] = static_cast<int>(i);
    }
    s.order = std::move(order);
    return s;
}

SequenceCheck is_r_sequence(const Dag& d, const VisitRule& r, const VisitSequence& s) {
    r.check_target(d);
    std::vector<char> visited(static_cast<size_t>(d.n()), 0);
    for (size_t i = 0; i < s.order.size(); ++i) {
        Vertex v = s.order[i];
        if (!r.is_enabled(d, v, visited)) return {false, static_cast<int>(i)};
        visited[static_cast<size_t>(v)] = 1;
    }
    return {};
}

VertexSet boundary(const Dag& d, const VisitRule& r, const VertexSet& visited) {
    r.check_target(d);
    std::vector<char> marks(static_cast<size_t>(d.n()), 0);
    for (Vertex v : visited) {
        d.check_vertex(v);
        marks[static_cast<size_t>(v)] = 1;
    }
    VertexSet out;
    for (int v = 0; v < d.n(); ++v)
        if (!marks[static_cast<size_t>(v)] && r.has_nonempty_enabler_in(d, v, marks))
            out.push_back(v);
    return out;
}

namespace {

// Incremental boundary tracker: only successors of the newly visited vertex
// can enter the boundary, for any rule (enablers are predecessor subsets).
struct BoundaryTracker {
    const Dag& d;
    const VisitRule& r;
    std::vector<char> visited;
    std::vector<char> in_boundary;
    int size = 0;

    BoundaryTracker(const Dag& dag, const VisitRule& rule)
        : d(dag), r(rule), visited(static_cast<size_t>(dag.n()), 0),
          in_boundary(static_cast<size_t>(dag.n()), 0) {}

    void add(Vertex v) {
        visited[static_cast<size_t>(v)] = 1;
        if (in_boundary[static_cast<size_t>(v)]) {
            in_boundary[static_cast<size_t>(v)] = 0;
            --size;
        }
        for (Vertex w : d.succs(v))
            if (!visited[static_cast<size_t>(w)] && !in_boundary[static_cast<size_t>(w)] &&
                r.has_nonempty_enabler_in(d, w, visited)) {
                in_boundary[static_cast<size_t>(w)] = 1;
                ++size;
            }
    }
};

}  // namespace

std::vector<int> boundary_profile(const Dag& d, const VisitRule& r, const VisitSequence& s) {
    r.check_target(d);
    BoundaryTracker tracker(d, r);
    std::vector<int> profile;
    profile.reserve(s.order.size());
    for (Vertex v : s.order) {
        if (!r.is_enabled(d, v, tracker.visited))
            throw dag_error("sequence is not an r-sequence at position " +
                            std::to_string(profile.size()));
        tracker.add(v);
        profile.push_back(tracker.size);
    }
    return profile;
}

int boundary_complexity_of_sequence(const Dag& d, const VisitRule& r, const VisitSequence& s) {
    int best = 0;
    for (int b : boundary_profile(d, r, s)) best = std::max(best, b);
    return best;
}

VertexSet enabled_reach_set(const Dag& d, const VisitRule& r, const VertexSet& visited,
                            Vertex v) {
    r.check_target(d);
    d.check_vertex(v);
    std::vector<char> marks(static_cast<size_t>(d.n()), 0);
    for (Vertex u : visited) marks[static_cast<size_t>(u)] = 1;
    if (!marks[static_cast<size_t>(v)]) throw dag_error("enabled_reach: v must be visited");

    // Saturate to a fixed point; the addition order itself witnesses the
    // extension sequence required by the definition.
    VertexSet candidates;
    for (Vertex u : descendants(d, v))
        if (!marks[static_cast<size_t>(u)]) candidates.push_back(u);
    VertexSet reach;
    bool grew = true;
    while (grew) {
        grew = false;
        for (Vertex w : candidates)
            if (!marks[static_cast<size_t>(w)] && r.is_enabled(d, w, marks)) {
                marks[static_cast<size_t>(w)] = 1;
                reach.push_back(w);
                grew = true;
            }
    }
    std::sort(reach.begin(), reach.end());
    return reach;
}

VertexSet enabled_reach(const Dag& d, const VisitRule& r, const VisitSequence& s, Vertex v) {
    if (!s.contains(v)) throw dag_error("enabled_reach: v not in the sequence");
    return enabled_reach_set(d, r, vset::from_unsorted(s.order), v);
}

RestrictedRule restrict_rule(const Dag& d, const VisitRule& r, const VisitSequence& s,
                             const VertexSet& reach) {
    r.check_target(d);
    for (Vertex u : reach)
        if (s.contains(u)) throw dag_error("restrict_rule: reach overlaps the sequence");
    RestrictedRule out;
    out.sub = induced_subdag(d, reach);
    std::vector<std::vector<VertexSet>> table(reach.size());
    for (size_t i = 0; i < reach.size(); ++i) {
        Vertex u = out.sub.to_orig[i];
        for (const auto& q : r.enablers(d, u)) {
            VertexSet rest;
            bool inside = true;
            for (Vertex w : q) {
                if (s.contains(w)) continue;
                int sub_id = out.sub.to_sub[static_cast<size_t>(w)];
                if (sub_id < 0) {
                    inside = false;
                    break;
                }
                rest.push_back(sub_id);
            }
            if (inside) table[i].push_back(vset::from_unsorted(rest));
        }
        if (table[i].empty())
            throw dag_error("restrict_rule: reach/sequence mismatch at vertex " +
                            std::to_string(u));
    }
    out.rule = VisitRule::explicit_rule(out.sub.dag, std::move(table));
    return out;
}

VertexSet entering_boundary(const Dag& d_R, const VisitRule& r, const VisitSequence& s,
                            int cut_prev, int cut) {
    r.check_target(d_R);
    const int len = static_cast<int>(s.order.size());
    if (!(0 <= cut_prev && cut_prev < cut && cut <= len))
        throw dag_error("entering_boundary: cut indices out of range");
    VertexSet prefix(s.order.begin(), s.order.begin() + cut_prev);
    VertexSet base = vset::unite(d_R.inputs(), boundary(d_R, r, vset::from_unsorted(prefix)));
    VertexSet segment =
        vset::from_unsorted(VertexList(s.order.begin() + cut_prev, s.order.begin() + cut));
    return vset::intersect(base, segment);
}

}  // namespace dagvisit
