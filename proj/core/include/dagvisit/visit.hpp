#pragma once

#include "dagvisit/dag.hpp"
#include "dagvisit/rules.hpp"

namespace dagvisit {

struct VisitSequence {
    VertexList order;
    std::vector<int> pos;  // vertex -> index in order, -1 when absent

    static VisitSequence of(const Dag& d, VertexList order);
    bool complete(const Dag& d) const { return static_cast<int>(order.size()) == d.n(); }
    bool contains(Vertex v) const {
        return v >= 0 && v < static_cast<int>(pos.size()) && pos[static_cast<size_t>(v)] >= 0;
    }
};

struct SequenceCheck {
    bool ok = true;
    int first_violation = -1;  // 0-based index into the order
};

/// True iff every element has an enabler inside the preceding prefix.
SequenceCheck is_r_sequence(const Dag& d, const VisitRule& r, const VisitSequence& s);

/// { v not in visited : some nonempty enabler of v lies inside visited }.
/// Accepts arbitrary sets, not only rule-reachable prefixes.
VertexSet boundary(const Dag& d, const VisitRule& r, const VertexSet& visited);

/// |boundary| after each prefix s[0..i]; size equals |s|.
std::vector<int> boundary_profile(const Dag& d, const VisitRule& r, const VisitSequence& s);

/// Max prefix boundary size. Throws if s is not an r-sequence.
int boundary_complexity_of_sequence(const Dag& d, const VisitRule& r, const VisitSequence& s);

/// Descendants of v visitable by extending `visited` with descendants of v
/// only; computed by forward saturation.
VertexSet enabled_reach_set(const Dag& d, const VisitRule& r, const VertexSet& visited, Vertex v);
VertexSet enabled_reach(const Dag& d, const VisitRule& r, const VisitSequence& s, Vertex v);

struct RestrictedRule {
    InducedSubdag sub;
    VisitRule rule;  // explicit rule on sub ids
};

/// Enabler families { Q \ s : Q in r(u), Q \ s inside reach }, remapped.
RestrictedRule restrict_rule(const Dag& d, const VisitRule& r, const VisitSequence& s,
                             const VertexSet& reach);

/// (inputs(d_R) union boundary(prefix up to cut_prev)) intersected with the
/// segment s(cut_prev..cut]. Cuts are counts of visited vertices, 0-based.
VertexSet entering_boundary(const Dag& d_R, const VisitRule& r, const VisitSequence& s,
                            int cut_prev, int cut);

}  // namespace dagvisit
