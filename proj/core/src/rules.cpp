#include "dagvisit/rules.hpp"

#include <algorithm>

namespace dagvisit {

VisitRule VisitRule::top(const Dag& d) {
    VisitRule r;
    r.kind_ = Kind::Top;
    r.n_ = d.n();
    return r;
}

VisitRule VisitRule::singleton(const Dag& d) {
    VisitRule r;
    r.kind_ = Kind::Singleton;
    r.n_ = d.n();
    return r;
}

VisitRule VisitRule::diamond_blocked(const GeneratedDag& g, int side) {
    if (!g.meta.is_mesh_diamond())
        throw dag_error("diamond-blocked rule needs a q=2 mesh diamond with coordinates");
    if (side < 1) throw dag_error("diamond-blocked rule needs side >= 1");
    VisitRule r;
    r.kind_ = Kind::DiamondBlocked;
    r.n_ = g.dag.n();
    r.side_ = side;
    const int b = g.meta.diamond_b;
    const int per_row = (b + side - 1) / side;
    r.blocks_.resize(static_cast<size_t>(r.n_));
    for (int v = 0; v < r.n_; ++v) {
        auto [x, y] = g.meta.coords[static_cast<size_t>(v)];
        r.blocks_[static_cast<size_t>(v)] = (x / side) * per_row + (y / side);
    }
    return r;
}

VisitRule VisitRule::explicit_rule(const Dag& d, std::vector<std::vector<VertexSet>> table) {
    if (static_cast<int>(table.size()) != d.n())
        throw dag_error("explicit rule table size mismatch");
    for (int v = 0; v < d.n(); ++v) {
        auto& family = table[static_cast<size_t>(v)];
        if (family.empty()) throw dag_error("empty enabler family at vertex " + std::to_string(v));
        for (auto& q : family) {
            q = vset::from_unsorted(q);
            if (!vset::is_subset(q, d.preds(v)))
                throw dag_error("enabler of vertex " + std::to_string(v) +
                                " is not a predecessor subset");
        }
        std::sort(family.begin(), family.end());
        family.erase(std::unique(family.begin(), family.end()), family.end());
    }
    VisitRule r;
    r.kind_ = Kind::Explicit;
    r.n_ = d.n();
    r.table_ = std::move(table);
    return r;
}

void VisitRule::check_target(const Dag& d) const {
    if (d.n() != n_) throw dag_error("rule/graph mismatch: rule targets a different vertex count");
}

const VertexSet& VisitRule::block_preds(const Dag& d, Vertex v) const {
    if (!block_preds_ready_) {
        block_preds_.resize(static_cast<size_t>(n_));
        for (int u = 0; u < n_; ++u)
            for (Vertex p : d.preds(u))
                if (blocks_[static_cast<size_t>(p)] == blocks_[static_cast<size_t>(u)])
                    block_preds_[static_cast<size_t>(u)].push_back(p);
        block_preds_ready_ = true;
    }
    return block_preds_[static_cast<size_t>(v)];
}

namespace {

bool all_marked(const VertexSet& s, const std::vector<char>& marks) {
    for (Vertex u : s)
        if (!marks[static_cast<size_t>(u)]) return false;
    return true;
}

bool any_marked(const VertexSet& s, const std::vector<char>& marks) {
    for (Vertex u : s)
        if (marks[static_cast<size_t>(u)]) return true;
    return false;
}

}  // namespace

bool VisitRule::is_enabled(const Dag& d, Vertex v, const std::vector<char>& visited) const {
    switch (kind_) {
        case Kind::Top:
            return all_marked(d.preds(v), visited);
        case Kind::Singleton:
            return d.preds(v).empty() || any_marked(d.preds(v), visited);
        case Kind::DiamondBlocked: {
            const VertexSet& bp = block_preds(d, v);
            return bp.empty() || any_marked(bp, visited);
        }
        case Kind::Explicit:
            for (const auto& q : table_[static_cast<size_t>(v)])
                if (all_marked(q, visited)) return true;
            return false;
    }
    return false;
}

bool VisitRule::has_nonempty_enabler_in(const Dag& d, Vertex v,
                                        const std::vector<char>& visited) const {
    switch (kind_) {
        case Kind::Top:
            return !d.preds(v).empty() && all_marked(d.preds(v), visited);
        case Kind::Singleton:
            return any_marked(d.preds(v), visited);
        case Kind::DiamondBlocked:
            return any_marked(block_preds(d, v), visited);
        case Kind::Explicit:
            for (const auto& q : table_[static_cast<size_t>(v)])
                if (!q.empty() && all_marked(q, visited)) return true;
            return false;
    }
    return false;
}

bool VisitRule::enabled_by_empty(const Dag& d, Vertex v) const {
    switch (kind_) {
        case Kind::Top:
        case Kind::Singleton:
            return d.preds(v).empty();
        case Kind::DiamondBlocked:
            return block_preds(d, v).empty();
        case Kind::Explicit:
            for (const auto& q : table_[static_cast<size_t>(v)])
                if (q.empty()) return true;
            return false;
    }
    return false;
}

std::vector<VertexSet> VisitRule::enablers(const Dag& d, Vertex v) const {
    d.check_vertex(v);
    std::vector<VertexSet> family;
    switch (kind_) {
        case Kind::Top:
            family.push_back(d.preds(v));
            break;
        case Kind::Singleton:
            if (d.preds(v).empty())
                family.push_back({});
            else
                for (Vertex u : d.preds(v)) family.push_back({u});
            break;
        case Kind::DiamondBlocked: {
            const VertexSet& bp = block_preds(d, v);
            if (bp.empty())
                family.push_back({});
            else
                for (Vertex u : bp) family.push_back({u});
            break;
        }
        case Kind::Explicit:
            family = table_[static_cast<size_t>(v)];
            break;
    }
    return family;
}

bool MaskRule::enabled(Vertex v, uint32_t visited) const {
    const Entry& e = entries[static_cast<size_t>(v)];
    switch (e.mode) {
        case Mode::Any:
            return e.mask == 0 || (e.mask & visited) != 0;
        case Mode::All:
            return (e.mask & visited) == e.mask;
        case Mode::List:
            for (uint32_t q : e.enablers)
                if ((q & visited) == q) return true;
            return false;
    }
    return false;
}

bool MaskRule::in_boundary(Vertex v, uint32_t visited) const {
    const Entry& e = entries[static_cast<size_t>(v)];
    switch (e.mode) {
        case Mode::Any:
            return (e.mask & visited) != 0;
        case Mode::All:
            return e.mask != 0 && (e.mask & visited) == e.mask;
        case Mode::List:
            for (uint32_t q : e.enablers)
                if (q != 0 && (q & visited) == q) return true;
            return false;
    }
    return false;
}

MaskRule compile_mask_rule(const Dag& d, const VisitRule& r) {
    r.check_target(d);
    if (d.n() > 32) throw dag_error("mask rule compilation limited to n <= 32");
    MaskRule mr;
    mr.entries.resize(static_cast<size_t>(d.n()));
    for (int v = 0; v < d.n(); ++v) {
        MaskRule::Entry& e = mr.entries[static_cast<size_t>(v)];
        switch (r.kind()) {
            case VisitRule::Kind::Top: {
                e.mode = MaskRule::Mode::All;
                for (Vertex u : d.preds(v)) e.mask |= 1u << u;
                break;
            }
            case VisitRule::Kind::Singleton: {
                e.mode = MaskRule::Mode::Any;
                for (Vertex u : d.preds(v)) e.mask |= 1u << u;
                break;
            }
            case VisitRule::Kind::DiamondBlocked: {
                e.mode = MaskRule::Mode::Any;
                for (Vertex u : d.preds(v))
                    if (r.block_of(u) == r.block_of(v)) e.mask |= 1u << u;
                break;
            }
            case VisitRule::Kind::Explicit: {
                e.mode = MaskRule::Mode::List;
                for (const auto& q : r.enablers(d, v)) {
                    uint32_t m = 0;
                    for (Vertex u : q) m |= 1u << u;
                    e.enablers.push_back(m);
                }
                break;
            }
        }
    }
    return mr;
}

}  // namespace dagvisit
