#pragma once

#include <cstdint>
#include <optional>

#include "dagvisit/dag.hpp"
#include "dagvisit/families.hpp"

namespace dagvisit {

/// Per-vertex family of enabler sets. A vertex may be visited once one of its
/// enablers is fully visited; input-like vertices carry the family {{}}.
class VisitRule {
public:
    enum class Kind { Top, Singleton, DiamondBlocked, Explicit };

    static VisitRule top(const Dag& d);
    static VisitRule singleton(const Dag& d);
    /// Singleton rule restricted to side-`side` sub-diamond blocks of a
    /// (possibly reversed) q=2 mesh diamond; cross-block edges are disabled.
    static VisitRule diamond_blocked(const GeneratedDag& g, int side);
    /// table[v] lists the enablers of v; duplicates are removed, supersets kept.
    static VisitRule explicit_rule(const Dag& d, std::vector<std::vector<VertexSet>> table);

    Kind kind() const { return kind_; }
    int n() const { return n_; }
    int block_side() const { return side_; }
    int block_of(Vertex v) const { return blocks_.at(static_cast<size_t>(v)); }

    /// Some enabler of v is contained in `visited` (marks indexed by vertex).
    bool is_enabled(const Dag& d, Vertex v, const std::vector<char>& visited) const;
    /// Some nonempty enabler of v is contained in `visited`.
    bool has_nonempty_enabler_in(const Dag& d, Vertex v, const std::vector<char>& visited) const;
    /// True when {} is an enabler of v (v may start a sequence).
    bool enabled_by_empty(const Dag& d, Vertex v) const;

    /// Materialized enabler family of v (sorted, deduplicated).
    std::vector<VertexSet> enablers(const Dag& d, Vertex v) const;

    void check_target(const Dag& d) const;

private:
    Kind kind_ = Kind::Top;
    int n_ = 0;
    int side_ = 0;
    std::vector<int> blocks_;                       // DiamondBlocked
    std::vector<std::vector<VertexSet>> table_;     // Explicit

    const VertexSet& block_preds(const Dag& d, Vertex v) const;
    mutable bool block_preds_ready_ = false;
    mutable std::vector<VertexSet> block_preds_;
};

/// Bitmask form for the subset oracles (n <= 32).
struct MaskRule {
    enum class Mode { Any, All, List };
    struct Entry {
        Mode mode = Mode::Any;
        uint32_t mask = 0;
        std::vector<uint32_t> enablers;  // List only
    };
    std::vector<Entry> entries;

    bool enabled(Vertex v, uint32_t visited) const;
    bool in_boundary(Vertex v, uint32_t visited) const;
};

MaskRule compile_mask_rule(const Dag& d, const VisitRule& r);

}  // namespace dagvisit
