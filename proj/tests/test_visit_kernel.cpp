#include <doctest.h>

#include <functional>
#include <random>

#include "dagvisit/bruteforce.hpp"
#include "dagvisit/oracles.hpp"
#include "dagvisit/families.hpp"
#include "dagvisit/random_dag.hpp"
#include "dagvisit/visit.hpp"

using namespace dagvisit;

namespace {

VertexSet mask_to_set(uint32_t mask) {
    VertexSet out;
    for (int v = 0; v < 32; ++v)
        if (mask & (1u << v)) out.push_back(v);
    return out;
}

}  // namespace

TEST_CASE("is_r_sequence basics") {
    Dag edgeless(4, {});
    VisitRule sin = VisitRule::singleton(edgeless);
    CHECK(is_r_sequence(edgeless, sin, VisitSequence::of(edgeless, {3, 1, 0, 2})).ok);

    GeneratedDag dia = generate(DiamondSpec{2, 2});
    VisitRule top = VisitRule::top(dia.dag);
    Vertex in = dia.dag.inputs().front();
    Vertex out = dia.dag.outputs().front();
    VertexList mids;
    for (int v = 0; v < 4; ++v)
        if (v != in && v != out) mids.push_back(v);
    CHECK(is_r_sequence(dia.dag, top,
                        VisitSequence::of(dia.dag, {in, mids[0], mids[1], out}))
              .ok);
    auto bad = is_r_sequence(dia.dag, top, VisitSequence::of(dia.dag, {out, in}));
    CHECK_FALSE(bad.ok);
    CHECK(bad.first_violation == 0);
    CHECK_THROWS_AS(VisitSequence::of(dia.dag, {in, in}), dag_error);
}

TEST_CASE("boundary matches the literal definition on all subsets") {
    std::mt19937 rng(17);
    RandomDagOptions ro;
    ro.n = 12;
    for (int inst = 0; inst < 2; ++inst) {
        Dag d = random_layered_dag(ro, rng);
        std::vector<VisitRule> rules{VisitRule::singleton(d), VisitRule::top(d)};
        for (const VisitRule& r : rules)
            for (uint32_t mask = 0; mask < (1u << 12); ++mask) {
                VertexSet visited = mask_to_set(mask);
                CHECK(boundary(d, r, visited) ==
                      bruteforce::boundary_by_definition(d, r, visited));
            }
    }
}

TEST_CASE("boundary corner cases") {
    GeneratedDag rp = generate(ReversePyramidSpec{2, 8});
    VisitRule sin = VisitRule::singleton(rp.dag);
    CHECK(boundary(rp.dag, sin, {}).empty());
    Vertex apex = rp.dag.inputs().front();
    VertexSet b = boundary(rp.dag, sin, {apex});
    CHECK(b == rp.dag.succs(apex));
    CHECK(b.size() == 2);
}

TEST_CASE("boundary complexity of a sequence") {
    Dag single(1, {});
    VisitRule sin = VisitRule::singleton(single);
    CHECK(boundary_complexity_of_sequence(single, sin, VisitSequence::of(single, {0})) == 0);

    // Prefix-by-prefix agreement with the literal recomputation.
    std::mt19937 rng(23);
    RandomDagOptions ro;
    ro.n = 12;
    for (int inst = 0; inst < 5; ++inst) {
        Dag d = random_layered_dag(ro, rng);
        VisitRule top = VisitRule::top(d);
        VisitSequence seq = VisitSequence::of(d, topological_order(d));
        auto profile = boundary_profile(d, top, seq);
        VertexSet prefix;
        for (size_t i = 0; i < seq.order.size(); ++i) {
            prefix = vset::unite(prefix, {seq.order[i]});
            CHECK(profile[i] ==
                  (int)bruteforce::boundary_by_definition(d, top, prefix).size());
        }
    }
}

TEST_CASE("enabled reach") {
    SUBCASE("singleton reach is descendants minus the sequence") {
        std::mt19937 rng(31);
        RandomDagOptions ro;
        ro.n = 14;
        for (int inst = 0; inst < 10; ++inst) {
            Dag d = random_layered_dag(ro, rng);
            VisitRule sin = VisitRule::singleton(d);
            VertexList topo = topological_order(d);
            int k = std::uniform_int_distribution<int>(1, d.n())(rng);
            VisitSequence seq = VisitSequence::of(d, VertexList(topo.begin(), topo.begin() + k));
            Vertex v = seq.order[static_cast<size_t>(
                std::uniform_int_distribution<int>(0, k - 1)(rng))];
            VertexSet expected =
                vset::subtract(descendants(d, v), vset::from_unsorted(seq.order));
            CHECK(enabled_reach(d, sin, seq, v) == expected);
        }
    }
    SUBCASE("top-rule reach stalls on a shared successor") {
        Dag d(3, {{0, 2}, {1, 2}});
        VisitRule top = VisitRule::top(d);
        CHECK(enabled_reach(d, top, VisitSequence::of(d, {0}), 0).empty());
    }
    SUBCASE("top-rule reach on the diamond matches the extension search") {
        // Mesh border vertices have a single predecessor, so the reach of the
        // input saturates to every descendant.
        GeneratedDag dia = generate(DiamondSpec{2, 3});
        VisitRule top = VisitRule::top(dia.dag);
        Vertex in = dia.dag.inputs().front();
        VisitSequence seq = VisitSequence::of(dia.dag, {in});
        VertexSet reach = enabled_reach(dia.dag, top, seq, in);
        CHECK(reach == bruteforce::enabled_reach_by_search(dia.dag, top, seq, in));
        CHECK(reach == descendants(dia.dag, in));
    }
    SUBCASE("saturation equals the exhaustive extension search") {
        std::mt19937 rng(37);
        RandomDagOptions ro;
        ro.n = 8;
        for (int inst = 0; inst < 12; ++inst) {
            Dag d = random_layered_dag(ro, rng);
            for (auto kind : {0, 1}) {
                VisitRule r = kind ? VisitRule::top(d) : VisitRule::singleton(d);
                VertexList topo = topological_order(d);
                int k = std::uniform_int_distribution<int>(1, d.n())(rng);
                VisitSequence seq =
                    VisitSequence::of(d, VertexList(topo.begin(), topo.begin() + k));
                Vertex v = seq.order[static_cast<size_t>(
                    std::uniform_int_distribution<int>(0, k - 1)(rng))];
                CHECK(enabled_reach(d, r, seq, v) ==
                      bruteforce::enabled_reach_by_search(d, r, seq, v));
            }
        }
        Dag chain2(2, {{0, 1}});
        CHECK_THROWS_AS(enabled_reach(chain2, VisitRule::singleton(chain2),
                                      VisitSequence::of(chain2, {0}), 1),
                        dag_error);
    }
}

TEST_CASE("restrict rule") {
    SUBCASE("singleton restriction") {
        Dag d(4, {{0, 1}, {1, 2}, {1, 3}, {0, 3}});
        VisitRule sin = VisitRule::singleton(d);
        VisitSequence seq = VisitSequence::of(d, {0, 1});
        VertexSet reach = enabled_reach(d, sin, seq, 1);
        CHECK(reach == VertexSet{2, 3});
        RestrictedRule rr = restrict_rule(d, sin, seq, reach);
        // Vertex 2 (sub id 0) had pred 1 in the sequence, so {} is an enabler.
        CHECK(rr.rule.enabled_by_empty(rr.sub.dag, 0));
        CHECK(rr.rule.enabled_by_empty(rr.sub.dag, 1));
    }
    SUBCASE("concatenation and boundary containment, exhaustively") {
        std::mt19937 rng(41);
        RandomDagOptions ro;
        ro.n = 10;
        int done = 0;
        for (int inst = 0; inst < 30 && done < 12; ++inst) {
            Dag d = random_layered_dag(ro, rng);
            VisitRule sin = VisitRule::singleton(d);
            VertexList topo = topological_order(d);
            int k = std::uniform_int_distribution<int>(1, d.n() / 2)(rng);
            VisitSequence seq = VisitSequence::of(d, VertexList(topo.begin(), topo.begin() + k));
            Vertex v = seq.order[static_cast<size_t>(
                std::uniform_int_distribution<int>(0, k - 1)(rng))];
            VertexSet reach = enabled_reach(d, sin, seq, v);
            if (reach.empty() || reach.size() > 6) continue;
            ++done;
            RestrictedRule rr = restrict_rule(d, sin, seq, reach);
            // Enumerate every r'-visit of the sub-DAG by DFS.
            VertexList stack_order;
            std::vector<VertexList> visits;
            std::function<void()> rec = [&] {
                if (static_cast<int>(stack_order.size()) == rr.sub.dag.n()) {
                    visits.push_back(stack_order);
                    return;
                }
                std::vector<char> marks(static_cast<size_t>(rr.sub.dag.n()), 0);
                for (Vertex x : stack_order) marks[static_cast<size_t>(x)] = 1;
                for (int x = 0; x < rr.sub.dag.n(); ++x) {
                    if (marks[static_cast<size_t>(x)]) continue;
                    if (!rr.rule.is_enabled(rr.sub.dag, x, marks)) continue;
                    stack_order.push_back(x);
                    rec();
                    stack_order.pop_back();
                }
            };
            rec();
            CHECK(!visits.empty());
            VertexSet bound_s = boundary(d, sin, vset::from_unsorted(seq.order));
            for (const VertexList& sub_visit : visits) {
                VertexList joined = seq.order;
                for (Vertex x : sub_visit)
                    joined.push_back(rr.sub.to_orig[static_cast<size_t>(x)]);
                VisitSequence whole = VisitSequence::of(d, joined);
                CHECK(is_r_sequence(d, sin, whole).ok);
                // B(s . psi'[1..i]) within B(s) union B'(psi'[1..i]).
                VertexSet sub_prefix;
                VertexSet joined_prefix = vset::from_unsorted(seq.order);
                for (Vertex x : sub_visit) {
                    sub_prefix = vset::unite(sub_prefix, {x});
                    joined_prefix =
                        vset::unite(joined_prefix, {rr.sub.to_orig[static_cast<size_t>(x)]});
                    VertexSet lhs = boundary(d, sin, joined_prefix);
                    VertexSet rhs = bound_s;
                    for (Vertex y : boundary(rr.sub.dag, rr.rule, sub_prefix))
                        rhs = vset::unite(rhs, {rr.sub.to_orig[static_cast<size_t>(y)]});
                    CHECK(vset::is_subset(lhs, rhs));
                }
            }
        }
        CHECK(done >= 5);
    }
}

TEST_CASE("entering boundary") {
    SUBCASE("single vertex, whole segment") {
        Dag d(1, {});
        VisitRule sin = VisitRule::singleton(d);
        VisitSequence seq = VisitSequence::of(d, {0});
        CHECK(entering_boundary(d, sin, seq, 0, 1) == VertexSet{0});
        CHECK_THROWS_AS(entering_boundary(d, sin, seq, 1, 1), dag_error);
    }
    SUBCASE("top rule entering boundary equals the minimum set in G") {
        std::mt19937 rng(47);
        RandomDagOptions ro;
        ro.n = 12;
        for (int inst = 0; inst < 10; ++inst) {
            Dag d = random_layered_dag(ro, rng);
            Dag rev = reverse(d);
            VisitRule top = VisitRule::top(rev);
            VisitSequence seq = VisitSequence::of(rev, topological_order(rev));
            int a = std::uniform_int_distribution<int>(0, d.n() - 1)(rng);
            int b = std::uniform_int_distribution<int>(a + 1, d.n())(rng);
            VertexSet seg(seq.order.begin() + a, seq.order.begin() + b);
            CHECK(entering_boundary(rev, top, seq, a, b) ==
                  minimum_set(d, vset::from_unsorted(seg)));
        }
    }
}

TEST_CASE("kernel invariants") {
    std::mt19937 rng(53);
    RandomDagOptions ro;
    ro.n = 12;
    for (int inst = 0; inst < 8; ++inst) {
        Dag d = random_layered_dag(ro, rng);
        VisitRule sin = VisitRule::singleton(d);
        VisitRule top = VisitRule::top(d);
        SUBCASE("") {}
        // Monotonicity for singleton and top rules.
        for (int rep = 0; rep < 20; ++rep) {
            uint32_t small = std::uniform_int_distribution<uint32_t>(0, (1u << d.n()) - 1)(rng);
            uint32_t extra = std::uniform_int_distribution<uint32_t>(0, (1u << d.n()) - 1)(rng);
            VertexSet s1 = mask_to_set(small);
            VertexSet s2 = mask_to_set(small | extra);
            for (const VisitRule* r : {&sin, &top}) {
                VertexSet b1 = vset::subtract(boundary(d, *r, s1), s2);
                CHECK(vset::is_subset(b1, boundary(d, *r, s2)));
            }
        }
        // Top boundary of S = non-sources whose predecessors all lie in S.
        for (int rep = 0; rep < 20; ++rep) {
            uint32_t mask = std::uniform_int_distribution<uint32_t>(0, (1u << d.n()) - 1)(rng);
            VertexSet S = mask_to_set(mask);
            VertexSet expected;
            for (int v = 0; v < d.n(); ++v)
                if (!vset::contains(S, v) && !d.preds(v).empty() &&
                    vset::is_subset(d.preds(v), S))
                    expected.push_back(v);
            CHECK(boundary(d, top, S) == expected);
        }
        // Rule ordering along top visits: top boundary never exceeds others.
        VisitSequence seq = VisitSequence::of(d, topological_order(d));
        auto top_profile = boundary_profile(d, top, seq);
        auto sin_profile = boundary_profile(d, sin, seq);
        for (size_t i = 0; i < seq.order.size(); ++i) CHECK(top_profile[i] <= sin_profile[i]);
        // Disjointness of top reaches across boundary vertices.
        VertexSet half(seq.order.begin(), seq.order.begin() + d.n() / 2);
        VertexSet bd = boundary(d, top, vset::from_unsorted(half));
        for (size_t i = 0; i < bd.size(); ++i)
            for (size_t j = i + 1; j < bd.size(); ++j) {
                VertexSet with_u = vset::unite(vset::from_unsorted(half), {bd[i]});
                VertexSet with_v = vset::unite(vset::from_unsorted(half), {bd[j]});
                VertexSet ru = enabled_reach_set(d, top, with_u, bd[i]);
                VertexSet rv = enabled_reach_set(d, top, with_v, bd[j]);
                CHECK(vset::intersect(ru, rv).empty());
            }
    }
}
