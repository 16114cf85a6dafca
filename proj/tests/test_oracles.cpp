#include <doctest.h>

#include <limits>
#include <random>

#include "dagvisit/bruteforce.hpp"
#include "dagvisit/builders.hpp"
#include "dagvisit/oracles.hpp"
#include "dagvisit/random_dag.hpp"

using namespace dagvisit;

TEST_CASE("exact boundary complexity") {
    Dag single(1, {});
    CHECK(exact_boundary_complexity(single, VisitRule::singleton(single)).value == 0);

    GeneratedDag rp = generate(ReversePyramidSpec{2, 3});
    auto res = exact_boundary_complexity(rp.dag, VisitRule::singleton(rp.dag));
    CHECK(res.value >= 2);
    CHECK(is_r_sequence(rp.dag, VisitRule::singleton(rp.dag), res.witness).ok);
    CHECK(boundary_complexity_of_sequence(rp.dag, VisitRule::singleton(rp.dag), res.witness) ==
          res.value);

    SUBCASE("matches enumeration on small instances") {
        std::mt19937 rng(83);
        for (int n = 2; n <= 7; ++n)
            for (int i = 0; i < 8; ++i) {
                RandomDagOptions ro;
                ro.n = n;
                Dag d = random_layered_dag(ro, rng);
                for (int kind = 0; kind < 2; ++kind) {
                    VisitRule r = kind ? VisitRule::top(d) : VisitRule::singleton(d);
                    CHECK(exact_boundary_complexity(d, r).value ==
                          bruteforce::boundary_complexity_by_enumeration(d, r));
                }
            }
    }
    SUBCASE("size limit") {
        OracleLimits lim;
        lim.max_n_subset_dp = 4;
        Dag d(5, {});
        CHECK_THROWS_AS(exact_boundary_complexity(d, VisitRule::singleton(d), lim), limit_error);
    }
}

TEST_CASE("exact pebbling number") {
    Dag single(1, {});
    auto res1 = exact_pebbling_number(single);
    CHECK(res1.number == 1);

    GeneratedDag p23 = generate(PyramidSpec{2, 3});
    auto p = exact_pebbling_number(p23.dag);
    CHECK(p.number >= 2);
    CHECK(validate_pebbling(p23.dag, p.witness).ok);
    Dag rev = reverse(p23.dag);
    CHECK(p.number >= exact_boundary_complexity(rev, VisitRule::singleton(rev)).value);

    GeneratedDag t22 = generate(TreeSpec{2, 2});
    CHECK(exact_pebbling_number(t22.dag).number >= 2);

    SUBCASE("theorem-1 inequality on random instances") {
        std::mt19937 rng(89);
        for (int i = 0; i < 12; ++i) {
            RandomDagOptions ro;
            ro.n = std::uniform_int_distribution<int>(2, 8)(rng);
            Dag d = random_layered_dag(ro, rng);
            int peb = exact_pebbling_number(d).number;
            Dag rd = reverse(d);
            CHECK(peb >= exact_boundary_complexity(rd, VisitRule::singleton(rd)).value);
            CHECK(peb >= exact_boundary_complexity(rd, VisitRule::top(rd)).value);
        }
    }
    SUBCASE("size limit") {
        OracleLimits lim;
        lim.max_n_pebbling = 3;
        CHECK_THROWS_AS(exact_pebbling_number(generate(PyramidSpec{2, 3}).dag, lim), limit_error);
    }
}

TEST_CASE("post-dominators and dominators") {
    GeneratedDag dia = generate(DiamondSpec{2, 4});
    SUBCASE("outputs are forced") {
        VertexSet outs = dia.dag.outputs();
        CHECK(min_post_dominator(dia.dag, outs).size == (int)outs.size());
    }
    SUBCASE("all paths leave the input") {
        CHECK(min_post_dominator(dia.dag, dia.dag.inputs()).size == 1);
        VertexSet all;
        for (int v = 0; v < dia.dag.n(); ++v) all.push_back(v);
        CHECK(min_dominator(dia.dag, all).size == 1);
    }
    SUBCASE("agreement with exhaustive subset search") {
        std::mt19937 rng(97);
        RandomDagOptions ro;
        ro.n = 12;
        for (int i = 0; i < 8; ++i) {
            Dag d = random_layered_dag(ro, rng);
            for (int j = 0; j < 3; ++j) {
                VertexList raw;
                for (int v = 0; v < d.n(); ++v)
                    if (std::uniform_int_distribution<int>(0, 2)(rng) == 0) raw.push_back(v);
                VertexSet X = vset::from_unsorted(raw);
                CutResult flow = min_post_dominator(d, X);
                CHECK(flow.size == bruteforce::min_post_dominator_exhaustive(d, X));
                CHECK(min_dominator(d, X).size == bruteforce::min_dominator_exhaustive(d, X));
                CHECK(min_dominator(d, X).size == min_post_dominator(reverse(d), X).size);
                // Witness cuts every X-to-output path.
                if (!X.empty()) {
                    std::vector<char> blocked(static_cast<size_t>(d.n()), 0);
                    for (Vertex v : flow.witness) blocked[static_cast<size_t>(v)] = 1;
                    std::vector<char> seen(static_cast<size_t>(d.n()), 0);
                    VertexList stack;
                    bool escaped = false;
                    for (Vertex v : X)
                        if (!blocked[static_cast<size_t>(v)]) {
                            if (d.succs(v).empty()) escaped = true;
                            stack.push_back(v);
                            seen[static_cast<size_t>(v)] = 1;
                        }
                    while (!stack.empty() && !escaped) {
                        Vertex u = stack.back();
                        stack.pop_back();
                        for (Vertex w : d.succs(u)) {
                            if (blocked[static_cast<size_t>(w)] || seen[static_cast<size_t>(w)])
                                continue;
                            if (d.succs(w).empty()) escaped = true;
                            seen[static_cast<size_t>(w)] = 1;
                            stack.push_back(w);
                        }
                    }
                    CHECK_FALSE(escaped);
                }
            }
        }
    }
}

TEST_CASE("minimum set") {
    GeneratedDag dia = generate(DiamondSpec{2, 4});
    VertexSet all;
    for (int v = 0; v < dia.dag.n(); ++v) all.push_back(v);
    CHECK(minimum_set(dia.dag, all) == dia.dag.outputs());
    CHECK(minimum_set(dia.dag, dia.dag.outputs()) == dia.dag.outputs());
    std::mt19937 rng(101);
    RandomDagOptions ro;
    ro.n = 15;
    Dag d = random_layered_dag(ro, rng);
    for (int j = 0; j < 10; ++j) {
        VertexList raw;
        for (int v = 0; v < d.n(); ++v)
            if (std::uniform_int_distribution<int>(0, 1)(rng)) raw.push_back(v);
        VertexSet X = vset::from_unsorted(raw);
        VertexSet ms = minimum_set(d, X);
        for (Vertex v : X) {
            bool has_succ_in_x = !vset::intersect(d.succs(v), X).empty();
            CHECK(vset::contains(ms, v) == !has_succ_in_x);
        }
    }
}

TEST_CASE("s-partitions") {
    GeneratedDag d33 = generate(DiamondSpec{2, 3});
    CHECK(min_s_partition_k(d33.dag, 2) == 1);

    Dag chain(5, {{0, 1}, {1, 2}, {2, 3}, {3, 4}});
    int k_chain = min_s_partition_k(chain, 1);
    CHECK(k_chain == bruteforce::min_s_partition_exhaustive(chain, 1));

    SUBCASE("nonincreasing in S, matches exhaustive search") {
        std::mt19937 rng(103);
        RandomDagOptions ro;
        ro.n = 7;
        for (int i = 0; i < 6; ++i) {
            Dag d = random_layered_dag(ro, rng);
            int prev = d.n() + 1;
            for (int S = 1; S <= 4; ++S) {
                int k = min_s_partition_k(d, S);
                CHECK(k == bruteforce::min_s_partition_exhaustive(d, S));
                CHECK(k <= prev);
                prev = k;
            }
        }
    }
}

TEST_CASE("disjoint paths") {
    Dag pair(2, {{0, 1}});
    PathSystem one = max_disjoint_paths(pair, {0}, {1}, {});
    CHECK(one.count == 1);

    SUBCASE("pyramid path lemma") {
        for (auto [q, b] : std::vector<std::pair<int, int>>{{2, 6}, {3, 5}}) {
            GeneratedDag py = generate(PyramidSpec{q, b});
            VertexSet path;
            for (int v = 0; v < py.dag.n(); ++v)
                if (py.meta.layer[static_cast<size_t>(v)] >= 1 &&
                    py.meta.offset[static_cast<size_t>(v)] == 0)
                    path.push_back(v);
            PathSystem ps = max_disjoint_paths(py.dag, py.dag.inputs(), path, path);
            CHECK(ps.count >= (b - 1) * (q - 1) + 1);
            CHECK((int)ps.paths.size() == ps.count);
            // Paths only share vertices on the allowed set.
            std::vector<int> hits(static_cast<size_t>(py.dag.n()), 0);
            for (const VertexList& p : ps.paths)
                for (Vertex v : p) ++hits[static_cast<size_t>(v)];
            for (int v = 0; v < py.dag.n(); ++v)
                if (hits[static_cast<size_t>(v)] > 1) CHECK(vset::contains(path, v));
        }
    }
    SUBCASE("diamond diagonal path systems") {
        // Prefixes of an input-to-diagonal path support |Pi'|(q-1)+1 paths.
        GeneratedDag dia = generate(DiamondSpec{2, 6});
        VertexSet diag;
        for (int v = 0; v < dia.dag.n(); ++v)
            if (dia.meta.on_diagonal[static_cast<size_t>(v)]) diag.push_back(v);
        VertexList pi;
        for (int x = 0; x < 5; ++x)
            for (int v = 0; v < dia.dag.n(); ++v) {
                auto [vx, vy] = dia.meta.coords[static_cast<size_t>(v)];
                if (vx == x && vy == 0) pi.push_back(v);
            }
        for (size_t take = 1; take <= pi.size(); ++take) {
            VertexSet prefix = vset::from_unsorted(VertexList(pi.begin(), pi.begin() + take));
            PathSystem ps = max_disjoint_paths(dia.dag, prefix, diag, prefix);
            CHECK(ps.count >= (int)take * (2 - 1) + 1);
        }
    }
    CHECK_THROWS_AS(max_disjoint_paths(pair, {}, {1}, {}), dag_error);
}

TEST_CASE("exact visit partition bound") {
    SUBCASE("edgeless graphs collapse to max{0, n-M}") {
        for (int n : {3, 5}) {
            Dag d(n, {});
            for (int M : {1, 2, 4}) {
                VisitRule sin = VisitRule::singleton(reverse(d));
                long long exact = exact_visit_partition_bound(d, sin, M, BoundMetric::Write);
                CHECK(exact == std::max(0, n - M));
            }
        }
    }
    SUBCASE("diamond{2,4} with the blocked rule meets the closed form") {
        GeneratedDag dia = generate(DiamondSpec{2, 4});
        GeneratedDag d_r = reversed(dia);
        BlockedVisit bv = build_diamond_blocked_visit(d_r, 1);
        OracleLimits lim;
        lim.max_n_visit_partition = 16;
        lim.time_budget_ms = 120000;
        long long exact =
            exact_visit_partition_bound(dia.dag, bv.rule, 1, BoundMetric::Write, lim);
        CHECK(exact >= 4);  // floor(4/2)^2 * 1
    }
    SUBCASE("monotone nonincreasing in M") {
        std::mt19937 rng(107);
        RandomDagOptions ro;
        ro.n = 7;
        for (int i = 0; i < 4; ++i) {
            Dag d = random_layered_dag(ro, rng);
            VisitRule sin = VisitRule::singleton(reverse(d));
            long long prev = std::numeric_limits<long long>::max();
            for (int M = 1; M <= 3; ++M) {
                long long v = exact_visit_partition_bound(d, sin, M, BoundMetric::Write);
                CHECK(v <= prev);
                prev = v;
            }
        }
    }
}
