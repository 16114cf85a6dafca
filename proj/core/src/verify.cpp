#include "dagvisit/verify.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <functional>
#include <future>
#include <random>
#include <sstream>
#include <thread>

#include "dagvisit/bruteforce.hpp"
#include "dagvisit/oracles.hpp"
#include "dagvisit/random_dag.hpp"

namespace dagvisit {

namespace {

struct Suite {
    std::string name;
    std::vector<CheckRow> rows;

    template <typename A, typename B>
    void expect(const std::string& check, const A& expected_rel, const B& observed, bool pass) {
        std::ostringstream e, o;
        e << expected_rel;
        o << observed;
        rows.push_back({name, check, e.str(), o.str(), pass});
    }
    void le(const std::string& check, long long lhs, long long rhs) {
        expect(check, "<= " + std::to_string(rhs), lhs, lhs <= rhs);
    }
    void ge(const std::string& check, long long lhs, long long rhs) {
        expect(check, ">= " + std::to_string(rhs), lhs, lhs >= rhs);
    }
    void eq(const std::string& check, long long lhs, long long rhs) {
        expect(check, std::to_string(rhs), lhs, lhs == rhs);
    }
    void truthy(const std::string& check, bool ok) { expect(check, "true", ok ? "true" : "false", ok); }
};

int parallel_count_failures(int count, int threads, const std::function<bool(int)>& cell_ok,
                            std::vector<int>* failed_cells) {
    if (threads <= 0) threads = static_cast<int>(std::thread::hardware_concurrency());
    threads = std::max(1, std::min(threads, 16));
    std::vector<std::future<std::vector<int>>> futures;
    for (int t = 0; t < threads; ++t)
        futures.push_back(std::async(std::launch::async, [&, t] {
            std::vector<int> bad;
            for (int i = t; i < count; i += threads)
                if (!cell_ok(i)) bad.push_back(i);
            return bad;
        }));
    std::vector<int> bad;
    for (auto& f : futures)
        for (int i : f.get()) bad.push_back(i);
    std::sort(bad.begin(), bad.end());
    if (failed_cells) *failed_cells = bad;
    return static_cast<int>(bad.size());
}

// ------------------------------------------------------------- criterion 1

std::vector<CheckRow> verify_diamond_io() {
    Suite s{"diamond-io", {}};
    for (int b : {8, 16, 32}) {
        for (int M : {2, 4}) {
            std::string tag = "b=" + std::to_string(b) + ",M=" + std::to_string(M) + ": ";
            long long lb = diamond_lower_bound(2, b, M, 1);
            GeneratedDag d_r = reversed(generate(DiamondSpec{2, b}));
            BlockedVisit bv = build_diamond_blocked_visit(d_r, M);
            SegmentPartition witness = diamond_witness_partition(d_r.dag, bv, M);
            long long wval =
                write_bound_for_partition(d_r.dag, bv.rule, bv.visit.sequence, witness, M).value;
            AstarStats stats;
            IoComputation astar = run_diamond_astar(2, b, M, &stats);
            IoCounts counts = io_counts(astar);
            long long bstar = (M - 1) + 1;
            long long per_side = (b + bstar - 1) / bstar;
            long long upper = 4LL * M * per_side * per_side;
            Dag fwd = generate(DiamondSpec{2, b}).dag;
            s.truthy(tag + "astar trace validates", validate_computation(fwd, astar).ok);
            s.le(tag + "lower bound <= witness write value", lb, wval);
            s.le(tag + "witness write value <= astar total", wval, counts.total);
            s.le(tag + "astar total <= 4M ceil(b/b*)^2", counts.total, upper);
            s.le(tag + "upper/lower ratio <= 16", upper, 16 * lb);
        }
    }
    s.eq("b=32,M=4: lower bound", diamond_lower_bound(2, 32, 4, 1), 64);
    s.eq("b=32,M=4: astar budget", 4LL * 4 * 8 * 8, 1024);
    return s.rows;
}

// ------------------------------------------------------------- criterion 2

std::vector<CheckRow> verify_hong_kung() {
    Suite s{"hong-kung", {}};
    GeneratedDag d33 = generate(DiamondSpec{2, 3});
    for (int M : {1, 2, 3, 4}) {
        s.eq("diamond{2,3}: k(G,2M)=1 at M=" + std::to_string(M),
             min_s_partition_k(d33.dag, 2 * M), 1);
        HongKungResult hk = hong_kung_bound(d33.dag, M);
        s.eq("diamond{2,3}: hong-kung bound 0 at M=" + std::to_string(M), hk.bound, 0);
        s.truthy("diamond{2,3}: 2M-partition properties hold at M=" + std::to_string(M),
                 hk.properties_ok);
    }
    for (auto [b, M] : std::vector<std::pair<int, int>>{{8, 1}, {8, 2}, {16, 2}, {16, 4}}) {
        std::string tag = "b=" + std::to_string(b) + ",M=" + std::to_string(M);
        GeneratedDag d_r = reversed(generate(DiamondSpec{2, b}));
        BlockedVisit bv = build_diamond_blocked_visit(d_r, M);
        SegmentPartition witness = diamond_witness_partition(d_r.dag, bv, M);
        long long wval =
            write_bound_for_partition(d_r.dag, bv.rule, bv.visit.sequence, witness, M).value;
        long long target = static_cast<long long>(M) * (b / (2 * M)) * (b / (2 * M));
        s.ge(tag + ": witness bound >= M*(b/2M)^2", wval, target);
        s.truthy(tag + ": witness bound positive", wval > 0);
        s.eq(tag + ": hong-kung bound stays 0", hong_kung_bound(generate(DiamondSpec{2, b}).dag, M).bound,
             0);
    }
    return s.rows;
}

// ------------------------------------------------------------- criterion 3

std::vector<CheckRow> verify_universal_bounds(const VerifyOptions& opts) {
    Suite s{"universal-bounds", {}};
    const double c_sin = 4.0 * (std::sqrt(2.0) + 1.0);
    auto cell_ok = [&](int i) {
        std::mt19937 rng(static_cast<uint32_t>(opts.seed + i));
        RandomDagOptions ro;
        ro.n = std::uniform_int_distribution<int>(2, opts.universal_max_n)(rng);
        ro.max_in = 3;
        ro.max_out = 5;
        Dag d = random_layered_dag(ro, rng);
        const int n = d.n();
        const int dout = d.max_out_degree();
        const int depth = topological_depth(d);

        BuiltVisit dv = build_depth_visit(d, VisitRule::singleton(d));
        double depth_bound = depth == 0 ? 0.0 : double(dout - 1) * depth + 1.0;
        if (dv.achieved_boundary > depth_bound) return false;
        BuiltVisit dv_top = build_depth_visit(d, VisitRule::top(d));
        if (dv_top.achieved_boundary > depth_bound) return false;

        BuiltVisit sv = build_singleton_visit(d);
        if (sv.achieved_boundary > c_sin * std::sqrt(double(dout) * n)) return false;

        BuiltVisit tv = build_topological_visit(d);
        if (dout == 0 && tv.achieved_boundary != 0) return false;
        if (dout == 1 && tv.achieved_boundary != 1) return false;
        if (dout >= 2 &&
            tv.achieved_boundary > double(dout - 1) / std::log2(double(dout)) * std::log2(double(n)) + 1)
            return false;
        return true;
    };
    std::vector<int> failed;
    int failures = parallel_count_failures(opts.universal_count, opts.threads, cell_ok, &failed);
    std::string tag = std::to_string(opts.universal_count) + " random dags (n<=" +
                      std::to_string(opts.universal_max_n) + ", dout<=5)";
    s.eq(tag + ": builder guarantee violations", failures, 0);
    return s.rows;
}

// ------------------------------------------------------------- criterion 4

std::vector<CheckRow> verify_tightness() {
    Suite s{"tightness", {}};
    {
        GeneratedDag rp = generate(ReversePyramidSpec{2, 6});
        int exact = exact_boundary_complexity(rp.dag, VisitRule::singleton(rp.dag)).value;
        s.ge("reverse-pyramid{2,6}: exact singleton boundary >= (q-1)(b-1)", exact, 5);
        GeneratedDag py = generate(PyramidSpec{2, 6});
        VertexSet path;
        for (int v = 0; v < py.dag.n(); ++v)
            if (py.meta.layer[size_t(v)] >= 1 && py.meta.offset[size_t(v)] == 0)
                path.push_back(v);
        PathSystem ps = max_disjoint_paths(py.dag, py.dag.inputs(), path, path);
        s.ge("pyramid{2,6}: disjoint-path certificate", ps.count, 6);
    }
    {
        GeneratedDag rp = generate(ReversePyramidSpec{3, 5});
        BuiltVisit sv = build_singleton_visit(rp.dag);
        s.ge("reverse-pyramid{3,5}: constructed singleton boundary >= (q-1)(b-1)",
             sv.achieved_boundary, 8);
        GeneratedDag py = generate(PyramidSpec{3, 5});
        VertexSet path;
        for (int v = 0; v < py.dag.n(); ++v)
            if (py.meta.layer[size_t(v)] >= 1 && py.meta.offset[size_t(v)] == 0)
                path.push_back(v);
        PathSystem ps = max_disjoint_paths(py.dag, py.dag.inputs(), path, path);
        s.ge("pyramid{3,5}: disjoint-path certificate", ps.count, 9);
    }
    {
        GeneratedDag ca = generate(ChainArborescenceSpec{3});
        s.eq("chain-arborescence n=14: total vertices", ca.dag.n(), 14);
        BuiltVisit sv = build_singleton_visit(ca.dag);
        s.eq("chain-arborescence n=14: singleton achieved boundary", sv.achieved_boundary, 2);
        int exact_top = exact_boundary_complexity(ca.dag, VisitRule::top(ca.dag)).value;
        s.eq("chain-arborescence n=14: exact top boundary = log2(n+2)-1", exact_top, 3);
    }
    return s.rows;
}

// ------------------------------------------------------------- criterion 5

std::vector<CheckRow> verify_pebbling(const VerifyOptions& opts) {
    Suite s{"pebbling", {}};
    struct Inst {
        std::string name;
        GeneratedDag g;
        int floor_bound = 0;  // family-specific lower bound, 0 when none
    };
    std::vector<Inst> instances;
    for (int b = 2; b <= 4; ++b)
        instances.push_back({"pyramid{2," + std::to_string(b) + "}", generate(PyramidSpec{2, b}),
                             (2 - 1) * (b - 1)});
    for (int b = 2; b <= 3; ++b)
        instances.push_back({"pyramid{3," + std::to_string(b) + "}", generate(PyramidSpec{3, b}),
                             (3 - 1) * (b - 1)});
    for (int i = 0; i <= 2; ++i)
        instances.push_back(
            {"tree{2," + std::to_string(i) + "}", generate(TreeSpec{2, i}), (2 - 1) * i});
    instances.push_back({"tree{3,1}", generate(TreeSpec{3, 1}), 2});
    for (int b = 2; b <= 3; ++b)
        instances.push_back({"diamond{2," + std::to_string(b) + "}", generate(DiamondSpec{2, b}), 0});
    for (int h = 1; h <= 2; ++h)
        instances.push_back({"chain-arborescence{" + std::to_string(h) + "}",
                             generate(ChainArborescenceSpec{h}), 0});
    for (int i = 0; i < 50; ++i) {
        std::mt19937 rng(static_cast<uint32_t>(opts.seed + 7000 + i));
        RandomDagOptions ro;
        ro.n = std::uniform_int_distribution<int>(2, 9)(rng);
        Dag d = random_layered_dag(ro, rng);
        GeneratedDag g;
        g.dag = d;
        instances.push_back({"random#" + std::to_string(i), g, 0});
    }

    int violations = 0;
    std::string first_bad;
    for (const Inst& inst : instances) {
        if (inst.g.dag.n() > 10) continue;
        PebblingResult p = exact_pebbling_number(inst.g.dag);
        if (!validate_pebbling(inst.g.dag, p.witness).ok) {
            ++violations;
            if (first_bad.empty()) first_bad = inst.name + " witness invalid";
            continue;
        }
        Dag rev = reverse(inst.g.dag);
        for (auto kind : {VisitRule::Kind::Singleton, VisitRule::Kind::Top}) {
            VisitRule r = kind == VisitRule::Kind::Singleton ? VisitRule::singleton(rev)
                                                             : VisitRule::top(rev);
            int bc = exact_boundary_complexity(rev, r).value;
            if (p.number < bc) {
                ++violations;
                if (first_bad.empty()) first_bad = inst.name;
            }
        }
        if (p.number < inst.floor_bound) {
            ++violations;
            if (first_bad.empty()) first_bad = inst.name + " family floor";
        }
    }
    s.eq("pebbling >= boundary complexity of the reverse (all instances + 50 random)",
         violations, 0);
    if (violations > 0) s.truthy("first violation at " + first_bad, false);
    return s.rows;
}

// ------------------------------------------------------------- criterion 6

std::vector<CheckRow> verify_converters(const VerifyOptions& opts) {
    Suite s{"converters", {}};
    int violations = 0;
    std::string first_bad;
    auto note = [&](const std::string& what) {
        ++violations;
        if (first_bad.empty()) first_bad = what;
    };
    for (int t = 0; t < opts.converter_traces; ++t) {
        std::mt19937 rng(static_cast<uint32_t>(opts.seed + 31000 + t));
        RandomDagOptions ro;
        ro.n = 10;
        ro.no_isolated_io = true;
        ro.layer_width = std::uniform_int_distribution<int>(1, 5)(rng);
        Dag d = random_layered_dag(ro, rng);

        // Random topological order via randomized Kahn.
        VertexList order;
        {
            std::vector<int> indeg(static_cast<size_t>(d.n()));
            VertexList ready;
            for (int v = 0; v < d.n(); ++v) {
                indeg[static_cast<size_t>(v)] = static_cast<int>(d.preds(v).size());
                if (!indeg[static_cast<size_t>(v)]) ready.push_back(v);
            }
            while (!ready.empty()) {
                size_t pick = std::uniform_int_distribution<size_t>(0, ready.size() - 1)(rng);
                Vertex v = ready[pick];
                ready.erase(ready.begin() + static_cast<long>(pick));
                order.push_back(v);
                for (Vertex w : d.succs(v))
                    if (--indeg[static_cast<size_t>(w)] == 0) ready.push_back(w);
            }
        }
        int M = d.max_in_degree() + 1 + std::uniform_int_distribution<int>(0, 3)(rng);
        IoComputation c = greedy_computation(d, VisitSequence::of(d, order), M);
        // Randomized redundant steps keep the trace valid but irregular.
        for (int k = 0; k < 6; ++k) {
            IoComputation trial = c;
            size_t at = std::uniform_int_distribution<size_t>(0, trial.steps.size())(rng);
            Vertex v = std::uniform_int_distribution<int>(0, d.n() - 1)(rng);
            StepKind kind =
                std::array<StepKind, 3>{StepKind::Read, StepKind::Write,
                                        StepKind::Compute}[std::uniform_int_distribution<int>(
                    0, 2)(rng)];
            trial.steps.insert(trial.steps.begin() + static_cast<long>(at), {kind, v});
            if (validate_computation(d, trial).ok) c = std::move(trial);
        }
        if (!validate_computation(d, c).ok) {
            note("trace generation produced an invalid trace");
            continue;
        }

        Dag rev = reverse(d);
        IoCounts counts = io_counts(c);
        const long long delta =
            static_cast<long long>(d.inputs().size()) - static_cast<long long>(d.outputs().size());
        for (auto kind : {VisitRule::Kind::Singleton, VisitRule::Kind::Top}) {
            VisitRule r = kind == VisitRule::Kind::Singleton ? VisitRule::singleton(rev)
                                                             : VisitRule::top(rev);
            DerivedVisit dv;
            try {
                dv = computation_to_visit(d, r, c);
            } catch (const dag_error&) {
                note("computation_to_visit failed");
                continue;
            }
            if (!dv.visit.complete(d) || !is_r_sequence(rev, r, dv.visit).ok) {
                note("derived visit incomplete or invalid");
                continue;
            }
            for (int p = 0; p < opts.converter_partitions; ++p) {
                std::vector<int> cuts;
                for (int i = 1; i < d.n(); ++i)
                    if (std::uniform_int_distribution<int>(0, 1)(rng)) cuts.push_back(i);
                cuts.push_back(d.n());
                SegmentPartition part{cuts};
                long long W = write_bound_for_partition(rev, r, dv.visit, part, M).value;
                long long R = read_bound_for_partition(rev, dv.visit, part, M).value;
                if (counts.writes < W) note("write bound exceeded trace writes");
                if (counts.reads < R) note("read bound exceeded trace reads");
                if (counts.reads < W + delta) note("read refinement exceeded trace reads");
            }
            // Round trip through a pebbling schedule.
            PebbleSchedule sched = visit_to_pebbling(d, r, dv.visit);
            if (!validate_pebbling(d, sched).ok) note("visit_to_pebbling schedule invalid");
            DerivedVisit back = pebbling_to_visit(d, r, sched);
            if (back.visit.order != dv.visit.order) note("pebbling round trip changed the visit");
        }
    }
    s.eq(std::to_string(opts.converter_traces) + " traces x " +
             std::to_string(opts.converter_partitions) + " partitions: violations",
         violations, 0);
    if (violations > 0) s.truthy("first violation: " + first_bad, false);
    return s.rows;
}

// ------------------------------------------------------------- criterion 7

std::vector<CheckRow> verify_oracles(const VerifyOptions& opts) {
    Suite s{"oracles", {}};
    int mismatches = 0;
    std::string first_bad;
    for (int n = 1; n <= 7; ++n)
        for (int i = 0; i < 20; ++i) {
            std::mt19937 rng(static_cast<uint32_t>(opts.seed + 500 * n + i));
            RandomDagOptions ro;
            ro.n = n;
            Dag d = random_layered_dag(ro, rng);
            for (auto kind : {VisitRule::Kind::Singleton, VisitRule::Kind::Top}) {
                VisitRule r = kind == VisitRule::Kind::Singleton ? VisitRule::singleton(d)
                                                                 : VisitRule::top(d);
                int dp = exact_boundary_complexity(d, r).value;
                int brute = bruteforce::boundary_complexity_by_enumeration(d, r);
                if (dp != brute) {
                    ++mismatches;
                    if (first_bad.empty())
                        first_bad = "boundary n=" + std::to_string(n) + "#" + std::to_string(i);
                }
            }
        }
    s.eq("subset-DP boundary complexity == enumeration (n<=7, 20 seeds each)", mismatches, 0);

    int flow_mismatches = 0;
    for (int i = 0; i < 20; ++i) {
        std::mt19937 rng(static_cast<uint32_t>(opts.seed + 90000 + i));
        RandomDagOptions ro;
        ro.n = 12;
        Dag d = random_layered_dag(ro, rng);
        for (int j = 0; j < 4; ++j) {
            VertexList raw;
            for (int v = 0; v < d.n(); ++v)
                if (std::uniform_int_distribution<int>(0, 2)(rng) == 0) raw.push_back(v);
            VertexSet X = vset::from_unsorted(raw);
            if (min_post_dominator(d, X).size != bruteforce::min_post_dominator_exhaustive(d, X))
                ++flow_mismatches;
            if (min_dominator(d, X).size != bruteforce::min_dominator_exhaustive(d, X))
                ++flow_mismatches;
        }
    }
    s.eq("flow dominator/post-dominator == exhaustive subsets (n=12, 20 seeds)", flow_mismatches,
         0);
    if (mismatches + flow_mismatches > 0) s.truthy("first mismatch: " + first_bad, false);
    return s.rows;
}

}  // namespace

std::vector<std::string> suite_names() {
    return {"diamond-io", "hong-kung", "universal-bounds", "tightness",
            "pebbling",   "converters", "oracles"};
}

std::vector<CheckRow> run_suite(const std::string& name, const VerifyOptions& opts) {
    if (name == "diamond-io") return verify_diamond_io();
    if (name == "hong-kung") return verify_hong_kung();
    if (name == "universal-bounds") return verify_universal_bounds(opts);
    if (name == "tightness") return verify_tightness();
    if (name == "pebbling") return verify_pebbling(opts);
    if (name == "converters") return verify_converters(opts);
    if (name == "oracles") return verify_oracles(opts);
    if (name == "all") {
        std::vector<CheckRow> rows;
        for (const std::string& n : suite_names()) {
            auto part = run_suite(n, opts);
            rows.insert(rows.end(), part.begin(), part.end());
        }
        return rows;
    }
    throw dag_error("unknown verify suite '" + name + "'");
}

bool all_pass(const std::vector<CheckRow>& rows) {
    return std::all_of(rows.begin(), rows.end(), [](const CheckRow& r) { return r.pass; });
}

std::string rows_to_csv(const std::vector<CheckRow>& rows) {
    std::ostringstream os;
    os << "suite,check,expected,observed,pass\n";
    for (const CheckRow& r : rows) {
        auto esc = [](const std::string& s) {
            std::string out = "\"";
            for (char c : s) {
                if (c == '"') out += '"';
                out += c;
            }
            return out + "\"";
        };
        os << esc(r.suite) << ',' << esc(r.check) << ',' << esc(r.expected) << ','
           << esc(r.observed) << ',' << (r.pass ? "true" : "false") << "\n";
    }
    return os.str();
}

}  // namespace dagvisit
