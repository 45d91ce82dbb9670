#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>
#include <cmath>

#include "fairload/tree_equalizer.hpp"
#include "fairload/verifier.hpp"
#include "test_util.hpp"

using namespace fairload;
using testutil::load_fixture;

namespace {

// path w1 -- u -- w2 with all-one weights; edge 0 = u:w1, edge 1 = u:w2.
BipartiteInstance path_instance(Rat demand) {
    BipartiteInstance inst;
    inst.mode = Mode::GeneralReal;
    inst.tasks = {"u1"};
    inst.workers = {"w1", "w2"};
    inst.demands = {std::move(demand)};
    inst.edges = {{0, 0}, {0, 1}};
    inst.finalize();
    return inst;
}

BipartiteInstance star_weighted() {
    BipartiteInstance inst;
    inst.mode = Mode::GeneralReal;
    inst.tasks = {"u1"};
    inst.workers = {"w1", "w2"};
    inst.demands = {Rat(4)};
    inst.edges = {{0, 0}, {0, 1}};
    inst.worker_weight = {Rat(1), Rat(3)};
    inst.task_weight = {Rat(1), Rat(1)};
    inst.finalize();
    return inst;
}

}  // namespace

TEST_CASE("make_tree_view rejects non-trees") {
    auto fig3 = load_fixture("fig3.json");
    CHECK_THROWS_AS(make_tree_view(fig3, {0, 1, 2, 3}, 0), TreeError);  // cycle: too many edges
    CHECK_THROWS_AS(make_tree_view(fig3, {0, 0, 1}, 0), TreeError);     // repeated edge
    CHECK_THROWS_AS(make_tree_view(fig3, {0, 1, 2}, 7), TreeError);     // bad root
    CHECK_NOTHROW(make_tree_view(fig3, {0, 1, 2}, 0));
}

TEST_CASE("bfs_spanning_tree covers the graph or throws") {
    auto fig3 = load_fixture("fig3.json");
    auto tree = bfs_spanning_tree(fig3, 0);
    CHECK(tree.size() == 3);
    CHECK_NOTHROW(make_tree_view(fig3, tree, 0));

    BipartiteInstance split;
    split.mode = Mode::GeneralReal;
    split.tasks = {"u1", "u2"};
    split.workers = {"w1", "w2"};
    split.demands = {Rat(1), Rat(1)};
    split.edges = {{0, 0}, {1, 1}};
    split.finalize();
    CHECK_THROWS_AS(bfs_spanning_tree(split, 0), TreeError);
}

TEST_CASE("fix_loads solves the path example") {
    auto inst = path_instance(Rat(10));
    auto view = make_tree_view(inst, {0, 1}, 1);  // rooted at w2
    std::vector<Rat> pinned(2, Rat(0));
    std::vector<Rat> targets = {Rat(3), Rat(0)};  // w1 -> 3; root target ignored
    auto x = fix_loads_exact(view, pinned, targets);
    CHECK(x == std::vector<Rat>{Rat(3), Rat(7)});
}

TEST_CASE("fix_loads single edge needs no targets") {
    BipartiteInstance inst;
    inst.mode = Mode::GeneralReal;
    inst.tasks = {"u1"};
    inst.workers = {"w1"};
    inst.demands = {Rat(5)};
    inst.edges = {{0, 0}};
    inst.finalize();
    auto view = make_tree_view(inst, {0}, 0);
    auto x = fix_loads_exact(view, {Rat(0)}, {Rat(99)});  // root target is ignored
    CHECK(x == std::vector<Rat>{Rat(5)});
}

TEST_CASE("fix_loads on the fig3 spanning tree") {
    auto fig3 = load_fixture("fig3.json");
    // Edges in file order: 0=u1:w1, 1=u1:w2, 2=u2:w1, 3=u2:w2.
    auto view = make_tree_view(fig3, {0, 1, 2}, 0);  // rooted at w1, u2:w2 pinned
    std::vector<Rat> pinned = {Rat(0), Rat(0), Rat(0), Rat(0)};
    std::vector<Rat> targets = {Rat(0), Rat(1, 2)};  // f_w2 = 1/2
    auto x = fix_loads_exact(view, pinned, targets);
    CHECK(x[1] == 1);  // x_{u1w2}
    CHECK(x[0] == 0);  // x_{u1w1}
    CHECK(x[2] == 1);  // x_{u2w1}
    CHECK(x[3] == 0);  // pinned
}

TEST_CASE("fix_loads uniqueness and target monotonicity") {
    SplitMix64 rng(5);
    GenParams p;
    p.mode = Mode::GeneralReal;
    p.demand_min = -5;
    p.num_tasks = 3;
    p.num_workers = 3;
    p.expr_depth = 0;  // linear, exact
    for (std::uint64_t seed = 1; seed <= 20; ++seed) {
        p.seed = seed;
        auto inst = gen_random_instance(p);
        auto tree = bfs_spanning_tree(inst, 0);
        auto view = make_tree_view(inst, tree, 0);
        std::vector<Rat> pinned(inst.num_edges(), Rat(0));
        std::vector<Rat> targets(inst.num_workers());
        for (auto& t : targets) t = Rat(rng.next_range(-9, 9), 2);
        auto x1 = fix_loads_exact(view, pinned, targets);
        auto x2 = fix_loads_exact(view, pinned, targets);
        CHECK(x1 == x2);
        // The produced point hits every prescribed worker load.
        auto rep = evaluate_loads_exact(inst, Assignment::rational(x1));
        for (int w = 0; w < inst.num_workers(); ++w) {
            if (w == view.root_worker) continue;
            CHECK(rep.per_worker[w] == targets[w]);
        }
        CHECK(satisfies_task_equations(inst, Assignment::rational(x1), 0.0));
        // Raising one non-root target raises that worker's parent-edge value.
        int w = (view.root_worker + 1) % inst.num_workers();
        auto bumped = targets;
        bumped[w] += 1;
        auto x3 = fix_loads_exact(view, pinned, bumped);
        int pe = view.parent_edge[view.vertex_of_worker(w)];
        CHECK(x3[pe] > x1[pe]);
    }
}

TEST_CASE("fixed_point_bisect examples") {
    CHECK(fixed_point_bisect([](double l) { return 10.0 - l; }) == doctest::Approx(5.0));
    CHECK(fixed_point_bisect([](double) { return 3.25; }) == doctest::Approx(3.25));
    CHECK(fixed_point_bisect([](double) { return -7.0; }) == doctest::Approx(-7.0));
    // lambda^3 + lambda = 1 has the real root 0.682327803828019...
    double l = fixed_point_bisect([](double t) { return 1.0 - t * t * t; });
    CHECK(l == doctest::Approx(0.682327803828019).epsilon(1e-9));

    CHECK_THROWS_AS(fixed_point_bisect([](double t) { return 2.0 * t + 1.0; }), TreeError);
}

TEST_CASE("equalize_tree examples") {
    auto inst = path_instance(Rat(10));
    auto view = make_tree_view(inst, {0, 1}, 0);
    auto out = equalize_tree(view, Assignment::rational({Rat(0), Rat(0)}));
    REQUIRE(out.exact);
    CHECK(out.lambda_exact == 5);
    CHECK(out.x.rat == std::vector<Rat>{Rat(5), Rat(5)});

    auto st = star_weighted();
    auto view2 = make_tree_view(st, {0, 1}, 0);
    auto out2 = equalize_tree(view2, Assignment::rational({Rat(0), Rat(0)}));
    REQUIRE(out2.exact);
    CHECK(out2.lambda_exact == 3);
    CHECK(out2.x.rat == std::vector<Rat>{Rat(3), Rat(1)});

    auto fig3 = load_fixture("fig3.json");
    auto view3 = make_tree_view(fig3, {0, 1, 2}, 0);
    auto out3 = equalize_tree(view3, Assignment::rational({Rat(0), Rat(0), Rat(0), Rat(0)}));
    REQUIRE(out3.exact);
    CHECK(out3.lambda_exact == Rat(1, 2));
    CHECK(out3.x.rat == std::vector<Rat>{Rat(0), Rat(1), Rat(1), Rat(0)});
}

TEST_CASE("equalize_tree is root independent") {
    auto fig3 = load_fixture("fig3.json");
    auto a = equalize_tree(make_tree_view(fig3, {0, 1, 2}, 0),
                           Assignment::rational({Rat(0), Rat(0), Rat(0), Rat(0)}));
    auto b = equalize_tree(make_tree_view(fig3, {0, 1, 2}, 1),
                           Assignment::rational({Rat(0), Rat(0), Rat(0), Rat(0)}));
    CHECK(a.lambda_exact == b.lambda_exact);
    CHECK(a.x.rat == b.x.rat);
}

TEST_CASE("equalize_connected on fig3") {
    auto fig3 = load_fixture("fig3.json");

    // Unequal start: loads 3/2 and 0.
    auto x0 = Assignment::rational({Rat(1), Rat(0), Rat(1), Rat(0)});
    auto out = equalize_connected(fig3, x0);
    REQUIRE(out.improved);
    REQUIRE(out.exact);
    CHECK(out.lambda_exact == Rat(1, 2));
    CHECK(out.x.rat == std::vector<Rat>{Rat(0), Rat(1), Rat(1), Rat(0)});
    auto rep0 = evaluate_loads_exact(fig3, x0);
    CHECK(rep0.lmin < out.lambda_exact);
    CHECK(out.lambda_exact < rep0.lmax);

    // Equal start: untouched.
    auto even = Assignment::rational({Rat(1), Rat(0), Rat(0), Rat(1)});
    auto out2 = equalize_connected(fig3, even);
    CHECK_FALSE(out2.improved);
    CHECK(out2.x.rat == even.rat);
    CHECK(out2.lambda_exact == 1);

    // Membership is enforced.
    auto broken = Assignment::rational({Rat(5), Rat(0), Rat(1), Rat(0)});
    CHECK_THROWS_AS(equalize_connected(fig3, broken), TreeError);
}

TEST_CASE("equalize_connected on a path") {
    auto inst = path_instance(Rat(10));
    auto out = equalize_connected(inst, Assignment::rational({Rat(10), Rat(0)}));
    REQUIRE(out.exact);
    CHECK(out.lambda_exact == 5);
    CHECK(out.x.rat == std::vector<Rat>{Rat(5), Rat(5)});
}

TEST_CASE("equalize_connected flags negative components") {
    // Demand -4 forces a negative edge value at the equal-load point.
    auto inst = path_instance(Rat(-4));
    auto out = equalize_connected(inst, Assignment::rational({Rat(0), Rat(-4)}));
    REQUIRE(out.exact);
    CHECK(out.lambda_exact == -2);
    CHECK(out.negative_components);
}

TEST_CASE("theorem 2 sandwich on random instances") {
    GenParams p;
    p.mode = Mode::GeneralReal;
    p.demand_min = -5;
    p.num_tasks = 3;
    p.num_workers = 3;
    p.expr_depth = 2;
    int improved = 0;
    for (std::uint64_t seed = 1; seed <= 250; ++seed) {
        p.seed = seed;
        auto inst = gen_random_instance(p);
        auto x0 = random_xf_point(inst, seed * 31 + 7);
        auto rep0 = evaluate_loads(inst, x0);
        // Tolerances are relative to the load magnitudes involved.
        double scale = std::max({1.0, std::fabs(rep0.lmax), std::fabs(rep0.lmin)});
        if (rep0.spread <= 1e-9 * scale) continue;
        auto out = equalize_connected(inst, x0);
        auto rep1 = evaluate_loads(inst, out.x);
        scale = std::max(scale, std::fabs(out.lambda));
        CHECK(rep1.spread <= 1e-9 * scale);
        CHECK(out.lambda > rep0.lmin);
        CHECK(out.lambda < rep0.lmax);
        CHECK(satisfies_task_equations(inst, out.x, 1e-9));
        ++improved;
    }
    CHECK(improved > 200);
}
