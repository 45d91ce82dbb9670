#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "fairload/lp.hpp"
#include "fairload/verifier.hpp"
#include "lp_oracle.hpp"
#include "test_util.hpp"

using namespace fairload;
using testutil::load_fixture;

namespace {

BipartiteInstance single_edge() {
    BipartiteInstance inst;
    inst.mode = Mode::LinearNonneg;
    inst.tasks = {"u1"};
    inst.workers = {"w1"};
    inst.demands = {Rat(5)};
    inst.edges = {{0, 0}};
    inst.worker_weight = {Rat(2)};
    inst.task_weight = {Rat(1)};
    inst.finalize();
    return inst;
}

BipartiteInstance star() {
    BipartiteInstance inst;
    inst.mode = Mode::LinearNonneg;
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

TEST_CASE("raw simplex solves a tiny system") {
    // min x0 + x1  s.t.  x0 + 2 x1 >= 4, x0 >= 0, x1 >= 0.
    Lp lp;
    int a = lp.add_var(), b = lp.add_var();
    Lp::Row row;
    row.rel = Rel::Ge;
    row.rhs = 4;
    row.coeffs[a] = 1;
    row.coeffs[b] = 2;
    lp.add_row(row);
    lp.objective[a] = 1;
    lp.objective[b] = 1;
    auto sol = solve_lp(lp);
    REQUIRE(sol.status == LpStatus::Optimal);
    CHECK(sol.value == 2);
    CHECK(sol.x[b] == 2);
}

TEST_CASE("raw simplex reports infeasible and unbounded") {
    Lp bad;
    int v = bad.add_var();
    Lp::Row r1;
    r1.rel = Rel::Eq;
    r1.rhs = 1;
    r1.coeffs[v] = 1;
    bad.add_row(r1);
    Lp::Row r2;
    r2.rel = Rel::Eq;
    r2.rhs = 2;
    r2.coeffs[v] = 1;
    bad.add_row(r2);
    CHECK(solve_lp(bad).status == LpStatus::Infeasible);

    Lp ub;
    int f = ub.add_var(true);
    ub.objective[f] = 1;
    ub.maximize = true;
    Lp::Row r3;
    r3.rel = Rel::Ge;
    r3.rhs = 0;
    r3.coeffs[f] = 1;
    ub.add_row(r3);
    CHECK(solve_lp(ub).status == LpStatus::Unbounded);
}

TEST_CASE("min lmax examples") {
    auto se = single_edge();
    auto res = solve_min_lmax(se);
    REQUIRE(res.status == LpStatus::Optimal);
    CHECK(res.value == 10);
    CHECK(res.assignment.rat == std::vector<Rat>{Rat(5)});

    auto st = star();
    auto res2 = solve_min_lmax(st);
    REQUIRE(res2.status == LpStatus::Optimal);
    CHECK(res2.value == 3);
    CHECK(res2.assignment.rat == std::vector<Rat>{Rat(3), Rat(1)});

    auto fig1 = load_fixture("fig1.json");
    auto res3 = solve_min_lmax(fig1);
    REQUIRE(res3.status == LpStatus::Optimal);
    CHECK(res3.value <= 14);
    CHECK(res3.value == *lporacle::oracle_min_lmax(fig1));
    CHECK(check_membership(fig1, res3.assignment, 0.0));
    CHECK(evaluate_loads_exact(fig1, res3.assignment).lmax == res3.value);
}

TEST_CASE("max lmin examples") {
    CHECK(solve_max_lmin(single_edge()).value == 10);

    auto fig1 = load_fixture("fig1.json");
    auto res = solve_max_lmin(fig1);
    REQUIRE(res.status == LpStatus::Optimal);
    CHECK(res.value >= 20);  // the equal-load witness reaches 20 everywhere
    CHECK(res.value == *lporacle::oracle_max_lmin(fig1));
    CHECK(evaluate_loads_exact(fig1, res.assignment).lmin == res.value);

    // An isolated worker pins lmin to 0.
    BipartiteInstance iso;
    iso.mode = Mode::LinearNonneg;
    iso.tasks = {"u1"};
    iso.workers = {"w1", "w2"};
    iso.demands = {Rat(7)};
    iso.edges = {{0, 0}};
    iso.finalize();
    CHECK(solve_max_lmin(iso).value == 0);
}

TEST_CASE("min spread examples") {
    auto fig1 = load_fixture("fig1.json");
    auto res = solve_min_spread(fig1);
    REQUIRE(res.status == LpStatus::Optimal);
    CHECK(res.value == 0);
    auto rep = evaluate_loads_exact(fig1, res.assignment);
    CHECK(rep.spread == 0);

    CHECK(solve_min_spread(single_edge()).value == 0);

    auto fig2 = load_fixture("fig2.json");
    auto res2 = solve_min_spread(fig2);
    REQUIRE(res2.status == LpStatus::Optimal);
    CHECK(res2.value == *lporacle::oracle_min_spread(fig2));
    CHECK(res2.value <= 2);  // the integral witness (1,4,4,4,3,3) has spread 2
}

TEST_CASE("equal load feasibility") {
    auto fig1 = load_fixture("fig1.json");
    auto res = equal_load_feasible(fig1);
    REQUIRE(res.status == LpStatus::Optimal);
    CHECK(res.value == 20);  // the maximal common level
    auto rep = evaluate_loads_exact(fig1, res.assignment);
    CHECK(rep.spread == 0);
    CHECK(rep.lmax == 20);

    // Symmetric split: one task, two unit workers, d = 2.
    BipartiteInstance sym;
    sym.mode = Mode::LinearNonneg;
    sym.tasks = {"u1"};
    sym.workers = {"w1", "w2"};
    sym.demands = {Rat(2)};
    sym.edges = {{0, 0}, {0, 1}};
    sym.finalize();
    auto res2 = equal_load_feasible(sym);
    REQUIRE(res2.status == LpStatus::Optimal);
    CHECK(res2.value == 1);
    CHECK(evaluate_loads_exact(sym, res2.assignment).per_worker ==
          std::vector<Rat>{Rat(1), Rat(1)});

    // fig2: status and level pinned by the oracle.
    auto fig2 = load_fixture("fig2.json");
    auto res3 = equal_load_feasible(fig2);
    auto level = lporacle::oracle_equal_level(fig2);
    REQUIRE(level.has_value());
    REQUIRE(res3.status == LpStatus::Optimal);
    CHECK(res3.value == *level);
}

TEST_CASE("worker load extremes under a spread cap") {
    auto se = single_edge();
    CHECK(max_load_of_worker_given_spread(se, 0, Rat(0)).value == 10);
    CHECK(max_load_of_worker_given_spread(se, 0, Rat(5)).value == 10);
    CHECK(min_load_of_worker_given_spread(se, 0, Rat(0)).value == 10);

    auto fig1 = load_fixture("fig1.json");
    for (int w = 0; w < fig1.num_workers(); ++w) {
        CHECK(max_load_of_worker_given_spread(fig1, w, Rat(0)).value == 20);
        CHECK(min_load_of_worker_given_spread(fig1, w, Rat(0)).value ==
              *lporacle::oracle_worker_extreme(fig1, w, Rat(0), false));
    }

    auto st = star();
    CHECK(max_load_of_worker_given_spread(st, 0, Rat(0)).value == 3);
    CHECK(max_load_of_worker_given_spread(st, 1, Rat(0)).value == 3);

    CHECK_THROWS_AS(max_load_of_worker_given_spread(st, 5, Rat(0)), std::invalid_argument);
    CHECK_THROWS_AS(max_load_of_worker_given_spread(st, 0, Rat(-1)), std::invalid_argument);
}

TEST_CASE("objectives refuse non-linear instances") {
    auto fig3 = load_fixture("fig3.json");
    fig3.mode = Mode::GeneralReal;
    CHECK_THROWS_AS(solve_min_lmax(fig3), std::invalid_argument);
}

TEST_CASE("degenerate all-zero demands") {
    BipartiteInstance inst;
    inst.mode = Mode::LinearNonneg;
    inst.tasks = {"u1"};
    inst.workers = {"w1", "w2"};
    inst.demands = {Rat(0)};
    inst.edges = {{0, 0}, {0, 1}};
    inst.finalize();
    CHECK(solve_min_lmax(inst).value == 0);
    CHECK(solve_max_lmin(inst).value == 0);
    CHECK(solve_min_spread(inst).value == 0);
}

TEST_CASE("ordering and oracle equivalence on random instances") {
    GenParams p;
    p.num_tasks = 2;
    p.num_workers = 3;
    p.density = 0.7;
    p.weight_max = 4;
    int checked = 0;
    for (std::uint64_t seed = 1; checked < 25 && seed < 200; ++seed) {
        p.seed = seed;
        auto inst = gen_random_instance(p);
        if (inst.num_edges() > 7) continue;
        ++checked;

        auto lmax = solve_min_lmax(inst);
        auto lmin = solve_max_lmin(inst);
        auto spread = solve_min_spread(inst);
        REQUIRE(lmax.status == LpStatus::Optimal);
        REQUIRE(lmin.status == LpStatus::Optimal);
        REQUIRE(spread.status == LpStatus::Optimal);

        CHECK(lmax.value == *lporacle::oracle_min_lmax(inst));
        CHECK(lmin.value == *lporacle::oracle_max_lmin(inst));
        CHECK(spread.value == *lporacle::oracle_min_spread(inst));

        // Witnesses stay inside X^a and attain their objective exactly.
        auto rep = evaluate_loads_exact(inst, spread.assignment);
        CHECK(check_membership(inst, spread.assignment, 0.0));
        CHECK(rep.spread == spread.value);
    }
    CHECK(checked == 25);
}

TEST_CASE("ordering holds in the all-one-weight setting") {
    // With unit weights every load total is conserved, so lmin <= mean <= lmax
    // pointwise and max-lmin <= min-lmax across points, with equality exactly
    // when an all-equal point exists. (With general weights this ordering can
    // fail: fig1 has max-lmin 20 but min-lmax below 14.)
    auto fig1 = load_fixture("fig1.json");
    CHECK(solve_max_lmin(fig1).value > solve_min_lmax(fig1).value);

    GenParams p;
    p.unit_weights = true;
    p.num_tasks = 3;
    p.num_workers = 3;
    for (std::uint64_t seed = 1; seed <= 30; ++seed) {
        p.seed = seed;
        auto inst = gen_random_instance(p);
        auto lmax = solve_min_lmax(inst);
        auto lmin = solve_max_lmin(inst);
        auto eq = equal_load_feasible(inst);
        CHECK(lmin.value <= lmax.value);
        CHECK((lmin.value == lmax.value) == (eq.status == LpStatus::Optimal));
    }
}
