#include "fairload/verifier.hpp"

#include <algorithm>
#include <cmath>
#include <set>

#include "fairload/tree_equalizer.hpp"

namespace fairload {

namespace {

Rat random_positive_rational(SplitMix64& rng, long long weight_max) {
    return Rat(rng.next_range(1, weight_max), rng.next_range(1, weight_max));
}

LoadExpr random_expr(SplitMix64& rng, const std::vector<int>& edge_ids, int depth,
                     long long weight_max) {
    auto linear_leaf = [&]() {
        std::vector<std::pair<int, Rat>> terms;
        for (int e : edge_ids) terms.emplace_back(e, random_positive_rational(rng, weight_max));
        return LoadExpr::weighted_sum(terms);
    };
    if (depth <= 0 || edge_ids.empty()) return linear_leaf();

    switch (rng.next() % 5) {
        case 0:
            return linear_leaf();
        case 1: {  // sum over a partition of the edges
            if (edge_ids.size() < 2)
                return LoadExpr::sum({random_expr(rng, edge_ids, depth - 1, weight_max)});
            std::size_t cut = 1 + rng.next() % (edge_ids.size() - 1);
            std::vector<int> left(edge_ids.begin(), edge_ids.begin() + cut);
            std::vector<int> right(edge_ids.begin() + cut, edge_ids.end());
            return LoadExpr::sum({random_expr(rng, left, depth - 1, weight_max),
                                  random_expr(rng, right, depth - 1, weight_max)});
        }
        case 2:  // max children must cover the same edges to stay bijective
            return LoadExpr::max_of({random_expr(rng, edge_ids, depth - 1, weight_max),
                                     random_expr(rng, edge_ids, depth - 1, weight_max)});
        case 3:
            return LoadExpr::odd_pow(random_expr(rng, edge_ids, depth - 1, weight_max), 3);
        default:
            return LoadExpr::shift(random_expr(rng, edge_ids, depth - 1, weight_max),
                                   Rat(rng.next_range(-4, 4), 2));
    }
}

}  // namespace

BipartiteInstance gen_random_instance(const GenParams& p) {
    if (p.num_tasks < 0 || p.num_workers < 1 || p.density < 0 || p.density > 1 ||
        p.demand_min > p.demand_max || p.weight_max < 1)
        throw std::invalid_argument("UNSATISFIABLE_PARAMS");
    if (p.mode == Mode::GeneralReal && p.num_tasks < 1)
        throw std::invalid_argument("UNSATISFIABLE_PARAMS: connected instances need a task");

    SplitMix64 rng(p.seed);
    BipartiteInstance inst;
    inst.mode = p.mode;
    for (int u = 0; u < p.num_tasks; ++u) inst.tasks.push_back("u" + std::to_string(u + 1));
    for (int w = 0; w < p.num_workers; ++w) inst.workers.push_back("w" + std::to_string(w + 1));

    std::set<std::pair<int, int>> chosen;
    for (int u = 0; u < p.num_tasks; ++u)
        for (int w = 0; w < p.num_workers; ++w)
            if (rng.next_unit() < p.density) chosen.insert({u, w});
    for (int u = 0; u < p.num_tasks; ++u) {
        bool has = false;
        for (int w = 0; w < p.num_workers && !has; ++w) has = chosen.count({u, w}) > 0;
        if (!has) chosen.insert({u, static_cast<int>(rng.next_range(0, p.num_workers - 1))});
    }

    if (p.mode == Mode::GeneralReal) {
        // Union components until the whole vertex set is one piece.
        auto comp_of = [&](int v, const std::vector<int>& parent) {
            while (parent[v] != v) v = parent[v];
            return v;
        };
        const int n = p.num_tasks + p.num_workers;
        std::vector<int> parent(n);
        for (int i = 0; i < n; ++i) parent[i] = i;
        auto unite = [&](int a, int b) {
            a = comp_of(a, parent);
            b = comp_of(b, parent);
            if (a != b) parent[b] = a;
        };
        for (auto [u, w] : chosen) unite(u, p.num_tasks + w);
        for (int w = 0; w < p.num_workers; ++w) {
            if (comp_of(p.num_tasks + w, parent) == comp_of(0, parent)) continue;
            // Bridge through a task already in vertex 0's component so each
            // union really grows that component.
            std::vector<int> anchors;
            for (int u = 0; u < p.num_tasks; ++u)
                if (comp_of(u, parent) == comp_of(0, parent)) anchors.push_back(u);
            int u = anchors[static_cast<std::size_t>(
                rng.next_range(0, static_cast<long long>(anchors.size()) - 1))];
            chosen.insert({u, w});
            unite(u, p.num_tasks + w);
        }
    }

    for (auto [u, w] : chosen) {
        inst.edges.emplace_back(u, w);
        inst.task_weight.push_back(p.unit_weights ? Rat(1)
                                                  : random_positive_rational(rng, p.weight_max));
        inst.worker_weight.push_back(p.unit_weights ? Rat(1)
                                                    : random_positive_rational(rng, p.weight_max));
    }
    for (int u = 0; u < p.num_tasks; ++u)
        inst.demands.push_back(Rat(rng.next_range(
            p.mode == Mode::LinearNonneg ? std::max(p.demand_min, 0LL) : p.demand_min,
            p.demand_max)));

    inst.worker_func_override.resize(p.num_workers);
    inst.finalize();

    if (p.mode == Mode::GeneralReal && p.expr_depth > 0) {
        for (int w = 0; w < p.num_workers; ++w) {
            if (inst.worker_edges(w).empty()) continue;
            if (rng.next() % 2 == 0) continue;  // keep some workers linear
            inst.worker_func_override[w] =
                random_expr(rng, inst.worker_edges(w), p.expr_depth, p.weight_max);
        }
        inst.finalize();
    }
    return inst;
}

Assignment random_xf_point(const BipartiteInstance& inst, std::uint64_t seed) {
    SplitMix64 rng(seed);
    int root = 0;
    for (int w = 1; w < inst.num_workers(); ++w)
        if (inst.workers[w] < inst.workers[root]) root = w;
    auto view = make_tree_view(inst, bfs_spanning_tree(inst, root), root);

    if (inst.all_linear()) {
        std::vector<Rat> pinned(inst.num_edges(), Rat(0));
        for (int e = 0; e < inst.num_edges(); ++e)
            if (!view.in_tree[e]) pinned[e] = Rat(rng.next_range(-8, 8), 2);
        std::vector<Rat> targets(inst.num_workers());
        for (auto& t : targets) t = Rat(rng.next_range(-12, 12), 2);
        return Assignment::rational(fix_loads_exact(view, pinned, targets));
    }
    std::vector<double> pinned(inst.num_edges(), 0.0);
    for (int e = 0; e < inst.num_edges(); ++e)
        if (!view.in_tree[e]) pinned[e] = rng.next_range(-30, 30) / 10.0;
    std::vector<double> targets(inst.num_workers());
    for (auto& t : targets) t = rng.next_range(-30, 30) / 10.0;
    return Assignment::floating(fix_loads(view, pinned, targets));
}

std::string instance_digest(const BipartiteInstance& inst) {
    std::string text = instance_to_json(inst).dump();
    std::uint64_t h = 0xcbf29ce484222325ULL;  // FNV-1a
    for (unsigned char c : text) {
        h ^= c;
        h *= 0x100000001b3ULL;
    }
    char buf[17];
    std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
    return buf;
}

namespace {

void add_check(TheoremReport& rep, std::string name, bool passed, bool exact,
               std::string detail = "") {
    rep.checks.push_back({std::move(name), exact, passed, std::move(detail)});
    if (!passed) rep.verdict = Verdict::Violated;
}

Rat sum_of_loads(const BipartiteInstance& inst, const Assignment& x) {
    auto rep = evaluate_loads_exact(inst, x);
    Rat total = 0;
    for (const auto& l : rep.per_worker) total += l;
    return total;
}

void check_spread_set_extremes(const BipartiteInstance& inst, TheoremReport& rep) {
    auto spread = solve_min_spread(inst);
    auto lmax = solve_min_lmax(inst);
    auto lmin = solve_max_lmin(inst);
    if (spread.status != LpStatus::Optimal || lmax.status != LpStatus::Optimal ||
        lmin.status != LpStatus::Optimal)
        throw std::invalid_argument("X^a is empty; nothing to verify");

    Rat worst_max = lmax.value, best_min = lmin.value;
    bool first = true;
    for (int w = 0; w < inst.num_workers(); ++w) {
        Rat hi = max_load_of_worker_given_spread(inst, w, spread.value).value;
        Rat lo = min_load_of_worker_given_spread(inst, w, spread.value).value;
        if (first) {
            worst_max = hi;
            best_min = lo;
            first = false;
        } else {
            worst_max = std::max(worst_max, hi);
            best_min = std::min(best_min, lo);
        }
    }
    add_check(rep, "max_lmax_over_min_spread_set == min_lmax", worst_max == lmax.value, true,
              format_rational(worst_max) + " vs " + format_rational(lmax.value));
    add_check(rep, "min_lmin_over_min_spread_set == max_lmin", best_min == lmin.value, true,
              format_rational(best_min) + " vs " + format_rational(lmin.value));
    if (rep.verdict == Verdict::Violated) rep.witness = instance_to_json(inst);
}

}  // namespace

TheoremReport check_theorem1(const BipartiteInstance& inst) {
    TheoremReport rep;
    rep.theorem = "theorem1";
    rep.instance_digest = instance_digest(inst);
    auto eq = equal_load_feasible(inst);
    if (eq.status == LpStatus::Optimal) {
        rep.verdict = Verdict::HypothesisVoid;
        add_check(rep, "equal_load_feasible", true, true,
                  "common load " + format_rational(eq.value) + " attainable");
        return rep;
    }
    add_check(rep, "equal_load_infeasible_hypothesis", true, true, "");
    check_spread_set_extremes(inst, rep);
    return rep;
}

TheoremReport check_prop1(const BipartiteInstance& inst) {
    for (int e = 0; e < inst.num_edges(); ++e)
        if (inst.task_weight[e] != 1 || inst.worker_weight[e] != 1)
            throw std::invalid_argument("Proposition 1 check needs all-one weights");
    for (const auto& f : inst.worker_func_override)
        if (f) throw std::invalid_argument("Proposition 1 check needs all-one weights");

    TheoremReport rep;
    rep.theorem = "prop1";
    rep.instance_digest = instance_digest(inst);
    check_spread_set_extremes(inst, rep);

    // Conservation: with all-one weights the load total equals the demand total.
    Rat demand_total = 0;
    for (const auto& d : inst.demands) demand_total += d;
    for (const SolveResult& res :
         {solve_min_spread(inst), solve_min_lmax(inst), solve_max_lmin(inst)}) {
        add_check(rep, "conservation", sum_of_loads(inst, res.assignment) == demand_total, true);
    }
    auto eq = equal_load_feasible(inst);
    if (eq.status == LpStatus::Optimal && inst.num_workers() > 0) {
        add_check(rep, "equal_level == demand_total/|W|",
                  eq.value == demand_total / inst.num_workers(), true,
                  format_rational(eq.value));
    }
    if (rep.verdict == Verdict::Violated) rep.witness = instance_to_json(inst);
    return rep;
}

TheoremReport check_theorem2(const BipartiteInstance& inst, const Assignment& x0) {
    constexpr double kTol = 1e-9;
    TheoremReport rep;
    rep.theorem = "theorem2";
    rep.instance_digest = instance_digest(inst);

    auto rep0 = evaluate_loads(inst, x0);
    // Load comparisons are relative to the magnitudes involved: the equalizer
    // cannot beat double representation granularity on large or steep loads.
    double scale = std::max({1.0, std::fabs(rep0.lmax), std::fabs(rep0.lmin)});
    if (rep0.spread <= kTol * scale) {
        rep.verdict = Verdict::HypothesisVoid;
        add_check(rep, "loads already equal", true, false, "");
        return rep;
    }

    auto out = equalize_connected(inst, x0);
    auto rep1 = evaluate_loads(inst, out.x);
    scale = std::max(scale, std::fabs(out.lambda));
    add_check(rep, "x' in X^f", satisfies_task_equations(inst, out.x, kTol), out.exact);
    add_check(rep, "loads all equal", rep1.spread <= kTol * scale, out.exact,
              "spread " + std::to_string(rep1.spread));
    double lo_scale = std::max({1.0, std::fabs(rep0.lmin), std::fabs(out.lambda)});
    double hi_scale = std::max({1.0, std::fabs(rep0.lmax), std::fabs(out.lambda)});
    bool sandwich = out.lambda > rep0.lmin + kTol * lo_scale &&
                    out.lambda < rep0.lmax - kTol * hi_scale;
    add_check(rep, "lmin(x0) < lambda < lmax(x0)", sandwich, out.exact,
              std::to_string(rep0.lmin) + " < " + std::to_string(out.lambda) + " < " +
                  std::to_string(rep0.lmax));
    if (rep.verdict == Verdict::Violated) {
        rep.witness = Json{{"instance", instance_to_json(inst)},
                           {"x0", assignment_to_json(inst, x0)},
                           {"x1", assignment_to_json(inst, out.x)}};
    }
    return rep;
}

std::optional<Assignment> improvement_step(const BipartiteInstance& inst, const Assignment& x) {
    if (inst.mode != Mode::LinearNonneg || x.kind != NumericKind::Rational)
        throw std::invalid_argument("improvement_step needs a rational X^a point");
    if (!check_membership(inst, x, 0.0))
        throw std::invalid_argument("NOT_IN_XA: x violates X^a membership");

    auto rep = evaluate_loads_exact(inst, x);
    if (rep.spread == 0) return std::nullopt;

    std::set<int> wmax(rep.wmax_set.begin(), rep.wmax_set.end());
    std::set<int> neighborhood;
    for (int u : rep.umax_set)
        for (int e : inst.task_edges(u)) neighborhood.insert(inst.edges[e].second);
    if (neighborhood == wmax) return std::nullopt;

    // Find u' in U^max with an edge to a non-maximal worker w', and a
    // positive edge u'w'' into W^max.
    int e_out = -1, e_in = -1;  // e_out: u'w'' (decrease), e_in: u'w' (increase)
    for (int u : rep.umax_set) {
        int cand_in = -1, cand_out = -1;
        for (int e : inst.task_edges(u)) {
            int w = inst.edges[e].second;
            if (!wmax.count(w) && cand_in < 0) cand_in = e;
            if (wmax.count(w) && x.rat[e] > 0 && cand_out < 0) cand_out = e;
        }
        if (cand_in >= 0 && cand_out >= 0) {
            e_in = cand_in;
            e_out = cand_out;
            break;
        }
    }
    if (e_in < 0 || e_out < 0) return std::nullopt;

    int w_out = inst.edges[e_out].second;  // in W^max
    int w_in = inst.edges[e_in].second;    // below lmax
    // delta measured on e_out; the task equation ties the e_in increase to it.
    Rat ratio = inst.task_weight[e_out] / inst.task_weight[e_in];
    Rat rate_in = inst.worker_weight[e_in] * ratio;

    Rat d1 = x.rat[e_out];
    Rat d2 = (rep.lmax - rep.lmin) / inst.worker_weight[e_out];
    Rat d3 = (rep.lmax - rep.per_worker[w_in]) / rate_in;
    Rat delta = std::min(d1, d2);
    // Stop strictly short of lifting w' into W^max, so the step always makes
    // one of the lemma inequalities strict.
    if (d3 <= delta) delta = d3 / 2;

    std::vector<Rat> xs = x.rat;
    xs[e_out] -= delta;
    xs[e_in] += delta * ratio;
    return Assignment::rational(std::move(xs));
}

Assignment interpolate_umax(const BipartiteInstance& inst, const Assignment& xbar,
                            const Assignment& ystar, const Rat& t) {
    if (xbar.kind != NumericKind::Rational || ystar.kind != NumericKind::Rational)
        throw std::invalid_argument("interpolation needs rational assignments");
    if (t < 0 || t > 1) throw std::invalid_argument("t must lie in [0,1]");
    if (!check_membership(inst, xbar, 0.0) || !check_membership(inst, ystar, 0.0))
        throw std::invalid_argument("NOT_IN_XA: endpoints must lie in X^a");

    auto rep = evaluate_loads_exact(inst, xbar);
    std::set<int> umax(rep.umax_set.begin(), rep.umax_set.end());
    std::vector<Rat> z = xbar.rat;
    for (int e = 0; e < inst.num_edges(); ++e)
        if (umax.count(inst.edges[e].first)) z[e] = t * ystar.rat[e] + (1 - t) * xbar.rat[e];
    return Assignment::rational(std::move(z));
}

Json theorem_report_to_json(const TheoremReport& rep) {
    Json j;
    j["theorem"] = rep.theorem;
    j["instance_digest"] = rep.instance_digest;
    j["verdict"] = rep.verdict == Verdict::Confirmed      ? "CONFIRMED"
                   : rep.verdict == Verdict::HypothesisVoid ? "HYPOTHESIS_VOID"
                                                            : "VIOLATED";
    j["checks"] = Json::array();
    for (const auto& c : rep.checks)
        j["checks"].push_back({{"name", c.name},
                               {"exact", c.exact},
                               {"passed", c.passed},
                               {"detail", c.detail}});
    if (!rep.witness.is_null()) j["witness"] = rep.witness;
    return j;
}

}  // namespace fairload
