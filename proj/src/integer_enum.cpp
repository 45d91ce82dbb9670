#include "fairload/integer_enum.hpp"

#include <algorithm>
#include <set>

namespace fairload {

namespace {

struct TaskSolutions {
    std::vector<int> edge_ids;                     // edges of the task, in edge order
    std::vector<std::vector<long long>> points;    // compositions of the demand
};

void require_integer_data(const BipartiteInstance& inst) {
    if (inst.mode != Mode::LinearNonneg)
        throw EnumError("NON_INTEGER_DATA: enumeration requires LINEAR_NONNEG mode");
    for (int u = 0; u < inst.num_tasks(); ++u) {
        if (denominator(inst.demands[u]) != 1 || inst.demands[u] < 0)
            throw EnumError("NON_INTEGER_DATA: demand of " + inst.tasks[u] +
                            " is not a nonnegative integer");
    }
    for (int e = 0; e < inst.num_edges(); ++e) {
        if (denominator(inst.task_weight[e]) != 1 || inst.task_weight[e] <= 0)
            throw EnumError("NON_INTEGER_DATA: task-side weight on edge " + inst.edge_key(e) +
                            " is not a positive integer");
    }
}

void compositions(const std::vector<long long>& weights, long long demand, std::size_t i,
                  std::vector<long long>& cur, std::vector<std::vector<long long>>& out) {
    if (i + 1 == weights.size()) {
        if (demand % weights[i] == 0) {
            cur[i] = demand / weights[i];
            out.push_back(cur);
        }
        return;
    }
    for (long long v = 0; v * weights[i] <= demand; ++v) {
        cur[i] = v;
        compositions(weights, demand - v * weights[i], i + 1, cur, out);
    }
}

std::uint64_t count_compositions(const std::vector<long long>& weights, long long demand,
                                 std::size_t i, std::uint64_t cap) {
    if (weights.empty()) return demand == 0 ? 1 : 0;
    if (i + 1 == weights.size()) return demand % weights[i] == 0 ? 1 : 0;
    std::uint64_t total = 0;
    for (long long v = 0; v * weights[i] <= demand; ++v) {
        total += count_compositions(weights, demand - v * weights[i], i + 1, cap);
        if (total > cap) return total;
    }
    return total;
}

struct EnumPlan {
    std::vector<TaskSolutions> tasks;
    std::uint64_t total = 0;
};

EnumPlan build_plan(const BipartiteInstance& inst, const EnumOptions& opt) {
    require_integer_data(inst);
    EnumPlan plan;
    plan.total = 1;
    // Predict the count before materializing anything.
    for (int u = 0; u < inst.num_tasks(); ++u) {
        std::vector<long long> weights;
        for (int e : inst.task_edges(u)) weights.push_back(inst.task_weight[e].convert_to<long long>());
        long long d = inst.demands[u].convert_to<long long>();
        std::uint64_t c = count_compositions(weights, d, 0, opt.count_cap);
        if (c == 0) {
            plan.total = 0;
            return plan;
        }
        if (plan.total > opt.count_cap / c)
            throw EnumError("TOO_LARGE: predicted count exceeds the enumeration cap");
        plan.total *= c;
    }
    for (int u = 0; u < inst.num_tasks(); ++u) {
        TaskSolutions ts;
        ts.edge_ids = inst.task_edges(u);
        std::vector<long long> weights;
        for (int e : ts.edge_ids) weights.push_back(inst.task_weight[e].convert_to<long long>());
        if (ts.edge_ids.empty()) {
            ts.points.push_back({});
        } else {
            std::vector<long long> cur(ts.edge_ids.size());
            compositions(weights, inst.demands[u].convert_to<long long>(), 0, cur, ts.points);
        }
        plan.tasks.push_back(std::move(ts));
    }
    return plan;
}

std::vector<Rat> worker_loads(const BipartiteInstance& inst, const std::vector<long long>& x) {
    std::vector<Rat> point(inst.num_edges());
    for (int e = 0; e < inst.num_edges(); ++e) point[e] = x[e];
    std::vector<Rat> loads(inst.num_workers());
    for (int w = 0; w < inst.num_workers(); ++w)
        loads[w] = inst.worker_edges(w).empty() ? Rat(0) : eval_expr(inst.worker_expr(w), point);
    return loads;
}

}  // namespace

void for_each_integral(const BipartiteInstance& inst, const EnumOptions& opt,
                       const std::function<void(const std::vector<long long>&)>& fn) {
    EnumPlan plan = build_plan(inst, opt);
    if (plan.total == 0) return;
    std::vector<long long> x(inst.num_edges(), 0);
    std::function<void(std::size_t)> rec = [&](std::size_t ti) {
        if (ti == plan.tasks.size()) {
            fn(x);
            return;
        }
        const auto& ts = plan.tasks[ti];
        for (const auto& p : ts.points) {
            for (std::size_t i = 0; i < ts.edge_ids.size(); ++i) x[ts.edge_ids[i]] = p[i];
            rec(ti + 1);
        }
    };
    rec(0);
}

std::uint64_t count_integral(const BipartiteInstance& inst, const EnumOptions& opt) {
    return build_plan(inst, opt).total;
}

IntegralSummary enumerate_integral(const BipartiteInstance& inst, const EnumOptions& opt) {
    IntegralSummary s;
    std::set<std::pair<Rat, Rat>> pairs;
    for_each_integral(inst, opt, [&](const std::vector<long long>& x) {
        auto loads = worker_loads(inst, x);
        Rat lmax = loads.empty() ? Rat(0) : *std::max_element(loads.begin(), loads.end());
        Rat lmin = loads.empty() ? Rat(0) : *std::min_element(loads.begin(), loads.end());
        Rat spread = lmax - lmin;
        if (s.count == 0) {
            s.min_lmax = lmax;
            s.max_lmin = lmin;
            s.min_spread = spread;
            s.min_spread_witness = x;
            s.min_spread_among_lmax_argmins = spread;
            s.lmax_argmins.push_back(x);
        } else {
            if (lmax < s.min_lmax) {
                s.min_lmax = lmax;
                s.lmax_argmins.clear();
                s.argmins_truncated = false;
                s.min_spread_among_lmax_argmins = spread;
            }
            if (lmax == s.min_lmax) {
                if (s.lmax_argmins.size() < opt.argmin_cap)
                    s.lmax_argmins.push_back(x);
                else
                    s.argmins_truncated = true;
                s.min_spread_among_lmax_argmins =
                    std::min(s.min_spread_among_lmax_argmins, spread);
            }
            s.max_lmin = std::max(s.max_lmin, lmin);
            if (spread < s.min_spread) {
                s.min_spread = spread;
                s.min_spread_witness = x;
            }
        }
        ++s.count;
        pairs.emplace(lmax, lmin);
    });
    // Nondominated under (minimize lmax, maximize lmin).
    for (const auto& p : pairs) {
        bool dominated = false;
        for (const auto& q : pairs) {
            if (q == p) continue;
            if (q.first <= p.first && q.second >= p.second) {
                dominated = true;
                break;
            }
        }
        if (!dominated) s.pareto.push_back(p);
    }
    return s;
}

std::pair<Rat, std::vector<std::vector<long long>>> integral_min_lmax(
    const BipartiteInstance& inst, const EnumOptions& opt) {
    EnumPlan plan = build_plan(inst, opt);
    if (plan.total == 0) throw EnumError("EMPTY: no integral point in X^a");

    std::vector<long long> x(inst.num_edges(), 0);
    bool have_best = false;
    Rat best;
    std::vector<std::vector<long long>> argmins;
    std::function<void(std::size_t)> rec = [&](std::size_t ti) {
        // Loads only grow as further edges get positive values, so a partial
        // point already above the incumbent cannot reach it.
        if (have_best) {
            auto loads = worker_loads(inst, x);
            Rat partial = loads.empty() ? Rat(0) : *std::max_element(loads.begin(), loads.end());
            if (partial > best) return;
        }
        if (ti == plan.tasks.size()) {
            auto loads = worker_loads(inst, x);
            Rat lmax = loads.empty() ? Rat(0) : *std::max_element(loads.begin(), loads.end());
            if (!have_best || lmax < best) {
                have_best = true;
                best = lmax;
                argmins.clear();
            }
            if (lmax == best && argmins.size() < opt.argmin_cap) argmins.push_back(x);
            return;
        }
        const auto& ts = plan.tasks[ti];
        for (const auto& p : ts.points) {
            for (std::size_t i = 0; i < ts.edge_ids.size(); ++i) x[ts.edge_ids[i]] = p[i];
            rec(ti + 1);
        }
        for (int e : ts.edge_ids) x[e] = 0;
    };
    rec(0);
    return {best, std::move(argmins)};
}

std::pair<Rat, std::vector<long long>> integral_min_spread(const BipartiteInstance& inst,
                                                           const EnumOptions& opt) {
    auto s = enumerate_integral(inst, opt);
    if (s.count == 0) throw EnumError("EMPTY: no integral point in X^a");
    return {s.min_spread, s.min_spread_witness};
}

std::vector<std::pair<Rat, Rat>> integral_pareto(const BipartiteInstance& inst,
                                                 const EnumOptions& opt) {
    return enumerate_integral(inst, opt).pareto;
}

}  // namespace fairload
