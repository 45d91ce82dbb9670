#include "fairload/instance.hpp"

#include <algorithm>
#include <cmath>
#include <queue>
#include <set>
#include <stdexcept>

namespace fairload {

void BipartiteInstance::finalize() {
    const int nu = num_tasks(), nw = num_workers(), ne = num_edges();
    if (static_cast<int>(demands.size()) != nu)
        throw std::invalid_argument("demands must match tasks");
    if (task_weight.empty()) task_weight.assign(ne, Rat(1));
    if (worker_weight.empty()) worker_weight.assign(ne, Rat(1));
    if (worker_func_override.empty()) worker_func_override.resize(nw);
    if (static_cast<int>(task_weight.size()) != ne ||
        static_cast<int>(worker_weight.size()) != ne)
        throw std::invalid_argument("edge weight vectors must match edges");
    if (static_cast<int>(worker_func_override.size()) != nw)
        throw std::invalid_argument("worker_func_override must match workers");

    task_adj_.assign(nu, {});
    worker_adj_.assign(nw, {});
    for (int e = 0; e < ne; ++e) {
        auto [u, w] = edges[e];
        if (u < 0 || u >= nu || w < 0 || w >= nw)
            throw std::invalid_argument("edge endpoint out of range");
        task_adj_[u].push_back(e);
        worker_adj_[w].push_back(e);
    }

    task_idx_.clear();
    worker_idx_.clear();
    for (int u = 0; u < nu; ++u) task_idx_[tasks[u]] = u;
    for (int w = 0; w < nw; ++w) worker_idx_[workers[w]] = w;

    task_exprs_.clear();
    worker_exprs_.clear();
    for (int u = 0; u < nu; ++u) {
        std::vector<std::pair<int, Rat>> terms;
        for (int e : task_adj_[u]) terms.emplace_back(e, task_weight[e]);
        if (terms.empty()) terms.emplace_back(-1, Rat(1));  // placeholder, flagged by validate
        task_exprs_.push_back(LoadExpr::weighted_sum(terms));
    }
    for (int w = 0; w < nw; ++w) {
        if (worker_func_override[w]) {
            worker_exprs_.push_back(*worker_func_override[w]);
        } else {
            std::vector<std::pair<int, Rat>> terms;
            for (int e : worker_adj_[w]) terms.emplace_back(e, worker_weight[e]);
            if (terms.empty()) {
                // Isolated worker: load identically 0.
                worker_exprs_.push_back(LoadExpr::shift(LoadExpr::var(-1, 1), 0));
            } else {
                worker_exprs_.push_back(LoadExpr::weighted_sum(terms));
            }
        }
    }
}

int BipartiteInstance::task_index(const std::string& id) const {
    auto it = task_idx_.find(id);
    return it == task_idx_.end() ? -1 : it->second;
}

int BipartiteInstance::worker_index(const std::string& id) const {
    auto it = worker_idx_.find(id);
    return it == worker_idx_.end() ? -1 : it->second;
}

std::string BipartiteInstance::edge_key(int e) const {
    return tasks[edges[e].first] + ":" + workers[edges[e].second];
}

bool BipartiteInstance::all_linear() const {
    for (int w = 0; w < num_workers(); ++w)
        if (!worker_edges(w).empty() && !linear_form(worker_expr(w))) return false;
    return true;
}

Assignment Assignment::rational(std::vector<Rat> values) {
    Assignment a;
    a.kind = NumericKind::Rational;
    a.rat = std::move(values);
    return a;
}

Assignment Assignment::floating(std::vector<double> values) {
    Assignment a;
    a.kind = NumericKind::Float;
    a.dbl = std::move(values);
    return a;
}

int Assignment::size() const {
    return kind == NumericKind::Rational ? static_cast<int>(rat.size())
                                         : static_cast<int>(dbl.size());
}

double Assignment::as_double(int e) const {
    return kind == NumericKind::Rational ? to_double(rat[e]) : dbl[e];
}

std::vector<double> Assignment::to_doubles() const {
    if (kind == NumericKind::Float) return dbl;
    std::vector<double> out;
    out.reserve(rat.size());
    for (const auto& r : rat) out.push_back(to_double(r));
    return out;
}

ValidationReport validate_instance(const BipartiteInstance& inst) {
    ValidationReport rep;
    auto add = [&](std::string code, std::string msg) {
        rep.items.push_back({std::move(code), std::move(msg)});
    };

    std::set<std::pair<int, int>> seen;
    for (int e = 0; e < inst.num_edges(); ++e) {
        if (!seen.insert(inst.edges[e]).second)
            add("DUPLICATE_EDGE", "duplicate edge " + inst.edge_key(e));
    }

    for (int u = 0; u < inst.num_tasks(); ++u) {
        bool isolated = inst.task_edges(u).empty();
        if (inst.mode == Mode::LinearNonneg) {
            if (inst.demands[u] < 0)
                add("NEGATIVE_DEMAND", "task " + inst.tasks[u] + " has negative demand");
            if (isolated && inst.demands[u] != 0)
                add("ISOLATED_TASK",
                    "task " + inst.tasks[u] + " has no incident edge but nonzero demand");
        } else if (isolated) {
            add("ISOLATED_TASK", "task " + inst.tasks[u] + " has no incident edge");
        }
    }

    for (int e = 0; e < inst.num_edges(); ++e) {
        if (inst.task_weight[e] <= 0)
            add("NONPOSITIVE_WEIGHT", "task-side weight on edge " + inst.edge_key(e));
        if (inst.worker_weight[e] <= 0)
            add("NONPOSITIVE_WEIGHT", "worker-side weight on edge " + inst.edge_key(e));
    }

    for (int w = 0; w < inst.num_workers(); ++w) {
        if (inst.worker_edges(w).empty()) {
            if (inst.worker_func_override[w])
                add("BAD_EXPR", "worker " + inst.workers[w] + " is isolated but has a load function");
            continue;
        }
        std::set<int> expected(inst.worker_edges(w).begin(), inst.worker_edges(w).end());
        try {
            validate_expr(inst.worker_expr(w), expected);
        } catch (const std::invalid_argument& ex) {
            add("BAD_EXPR", "worker " + inst.workers[w] + ": " + ex.what());
        }
    }

    return rep;
}

namespace {

template <class T>
BasicLoadReport<T> build_report(const BipartiteInstance& inst, const std::vector<T>& point,
                                const std::function<bool(int)>& positive) {
    BasicLoadReport<T> rep;
    rep.per_worker.resize(inst.num_workers());
    for (int w = 0; w < inst.num_workers(); ++w) {
        if (inst.worker_edges(w).empty()) {
            rep.per_worker[w] = T(0);
        } else {
            rep.per_worker[w] = eval_expr(inst.worker_expr(w), point);
        }
    }
    if (inst.num_workers() == 0) {
        rep.lmax = rep.lmin = rep.spread = T(0);
        return rep;
    }
    rep.lmax = *std::max_element(rep.per_worker.begin(), rep.per_worker.end());
    rep.lmin = *std::min_element(rep.per_worker.begin(), rep.per_worker.end());
    rep.spread = rep.lmax - rep.lmin;
    for (int w = 0; w < inst.num_workers(); ++w) {
        if (rep.per_worker[w] == rep.lmax) rep.wmax_set.push_back(w);
        if (rep.per_worker[w] == rep.lmin) rep.wmin_set.push_back(w);
    }
    std::set<int> umax;
    for (int w : rep.wmax_set)
        for (int e : inst.worker_edges(w))
            if (positive(e)) umax.insert(inst.edges[e].first);
    rep.umax_set.assign(umax.begin(), umax.end());
    return rep;
}

void require_keyed(const BipartiteInstance& inst, const Assignment& x) {
    if (x.size() != inst.num_edges())
        throw KeyMismatch("assignment is not keyed on the instance edge set");
}

}  // namespace

LoadReportF evaluate_loads(const BipartiteInstance& inst, const Assignment& x) {
    require_keyed(inst, x);
    std::vector<double> point = x.to_doubles();
    return build_report<double>(inst, point, [&](int e) { return point[e] > 0.0; });
}

LoadReport evaluate_loads_exact(const BipartiteInstance& inst, const Assignment& x) {
    require_keyed(inst, x);
    if (x.kind != NumericKind::Rational)
        throw std::invalid_argument("exact load evaluation needs a rational assignment");
    return build_report<Rat>(inst, x.rat, [&](int e) { return x.rat[e] > 0; });
}

namespace {

// Floating-point tolerances on task equations are relative: a point with edge
// values around 1e7 cannot satisfy its equation to 1e-9 absolutely in doubles.
double task_equation_scale(const BipartiteInstance& inst, int u,
                           const std::vector<double>& point) {
    double scale = std::fabs(to_double(inst.demands[u]));
    for (int e : inst.task_edges(u))
        scale = std::max(scale, std::fabs(to_double(inst.task_weight[e]) * point[e]));
    return std::max(1.0, scale);
}

}  // namespace

bool check_membership(const BipartiteInstance& inst, const Assignment& x, double tol) {
    require_keyed(inst, x);
    if (tol < 0) throw std::invalid_argument("negative tolerance");
    if (tol == 0 && x.kind != NumericKind::Rational)
        throw std::invalid_argument("zero tolerance requires a rational assignment");

    if (tol == 0) {
        for (int u = 0; u < inst.num_tasks(); ++u) {
            Rat lhs = inst.task_edges(u).empty() ? Rat(0) : eval_expr(inst.task_expr(u), x.rat);
            if (lhs != inst.demands[u]) return false;
        }
        if (inst.mode == Mode::LinearNonneg)
            for (const auto& v : x.rat)
                if (v < 0) return false;
        return true;
    }

    std::vector<double> point = x.to_doubles();
    for (int u = 0; u < inst.num_tasks(); ++u) {
        double lhs = inst.task_edges(u).empty() ? 0.0 : eval_expr(inst.task_expr(u), point);
        if (std::fabs(lhs - to_double(inst.demands[u])) > tol * task_equation_scale(inst, u, point))
            return false;
    }
    if (inst.mode == Mode::LinearNonneg)
        for (double v : point)
            if (v < -tol) return false;
    return true;
}

bool satisfies_task_equations(const BipartiteInstance& inst, const Assignment& x, double tol) {
    require_keyed(inst, x);
    if (tol == 0 && x.kind != NumericKind::Rational)
        throw std::invalid_argument("zero tolerance requires a rational assignment");
    if (tol == 0) {
        for (int u = 0; u < inst.num_tasks(); ++u) {
            Rat lhs = inst.task_edges(u).empty() ? Rat(0) : eval_expr(inst.task_expr(u), x.rat);
            if (lhs != inst.demands[u]) return false;
        }
        return true;
    }
    std::vector<double> point = x.to_doubles();
    for (int u = 0; u < inst.num_tasks(); ++u) {
        double lhs = inst.task_edges(u).empty() ? 0.0 : eval_expr(inst.task_expr(u), point);
        if (std::fabs(lhs - to_double(inst.demands[u])) > tol * task_equation_scale(inst, u, point))
            return false;
    }
    return true;
}

bool is_connected(const BipartiteInstance& inst) {
    const int nu = inst.num_tasks(), nw = inst.num_workers();
    const int n = nu + nw;
    if (n == 0) return true;
    std::vector<bool> seen(n, false);
    std::queue<int> q;
    q.push(0);
    seen[0] = true;
    int visited = 1;
    while (!q.empty()) {
        int v = q.front();
        q.pop();
        const auto& adj = v < nu ? inst.task_edges(v) : inst.worker_edges(v - nu);
        for (int e : adj) {
            auto [u, w] = inst.edges[e];
            int other = v < nu ? nu + w : u;
            if (!seen[other]) {
                seen[other] = true;
                ++visited;
                q.push(other);
            }
        }
    }
    return visited == n;
}

}  // namespace fairload
