#include "fairload/tree_equalizer.hpp"

#include <algorithm>
#include <cmath>
#include <queue>

namespace fairload {

RootedTreeView make_tree_view(const BipartiteInstance& inst, std::vector<int> tree_edges,
                              int root_worker) {
    const int nu = inst.num_tasks(), nw = inst.num_workers();
    const int n = nu + nw;
    if (root_worker < 0 || root_worker >= nw)
        throw TreeError("NOT_A_TREE: root worker out of range");
    if (static_cast<int>(tree_edges.size()) != n - 1)
        throw TreeError("NOT_A_TREE: edge count must be |U|+|W|-1");

    RootedTreeView view;
    view.inst = &inst;
    view.tree_edges = std::move(tree_edges);
    view.root_worker = root_worker;
    view.in_tree.assign(inst.num_edges(), false);
    for (int e : view.tree_edges) {
        if (e < 0 || e >= inst.num_edges()) throw TreeError("NOT_A_TREE: bad edge index");
        if (view.in_tree[e]) throw TreeError("NOT_A_TREE: repeated edge");
        view.in_tree[e] = true;
    }

    // BFS orientation from the root; every vertex must be reached.
    view.parent_edge.assign(n, -1);
    std::vector<bool> seen(n, false);
    std::vector<int> order;
    int root = view.vertex_of_worker(root_worker);
    std::queue<int> q;
    q.push(root);
    seen[root] = true;
    while (!q.empty()) {
        int v = q.front();
        q.pop();
        order.push_back(v);
        const auto& adj = v < nu ? inst.task_edges(v) : inst.worker_edges(v - nu);
        for (int e : adj) {
            if (!view.in_tree[e]) continue;
            auto [u, w] = inst.edges[e];
            int other = v < nu ? nu + w : u;
            if (seen[other]) continue;
            seen[other] = true;
            view.parent_edge[other] = e;
            q.push(other);
        }
    }
    if (static_cast<int>(order.size()) != n)
        throw TreeError("NOT_A_TREE: tree edges do not span the vertex set");
    view.bottom_up.assign(order.rbegin(), order.rend());
    return view;
}

std::vector<int> bfs_spanning_tree(const BipartiteInstance& inst, int root_worker) {
    const int nu = inst.num_tasks(), nw = inst.num_workers();
    const int n = nu + nw;
    std::vector<bool> seen(n, false);
    std::vector<int> tree;
    std::queue<int> q;
    int root = nu + root_worker;
    q.push(root);
    seen[root] = true;
    while (!q.empty()) {
        int v = q.front();
        q.pop();
        const auto& adj = v < nu ? inst.task_edges(v) : inst.worker_edges(v - nu);
        for (int e : adj) {
            auto [u, w] = inst.edges[e];
            int other = v < nu ? nu + w : u;
            if (seen[other]) continue;
            seen[other] = true;
            tree.push_back(e);
            q.push(other);
        }
    }
    if (static_cast<int>(tree.size()) != n - 1)
        throw TreeError("NOT_CONNECTED: graph has more than one component");
    return tree;
}

namespace {

template <class T>
std::vector<T> fix_loads_impl(const RootedTreeView& view, const std::vector<T>& pinned,
                              const std::vector<T>& targets, double tol) {
    const BipartiteInstance& inst = *view.inst;
    const int nu = inst.num_tasks();
    if (static_cast<int>(targets.size()) != inst.num_workers())
        throw TreeError("MISSING_TARGET: targets must cover all workers");
    if (static_cast<int>(pinned.size()) != inst.num_edges())
        throw TreeError("pinned values must be keyed on the edge set");

    std::vector<T> values = pinned;
    int root = view.vertex_of_worker(view.root_worker);
    for (int v : view.bottom_up) {
        if (v == root) continue;
        int pe = view.parent_edge[v];
        const LoadExpr& expr = v < nu ? inst.task_expr(v) : inst.worker_expr(v - nu);
        T target = v < nu ? T(inst.demands[v]) : targets[v - nu];
        if constexpr (std::is_same_v<T, Rat>) {
            values[pe] = invert_component_exact(expr, values, pe, target);
        } else {
            values[pe] = invert_component(expr, values, pe, target, tol);
        }
    }
    return values;
}

}  // namespace

std::vector<double> fix_loads(const RootedTreeView& view, const std::vector<double>& pinned,
                              const std::vector<double>& targets, double tol) {
    return fix_loads_impl<double>(view, pinned, targets, tol);
}

std::vector<Rat> fix_loads_exact(const RootedTreeView& view, const std::vector<Rat>& pinned,
                                 const std::vector<Rat>& targets) {
    std::vector<Rat> t(targets.begin(), targets.end());
    return fix_loads_impl<Rat>(view, pinned, t, 0.0);
}

double fixed_point_bisect(const std::function<double(double)>& f, double tol) {
    auto h = [&](double x) { return f(x) - x; };
    double h0 = h(0.0);
    if (h0 == 0.0) return 0.0;

    const double kMaxMag = std::ldexp(1.0, 64);
    double lo, hi;
    if (h0 > 0.0) {
        lo = 0.0;
        double step = 1.0;
        while (true) {
            hi = step;
            if (h(hi) <= 0.0) break;
            lo = hi;
            step *= 2.0;
            if (step > kMaxMag) throw TreeError("BRACKET_FAIL: expansion exceeded 2^64");
        }
    } else {
        hi = 0.0;
        double step = 1.0;
        while (true) {
            lo = -step;
            if (h(lo) >= 0.0) break;
            hi = lo;
            step *= 2.0;
            if (step > kMaxMag) throw TreeError("BRACKET_FAIL: expansion exceeded 2^64");
        }
    }

    // Spot-check that f really is non-increasing on the bracket.
    {
        double span = hi - lo;
        double slack = 1e-9 * std::max(1.0, std::fabs(f(lo)) + std::fabs(f(hi)));
        double prev = f(lo);
        for (int i = 1; i <= 4; ++i) {
            double cur = f(lo + span * i / 4.0);
            if (cur > prev + slack) throw TreeError("NOT_DECREASING: sampled map increases");
            prev = cur;
        }
    }

    // Return the evaluated point with the smallest residual: the midpoint of
    // the final interval has not been probed, and on steep maps it can sit
    // orders of magnitude further from the fixed point than the best sample.
    double best = 0.5 * (lo + hi);
    double best_resid = std::numeric_limits<double>::infinity();
    for (int iter = 0; iter < 200; ++iter) {
        double mid = 0.5 * (lo + hi);
        double hm = h(mid);
        if (hm == 0.0) return mid;
        if (std::fabs(hm) < best_resid) {
            best = mid;
            best_resid = std::fabs(hm);
        }
        (hm > 0.0 ? lo : hi) = mid;
        // Require a small residual as well: on steep maps a narrow interval
        // can still leave f(mid) visibly away from mid.
        if (hi - lo <= tol * std::max(1.0, std::fabs(mid)) &&
            std::fabs(hm) <= tol * std::max(1.0, std::fabs(mid)))
            break;
    }
    return best;
}

EqualizeOutcome equalize_tree(const RootedTreeView& view, const Assignment& pinned, double tol) {
    const BipartiteInstance& inst = *view.inst;
    EqualizeOutcome out;
    out.tree_edges = view.tree_edges;

    bool exact = inst.all_linear() && pinned.kind == NumericKind::Rational;
    if (exact) {
        auto root_load = [&](const Rat& lambda) {
            std::vector<Rat> targets(inst.num_workers(), lambda);
            auto x = fix_loads_exact(view, pinned.rat, targets);
            return eval_expr(inst.worker_expr(view.root_worker), x);
        };
        // Linear instances make the root-load map affine: F(l) = alpha - beta*l
        // with beta >= 0, so the fixed point has the closed form alpha/(1+beta).
        Rat alpha = root_load(Rat(0));
        Rat beta = alpha - root_load(Rat(1));
        if (beta < 0) throw TreeError("NOT_DECREASING: root-load map increases");
        Rat lambda = alpha / (1 + beta);
        std::vector<Rat> targets(inst.num_workers(), lambda);
        auto x = fix_loads_exact(view, pinned.rat, targets);
        out.exact = true;
        out.lambda_exact = lambda;
        out.lambda = to_double(lambda);
        for (const auto& v : x) out.negative_components |= v < 0;
        out.x = Assignment::rational(std::move(x));
        return out;
    }

    // Solve the per-worker inversions far below the user-facing tolerance:
    // their residuals are amplified by the root expression's slope, and the
    // fixed-point bisection cannot beat the resulting noise floor.
    const double inner_tol = std::min(tol, 1e-18);
    std::vector<double> pin = pinned.to_doubles();
    auto root_load = [&](double lambda) {
        std::vector<double> targets(inst.num_workers(), lambda);
        auto x = fix_loads(view, pin, targets, inner_tol);
        return eval_expr(inst.worker_expr(view.root_worker), x);
    };
    double lambda = fixed_point_bisect(root_load, std::min(tol, 1e-12));
    std::vector<double> targets(inst.num_workers(), lambda);
    auto x = fix_loads(view, pin, targets, inner_tol);
    out.lambda = lambda;
    for (double v : x) out.negative_components |= v < -tol;
    out.x = Assignment::floating(std::move(x));
    return out;
}

EqualizeOutcome equalize_connected(const BipartiteInstance& inst, const Assignment& x0,
                                   TreePolicy policy, const std::vector<int>& given_tree,
                                   double tol) {
    if (inst.num_edges() == 0) throw TreeError("NOT_CONNECTED: graph has no edge");
    if (!is_connected(inst)) throw TreeError("NOT_CONNECTED: graph has more than one component");

    bool exact = inst.all_linear() && x0.kind == NumericKind::Rational;
    if (!satisfies_task_equations(inst, x0, exact ? 0.0 : tol))
        throw TreeError("NOT_IN_XF: x0 violates a task equation");

    // Already equal loads: nothing to improve.
    if (exact) {
        auto rep = evaluate_loads_exact(inst, x0);
        if (rep.spread == 0) {
            EqualizeOutcome out;
            out.x = x0;
            out.exact = true;
            out.lambda_exact = rep.lmax;
            out.lambda = to_double(rep.lmax);
            return out;
        }
    } else {
        auto rep = evaluate_loads(inst, x0);
        if (rep.spread <= tol) {
            EqualizeOutcome out;
            out.x = x0;
            out.lambda = rep.lmax;
            return out;
        }
    }

    int root = 0;
    for (int w = 1; w < inst.num_workers(); ++w)
        if (inst.workers[w] < inst.workers[root]) root = w;

    std::vector<int> tree =
        policy == TreePolicy::Bfs ? bfs_spanning_tree(inst, root) : given_tree;
    auto view = make_tree_view(inst, std::move(tree), root);
    auto out = equalize_tree(view, x0, tol);
    out.improved = true;
    return out;
}

}  // namespace fairload
