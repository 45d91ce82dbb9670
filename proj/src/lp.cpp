#include "fairload/lp.hpp"

#include <algorithm>
#include <stdexcept>

namespace fairload {

int Lp::add_var(bool free_var) {
    is_free.push_back(free_var);
    return num_vars++;
}

void Lp::add_row(Row row) { rows.push_back(std::move(row)); }

namespace {

// Dense tableau over the split nonnegative columns. The reduced-cost row is
// kept in sync with the basis by row elimination at every pivot.
struct Tableau {
    int m = 0, n = 0;
    std::vector<std::vector<Rat>> a;  // m x n
    std::vector<Rat> b;               // m, kept >= 0
    std::vector<int> basis;           // m
    std::vector<Rat> cost;            // n, reduced costs

    void pivot(int r, int c) {
        Rat p = a[r][c];
        for (int j = 0; j < n; ++j) a[r][j] /= p;
        b[r] /= p;
        for (int i = 0; i < m; ++i) {
            if (i == r || a[i][c] == 0) continue;
            Rat f = a[i][c];
            for (int j = 0; j < n; ++j) a[i][j] -= f * a[r][j];
            b[i] -= f * b[r];
        }
        if (cost[c] != 0) {
            Rat f = cost[c];
            for (int j = 0; j < n; ++j) cost[j] -= f * a[r][j];
        }
        basis[r] = c;
    }

    void reduce_cost_row() {
        for (int i = 0; i < m; ++i) {
            int c = basis[i];
            if (cost[c] == 0) continue;
            Rat f = cost[c];
            for (int j = 0; j < n; ++j) cost[j] -= f * a[i][j];
        }
    }

    // Bland's rule: entering = lowest index with negative reduced cost,
    // leaving = min ratio, ties broken by lowest basis index.
    // Returns false on unboundedness.
    bool run(int col_limit) {
        while (true) {
            int enter = -1;
            for (int j = 0; j < col_limit; ++j) {
                if (cost[j] < 0) {
                    enter = j;
                    break;
                }
            }
            if (enter < 0) return true;
            int leave = -1;
            Rat best_ratio = 0;
            for (int i = 0; i < m; ++i) {
                if (a[i][enter] <= 0) continue;
                Rat ratio = b[i] / a[i][enter];
                if (leave < 0 || ratio < best_ratio ||
                    (ratio == best_ratio && basis[i] < basis[leave])) {
                    leave = i;
                    best_ratio = ratio;
                }
            }
            if (leave < 0) return false;
            pivot(leave, enter);
        }
    }
};

}  // namespace

LpSolution solve_lp(const Lp& lp) {
    // Split free variables into x = p - q with p, q >= 0.
    std::vector<int> pos_col(lp.num_vars), neg_col(lp.num_vars, -1);
    int ncols = 0;
    for (int j = 0; j < lp.num_vars; ++j) {
        pos_col[j] = ncols++;
        if (lp.is_free[j]) neg_col[j] = ncols++;
    }
    int struct_cols = ncols;
    int slack_cols = 0;
    for (const auto& row : lp.rows)
        if (row.rel != Rel::Eq) ++slack_cols;

    const int m = static_cast<int>(lp.rows.size());
    Tableau t;
    t.m = m;
    t.n = struct_cols + slack_cols + m;  // artificials at the end
    t.a.assign(m, std::vector<Rat>(t.n, Rat(0)));
    t.b.assign(m, Rat(0));
    t.basis.assign(m, 0);

    int next_slack = struct_cols;
    const int art_start = struct_cols + slack_cols;
    for (int i = 0; i < m; ++i) {
        const auto& row = lp.rows[i];
        for (const auto& [j, coeff] : row.coeffs) {
            t.a[i][pos_col[j]] += coeff;
            if (neg_col[j] >= 0) t.a[i][neg_col[j]] -= coeff;
        }
        if (row.rel == Rel::Le)
            t.a[i][next_slack++] = 1;
        else if (row.rel == Rel::Ge)
            t.a[i][next_slack++] = -1;
        t.b[i] = row.rhs;
        if (t.b[i] < 0) {
            for (int j = 0; j < t.n; ++j) t.a[i][j] = -t.a[i][j];
            t.b[i] = -t.b[i];
        }
        t.a[i][art_start + i] = 1;
        t.basis[i] = art_start + i;
    }

    // Phase 1: minimize the artificial sum.
    t.cost.assign(t.n, Rat(0));
    for (int i = 0; i < m; ++i) t.cost[art_start + i] = 1;
    t.reduce_cost_row();
    t.run(t.n);
    Rat art_sum = 0;
    for (int i = 0; i < m; ++i)
        if (t.basis[i] >= art_start) art_sum += t.b[i];
    if (art_sum != 0) return {LpStatus::Infeasible, {}, 0};

    // Drive remaining artificials out of the basis; a fully zero row is a
    // redundant constraint and gets dropped.
    for (int i = 0; i < t.m;) {
        if (t.basis[i] < art_start) {
            ++i;
            continue;
        }
        int c = -1;
        for (int j = 0; j < art_start; ++j)
            if (t.a[i][j] != 0) {
                c = j;
                break;
            }
        if (c >= 0) {
            t.pivot(i, c);
            ++i;
        } else {
            t.a.erase(t.a.begin() + i);
            t.b.erase(t.b.begin() + i);
            t.basis.erase(t.basis.begin() + i);
            --t.m;
        }
    }

    // Phase 2 over the original objective (artificial columns barred).
    t.cost.assign(t.n, Rat(0));
    for (const auto& [j, coeff] : lp.objective) {
        Rat c = lp.maximize ? -coeff : coeff;
        t.cost[pos_col[j]] += c;
        if (neg_col[j] >= 0) t.cost[neg_col[j]] -= c;
    }
    t.reduce_cost_row();
    if (!t.run(art_start)) return {LpStatus::Unbounded, {}, 0};

    std::vector<Rat> col_val(t.n, Rat(0));
    for (int i = 0; i < t.m; ++i) col_val[t.basis[i]] = t.b[i];
    LpSolution sol;
    sol.status = LpStatus::Optimal;
    sol.x.resize(lp.num_vars);
    for (int j = 0; j < lp.num_vars; ++j) {
        sol.x[j] = col_val[pos_col[j]];
        if (neg_col[j] >= 0) sol.x[j] -= col_val[neg_col[j]];
    }
    for (const auto& [j, coeff] : lp.objective) sol.value += coeff * sol.x[j];
    return sol;
}

namespace {

void require_linear_nonneg(const BipartiteInstance& inst) {
    if (inst.mode != Mode::LinearNonneg)
        throw std::invalid_argument("LP objectives require LINEAR_NONNEG mode");
    if (!inst.all_linear())
        throw std::invalid_argument("LP objectives require linear load functions");
    if (inst.num_workers() == 0)
        throw std::invalid_argument("instance has no workers");
}

// Edge variables 0..E-1 plus task equality rows; the common core of X^a.
Lp base_lp(const BipartiteInstance& inst) {
    Lp lp;
    for (int e = 0; e < inst.num_edges(); ++e) lp.add_var(false);
    for (int u = 0; u < inst.num_tasks(); ++u) {
        Lp::Row row;
        row.rel = Rel::Eq;
        row.rhs = inst.demands[u];
        for (int e : inst.task_edges(u)) row.coeffs[e] += inst.task_weight[e];
        lp.add_row(std::move(row));
    }
    return lp;
}

Lp::Row load_row(const BipartiteInstance& inst, int w, Rel rel, int aux_var) {
    Lp::Row row;
    row.rel = rel;
    row.rhs = 0;
    for (int e : inst.worker_edges(w)) row.coeffs[e] += inst.worker_weight[e];
    row.coeffs[aux_var] -= 1;
    return row;
}

SolveResult finish(const BipartiteInstance& inst, const LpSolution& sol, ObjectiveTag tag) {
    SolveResult res;
    res.tag = tag;
    res.status = sol.status;
    if (sol.status == LpStatus::Optimal) {
        std::vector<Rat> x(sol.x.begin(), sol.x.begin() + inst.num_edges());
        res.assignment = Assignment::rational(std::move(x));
        res.value = sol.value;
    }
    return res;
}

}  // namespace

SolveResult solve_min_lmax(const BipartiteInstance& inst) {
    require_linear_nonneg(inst);
    Lp lp = base_lp(inst);
    int t = lp.add_var(true);
    for (int w = 0; w < inst.num_workers(); ++w) lp.add_row(load_row(inst, w, Rel::Le, t));
    lp.objective[t] = 1;
    return finish(inst, solve_lp(lp), ObjectiveTag::MinLmax);
}

SolveResult solve_max_lmin(const BipartiteInstance& inst) {
    require_linear_nonneg(inst);
    Lp lp = base_lp(inst);
    int t = lp.add_var(true);
    for (int w = 0; w < inst.num_workers(); ++w) lp.add_row(load_row(inst, w, Rel::Ge, t));
    lp.objective[t] = 1;
    lp.maximize = true;
    return finish(inst, solve_lp(lp), ObjectiveTag::MaxLmin);
}

SolveResult solve_min_spread(const BipartiteInstance& inst) {
    require_linear_nonneg(inst);
    Lp lp = base_lp(inst);
    int tmax = lp.add_var(true);
    int tmin = lp.add_var(true);
    for (int w = 0; w < inst.num_workers(); ++w) {
        lp.add_row(load_row(inst, w, Rel::Le, tmax));
        lp.add_row(load_row(inst, w, Rel::Ge, tmin));
    }
    lp.objective[tmax] = 1;
    lp.objective[tmin] = -1;
    return finish(inst, solve_lp(lp), ObjectiveTag::MinSpread);
}

SolveResult equal_load_feasible(const BipartiteInstance& inst) {
    require_linear_nonneg(inst);
    Lp lp = base_lp(inst);
    int lambda = lp.add_var(true);
    for (int w = 0; w < inst.num_workers(); ++w) lp.add_row(load_row(inst, w, Rel::Eq, lambda));
    lp.objective[lambda] = 1;  // report the maximal common load level
    lp.maximize = true;
    return finish(inst, solve_lp(lp), ObjectiveTag::EqualFeas);
}

namespace {

SolveResult load_of_worker_given_spread(const BipartiteInstance& inst, int worker,
                                        const Rat& spread_cap, bool maximize) {
    require_linear_nonneg(inst);
    if (worker < 0 || worker >= inst.num_workers())
        throw std::invalid_argument("worker index out of range");
    if (spread_cap < 0) throw std::invalid_argument("negative spread cap");
    Lp lp = base_lp(inst);
    int tmax = lp.add_var(true);
    int tmin = lp.add_var(true);
    for (int w = 0; w < inst.num_workers(); ++w) {
        lp.add_row(load_row(inst, w, Rel::Le, tmax));
        lp.add_row(load_row(inst, w, Rel::Ge, tmin));
    }
    Lp::Row cap_row;
    cap_row.rel = Rel::Le;
    cap_row.rhs = spread_cap;
    cap_row.coeffs[tmax] = 1;
    cap_row.coeffs[tmin] = -1;
    lp.add_row(std::move(cap_row));
    for (int e : inst.worker_edges(worker)) lp.objective[e] += inst.worker_weight[e];
    lp.maximize = maximize;
    return finish(inst, solve_lp(lp),
                  maximize ? ObjectiveTag::MaxLoadOf : ObjectiveTag::MinLoadOf);
}

}  // namespace

SolveResult max_load_of_worker_given_spread(const BipartiteInstance& inst, int worker,
                                            const Rat& spread_cap) {
    return load_of_worker_given_spread(inst, worker, spread_cap, true);
}

SolveResult min_load_of_worker_given_spread(const BipartiteInstance& inst, int worker,
                                            const Rat& spread_cap) {
    return load_of_worker_given_spread(inst, worker, spread_cap, false);
}

}  // namespace fairload
