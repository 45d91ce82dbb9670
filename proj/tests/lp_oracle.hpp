#ifndef FAIRLOAD_LP_ORACLE_HPP
#define FAIRLOAD_LP_ORACLE_HPP

// Brute-force LP oracle used only by the tests. Deliberately shares nothing
// with the simplex implementation: the optimum is found by enumerating every
// basic feasible solution (all square subsystems of tight constraints) and
// taking the best feasible one. Only valid for pointed feasible regions with
// an attained optimum, which covers every objective built over X^a here.

#include <functional>
#include <optional>
#include <vector>

#include "fairload/instance.hpp"
#include "fairload/rational.hpp"

namespace lporacle {

using fairload::BipartiteInstance;
using fairload::Rat;

struct Problem {
    int nvars = 0;
    std::vector<bool> nonneg;  // per variable; false = free
    struct Row {
        std::vector<Rat> a;
        Rat b;
    };
    std::vector<Row> eqs;  // a.x == b
    std::vector<Row> les;  // a.x <= b
    std::vector<Rat> obj;
    bool maximize = false;
};

// Solves the square system rows.x = rhs; empty result when singular.
inline std::optional<std::vector<Rat>> solve_square(std::vector<std::vector<Rat>> m,
                                                    std::vector<Rat> rhs) {
    const int n = static_cast<int>(rhs.size());
    for (int col = 0; col < n; ++col) {
        int piv = -1;
        for (int r = col; r < n; ++r)
            if (m[r][col] != 0) {
                piv = r;
                break;
            }
        if (piv < 0) return std::nullopt;
        std::swap(m[piv], m[col]);
        std::swap(rhs[piv], rhs[col]);
        Rat p = m[col][col];
        for (int j = col; j < n; ++j) m[col][j] /= p;
        rhs[col] /= p;
        for (int r = 0; r < n; ++r) {
            if (r == col || m[r][col] == 0) continue;
            Rat f = m[r][col];
            for (int j = col; j < n; ++j) m[r][j] -= f * m[col][j];
            rhs[r] -= f * rhs[col];
        }
    }
    return rhs;
}

// Row-reduces the equality system to an independent equivalent one.
// Returns false when the system is inconsistent.
inline bool reduce_equalities(const Problem& p, std::vector<Problem::Row>& out) {
    std::vector<std::vector<Rat>> m;
    std::vector<Rat> rhs;
    for (const auto& row : p.eqs) {
        m.push_back(row.a);
        rhs.push_back(row.b);
    }
    const int rows = static_cast<int>(m.size());
    int rank = 0;
    for (int col = 0; col < p.nvars && rank < rows; ++col) {
        int piv = -1;
        for (int r = rank; r < rows; ++r)
            if (m[r][col] != 0) {
                piv = r;
                break;
            }
        if (piv < 0) continue;
        std::swap(m[piv], m[rank]);
        std::swap(rhs[piv], rhs[rank]);
        for (int r = 0; r < rows; ++r) {
            if (r == rank || m[r][col] == 0) continue;
            Rat f = m[r][col] / m[rank][col];
            for (int j = 0; j < p.nvars; ++j) m[r][j] -= f * m[rank][j];
            rhs[r] -= f * rhs[rank];
        }
        ++rank;
    }
    for (int r = rank; r < rows; ++r)
        if (rhs[r] != 0) return false;
    out.clear();
    for (int r = 0; r < rank; ++r) out.push_back({m[r], rhs[r]});
    return true;
}

inline std::optional<Rat> oracle_solve(const Problem& p) {
    std::vector<Problem::Row> eqs;
    if (!reduce_equalities(p, eqs)) return std::nullopt;

    // Optional tight constraints: every inequality plus every sign bound.
    std::vector<Problem::Row> optional_rows = p.les;
    for (int j = 0; j < p.nvars; ++j) {
        if (!p.nonneg[j]) continue;
        Problem::Row row;
        row.a.assign(p.nvars, Rat(0));
        row.a[j] = -1;  // -x_j <= 0
        row.b = 0;
        optional_rows.push_back(row);
    }

    const int k = p.nvars - static_cast<int>(eqs.size());
    if (k < 0) return std::nullopt;  // over-determined after reduction: no vertex

    std::optional<Rat> best;
    auto try_candidate = [&](const std::vector<int>& chosen) {
        std::vector<std::vector<Rat>> m;
        std::vector<Rat> rhs;
        for (const auto& row : eqs) {
            m.push_back(row.a);
            rhs.push_back(row.b);
        }
        for (int idx : chosen) {
            m.push_back(optional_rows[idx].a);
            rhs.push_back(optional_rows[idx].b);
        }
        auto x = solve_square(std::move(m), std::move(rhs));
        if (!x) return;
        for (const auto& row : p.les) {
            Rat lhs = 0;
            for (int j = 0; j < p.nvars; ++j) lhs += row.a[j] * (*x)[j];
            if (lhs > row.b) return;
        }
        for (int j = 0; j < p.nvars; ++j)
            if (p.nonneg[j] && (*x)[j] < 0) return;
        Rat val = 0;
        for (int j = 0; j < p.nvars; ++j) val += p.obj[j] * (*x)[j];
        if (!best || (p.maximize ? val > *best : val < *best)) best = val;
    };

    std::vector<int> chosen;
    std::function<void(int)> pick = [&](int start) {
        if (static_cast<int>(chosen.size()) == k) {
            try_candidate(chosen);
            return;
        }
        int need = k - static_cast<int>(chosen.size());
        for (int i = start; i + need <= static_cast<int>(optional_rows.size()); ++i) {
            chosen.push_back(i);
            pick(i + 1);
            chosen.pop_back();
        }
    };
    pick(0);
    return best;
}

// Problem builders straight from the instance definition (independent of the
// production LP encodings in spirit: rows are written out longhand here).

inline Problem base_problem(const BipartiteInstance& inst, int extra_vars) {
    Problem p;
    p.nvars = inst.num_edges() + extra_vars;
    p.nonneg.assign(p.nvars, false);
    for (int e = 0; e < inst.num_edges(); ++e) p.nonneg[e] = true;
    for (int u = 0; u < inst.num_tasks(); ++u) {
        Problem::Row row;
        row.a.assign(p.nvars, Rat(0));
        for (int e : inst.task_edges(u)) row.a[e] += inst.task_weight[e];
        row.b = inst.demands[u];
        p.eqs.push_back(std::move(row));
    }
    p.obj.assign(p.nvars, Rat(0));
    return p;
}

inline Problem::Row load_minus_aux(const BipartiteInstance& inst, int nvars, int w, int aux,
                                   int sign) {
    // sign=+1: load - aux <= 0;  sign=-1: aux - load <= 0.
    Problem::Row row;
    row.a.assign(nvars, Rat(0));
    for (int e : inst.worker_edges(w)) row.a[e] += sign * inst.worker_weight[e];
    row.a[aux] -= sign;
    row.b = 0;
    return row;
}

inline std::optional<Rat> oracle_min_lmax(const BipartiteInstance& inst) {
    Problem p = base_problem(inst, 1);
    int t = inst.num_edges();
    for (int w = 0; w < inst.num_workers(); ++w)
        p.les.push_back(load_minus_aux(inst, p.nvars, w, t, +1));
    p.obj[t] = 1;
    return oracle_solve(p);
}

inline std::optional<Rat> oracle_max_lmin(const BipartiteInstance& inst) {
    Problem p = base_problem(inst, 1);
    int t = inst.num_edges();
    for (int w = 0; w < inst.num_workers(); ++w)
        p.les.push_back(load_minus_aux(inst, p.nvars, w, t, -1));
    p.obj[t] = 1;
    p.maximize = true;
    return oracle_solve(p);
}

inline std::optional<Rat> oracle_min_spread(const BipartiteInstance& inst) {
    Problem p = base_problem(inst, 2);
    int tmax = inst.num_edges(), tmin = tmax + 1;
    for (int w = 0; w < inst.num_workers(); ++w) {
        p.les.push_back(load_minus_aux(inst, p.nvars, w, tmax, +1));
        p.les.push_back(load_minus_aux(inst, p.nvars, w, tmin, -1));
    }
    p.obj[tmax] = 1;
    p.obj[tmin] = -1;
    return oracle_solve(p);
}

// Maximal common load level, or nullopt when no equal-load point exists.
inline std::optional<Rat> oracle_equal_level(const BipartiteInstance& inst) {
    Problem p = base_problem(inst, 1);
    int lambda = inst.num_edges();
    for (int w = 0; w < inst.num_workers(); ++w) {
        Problem::Row row;
        row.a.assign(p.nvars, Rat(0));
        for (int e : inst.worker_edges(w)) row.a[e] += inst.worker_weight[e];
        row.a[lambda] = -1;
        row.b = 0;
        p.eqs.push_back(std::move(row));
    }
    p.obj[lambda] = 1;
    p.maximize = true;
    return oracle_solve(p);
}

inline std::optional<Rat> oracle_worker_extreme(const BipartiteInstance& inst, int worker,
                                                const Rat& cap, bool maximize) {
    Problem p = base_problem(inst, 2);
    int tmax = inst.num_edges(), tmin = tmax + 1;
    for (int w = 0; w < inst.num_workers(); ++w) {
        p.les.push_back(load_minus_aux(inst, p.nvars, w, tmax, +1));
        p.les.push_back(load_minus_aux(inst, p.nvars, w, tmin, -1));
    }
    Problem::Row cap_row;
    cap_row.a.assign(p.nvars, Rat(0));
    cap_row.a[tmax] = 1;
    cap_row.a[tmin] = -1;
    cap_row.b = cap;
    p.les.push_back(std::move(cap_row));
    for (int e : inst.worker_edges(worker)) p.obj[e] += inst.worker_weight[e];
    p.maximize = maximize;
    return oracle_solve(p);
}

}  // namespace lporacle

#endif
