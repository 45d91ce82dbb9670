#include "fairload/load_expr.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace fairload {

LoadExpr LoadExpr::var(int edge, Rat coeff) {
    LoadExpr e;
    e.kind = ExprKind::Var;
    e.edge = edge;
    e.coeff = std::move(coeff);
    return e;
}

LoadExpr LoadExpr::sum(std::vector<LoadExpr> children) {
    LoadExpr e;
    e.kind = ExprKind::Sum;
    e.children = std::move(children);
    return e;
}

LoadExpr LoadExpr::max_of(std::vector<LoadExpr> children) {
    LoadExpr e;
    e.kind = ExprKind::Max;
    e.children = std::move(children);
    return e;
}

LoadExpr LoadExpr::odd_pow(LoadExpr child, int exponent) {
    LoadExpr e;
    e.kind = ExprKind::OddPow;
    e.exponent = exponent;
    e.children.push_back(std::move(child));
    return e;
}

LoadExpr LoadExpr::shift(LoadExpr child, Rat offset) {
    LoadExpr e;
    e.kind = ExprKind::Shift;
    e.offset = std::move(offset);
    e.children.push_back(std::move(child));
    return e;
}

LoadExpr LoadExpr::weighted_sum(const std::vector<std::pair<int, Rat>>& terms) {
    std::vector<LoadExpr> vars;
    vars.reserve(terms.size());
    for (const auto& [edge, coeff] : terms) vars.push_back(LoadExpr::var(edge, coeff));
    if (vars.size() == 1) return vars.front();
    return LoadExpr::sum(std::move(vars));
}

std::set<int> expr_edges(const LoadExpr& e) {
    std::set<int> out;
    if (e.kind == ExprKind::Var) {
        out.insert(e.edge);
        return out;
    }
    for (const auto& c : e.children) {
        auto sub = expr_edges(c);
        out.insert(sub.begin(), sub.end());
    }
    return out;
}

namespace {

void validate_node(const LoadExpr& e) {
    switch (e.kind) {
        case ExprKind::Var:
            if (e.edge < 0) throw std::invalid_argument("Var node without edge");
            if (e.coeff <= 0) throw std::invalid_argument("Var coefficient must be > 0");
            return;
        case ExprKind::Sum:
            if (e.children.empty()) throw std::invalid_argument("Sum node without children");
            break;
        case ExprKind::Max: {
            if (e.children.empty()) throw std::invalid_argument("Max node without children");
            // Each component must stay a bijection: every Max child has to
            // depend on the same edges, otherwise the max is flat somewhere.
            auto first = expr_edges(e.children.front());
            for (const auto& c : e.children) {
                if (expr_edges(c) != first)
                    throw std::invalid_argument("Max children must cover identical edge sets");
            }
            break;
        }
        case ExprKind::OddPow:
            if (e.children.size() != 1) throw std::invalid_argument("OddPow needs one child");
            if (e.exponent < 1 || e.exponent % 2 == 0)
                throw std::invalid_argument("OddPow exponent must be odd and positive");
            break;
        case ExprKind::Shift:
            if (e.children.size() != 1) throw std::invalid_argument("Shift needs one child");
            break;
    }
    for (const auto& c : e.children) validate_node(c);
}

}  // namespace

void validate_expr(const LoadExpr& e, const std::set<int>& expected_edges) {
    validate_node(e);
    auto edges = expr_edges(e);
    if (edges != expected_edges)
        throw std::invalid_argument("expression edge set differs from the vertex neighborhood");
}

std::optional<LinearForm> linear_form(const LoadExpr& e) {
    switch (e.kind) {
        case ExprKind::Var: {
            LinearForm f;
            f.coeffs[e.edge] = e.coeff;
            return f;
        }
        case ExprKind::Sum: {
            LinearForm f;
            for (const auto& c : e.children) {
                auto sub = linear_form(c);
                if (!sub) return std::nullopt;
                for (auto& [edge, coeff] : sub->coeffs) f.coeffs[edge] += coeff;
                f.offset += sub->offset;
            }
            return f;
        }
        case ExprKind::OddPow: {
            if (e.exponent != 1) return std::nullopt;
            return linear_form(e.children.front());
        }
        case ExprKind::Shift: {
            auto sub = linear_form(e.children.front());
            if (!sub) return std::nullopt;
            sub->offset += e.offset;
            return sub;
        }
        case ExprKind::Max:
            if (e.children.size() == 1) return linear_form(e.children.front());
            return std::nullopt;
    }
    return std::nullopt;
}

namespace {

template <class T>
T eval_impl(const LoadExpr& e, const std::vector<T>& point) {
    switch (e.kind) {
        case ExprKind::Var: {
            if (e.edge < 0 || e.edge >= static_cast<int>(point.size()))
                throw KeyMismatch("point does not cover the expression's edges");
            if constexpr (std::is_floating_point_v<T>)
                return static_cast<T>(to_double(e.coeff)) * point[e.edge];
            else
                return e.coeff * point[e.edge];
        }
        case ExprKind::Sum: {
            T acc = 0;
            for (const auto& c : e.children) acc += eval_impl(c, point);
            return acc;
        }
        case ExprKind::Max: {
            T best = eval_impl(e.children.front(), point);
            for (std::size_t i = 1; i < e.children.size(); ++i)
                best = std::max(best, eval_impl(e.children[i], point));
            return best;
        }
        case ExprKind::OddPow: {
            T base = eval_impl(e.children.front(), point);
            if constexpr (std::is_floating_point_v<T>)
                return std::pow(base, static_cast<T>(e.exponent));
            else
                return rat_pow(base, e.exponent);
        }
        case ExprKind::Shift: {
            T inner = eval_impl(e.children.front(), point);
            if constexpr (std::is_floating_point_v<T>)
                return inner + static_cast<T>(to_double(e.offset));
            else
                return inner + e.offset;
        }
    }
    throw std::logic_error("unreachable expression kind");
}

}  // namespace

double eval_expr(const LoadExpr& e, const std::vector<double>& point) {
    // Accumulate in extended precision: nested odd powers routinely build
    // intermediates around 1e7-1e9, where plain double evaluation noise
    // would dominate the tolerances advertised by the equalizer.
    std::vector<long double> p(point.begin(), point.end());
    return static_cast<double>(eval_impl(e, p));
}

Rat eval_expr(const LoadExpr& e, const std::vector<Rat>& point) {
    return eval_impl(e, point);
}

namespace {

long double eval_expr_ld(const LoadExpr& e, const std::vector<long double>& point) {
    return eval_impl(e, point);
}

}  // namespace

Rat invert_component_exact(const LoadExpr& e, const std::vector<Rat>& fixed,
                           int free_edge, const Rat& target) {
    auto lf = linear_form(e);
    if (!lf) throw std::invalid_argument("exact inversion requires a linear expression");
    auto it = lf->coeffs.find(free_edge);
    if (it == lf->coeffs.end())
        throw KeyMismatch("free edge is not part of the expression");
    Rat rest = lf->offset;
    for (const auto& [edge, coeff] : lf->coeffs) {
        if (edge == free_edge) continue;
        if (edge >= static_cast<int>(fixed.size()))
            throw KeyMismatch("fixed point does not cover the expression's edges");
        rest += coeff * fixed[edge];
    }
    return (target - rest) / it->second;
}

double invert_component(const LoadExpr& e, const std::vector<double>& fixed,
                        int free_edge, double target, double tol) {
    if (auto lf = linear_form(e)) {
        auto it = lf->coeffs.find(free_edge);
        if (it == lf->coeffs.end())
            throw KeyMismatch("free edge is not part of the expression");
        double rest = to_double(lf->offset);
        for (const auto& [edge, coeff] : lf->coeffs) {
            if (edge == free_edge) continue;
            rest += to_double(coeff) * fixed[edge];
        }
        return (target - rest) / to_double(it->second);
    }

    // Bracket and bisect in extended precision: steep nested odd powers
    // produce intermediates around 1e9, where plain doubles leave residuals
    // far above the advertised tolerance.
    std::vector<long double> point(fixed.begin(), fixed.end());
    if (free_edge >= static_cast<int>(point.size())) point.resize(free_edge + 1, 0.0L);
    const long double t = target;
    auto h = [&](long double s) {
        point[free_edge] = s;
        return eval_expr_ld(e, point) - t;
    };

    // The function is increasing and surjective, so doubling from 0 must
    // eventually bracket the root (unless the tree violates the invariants).
    long double lo = 0.0L, hi = 0.0L;
    long double h0 = h(0.0L);
    if (h0 == 0.0L) return 0.0;
    const long double kMaxMag = std::ldexp(1.0L, 64);
    if (h0 < 0.0L) {
        long double step = 1.0L;
        lo = 0.0L;
        while (true) {
            hi = step;
            if (h(hi) >= 0.0L) break;
            lo = hi;
            step *= 2.0L;
            if (step > kMaxMag) throw RootFindError("NO_BRACKET: expansion exceeded 2^64");
        }
    } else {
        long double step = 1.0L;
        hi = 0.0L;
        while (true) {
            lo = -step;
            if (h(lo) <= 0.0L) break;
            hi = lo;
            step *= 2.0L;
            if (step > kMaxMag) throw RootFindError("NO_BRACKET: expansion exceeded 2^64");
        }
    }

    // Return the evaluated point with the smallest residual: the midpoint of
    // the final interval has not been probed, and on steep maps it can sit
    // far from the root even when the interval is narrow.
    const long double ltol = tol;
    long double best = 0.5L * (lo + hi);
    long double best_resid = std::numeric_limits<long double>::infinity();
    for (int iter = 0; iter < 260; ++iter) {
        long double mid = 0.5L * (lo + hi);
        long double hm = h(mid);
        if (hm == 0.0L) return static_cast<double>(mid);
        if (std::fabs(hm) < best_resid) {
            best = mid;
            best_resid = std::fabs(hm);
        }
        (hm < 0.0L ? lo : hi) = mid;
        // Stop on a small interval only once the residual is small too; the
        // interval criterion alone can leave a large residual on steep maps.
        if (hi - lo <= ltol * std::max(1.0L, std::max(std::fabs(lo), std::fabs(hi))) &&
            std::fabs(hm) <= ltol * std::max(1.0L, std::fabs(t)))
            break;
    }
    return static_cast<double>(best);
}

std::function<double(double)> g_map(const LoadExpr& e, std::vector<double> fixed,
                                    int in_edge, int out_edge, double level, double tol) {
    int needed = std::max(in_edge, out_edge);
    if (needed >= static_cast<int>(fixed.size())) fixed.resize(needed + 1, 0.0);
    return [e, fixed = std::move(fixed), in_edge, out_edge, level, tol](double t) mutable {
        fixed[in_edge] = t;
        return invert_component(e, fixed, out_edge, level, tol);
    };
}

}  // namespace fairload
