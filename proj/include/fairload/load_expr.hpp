#ifndef FAIRLOAD_LOAD_EXPR_HPP
#define FAIRLOAD_LOAD_EXPR_HPP

#include <functional>
#include <map>
#include <optional>
#include <set>
#include <stdexcept>
#include <vector>

#include "fairload/rational.hpp"

namespace fairload {

// Expression tree for per-vertex load functions. Every expression built
// from these node kinds is, in each edge variable separately, an increasing
// bijection of the reals, provided the structural checks in validate_expr
// pass (positive coefficients, odd exponents, Max children over identical
// edge sets).
enum class ExprKind { Var, Sum, Max, OddPow, Shift };

struct LoadExpr {
    ExprKind kind = ExprKind::Var;
    int edge = -1;       // Var: global edge index
    Rat coeff = 1;       // Var
    int exponent = 1;    // OddPow: odd, >= 1
    Rat offset = 0;      // Shift
    std::vector<LoadExpr> children;

    static LoadExpr var(int edge, Rat coeff = 1);
    static LoadExpr sum(std::vector<LoadExpr> children);
    static LoadExpr max_of(std::vector<LoadExpr> children);
    static LoadExpr odd_pow(LoadExpr child, int exponent);
    static LoadExpr shift(LoadExpr child, Rat offset);

    // Positively-weighted sum over the given edges (the linear a.x case).
    static LoadExpr weighted_sum(const std::vector<std::pair<int, Rat>>& terms);
};

struct LinearForm {
    std::map<int, Rat> coeffs;  // edge -> strictly positive coefficient
    Rat offset = 0;
};

std::set<int> expr_edges(const LoadExpr& e);

// Throws std::invalid_argument if the tree violates the structural
// invariants or its leaf edge set differs from expected_edges.
void validate_expr(const LoadExpr& e, const std::set<int>& expected_edges);

// Present iff the tree contains no Max/OddPow(k>1) node.
std::optional<LinearForm> linear_form(const LoadExpr& e);

struct KeyMismatch : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};
struct RootFindError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// point is indexed by global edge id; only the expression's edges are read.
double eval_expr(const LoadExpr& e, const std::vector<double>& point);
Rat eval_expr(const LoadExpr& e, const std::vector<Rat>& point);

// Solves eval(e, fixed with [free_edge] := s) == target for s. Closed form
// when the expression is linear; otherwise bracket expansion from 0 plus
// bisection to relative tolerance tol (at most 200 iterations).
double invert_component(const LoadExpr& e, const std::vector<double>& fixed,
                        int free_edge, double target, double tol = 1e-12);

// Exact closed-form inversion; throws std::invalid_argument if e is not linear.
Rat invert_component_exact(const LoadExpr& e, const std::vector<Rat>& fixed,
                           int free_edge, const Rat& target);

// The decreasing transport map g with eval(e, fixed, in:=t, out:=g(t)) == level.
std::function<double(double)> g_map(const LoadExpr& e, std::vector<double> fixed,
                                    int in_edge, int out_edge, double level,
                                    double tol = 1e-12);

}  // namespace fairload

#endif
