#ifndef FAIRLOAD_LP_HPP
#define FAIRLOAD_LP_HPP

#include <map>
#include <string>
#include <vector>

#include "fairload/instance.hpp"
#include "fairload/rational.hpp"

namespace fairload {

enum class LpStatus { Optimal, Infeasible, Unbounded };
enum class Rel { Eq, Le, Ge };

// A small exact-rational LP. Variables default to lower bound 0; free
// variables are split into a difference of two nonnegative parts inside
// the solver.
struct Lp {
    struct Row {
        std::map<int, Rat> coeffs;
        Rel rel = Rel::Eq;
        Rat rhs = 0;
    };

    int num_vars = 0;
    std::vector<bool> is_free;
    std::vector<Row> rows;
    std::map<int, Rat> objective;  // minimized unless maximize
    bool maximize = false;

    int add_var(bool free_var = false);
    void add_row(Row row);
};

struct LpSolution {
    LpStatus status = LpStatus::Infeasible;
    std::vector<Rat> x;  // per declared variable when Optimal
    Rat value = 0;
};

// Two-phase primal simplex with Bland's rule; exact rational pivots, so
// termination and the returned optimum are guaranteed.
LpSolution solve_lp(const Lp& lp);

enum class ObjectiveTag { MinLmax, MaxLmin, MinSpread, EqualFeas, MaxLoadOf, MinLoadOf };

struct SolveResult {
    LpStatus status = LpStatus::Infeasible;
    ObjectiveTag tag = ObjectiveTag::MinLmax;
    Assignment assignment;  // rational, in X^a, when Optimal
    Rat value = 0;
};

// The three objectives plus the equal-load feasibility probe. All require
// LinearNonneg mode and throw std::invalid_argument otherwise.
SolveResult solve_min_lmax(const BipartiteInstance& inst);
SolveResult solve_max_lmin(const BipartiteInstance& inst);
SolveResult solve_min_spread(const BipartiteInstance& inst);

// Feasibility of "all worker loads equal"; when feasible, the witness
// attains the maximal common load level.
SolveResult equal_load_feasible(const BipartiteInstance& inst);

// Extremal load of one worker over {x in X^a : spread(x) <= spread_cap}.
SolveResult max_load_of_worker_given_spread(const BipartiteInstance& inst, int worker,
                                            const Rat& spread_cap);
SolveResult min_load_of_worker_given_spread(const BipartiteInstance& inst, int worker,
                                            const Rat& spread_cap);

}  // namespace fairload

#endif
