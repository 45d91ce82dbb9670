#ifndef FAIRLOAD_INSTANCE_HPP
#define FAIRLOAD_INSTANCE_HPP

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "fairload/load_expr.hpp"
#include "fairload/rational.hpp"

namespace fairload {

// LinearNonneg: x >= 0, positive-linear loads, demands >= 0 (the weighted
// nonnegative setting). GeneralReal: x unrestricted in sign, loads drawn
// from the monotone-bijection expression grammar.
enum class Mode { LinearNonneg, GeneralReal };

enum class NumericKind { Rational, Float };

struct BipartiteInstance {
    Mode mode = Mode::LinearNonneg;
    std::vector<std::string> tasks;
    std::vector<std::string> workers;
    std::vector<Rat> demands;                     // per task index
    std::vector<std::pair<int, int>> edges;       // (task index, worker index)
    std::vector<Rat> task_weight;                 // per edge, default 1
    std::vector<Rat> worker_weight;               // per edge, default 1
    std::vector<std::optional<LoadExpr>> worker_func_override;  // per worker

    // Builds adjacency, id maps, and materialized load expressions.
    // Must be called after the public fields are populated.
    void finalize();

    int num_tasks() const { return static_cast<int>(tasks.size()); }
    int num_workers() const { return static_cast<int>(workers.size()); }
    int num_edges() const { return static_cast<int>(edges.size()); }

    const std::vector<int>& task_edges(int u) const { return task_adj_[u]; }
    const std::vector<int>& worker_edges(int w) const { return worker_adj_[w]; }
    const LoadExpr& task_expr(int u) const { return task_exprs_[u]; }
    const LoadExpr& worker_expr(int w) const { return worker_exprs_[w]; }

    int task_index(const std::string& id) const;    // -1 if absent
    int worker_index(const std::string& id) const;  // -1 if absent
    std::string edge_key(int e) const;              // "task:worker"

    bool all_linear() const;

  private:
    std::vector<std::vector<int>> task_adj_, worker_adj_;
    std::vector<LoadExpr> task_exprs_, worker_exprs_;
    std::map<std::string, int> task_idx_, worker_idx_;
};

struct Assignment {
    NumericKind kind = NumericKind::Rational;
    std::vector<Rat> rat;     // per edge when kind == Rational
    std::vector<double> dbl;  // per edge when kind == Float

    static Assignment rational(std::vector<Rat> values);
    static Assignment floating(std::vector<double> values);

    int size() const;
    double as_double(int e) const;
    std::vector<double> to_doubles() const;
};

template <class T>
struct BasicLoadReport {
    std::vector<T> per_worker;
    T lmax{}, lmin{}, spread{};
    std::vector<int> wmax_set, wmin_set;  // worker indices
    std::vector<int> umax_set;            // task indices
};
using LoadReport = BasicLoadReport<Rat>;
using LoadReportF = BasicLoadReport<double>;

struct ValidationReport {
    struct Item {
        std::string code;
        std::string message;
    };
    std::vector<Item> items;
    bool ok() const { return items.empty(); }
};

// Diagnoses are data; never throws on invalid instances.
ValidationReport validate_instance(const BipartiteInstance& inst);

// Float path, available for every instance.
LoadReportF evaluate_loads(const BipartiteInstance& inst, const Assignment& x);
// Exact path; requires an all-linear instance and a rational assignment.
LoadReport evaluate_loads_exact(const BipartiteInstance& inst, const Assignment& x);

// Membership in X^a (LinearNonneg) or X^f (GeneralReal) within tol.
// tol == 0 is only meaningful for rational assignments and throws otherwise.
bool check_membership(const BipartiteInstance& inst, const Assignment& x, double tol);

// Task equations alone, signs unrestricted (the X^f test even for
// LinearNonneg instances).
bool satisfies_task_equations(const BipartiteInstance& inst, const Assignment& x, double tol);

// Connectivity of the whole vertex set U + W.
bool is_connected(const BipartiteInstance& inst);

}  // namespace fairload

#endif
