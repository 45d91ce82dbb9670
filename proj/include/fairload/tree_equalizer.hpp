#ifndef FAIRLOAD_TREE_EQUALIZER_HPP
#define FAIRLOAD_TREE_EQUALIZER_HPP

#include <functional>
#include <vector>

#include "fairload/instance.hpp"

namespace fairload {

struct TreeError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// A spanning tree of the instance graph rooted at a worker, with non-tree
// edges pinned to externally supplied values. Vertices are encoded as
// task index u, or num_tasks() + worker index w.
struct RootedTreeView {
    const BipartiteInstance* inst = nullptr;
    std::vector<int> tree_edges;
    int root_worker = -1;

    std::vector<bool> in_tree;     // per edge
    std::vector<int> parent_edge;  // per vertex, -1 at the root
    std::vector<int> bottom_up;    // vertex order, children before parents

    int vertex_of_worker(int w) const { return inst->num_tasks() + w; }
};

// Throws TreeError("NOT_A_TREE") unless the edges form a spanning tree of
// the whole vertex set.
RootedTreeView make_tree_view(const BipartiteInstance& inst, std::vector<int> tree_edges,
                              int root_worker);

// Deterministic BFS spanning tree; throws TreeError("NOT_CONNECTED") when
// the graph is disconnected.
std::vector<int> bfs_spanning_tree(const BipartiteInstance& inst, int root_worker);

// Lemma-style fixing: prescribing every worker load except the root's
// determines the assignment uniquely, leaf to root. pinned supplies values
// for non-tree edges; targets[w] is ignored for the root worker.
// Returns the full edge-value vector.
std::vector<double> fix_loads(const RootedTreeView& view, const std::vector<double>& pinned,
                              const std::vector<double>& targets, double tol = 1e-12);
std::vector<Rat> fix_loads_exact(const RootedTreeView& view, const std::vector<Rat>& pinned,
                                 const std::vector<Rat>& targets);

// Fixed point of a continuous non-increasing map (monotonicity is spot
// checked on samples, not assumed silently). Throws TreeError on bracket
// failure or an increasing sample pair.
double fixed_point_bisect(const std::function<double(double)>& f, double tol = 1e-12);

struct EqualizeOutcome {
    Assignment x;
    Rat lambda_exact;      // valid when exact
    double lambda = 0.0;
    bool exact = false;
    bool improved = false;
    bool negative_components = false;  // x' left the nonnegative orthant
    std::vector<int> tree_edges;
};

// Unique all-equal-load point on a tree (with pinned non-tree edges).
// Exact closed form when every load function is linear and pinned values
// are rational.
EqualizeOutcome equalize_tree(const RootedTreeView& view, const Assignment& pinned,
                              double tol = 1e-12);

enum class TreePolicy { Bfs, Given };

// Theorem-2 equalization on a connected graph: keeps x0 on non-tree edges,
// re-solves the spanning tree so that all worker loads coincide. When the
// loads of x0 are already equal, returns x0 with improved=false.
EqualizeOutcome equalize_connected(const BipartiteInstance& inst, const Assignment& x0,
                                   TreePolicy policy = TreePolicy::Bfs,
                                   const std::vector<int>& given_tree = {}, double tol = 1e-9);

}  // namespace fairload

#endif
