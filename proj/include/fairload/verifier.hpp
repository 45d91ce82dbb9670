#ifndef FAIRLOAD_VERIFIER_HPP
#define FAIRLOAD_VERIFIER_HPP

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "fairload/instance.hpp"
#include "fairload/json_io.hpp"
#include "fairload/lp.hpp"

namespace fairload {

// splitmix64; fixed here so seeds reproduce across platforms and languages.
struct SplitMix64 {
    std::uint64_t state;
    explicit SplitMix64(std::uint64_t seed) : state(seed) {}

    std::uint64_t next() {
        std::uint64_t z = (state += 0x9E3779B97F4A7C15ULL);
        z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
        z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
        return z ^ (z >> 31);
    }
    // Uniform in [0, 1).
    double next_unit() { return (next() >> 11) * 0x1.0p-53; }
    // Uniform in [lo, hi] inclusive.
    long long next_range(long long lo, long long hi) {
        return lo + static_cast<long long>(next() % static_cast<std::uint64_t>(hi - lo + 1));
    }
};

struct GenParams {
    int num_tasks = 3;
    int num_workers = 3;
    double density = 0.6;
    long long demand_min = 0, demand_max = 10;
    long long weight_max = 5;  // weights p/q with p,q in 1..weight_max
    Mode mode = Mode::LinearNonneg;
    int expr_depth = 2;        // GeneralReal worker expression depth
    bool unit_weights = false; // all-one weights (the Proposition 1 setting)
    std::uint64_t seed = 1;
};

// Deterministic function of the seed: same params+seed, same instance.
BipartiteInstance gen_random_instance(const GenParams& p);

// A random point of X^f, built by the fixing recursion so membership holds
// by construction. Float for nonlinear instances, rational otherwise.
Assignment random_xf_point(const BipartiteInstance& inst, std::uint64_t seed);

enum class Verdict { Confirmed, HypothesisVoid, Violated };

struct TheoremReport {
    std::string theorem;
    std::string instance_digest;
    Verdict verdict = Verdict::Confirmed;
    struct Check {
        std::string name;
        bool exact = true;
        bool passed = true;
        std::string detail;
    };
    std::vector<Check> checks;
    Json witness;  // re-checkable data for Violated verdicts
};

std::string instance_digest(const BipartiteInstance& inst);

// Equal-load infeasibility hypothesis, then the exact equalities between
// the min-spread solution set extremes and the min-lmax / max-lmin optima.
TheoremReport check_theorem1(const BipartiteInstance& inst);

// All-one-weight case, asserted unconditionally, plus the conservation
// identity sum of loads == sum of demands on every solver output.
TheoremReport check_prop1(const BipartiteInstance& inst);

// Strict sandwich of the equalized common load, tolerance 1e-9.
TheoremReport check_theorem2(const BipartiteInstance& inst, const Assignment& x0);

// One rebalancing step along a task in U^max toward a non-maximal worker.
// Returns nothing when N(U^max) == W^max.
std::optional<Assignment> improvement_step(const BipartiteInstance& inst, const Assignment& x);

// z(t): convex interpolation on the edges of delta(U^max(xbar)), xbar
// elsewhere. Stays in X^a for t in [0,1].
Assignment interpolate_umax(const BipartiteInstance& inst, const Assignment& xbar,
                            const Assignment& ystar, const Rat& t);

Json theorem_report_to_json(const TheoremReport& rep);

}  // namespace fairload

#endif
