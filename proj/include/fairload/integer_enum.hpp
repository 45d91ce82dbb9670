#ifndef FAIRLOAD_INTEGER_ENUM_HPP
#define FAIRLOAD_INTEGER_ENUM_HPP

#include <cstdint>
#include <functional>
#include <optional>
#include <vector>

#include "fairload/instance.hpp"

namespace fairload {

struct EnumError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Exhaustive statistics over the integer points of X^a. Requires integer
// demands and integer task-side weights (worker weights may be rational).
struct IntegralSummary {
    std::uint64_t count = 0;
    // Valid when count > 0.
    Rat min_lmax, max_lmin, min_spread;
    std::vector<long long> min_spread_witness;
    std::vector<std::vector<long long>> lmax_argmins;  // kept while <= argmin_cap
    bool argmins_truncated = false;
    Rat min_spread_among_lmax_argmins;
    std::vector<std::pair<Rat, Rat>> pareto;  // nondominated (lmax, lmin)
};

struct EnumOptions {
    std::uint64_t count_cap = 10'000'000;  // TOO_LARGE beyond this
    std::size_t argmin_cap = 1000;
};

// Streams every integer point of X^a in lexicographic edge order (per-task
// compositions nested in task order). Throws TOO_LARGE / NON_INTEGER_DATA.
void for_each_integral(const BipartiteInstance& inst, const EnumOptions& opt,
                       const std::function<void(const std::vector<long long>&)>& fn);

std::uint64_t count_integral(const BipartiteInstance& inst, const EnumOptions& opt = {});

IntegralSummary enumerate_integral(const BipartiteInstance& inst, const EnumOptions& opt = {});

// Minimum of lmax over the integer points, with branch-and-prune on
// partial loads; argmin list retained while small.
std::pair<Rat, std::vector<std::vector<long long>>> integral_min_lmax(
    const BipartiteInstance& inst, const EnumOptions& opt = {});

std::pair<Rat, std::vector<long long>> integral_min_spread(const BipartiteInstance& inst,
                                                           const EnumOptions& opt = {});

std::vector<std::pair<Rat, Rat>> integral_pareto(const BipartiteInstance& inst,
                                                 const EnumOptions& opt = {});

}  // namespace fairload

#endif
