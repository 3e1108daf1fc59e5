#include "graphrl/rng.hpp"

#include <stdexcept>
#include <unordered_set>

namespace graphrl {

std::vector<std::uint64_t> Rng::sample_without_replacement(std::uint64_t n, std::uint64_t k) {
    if (k > n) throw std::invalid_argument("cannot sample more values than the population holds");
    std::vector<std::uint64_t> out;
    out.reserve(k);
    std::unordered_set<std::uint64_t> seen;
    seen.reserve(k * 2);
    for (std::uint64_t j = n - k; j < n; ++j) {
        const std::uint64_t t = index(j + 1);
        const std::uint64_t pick = seen.contains(t) ? j : t;
        seen.insert(pick);
        out.push_back(pick);
    }
    return out;
}

}  // namespace graphrl
