#pragma once

// Seeded Erdos-Renyi-style instances for property sweeps and the `random`
// CLI family.  Bipartite mode draws a uniform side for every vertex and
// admits only cross-side pairs; general mode admits all pairs and carries no
// bipartition.  The deadline order is a uniform permutation and arrivals are
// synthesized from it, so generation is fully determined by the seed.

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "fomatch/errors.hpp"
#include "fomatch/instance.hpp"
#include "fomatch/rng.hpp"

namespace fomatch {

inline instance gen_random_instance(vertex_id n, double p, bool bipartite,
                                    std::uint64_t seed) {
    if (n < 1) throw domain_error("gen_random_instance: n must be at least 1");
    if (!(p >= 0.0 && p <= 1.0))
        throw domain_error("gen_random_instance: p must lie in [0,1]");
    if (1LL * n * (n - 1) / 2 > 30'000'000)
        throw size_overflow("gen_random_instance: n=" + std::to_string(n) +
                            " admits too many edges");
    std::mt19937_64 eng = make_engine(seed);

    std::vector<std::uint8_t> side;
    if (bipartite) {
        side.resize(static_cast<std::size_t>(n));
        for (auto& s : side) s = static_cast<std::uint8_t>(eng() & 1u);
    }
    std::vector<std::pair<vertex_id, vertex_id>> edges;
    for (vertex_id u = 0; u < n; ++u)
        for (vertex_id v = u + 1; v < n; ++v) {
            if (bipartite && side[static_cast<std::size_t>(u)] ==
                                 side[static_cast<std::size_t>(v)])
                continue;
            if (uniform01(eng) < p) edges.emplace_back(u, v);
        }

    std::vector<vertex_id> order(static_cast<std::size_t>(n));
    for (vertex_id i = 0; i < n; ++i) order[static_cast<std::size_t>(i)] = i;
    for (std::size_t i = order.size(); i > 1; --i)
        std::swap(order[i - 1], order[eng() % i]);

    return from_deadline_order(n, std::move(edges), order, std::move(side));
}

}  // namespace fomatch
