// Helpers shared by the algebra tests and the acceptance run.
#pragma once

#include <functional>
#include <random>

#include "stdl/oracles.hpp"
#include "stdl/qsp.hpp"

namespace stdl::testing {

// Atomic refinements of a binary network that the model oracle accepts.
// Variables are added one at a time and every prefix is checked with the
// oracle, so nothing here relies on the composition table.
inline bool oracle_has_scenario(const Qsp& q) {
    int n = q.size();
    AlgebraId a = q.algebra();
    oracle::AtomMatrix m(size_t(n) * n, identity_atom(a));
    std::vector<std::pair<int, int>> pairs;
    for (int k = 1; k < n; ++k)
        for (int i = 0; i < k; ++i) pairs.push_back({i, k});
    auto prefix_ok = [&](int k) {
        oracle::AtomMatrix sub(size_t(k) * k);
        for (int i = 0; i < k; ++i)
            for (int j = 0; j < k; ++j) sub[size_t(i) * k + j] = m[size_t(i) * n + j];
        return oracle::binary_realizable(a, k, sub);
    };
    std::function<bool(size_t)> go = [&](size_t p) -> bool {
        if (p == pairs.size()) return true;
        auto [i, k] = pairs[p];
        for (int at : q.get(i, k).atoms()) {
            m[size_t(i) * n + k] = at;
            m[size_t(k) * n + i] = converse_atom(a, at);
            if (i == k - 1 && !prefix_ok(k + 1)) continue;
            if (go(p + 1)) return true;
        }
        return false;
    };
    for (int i = 0; i < n; ++i)
        if (!q.get(i, i).has(identity_atom(a))) return false;
    return go(0);
}

inline Relation random_superset(AlgebraId a, int atom, std::mt19937& rng, double p) {
    Relation r = Relation::atom(a, atom);
    std::bernoulli_distribution coin(p);
    for (int i = 0; i < atom_count(a); ++i)
        if (coin(rng)) r = r | Relation::atom(a, i);
    return r;
}

}  // namespace stdl::testing
