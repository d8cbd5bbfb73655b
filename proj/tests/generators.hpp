#pragma once

// Random polynomial generators shared by the property tests.

#include "hirzebruch/symmetric.hpp"

namespace testgen {

using namespace hirz;

inline MultiPoly var(const LayoutPtr& l, std::size_t i) { return MultiPoly::variable(l, i); }
inline MultiPoly cst(const LayoutPtr& l, const Rational& c) { return MultiPoly::constant(l, c); }

// Elementary symmetric polynomial e_k by subset enumeration.
inline MultiPoly elementary(const LayoutPtr& l, int k) {
    const std::size_t m = l->alternating();
    MultiPoly e(l);
    for (unsigned mask = 0; mask < (1u << m); ++mask) {
        if (__builtin_popcount(mask) != k) continue;
        MultiPoly term = cst(l, 1);
        for (std::size_t i = 0; i < m; ++i)
            if (mask & (1u << i)) term *= var(l, i);
        e += term;
    }
    return e;
}

// Random symmetric polynomial of degree <= 4 from products of e_1..e_4.
inline MultiPoly random_symmetric(const LayoutPtr& l, Rng& rng) {
    const int m = static_cast<int>(l->alternating());
    MultiPoly q = cst(l, ratio(rng.integer(-5, 5), 1));
    for (int term = 0; term < 3; ++term) {
        MultiPoly t = cst(l, ratio(rng.integer(-7, 7), rng.integer(1, 4)));
        int budget = 4;
        while (budget > 0) {
            int k = static_cast<int>(rng.integer(1, std::min(budget, m)));
            t *= elementary(l, k);
            budget -= k;
            if (rng.uniform() < 0.4) break;
        }
        q += t;
    }
    return q;
}

inline MultiPoly random_poly(const LayoutPtr& l, Rng& rng, int max_degree, int terms) {
    MultiPoly p(l);
    std::vector<int> e(l->size(), 0);
    for (int t = 0; t < terms; ++t) {
        int budget = max_degree;
        for (std::size_t i = 0; i < l->alternating(); ++i) {
            e[i] = static_cast<int>(rng.integer(0, budget));
            budget -= e[i];
        }
        p += MultiPoly::monomial(l, e, ratio(rng.integer(-9, 9), rng.integer(1, 3)));
    }
    return p;
}

} // namespace testgen
