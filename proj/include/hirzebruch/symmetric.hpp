#pragma once

// Symmetric-function operators on the alternating variables x_0..x_n:
// adjacent swaps, divided differences, the Vandermonde product, the
// alternation operator L, Schur polynomials and exponent signatures.

#include <algorithm>
#include <numeric>
#include <vector>

#include "errors.hpp"
#include "multipoly.hpp"
#include "numeric.hpp"

namespace hirz {

struct Permutation {
    std::vector<std::size_t> image;
    int sign;
};

// All permutations of {0..m-1} in lexicographic order, with signs.
inline std::vector<Permutation> permutations(std::size_t m) {
    std::vector<Permutation> out;
    std::vector<std::size_t> p(m);
    std::iota(p.begin(), p.end(), std::size_t{0});
    do {
        int inv = 0;
        for (std::size_t i = 0; i < m; ++i)
            for (std::size_t j = i + 1; j < m; ++j)
                if (p[i] > p[j]) ++inv;
        out.push_back({p, inv % 2 == 0 ? 1 : -1});
    } while (std::next_permutation(p.begin(), p.end()));
    return out;
}

inline std::size_t alternating_count(const MultiPoly& p) { return p.layout()->alternating(); }

inline MultiPoly tau(const MultiPoly& p, std::size_t i) {
    if (i < 1 || i >= alternating_count(p)) throw PreconditionError("tau index out of range");
    return p.swapped(i - 1, i);
}

// delta_i = (x_i - x_{i-1})^{-1} (1 - tau_i).
inline MultiPoly divided_difference(const MultiPoly& p, std::size_t i) {
    if (i < 1 || i >= alternating_count(p)) throw PreconditionError("divided difference index out of range");
    return exact_divide_by_difference(p - tau(p, i), i, i - 1);
}

inline MultiPoly vandermonde(const LayoutPtr& layout) {
    const std::size_t m = layout->alternating();
    if (m < 2) throw PreconditionError("vandermonde needs n >= 1");
    MultiPoly d = MultiPoly::constant(layout, 1);
    for (std::size_t i = 0; i < m; ++i)
        for (std::size_t j = i + 1; j < m; ++j)
            d *= MultiPoly::variable(layout, i) - MultiPoly::variable(layout, j);
    return d;
}

inline MultiPoly vandermonde(int n) { return vandermonde(VarLayout::make(n)); }

inline bool is_symmetric(const MultiPoly& p) {
    for (std::size_t i = 1; i < alternating_count(p); ++i)
        if (!(tau(p, i) == p)) return false;
    return true;
}

inline bool is_skew_symmetric(const MultiPoly& p) {
    for (std::size_t i = 1; i < alternating_count(p); ++i)
        if (!(tau(p, i) == -p)) return false;
    return true;
}

inline MultiPoly alternating_sum(const MultiPoly& p) {
    const std::size_t m = alternating_count(p);
    MultiPoly::Accumulator acc;
    for (const auto& perm : permutations(m)) {
        for (const auto& [e, c] : p.terms()) {
            Exponents f = e;
            for (std::size_t i = 0; i < m; ++i) f[perm.image[i]] = e[i];
            if (perm.sign > 0) acc[f] += c;
            else acc[f] -= c;
        }
    }
    return MultiPoly::from_accumulator(p.layout(), std::move(acc));
}

// P / Delta by successive exact divisions by (x_i - x_j), i < j.
inline MultiPoly divide_by_vandermonde(const MultiPoly& p) {
    const std::size_t m = alternating_count(p);
    MultiPoly q = p;
    for (std::size_t i = 0; i < m; ++i)
        for (std::size_t j = i + 1; j < m; ++j) q = exact_divide_by_difference(q, i, j);
    return q;
}

// L = Delta^{-1} sum_sigma sgn(sigma) sigma, by explicit enumeration.
inline MultiPoly alternation_L(const MultiPoly& p) {
    if (alternating_count(p) > 8) throw PreconditionError("alternation enumerates at most 8 variables");
    return divide_by_vandermonde(alternating_sum(p));
}

// The same operator through (delta_1..delta_n)...(delta_1 delta_2) delta_1.
// With delta_i = (x_i - x_{i-1})^{-1}(1 - tau_i) the product carries the
// sign (-1)^{n(n+1)/2} relative to Delta^{-1} sum sgn(sigma) sigma.
inline MultiPoly alternation_L_factored(const MultiPoly& p) {
    const std::size_t n = alternating_count(p) - 1;
    MultiPoly q = p;
    for (std::size_t block = 1; block <= n; ++block)
        for (std::size_t i = block; i >= 1; --i) q = divided_difference(q, i);
    if ((n * (n + 1) / 2) % 2 == 1) q = -q;
    return q;
}

struct YoungIndex {
    std::vector<Rational> parts;  // non-increasing

    explicit YoungIndex(std::vector<Rational> p) : parts(std::move(p)) {
        for (std::size_t i = 1; i < parts.size(); ++i)
            if (parts[i] > parts[i - 1]) throw PreconditionError("Young index parts must be non-increasing");
    }

    static YoungIndex staircase(int n) {
        std::vector<Rational> p;
        for (int k = n; k >= 0; --k) p.emplace_back(k);
        return YoungIndex(std::move(p));
    }

    bool is_integral() const {
        return std::all_of(parts.begin(), parts.end(), [](const Rational& q) { return q.get_den() == 1; });
    }
};

// s_lambda in x_0..x_n as the alternant of x^{lambda + delta} over Delta.
inline MultiPoly schur(const YoungIndex& lambda, const LayoutPtr& layout) {
    const std::size_t m = layout->alternating();
    if (!lambda.is_integral()) throw PreconditionError("Schur polynomials need integer parts");
    if (lambda.parts.size() > m) throw PreconditionError("too many parts for the variable count");
    std::vector<int> exps(layout->size(), 0);
    for (std::size_t i = 0; i < m; ++i) {
        int part = i < lambda.parts.size() ? static_cast<int>(lambda.parts[i].get_num().get_si()) : 0;
        if (part < 0) throw PreconditionError("Schur polynomials need non-negative parts");
        exps[i] = part + static_cast<int>(m - 1 - i);
    }
    return alternation_L(MultiPoly::monomial(layout, exps, 1));
}

inline MultiPoly schur(const YoungIndex& lambda, int n) { return schur(lambda, VarLayout::make(n)); }

struct ExponentMultiset {
    std::vector<Rational> entries;
};

struct PuiseuxSignature {
    std::vector<Rational> sorted;  // descending
    int sign = 1;
    bool is_zero = false;
    friend bool operator==(const PuiseuxSignature&, const PuiseuxSignature&) = default;
};

// Sort exponents descending; the sign is the parity of that permutation.
inline PuiseuxSignature schur_puiseux_signature(const ExponentMultiset& m, std::size_t arity) {
    if (m.entries.size() != arity) throw PreconditionError("exponent multiset arity mismatch");
    PuiseuxSignature s;
    s.sorted = m.entries;
    int inversions = 0;
    for (std::size_t i = 0; i < arity; ++i)
        for (std::size_t j = i + 1; j < arity; ++j) {
            if (m.entries[i] < m.entries[j]) ++inversions;
            if (m.entries[i] == m.entries[j]) s.is_zero = true;
        }
    std::sort(s.sorted.begin(), s.sorted.end(), std::greater<>());
    s.sign = s.is_zero ? 0 : (inversions % 2 == 0 ? 1 : -1);
    return s;
}

inline PuiseuxSignature schur_puiseux_signature(const ExponentMultiset& m) {
    return schur_puiseux_signature(m, m.entries.size());
}

struct SkewReduction {
    MultiPoly quotient;
    bool exact = true;
};

inline SkewReduction skew_symmetric_reduce(const MultiPoly& p) {
    if (!is_skew_symmetric(p)) throw PreconditionError("polynomial is not skew-symmetric");
    const std::size_t m = alternating_count(p);
    MultiPoly q = p;
    for (std::size_t i = 0; i < m; ++i)
        for (std::size_t j = i + 1; j < m; ++j) {
            auto [quot, rem] = divide_by_difference(q, i, j);
            if (!rem.is_zero()) return {quot, false};
            q = std::move(quot);
        }
    return {q, true};
}

// A rational function num/den in the layout's variables.
struct RationalFunction {
    MultiPoly num;
    MultiPoly den;

    // Cross-multiplication test.
    friend bool operator==(const RationalFunction& a, const RationalFunction& b) {
        return a.num * b.den == b.num * a.den;
    }
};

// (1/(n+1)!) L(Delta R): the symmetrization average of R.
inline RationalFunction symmetrize_projection(const RationalFunction& r) {
    const std::size_t m = alternating_count(r.num);
    const auto perms = permutations(m);
    Rational fact = 1;
    for (std::size_t k = 2; k <= m; ++k) fact *= static_cast<long>(k);
    const MultiPoly delta = vandermonde(r.num.layout());
    if (is_symmetric(r.den)) {
        MultiPoly top = alternation_L(delta * r.num);
        return {top * (1 / fact), r.den};
    }
    // Common denominator prod_sigma sigma(den); sum_sigma sgn sigma(Delta num) prod_{tau != sigma} tau(den).
    std::vector<MultiPoly> images;
    for (const auto& perm : perms) images.push_back(r.den.permuted(perm.image));
    MultiPoly common = MultiPoly::constant(r.num.layout(), 1);
    for (const auto& im : images) common *= im;
    MultiPoly top(r.num.layout());
    const MultiPoly dn = delta * r.num;
    for (std::size_t s = 0; s < perms.size(); ++s) {
        MultiPoly term = dn.permuted(perms[s].image);
        for (std::size_t t = 0; t < perms.size(); ++t)
            if (t != s) term *= images[t];
        if (perms[s].sign > 0) top += term;
        else top -= term;
    }
    return {divide_by_vandermonde(top) * (1 / fact), common};
}

} // namespace hirz
