#pragma once

// Sparse multivariate polynomials with rational coefficients.
//
// A layout lists the alternating variables x_0..x_n first and then the
// formal parameters.  Permutations act on the alternating block only.

#include <algorithm>
#include <array>
#include <cstdint>
#include <map>
#include <memory>
#include <span>
#include <sstream>
#include <string>
#include <unordered_map>
#include <utility>
#include <vector>

#include <json.hpp>

#include "errors.hpp"
#include "numeric.hpp"

namespace hirz {

inline constexpr std::size_t kMaxVars = 12;
using Exponents = std::array<std::int16_t, kMaxVars>;

struct ExponentsHash {
    std::size_t operator()(const Exponents& e) const noexcept {
        std::uint64_t h = 1469598103934665603ull;
        for (auto v : e) {
            h ^= static_cast<std::uint16_t>(v);
            h *= 1099511628211ull;
        }
        return static_cast<std::size_t>(h);
    }
};

class VarLayout {
public:
    VarLayout(std::vector<std::string> alternating, std::vector<std::string> parameters)
        : alternating_(alternating.size()) {
        names_ = std::move(alternating);
        names_.insert(names_.end(), parameters.begin(), parameters.end());
        if (names_.size() > kMaxVars) throw PreconditionError("too many polynomial variables");
    }

    // x0..xn followed by the given parameters.
    static std::shared_ptr<const VarLayout> make(int n, std::vector<std::string> parameters = {},
                                                 const std::string& stem = "x") {
        std::vector<std::string> alt;
        for (int i = 0; i <= n; ++i) alt.push_back(stem + std::to_string(i));
        return std::make_shared<const VarLayout>(std::move(alt), std::move(parameters));
    }

    std::size_t size() const { return names_.size(); }
    std::size_t alternating() const { return alternating_; }
    const std::string& name(std::size_t i) const { return names_.at(i); }
    const std::vector<std::string>& names() const { return names_; }

    std::size_t index_of(std::string_view name) const {
        for (std::size_t i = 0; i < names_.size(); ++i)
            if (names_[i] == name) return i;
        throw PreconditionError("unknown variable: " + std::string(name));
    }

    friend bool operator==(const VarLayout& a, const VarLayout& b) {
        return a.alternating_ == b.alternating_ && a.names_ == b.names_;
    }

private:
    std::vector<std::string> names_;
    std::size_t alternating_;
};

using LayoutPtr = std::shared_ptr<const VarLayout>;

class MultiPoly {
public:
    using Terms = std::map<Exponents, Rational>;
    using Accumulator = std::unordered_map<Exponents, Rational, ExponentsHash>;

    MultiPoly() = default;
    explicit MultiPoly(LayoutPtr layout) : layout_(std::move(layout)) {}

    static MultiPoly constant(LayoutPtr layout, const Rational& c) {
        MultiPoly p(std::move(layout));
        if (sgn(c) != 0) p.terms_.emplace(Exponents{}, c);
        return p;
    }

    static MultiPoly variable(LayoutPtr layout, std::size_t i) {
        if (i >= layout->size()) throw PreconditionError("variable index out of range");
        Exponents e{};
        e[i] = 1;
        MultiPoly p(std::move(layout));
        p.terms_.emplace(e, Rational(1));
        return p;
    }

    static MultiPoly variable(LayoutPtr layout, std::string_view name) {
        auto i = layout->index_of(name);
        return variable(std::move(layout), i);
    }

    static MultiPoly monomial(LayoutPtr layout, std::span<const int> exps, const Rational& c) {
        if (exps.size() != layout->size()) throw PreconditionError("exponent arity mismatch");
        Exponents e{};
        for (std::size_t i = 0; i < exps.size(); ++i) {
            if (exps[i] < 0) throw PreconditionError("negative exponent");
            e[i] = static_cast<std::int16_t>(exps[i]);
        }
        MultiPoly p(std::move(layout));
        if (sgn(c) != 0) p.terms_.emplace(e, c);
        return p;
    }

    static MultiPoly from_accumulator(LayoutPtr layout, Accumulator&& acc) {
        MultiPoly p(std::move(layout));
        for (auto& [e, c] : acc)
            if (sgn(c) != 0) p.terms_.emplace(e, std::move(c));
        return p;
    }

    const LayoutPtr& layout() const { return layout_; }
    const Terms& terms() const { return terms_; }
    std::size_t size() const { return terms_.size(); }
    bool is_zero() const { return terms_.empty(); }

    bool is_constant() const {
        return terms_.empty() || (terms_.size() == 1 && terms_.begin()->first == Exponents{});
    }

    Rational constant_term() const {
        auto it = terms_.find(Exponents{});
        return it == terms_.end() ? Rational(0) : it->second;
    }

    int degree_in(std::size_t var) const {
        int d = -1;
        for (const auto& [e, c] : terms_) d = std::max<int>(d, e[var]);
        return d;
    }

    int total_degree() const {
        int d = -1;
        for (const auto& [e, c] : terms_) {
            int s = 0;
            for (auto v : e) s += v;
            d = std::max(d, s);
        }
        return d;
    }

    bool depends_on_alternating() const {
        for (const auto& [e, c] : terms_)
            for (std::size_t i = 0; i < layout_->alternating(); ++i)
                if (e[i] != 0) return true;
        return false;
    }

    MultiPoly& operator+=(const MultiPoly& o) {
        check_layout(o);
        for (const auto& [e, c] : o.terms_) add_term(e, c);
        return *this;
    }

    MultiPoly& operator-=(const MultiPoly& o) {
        check_layout(o);
        for (const auto& [e, c] : o.terms_) add_term(e, -c);
        return *this;
    }

    MultiPoly& operator*=(const Rational& s) {
        if (sgn(s) == 0) {
            terms_.clear();
            return *this;
        }
        for (auto& [e, c] : terms_) c *= s;
        return *this;
    }

    friend MultiPoly operator+(MultiPoly a, const MultiPoly& b) { return a += b; }
    friend MultiPoly operator-(MultiPoly a, const MultiPoly& b) { return a -= b; }
    friend MultiPoly operator*(MultiPoly a, const Rational& s) { return a *= s; }
    friend MultiPoly operator*(const Rational& s, MultiPoly a) { return a *= s; }
    friend MultiPoly operator-(MultiPoly a) {
        for (auto& [e, c] : a.terms_) c = -c;
        return a;
    }

    friend MultiPoly operator*(const MultiPoly& a, const MultiPoly& b) {
        a.check_layout(b);
        Accumulator acc;
        acc.reserve(a.size() * b.size());
        for (const auto& [ea, ca] : a.terms_)
            for (const auto& [eb, cb] : b.terms_) {
                Exponents e;
                for (std::size_t i = 0; i < kMaxVars; ++i) e[i] = static_cast<std::int16_t>(ea[i] + eb[i]);
                acc[e] += ca * cb;
            }
        return from_accumulator(a.layout_, std::move(acc));
    }

    MultiPoly& operator*=(const MultiPoly& o) { return *this = *this * o; }

    friend bool operator==(const MultiPoly& a, const MultiPoly& b) {
        if (a.layout_ && b.layout_ && !(*a.layout_ == *b.layout_)) return false;
        return a.terms_ == b.terms_;
    }

    MultiPoly pow(unsigned k) const {
        MultiPoly result = constant(layout_, 1);
        MultiPoly base = *this;
        while (k) {
            if (k & 1) result *= base;
            k >>= 1;
            if (k) base *= base;
        }
        return result;
    }

    // Substitute x_i -> x_{perm[i]} on the alternating block.
    MultiPoly permuted(std::span<const std::size_t> perm) const {
        const std::size_t m = layout_->alternating();
        if (perm.size() != m) throw PreconditionError("permutation arity mismatch");
        MultiPoly p(layout_);
        for (const auto& [e, c] : terms_) {
            Exponents f = e;
            for (std::size_t i = 0; i < m; ++i) f[perm[i]] = e[i];
            p.terms_.emplace(f, c);
        }
        return p;
    }

    MultiPoly swapped(std::size_t i, std::size_t j) const {
        MultiPoly p(layout_);
        for (const auto& [e, c] : terms_) {
            Exponents f = e;
            std::swap(f[i], f[j]);
            p.terms_.emplace(f, c);
        }
        return p;
    }

    // Move the polynomial into another layout by variable name.  Every
    // variable that actually occurs must exist in the target.
    MultiPoly relabeled(const LayoutPtr& target) const {
        std::vector<std::size_t> map(layout_->size());
        std::vector<bool> used(layout_->size(), false);
        for (const auto& [e, c] : terms_)
            for (std::size_t i = 0; i < layout_->size(); ++i)
                if (e[i] != 0) used[i] = true;
        for (std::size_t i = 0; i < layout_->size(); ++i)
            if (used[i]) map[i] = target->index_of(layout_->name(i));
        MultiPoly p(target);
        for (const auto& [e, c] : terms_) {
            Exponents f{};
            for (std::size_t i = 0; i < layout_->size(); ++i)
                if (used[i]) f[map[i]] = e[i];
            p.terms_.emplace(f, c);
        }
        return p;
    }

    // Horner-free evaluation; T needs +, * and construction from Rational.
    template <class T, class FromRational>
    T evaluate(std::span<const T> values, FromRational from_rational) const {
        if (values.size() != layout_->size()) throw PreconditionError("evaluation arity mismatch");
        T acc = from_rational(Rational(0));
        for (const auto& [e, c] : terms_) {
            T term = from_rational(c);
            for (std::size_t i = 0; i < values.size(); ++i)
                for (int k = 0; k < e[i]; ++k) term = term * values[i];
            acc = acc + term;
        }
        return acc;
    }

    Rational evaluate(std::span<const Rational> values) const {
        return evaluate<Rational>(values, [](const Rational& q) { return q; });
    }

    std::string to_string() const {
        if (terms_.empty()) return "0";
        std::ostringstream os;
        bool first = true;
        // Highest total degree first, then reverse lexicographic exponent order.
        std::vector<std::pair<Exponents, Rational>> sorted(terms_.begin(), terms_.end());
        std::stable_sort(sorted.begin(), sorted.end(), [](const auto& a, const auto& b) {
            int da = 0, db = 0;
            for (auto v : a.first) da += v;
            for (auto v : b.first) db += v;
            if (da != db) return da > db;
            return a.first > b.first;
        });
        for (const auto& [e, c] : sorted) {
            Rational mag = abs(c);
            if (first) {
                if (sgn(c) < 0) os << "-";
            } else {
                os << (sgn(c) < 0 ? " - " : " + ");
            }
            first = false;
            bool unit = mag == 1;
            bool has_var = false;
            if (!unit) os << mag.get_str();
            for (std::size_t i = 0; i < layout_->size(); ++i) {
                if (e[i] == 0) continue;
                if (!unit || has_var) os << "*";
                os << layout_->name(i);
                if (e[i] > 1) os << "^" << e[i];
                has_var = true;
            }
            if (unit && !has_var) os << "1";
        }
        return os.str();
    }

private:
    void add_term(const Exponents& e, const Rational& c) {
        auto [it, inserted] = terms_.try_emplace(e, c);
        if (!inserted) {
            it->second += c;
            if (sgn(it->second) == 0) terms_.erase(it);
        } else if (sgn(c) == 0) {
            terms_.erase(it);
        }
    }

    void check_layout(const MultiPoly& o) const {
        if (layout_ != o.layout_ && !(*layout_ == *o.layout_))
            throw DomainError("polynomials live in different variable layouts");
    }

    LayoutPtr layout_;
    Terms terms_;
};

inline MultiPoly pow(const MultiPoly& p, unsigned k) { return p.pow(k); }

// Quotient and remainder of P by (x_i - x_j); the remainder is free of x_i.
inline std::pair<MultiPoly, MultiPoly> divide_by_difference(const MultiPoly& p, std::size_t i, std::size_t j) {
    if (i == j) throw PreconditionError("division by zero difference");
    int d = p.degree_in(i);
    MultiPoly quotient(p.layout());
    if (d <= 0) return {quotient, p};
    // buckets[k]: coefficient of x_i^k, stored with e_i = 0.
    std::vector<MultiPoly::Accumulator> buckets(static_cast<std::size_t>(d) + 1);
    for (const auto& [e, c] : p.terms()) {
        Exponents f = e;
        f[i] = 0;
        buckets[static_cast<std::size_t>(e[i])][f] += c;
    }
    // Q_{d-1} = P_d, Q_{k-1} = P_k + x_j Q_k, remainder P_0 + x_j Q_0.
    MultiPoly::Accumulator carry;
    MultiPoly::Accumulator out;
    for (int k = d; k >= 1; --k) {
        MultiPoly::Accumulator qk = std::move(buckets[static_cast<std::size_t>(k)]);
        for (auto& [e, c] : carry) {
            Exponents f = e;
            ++f[j];
            qk[f] += c;
        }
        for (const auto& [e, c] : qk) {
            if (sgn(c) == 0) continue;
            Exponents f = e;
            f[i] = static_cast<std::int16_t>(k - 1);
            out[f] += c;
        }
        carry = std::move(qk);
    }
    MultiPoly::Accumulator rem = std::move(buckets[0]);
    for (auto& [e, c] : carry) {
        Exponents f = e;
        ++f[j];
        rem[f] += c;
    }
    return {MultiPoly::from_accumulator(p.layout(), std::move(out)),
            MultiPoly::from_accumulator(p.layout(), std::move(rem))};
}

inline MultiPoly exact_divide_by_difference(const MultiPoly& p, std::size_t i, std::size_t j) {
    auto [q, r] = divide_by_difference(p, i, j);
    if (!r.is_zero())
        throw InexactDivision("division by (" + p.layout()->name(i) + " - " + p.layout()->name(j) +
                              ") left remainder " + r.to_string());
    return q;
}

inline void to_json(nlohmann::json& j, const MultiPoly& p) {
    j = nlohmann::json::object();
    j["vars"] = p.layout()->names();
    j["alternating"] = p.layout()->alternating();
    auto terms = nlohmann::json::array();
    for (const auto& [e, c] : p.terms()) {
        std::vector<int> exps(e.begin(), e.begin() + static_cast<std::ptrdiff_t>(p.layout()->size()));
        terms.push_back({{"exps", exps}, {"coeff", c.get_str()}});
    }
    j["terms"] = std::move(terms);
}

inline MultiPoly multipoly_from_json(const nlohmann::json& j) {
    auto names = j.at("vars").get<std::vector<std::string>>();
    auto alt = j.value("alternating", std::size_t{0});
    if (alt > names.size()) throw PreconditionError("bad alternating count");
    std::vector<std::string> a(names.begin(), names.begin() + static_cast<std::ptrdiff_t>(alt));
    std::vector<std::string> params(names.begin() + static_cast<std::ptrdiff_t>(alt), names.end());
    auto layout = std::make_shared<const VarLayout>(std::move(a), std::move(params));
    MultiPoly p(layout);
    for (const auto& t : j.at("terms")) {
        auto exps = t.at("exps").get<std::vector<int>>();
        p += MultiPoly::monomial(layout, exps, parse_rational(t.at("coeff").get<std::string>()));
    }
    return p;
}

} // namespace hirz
