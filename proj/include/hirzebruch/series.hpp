#pragma once

// Truncated univariate Laurent series  sum_{k=v}^{N} c_k t^k + O(t^{N+1}).
//
// Coefficients are stored from the valuation v up to the order N.  A zero
// series keeps its order.  Every operation propagates the order it can
// guarantee; nothing is padded silently.

#include <algorithm>
#include <string>
#include <utility>
#include <type_traits>
#include <vector>

#include <json.hpp>

#include "errors.hpp"
#include "multipoly.hpp"
#include "numeric.hpp"

namespace hirz {

inline constexpr int kDefaultOrder = 32;

enum class DomainKind { rational, complex, polynomial };

struct Domain {
    DomainKind kind = DomainKind::rational;
    unsigned bits = 0;  // complex only
    friend bool operator==(const Domain&, const Domain&) = default;
};

template <class C>
struct coefficient_traits;

template <>
struct coefficient_traits<Rational> {
    static Domain domain(const Rational&, unsigned) { return {DomainKind::rational, 0}; }
    static Rational zero_like(const Rational&) { return 0; }
    static Rational from_rational(const Rational& q, const Rational&) { return q; }
    static bool is_zero(const Rational& x) { return sgn(x) == 0; }
    static bool is_one(const Rational& x) { return x == 1; }
    static Rational inverse(const Rational& x) { return 1 / x; }
};

template <>
struct coefficient_traits<Complex> {
    static Domain domain(const Complex&, unsigned bits) { return {DomainKind::complex, bits}; }
    static Complex zero_like(const Complex&) { return Complex(0); }
    static Complex from_rational(const Rational& q, const Complex&) { return Complex(q); }
    static bool is_zero(const Complex& x) { return x.is_zero(); }
    static bool is_one(const Complex& x) { return x.real() == 1 && x.imag() == 0; }
    static Complex inverse(const Complex& x) { return Complex(1) / x; }
};

template <>
struct coefficient_traits<MultiPoly> {
    static Domain domain(const MultiPoly&, unsigned) { return {DomainKind::polynomial, 0}; }
    static MultiPoly zero_like(const MultiPoly& like) { return MultiPoly(like.layout()); }
    static MultiPoly from_rational(const Rational& q, const MultiPoly& like) {
        return MultiPoly::constant(like.layout(), q);
    }
    static bool is_zero(const MultiPoly& x) { return x.is_zero(); }
    static bool is_one(const MultiPoly& x) { return x.is_constant() && x.constant_term() == 1; }
    static MultiPoly inverse(const MultiPoly& x) {
        if (!x.is_constant() || x.is_zero())
            throw PreconditionError("only nonzero constant polynomial coefficients are invertible");
        return MultiPoly::constant(x.layout(), 1 / x.constant_term());
    }
};

// Opens a precision scope for complex series; no-op otherwise.
class DomainScope {
public:
    explicit DomainScope(const Domain& d) {
        if (d.kind == DomainKind::complex) scope_.emplace(d.bits);
    }

private:
    std::optional<PrecisionScope> scope_;
};

template <class C>
class TruncatedSeries {
    using traits = coefficient_traits<C>;

public:
    // `like` fixes the coefficient domain (layout for polynomials); `bits`
    // is the working precision for complex coefficients.
    TruncatedSeries(int valuation, std::vector<C> coeffs, int order, C like, unsigned bits = 0)
        : valuation_(valuation), order_(order), like_(traits::zero_like(like)), bits_(bits) {
        domain_ = traits::domain(like_, bits_);
        if (coeffs.size() > static_cast<std::size_t>(std::max(0, order - valuation + 1)))
            coeffs.resize(static_cast<std::size_t>(std::max(0, order - valuation + 1)), like_);
        std::size_t lead = 0;
        while (lead < coeffs.size() && traits::is_zero(coeffs[lead])) ++lead;
        if (lead == coeffs.size()) {
            coeffs_.clear();
            valuation_ = order_ + 1;
            return;
        }
        valuation_ += static_cast<int>(lead);
        coeffs_.assign(std::make_move_iterator(coeffs.begin() + static_cast<std::ptrdiff_t>(lead)),
                       std::make_move_iterator(coeffs.end()));
        // Missing trailing coefficients are zeros up to the order.
        coeffs_.resize(static_cast<std::size_t>(order_ - valuation_ + 1), like_);
    }

    static TruncatedSeries zero(int order, const C& like, unsigned bits = 0) {
        return TruncatedSeries(order + 1, {}, order, like, bits);
    }

    static TruncatedSeries constant(const C& c, int order, const C& like, unsigned bits = 0) {
        return TruncatedSeries(0, {c}, order, like, bits);
    }

    static TruncatedSeries monomial(const C& c, int exponent, int order, const C& like, unsigned bits = 0) {
        return TruncatedSeries(exponent, {c}, order, like, bits);
    }

    // The series t with the given order.
    static TruncatedSeries variable(int order, const C& like, unsigned bits = 0) {
        return TruncatedSeries(1, {traits::from_rational(1, like)}, order, like, bits);
    }

    int valuation() const { return valuation_; }
    int order() const { return order_; }
    bool is_zero() const { return coeffs_.empty(); }
    const std::vector<C>& coefficients() const { return coeffs_; }
    const Domain& domain() const { return domain_; }
    const C& like() const { return like_; }
    unsigned precision_bits() const { return bits_; }

    C operator[](int k) const {
        if (k > order_) throw PreconditionError("coefficient beyond truncation order");
        if (k < valuation_) return like_;
        return coeffs_[static_cast<std::size_t>(k - valuation_)];
    }

    C leading() const {
        if (is_zero()) throw PreconditionError("zero series has no leading coefficient");
        return coeffs_.front();
    }

    TruncatedSeries with_coefficients(int valuation, std::vector<C> coeffs, int order) const {
        return TruncatedSeries(valuation, std::move(coeffs), order, like_, bits_);
    }

    TruncatedSeries truncated(int order) const {
        if (order > order_) throw PreconditionError("cannot raise truncation order");
        std::vector<C> c;
        for (int k = valuation_; k <= order; ++k) c.push_back((*this)[k]);
        return with_coefficients(valuation_, std::move(c), order);
    }

    void check_domain(const TruncatedSeries& o) const {
        if (!(domain_ == o.domain_)) throw DomainError("series coefficient domains differ");
        if constexpr (std::is_same_v<C, MultiPoly>) {
            if (!(*like_.layout() == *o.like_.layout())) throw DomainError("series polynomial layouts differ");
        }
    }

    friend TruncatedSeries operator+(const TruncatedSeries& a, const TruncatedSeries& b) {
        a.check_domain(b);
        DomainScope scope(a.domain_);
        int order = std::min(a.order_, b.order_);
        int start = std::min(a.valuation_, b.valuation_);
        std::vector<C> c;
        for (int k = start; k <= order; ++k) {
            C v = a.coef_or_zero(k);
            if (b.has(k)) v = v + b.coef_or_zero(k);
            c.push_back(std::move(v));
        }
        return a.with_coefficients(start, std::move(c), order);
    }

    friend TruncatedSeries operator-(const TruncatedSeries& a) {
        DomainScope scope(a.domain_);
        std::vector<C> c;
        for (const auto& x : a.coeffs_) c.push_back(-x);
        return a.with_coefficients(a.valuation_, std::move(c), a.order_);
    }

    friend TruncatedSeries operator-(const TruncatedSeries& a, const TruncatedSeries& b) { return a + (-b); }

    friend TruncatedSeries operator*(const TruncatedSeries& a, const TruncatedSeries& b) {
        a.check_domain(b);
        DomainScope scope(a.domain_);
        if (a.is_zero() || b.is_zero()) {
            int order;
            if (a.is_zero() && b.is_zero()) order = a.order_ + b.order_ + 1;
            else if (a.is_zero()) order = a.order_ + b.valuation_;
            else order = b.order_ + a.valuation_;
            return zero(order, a.like_, a.bits_);
        }
        int order = std::min(a.order_ + b.valuation_, b.order_ + a.valuation_);
        int val = a.valuation_ + b.valuation_;
        std::vector<C> c;
        for (int k = val; k <= order; ++k) {
            C acc = a.like_;
            int lo = std::max(a.valuation_, k - b.order_);
            int hi = std::min(a.order_, k - b.valuation_);
            for (int i = lo; i <= hi; ++i) acc = acc + a[i] * b[k - i];
            c.push_back(std::move(acc));
        }
        return a.with_coefficients(val, std::move(c), order);
    }

    // Multiply every coefficient by a scalar of the coefficient domain.
    TruncatedSeries scaled(const C& s) const {
        DomainScope scope(domain_);
        std::vector<C> c;
        for (const auto& x : coeffs_) c.push_back(x * s);
        return with_coefficients(valuation_, std::move(c), order_);
    }

    TruncatedSeries scaled(const Rational& s) const
        requires(!std::is_same_v<C, Rational>)
    {
        DomainScope scope(domain_);
        return scaled(traits::from_rational(s, like_));
    }

    // Multiply by t^k.
    TruncatedSeries shifted(int k) const {
        return with_coefficients(valuation_ + k, coeffs_, order_ + k);
    }

    TruncatedSeries& operator+=(const TruncatedSeries& o) { return *this = *this + o; }
    TruncatedSeries& operator*=(const TruncatedSeries& o) { return *this = *this * o; }

    // Equal as truncated series: same order and same coefficients.
    friend bool operator==(const TruncatedSeries& a, const TruncatedSeries& b) {
        if (!(a.domain_ == b.domain_) || a.order_ != b.order_ || a.valuation_ != b.valuation_) return false;
        return a.coeffs_ == b.coeffs_;
    }

private:
    bool has(int k) const { return !is_zero() && k >= valuation_ && k <= order_; }
    C coef_or_zero(int k) const { return has(k) ? coeffs_[static_cast<std::size_t>(k - valuation_)] : like_; }

    int valuation_;
    int order_;
    std::vector<C> coeffs_;
    C like_;
    unsigned bits_;
    Domain domain_;
};

using RationalSeries = TruncatedSeries<Rational>;
using ComplexSeries = TruncatedSeries<Complex>;
using PolySeries = TruncatedSeries<MultiPoly>;

inline RationalSeries rational_series(int valuation, std::vector<Rational> coeffs, int order) {
    return RationalSeries(valuation, std::move(coeffs), order, Rational(0));
}

inline ComplexSeries complex_series(int valuation, std::vector<Complex> coeffs, int order, unsigned bits) {
    PrecisionScope scope(bits);
    return ComplexSeries(valuation, std::move(coeffs), order, Complex(0), bits);
}

template <class C>
TruncatedSeries<C> add(const TruncatedSeries<C>& a, const TruncatedSeries<C>& b) { return a + b; }

template <class C>
TruncatedSeries<C> mul(const TruncatedSeries<C>& a, const TruncatedSeries<C>& b) { return a * b; }

template <class C>
TruncatedSeries<C> invert(const TruncatedSeries<C>& a) {
    using traits = coefficient_traits<C>;
    if (a.is_zero()) throw PreconditionError("cannot invert the zero series");
    DomainScope scope(a.domain());
    const auto& c = a.coefficients();
    const int m = static_cast<int>(c.size());
    const C d0 = traits::inverse(c[0]);
    std::vector<C> d;
    d.reserve(static_cast<std::size_t>(m));
    d.push_back(d0);
    for (int j = 1; j < m; ++j) {
        C acc = a.like();
        for (int i = 1; i <= j; ++i) acc = acc + c[static_cast<std::size_t>(i)] * d[static_cast<std::size_t>(j - i)];
        d.push_back(-(d0 * acc));
    }
    return a.with_coefficients(-a.valuation(), std::move(d), a.order() - 2 * a.valuation());
}

template <class C>
TruncatedSeries<C> operator/(const TruncatedSeries<C>& a, const TruncatedSeries<C>& b) {
    return a * invert(b);
}

// Integer power, negative exponents via invert.
template <class C>
TruncatedSeries<C> pow(const TruncatedSeries<C>& a, int k) {
    if (k < 0) return pow(invert(a), -k);
    DomainScope scope(a.domain());
    auto result = TruncatedSeries<C>::constant(coefficient_traits<C>::from_rational(1, a.like()),
                                               std::max(a.order(), a.order() + (k - 1) * a.valuation()),
                                               a.like(), a.precision_bits());
    auto base = a;
    bool first = true;
    while (k > 0) {
        if (k & 1) {
            result = first ? base : result * base;
            first = false;
        }
        k >>= 1;
        if (k) base = base * base;
    }
    return result;
}

// outer(inner(t)); inner must have a zero constant term.
template <class C>
TruncatedSeries<C> compose(const TruncatedSeries<C>& outer, const TruncatedSeries<C>& inner) {
    using traits = coefficient_traits<C>;
    outer.check_domain(inner);
    if (!inner.is_zero() && inner.valuation() < 1) throw PreconditionError("inner series must have valuation >= 1");
    if (!outer.is_zero() && outer.valuation() < 0) throw PreconditionError("outer series must have valuation >= 0");
    DomainScope scope(outer.domain());
    const int vi = inner.is_zero() ? inner.order() + 1 : inner.valuation();
    int m = 0;
    for (int k = std::max(1, outer.valuation()); k <= outer.order(); ++k)
        if (!traits::is_zero(outer[k])) {
            m = k;
            break;
        }
    int order = vi * (outer.order() + 1) - 1;
    if (m > 0) order = std::min(order, inner.order() + vi * (m - 1));
    std::vector<C> acc(static_cast<std::size_t>(order + 1), outer.like());
    if (outer.valuation() <= 0 && !outer.is_zero()) acc[0] = outer[0];
    if (!inner.is_zero()) {
        auto power = TruncatedSeries<C>::constant(traits::from_rational(1, outer.like()), order, outer.like(),
                                                  outer.precision_bits());
        for (int k = 1; k <= outer.order() && k * vi <= order; ++k) {
            power = power * inner;
            if (power.order() > order) power = power.truncated(order);
            const C ok = outer[k];
            if (traits::is_zero(ok)) continue;
            for (int e = power.valuation(); e <= order && !power.is_zero(); ++e)
                acc[static_cast<std::size_t>(e)] = acc[static_cast<std::size_t>(e)] + ok * power[e];
        }
    }
    return outer.with_coefficients(0, std::move(acc), order);
}

enum class ExpLogMode { exp, log };

template <class C>
TruncatedSeries<C> exp(const TruncatedSeries<C>& a) {
    using traits = coefficient_traits<C>;
    if (!a.is_zero() && a.valuation() < 1) throw PreconditionError("exp needs a zero constant term");
    DomainScope scope(a.domain());
    const int n = a.order();
    std::vector<C> e;
    e.push_back(traits::from_rational(1, a.like()));
    for (int k = 1; k <= n; ++k) {
        C acc = a.like();
        for (int j = std::max(1, a.valuation()); j <= k; ++j)
            acc = acc + traits::from_rational(j, a.like()) * a[j] * e[static_cast<std::size_t>(k - j)];
        e.push_back(acc * traits::from_rational(ratio(1, k), a.like()));
    }
    return a.with_coefficients(0, std::move(e), n);
}

template <class C>
TruncatedSeries<C> log(const TruncatedSeries<C>& a) {
    using traits = coefficient_traits<C>;
    if (a.is_zero() || a.valuation() != 0 || !traits::is_one(a[0]))
        throw PreconditionError("log needs constant term 1");
    DomainScope scope(a.domain());
    const int n = a.order();
    std::vector<C> l;
    l.push_back(a.like());
    for (int k = 1; k <= n; ++k) {
        C acc = traits::from_rational(k, a.like()) * a[k];
        for (int j = 1; j < k; ++j)
            acc = acc - traits::from_rational(j, a.like()) * l[static_cast<std::size_t>(j)] * a[k - j];
        l.push_back(acc * traits::from_rational(ratio(1, k), a.like()));
    }
    return a.with_coefficients(0, std::move(l), n);
}

template <class C>
TruncatedSeries<C> exp_log(const TruncatedSeries<C>& a, ExpLogMode mode) {
    return mode == ExpLogMode::exp ? exp(a) : log(a);
}

// The d-th root normalized by leading coefficient 1.
template <class C>
TruncatedSeries<C> nth_root(const TruncatedSeries<C>& g, int d) {
    using traits = coefficient_traits<C>;
    if (d < 1) throw PreconditionError("root degree must be positive");
    if (g.is_zero()) throw PreconditionError("root of the zero series");
    if (g.valuation() % d != 0) throw PreconditionError("valuation not divisible by root degree");
    if (!traits::is_one(g.leading())) throw PreconditionError("leading coefficient must be 1");
    DomainScope scope(g.domain());
    const auto& a = g.coefficients();
    const int m = static_cast<int>(a.size());
    const Rational alpha(1, d);
    std::vector<C> p;
    p.push_back(traits::from_rational(1, g.like()));
    for (int k = 1; k < m; ++k) {
        C acc = g.like();
        for (int j = 1; j <= k; ++j) {
            Rational w = (alpha + 1) * j - k;
            if (sgn(w) == 0) continue;
            acc = acc + traits::from_rational(w, g.like()) * a[static_cast<std::size_t>(j)] *
                            p[static_cast<std::size_t>(k - j)];
        }
        p.push_back(acc * traits::from_rational(ratio(1, k), g.like()));
    }
    const int v = g.valuation() / d;
    return g.with_coefficients(v, std::move(p), v + (g.order() - g.valuation()));
}

template <class C>
TruncatedSeries<C> derivative(const TruncatedSeries<C>& a) {
    using traits = coefficient_traits<C>;
    DomainScope scope(a.domain());
    if (a.is_zero()) return TruncatedSeries<C>::zero(a.order() - 1, a.like(), a.precision_bits());
    std::vector<C> c;
    for (int k = a.valuation(); k <= a.order(); ++k)
        c.push_back(traits::from_rational(k, a.like()) * a[k]);
    return a.with_coefficients(a.valuation() - 1, std::move(c), a.order() - 1);
}

// Antiderivative with zero constant term.
template <class C>
TruncatedSeries<C> integrate(const TruncatedSeries<C>& a) {
    using traits = coefficient_traits<C>;
    DomainScope scope(a.domain());
    if (a.is_zero()) return TruncatedSeries<C>::zero(a.order() + 1, a.like(), a.precision_bits());
    if (a.valuation() <= -1 && !traits::is_zero(a[-1])) throw PreconditionError("cannot integrate t^-1");
    std::vector<C> c;
    for (int k = a.valuation(); k <= a.order(); ++k)
        c.push_back(k == -1 ? a.like() : a[k] * traits::from_rational(ratio(1, k + 1), a.like()));
    return a.with_coefficients(a.valuation() + 1, std::move(c), a.order() + 1);
}

inline Complex evaluate(const ComplexSeries& a, const Complex& t0) {
    PrecisionScope scope(a.precision_bits());
    if (a.is_zero()) return Complex(0);
    if (a.valuation() < 0 && t0.is_zero()) throw PoleError("evaluating a Laurent series at its pole");
    Complex acc(0);
    const auto& c = a.coefficients();
    for (auto it = c.rbegin(); it != c.rend(); ++it) acc = acc * t0 + *it;
    if (a.valuation() != 0) acc *= pow(t0, a.valuation());
    return acc;
}

inline ComplexSeries to_complex(const RationalSeries& a, unsigned bits) {
    PrecisionScope scope(bits);
    std::vector<Complex> c;
    for (const auto& q : a.coefficients()) c.emplace_back(q);
    return ComplexSeries(a.is_zero() ? a.order() + 1 : a.valuation(), std::move(c), a.order(), Complex(0), bits);
}

// Substitute numeric values for all layout variables of a polynomial series.
inline ComplexSeries to_complex(const PolySeries& a, std::span<const Complex> values, unsigned bits) {
    PrecisionScope scope(bits);
    std::vector<Complex> c;
    for (const auto& p : a.coefficients())
        c.push_back(p.evaluate<Complex>(values, [](const Rational& q) { return Complex(q); }));
    return ComplexSeries(a.is_zero() ? a.order() + 1 : a.valuation(), std::move(c), a.order(), Complex(0), bits);
}

inline nlohmann::json coefficient_to_json(const Rational& q) { return q.get_str(); }
inline nlohmann::json coefficient_to_json(const Complex& z) {
    return {{"re", to_string(z.real())}, {"im", to_string(z.imag())}};
}
inline nlohmann::json coefficient_to_json(const MultiPoly& p) { return p.to_string(); }

inline std::string domain_name(const Domain& d) {
    switch (d.kind) {
    case DomainKind::rational: return "rational";
    case DomainKind::complex: return "complex";
    case DomainKind::polynomial: return "polynomial";
    }
    return "?";
}

template <class C>
nlohmann::json series_to_json(const TruncatedSeries<C>& a) {
    nlohmann::json j;
    j["valuation"] = a.valuation();
    j["order"] = a.order();
    j["domain"] = domain_name(a.domain());
    if (a.domain().kind == DomainKind::complex) j["precision_bits"] = a.precision_bits();
    auto coeffs = nlohmann::json::array();
    for (const auto& c : a.coefficients()) coeffs.push_back(coefficient_to_json(c));
    j["coeffs"] = std::move(coeffs);
    return j;
}

inline RationalSeries rational_series_from_json(const nlohmann::json& j) {
    std::vector<Rational> c;
    for (const auto& x : j.at("coeffs")) c.push_back(parse_rational(x.get<std::string>()));
    return rational_series(j.at("valuation").get<int>(), std::move(c), j.at("order").get<int>());
}

inline ComplexSeries complex_series_from_json(const nlohmann::json& j) {
    unsigned bits = j.at("precision_bits").get<unsigned>();
    PrecisionScope scope(bits);
    std::vector<Complex> c;
    for (const auto& x : j.at("coeffs"))
        c.push_back(parse_complex(x.at("re").get<std::string>(), x.at("im").get<std::string>()));
    return ComplexSeries(j.at("valuation").get<int>(), std::move(c), j.at("order").get<int>(), Complex(0), bits);
}

} // namespace hirz
