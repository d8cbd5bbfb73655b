#pragma once

// Genus functions f(t) = t + O(t^2): Todd, Baker-Akhiezer/Krichever,
// level-d elliptic, and the degenerate families.

#include <cmath>
#include <functional>
#include <numeric>
#include <optional>
#include <string>
#include <variant>

#include <json.hpp>

#include "elliptic.hpp"
#include "errors.hpp"
#include "numeric.hpp"
#include "series.hpp"

namespace hirz {

struct ToddSpec {
    Scalar alpha, beta;
};
struct KricheverSpec {
    Lattice lattice;
    Complex s, alpha;
};
struct LevelDSpec {
    Lattice lattice;
    int d;
    int k, l;
};
struct SingKricheverSpec {
    Scalar lambda, q, mu;
};
struct SingLimitSpec {
    Scalar lambda, q;
};

using GenusSpec = std::variant<ToddSpec, KricheverSpec, LevelDSpec, SingKricheverSpec, SingLimitSpec>;

inline const char* genus_kind_name(const GenusSpec& spec) {
    static const char* names[] = {"todd", "krichever", "level_d", "sing_krichever", "sing_limit"};
    return names[spec.index()];
}

inline bool is_lattice_genus(const GenusSpec& spec) {
    return std::holds_alternative<KricheverSpec>(spec) || std::holds_alternative<LevelDSpec>(spec);
}

// ---------------------------------------------------------------------------
// Baker-Akhiezer function  Phi_s(t) = sigma(s - t) / (sigma(s) sigma(t)) e^{zeta(s) t}

class BakerAkhiezer {
public:
    BakerAkhiezer(Lattice lattice, const Complex& s) : lattice_(std::move(lattice)) {
        PrecisionScope scope(lattice_.precision_bits());
        s_ = Complex(Real(s.real()), Real(s.imag()));
        if (lattice_.distance_to_lattice(s_) < 1e-8 * abs_double(lattice_.omega1()))
            throw PreconditionError("Baker-Akhiezer parameter s lies on the lattice");
        sigma_s_ = lattice_.sigma(s_);
        zeta_s_ = lattice_.zeta(s_);
        wp_s_ = lattice_.wp(s_);
        wp_prime_s_ = lattice_.wp_prime(s_);
    }

    const Lattice& lattice() const { return lattice_; }
    const Complex& s() const { return s_; }
    const Complex& zeta_s() const { return zeta_s_; }
    const Complex& wp_s() const { return wp_s_; }
    const Complex& wp_prime_s() const { return wp_prime_s_; }

    Complex operator()(const Complex& t) const {
        PrecisionScope scope(lattice_.precision_bits());
        lattice_.check_pole(t);
        return lattice_.sigma(s_ - t) / (sigma_s_ * lattice_.sigma(t)) * exp(zeta_s_ * t);
    }

    // Phi' = Phi (zeta(s) - zeta(s - t) - zeta(t)).
    Complex derivative(const Complex& t) const {
        PrecisionScope scope(lattice_.precision_bits());
        return (*this)(t) * (zeta_s_ - lattice_.zeta(s_ - t) - lattice_.zeta(t));
    }

    // 1/Phi_s(t) = sigma(t) exp(II(wp(s - x))) with II the double integral from 0.
    ComplexSeries reciprocal_series(int order) const {
        const unsigned bits = lattice_.precision_bits();
        PrecisionScope scope(bits);
        auto ws = wp_series(std::max(4, order), lattice_);
        auto sigma = ws.sigma.truncated(order);
        auto w = integrate(integrate(wp_taylor(lattice_, -s_, std::max(0, order - 2))));
        return sigma * exp(w);
    }

    ComplexSeries laurent_series(int order) const { return invert(reciprocal_series(order + 2)); }

private:
    Lattice lattice_;
    Complex s_, sigma_s_, zeta_s_, wp_s_, wp_prime_s_;
};

// ---------------------------------------------------------------------------

struct KricheverData {
    Lattice lattice;
    Complex s, alpha;
};

struct GenusFunction {
    using Evaluator = std::function<Complex(const Complex&)>;

    GenusSpec spec;
    unsigned precision_bits = kDefaultPrecisionBits;
    ComplexSeries series = ComplexSeries::zero(0, Complex(0), 0);
    std::optional<RationalSeries> exact_series;
    Evaluator local;   // closed form, or principal branch inside reliability_radius
    Evaluator global;  // single-valued continuation, empty if local is already global
    std::optional<double> reliability_radius;
    double sampling_radius = 0.5;
    std::optional<KricheverData> krichever;  // lattice genera in Krichever form
    nlohmann::json transform;                // null unless rescaled or shifted

    Complex operator()(const Complex& t) const {
        if (reliability_radius && abs_double(t) > *reliability_radius)
            throw OutsideReliabilityRadius("evaluation outside the reliability radius");
        return local(t);
    }

    bool has_continuation() const { return static_cast<bool>(global) || !reliability_radius; }

    Complex continued(const Complex& t) const {
        if (global) return global(t);
        if (!reliability_radius) return local(t);
        throw PreconditionError("this genus function has no global evaluator");
    }
};

namespace detail {

template <class C>
TruncatedSeries<C> scalar_series(const C& c, int order, const C& like, unsigned bits) {
    return TruncatedSeries<C>::constant(c, order, like, bits);
}

// e^{lambda t} t u / (c + q t u) with u = sinh(eta t)/(eta t), c = cosh(eta t),
// written through eta^2 so that eta = 0 needs no limit.
template <class C>
TruncatedSeries<C> coth_form_series(const C& lambda, const C& q, const C& eta_sq, int order, const C& like,
                                    unsigned bits) {
    using traits = coefficient_traits<C>;
    DomainScope scope(traits::domain(like, bits));
    const int m = order + 2;
    std::vector<C> u(static_cast<std::size_t>(m + 1), traits::zero_like(like));
    std::vector<C> c(static_cast<std::size_t>(m + 1), traits::zero_like(like));
    C power = traits::from_rational(1, like);
    Rational fact = 1;  // (2k)!
    for (int k = 0; 2 * k <= m; ++k) {
        if (k > 0) {
            power = power * eta_sq;
            fact *= (2 * k - 1) * (2 * k);
        }
        c[static_cast<std::size_t>(2 * k)] = power * traits::from_rational(1 / fact, like);
        u[static_cast<std::size_t>(2 * k)] = power * traits::from_rational(1 / (fact * (2 * k + 1)), like);
    }
    TruncatedSeries<C> us(0, u, m, like, bits), cs(0, c, m, like, bits);
    auto t = TruncatedSeries<C>::variable(m, like, bits);
    auto tu = t * us;
    auto den = cs + tu.scaled(q);
    auto f = tu * invert(den);
    if (!traits::is_zero(lambda)) f = f * exp(t.scaled(lambda));
    return f.truncated(order);
}

template <class C>
TruncatedSeries<C> todd_series(const C& alpha, const C& beta, int order, const C& like, unsigned bits) {
    using traits = coefficient_traits<C>;
    DomainScope scope(traits::domain(like, bits));
    if (alpha == beta) {
        // q = -alpha, eta = 0: f = t/(1 - alpha t).
        C q = -alpha;
        return coth_form_series<C>(traits::zero_like(like), q, traits::zero_like(like), order, like, bits);
    }
    const int m = order + 1;
    auto t = TruncatedSeries<C>::variable(m, like, bits);
    auto ea = exp(t.scaled(alpha));
    auto eb = exp(t.scaled(beta));
    auto num = ea - eb;
    auto den = eb.scaled(alpha) - ea.scaled(beta);
    return (num * invert(den)).truncated(order);
}

inline Complex pole_guarded_div(const Complex& a, const Complex& b, unsigned bits) {
    PrecisionScope scope(bits);
    Real scale = boost::multiprecision::ldexp(Real(1), -static_cast<int>(bits / 2));
    if (abs(b) < scale * (Real(1) + abs(a))) throw PoleError("genus function pole");
    return a / b;
}

inline Scalar scalar_at_precision(const Scalar& s, unsigned bits) {
    if (std::holds_alternative<Rational>(s)) return s;
    PrecisionScope scope(bits);
    return to_complex(s);
}

} // namespace detail

// Exact parametric forms of the Todd series in (alpha, beta) or (q, eta^2).
template <class C>
TruncatedSeries<C> todd_series(const C& alpha, const C& beta, int order, const C& like, unsigned bits = 0) {
    return detail::todd_series<C>(alpha, beta, order, like, bits);
}

template <class C>
TruncatedSeries<C> todd_series_uniform(const C& q, const C& eta_sq, int order, const C& like, unsigned bits = 0) {
    return detail::coth_form_series<C>(coefficient_traits<C>::zero_like(like), q, eta_sq, order, like, bits);
}

inline GenusFunction todd(const Scalar& alpha, const Scalar& beta, int order = kDefaultOrder,
                          unsigned bits = kDefaultPrecisionBits) {
    PrecisionScope scope(bits);
    GenusFunction f;
    f.spec = ToddSpec{detail::scalar_at_precision(alpha, bits), detail::scalar_at_precision(beta, bits)};
    f.precision_bits = bits;
    auto qa = as_rational(alpha), qb = as_rational(beta);
    if (qa && qb) {
        f.exact_series = todd_series<Rational>(*qa, *qb, order, Rational(0));
        f.series = to_complex(*f.exact_series, bits);
    } else {
        f.series = todd_series<Complex>(to_complex(alpha), to_complex(beta), order, Complex(0), bits);
    }
    const Complex a = to_complex(alpha), b = to_complex(beta);
    if (a == b) {
        f.local = [a, bits](const Complex& t) {
            PrecisionScope s(bits);
            return detail::pole_guarded_div(t, Complex(1) - a * t, bits);
        };
    } else {
        f.local = [a, b, bits](const Complex& t) {
            PrecisionScope s(bits);
            Complex ea = exp(a * t), eb = exp(b * t);
            return detail::pole_guarded_div(ea - eb, a * eb - b * ea, bits);
        };
    }
    f.sampling_radius = 0.5;
    return f;
}

inline GenusFunction krichever(const Complex& alpha, const Complex& s, const Lattice& lattice,
                               int order = kDefaultOrder) {
    const unsigned bits = lattice.precision_bits();
    PrecisionScope scope(bits);
    BakerAkhiezer phi(lattice, s);
    GenusFunction f;
    Complex a(Real(alpha.real()), Real(alpha.imag()));
    f.spec = KricheverSpec{lattice, phi.s(), a};
    f.precision_bits = bits;
    auto t = ComplexSeries::variable(order, Complex(0), bits);
    f.series = (phi.reciprocal_series(order) * exp(t.scaled(a))).truncated(order);
    const Complex sig_s = lattice.sigma(phi.s());
    const Complex zs = phi.zeta_s();
    const Complex sv = phi.s();
    f.local = [lattice, a, sv, sig_s, zs, bits](const Complex& x) {
        PrecisionScope sc(bits);
        if (lattice.distance_to_lattice(sv - x) < 1e-8 * abs_double(lattice.omega1()))
            throw PoleError("Krichever function pole at t = s");
        return exp((a - zs) * x) * sig_s * lattice.sigma(x) / lattice.sigma(sv - x);
    };
    f.sampling_radius = 0.3 * abs_double(lattice.omega1());
    f.krichever = KricheverData{lattice, sv, a};
    return f;
}

inline GenusFunction krichever(const Complex& alpha, const Complex& s, const Lattice& lattice, int order,
                               const GenusSpec& echo) {
    GenusFunction f = krichever(alpha, s, lattice, order);
    f.spec = echo;
    return f;
}

struct LevelDData {
    Complex P, Omega, c;
};

inline LevelDData level_d_points(const Lattice& lattice, int d, int k, int l) {
    PrecisionScope scope(lattice.precision_bits());
    if (d < 2) throw PreconditionError("level d must be at least 2");
    if (((k % d) + d) % d == 0 && ((l % d) + d) % d == 0)
        throw PreconditionError("torsion index (k, l) must not vanish modulo d");
    LevelDData out;
    out.Omega = lattice.point(k, l);
    out.P = out.Omega / Complex(d);
    Complex sp = lattice.sigma(-out.P);
    out.c = pow(sp, d - 1) * lattice.sigma(out.Omega - out.P);
    return out;
}

// g(t) = c sigma(t)^d / (sigma(t - P)^{d-1} sigma(t - P + Omega)), elliptic with g = t^d + ...
inline Complex level_d_g(const Lattice& lattice, const LevelDData& data, int d, const Complex& t) {
    PrecisionScope scope(lattice.precision_bits());
    Complex den = pow(lattice.sigma(t - data.P), d - 1) * lattice.sigma(t - data.P + data.Omega);
    if (den.is_zero()) throw PoleError("level-d pole");
    return data.c * pow(lattice.sigma(t), d) / den;
}

inline ComplexSeries level_d_g_series(const Lattice& lattice, const LevelDData& data, int d, int order) {
    const unsigned bits = lattice.precision_bits();
    PrecisionScope scope(bits);
    // sigma(b + t)/sigma(b) = exp(zeta(b) t - II(wp(b + x))).
    const int m = order;  // order of g
    auto ws = wp_series(std::max(4, m), lattice);
    auto sig = ws.sigma.truncated(m);
    auto sig_d = pow(sig, d).truncated(m);
    auto t = ComplexSeries::variable(m - d, Complex(0), bits);
    auto ii = integrate(integrate(wp_taylor(lattice, -data.P, std::max(0, m - d - 2))));
    Complex zP = lattice.zeta(-data.P);
    Complex zOP = lattice.zeta(data.Omega - data.P);
    Complex lin = -(Complex(d - 1) * zP) - zOP;
    auto expo = t.scaled(lin) + ii.scaled(Complex(d));
    return (sig_d * exp(expo)).truncated(m);
}

inline GenusFunction level_d(const Lattice& lattice, int d, int k, int l, int order = kDefaultOrder) {
    const unsigned bits = lattice.precision_bits();
    PrecisionScope scope(bits);
    LevelDData data = level_d_points(lattice, d, k, l);
    if (lattice.distance_to_lattice(data.P) < 1e-8 * abs_double(lattice.omega1()))
        throw PreconditionError("torsion point P lies on the lattice");
    GenusFunction f;
    f.spec = LevelDSpec{lattice, d, k, l};
    f.precision_bits = bits;
    f.series = nth_root(level_d_g_series(lattice, data, d, order + d - 1), d);
    f.local = [lattice, data, d, bits](const Complex& t) {
        PrecisionScope sc(bits);
        if (t.is_zero()) return Complex(0);
        Complex ratio = level_d_g(lattice, data, d, t) / pow(t, d);
        return t * exp(log(ratio) / Complex(d));
    };
    // Reliability radius: Re(g/t^d) > 0 on a probe circle inside the pole-free disc.
    double nearest_pole = INFINITY;
    for (long a = -2; a <= 2; ++a)
        for (long b = -2; b <= 2; ++b) nearest_pole = std::min(nearest_pole, abs_double(data.P + lattice.point(a, b)));
    double r = 0.4 * std::min(nearest_pole, lattice.shortest_vector_length());
    const Real two_pi = 2 * real_pi();
    for (int attempt = 0;; ++attempt) {
        bool ok = true;
        for (int j = 0; j < 64 && ok; ++j) {
            Real th = two_pi * j / 64;
            Complex t = Complex(Real(r)) * exp(Complex(Real(0), th));
            Complex ratio = level_d_g(lattice, data, d, t) / pow(t, d);
            if (ratio.real() <= 0) ok = false;
        }
        if (ok) break;
        r /= 2;
        if (attempt > 40) throw PreconditionError("no branch-safe disc found for the level-d root");
    }
    f.reliability_radius = r;
    f.sampling_radius = r / 3;
    // Globally f_d is the Krichever function with s = P, alpha = zeta(P) - 2 eta_Omega / d.
    Complex eta_omega = Complex(k) * lattice.eta1() + Complex(l) * lattice.eta2();
    Complex alpha = lattice.zeta(data.P) - Complex(2) * eta_omega / Complex(d);
    GenusFunction kr = krichever(alpha, data.P, lattice, 4);
    f.global = kr.local;
    f.krichever = KricheverData{lattice, data.P, alpha};
    return f;
}

inline GenusFunction sing_krichever(const Scalar& lambda, const Scalar& q, const Scalar& mu,
                                    int order = kDefaultOrder, unsigned bits = kDefaultPrecisionBits) {
    PrecisionScope scope(bits);
    if (scalar_is_zero(mu)) throw PreconditionError("sing_krichever needs mu != 0; use sing_limit");
    GenusFunction f;
    f.spec = SingKricheverSpec{detail::scalar_at_precision(lambda, bits), detail::scalar_at_precision(q, bits),
                               detail::scalar_at_precision(mu, bits)};
    f.precision_bits = bits;
    auto ql = as_rational(lambda), qq = as_rational(q), qm = as_rational(mu);
    if (ql && qq && qm) {
        f.exact_series = detail::coth_form_series<Rational>(*ql, *qq, *qm * *qm, order, Rational(0), 0);
        f.series = to_complex(*f.exact_series, bits);
    } else {
        Complex m = to_complex(mu);
        f.series = detail::coth_form_series<Complex>(to_complex(lambda), to_complex(q), m * m, order, Complex(0), bits);
    }
    const Complex l = to_complex(lambda), qc = to_complex(q), m = to_complex(mu);
    f.local = [l, qc, m, bits](const Complex& t) {
        PrecisionScope s(bits);
        Complex ep = exp(m * t), em = exp(-(m * t));
        Complex sh = (ep - em) / Complex(2), ch = (ep + em) / Complex(2);
        return detail::pole_guarded_div(exp(l * t) * sh, qc * sh + m * ch, bits);
    };
    f.sampling_radius = 0.5;
    return f;
}

inline GenusFunction sing_limit(const Scalar& lambda, const Scalar& q, int order = kDefaultOrder,
                                unsigned bits = kDefaultPrecisionBits) {
    PrecisionScope scope(bits);
    GenusFunction f;
    f.spec = SingLimitSpec{detail::scalar_at_precision(lambda, bits), detail::scalar_at_precision(q, bits)};
    f.precision_bits = bits;
    auto ql = as_rational(lambda), qq = as_rational(q);
    if (ql && qq) {
        f.exact_series = detail::coth_form_series<Rational>(*ql, *qq, Rational(0), order, Rational(0), 0);
        f.series = to_complex(*f.exact_series, bits);
    } else {
        f.series = detail::coth_form_series<Complex>(to_complex(lambda), to_complex(q), Complex(0), order, Complex(0),
                                                     bits);
    }
    const Complex l = to_complex(lambda), qc = to_complex(q);
    f.local = [l, qc, bits](const Complex& t) {
        PrecisionScope s(bits);
        return detail::pole_guarded_div(t * exp(l * t), Complex(1) + qc * t, bits);
    };
    f.sampling_radius = 0.5;
    return f;
}

// f(t) = (1/mu) e^{nu mu t} sinh(mu t), written as a sing_krichever function.
inline GenusFunction sinh_family(const Rational& nu, const Rational& mu, int order = kDefaultOrder,
                                 unsigned bits = kDefaultPrecisionBits) {
    return sing_krichever(Scalar(Rational((nu - 1) * mu)), Scalar(Rational(-mu)), Scalar(mu), order, bits);
}

inline GenusFunction make_genus(const GenusSpec& spec, int order = kDefaultOrder,
                                unsigned bits = kDefaultPrecisionBits) {
    return std::visit(
        [&](const auto& s) -> GenusFunction {
            using T = std::decay_t<decltype(s)>;
            if constexpr (std::is_same_v<T, ToddSpec>) return todd(s.alpha, s.beta, order, bits);
            else if constexpr (std::is_same_v<T, KricheverSpec>) return krichever(s.alpha, s.s, s.lattice, order);
            else if constexpr (std::is_same_v<T, LevelDSpec>) return level_d(s.lattice, s.d, s.k, s.l, order);
            else if constexpr (std::is_same_v<T, SingKricheverSpec>)
                return sing_krichever(s.lambda, s.q, s.mu, order, bits);
            else return sing_limit(s.lambda, s.q, order, bits);
        },
        spec);
}

// ---------------------------------------------------------------------------
// Transforms used by the covariance checks.

// t -> mu f(t / mu).
inline GenusFunction rescaled(const GenusFunction& f, const Complex& mu) {
    PrecisionScope scope(f.precision_bits);
    GenusFunction g = f;
    Complex m(Real(mu.real()), Real(mu.imag()));
    const double am = abs_double(m);
    std::vector<Complex> c;
    Complex inv = Complex(1) / m;
    Complex p(1);
    for (int k = 1; k <= f.series.order(); ++k) {
        c.push_back(f.series[k] * p);
        p *= inv;
    }
    g.series = ComplexSeries(1, std::move(c), f.series.order(), Complex(0), f.precision_bits);
    g.exact_series.reset();
    auto loc = f.local;
    g.local = [loc, m](const Complex& t) { return m * loc(t / m); };
    if (f.global) {
        auto glob = f.global;
        g.global = [glob, m](const Complex& t) { return m * glob(t / m); };
    }
    if (f.reliability_radius) g.reliability_radius = *f.reliability_radius * am;
    g.sampling_radius = f.sampling_radius * am;
    g.krichever.reset();
    g.transform = {{"scale", complex_to_json(m)}};
    return g;
}

// f'(t0) by the trapezoid rule on a small circle (Cauchy integral).
inline Complex derivative_at(const std::function<Complex(const Complex&)>& f, const Complex& t0, double radius,
                             unsigned bits, int nodes = 64) {
    PrecisionScope scope(bits);
    const Real two_pi = 2 * real_pi();
    Complex acc(0);
    for (int j = 0; j < nodes; ++j) {
        Complex e = exp(Complex(Real(0), two_pi * j / nodes));
        acc += f(t0 + Complex(Real(radius)) * e) / e;
    }
    return acc / Complex(Real(radius) * nodes);
}

// t -> f(t + t0) / f'(t0), for a zero t0 of f so that the result is t + O(t^2).
inline GenusFunction shifted(const GenusFunction& f, const Complex& t0) {
    PrecisionScope scope(f.precision_bits);
    if (!f.has_continuation()) throw PreconditionError("shift needs a global evaluator");
    GenusFunction g = f;
    Complex z(Real(t0.real()), Real(t0.imag()));
    auto ev = [f](const Complex& t) { return f.continued(t); };
    Complex v0 = ev(z);
    if (abs_double(v0) > 1e-30) throw PreconditionError("shift point is not a zero of f");
    Complex d0 = derivative_at(ev, z, 0.05 * f.sampling_radius, f.precision_bits);
    auto shifted_eval = [ev, z, d0](const Complex& t) { return ev(t + z) / d0; };
    g.local = shifted_eval;
    g.global = shifted_eval;
    g.reliability_radius.reset();
    g.krichever.reset();
    g.transform = {{"shift", complex_to_json(z)}};
    return g;
}

// ---------------------------------------------------------------------------
// Monodromy  eps_l = f(t) / f(t + 2 w_l)  of a Krichever-form function.

// From sigma(t + 2w) = -sigma(t) e^{2 eta (t + w)}:
//   eps_l = exp(2 (w_l zeta(s) - eta_l s - alpha w_l)).
inline Complex monodromy_analytic(const KricheverData& k, int l) {
    PrecisionScope scope(k.lattice.precision_bits());
    const Complex w = k.lattice.omega(l), eta = k.lattice.eta(l);
    return exp(Complex(2) * (w * k.lattice.zeta(k.s) - eta * k.s - k.alpha * w));
}

struct MonodromyFactors {
    Complex analytic[2];
    Complex numeric[2];
    double spread[2] = {0, 0};        // max relative deviation of the sampled ratios
    double dual_mismatch[2] = {0, 0}; // |numeric - analytic|
};

inline MonodromyFactors monodromy_factors(const GenusFunction& f, std::uint64_t seed = 7, int samples = 8,
                                          double spread_tolerance = 1e-30) {
    if (!f.krichever) throw PreconditionError("monodromy needs a lattice genus");
    const auto& k = *f.krichever;
    const unsigned bits = k.lattice.precision_bits();
    PrecisionScope scope(bits);
    Rng rng(seed);
    MonodromyFactors out;
    const double r = 0.25 * abs_double(k.lattice.omega1());
    std::vector<Complex> pts;
    while (static_cast<int>(pts.size()) < samples) {
        double rad = r * std::sqrt(rng.uniform()), th = 2 * M_PI * rng.uniform();
        Complex t = Complex::from_double(rad * std::cos(th), rad * std::sin(th));
        if (k.lattice.distance_to_lattice(t) < 0.05 * r) continue;
        if (k.lattice.distance_to_lattice(k.s - t) < 0.05 * r) continue;
        pts.push_back(t);
    }
    for (int l = 1; l <= 2; ++l) {
        const Complex shift = Complex(2) * k.lattice.omega(l);
        std::vector<Complex> ratios;
        Complex mean(0);
        for (const auto& t : pts) {
            Complex rt = f.continued(t) / f.continued(t + shift);
            ratios.push_back(rt);
            mean += rt;
        }
        mean /= Real(static_cast<long>(ratios.size()));
        double spread = 0;
        for (const auto& rt : ratios) spread = std::max(spread, abs_double(rt - mean) / abs_double(mean));
        out.numeric[l - 1] = mean;
        out.analytic[l - 1] = monodromy_analytic(k, l);
        out.spread[l - 1] = spread;
        out.dual_mismatch[l - 1] = abs_double(mean - out.analytic[l - 1]);
        if (spread > spread_tolerance)
            throw MonodromyInconsistency("monodromy ratios disagree between sample points (spread " +
                                         std::to_string(spread) + ")");
    }
    return out;
}

// Smallest m <= max_order with |eps_l^m - 1| < tol for both l, if any.
inline std::optional<int> monodromy_order(const Complex& e1, const Complex& e2, double tol, int max_order = 64) {
    Complex p1 = e1, p2 = e2;
    for (int m = 1; m <= max_order; ++m) {
        if (abs_double(p1 - Complex(1)) < tol && abs_double(p2 - Complex(1)) < tol) return m;
        p1 *= e1;
        p2 *= e2;
    }
    return std::nullopt;
}

// ---------------------------------------------------------------------------
// JSON

inline nlohmann::json scalar_to_json(const Scalar& s) {
    if (const auto* q = std::get_if<Rational>(&s)) return q->get_str();
    return complex_to_json(std::get<Complex>(s));
}

inline Scalar scalar_from_json(const nlohmann::json& j) {
    if (j.is_string()) return parse_rational(j.get<std::string>());
    if (j.is_number_integer()) return Rational(j.get<long>());
    return complex_from_json(j);
}

inline nlohmann::json genus_spec_to_json(const GenusSpec& spec) {
    nlohmann::json j;
    j["type"] = genus_kind_name(spec);
    std::visit(
        [&](const auto& s) {
            using T = std::decay_t<decltype(s)>;
            if constexpr (std::is_same_v<T, ToddSpec>) {
                j["alpha"] = scalar_to_json(s.alpha);
                j["beta"] = scalar_to_json(s.beta);
            } else if constexpr (std::is_same_v<T, KricheverSpec>) {
                j["lattice"] = lattice_to_json(s.lattice);
                j["s"] = complex_to_json(s.s);
                j["alpha"] = complex_to_json(s.alpha);
            } else if constexpr (std::is_same_v<T, LevelDSpec>) {
                j["lattice"] = lattice_to_json(s.lattice);
                j["d"] = s.d;
                j["k"] = s.k;
                j["l"] = s.l;
            } else if constexpr (std::is_same_v<T, SingKricheverSpec>) {
                j["lambda"] = scalar_to_json(s.lambda);
                j["q"] = scalar_to_json(s.q);
                j["mu"] = scalar_to_json(s.mu);
            } else {
                j["lambda"] = scalar_to_json(s.lambda);
                j["q"] = scalar_to_json(s.q);
            }
        },
        spec);
    return j;
}

// Complex scalars parse at the given precision; lattices carry their own.
inline GenusSpec genus_spec_from_json(const nlohmann::json& j, unsigned bits = kDefaultPrecisionBits) {
    PrecisionScope scope(bits);
    const auto type = j.at("type").get<std::string>();
    if (type == "todd") return ToddSpec{scalar_from_json(j.at("alpha")), scalar_from_json(j.at("beta"))};
    if (type == "krichever") {
        Lattice lat = lattice_from_json(j.at("lattice"));
        PrecisionScope inner(lat.precision_bits());
        return KricheverSpec{lat, complex_from_json(j.at("s")), complex_from_json(j.at("alpha"))};
    }
    if (type == "level_d")
        return LevelDSpec{lattice_from_json(j.at("lattice")), j.at("d").get<int>(), j.at("k").get<int>(),
                          j.at("l").get<int>()};
    if (type == "sing_krichever")
        return SingKricheverSpec{scalar_from_json(j.at("lambda")), scalar_from_json(j.at("q")),
                                 scalar_from_json(j.at("mu"))};
    if (type == "sing_limit") return SingLimitSpec{scalar_from_json(j.at("lambda")), scalar_from_json(j.at("q"))};
    throw PreconditionError("unknown genus type: " + type);
}

} // namespace hirz
