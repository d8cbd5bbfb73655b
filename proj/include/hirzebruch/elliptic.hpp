#pragma once

// Weierstrass sigma, zeta, wp and wp' for a lattice 2w1 Z + 2w2 Z.
//
// Evaluation goes through the odd theta series
//   S(v) = sum_{n>=0} (-1)^n q^{n(n+1)} sin((2n+1) v),  q = exp(i pi tau),
// with v = pi z / (2 w1), after reducing z into the cell around 0.

#include <cmath>
#include <memory>
#include <optional>
#include <vector>

#include <json.hpp>

#include "errors.hpp"
#include "numeric.hpp"
#include "series.hpp"

namespace hirz {

// Residual bound for elliptic identities: 1e-40 at 256 bits, scaled with precision.
inline double identity_tolerance(unsigned bits) {
    return 1e-40 * std::pow(2.0, -(static_cast<double>(bits) - 256.0));
}

struct ThetaValues {
    Complex s, s1, s2, s3;  // S and its first three derivatives in v
};

struct Reduction {
    Complex t0;       // reduced argument
    long m1 = 0;      // t = t0 + 2 m1 w1 + 2 m2 w2
    long m2 = 0;
};

class Lattice {
public:
    static Lattice from_periods(const Complex& omega1, const Complex& omega2, unsigned bits) {
        return Lattice(omega1, omega2, bits);
    }

    // The normalization 2w1 = 2 pi i, 2w2 = 2 pi i tau.
    static Lattice from_tau(const Complex& tau, unsigned bits) {
        PrecisionScope scope(bits);
        Complex w1(Real(0), real_pi());
        return Lattice(w1, w1 * Complex(Real(tau.real()), Real(tau.imag())), bits);
    }

    static Lattice square(unsigned bits = kDefaultPrecisionBits) {
        PrecisionScope scope(bits);
        return from_tau(Complex::i(), bits);
    }

    unsigned precision_bits() const { return d_->bits; }
    const Complex& omega1() const { return d_->w1; }
    const Complex& omega2() const { return d_->w2; }
    const Complex& tau() const { return d_->tau; }
    const Complex& nome() const { return d_->q; }
    const Complex& g2() const { return d_->g2; }
    const Complex& g3() const { return d_->g3; }
    const Complex& eta1() const { return d_->eta1; }
    const Complex& eta2() const { return d_->eta2; }

    Complex omega(int l) const { return l == 1 ? d_->w1 : d_->w2; }
    Complex eta(int l) const { return l == 1 ? d_->eta1 : d_->eta2; }

    // 2(a w1 + b w2)
    Complex point(long a, long b) const {
        PrecisionScope scope(d_->bits);
        return Complex(2 * a) * d_->w1 + Complex(2 * b) * d_->w2;
    }

    double shortest_vector_length() const {
        double best = INFINITY;
        for (long a = -3; a <= 3; ++a)
            for (long b = -3; b <= 3; ++b)
                if (a != 0 || b != 0) best = std::min(best, abs_double(point(a, b)));
        return best;
    }

    // Distance from t to the nearest lattice point.
    double distance_to_lattice(const Complex& t) const {
        PrecisionScope scope(d_->bits);
        Reduction r = reduce(t);
        double best = INFINITY;
        for (long a = -1; a <= 1; ++a)
            for (long b = -1; b <= 1; ++b) best = std::min(best, abs_double(r.t0 - point(a, b)));
        return best;
    }

    Reduction reduce(const Complex& t) const {
        PrecisionScope scope(d_->bits);
        const Complex a = Complex(2) * d_->w1;
        const Complex b = Complex(2) * d_->w2;
        auto cross = [](const Complex& u, const Complex& v) { return u.real() * v.imag() - u.imag() * v.real(); };
        Real det = cross(a, b);
        Real x = cross(t, b) / det;
        Real y = cross(a, t) / det;
        Real mx = boost::multiprecision::round(x);
        Real my = boost::multiprecision::round(y);
        if (boost::multiprecision::abs(mx) > 1e12 || boost::multiprecision::abs(my) > 1e12)
            throw PreconditionError("argument too far from the origin for reduction");
        Reduction r;
        r.m1 = mx.convert_to<long>();
        r.m2 = my.convert_to<long>();
        r.t0 = t - Complex(mx) * a - Complex(my) * b;
        return r;
    }

    Complex sigma(const Complex& t) const {
        PrecisionScope scope(d_->bits);
        Reduction r = reduce(t);
        Complex base = sigma_kernel(r.t0);
        if (r.m1 == 0 && r.m2 == 0) return base;
        Complex wW = Complex(r.m1) * d_->w1 + Complex(r.m2) * d_->w2;
        Complex eW = Complex(r.m1) * d_->eta1 + Complex(r.m2) * d_->eta2;
        long parity = (r.m1 + r.m2 + r.m1 * r.m2) % 2;
        Complex factor = exp(Complex(2) * eW * (r.t0 + wW));
        return parity != 0 ? -(factor * base) : factor * base;
    }

    Complex zeta(const Complex& t) const {
        PrecisionScope scope(d_->bits);
        check_pole(t);
        Reduction r = reduce(t);
        Complex z = zeta_kernel(r.t0);
        if (r.m1 != 0 || r.m2 != 0) z += Complex(2) * (Complex(r.m1) * d_->eta1 + Complex(r.m2) * d_->eta2);
        return z;
    }

    Complex wp(const Complex& t) const {
        PrecisionScope scope(d_->bits);
        check_pole(t);
        return wp_kernel(reduce(t).t0);
    }

    Complex wp_prime(const Complex& t) const {
        PrecisionScope scope(d_->bits);
        check_pole(t);
        return wp_prime_kernel(reduce(t).t0);
    }

    // Kernels evaluate the theta formulas at t without reduction.  They are
    // exact identities for every t; reduction only keeps the series short.
    Complex sigma_kernel(const Complex& t) const {
        PrecisionScope scope(d_->bits);
        Complex v = d_->c * t;
        ThetaValues th = theta(v, 0);
        return exp(d_->eta1 * t * t / (Complex(2) * d_->w1)) * th.s / (d_->c * d_->s1_0);
    }

    Complex zeta_kernel(const Complex& t) const {
        PrecisionScope scope(d_->bits);
        Complex v = d_->c * t;
        ThetaValues th = theta(v, 1);
        if (th.s.is_zero()) throw PoleError("zeta at a lattice point");
        return d_->eta1 * t / d_->w1 + d_->c * th.s1 / th.s;
    }

    Complex wp_kernel(const Complex& t) const {
        PrecisionScope scope(d_->bits);
        Complex v = d_->c * t;
        ThetaValues th = theta(v, 2);
        if (th.s.is_zero()) throw PoleError("wp at a lattice point");
        Complex r1 = th.s1 / th.s;
        Complex r2 = th.s2 / th.s;
        return -(d_->eta1 / d_->w1) - d_->c * d_->c * (r2 - r1 * r1);
    }

    Complex wp_prime_kernel(const Complex& t) const {
        PrecisionScope scope(d_->bits);
        Complex v = d_->c * t;
        ThetaValues th = theta(v, 3);
        if (th.s.is_zero()) throw PoleError("wp' at a lattice point");
        Complex r1 = th.s1 / th.s;
        Complex r2 = th.s2 / th.s;
        Complex r3 = th.s3 / th.s;
        return -(d_->c * d_->c * d_->c) * (r3 - Complex(3) * r2 * r1 + Complex(2) * r1 * r1 * r1);
    }

    void check_pole(const Complex& t) const {
        double limit = 1e-8 * abs_double(d_->w1);
        if (distance_to_lattice(t) < limit) throw PoleError("argument within 1e-8|w1| of a lattice point");
    }

    // Theta series and its derivatives in v, up to the requested derivative.
    ThetaValues theta(const Complex& v, int derivs) const {
        PrecisionScope scope(d_->bits);
        const Complex w = exp(Complex::i() * v);
        const Complex w2 = w * w;
        const Complex winv = Complex(1) / w;
        const Complex winv2 = winv * winv;
        const double y = std::abs(to_double(v.imag()));
        const double target = -(static_cast<double>(d_->bits) + 24.0) * std::log(2.0);
        const Complex half_i_inv = Complex(Real(0), Real(-1)) / Complex(2);  // 1/(2i)
        ThetaValues out{Complex(0), Complex(0), Complex(0), Complex(0)};
        Complex qpow(1);    // q^{n(n+1)}
        Complex qstep = d_->q * d_->q;  // q^{2(n+1)}
        Complex wk = w, wmk = winv;    // w^{2n+1}, w^{-(2n+1)}
        for (long n = 0;; ++n) {
            const long k = 2 * n + 1;
            Complex a = (n % 2 == 0) ? qpow : -qpow;
            Complex sn = (wk - wmk) * half_i_inv;
            Complex cn = (wk + wmk) / Complex(2);
            out.s += a * sn;
            if (derivs >= 1) out.s1 += a * Complex(k) * cn;
            if (derivs >= 2) out.s2 -= a * Complex(k * k) * sn;
            if (derivs >= 3) out.s3 -= a * Complex(k * k * k) * cn;
            double nn = static_cast<double>(n);
            double logterm = nn * (nn + 1) * d_->log_abs_q + static_cast<double>(k) * y + 3.0 * std::log(k);
            double slope = 2.0 * (nn + 1) * d_->log_abs_q + 2.0 * y;
            if (logterm < target && slope < 0) break;
            if (n > 100000) throw LatticeError("theta series does not converge at this argument");
            qpow *= qstep;
            qstep *= d_->q * d_->q;
            wk *= w2;
            wmk *= winv2;
        }
        return out;
    }

    friend bool operator==(const Lattice& a, const Lattice& b) {
        return a.d_->bits == b.d_->bits && a.d_->w1 == b.d_->w1 && a.d_->w2 == b.d_->w2;
    }

private:
    struct Data {
        unsigned bits;
        Complex w1, w2, tau, q, c, s1_0, eta1, eta2, g2, g3;
        double log_abs_q;
    };

    Lattice(const Complex& omega1, const Complex& omega2, unsigned bits) {
        PrecisionScope scope(bits);
        auto d = std::make_shared<Data>();
        d->bits = bits;
        d->w1 = Complex(Real(omega1.real()), Real(omega1.imag()));
        d->w2 = Complex(Real(omega2.real()), Real(omega2.imag()));
        if (d->w1.is_zero()) throw LatticeError("zero half-period");
        d->tau = d->w2 / d->w1;
        if (d->tau.imag() <= 0) throw LatticeError("Im(tau) must be positive");
        const Real pi = real_pi();
        d->q = exp(Complex(Real(0), pi) * d->tau);
        d->log_abs_q = to_double(boost::multiprecision::log(abs(d->q)));
        if (d->log_abs_q > std::log(0.999)) throw LatticeError("nome too close to 1 for theta evaluation");
        d->c = Complex(pi) / (Complex(2) * d->w1);
        d_ = d;
        // S'(0) and S'''(0) from the series at v = 0.
        ThetaValues th0 = theta(Complex(0), 3);
        d->s1_0 = th0.s1;
        d->eta1 = -(Complex(pi * pi) / (Complex(12) * d->w1)) * th0.s3 / th0.s1;
        d->eta2 = (d->eta1 * d->w2 - Complex(Real(0), pi / 2)) / d->w1;
        eisenstein(*d);
    }

    static void eisenstein(Data& d) {
        const Complex qt = d.q * d.q;
        const double log_qt = 2.0 * d.log_abs_q;
        const double target = -(static_cast<double>(d.bits) + 24.0) * std::log(2.0);
        Complex s3(0), s5(0), qm(1);
        for (long m = 1;; ++m) {
            qm *= qt;
            Complex denom = Complex(1) - qm;
            Complex lambert = qm / denom;
            Complex mm(m);
            Complex m3 = mm * mm * mm;
            s3 += m3 * lambert;
            s5 += m3 * mm * mm * lambert;
            if (static_cast<double>(m) * log_qt + 5.0 * std::log(static_cast<double>(m)) < target) break;
            if (m > 200000) throw LatticeError("nome too close to 1 for Eisenstein series");
        }
        Complex e4 = Complex(1) + Complex(240) * s3;
        Complex e6 = Complex(1) - Complex(504) * s5;
        Complex c2 = d.c * d.c;
        d.g2 = c2 * c2 * Complex(ratio(4, 3)) * e4;
        d.g3 = c2 * c2 * c2 * Complex(ratio(8, 27)) * e6;
    }

    std::shared_ptr<const Data> d_;
};

inline nlohmann::json complex_to_json(const Complex& z) {
    return {{"re", to_string(z.real())}, {"im", to_string(z.imag())}};
}

inline Complex complex_from_json(const nlohmann::json& j) {
    if (j.is_number()) return Complex(Real(j.get<double>()));
    if (j.is_string()) return Complex(Real(j.get<std::string>()));
    return parse_complex(j.at("re").get<std::string>(), j.at("im").get<std::string>());
}

inline nlohmann::json lattice_to_json(const Lattice& l) {
    return {{"omega1", complex_to_json(l.omega1())},
            {"omega2", complex_to_json(l.omega2())},
            {"precision_bits", l.precision_bits()}};
}

// Derived data are recomputed from the periods.
inline Lattice lattice_from_json(const nlohmann::json& j) {
    unsigned bits = j.at("precision_bits").get<unsigned>();
    PrecisionScope scope(bits);
    return Lattice::from_periods(complex_from_json(j.at("omega1")), complex_from_json(j.at("omega2")), bits);
}

template <class C>
struct WeierstrassSeries {
    TruncatedSeries<C> wp, wp_prime, zeta, sigma;
};

// Classical recurrence wp = t^-2 + sum_{k>=2} c_k t^{2k-2}; `order` is the
// truncation order of wp.
template <class C>
WeierstrassSeries<C> weierstrass_series(int order, const C& g2, const C& g3, const C& like, unsigned bits = 0) {
    using traits = coefficient_traits<C>;
    if (order < 4) throw PreconditionError("Weierstrass series need order >= 4");
    std::optional<PrecisionScope> scope;
    if (bits) scope.emplace(bits);
    const int kmax = (order + 2) / 2;
    std::vector<C> c(static_cast<std::size_t>(std::max(kmax, 3) + 1), traits::zero_like(like));
    c[2] = g2 * traits::from_rational(ratio(1, 20), like);
    c[3] = g3 * traits::from_rational(ratio(1, 28), like);
    for (int k = 4; k <= kmax; ++k) {
        C acc = traits::zero_like(like);
        for (int m = 2; m <= k - 2; ++m) acc = acc + c[static_cast<std::size_t>(m)] * c[static_cast<std::size_t>(k - m)];
        c[static_cast<std::size_t>(k)] = acc * traits::from_rational(ratio(3, (2 * k + 1) * (k - 3)), like);
    }
    std::vector<C> wp(static_cast<std::size_t>(order + 3), traits::zero_like(like));
    wp[0] = traits::from_rational(1, like);
    for (int k = 2; k <= kmax; ++k)
        if (2 * k - 2 <= order) wp[static_cast<std::size_t>(2 * k)] = c[static_cast<std::size_t>(k)];
    WeierstrassSeries<C> out{TruncatedSeries<C>(-2, wp, order, like, bits), TruncatedSeries<C>::zero(0, like, bits),
                             TruncatedSeries<C>::zero(0, like, bits), TruncatedSeries<C>::zero(0, like, bits)};
    out.wp_prime = derivative(out.wp);
    // zeta = t^-1 - sum c_k t^{2k-1}/(2k-1), order + 1.
    std::vector<C> z(static_cast<std::size_t>(order + 3), traits::zero_like(like));
    z[0] = traits::from_rational(1, like);
    std::vector<C> e(static_cast<std::size_t>(order + 3), traits::zero_like(like));
    for (int k = 2; k <= kmax; ++k) {
        if (2 * k - 1 <= order + 1)
            z[static_cast<std::size_t>(2 * k)] =
                -(c[static_cast<std::size_t>(k)] * traits::from_rational(ratio(1, 2 * k - 1), like));
        if (2 * k <= order + 2)
            e[static_cast<std::size_t>(2 * k)] =
                -(c[static_cast<std::size_t>(k)] * traits::from_rational(ratio(1, (2 * k - 1) * (2 * k)), like));
    }
    out.zeta = TruncatedSeries<C>(-1, z, order + 1, like, bits);
    // sigma = t exp(-sum c_k t^{2k}/((2k-1)2k)), order + 3.
    auto expo = TruncatedSeries<C>(0, e, order + 2, like, bits);
    out.sigma = exp(expo).shifted(1);
    return out;
}

inline WeierstrassSeries<MultiPoly> wp_series(int order) {
    auto layout = std::make_shared<const VarLayout>(std::vector<std::string>{}, std::vector<std::string>{"g2", "g3"});
    return weierstrass_series<MultiPoly>(order, MultiPoly::variable(layout, 0), MultiPoly::variable(layout, 1),
                                         MultiPoly(layout));
}

inline WeierstrassSeries<Complex> wp_series(int order, const Lattice& lattice) {
    PrecisionScope scope(lattice.precision_bits());
    return weierstrass_series<Complex>(order, lattice.g2(), lattice.g3(), Complex(0), lattice.precision_bits());
}

// Taylor series of wp(b + x) in x from wp'' = 6 wp^2 - g2/2.
inline ComplexSeries wp_taylor(const Lattice& lattice, const Complex& b, int order) {
    const unsigned bits = lattice.precision_bits();
    PrecisionScope scope(bits);
    std::vector<Complex> p(static_cast<std::size_t>(order + 1), Complex(0));
    p[0] = lattice.wp(b);
    if (order >= 1) p[1] = lattice.wp_prime(b);
    for (int k = 0; k + 2 <= order; ++k) {
        Complex acc(0);
        for (int j = 0; j <= k; ++j) acc += p[static_cast<std::size_t>(j)] * p[static_cast<std::size_t>(k - j)];
        acc *= Complex(6);
        if (k == 0) acc -= lattice.g2() / Complex(2);
        p[static_cast<std::size_t>(k + 2)] = acc / Complex((k + 2) * (k + 1));
    }
    return ComplexSeries(0, std::move(p), order, Complex(0), bits);
}

} // namespace hirz
