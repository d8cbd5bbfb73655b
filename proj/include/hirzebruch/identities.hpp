#pragma once

// Sampled residuals of the Weierstrass and Baker-Akhiezer identities.

#include <string>
#include <vector>

#include <json.hpp>

#include "elliptic.hpp"
#include "genus.hpp"
#include "verifier.hpp"

namespace hirz {

struct IdentityCheck {
    std::string name;
    double max_residual = 0;
    double tolerance = 0;
    int samples = 0;
    bool passed() const { return max_residual < tolerance; }
};

namespace detail {

// Uniform point of the period cell centered at 0.
inline Complex cell_point(const Lattice& L, Rng& rng) {
    double x = rng.uniform(-0.5, 0.5), y = rng.uniform(-0.5, 0.5);
    return Complex(Real(2 * x)) * L.omega1() + Complex(Real(2 * y)) * L.omega2();
}

inline void record(IdentityCheck& c, double r) {
    c.max_residual = std::max(c.max_residual, r);
}

} // namespace detail

inline std::vector<IdentityCheck> weierstrass_identities(const Lattice& L, std::uint64_t seed = 3, int points = 100) {
    const unsigned bits = L.precision_bits();
    PrecisionScope scope(bits);
    const double tol = identity_tolerance(bits);
    const double w = abs_double(L.omega1());
    std::vector<IdentityCheck> out;
    auto make = [&](const std::string& name) { return IdentityCheck{name, 0, tol, 0}; };
    IdentityCheck de = make("differential_equation"), legendre = make("legendre_relation"),
                  sig_par = make("sigma_parity"), zeta_par = make("zeta_parity"), wp_par = make("wp_parity"),
                  sig_q1 = make("sigma_quasi_periodicity_1"), sig_q2 = make("sigma_quasi_periodicity_2"),
                  wp_p1 = make("wp_periodicity_1"), wp_p2 = make("wp_periodicity_2");
    Rng rng(seed);
    // eta_2 from the unreduced theta formula at w2 against the Legendre relation.
    {
        Complex eta2 = L.zeta_kernel(L.omega2());
        Complex pi_i_half(Real(0), real_pi() / 2);
        detail::record(legendre, relative_residual(L.eta1() * L.omega2() - eta2 * L.omega1(), pi_i_half));
        legendre.samples = 1;
    }
    int taken = 0;
    while (taken < points) {
        Complex t = detail::cell_point(L, rng);
        if (L.distance_to_lattice(t) < 0.05 * w) continue;
        ++taken;
        Complex p = L.wp(t), dp = L.wp_prime(t);
        Complex rhs = Complex(4) * p * p * p - L.g2() * p - L.g3();
        double scale = std::max({1.0, abs_double(dp * dp), abs_double(Complex(4) * p * p * p)});
        detail::record(de, abs_double(dp * dp - rhs) / scale);
        detail::record(sig_par, relative_residual(L.sigma(-t), -L.sigma(t)));
        detail::record(zeta_par, relative_residual(L.zeta(-t), -L.zeta(t)));
        detail::record(wp_par, relative_residual(L.wp(-t), p));
        Complex sk = L.sigma_kernel(t), pk = L.wp_kernel(t);
        for (int l = 1; l <= 2; ++l) {
            Complex wl = L.omega(l), shift = Complex(2) * wl;
            Complex expected = -(sk * exp(Complex(2) * L.eta(l) * (t + wl)));
            detail::record(l == 1 ? sig_q1 : sig_q2, relative_residual(L.sigma_kernel(t + shift), expected));
            detail::record(l == 1 ? wp_p1 : wp_p2, relative_residual(L.wp_kernel(t + shift), pk));
        }
    }
    for (auto* c : {&de, &sig_par, &zeta_par, &wp_par, &sig_q1, &sig_q2, &wp_p1, &wp_p2}) c->samples = points;
    out = {de, legendre, sig_par, zeta_par, wp_par, sig_q1, sig_q2, wp_p1, wp_p2};
    // e1 + e2 + e3 = 0 at the half periods.
    IdentityCheck roots = make("half_period_sum");
    Complex sum = L.wp(L.omega1()) + L.wp(L.omega2()) + L.wp(L.omega1() + L.omega2());
    roots.max_residual = abs_double(sum) / std::max(1.0, abs_double(L.wp(L.omega1())));
    roots.samples = 1;
    out.push_back(roots);
    return out;
}

struct BakerAkhiezerChecks {
    std::vector<IdentityCheck> checks;
    const IdentityCheck& get(const std::string& name) const {
        for (const auto& c : checks)
            if (c.name == name) return c;
        throw PreconditionError("no identity named " + name);
    }
};

// Random (s, x, y) in the period cell, kept away from the poles of every term.
inline BakerAkhiezerChecks baker_akhiezer_identities(const Lattice& L, std::uint64_t seed = 5, int points = 50,
                                                     double tolerance = 1e-35) {
    const unsigned bits = L.precision_bits();
    PrecisionScope scope(bits);
    const double w = abs_double(L.omega1());
    auto make = [&](const std::string& name) { return IdentityCheck{name, 0, tolerance, points}; };
    IdentityCheck minus = make("phi_minus"), add = make("phi_add"), add2_p = make("phi_add2[wp'(s)]"),
                  add2_m = make("phi_add2[-wp'(s)]"), add2_lit = make("phi_add2[wp(s)]"),
                  logd = make("log_derivative[wp'(t)-wp'(s)]"), logd_plus = make("log_derivative[wp'(t)+wp'(s)]"),
                  bdet_p = make("abelian_B[wp'(s)]"), bdet_m = make("abelian_B[-wp'(s)]"),
                  bdet_lit = make("abelian_B[wp(s)]"), bdet_inv = make("abelian_B[1/(wp(s)-wp(u_i))]");
    Rng rng(seed);
    int taken = 0;
    auto far = [&](const Complex& t) { return L.distance_to_lattice(t) > 0.05 * w; };
    while (taken < points) {
        Complex s = detail::cell_point(L, rng), x = detail::cell_point(L, rng), y = detail::cell_point(L, rng);
        const Complex probes[] = {s, x, y, x + y, x - y, s - x, s + x, s - y, s + y, s - x - y};
        bool ok = true;
        for (const auto& p : probes) ok = ok && far(p);
        if (!ok) continue;
        ++taken;
        BakerAkhiezer phi(L, s);
        Complex px = phi(x), py = phi(y), pxy = phi(x + y);
        Complex wx = L.wp(x), wy = L.wp(y);
        detail::record(minus, relative_residual(px * phi(-x), phi.wp_s() - wx));
        Complex dx = phi.derivative(x), dy = phi.derivative(y);
        detail::record(add, relative_residual(pxy * (wy - wx), dx * py - dy * px));
        Complex lhs2 = pxy / (px * py);
        detail::record(add2_p, relative_residual(lhs2, addition_determinant(phi, x, y, CornerReading::wp_prime_s)));
        detail::record(add2_m, relative_residual(lhs2, addition_determinant(phi, x, y, CornerReading::minus_wp_prime_s)));
        detail::record(add2_lit, relative_residual(lhs2, addition_determinant(phi, x, y, CornerReading::wp_s)));
        Complex logderiv = dx / px;
        Complex half(ratio(1, 2));
        detail::record(logd, relative_residual(logderiv, half * (L.wp_prime(x) - phi.wp_prime_s()) / (wx - phi.wp_s())));
        detail::record(logd_plus,
                       relative_residual(logderiv, half * (L.wp_prime(x) + phi.wp_prime_s()) / (wx - phi.wp_s())));
        // B(u_i, u_k) with u_i = y, u_k = x.
        Complex b = abelian_B(phi, y, x);
        Complex pre = phi.wp_s() - wy;
        detail::record(bdet_p, relative_residual(b, pre * addition_determinant(phi, x, -y, CornerReading::wp_prime_s)));
        detail::record(bdet_m,
                       relative_residual(b, pre * addition_determinant(phi, x, -y, CornerReading::minus_wp_prime_s)));
        detail::record(bdet_lit, relative_residual(b, pre * addition_determinant(phi, x, -y, CornerReading::wp_s)));
        detail::record(bdet_inv,
                       relative_residual(b, addition_determinant(phi, x, -y, CornerReading::minus_wp_prime_s) / pre));
    }
    return {{minus, add, add2_p, add2_m, add2_lit, logd, logd_plus, bdet_p, bdet_m, bdet_lit, bdet_inv}};
}

inline nlohmann::json identities_to_json(const std::vector<IdentityCheck>& checks) {
    auto arr = nlohmann::json::array();
    for (const auto& c : checks)
        arr.push_back({{"name", c.name},
                       {"max_residual", c.max_residual},
                       {"tolerance", c.tolerance},
                       {"samples", c.samples},
                       {"passed", c.passed()}});
    return arr;
}

} // namespace hirz
