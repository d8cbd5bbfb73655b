#pragma once

// Numeric and exact checks of  sum_k prod_{i != k} 1/f(u_i - u_k) = C.

#include <algorithm>
#include <cfloat>
#include <cmath>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "elliptic.hpp"
#include "errors.hpp"
#include "genus.hpp"
#include "multipoly.hpp"
#include "numeric.hpp"
#include "symmetric.hpp"

namespace hirz {

inline constexpr std::uint64_t kDefaultSeed = 20240601;

enum class Verdict { holds, fails, inconclusive };

inline const char* verdict_name(Verdict v) {
    switch (v) {
    case Verdict::holds: return "holds";
    case Verdict::fails: return "fails";
    case Verdict::inconclusive: return "inconclusive";
    }
    return "?";
}

inline Verdict verdict_from_name(const std::string& s) {
    if (s == "holds") return Verdict::holds;
    if (s == "fails") return Verdict::fails;
    if (s == "inconclusive") return Verdict::inconclusive;
    throw PreconditionError("unknown verdict: " + s);
}

inline int exit_code(Verdict v) {
    switch (v) {
    case Verdict::holds: return 0;
    case Verdict::fails: return 1;
    case Verdict::inconclusive: return 2;
    }
    return 3;
}

struct VerifyConfig {
    int points = 200;
    std::uint64_t seed = kDefaultSeed;
    std::optional<double> radius;  // overrides the genus default
    double pass_threshold = 1e-30;
    double fail_threshold = 1e-5;
};

struct MonodromyReport {
    Complex eps[2];
    double deviation[2] = {0, 0};  // |eps_l^{n+1} - 1|
    std::optional<int> order;
    friend bool operator==(const MonodromyReport& a, const MonodromyReport& b) {
        return a.eps[0] == b.eps[0] && a.eps[1] == b.eps[1] && a.deviation[0] == b.deviation[0] &&
               a.deviation[1] == b.deviation[1] && a.order == b.order;
    }
};

struct VerificationReport {
    Verdict verdict = Verdict::inconclusive;
    Complex C_estimate;
    std::optional<MultiPoly> C_exact;
    double residual_max = 0;
    double residual_median = 0;
    int samples_used = 0;
    int samples_rejected = 0;
    std::optional<MonodromyReport> monodromy;
    std::uint64_t seed = 0;
    unsigned precision_bits = 0;
    int n = 0;
    nlohmann::json spec;
    std::string diagnostic;

    friend bool operator==(const VerificationReport& a, const VerificationReport& b) {
        return a.verdict == b.verdict && a.C_estimate == b.C_estimate && a.C_exact == b.C_exact &&
               a.residual_max == b.residual_max && a.residual_median == b.residual_median &&
               a.samples_used == b.samples_used && a.samples_rejected == b.samples_rejected &&
               a.monodromy == b.monodromy && a.seed == b.seed && a.precision_bits == b.precision_bits &&
               a.n == b.n && a.spec == b.spec && a.diagnostic == b.diagnostic;
    }
};

inline double clamp_double(const Real& x) {
    double d = to_double(x);
    if (!std::isfinite(d)) return DBL_MAX;
    return d;
}

// F(u) for one tuple.
inline Complex hirzebruch_sum(const GenusFunction& f, const std::vector<Complex>& u) {
    const std::size_t m = u.size();
    Complex total(0);
    for (std::size_t k = 0; k < m; ++k) {
        Complex prod(1);
        for (std::size_t i = 0; i < m; ++i)
            if (i != k) prod /= f(u[i] - u[k]);
        total += prod;
    }
    return total;
}

inline nlohmann::json spec_echo(const GenusFunction& f) {
    nlohmann::json j = genus_spec_to_json(f.spec);
    if (!f.transform.is_null()) j["transform"] = f.transform;
    return j;
}

namespace detail {

inline Real median_of(std::vector<Real> v) {
    std::sort(v.begin(), v.end());
    const std::size_t m = v.size();
    if (m % 2 == 1) return v[m / 2];
    return (v[m / 2 - 1] + v[m / 2]) / 2;
}

} // namespace detail

inline VerificationReport verify_numeric(const GenusFunction& f, int n, const VerifyConfig& config = {}) {
    if (n < 1) throw PreconditionError("n must be at least 1");
    const unsigned bits = f.precision_bits;
    PrecisionScope scope(bits);
    VerificationReport rep;
    rep.seed = config.seed;
    rep.precision_bits = bits;
    rep.n = n;
    rep.spec = spec_echo(f);
    const double R = config.radius ? *config.radius : f.sampling_radius;
    Rng rng(config.seed);
    std::vector<Complex> values;
    const int max_attempts = 10 * config.points;
    int attempts = 0;
    while (static_cast<int>(values.size()) < config.points && attempts < max_attempts) {
        ++attempts;
        std::vector<Complex> u;
        for (int i = 0; i <= n; ++i) {
            double r = R * std::sqrt(rng.uniform()), th = 2 * M_PI * rng.uniform();
            u.push_back(Complex::from_double(r * std::cos(th), r * std::sin(th)));
        }
        double min_gap = INFINITY;
        for (int i = 0; i <= n; ++i)
            for (int k = i + 1; k <= n; ++k) min_gap = std::min(min_gap, abs_double(u[i] - u[k]));
        if (min_gap < 1e-3 * R) {
            ++rep.samples_rejected;
            continue;
        }
        try {
            values.push_back(hirzebruch_sum(f, u));
        } catch (const PoleError&) {
            ++rep.samples_rejected;
        } catch (const OutsideReliabilityRadius&) {
            ++rep.samples_rejected;
        } catch (const std::domain_error&) {
            ++rep.samples_rejected;
        }
    }
    rep.samples_used = static_cast<int>(values.size());
    if (values.empty() || rep.samples_rejected > 0.9 * attempts) {
        rep.verdict = Verdict::inconclusive;
        rep.C_estimate = Complex(0);
        rep.diagnostic = "more than 90% of sample tuples rejected near poles";
        return rep;
    }
    std::vector<Real> re, im;
    for (const auto& v : values) {
        re.push_back(v.real());
        im.push_back(v.imag());
    }
    rep.C_estimate = Complex(detail::median_of(re), detail::median_of(im));
    std::vector<Real> dev;
    Real worst = 0;
    for (const auto& v : values) {
        Real d = abs(v - rep.C_estimate);
        worst = std::max(worst, d);
        dev.push_back(d);
    }
    rep.residual_max = clamp_double(worst);
    rep.residual_median = clamp_double(detail::median_of(dev));
    if (rep.residual_max < config.pass_threshold) rep.verdict = Verdict::holds;
    else if (rep.residual_max > config.fail_threshold) rep.verdict = Verdict::fails;
    else rep.verdict = Verdict::inconclusive;
    return rep;
}

// ---------------------------------------------------------------------------
// Exact Todd identity

inline LayoutPtr todd_parameter_layout() {
    static const LayoutPtr layout =
        std::make_shared<const VarLayout>(std::vector<std::string>{}, std::vector<std::string>{"q", "eta"});
    return layout;
}

// sum_{k=0}^n (q + eta)^k (q - eta)^{n-k}
inline MultiPoly expected_C_todd(int n) {
    auto layout = todd_parameter_layout();
    MultiPoly q = MultiPoly::variable(layout, "q"), eta = MultiPoly::variable(layout, "eta");
    MultiPoly plus = q + eta, minus = q - eta;
    MultiPoly sum(layout);
    for (int k = 0; k <= n; ++k) sum += plus.pow(static_cast<unsigned>(k)) * minus.pow(static_cast<unsigned>(n - k));
    return sum;
}

template <class T>
T expected_C_todd(const T& q, const T& eta, int n) {
    T plus = q + eta, minus = q - eta;
    T sum = T(0);
    for (int k = 0; k <= n; ++k) {
        T term = T(1);
        for (int j = 0; j < k; ++j) term = term * plus;
        for (int j = 0; j < n - k; ++j) term = term * minus;
        sum = sum + term;
    }
    return sum;
}

struct ExactToddResult {
    MultiPoly C;
    bool holds = false;
    bool matches_expected = false;
    std::string counterexample;
};

// After q_i = coth(eta u_i) the equation becomes P = C * Delta(q_0..q_n) with
//   P = sum_k (-1)^k prod_{i != k} (q q_k - q q_i + eta - eta q_i q_k) Delta_{k-hat}.
inline MultiPoly todd_skew_polynomial(int n) {
    auto layout = VarLayout::make(n, {"q", "eta"}, "q");
    const auto qi = [&](int i) { return MultiPoly::variable(layout, static_cast<std::size_t>(i)); };
    const MultiPoly q = MultiPoly::variable(layout, "q"), eta = MultiPoly::variable(layout, "eta");
    MultiPoly total(layout);
    for (int k = 0; k <= n; ++k) {
        MultiPoly term = MultiPoly::constant(layout, k % 2 == 0 ? 1 : -1);
        for (int i = 0; i <= n; ++i)
            if (i != k) term *= q * qi(k) - q * qi(i) + eta - eta * qi(i) * qi(k);
        for (int i = 0; i <= n; ++i)
            for (int j = i + 1; j <= n; ++j)
                if (i != k && j != k) term *= qi(i) - qi(j);
        total += term;
    }
    return total;
}

inline ExactToddResult exact_verify_todd(int n) {
    if (n < 1 || n > 7) throw PreconditionError("exact Todd check supports 1 <= n <= 7");
    ExactToddResult out;
    MultiPoly p = todd_skew_polynomial(n);
    try {
        auto red = skew_symmetric_reduce(p);
        if (!red.exact) {
            out.counterexample = "division by the Vandermonde product left a remainder";
            out.C = red.quotient;
            return out;
        }
        if (red.quotient.depends_on_alternating()) {
            out.counterexample = "quotient depends on the q_i: " + red.quotient.to_string();
            out.C = red.quotient;
            return out;
        }
        out.C = red.quotient.relabeled(todd_parameter_layout());
        out.holds = true;
        out.matches_expected = out.C == expected_C_todd(n);
    } catch (const PreconditionError& e) {
        out.counterexample = e.what();
        out.C = MultiPoly(todd_parameter_layout());
    }
    return out;
}

inline VerificationReport exact_todd_report(int n) {
    auto res = exact_verify_todd(n);
    VerificationReport rep;
    rep.verdict = res.holds ? Verdict::holds : Verdict::fails;
    rep.C_exact = res.C;
    rep.C_estimate = Complex(0);
    rep.n = n;
    rep.spec = {{"type", "todd"}, {"mode", "exact"}};
    rep.diagnostic = res.counterexample;
    return rep;
}

// ---------------------------------------------------------------------------
// Abelian coefficients B(u_i, u_k) = Phi(u_k - u_i) Phi(u_i) / Phi(u_k)

inline double relative_residual(const Complex& a, const Complex& b) {
    double scale = std::max({1.0, abs_double(a), abs_double(b)});
    return abs_double(a - b) / scale;
}

inline Complex det3(const Complex m[3][3]) {
    return m[0][0] * (m[1][1] * m[2][2] - m[1][2] * m[2][1]) - m[0][1] * (m[1][0] * m[2][2] - m[1][2] * m[2][0]) +
           m[0][2] * (m[1][0] * m[2][1] - m[1][1] * m[2][0]);
}

enum class CornerReading { wp_prime_s, minus_wp_prime_s, wp_s };

inline const char* corner_name(CornerReading c) {
    switch (c) {
    case CornerReading::wp_prime_s: return "wp'(s)";
    case CornerReading::minus_wp_prime_s: return "-wp'(s)";
    case CornerReading::wp_s: return "wp(s)";
    }
    return "?";
}

inline Complex corner_value(const BakerAkhiezer& phi, CornerReading c) {
    switch (c) {
    case CornerReading::wp_prime_s: return phi.wp_prime_s();
    case CornerReading::minus_wp_prime_s: return -phi.wp_prime_s();
    case CornerReading::wp_s: return phi.wp_s();
    }
    return Complex(0);
}

// -1/2 det[1 1 1; wp(x) wp(y) wp(s); wp'(x) wp'(y) corner] / det[1 1 1; wp wp wp; wp^2 wp^2 wp^2]
inline Complex addition_determinant(const BakerAkhiezer& phi, const Complex& x, const Complex& y, CornerReading c) {
    const Lattice& L = phi.lattice();
    Complex px = L.wp(x), py = L.wp(y), ps = phi.wp_s();
    Complex num[3][3] = {{Complex(1), Complex(1), Complex(1)}, {px, py, ps}, {L.wp_prime(x), L.wp_prime(y), corner_value(phi, c)}};
    Complex den[3][3] = {{Complex(1), Complex(1), Complex(1)}, {px, py, ps}, {px * px, py * py, ps * ps}};
    return -(det3(num) / det3(den)) / Complex(2);
}

inline Complex abelian_B(const BakerAkhiezer& phi, const Complex& ui, const Complex& uk) {
    return phi(uk - ui) * phi(ui) / phi(uk);
}

struct AbelianReport {
    double periodic_ui[2] = {0, 0};
    double periodic_uk[2] = {0, 0};
    double product_periodic = 0;          // A_k = prod_{i != k} B_{i,k}, n = 2, every k
    double determinant[3] = {0, 0, 0};    // by CornerReading, prefactor wp(s) - wp(u_i)
    double inverted_prefactor = 0;        // prefactor 1/(wp(s) - wp(u_i)), corner -wp'(s)
    double limit_residual = 0;            // |h B(h, u) - 1| at the smallest h
    int samples = 0;
    double tolerance = 1e-35;

    bool periodic_ok() const {
        return std::max({periodic_ui[0], periodic_ui[1], periodic_uk[0], periodic_uk[1], product_periodic}) < tolerance;
    }
};

inline AbelianReport abelian_coefficient_check(const Complex& s, const Lattice& lattice, std::uint64_t seed = 11,
                                               int points = 50) {
    const unsigned bits = lattice.precision_bits();
    PrecisionScope scope(bits);
    BakerAkhiezer phi(lattice, s);
    Rng rng(seed);
    AbelianReport rep;
    const double w = abs_double(lattice.omega1());
    auto random_point = [&]() {
        double x = rng.uniform(-0.5, 0.5), y = rng.uniform(-0.5, 0.5);
        return Complex(Real(2 * x)) * lattice.omega1() + Complex(Real(2 * y)) * lattice.omega2();
    };
    auto far = [&](const Complex& t) { return lattice.distance_to_lattice(t) > 0.05 * w; };
    while (rep.samples < points) {
        Complex ui = random_point(), uk = random_point(), uj = random_point();
        if (!far(ui) || !far(uk) || !far(uj) || !far(uk - ui) || !far(uj - ui) || !far(uj - uk)) continue;
        if (!far(s - uk) || !far(s - ui) || !far(s - uj) || !far(s - (uk - ui)) || !far(s + ui)) continue;
        if (!far(s - (uj - ui)) || !far(s - (uk - uj)) || !far(s - (ui - uk)) || !far(s - (ui - uj)) ||
            !far(s - (uj - uk)))
            continue;
        ++rep.samples;
        Complex b = abelian_B(phi, ui, uk);
        for (int l = 1; l <= 2; ++l) {
            Complex sh = Complex(2) * lattice.omega(l);
            rep.periodic_ui[l - 1] = std::max(rep.periodic_ui[l - 1], relative_residual(abelian_B(phi, ui + sh, uk), b));
            rep.periodic_uk[l - 1] = std::max(rep.periodic_uk[l - 1], relative_residual(abelian_B(phi, ui, uk + sh), b));
        }
        // A_k for the triple (u_0, u_1, u_2) = (ui, uk, uj), shifting u_0.
        std::vector<Complex> u = {ui, uk, uj};
        for (int k = 0; k < 3; ++k) {
            auto a_k = [&](const std::vector<Complex>& v) {
                Complex prod(1);
                for (int i = 0; i < 3; ++i)
                    if (i != k) prod *= abelian_B(phi, v[static_cast<std::size_t>(i)], v[static_cast<std::size_t>(k)]);
                return prod;
            };
            for (int l = 1; l <= 2; ++l) {
                auto v = u;
                v[0] += Complex(2) * lattice.omega(l);
                rep.product_periodic = std::max(rep.product_periodic, relative_residual(a_k(v), a_k(u)));
            }
        }
        // B = (wp(s) - wp(u_i)) Phi(u_k - u_i)/(Phi(u_k) Phi(-u_i)), then the addition determinant at (u_k, -u_i).
        const Complex gap = phi.wp_s() - lattice.wp(ui);
        for (int c = 0; c < 3; ++c) {
            Complex det = addition_determinant(phi, uk, -ui, static_cast<CornerReading>(c)) * gap;
            rep.determinant[c] = std::max(rep.determinant[c], relative_residual(det, b));
        }
        Complex inverted = addition_determinant(phi, uk, -ui, CornerReading::minus_wp_prime_s) / gap;
        rep.inverted_prefactor = std::max(rep.inverted_prefactor, relative_residual(inverted, b));
    }
    // h B(h, u) -> 1 as h -> 0, from the simple pole of Phi at 0.
    Complex u = Complex::from_double(0.37, 0.21) * lattice.omega1();
    Complex h(Real(1));
    double last = 0;
    for (int k = 0; k < 30; ++k) {
        h /= Real(10);
        // h Phi(h) from sigma directly: Phi itself refuses arguments this close to the pole.
        Complex h_phi = lattice.sigma(s - h) * h / (lattice.sigma(s) * lattice.sigma(h)) * exp(phi.zeta_s() * h);
        last = abs_double(h_phi * phi(u - h) / phi(u) - Complex(1));
    }
    rep.limit_residual = last;
    return rep;
}

// ---------------------------------------------------------------------------
// Monodromy criterion for non-degenerate genera

struct NondegenerateReport {
    MonodromyFactors factors;
    double deviation[2] = {0, 0};
    bool candidate = false;
    std::optional<int> order;
    VerificationReport verification;
    bool agreement = false;
};

inline NondegenerateReport nondegenerate_criterion(const GenusFunction& f, int n, const VerifyConfig& config = {},
                                                   double tolerance = 1e-30) {
    if (!f.krichever) throw PreconditionError("criterion needs a Krichever or level-d genus");
    PrecisionScope scope(f.precision_bits);
    NondegenerateReport rep;
    rep.factors = monodromy_factors(f, config.seed);
    for (int l = 0; l < 2; ++l) rep.deviation[l] = abs_double(pow(rep.factors.analytic[l], n + 1) - Complex(1));
    rep.candidate = rep.deviation[0] < tolerance && rep.deviation[1] < tolerance;
    rep.order = monodromy_order(rep.factors.analytic[0], rep.factors.analytic[1], tolerance);
    rep.verification = verify_numeric(f, n, config);
    MonodromyReport m;
    m.eps[0] = rep.factors.analytic[0];
    m.eps[1] = rep.factors.analytic[1];
    m.deviation[0] = rep.deviation[0];
    m.deviation[1] = rep.deviation[1];
    m.order = rep.order;
    rep.verification.monodromy = m;
    const bool holds = rep.verification.verdict == Verdict::holds;
    rep.agreement = rep.candidate == holds;
    if (holds && abs_double(rep.verification.C_estimate) >= config.pass_threshold) rep.agreement = false;
    return rep;
}

// ---------------------------------------------------------------------------
// JSON

inline nlohmann::json report_to_json(const VerificationReport& r) {
    nlohmann::json j;
    j["verdict"] = verdict_name(r.verdict);
    if (r.C_exact) {
        j["C"] = r.C_exact->to_string();
        j["C_polynomial"] = *r.C_exact;
    } else {
        j["C"] = complex_to_json(r.C_estimate);
    }
    j["residual_max"] = r.residual_max;
    j["residual_median"] = r.residual_median;
    j["samples"] = r.samples_used;
    j["samples_rejected"] = r.samples_rejected;
    j["seed"] = r.seed;
    j["precision_bits"] = r.precision_bits;
    j["n"] = r.n;
    j["spec"] = r.spec;
    if (r.monodromy) {
        nlohmann::json m;
        m["eps1"] = complex_to_json(r.monodromy->eps[0]);
        m["eps2"] = complex_to_json(r.monodromy->eps[1]);
        m["deviation"] = {r.monodromy->deviation[0], r.monodromy->deviation[1]};
        if (r.monodromy->order) m["order"] = *r.monodromy->order;
        j["monodromy"] = m;
    }
    if (!r.diagnostic.empty()) j["diagnostic"] = r.diagnostic;
    return j;
}

inline VerificationReport report_from_json(const nlohmann::json& j) {
    VerificationReport r;
    r.precision_bits = j.at("precision_bits").get<unsigned>();
    PrecisionScope scope(r.precision_bits ? r.precision_bits : kDefaultPrecisionBits);
    r.verdict = verdict_from_name(j.at("verdict").get<std::string>());
    if (j.contains("C_polynomial")) {
        r.C_exact = multipoly_from_json(j.at("C_polynomial"));
        r.C_estimate = Complex(0);
    } else {
        r.C_estimate = complex_from_json(j.at("C"));
    }
    r.residual_max = j.at("residual_max").get<double>();
    r.residual_median = j.at("residual_median").get<double>();
    r.samples_used = j.at("samples").get<int>();
    r.samples_rejected = j.value("samples_rejected", 0);
    r.seed = j.at("seed").get<std::uint64_t>();
    r.n = j.at("n").get<int>();
    r.spec = j.at("spec");
    if (j.contains("monodromy")) {
        const auto& m = j.at("monodromy");
        MonodromyReport mr;
        mr.eps[0] = complex_from_json(m.at("eps1"));
        mr.eps[1] = complex_from_json(m.at("eps2"));
        mr.deviation[0] = m.at("deviation").at(0).get<double>();
        mr.deviation[1] = m.at("deviation").at(1).get<double>();
        if (m.contains("order")) mr.order = m.at("order").get<int>();
        r.monodromy = mr;
    }
    r.diagnostic = j.value("diagnostic", std::string{});
    return r;
}

} // namespace hirz
