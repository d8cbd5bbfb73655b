#pragma once

// Degenerate genera f = e^{lambda t}/(q + mu coth(mu t)).
//
// After mu = 1 scaling and x_i = e^{2 u_i}, the equation becomes
//   sum_k (1+q)^k (1-q)^{n-k} L(row_k) = C L(target)
// where row_k is the staircase (n, ..., 0) with the entry n-k raised by
// (n+1) lambda/2, and target is (n + lambda/2, ..., lambda/2).  A term
// L(x^E) vanishes iff E has a repeated entry and otherwise equals a signed
// Schur-Puiseux function of sorted(E).
//
// q = -1 keeps row 0 only ("b = 0"), q = +1 keeps row n only ("a = 0").

#include <algorithm>
#include <set>
#include <string>
#include <vector>

#include "genus.hpp"
#include "symmetric.hpp"
#include "verifier.hpp"

namespace hirz {

enum class DegenerateCase { generic, b_zero, a_zero };
enum class CFlag { zero, nonzero, any };

inline const char* case_name(DegenerateCase c) {
    switch (c) {
    case DegenerateCase::generic: return "generic";
    case DegenerateCase::b_zero: return "b=0";
    case DegenerateCase::a_zero: return "a=0";
    }
    return "?";
}

inline const char* cflag_name(CFlag c) {
    switch (c) {
    case CFlag::zero: return "C=0";
    case CFlag::nonzero: return "C!=0";
    case CFlag::any: return "C any";
    }
    return "?";
}

// The q value that selects each case after scaling mu to 1 (generic: any other q).
inline Rational case_q(DegenerateCase c) {
    switch (c) {
    case DegenerateCase::b_zero: return -1;
    case DegenerateCase::a_zero: return 1;
    case DegenerateCase::generic: return ratio(1, 3);
    }
    return 0;
}

struct AffineExponent {
    Rational constant, slope;  // constant + slope * lambda
    Rational at(const Rational& lambda) const { return constant + slope * lambda; }
};

inline std::vector<AffineExponent> hs_row(int n, int k) {
    std::vector<AffineExponent> row;
    row.push_back({Rational(n - k), ratio(n + 1, 2)});
    for (int j = n; j >= 0; --j)
        if (j != n - k) row.push_back({Rational(j), Rational(0)});
    return row;
}

inline std::vector<AffineExponent> hs_target(int n) {
    std::vector<AffineExponent> t;
    for (int j = n; j >= 0; --j) t.push_back({Rational(j), ratio(1, 2)});
    return t;
}

inline std::vector<int> retained_rows(int n, DegenerateCase c) {
    if (c == DegenerateCase::b_zero) return {0};
    if (c == DegenerateCase::a_zero) return {n};
    std::vector<int> all;
    for (int k = 0; k <= n; ++k) all.push_back(k);
    return all;
}

inline ExponentMultiset evaluate_row(const std::vector<AffineExponent>& row, const Rational& lambda) {
    ExponentMultiset m;
    for (const auto& e : row) m.entries.push_back(e.at(lambda));
    return m;
}

struct HsAnalysis {
    bool admissible = false;
    CFlag c = CFlag::zero;
    int matching_rows = 0;
};

inline HsAnalysis analyze_lambda(int n, DegenerateCase c, const Rational& lambda) {
    const auto target = schur_puiseux_signature(evaluate_row(hs_target(n), lambda));
    HsAnalysis out;
    out.admissible = true;
    for (int k : retained_rows(n, c)) {
        auto sig = schur_puiseux_signature(evaluate_row(hs_row(n, k), lambda));
        if (sig.is_zero) continue;
        if (sig.sorted != target.sorted) {
            out.admissible = false;
            return out;
        }
        ++out.matching_rows;
    }
    out.c = out.matching_rows == 0 ? CFlag::zero : out.matching_rows == 1 ? CFlag::nonzero : CFlag::any;
    return out;
}

struct AdmissibleLambda {
    Rational lambda;
    CFlag c;
};

// Candidates are the lambda values where two affine exponents coincide;
// anything admissible must create such a coincidence.
inline std::vector<AdmissibleLambda> classify_degenerate(int n, DegenerateCase c) {
    if (n < 1) throw PreconditionError("n must be at least 1");
    std::vector<AffineExponent> entries;
    std::vector<std::vector<AffineExponent>> rows;
    for (int k : retained_rows(n, c)) rows.push_back(hs_row(n, k));
    const auto target = hs_target(n);
    std::set<Rational> candidates;
    auto solve = [&](const AffineExponent& a, const AffineExponent& b) {
        if (a.slope != b.slope) candidates.insert(Rational((b.constant - a.constant) / (a.slope - b.slope)));
    };
    for (const auto& row : rows) {
        for (std::size_t i = 0; i < row.size(); ++i) {
            for (std::size_t j = i + 1; j < row.size(); ++j) solve(row[i], row[j]);
            for (const auto& t : target) solve(row[i], t);
        }
    }
    Rational bound = 0;
    for (const auto& l : candidates) bound = std::max(bound, Rational(abs(l)));
    if (analyze_lambda(n, c, bound + ratio(8, 7)).admissible)
        throw std::logic_error("equation admits a generic lambda; candidate analysis does not apply");
    std::vector<AdmissibleLambda> out;
    for (const auto& l : candidates) {
        auto a = analyze_lambda(n, c, l);
        if (a.admissible) out.push_back({l, a.c});
    }
    return out;
}

struct DegenerateCheck {
    VerificationReport report;
    DegenerateCase which = DegenerateCase::generic;
    bool limit_case = false;
    bool predicted_holds = false;
    std::optional<CFlag> predicted_c;
    bool agreement = false;
};

inline nlohmann::json degenerate_check_to_json(const DegenerateCheck& d) {
    nlohmann::json j = report_to_json(d.report);
    j["classifier"] = {{"case", d.limit_case ? "limit" : case_name(d.which)},
                       {"predicted", d.predicted_holds ? "holds" : "fails"},
                       {"agreement", d.agreement}};
    if (d.predicted_c) j["classifier"]["C"] = cflag_name(*d.predicted_c);
    return j;
}

// Numeric verdict for the degenerate function next to the multiset prediction.
inline DegenerateCheck check_degenerate(int n, const Scalar& lambda, const Scalar& q, const Scalar& mu,
                                        const VerifyConfig& config = {}, unsigned bits = kDefaultPrecisionBits,
                                        int order = kDefaultOrder) {
    DegenerateCheck out;
    PrecisionScope scope(bits);
    const double tol = config.pass_threshold;
    if (scalar_is_zero(mu)) {
        out.limit_case = true;
        GenusFunction f = sing_limit(lambda, q, order, bits);
        out.report = verify_numeric(f, n, config);
        out.predicted_holds = scalar_is_zero(lambda);
        out.predicted_c = CFlag::any;
    } else {
        GenusFunction f = sing_krichever(lambda, q, mu, order, bits);
        out.report = verify_numeric(f, n, config);
        auto ql = as_rational(lambda), qq = as_rational(q), qm = as_rational(mu);
        std::optional<Rational> lam_scaled, q_scaled;
        if (ql && qq && qm) {
            lam_scaled = Rational(*ql / *qm);
            q_scaled = Rational(*qq / *qm);
        }
        Complex lc = to_complex(lambda) / to_complex(mu), qc = to_complex(q) / to_complex(mu);
        auto near = [&](const Complex& z, const Rational& r) { return abs_double(z - Complex(r)) < tol; };
        if (q_scaled ? *q_scaled == -1 : near(qc, Rational(-1))) out.which = DegenerateCase::b_zero;
        else if (q_scaled ? *q_scaled == 1 : near(qc, Rational(1))) out.which = DegenerateCase::a_zero;
        else out.which = DegenerateCase::generic;
        for (const auto& entry : classify_degenerate(n, out.which)) {
            bool match = lam_scaled ? *lam_scaled == entry.lambda : near(lc, entry.lambda);
            if (match) {
                out.predicted_holds = true;
                out.predicted_c = entry.c;
            }
        }
    }
    const bool holds = out.report.verdict == Verdict::holds;
    out.agreement = holds == out.predicted_holds;
    if (holds && out.predicted_c) {
        double cabs = abs_double(out.report.C_estimate);
        if (*out.predicted_c == CFlag::zero && cabs >= tol) out.agreement = false;
        if (*out.predicted_c == CFlag::nonzero && cabs <= config.fail_threshold) out.agreement = false;
    }
    return out;
}

} // namespace hirz
