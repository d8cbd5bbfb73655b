#pragma once

// Command-line front end: expand, verify, classify, monodromy, identities.
// Human-readable text goes to stdout; --json writes the machine-readable
// record to a file ("-" for stdout in place of the text).

#include <fstream>
#include <iomanip>
#include <optional>
#include <ostream>
#include <sstream>
#include <set>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "degenerate.hpp"
#include "genus.hpp"
#include "identities.hpp"
#include "verifier.hpp"

namespace hirz::cli {

enum class Command { expand, verify, classify, monodromy, identities };

struct RunConfig {
    Command command = Command::verify;
    std::optional<GenusSpec> spec;
    int n = 1;
    int points = 200;
    unsigned precision_bits = kDefaultPrecisionBits;
    std::uint64_t seed = kDefaultSeed;
    int order = kDefaultOrder;
    std::string json_path;
    bool confirm = false;
    bool exact = false;
};

enum ExitCode { kHolds = 0, kFails = 1, kInconclusive = 2, kError = 3 };

namespace detail {

inline std::vector<std::string> split(const std::string& s) {
    std::vector<std::string> out;
    std::stringstream ss(s);
    std::string item;
    while (std::getline(ss, item, ',')) out.push_back(item);
    return out;
}

inline std::vector<Rational> rationals(const std::string& s, std::size_t min, std::size_t max, const char* flag) {
    auto parts = split(s);
    if (parts.size() < min || parts.size() > max)
        throw PreconditionError(std::string("wrong number of values for ") + flag);
    std::vector<Rational> out;
    for (const auto& p : parts) out.push_back(parse_rational(p));
    return out;
}

inline Complex rational_complex(const Rational& re, const Rational& im) {
    return Complex(real_from_rational(re), real_from_rational(im));
}

inline void emit(const RunConfig& cfg, const nlohmann::json& j, const std::string& text, std::ostream& out) {
    if (cfg.json_path == "-") {
        out << j.dump(2) << "\n";
        return;
    }
    out << text;
    if (!cfg.json_path.empty()) {
        std::ofstream file(cfg.json_path);
        if (!file) throw std::runtime_error("cannot write " + cfg.json_path);
        file << j.dump(2) << "\n";
    }
}

inline std::string header(const RunConfig& cfg) {
    std::ostringstream s;
    s << "seed=" << cfg.seed << " precision_bits=" << cfg.precision_bits << "\n";
    return s.str();
}

inline std::string short_complex(const Complex& z) {
    std::ostringstream s;
    s << std::setprecision(17) << to_double(z.real()) << (z.imag() < 0 ? " - " : " + ")
      << std::abs(to_double(z.imag())) << "i";
    return s.str();
}

inline std::string report_text(const VerificationReport& r) {
    std::ostringstream s;
    s << "verdict: " << verdict_name(r.verdict) << "\n";
    if (r.C_exact) s << "C = " << r.C_exact->to_string() << "\n";
    else s << "C = " << short_complex(r.C_estimate) << "\n";
    s << "residual_max = " << r.residual_max << "  residual_median = " << r.residual_median << "\n";
    s << "samples = " << r.samples_used << "  rejected = " << r.samples_rejected << "  n = " << r.n << "\n";
    if (r.monodromy) {
        s << "eps1 = " << short_complex(r.monodromy->eps[0]) << "  eps2 = " << short_complex(r.monodromy->eps[1])
          << "\n|eps^(n+1) - 1| = " << r.monodromy->deviation[0] << ", " << r.monodromy->deviation[1] << "\n";
        if (r.monodromy->order) s << "monodromy order = " << *r.monodromy->order << "\n";
    }
    if (!r.diagnostic.empty()) s << "diagnostic: " << r.diagnostic << "\n";
    return s.str();
}

} // namespace detail

inline GenusFunction build(const RunConfig& cfg) {
    if (!cfg.spec) throw PreconditionError("no genus given (use --todd, --krichever, --level-d, --sing, --sing-limit or --spec)");
    return make_genus(*cfg.spec, cfg.order, cfg.precision_bits);
}

inline int cmd_expand(const RunConfig& cfg, std::ostream& out) {
    GenusFunction f = build(cfg);
    PrecisionScope scope(cfg.precision_bits);
    nlohmann::json j;
    j["seed"] = cfg.seed;
    j["precision_bits"] = cfg.precision_bits;
    j["spec"] = spec_echo(f);
    std::ostringstream text;
    text << detail::header(cfg);
    if (f.exact_series) {
        const auto& fs = *f.exact_series;
        auto inv = invert(fs);
        j["f"] = series_to_json(fs);
        j["inverse"] = series_to_json(inv);
        text << "k  f_k  (1/f)_k\n";
        for (int k = inv.valuation(); k <= fs.order(); ++k) {
            text << k << "  " << (k >= fs.valuation() ? fs[k].get_str() : "-") << "  "
                 << (k <= inv.order() ? inv[k].get_str() : "-") << "\n";
        }
    } else {
        auto inv = invert(f.series);
        j["f"] = series_to_json(f.series);
        j["inverse"] = series_to_json(inv);
        text << "k  f_k  (1/f)_k\n";
        for (int k = inv.valuation(); k <= f.series.order(); ++k) {
            text << k << "  " << (k >= f.series.valuation() ? detail::short_complex(f.series[k]) : "-") << "  "
                 << (k <= inv.order() ? detail::short_complex(inv[k]) : "-") << "\n";
        }
    }
    detail::emit(cfg, j, text.str(), out);
    return kHolds;
}

inline int cmd_verify(const RunConfig& cfg, std::ostream& out) {
    VerificationReport rep;
    if (cfg.exact) {
        if (cfg.spec && !std::holds_alternative<ToddSpec>(*cfg.spec))
            throw PreconditionError("--exact applies to the Todd family only");
        rep = exact_todd_report(cfg.n);
        rep.seed = cfg.seed;
        rep.precision_bits = cfg.precision_bits;
    } else {
        GenusFunction f = build(cfg);
        VerifyConfig vc;
        vc.points = cfg.points;
        vc.seed = cfg.seed;
        if (f.krichever) rep = nondegenerate_criterion(f, cfg.n, vc).verification;
        else rep = verify_numeric(f, cfg.n, vc);
    }
    detail::emit(cfg, report_to_json(rep), detail::header(cfg) + detail::report_text(rep), out);
    return exit_code(rep.verdict);
}

struct ClassifyProbe {
    DegenerateCase which;
    Rational lambda;
    bool in_table;
    DegenerateCheck check;
};

inline int cmd_classify(const RunConfig& cfg, std::ostream& out) {
    const DegenerateCase cases[] = {DegenerateCase::generic, DegenerateCase::b_zero, DegenerateCase::a_zero};
    nlohmann::json j;
    j["seed"] = cfg.seed;
    j["precision_bits"] = cfg.precision_bits;
    j["n"] = cfg.n;
    std::ostringstream text;
    text << detail::header(cfg) << "n = " << cfg.n << "\n";
    std::vector<std::vector<AdmissibleLambda>> tables;
    for (auto c : cases) {
        auto table = classify_degenerate(cfg.n, c);
        tables.push_back(table);
        auto arr = nlohmann::json::array();
        text << case_name(c) << ":";
        for (const auto& e : table) {
            arr.push_back({{"lambda", e.lambda.get_str()}, {"C", cflag_name(e.c)}});
            text << "  lambda=" << e.lambda.get_str() << " (" << cflag_name(e.c) << ")";
        }
        text << "\n";
        j["table"][case_name(c)] = arr;
    }
    if (!cfg.confirm) {
        detail::emit(cfg, j, text.str(), out);
        return kHolds;
    }
    VerifyConfig vc;
    vc.points = cfg.points;
    vc.seed = cfg.seed;
    std::vector<ClassifyProbe> probes;
    for (std::size_t ci = 0; ci < 3; ++ci)
        for (const auto& e : tables[ci])
            probes.push_back({cases[ci], e.lambda, true,
                              check_degenerate(cfg.n, e.lambda, case_q(cases[ci]), Rational(1), vc,
                                               cfg.precision_bits, cfg.order)});
    // Off-grid negatives: odd sevenths, skipping the integers among them that may be table entries.
    Rng rng(cfg.seed);
    std::set<std::pair<int, Rational>> drawn;
    for (int i = 0; i < 5;) {
        DegenerateCase c = cases[static_cast<std::size_t>(i) % 3];
        Rational lambda = ratio(2 * rng.integer(-10, 10) + 1, 7);
        if (lambda.get_den() == 1 || !drawn.insert({static_cast<int>(c), lambda}).second) continue;
        ++i;
        probes.push_back({c, lambda, false,
                          check_degenerate(cfg.n, lambda, case_q(c), Rational(1), vc, cfg.precision_bits, cfg.order)});
    }
    bool all_agree = true;
    auto arr = nlohmann::json::array();
    text << "confirmation (q = -1, 1, 1/3 for b=0, a=0, generic; mu = 1):\n";
    for (const auto& p : probes) {
        const auto& r = p.check.report;
        all_agree = all_agree && p.check.agreement;
        text << "  " << case_name(p.which) << " lambda=" << p.lambda.get_str() << (p.in_table ? " table" : " probe")
             << ": " << verdict_name(r.verdict) << " C=" << detail::short_complex(r.C_estimate)
             << " residual=" << r.residual_max << (p.check.agreement ? " agree" : " DISAGREE") << "\n";
        auto pj = degenerate_check_to_json(p.check);
        pj["role"] = p.in_table ? "table" : "probe";
        arr.push_back(pj);
    }
    j["confirmation"] = arr;
    j["agreement"] = all_agree;
    text << (all_agree ? "all entries agree\n" : "classifier and verifier disagree\n");
    detail::emit(cfg, j, text.str(), out);
    return all_agree ? kHolds : kFails;
}

inline int cmd_monodromy(const RunConfig& cfg, std::ostream& out) {
    GenusFunction f = build(cfg);
    if (!f.krichever) throw PreconditionError("monodromy needs --krichever or --level-d");
    VerifyConfig vc;
    vc.points = cfg.points;
    vc.seed = cfg.seed;
    auto rep = nondegenerate_criterion(f, cfg.n, vc);
    nlohmann::json j = report_to_json(rep.verification);
    j["criterion"] = {{"candidate", rep.candidate},
                      {"agreement", rep.agreement},
                      {"numeric_eps1", complex_to_json(rep.factors.numeric[0])},
                      {"numeric_eps2", complex_to_json(rep.factors.numeric[1])},
                      {"analytic_vs_numeric", {rep.factors.dual_mismatch[0], rep.factors.dual_mismatch[1]}}};
    std::ostringstream text;
    text << detail::header(cfg) << detail::report_text(rep.verification)
         << "criterion: " << (rep.candidate ? "eps^(n+1) = 1" : "eps^(n+1) != 1")
         << (rep.agreement ? ", agrees with verifier" : ", DISAGREES with verifier") << "\n"
         << "|analytic - numeric| = " << rep.factors.dual_mismatch[0] << ", " << rep.factors.dual_mismatch[1] << "\n";
    detail::emit(cfg, j, text.str(), out);
    return rep.agreement ? exit_code(rep.verification.verdict) : kError;
}

// The Baker-Akhiezer identities in the forms that hold for the stated Phi_s.
inline bool is_reference_identity(const std::string& name) {
    static const std::vector<std::string> names = {"phi_minus", "phi_add", "phi_add2[-wp'(s)]",
                                                   "log_derivative[wp'(t)+wp'(s)]", "abelian_B[-wp'(s)]"};
    return std::find(names.begin(), names.end(), name) != names.end();
}

inline Lattice lattice_for(const RunConfig& cfg, const std::optional<Complex>& tau) {
    PrecisionScope scope(cfg.precision_bits);
    return tau ? Lattice::from_tau(*tau, cfg.precision_bits) : Lattice::square(cfg.precision_bits);
}

inline int cmd_identities(const RunConfig& cfg, const Lattice& lattice, std::ostream& out) {
    auto w = weierstrass_identities(lattice, cfg.seed, std::min(cfg.points, 100));
    auto ba = baker_akhiezer_identities(lattice, cfg.seed + 1, std::min(cfg.points, 50));
    bool ok = true;
    std::ostringstream text;
    text << detail::header(cfg);
    for (const auto& c : w) {
        ok = ok && c.passed();
        text << (c.passed() ? "pass  " : "FAIL  ") << c.name << "  " << c.max_residual << "\n";
    }
    auto ba_json = identities_to_json(ba.checks);
    for (std::size_t i = 0; i < ba.checks.size(); ++i) {
        const auto& c = ba.checks[i];
        const bool reference = is_reference_identity(c.name);
        if (reference) ok = ok && c.passed();
        ba_json[i]["role"] = reference ? "reference" : "variant";
        text << (c.passed() ? "pass  " : (reference ? "FAIL  " : "fail  ")) << c.name << "  " << c.max_residual
             << (reference ? "" : "  (variant reading)") << "\n";
    }
    nlohmann::json j;
    j["seed"] = cfg.seed;
    j["precision_bits"] = cfg.precision_bits;
    j["lattice"] = lattice_to_json(lattice);
    j["weierstrass"] = identities_to_json(w);
    j["baker_akhiezer"] = ba_json;
    detail::emit(cfg, j, text.str(), out);
    return ok ? kHolds : kFails;
}

// Parses argv and runs one command.  Errors print to err and return 3.
inline int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
    CLI::App app{"Hirzebruch functional equation toolkit"};
    app.require_subcommand(1);
    RunConfig cfg;
    std::string todd, krichever, level_d, sing, sing_limit, spec_file, tau;
    std::vector<CLI::App*> subs;
    const std::pair<const char*, const char*> names[] = {
        {"expand", "print the series of f and 1/f"},
        {"verify", "check the functional equation numerically (or --exact for Todd)"},
        {"classify", "admissible lambda table for the degenerate genera"},
        {"monodromy", "monodromy criterion for lattice genera"},
        {"identities", "Weierstrass and Baker-Akhiezer identity residuals"}};
    for (const auto& [name, help] : names) {
        CLI::App* sub = app.add_subcommand(name, help);
        sub->add_option("--todd", todd, "Todd genus alpha,beta");
        sub->add_option("--krichever", krichever, "Krichever genus s_re,s_im[,alpha_re,alpha_im]");
        sub->add_option("--level-d", level_d, "level-d elliptic genus d[,k,l]");
        sub->add_option("--sing", sing, "degenerate genus lambda,q,mu");
        sub->add_option("--sing-limit", sing_limit, "rational limit lambda,q");
        sub->add_option("--spec", spec_file, "genus spec as JSON file");
        sub->add_option("--tau", tau, "lattice modulus re,im (default i)");
        sub->add_option("--n", cfg.n, "equation size n")->check(CLI::Range(1, 64));
        sub->add_option("--points", cfg.points, "sample tuples")->check(CLI::Range(1, 1000000));
        sub->add_option("--precision", cfg.precision_bits, "working precision in bits")->check(CLI::Range(64, 8192));
        sub->add_option("--order", cfg.order, "truncation order")->check(CLI::Range(2, 512));
        sub->add_option("--seed", cfg.seed, "random seed");
        sub->add_option("--json", cfg.json_path, "write the JSON record here (- for stdout)");
        sub->add_flag("--confirm", cfg.confirm, "numerically confirm the classification");
        sub->add_flag("--exact", cfg.exact, "exact polynomial check of the Todd identity");
        subs.push_back(sub);
    }
    std::vector<std::string> args(argv + 1, argv + argc);
    std::reverse(args.begin(), args.end());
    try {
        app.parse(args);
    } catch (const CLI::CallForHelp& e) {
        // help() already descends into the selected subcommand.
        out << app.help();
        return kHolds;
    } catch (const CLI::ParseError& e) {
        err << "error: " << e.what() << "\n";
        return kError;
    }
    const Command commands[] = {Command::expand, Command::verify, Command::classify, Command::monodromy,
                                Command::identities};
    for (std::size_t i = 0; i < subs.size(); ++i)
        if (subs[i]->parsed()) cfg.command = commands[i];
    try {
        PrecisionScope scope(cfg.precision_bits);
        std::optional<Complex> tau_value;
        if (!tau.empty()) {
            auto v = detail::rationals(tau, 2, 2, "--tau");
            tau_value = detail::rational_complex(v[0], v[1]);
        }
        int given = !todd.empty() + !krichever.empty() + !level_d.empty() + !sing.empty() + !sing_limit.empty() +
                    !spec_file.empty();
        if (given > 1) throw PreconditionError("give at most one genus");
        if (!todd.empty()) {
            auto v = detail::rationals(todd, 2, 2, "--todd");
            cfg.spec = ToddSpec{v[0], v[1]};
        } else if (!krichever.empty()) {
            auto v = detail::rationals(krichever, 2, 4, "--krichever");
            if (v.size() == 3) throw PreconditionError("--krichever takes 2 or 4 values");
            Lattice lat = lattice_for(cfg, tau_value);
            Complex s = detail::rational_complex(v[0], v[1]);
            Complex a = v.size() == 4 ? detail::rational_complex(v[2], v[3]) : Complex(0);
            cfg.spec = KricheverSpec{lat, s, a};
        } else if (!level_d.empty()) {
            auto parts = detail::split(level_d);
            if (parts.size() != 1 && parts.size() != 3) throw PreconditionError("--level-d takes d or d,k,l");
            int d = std::stoi(parts[0]);
            int k = parts.size() == 3 ? std::stoi(parts[1]) : 1;
            int l = parts.size() == 3 ? std::stoi(parts[2]) : 0;
            cfg.spec = LevelDSpec{lattice_for(cfg, tau_value), d, k, l};
        } else if (!sing.empty()) {
            auto v = detail::rationals(sing, 3, 3, "--sing");
            cfg.spec = SingKricheverSpec{v[0], v[1], v[2]};
        } else if (!sing_limit.empty()) {
            auto v = detail::rationals(sing_limit, 2, 2, "--sing-limit");
            cfg.spec = SingLimitSpec{v[0], v[1]};
        } else if (!spec_file.empty()) {
            std::ifstream in(spec_file);
            if (!in) throw PreconditionError("cannot read " + spec_file);
            cfg.spec = genus_spec_from_json(nlohmann::json::parse(in), cfg.precision_bits);
        }
        switch (cfg.command) {
        case Command::expand: return cmd_expand(cfg, out);
        case Command::verify: return cmd_verify(cfg, out);
        case Command::classify: return cmd_classify(cfg, out);
        case Command::monodromy: return cmd_monodromy(cfg, out);
        case Command::identities: return cmd_identities(cfg, lattice_for(cfg, tau_value), out);
        }
    } catch (const std::exception& e) {
        err << "error: " << e.what() << "\n";
        return kError;
    }
    return kError;
}

} // namespace hirz::cli
