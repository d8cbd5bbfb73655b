#pragma once

// Scalar types: exact rationals (GMP) and MPFR-backed reals/complex numbers.
//
// Working precision is carried by Boost's default precision for new values.
// Every entry point that creates Real values opens a PrecisionScope first.
// The default is process-global, so numeric code is not meant to run on
// several threads with different precisions at once.

#include <cmath>
#include <cstdint>
#include <optional>
#include <random>
#include <string>
#include <string_view>
#include <variant>

#include <gmpxx.h>
#include <mpfr.h>

#include <boost/multiprecision/mpfr.hpp>

#include "errors.hpp"

namespace hirz {

using Rational = mpq_class;

// p/q in lowest terms; the two-argument mpq_class constructor does not reduce.
inline Rational ratio(long p, long q) {
    Rational r(p, q);
    r.canonicalize();
    return r;
}
using Real = boost::multiprecision::number<boost::multiprecision::mpfr_float_backend<0>,
                                           boost::multiprecision::et_off>;

inline constexpr unsigned kDefaultPrecisionBits = 256;

inline unsigned digits10_for_bits(unsigned bits) {
    return static_cast<unsigned>(std::ceil(bits * 0.30102999566398120)) + 1;
}

class PrecisionScope {
public:
    explicit PrecisionScope(unsigned bits) : saved_(Real::default_precision()) {
        Real::default_precision(digits10_for_bits(bits));
    }
    ~PrecisionScope() { Real::default_precision(saved_); }
    PrecisionScope(const PrecisionScope&) = delete;
    PrecisionScope& operator=(const PrecisionScope&) = delete;

private:
    unsigned saved_;
};

inline long precision_bits_of(const Real& x) {
    return static_cast<long>(mpfr_get_prec(x.backend().data()));
}

inline Real real_from_rational(const Rational& q) {
    Real r;
    mpfr_set_q(r.backend().data(), q.get_mpq_t(), MPFR_RNDN);
    return r;
}

inline Real real_pi() {
    Real r;
    mpfr_const_pi(r.backend().data(), MPFR_RNDN);
    return r;
}

inline double to_double(const Real& x) { return x.convert_to<double>(); }

// Decimal digits that make a printed value parse back to the same binary value.
inline int roundtrip_digits(const Real& x) {
    return static_cast<int>(std::ceil(precision_bits_of(x) * 0.30102999566398120)) + 2;
}

inline std::string to_string(const Real& x) {
    if (x == 0) return "0";
    return x.str(roundtrip_digits(x), std::ios_base::scientific);
}

inline std::string to_string(const Rational& q) {
    return q.get_str();
}

// Accepts "p", "p/q", and finite decimals such as "-0.25" or "1.5e-3".
inline Rational parse_rational(std::string_view text) {
    std::string s(text);
    while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.pop_back();
    while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) s.erase(0, 1);
    if (s.empty()) throw std::invalid_argument("empty number");
    if (s.find('/') != std::string::npos) {
        Rational q;
        if (q.set_str(s, 10) != 0) throw std::invalid_argument("bad rational: " + s);
        if (q.get_den() == 0) throw std::invalid_argument("zero denominator: " + s);
        q.canonicalize();
        return q;
    }
    std::size_t pos = 0;
    bool neg = false;
    if (s[pos] == '+' || s[pos] == '-') neg = s[pos++] == '-';
    std::string digits;
    long exponent = 0;
    bool seen_point = false, seen_digit = false;
    for (; pos < s.size(); ++pos) {
        char c = s[pos];
        if (std::isdigit(static_cast<unsigned char>(c))) {
            digits += c;
            seen_digit = true;
            if (seen_point) --exponent;
        } else if (c == '.' && !seen_point) {
            seen_point = true;
        } else if (c == 'e' || c == 'E') {
            ++pos;
            std::size_t used = 0;
            long e = std::stol(s.substr(pos), &used);
            if (pos + used != s.size()) throw std::invalid_argument("bad number: " + s);
            exponent += e;
            pos = s.size();
            break;
        } else {
            throw std::invalid_argument("bad number: " + s);
        }
    }
    if (!seen_digit) throw std::invalid_argument("bad number: " + s);
    mpz_class mant(digits, 10);
    mpz_class scale;
    mpz_ui_pow_ui(scale.get_mpz_t(), 10, static_cast<unsigned long>(std::labs(exponent)));
    Rational q = exponent >= 0 ? Rational(mant * scale) : Rational(mant, scale);
    q.canonicalize();
    return neg ? Rational(-q) : q;
}

class Complex {
public:
    Complex() = default;
    Complex(Real re) : re_(std::move(re)), im_(0) {}
    Complex(Real re, Real im) : re_(std::move(re)), im_(std::move(im)) {}
    Complex(int re) : re_(re), im_(0) {}
    Complex(const Rational& re) : re_(real_from_rational(re)), im_(0) {}

    static Complex from_double(double re, double im = 0.0) { return {Real(re), Real(im)}; }
    static Complex i() { return {Real(0), Real(1)}; }

    const Real& real() const { return re_; }
    const Real& imag() const { return im_; }
    long precision_bits() const { return precision_bits_of(re_); }

    Complex& operator+=(const Complex& o) { re_ += o.re_; im_ += o.im_; return *this; }
    Complex& operator-=(const Complex& o) { re_ -= o.re_; im_ -= o.im_; return *this; }
    Complex& operator*=(const Complex& o) {
        Real r = re_ * o.re_ - im_ * o.im_;
        im_ = re_ * o.im_ + im_ * o.re_;
        re_ = std::move(r);
        return *this;
    }
    Complex& operator/=(const Complex& o) {
        Real den = o.re_ * o.re_ + o.im_ * o.im_;
        if (den == 0) throw std::domain_error("complex division by zero");
        Real r = (re_ * o.re_ + im_ * o.im_) / den;
        im_ = (im_ * o.re_ - re_ * o.im_) / den;
        re_ = std::move(r);
        return *this;
    }
    Complex& operator*=(const Real& s) { re_ *= s; im_ *= s; return *this; }
    Complex& operator/=(const Real& s) { re_ /= s; im_ /= s; return *this; }

    friend Complex operator+(Complex a, const Complex& b) { return a += b; }
    friend Complex operator-(Complex a, const Complex& b) { return a -= b; }
    friend Complex operator*(Complex a, const Complex& b) { return a *= b; }
    friend Complex operator/(Complex a, const Complex& b) { return a /= b; }
    friend Complex operator*(Complex a, const Real& s) { return a *= s; }
    friend Complex operator*(const Real& s, Complex a) { return a *= s; }
    friend Complex operator/(Complex a, const Real& s) { return a /= s; }
    friend Complex operator-(const Complex& a) { return {-a.re_, -a.im_}; }
    friend bool operator==(const Complex& a, const Complex& b) { return a.re_ == b.re_ && a.im_ == b.im_; }
    friend bool operator!=(const Complex& a, const Complex& b) { return !(a == b); }

    bool is_zero() const { return re_ == 0 && im_ == 0; }

private:
    Real re_;
    Real im_;
};

inline Complex conj(const Complex& z) { return {z.real(), -z.imag()}; }
inline Real norm(const Complex& z) { return z.real() * z.real() + z.imag() * z.imag(); }
inline Real abs(const Complex& z) { return boost::multiprecision::hypot(z.real(), z.imag()); }
inline Real arg(const Complex& z) { return boost::multiprecision::atan2(z.imag(), z.real()); }

inline Complex exp(const Complex& z) {
    Real m = boost::multiprecision::exp(z.real());
    return {m * boost::multiprecision::cos(z.imag()), m * boost::multiprecision::sin(z.imag())};
}

// Principal branch, arg in (-pi, pi].
inline Complex log(const Complex& z) {
    if (z.is_zero()) throw std::domain_error("log of zero");
    return {boost::multiprecision::log(abs(z)), arg(z)};
}

inline Complex sqrt(const Complex& z) {
    if (z.is_zero()) return z;
    Real r = abs(z);
    Real a = boost::multiprecision::sqrt((r + boost::multiprecision::abs(z.real())) / 2);
    if (z.real() >= 0) return {a, z.imag() / (2 * a)};
    Real b = z.imag() >= 0 ? a : Real(-a);
    return {boost::multiprecision::abs(z.imag()) / (2 * a), b};
}

inline Complex sin(const Complex& z) {
    return {boost::multiprecision::sin(z.real()) * boost::multiprecision::cosh(z.imag()),
            boost::multiprecision::cos(z.real()) * boost::multiprecision::sinh(z.imag())};
}

inline Complex cos(const Complex& z) {
    return {boost::multiprecision::cos(z.real()) * boost::multiprecision::cosh(z.imag()),
            -boost::multiprecision::sin(z.real()) * boost::multiprecision::sinh(z.imag())};
}

inline Complex pow(Complex base, long e) {
    if (e < 0) return Complex(1) / pow(std::move(base), -e);
    Complex result(1);
    while (e > 0) {
        if (e & 1) result *= base;
        e >>= 1;
        if (e) base *= base;
    }
    return result;
}

inline double abs_double(const Complex& z) { return to_double(abs(z)); }

inline std::string to_string(const Complex& z) {
    return to_string(z.real()) + (z.imag() < 0 ? " - " : " + ") +
           to_string(boost::multiprecision::abs(z.imag())) + "i";
}

inline Complex parse_complex(const std::string& re, const std::string& im) {
    return {Real(re), Real(im)};
}

// An exact rational or a complex number at some working precision.
using Scalar = std::variant<Rational, Complex>;

inline Complex to_complex(const Scalar& s) {
    if (const auto* q = std::get_if<Rational>(&s)) return Complex(*q);
    const Complex& z = std::get<Complex>(s);
    return {Real(z.real()), Real(z.imag())};
}

inline std::optional<Rational> as_rational(const Scalar& s) {
    if (const auto* q = std::get_if<Rational>(&s)) return *q;
    return std::nullopt;
}

inline bool scalar_is_zero(const Scalar& s) {
    if (const auto* q = std::get_if<Rational>(&s)) return sgn(*q) == 0;
    return std::get<Complex>(s).is_zero();
}

inline std::string to_string(const Scalar& s) {
    if (const auto* q = std::get_if<Rational>(&s)) return q->get_str();
    return to_string(std::get<Complex>(s));
}

// Seeded generator with a portable mapping to doubles.
class Rng {
public:
    explicit Rng(std::uint64_t seed) : engine_(seed) {}
    double uniform() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }
    double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }
    std::int64_t integer(std::int64_t lo, std::int64_t hi) {
        auto span = static_cast<std::uint64_t>(hi - lo + 1);
        return lo + static_cast<std::int64_t>(engine_() % span);
    }
    std::uint64_t raw() { return engine_(); }

private:
    std::mt19937_64 engine_;
};

} // namespace hirz
