#pragma once

// Exact arbitrary-precision integers and rationals used throughout the
// library, plus parsing/formatting helpers shared by the JSON and CSV
// report writers.

#include <boost/multiprecision/cpp_int.hpp>

#include <charconv>
#include <cmath>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <string_view>

namespace foconv {

using BigInt = boost::multiprecision::cpp_int;
using Rational = boost::multiprecision::cpp_rational;

using Vertex = int;

inline BigInt int_pow(const BigInt& base, unsigned exp) {
    BigInt result = 1;
    BigInt b = base;
    while (exp > 0) {
        if (exp & 1u) result *= b;
        b *= b;
        exp >>= 1u;
    }
    return result;
}

inline Rational rational_pow(const Rational& q, unsigned exp) {
    return Rational(int_pow(numerator(q), exp), int_pow(denominator(q), exp));
}

inline BigInt binomial(const BigInt& n, unsigned k) {
    if (n < 0) throw std::invalid_argument("binomial: negative n");
    if (BigInt(k) > n) return 0;
    BigInt result = 1;
    for (unsigned i = 0; i < k; ++i) {
        result *= n - i;
        result /= i + 1;   // exact at each step
    }
    return result;
}

inline std::uint64_t binomial_u64(unsigned n, unsigned k) {
    BigInt b = binomial(BigInt(n), k);
    if (b > BigInt(UINT64_MAX)) throw std::overflow_error("binomial too large");
    return b.convert_to<std::uint64_t>();
}

inline double rational_to_double(const Rational& q) {
    return q.convert_to<double>();
}

// Exact conversion: every finite double is a dyadic rational.
inline Rational rational_from_double(double x) {
    if (!std::isfinite(x)) throw std::invalid_argument("rational_from_double: non-finite value");
    if (x == 0.0) return Rational(0);
    int exp = 0;
    double mant = std::frexp(x, &exp);
    auto scaled = static_cast<long long>(std::ldexp(mant, 53));
    exp -= 53;
    Rational r(scaled);
    if (exp > 0) {
        r *= Rational(BigInt(1) << exp);
    } else if (exp < 0) {
        r /= Rational(BigInt(1) << (-exp));
    }
    return r;
}

// Canonical form: "2/3" for proper fractions, "6" for integers.
inline std::string rational_to_string(const Rational& q) {
    if (denominator(q) == 1) return numerator(q).str();
    return numerator(q).str() + "/" + denominator(q).str();
}

// Accepts "a/b", plain integers, and decimal literals ("0.25" -> 1/4).
inline Rational rational_from_string(std::string_view text) {
    auto fail = [&] { throw std::invalid_argument("not a rational: '" + std::string(text) + "'"); };
    if (text.empty()) fail();
    if (auto slash = text.find('/'); slash != std::string_view::npos) {
        std::string num(text.substr(0, slash));
        std::string den(text.substr(slash + 1));
        if (num.empty() || den.empty()) fail();
        try {
            Rational r{BigInt(num), BigInt(den)};
            return r;
        } catch (const std::exception&) {
            fail();
        }
    }
    std::string digits;
    bool negative = false;
    std::size_t i = 0;
    if (text[i] == '+' || text[i] == '-') {
        negative = text[i] == '-';
        ++i;
    }
    long frac_digits = -1;
    for (; i < text.size(); ++i) {
        char c = text[i];
        if (c == '.') {
            if (frac_digits >= 0) fail();
            frac_digits = 0;
        } else if (c >= '0' && c <= '9') {
            digits.push_back(c);
            if (frac_digits >= 0) ++frac_digits;
        } else {
            fail();
        }
    }
    if (digits.empty()) fail();
    Rational r{BigInt(digits)};
    if (frac_digits > 0) r /= Rational(int_pow(BigInt(10), static_cast<unsigned>(frac_digits)));
    return negative ? -r : r;
}

// Shortest round-trip decimal form, deterministic across runs.
inline std::string double_to_string(double x) {
    char buf[64];
    auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), x);
    if (ec != std::errc()) throw std::runtime_error("double_to_string failed");
    return std::string(buf, ptr);
}

}  // namespace foconv
