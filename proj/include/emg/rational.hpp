#pragma once

// Exact rational arithmetic used throughout. Every model quantity is a ratio
// of integers in (p, eps, psi, L, M, rho), so probabilities, payoffs and
// verdicts can be computed and compared with no rounding anywhere.

#include <boost/multiprecision/cpp_int.hpp>

#include <cstdlib>
#include <stdexcept>
#include <string>
#include <string_view>

namespace emg {

using Int = boost::multiprecision::cpp_int;
using Rational = boost::multiprecision::cpp_rational;

// base^exp by repeated squaring; negative exponents require base != 0.
inline Rational rational_pow(Rational base, long exp) {
    if (exp < 0) {
        if (base == 0) throw std::domain_error("rational_pow: zero base, negative exponent");
        base = Rational(denominator(base), numerator(base));
        exp = -exp;
    }
    Rational result(1);
    while (exp > 0) {
        if (exp & 1) result *= base;
        base *= base;
        exp >>= 1;
    }
    return result;
}

// Accepts "num/den" or a plain integer, with optional leading '-'.
inline Rational parse_rational(std::string_view text) {
    auto fail = [&]() -> Rational {
        throw std::invalid_argument("not a rational: '" + std::string(text) + "'");
    };
    while (!text.empty() && (text.front() == ' ' || text.front() == '\t')) text.remove_prefix(1);
    while (!text.empty() && (text.back() == ' ' || text.back() == '\t')) text.remove_suffix(1);
    if (text.empty()) return fail();
    const auto slash = text.find('/');
    auto parse_int = [&](std::string_view part) -> Int {
        if (part.empty()) fail();
        std::size_t i = (part[0] == '-' || part[0] == '+') ? 1 : 0;
        if (i == part.size()) fail();
        for (std::size_t k = i; k < part.size(); ++k)
            if (part[k] < '0' || part[k] > '9') fail();
        return Int(std::string(part));
    };
    if (slash == std::string_view::npos) return Rational(parse_int(text));
    const Int num = parse_int(text.substr(0, slash));
    const Int den = parse_int(text.substr(slash + 1));
    if (den == 0) throw std::invalid_argument("zero denominator: '" + std::string(text) + "'");
    return Rational(num, den);
}

// "num/den"; integers print without the "/1".
inline std::string format_rational(const Rational& r) {
    if (denominator(r) == 1) return numerator(r).str();
    return numerator(r).str() + "/" + denominator(r).str();
}

// Truncated decimal expansion with the given number of significant digits.
inline std::string to_decimal_string(const Rational& r, int significant_digits = 30) {
    if (significant_digits < 1) throw std::invalid_argument("significant_digits must be >= 1");
    if (r == 0) return "0";
    Int num = numerator(r);
    const Int den = denominator(r);
    std::string out;
    if (num < 0) {
        out += '-';
        num = -num;
    }
    Int ipart = num / den;
    Int rem = num % den;
    int sig = 0;
    if (ipart > 0) {
        const std::string digits = ipart.str();
        out += digits;
        sig = static_cast<int>(digits.size());
        if (rem == 0 || sig >= significant_digits) return out;
        out += '.';
    } else {
        out += "0.";
    }
    while (rem != 0 && sig < significant_digits) {
        rem *= 10;
        const Int digit = rem / den;
        rem %= den;
        out += static_cast<char>('0' + digit.convert_to<int>());
        if (sig > 0 || digit != 0) ++sig;  // leading fractional zeros are not significant
    }
    return out;
}

}  // namespace emg
