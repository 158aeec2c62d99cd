#include "chainrec/rational.hpp"

#include <cmath>
#include <cstdlib>

namespace chainrec {

Rat parse_rat(const std::string& s) {
    if (s.empty()) throw std::invalid_argument("empty rational literal");
    auto slash = s.find('/');
    if (slash != std::string::npos) {
        BigInt num(s.substr(0, slash));
        BigInt den(s.substr(slash + 1));
        if (den == 0) throw std::invalid_argument("zero denominator: " + s);
        return Rat(num, den);
    }
    // Decimal / scientific form.
    std::string t = s;
    int exp10 = 0;
    auto epos = t.find_first_of("eE");
    if (epos != std::string::npos) {
        exp10 = std::stoi(t.substr(epos + 1));
        t = t.substr(0, epos);
    }
    bool neg = false;
    if (!t.empty() && (t[0] == '+' || t[0] == '-')) {
        neg = t[0] == '-';
        t = t.substr(1);
    }
    auto dot = t.find('.');
    std::string digits = t;
    int frac = 0;
    if (dot != std::string::npos) {
        digits = t.substr(0, dot) + t.substr(dot + 1);
        frac = static_cast<int>(t.size() - dot - 1);
    }
    if (digits.empty()) throw std::invalid_argument("bad rational literal: " + s);
    for (char c : digits)
        if (!std::isdigit(static_cast<unsigned char>(c)))
            throw std::invalid_argument("bad rational literal: " + s);
    // strip leading zeros: cpp_int would read "025" as octal
    digits.erase(0, std::min(digits.find_first_not_of('0'), digits.size() - 1));
    BigInt num(digits);
    BigInt den = 1;
    int shift = exp10 - frac;
    BigInt ten = 10;
    for (int i = 0; i < std::abs(shift); ++i) {
        if (shift > 0) num *= ten; else den *= ten;
    }
    if (neg) num = -num;
    return Rat(num, den);
}

std::string format_rat(const Rat& r) {
    std::string num = numerator(r).str();
    if (denominator(r) == 1) return num;
    return num + "/" + denominator(r).str();
}

Rat rat_upper_bound(double x) {
    double up = std::nextafter(x, std::numeric_limits<double>::infinity());
    return Rat(up);
}

Rat rat_from_double(double x) {
    const long long den = 1000000000LL;
    double scaled = x * static_cast<double>(den);
    if (std::abs(scaled) > 9.0e18) return Rat(x);
    long long num = llround(scaled);
    return Rat(BigInt(num), BigInt(den));
}

}  // namespace chainrec
