#include "toricding/rational.hpp"

#include <stdexcept>

namespace toric {

std::string rational_to_string(const Rational& q) {
    Rational r = q;  // mpq_rational is always stored canonicalized
    if (denominator(r) == 1) return numerator(r).str();
    return numerator(r).str() + "/" + denominator(r).str();
}

Rational parse_rational(const std::string& text) {
    if (text.empty()) throw std::invalid_argument("empty rational literal");
    auto slash = text.find('/');
    if (slash != std::string::npos) {
        BigInt num(text.substr(0, slash));
        BigInt den(text.substr(slash + 1));
        if (den == 0) throw std::invalid_argument("zero denominator in '" + text + "'");
        return Rational(num) / Rational(den);
    }
    auto dot = text.find('.');
    if (dot == std::string::npos) return Rational(BigInt(text));
    std::string head = text.substr(0, dot);
    std::string tail = text.substr(dot + 1);
    for (char c : tail)
        if (c < '0' || c > '9') throw std::invalid_argument("bad rational literal '" + text + "'");
    bool neg = !head.empty() && head[0] == '-';
    if (head == "-" || head.empty()) head = "0";
    Rational whole{BigInt(head)};
    if (tail.empty()) return whole;
    BigInt den = 1;
    for (std::size_t i = 0; i < tail.size(); ++i) den *= 10;
    Rational frac = Rational(BigInt(tail)) / Rational(den);
    return neg ? Rational(whole - frac) : Rational(whole + frac);
}

VecQ to_rational(const VecZ& v) {
    VecQ r(v.size());
    for (std::size_t i = 0; i < v.size(); ++i) r[i] = v[i];
    return r;
}

std::vector<double> to_double(const VecQ& v) {
    std::vector<double> r(v.size());
    for (std::size_t i = 0; i < v.size(); ++i) r[i] = to_double(v[i]);
    return r;
}

}  // namespace toric
