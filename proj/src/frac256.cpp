#include "phaselab/frac256.hpp"

#include <cctype>

namespace phaselab {

namespace {

// decimal string "123.456" -> Frac256 of its fractional part, round to nearest.
// Fractional digits capped at 36 (anything further is below 2^-119 of noise
// for the experiments here and can be expressed as p/q instead).
Frac256 parse_decimal(const std::string& s) {
    auto dot = s.find('.');
    std::string frac_digits = dot == std::string::npos ? "" : s.substr(dot + 1);
    if (frac_digits.size() > 36) throw std::invalid_argument("decimal literal too long: " + s);
    for (char c : frac_digits)
        if (!std::isdigit((unsigned char)c)) throw std::invalid_argument("bad decimal literal: " + s);
    // digits as integer D, m = #digits: value = round(D * 2^256 / 10^m),
    // computed as floor((D * 2^256 + 10^m / 2) / 10^m).  D < 10^36 < 2^120,
    // so everything fits comfortably in 7 limbs.
    WideUint<7> num, half;
    for (char c : frac_digits) {
        num = num.mul_small(10);
        num += WideUint<7>{(u64)(c - '0')};
    }
    num = num.shl(256);
    if (!frac_digits.empty()) {
        half = WideUint<7>{5};
        for (std::size_t i = 1; i < frac_digits.size(); ++i) half = half.mul_small(10);
        num += half;
        for (std::size_t i = 0; i < frac_digits.size(); ++i) num.div_small(10);
    }
    Frac256 r;
    for (int i = 0; i < 4; ++i) r.v.w[i] = num.w[i];
    return r;
}

}  // namespace

Frac256 parse_coefficient(const std::string& token_in) {
    std::string token = token_in;
    bool neg = false;
    if (!token.empty() && (token[0] == '-' || token[0] == '+')) {
        neg = token[0] == '-';
        token = token.substr(1);
    }
    if (token.empty()) throw std::invalid_argument("empty coefficient");

    Frac256 r;
    if (std::isalpha((unsigned char)token[0])) {
        r = named_constant(token);
    } else if (token.find('/') != std::string::npos) {
        auto slash = token.find('/');
        std::string ps = token.substr(0, slash), qs = token.substr(slash + 1);
        if (ps.empty() || qs.empty()) throw std::invalid_argument("bad rational: " + token_in);
        u64 p = 0, q = 0;
        try {
            std::size_t pos;
            p = std::stoull(ps, &pos);
            if (pos != ps.size()) throw std::invalid_argument("");
            q = std::stoull(qs, &pos);
            if (pos != qs.size()) throw std::invalid_argument("");
        } catch (...) {
            throw std::invalid_argument("bad rational: " + token_in);
        }
        if (q == 0) throw std::invalid_argument("zero denominator: " + token_in);
        r = Frac256::from_rational(p, q);
    } else {
        // decimal (possibly with integer part, which vanishes mod 1)
        std::size_t dot = token.find('.');
        std::string intpart = dot == std::string::npos ? token : token.substr(0, dot);
        for (char c : intpart)
            if (!std::isdigit((unsigned char)c)) throw std::invalid_argument("bad coefficient: " + token_in);
        if (dot == std::string::npos) {
            r = Frac256::zero();  // integer coefficient, 0 mod 1
        } else {
            r = parse_decimal(token);
        }
    }
    return neg ? -r : r;
}

}  // namespace phaselab
