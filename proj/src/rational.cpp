#include "opac/rational.hpp"

#include <cctype>
#include <stdexcept>

namespace opac {

namespace {

bool all_digits(std::string_view s) {
    if (s.empty()) return false;
    for (char c : s)
        if (!std::isdigit(static_cast<unsigned char>(c))) return false;
    return true;
}

}  // namespace

Rational parse_rational(std::string_view text) {
    bool negative = false;
    if (!text.empty() && (text.front() == '-' || text.front() == '+')) {
        negative = text.front() == '-';
        text.remove_prefix(1);
    }
    Rational result;
    if (auto slash = text.find('/'); slash != std::string_view::npos) {
        auto num = text.substr(0, slash);
        auto den = text.substr(slash + 1);
        if (!all_digits(num) || !all_digits(den))
            throw std::invalid_argument("malformed fraction '" + std::string(text) + "'");
        BigInt d{std::string(den)};
        if (d == 0) throw std::invalid_argument("zero denominator in '" + std::string(text) + "'");
        result = Rational(BigInt(std::string(num)), d);
    } else if (auto dot = text.find('.'); dot != std::string_view::npos) {
        auto whole = text.substr(0, dot);
        auto frac = text.substr(dot + 1);
        if ((!whole.empty() && !all_digits(whole)) || !all_digits(frac))
            throw std::invalid_argument("malformed decimal '" + std::string(text) + "'");
        BigInt scale = 1;
        for (std::size_t i = 0; i < frac.size(); ++i) scale *= 10;
        BigInt w = whole.empty() ? BigInt(0) : BigInt(std::string(whole));
        result = Rational(w * scale + BigInt(std::string(frac)), scale);
    } else {
        if (!all_digits(text)) throw std::invalid_argument("malformed number '" + std::string(text) + "'");
        result = Rational(BigInt(std::string(text)));
    }
    result.canonicalize();
    return negative ? Rational(-result) : result;
}

std::string to_decimal(const Rational& value, int digits) {
    if (digits < 1) digits = 1;
    Rational v = value;
    bool negative = v < 0;
    if (negative) v = -v;
    BigInt scale = 1;
    for (int i = 0; i < digits; ++i) scale *= 10;
    // round half-up on the scaled value
    BigInt scaled_num = v.get_num() * scale * 2 + v.get_den();
    BigInt scaled_den = v.get_den() * 2;
    BigInt q;
    mpz_fdiv_q(q.get_mpz_t(), scaled_num.get_mpz_t(), scaled_den.get_mpz_t());
    BigInt whole, frac;
    mpz_fdiv_qr(whole.get_mpz_t(), frac.get_mpz_t(), q.get_mpz_t(), scale.get_mpz_t());
    std::string f = frac.get_str();
    f.insert(0, static_cast<std::size_t>(digits) - f.size(), '0');
    while (f.size() > 1 && f.back() == '0') f.pop_back();
    std::string out = (negative && (whole != 0 || f != "0") ? "-" : "") + whole.get_str() + "." + f;
    return out;
}

std::string to_fraction(const Rational& value) {
    Rational v = value;
    v.canonicalize();
    if (v.get_den() == 1) return v.get_num().get_str();
    return v.get_num().get_str() + "/" + v.get_den().get_str();
}

}  // namespace opac
