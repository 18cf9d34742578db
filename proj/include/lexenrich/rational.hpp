#pragma once

#include <cstdint>
#include <numeric>
#include <stdexcept>
#include <string>

namespace lexenrich {

/// Exact rational arithmetic for scores and evaluation ratios.
///
/// All ratios in the toolkit (jaccard, match scores, precision/recall) are
/// kept exact until formatting, so identities like precision + noise = 1
/// hold bitwise and percentages round deterministically.
class Rational {
public:
    constexpr Rational() = default;
    Rational(long long n) : num_(n), den_(1) {}
    Rational(long long n, long long d) : num_(n), den_(d) {
        if (den_ == 0) throw std::domain_error("Rational: zero denominator");
        normalize();
    }

    long long num() const { return num_; }
    long long den() const { return den_; }

    double to_double() const { return static_cast<double>(num_) / static_cast<double>(den_); }

    Rational operator+(const Rational& o) const {
        return make(i128(num_) * o.den_ + i128(o.num_) * den_, i128(den_) * o.den_);
    }
    Rational operator-(const Rational& o) const {
        return make(i128(num_) * o.den_ - i128(o.num_) * den_, i128(den_) * o.den_);
    }
    Rational operator*(const Rational& o) const {
        return make(i128(num_) * o.num_, i128(den_) * o.den_);
    }
    Rational operator/(const Rational& o) const {
        if (o.num_ == 0) throw std::domain_error("Rational: division by zero");
        return make(i128(num_) * o.den_, i128(den_) * o.num_);
    }

    bool operator==(const Rational& o) const { return num_ == o.num_ && den_ == o.den_; }
    bool operator!=(const Rational& o) const { return !(*this == o); }
    bool operator<(const Rational& o) const { return i128(num_) * o.den_ < i128(o.num_) * den_; }
    bool operator>(const Rational& o) const { return o < *this; }
    bool operator<=(const Rational& o) const { return !(o < *this); }
    bool operator>=(const Rational& o) const { return !(*this < o); }

    /// Fixed-point decimal with `dp` digits, round-half-up. 3/4 at dp=4 -> "0.7500".
    std::string to_fixed(int dp) const {
        i128 scale = 1;
        for (int i = 0; i < dp; ++i) scale *= 10;
        i128 n = i128(num_) * scale;
        bool neg = n < 0;
        if (neg) n = -n;
        i128 q = n / den_;
        i128 rem = n % den_;
        if (2 * rem >= den_) ++q;
        std::string digits = i128_str(q);
        if (static_cast<int>(digits.size()) <= dp) digits.insert(0, dp + 1 - digits.size(), '0');
        std::string out = digits.substr(0, digits.size() - dp);
        if (dp > 0) out += "." + digits.substr(digits.size() - dp);
        return neg ? "-" + out : out;
    }

    /// Percentage string, 2 decimals: 448/604 -> "74.17".
    std::string to_percent() const { return (*this * Rational(100)).to_fixed(2); }

    /// Parses a plain decimal ("0.5", "1", ".25") into an exact rational.
    static Rational from_decimal(const std::string& s) {
        if (s.empty()) throw std::invalid_argument("empty decimal");
        size_t i = 0;
        bool neg = s[0] == '-';
        if (neg || s[0] == '+') i = 1;
        long long num = 0, den = 1;
        bool seen_dot = false, seen_digit = false;
        for (; i < s.size(); ++i) {
            if (s[i] == '.') {
                if (seen_dot) throw std::invalid_argument("bad decimal: " + s);
                seen_dot = true;
            } else if (s[i] >= '0' && s[i] <= '9') {
                num = num * 10 + (s[i] - '0');
                if (seen_dot) den *= 10;
                seen_digit = true;
                if (num > (1LL << 56)) throw std::invalid_argument("decimal too long: " + s);
            } else {
                throw std::invalid_argument("bad decimal: " + s);
            }
        }
        if (!seen_digit) throw std::invalid_argument("bad decimal: " + s);
        return Rational(neg ? -num : num, den);
    }

private:
    using i128 = __int128;

    static Rational make(i128 n, i128 d) {
        if (d < 0) { n = -n; d = -d; }
        i128 g = gcd128(n < 0 ? -n : n, d);
        if (g > 1) { n /= g; d /= g; }
        Rational r;
        if (n > INT64_MAX || n < INT64_MIN || d > INT64_MAX)
            throw std::overflow_error("Rational: overflow");
        r.num_ = static_cast<long long>(n);
        r.den_ = static_cast<long long>(d);
        return r;
    }

    static i128 gcd128(i128 a, i128 b) {
        while (b != 0) { i128 t = a % b; a = b; b = t; }
        return a == 0 ? 1 : a;
    }

    static std::string i128_str(i128 v) {
        if (v == 0) return "0";
        std::string s;
        while (v > 0) { s.insert(s.begin(), static_cast<char>('0' + int(v % 10))); v /= 10; }
        return s;
    }

    void normalize() {
        if (den_ < 0) { num_ = -num_; den_ = -den_; }
        long long g = std::gcd(num_ < 0 ? -num_ : num_, den_);
        if (g > 1) { num_ /= g; den_ /= g; }
    }

    long long num_ = 0;
    long long den_ = 1;
};

} // namespace lexenrich
