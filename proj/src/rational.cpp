#include "jointorbit/rational.hpp"

#include <algorithm>
#include <bit>
#include <cassert>
#include <cmath>
#include <cstdlib>

namespace jointorbit {

namespace {
constexpr std::uint64_t kBase = 1ull << 32;
}

BigInt::BigInt(long long v) {
    if (v == 0) return;
    sign_ = v < 0 ? -1 : 1;
    unsigned long long u = v < 0 ? -static_cast<unsigned long long>(v) : static_cast<unsigned long long>(v);
    while (u) {
        mag_.push_back(static_cast<std::uint32_t>(u & 0xffffffffu));
        u >>= 32;
    }
}

void BigInt::trim() {
    while (!mag_.empty() && mag_.back() == 0) mag_.pop_back();
    if (mag_.empty()) sign_ = 0;
}

bool BigInt::is_one() const {
    return sign_ == 1 && mag_.size() == 1 && mag_[0] == 1;
}

BigInt BigInt::from_decimal(std::string_view digits) {
    BigInt out;
    if (digits.empty()) throw std::invalid_argument("empty digit string");
    // consume 9 digits at a time: x = x*10^9 + chunk
    std::size_t i = 0;
    while (i < digits.size()) {
        std::size_t take = std::min<std::size_t>(9, digits.size() - i);
        std::uint32_t chunk = 0;
        std::uint32_t scale = 1;
        for (std::size_t j = 0; j < take; ++j) {
            char c = digits[i + j];
            if (c < '0' || c > '9') throw std::invalid_argument("non-digit in decimal string");
            chunk = chunk * 10 + static_cast<std::uint32_t>(c - '0');
            scale *= 10;
        }
        out = out * BigInt(static_cast<long long>(scale)) + BigInt(static_cast<long long>(chunk));
        i += take;
    }
    return out;
}

BigInt BigInt::operator-() const {
    BigInt r = *this;
    r.sign_ = -r.sign_;
    return r;
}

BigInt BigInt::abs() const {
    BigInt r = *this;
    if (r.sign_ < 0) r.sign_ = 1;
    return r;
}

int BigInt::ucmp(const std::vector<std::uint32_t>& a, const std::vector<std::uint32_t>& b) {
    if (a.size() != b.size()) return a.size() < b.size() ? -1 : 1;
    for (std::size_t i = a.size(); i-- > 0;) {
        if (a[i] != b[i]) return a[i] < b[i] ? -1 : 1;
    }
    return 0;
}

std::vector<std::uint32_t> BigInt::uadd(const std::vector<std::uint32_t>& a,
                                        const std::vector<std::uint32_t>& b) {
    const auto& big = a.size() >= b.size() ? a : b;
    const auto& small = a.size() >= b.size() ? b : a;
    std::vector<std::uint32_t> r(big.size() + 1, 0);
    std::uint64_t carry = 0;
    for (std::size_t i = 0; i < big.size(); ++i) {
        std::uint64_t s = carry + big[i] + (i < small.size() ? small[i] : 0);
        r[i] = static_cast<std::uint32_t>(s);
        carry = s >> 32;
    }
    r[big.size()] = static_cast<std::uint32_t>(carry);
    while (!r.empty() && r.back() == 0) r.pop_back();
    return r;
}

// requires a >= b
std::vector<std::uint32_t> BigInt::usub(const std::vector<std::uint32_t>& a,
                                        const std::vector<std::uint32_t>& b) {
    std::vector<std::uint32_t> r(a.size(), 0);
    std::int64_t borrow = 0;
    for (std::size_t i = 0; i < a.size(); ++i) {
        std::int64_t d = static_cast<std::int64_t>(a[i]) - borrow - (i < b.size() ? b[i] : 0);
        if (d < 0) {
            d += static_cast<std::int64_t>(kBase);
            borrow = 1;
        } else {
            borrow = 0;
        }
        r[i] = static_cast<std::uint32_t>(d);
    }
    while (!r.empty() && r.back() == 0) r.pop_back();
    return r;
}

std::vector<std::uint32_t> BigInt::umul(const std::vector<std::uint32_t>& a,
                                        const std::vector<std::uint32_t>& b) {
    if (a.empty() || b.empty()) return {};
    std::vector<std::uint32_t> r(a.size() + b.size(), 0);
    for (std::size_t i = 0; i < a.size(); ++i) {
        std::uint64_t carry = 0;
        for (std::size_t j = 0; j < b.size(); ++j) {
            std::uint64_t cur = r[i + j] + static_cast<std::uint64_t>(a[i]) * b[j] + carry;
            r[i + j] = static_cast<std::uint32_t>(cur);
            carry = cur >> 32;
        }
        r[i + b.size()] += static_cast<std::uint32_t>(carry);
    }
    while (!r.empty() && r.back() == 0) r.pop_back();
    return r;
}

// Knuth algorithm D on base-2^32 limbs.
void BigInt::udivmod(const std::vector<std::uint32_t>& u, const std::vector<std::uint32_t>& v,
                     std::vector<std::uint32_t>& q, std::vector<std::uint32_t>& r) {
    q.clear();
    r.clear();
    if (v.empty()) throw std::domain_error("BigInt division by zero");
    if (ucmp(u, v) < 0) {
        r = u;
        return;
    }
    if (v.size() == 1) {
        // short division
        q.assign(u.size(), 0);
        std::uint64_t rem = 0;
        for (std::size_t i = u.size(); i-- > 0;) {
            std::uint64_t cur = (rem << 32) | u[i];
            q[i] = static_cast<std::uint32_t>(cur / v[0]);
            rem = cur % v[0];
        }
        while (!q.empty() && q.back() == 0) q.pop_back();
        if (rem) r.push_back(static_cast<std::uint32_t>(rem));
        return;
    }

    const int s = std::countl_zero(v.back());
    const std::size_t n = v.size();
    const std::size_t m = u.size() - n;

    // normalized copies; un gains one extra limb
    std::vector<std::uint32_t> vn(n), un(u.size() + 1, 0);
    for (std::size_t i = n; i-- > 0;) {
        vn[i] = static_cast<std::uint32_t>((static_cast<std::uint64_t>(v[i]) << s) |
                                           (i > 0 && s ? v[i - 1] >> (32 - s) : 0));
    }
    for (std::size_t i = u.size(); i-- > 0;) {
        un[i] = static_cast<std::uint32_t>((static_cast<std::uint64_t>(u[i]) << s) |
                                           (i > 0 && s ? u[i - 1] >> (32 - s) : 0));
    }
    un[u.size()] = s ? static_cast<std::uint32_t>(u.back() >> (32 - s)) : 0;

    q.assign(m + 1, 0);
    for (std::size_t j = m + 1; j-- > 0;) {
        std::uint64_t num = (static_cast<std::uint64_t>(un[j + n]) << 32) | un[j + n - 1];
        std::uint64_t qhat = num / vn[n - 1];
        std::uint64_t rhat = num % vn[n - 1];
        while (qhat >= kBase || qhat * vn[n - 2] > ((rhat << 32) | un[j + n - 2])) {
            --qhat;
            rhat += vn[n - 1];
            if (rhat >= kBase) break;
        }
        // multiply-subtract
        std::int64_t borrow = 0;
        std::uint64_t carry = 0;
        for (std::size_t i = 0; i < n; ++i) {
            std::uint64_t p = qhat * vn[i] + carry;
            carry = p >> 32;
            std::int64_t t = static_cast<std::int64_t>(un[i + j]) - borrow -
                             static_cast<std::int64_t>(p & 0xffffffffu);
            if (t < 0) {
                t += static_cast<std::int64_t>(kBase);
                borrow = 1;
            } else {
                borrow = 0;
            }
            un[i + j] = static_cast<std::uint32_t>(t);
        }
        std::int64_t t = static_cast<std::int64_t>(un[j + n]) - borrow - static_cast<std::int64_t>(carry);
        if (t < 0) {
            // qhat was one too large; add back
            t += static_cast<std::int64_t>(kBase);
            --qhat;
            std::uint64_t c2 = 0;
            for (std::size_t i = 0; i < n; ++i) {
                std::uint64_t s2 = static_cast<std::uint64_t>(un[i + j]) + vn[i] + c2;
                un[i + j] = static_cast<std::uint32_t>(s2);
                c2 = s2 >> 32;
            }
            t += static_cast<std::int64_t>(c2);
        }
        un[j + n] = static_cast<std::uint32_t>(t);
        q[j] = static_cast<std::uint32_t>(qhat);
    }
    while (!q.empty() && q.back() == 0) q.pop_back();

    // denormalize remainder
    r.assign(n, 0);
    for (std::size_t i = 0; i < n; ++i) {
        r[i] = static_cast<std::uint32_t>((un[i] >> s) |
                                          (s && i + 1 < n + 1 ? static_cast<std::uint64_t>(un[i + 1]) << (32 - s)
                                                              : 0));
    }
    while (!r.empty() && r.back() == 0) r.pop_back();
}

BigInt operator+(const BigInt& a, const BigInt& b) {
    if (a.sign_ == 0) return b;
    if (b.sign_ == 0) return a;
    BigInt r;
    if (a.sign_ == b.sign_) {
        r.mag_ = BigInt::uadd(a.mag_, b.mag_);
        r.sign_ = a.sign_;
    } else {
        int c = BigInt::ucmp(a.mag_, b.mag_);
        if (c == 0) return BigInt();
        if (c > 0) {
            r.mag_ = BigInt::usub(a.mag_, b.mag_);
            r.sign_ = a.sign_;
        } else {
            r.mag_ = BigInt::usub(b.mag_, a.mag_);
            r.sign_ = b.sign_;
        }
    }
    r.trim();
    return r;
}

BigInt operator-(const BigInt& a, const BigInt& b) { return a + (-b); }

BigInt operator*(const BigInt& a, const BigInt& b) {
    BigInt r;
    if (a.sign_ == 0 || b.sign_ == 0) return r;
    r.mag_ = BigInt::umul(a.mag_, b.mag_);
    r.sign_ = a.sign_ * b.sign_;
    r.trim();
    return r;
}

void BigInt::divmod(const BigInt& a, const BigInt& b, BigInt& q, BigInt& r) {
    std::vector<std::uint32_t> qm, rm;
    udivmod(a.mag_, b.mag_, qm, rm);
    q.mag_ = std::move(qm);
    q.sign_ = q.mag_.empty() ? 0 : a.sign_ * b.sign_;
    r.mag_ = std::move(rm);
    r.sign_ = r.mag_.empty() ? 0 : a.sign_;
}

BigInt operator/(const BigInt& a, const BigInt& b) {
    BigInt q, r;
    BigInt::divmod(a, b, q, r);
    return q;
}

BigInt operator%(const BigInt& a, const BigInt& b) {
    BigInt q, r;
    BigInt::divmod(a, b, q, r);
    return r;
}

BigInt BigInt::divexact(const BigInt& d) const {
    BigInt q, r;
    divmod(*this, d, q, r);
    assert(r.is_zero() && "divexact with nonzero remainder");
    return q;
}

BigInt& BigInt::operator<<=(unsigned bits) {
    if (sign_ == 0 || bits == 0) return *this;
    const unsigned limbs = bits / 32;
    const unsigned rem = bits % 32;
    if (rem) {
        std::uint32_t carry = 0;
        for (auto& limb : mag_) {
            std::uint32_t nc = limb >> (32 - rem);
            limb = (limb << rem) | carry;
            carry = nc;
        }
        if (carry) mag_.push_back(carry);
    }
    mag_.insert(mag_.begin(), limbs, 0);
    return *this;
}

BigInt BigInt::operator<<(unsigned bits) const {
    BigInt r = *this;
    r <<= bits;
    return r;
}

bool BigInt::operator==(const BigInt& o) const {
    return sign_ == o.sign_ && mag_ == o.mag_;
}

std::strong_ordering BigInt::operator<=>(const BigInt& o) const {
    if (sign_ != o.sign_) return sign_ <=> o.sign_;
    int c = ucmp(mag_, o.mag_) * sign_;
    return c <=> 0;
}

std::size_t BigInt::bit_length() const {
    if (mag_.empty()) return 0;
    return 32 * (mag_.size() - 1) + (32 - std::countl_zero(mag_.back()));
}

std::string BigInt::to_string() const {
    if (sign_ == 0) return "0";
    std::vector<std::uint32_t> work = mag_;
    std::string digits;
    const std::vector<std::uint32_t> ten9 = {1000000000u};
    while (!work.empty()) {
        std::vector<std::uint32_t> q, r;
        udivmod(work, ten9, q, r);
        std::uint32_t chunk = r.empty() ? 0 : r[0];
        for (int i = 0; i < 9; ++i) {
            digits.push_back(static_cast<char>('0' + chunk % 10));
            chunk /= 10;
        }
        work = std::move(q);
    }
    while (digits.size() > 1 && digits.back() == '0') digits.pop_back();
    if (sign_ < 0) digits.push_back('-');
    std::reverse(digits.begin(), digits.end());
    return digits;
}

double BigInt::to_double_scaled(long& exp2) const {
    exp2 = 0;
    if (sign_ == 0) return 0.0;
    const std::size_t bl = bit_length();
    // leading (up to) 64 bits of the magnitude
    std::uint64_t top = 0;
    int bits = 0;
    for (std::size_t i = mag_.size(); i-- > 0 && bits < 64;) {
        top = (top << 32) | mag_[i];
        bits += 32;
    }
    int lead_zeros = std::countl_zero(mag_.back());
    double frac = std::ldexp(static_cast<double>(top), -(bits - lead_zeros));
    exp2 = static_cast<long>(bl);
    return sign_ < 0 ? -frac : frac;
}

double BigInt::to_double() const {
    long e = 0;
    double f = to_double_scaled(e);
    return std::ldexp(f, static_cast<int>(e));
}

bool BigInt::fits_int64() const { return bit_length() <= 62; }

long long BigInt::to_int64() const {
    long long v = 0;
    for (std::size_t i = mag_.size(); i-- > 0;) v = (v << 32) | mag_[i];
    return sign_ < 0 ? -v : v;
}

BigInt gcd(BigInt a, BigInt b) {
    a = a.abs();
    b = b.abs();
    while (!b.is_zero()) {
        BigInt r = a % b;
        a = std::move(b);
        b = std::move(r);
    }
    return a;
}

BigInt lcm(const BigInt& a, const BigInt& b) {
    if (a.is_zero() || b.is_zero()) return BigInt(0);
    return (a * b).abs().divexact(gcd(a, b));
}

// ---------------------------------------------------------------------------

Rational::Rational(BigInt num, BigInt den) : num_(std::move(num)), den_(std::move(den)) {
    if (den_.is_zero()) throw std::domain_error("rational with zero denominator");
    normalize();
}

void Rational::normalize() {
    if (den_.sign() < 0) {
        num_ = -num_;
        den_ = -den_;
    }
    if (num_.is_zero()) {
        den_ = BigInt(1);
        return;
    }
    BigInt g = gcd(num_, den_);
    if (!g.is_one()) {
        num_ = num_.divexact(g);
        den_ = den_.divexact(g);
    }
}

std::optional<Rational> Rational::parse(std::string_view text) {
    // strip spaces
    while (!text.empty() && text.front() == ' ') text.remove_prefix(1);
    while (!text.empty() && text.back() == ' ') text.remove_suffix(1);
    if (text.empty()) return std::nullopt;
    bool neg = false;
    if (text.front() == '-' || text.front() == '+') {
        neg = text.front() == '-';
        text.remove_prefix(1);
    }
    auto slash = text.find('/');
    auto is_digits = [](std::string_view s) {
        if (s.empty()) return false;
        for (char c : s)
            if (c < '0' || c > '9') return false;
        return true;
    };
    Rational out;
    if (slash != std::string_view::npos) {
        std::string_view p = text.substr(0, slash), q = text.substr(slash + 1);
        if (!is_digits(p) || !is_digits(q)) return std::nullopt;
        BigInt den = BigInt::from_decimal(q);
        if (den.is_zero()) return std::nullopt;
        out = Rational(BigInt::from_decimal(p), std::move(den));
    } else {
        auto dot = text.find('.');
        if (dot == std::string_view::npos) {
            if (!is_digits(text)) return std::nullopt;
            out = Rational(BigInt::from_decimal(text), BigInt(1));
        } else {
            std::string_view ip = text.substr(0, dot), fp = text.substr(dot + 1);
            if (!is_digits(ip) || !is_digits(fp)) return std::nullopt;
            BigInt scale(1);
            for (std::size_t i = 0; i < fp.size(); ++i) scale = scale * BigInt(10);
            BigInt num = BigInt::from_decimal(ip) * scale + BigInt::from_decimal(fp);
            out = Rational(std::move(num), std::move(scale));
        }
    }
    return neg ? -out : out;
}

Rational Rational::from_double(double x) {
    if (!std::isfinite(x)) throw std::domain_error("non-finite double");
    if (x == 0.0) return Rational(0);
    int e = 0;
    double m = std::frexp(x, &e); // x = m * 2^e, |m| in [0.5, 1)
    long long im = static_cast<long long>(std::ldexp(m, 53)); // exact
    int shift = e - 53;
    if (shift >= 0) return Rational(BigInt(im) << static_cast<unsigned>(shift), BigInt(1));
    return Rational(BigInt(im), BigInt(1) << static_cast<unsigned>(-shift));
}

Rational Rational::operator-() const {
    Rational r = *this;
    r.num_ = -r.num_;
    return r;
}

Rational operator+(const Rational& a, const Rational& b) {
    return Rational(a.num_ * b.den_ + b.num_ * a.den_, a.den_ * b.den_);
}

Rational operator-(const Rational& a, const Rational& b) { return a + (-b); }

Rational operator*(const Rational& a, const Rational& b) {
    return Rational(a.num_ * b.num_, a.den_ * b.den_);
}

Rational operator/(const Rational& a, const Rational& b) {
    if (b.is_zero()) throw std::domain_error("rational division by zero");
    return Rational(a.num_ * b.den_, a.den_ * b.num_);
}

Rational& Rational::operator+=(const Rational& o) {
    *this = *this + o;
    return *this;
}

Rational& Rational::operator*=(const Rational& o) {
    *this = *this * o;
    return *this;
}

Rational Rational::pow(unsigned k) const {
    Rational base = *this, acc(1);
    while (k) {
        if (k & 1u) acc = acc * base;
        base = base * base;
        k >>= 1u;
    }
    return acc;
}

bool Rational::operator==(const Rational& o) const {
    return num_ == o.num_ && den_ == o.den_;
}

std::strong_ordering Rational::operator<=>(const Rational& o) const {
    return (num_ * o.den_) <=> (o.num_ * den_);
}

std::string Rational::to_string() const {
    if (den_.is_one()) return num_.to_string();
    return num_.to_string() + "/" + den_.to_string();
}

double Rational::to_double() const {
    if (num_.is_zero()) return 0.0;
    long en = 0, ed = 0;
    double fn = num_.to_double_scaled(en);
    double fd = den_.to_double_scaled(ed);
    return std::ldexp(fn / fd, static_cast<int>(en - ed));
}

} // namespace jointorbit
