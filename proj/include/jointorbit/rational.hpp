#pragma once

#include <compare>
#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace jointorbit {

/// Arbitrary-precision signed integer.
///
/// Magnitude is stored as base-2^32 limbs, little endian, with no leading
/// zero limbs. The matrices this project handles are tiny (tens of rows),
/// so schoolbook algorithms are used throughout.
class BigInt {
  public:
    BigInt() = default;
    BigInt(long long v);

    // Parses a plain digit string (no sign).
    static BigInt from_decimal(std::string_view digits);

    int sign() const { return sign_; }
    bool is_zero() const { return sign_ == 0; }
    bool is_one() const;

    BigInt operator-() const;
    BigInt abs() const;

    friend BigInt operator+(const BigInt& a, const BigInt& b);
    friend BigInt operator-(const BigInt& a, const BigInt& b);
    friend BigInt operator*(const BigInt& a, const BigInt& b);

    // Truncated division: a = q*b + r with |r| < |b| and sign(r) == sign(a).
    static void divmod(const BigInt& a, const BigInt& b, BigInt& q, BigInt& r);
    friend BigInt operator/(const BigInt& a, const BigInt& b);
    friend BigInt operator%(const BigInt& a, const BigInt& b);

    // Division known to be exact; asserts a zero remainder.
    BigInt divexact(const BigInt& d) const;

    BigInt& operator<<=(unsigned bits);
    BigInt operator<<(unsigned bits) const;

    bool operator==(const BigInt& o) const;
    std::strong_ordering operator<=>(const BigInt& o) const;

    std::size_t bit_length() const;

    std::string to_string() const;

    // Nearest double; very large values overflow to +-inf.
    double to_double() const;
    // Mantissa in [0.5, 1) (sign applied) and the matching power of two;
    // never overflows.
    double to_double_scaled(long& exp2) const;

    bool fits_int64() const;
    long long to_int64() const;

  private:
    int sign_ = 0;                   // -1, 0, +1
    std::vector<std::uint32_t> mag_; // |value|, little endian

    void trim();
    static int ucmp(const std::vector<std::uint32_t>& a, const std::vector<std::uint32_t>& b);
    static std::vector<std::uint32_t> uadd(const std::vector<std::uint32_t>& a,
                                           const std::vector<std::uint32_t>& b);
    static std::vector<std::uint32_t> usub(const std::vector<std::uint32_t>& a,
                                           const std::vector<std::uint32_t>& b);
    static std::vector<std::uint32_t> umul(const std::vector<std::uint32_t>& a,
                                           const std::vector<std::uint32_t>& b);
    static void udivmod(const std::vector<std::uint32_t>& u, const std::vector<std::uint32_t>& v,
                        std::vector<std::uint32_t>& q, std::vector<std::uint32_t>& r);
};

BigInt gcd(BigInt a, BigInt b);
BigInt lcm(const BigInt& a, const BigInt& b);

/// Exact rational number, always in lowest terms with a positive denominator.
class Rational {
  public:
    Rational() : num_(0), den_(1) {}
    Rational(long long v) : num_(v), den_(1) {}
    Rational(BigInt num, BigInt den);

    // Accepts "p/q", optionally signed integers and finite decimals
    // ("-3", "2.5", "7/4"). Returns nullopt on anything else.
    static std::optional<Rational> parse(std::string_view text);

    // Exact conversion of a finite double (doubles are dyadic rationals).
    static Rational from_double(double x);

    const BigInt& num() const { return num_; }
    const BigInt& den() const { return den_; }

    bool is_zero() const { return num_.is_zero(); }
    bool is_integer() const { return den_.is_one(); }
    int sign() const { return num_.sign(); }

    Rational operator-() const;
    friend Rational operator+(const Rational& a, const Rational& b);
    friend Rational operator-(const Rational& a, const Rational& b);
    friend Rational operator*(const Rational& a, const Rational& b);
    // Throws std::domain_error when b == 0.
    friend Rational operator/(const Rational& a, const Rational& b);
    Rational& operator+=(const Rational& o);
    Rational& operator*=(const Rational& o);

    Rational pow(unsigned k) const;

    bool operator==(const Rational& o) const;
    std::strong_ordering operator<=>(const Rational& o) const;

    // "p/q", or just "p" for integers.
    std::string to_string() const;
    double to_double() const;

  private:
    BigInt num_;
    BigInt den_; // > 0
    void normalize();
};

} // namespace jointorbit
