#pragma once

// Exact integer and quadratic-field arithmetic: Kronecker symbol,
// continued fractions of rationals and quadratic irrationals, and
// fundamental solutions of x^2 - disc*y^2 = +-4.

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include <gmpxx.h>

namespace sha_predict {

using BigInt = mpz_class;
using Rational = mpq_class;

// ---------------------------------------------------------------- integers

std::int64_t isqrt(std::int64_t n);
bool is_square(std::int64_t n);
bool is_squarefree(std::int64_t n);
bool is_prime(std::int64_t n);

// Prime factorization of |n| (n != 0) by trial division, primes ascending.
std::vector<std::pair<std::int64_t, int>> factorize(std::int64_t n);

// Discriminant of some quadratic order: nonzero, not a square, = 0 or 1 mod 4.
bool is_quadratic_discriminant(std::int64_t disc);

// Kronecker symbol (a/n). Throws InputError for n == 0.
int kronecker(std::int64_t a, std::int64_t n);

std::string to_string(const BigInt& v);
std::string to_string(const Rational& v);

// ----------------------------------------------------------- QuadNumber

// An element (a + b*sqrt(d)) / c of the real quadratic field Q(sqrt(d)).
//
// Always normalized: d > 1 square-free, c > 0, gcd(a, b, c) = 1. A value
// with b == 0 is rational; the radicand is kept so it can be combined with
// irrational values of the same field. A quadratic irrational is a value
// with b != 0.
class QuadNumber {
public:
    QuadNumber() = default;

    // d may carry square factors; they are moved into b.
    QuadNumber(BigInt a, BigInt b, BigInt c, std::int64_t d);

    static QuadNumber rational(const Rational& q, std::int64_t d);

    const BigInt& a() const noexcept { return a_; }
    const BigInt& b() const noexcept { return b_; }
    const BigInt& c() const noexcept { return c_; }
    std::int64_t radicand() const noexcept { return d_; }

    bool is_rational() const noexcept { return b_ == 0; }
    Rational to_rational() const; // requires is_rational()

    int sign() const;
    BigInt floor() const;
    QuadNumber conjugate() const;
    Rational trace() const;
    Rational norm() const;
    double to_double() const;

    // Reduced literal, e.g. "(-1+sqrt5)/2", "sqrt2-1", "3/4".
    std::string to_string() const;

    friend QuadNumber operator+(const QuadNumber& x, const QuadNumber& y);
    friend QuadNumber operator-(const QuadNumber& x, const QuadNumber& y);
    friend QuadNumber operator*(const QuadNumber& x, const QuadNumber& y);
    friend QuadNumber operator/(const QuadNumber& x, const QuadNumber& y);
    QuadNumber operator-() const;

    friend bool operator==(const QuadNumber& x, const QuadNumber& y);
    friend bool operator<(const QuadNumber& x, const QuadNumber& y);
    friend bool operator>(const QuadNumber& x, const QuadNumber& y) { return y < x; }
    friend bool operator<=(const QuadNumber& x, const QuadNumber& y) { return !(y < x); }
    friend bool operator>=(const QuadNumber& x, const QuadNumber& y) { return !(x < y); }

private:
    struct Trusted {};
    // d already square-free.
    QuadNumber(Trusted, BigInt a, BigInt b, BigInt c, std::int64_t d);

    void normalize();
    static std::int64_t common_radicand(const QuadNumber& x, const QuadNumber& y);

    BigInt a_{0};
    BigInt b_{0};
    BigInt c_{1};
    std::int64_t d_{2};
};

// ---------------------------------------------------- continued fractions

// x = [preperiod..., period, period, ...]. For rationals the period is
// empty and the last partial quotient is >= 2 whenever there is more than
// one.
struct ContinuedFraction {
    std::vector<BigInt> preperiod;
    std::vector<BigInt> period;

    bool operator==(const ContinuedFraction&) const = default;
};

// Positive rational input (zero is accepted and gives [0]).
ContinuedFraction cf_expand(const Rational& x);

// Positive quadratic irrational input; rational QuadNumbers are forwarded.
// max_steps bounds the number of partial quotients examined.
ContinuedFraction cf_expand(const QuadNumber& x, std::size_t max_steps = 1'000'000);

// Exact value of an expansion. The radicand is only used for rational
// expansions, which carry no field of their own.
QuadNumber cf_value(const ContinuedFraction& cf, std::int64_t radicand_hint = 2);

std::string to_string(const ContinuedFraction& cf);

// ------------------------------------------------------------------ Pell

// Smallest positive solution of x^2 - disc*y^2 = sign with sign = +-4;
// (x + y*sqrt(disc))/2 is the fundamental unit of the order of
// discriminant disc.
struct PellSolution {
    BigInt x;
    BigInt y;
    int sign = 4;
};

// Found from the convergents of the order's generator; max_steps bounds
// the number of convergents scanned.
PellSolution fundamental_pell(std::int64_t disc, std::size_t max_steps = 1'000'000);

} // namespace sha_predict
