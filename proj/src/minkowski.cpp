#include "sha_predict/minkowski.hpp"

#include <algorithm>

#include "sha_predict/errors.hpp"

namespace sha_predict {

namespace {

Rational pow2_inverse(const BigInt& e)
{
    if (!e.fits_ulong_p()) {
        throw InputError("partial quotients too large for exact evaluation");
    }
    BigInt den;
    mpz_ui_pow_ui(den.get_mpz_t(), 2, e.get_ui());
    return Rational(BigInt(1), den);
}

DyadicOrRational make_image(Rational v)
{
    v.canonicalize();
    return {v.get_num(), v.get_den()};
}

// sum_{k=1}^{K} (-1)^(k+1) 2^-(a1+...+ak) over quotients[1..], plus the
// exponent and sign reached at the end.
struct PartialSum {
    Rational sum{0};
    BigInt exponent{0};
    int sign = 1; // sign of the next term
};

void accumulate(PartialSum& acc, const std::vector<BigInt>& quotients, std::size_t from)
{
    for (std::size_t i = from; i < quotients.size(); ++i) {
        acc.exponent += quotients[i];
        const Rational term = pow2_inverse(acc.exponent);
        acc.sum += acc.sign > 0 ? term : Rational(-term);
        acc.sign = -acc.sign;
    }
}

} // namespace

bool DyadicOrRational::is_dyadic() const
{
    return mpz_popcount(denominator.get_mpz_t()) == 1;
}

Rational DyadicOrRational::value() const
{
    Rational v(numerator, denominator);
    v.canonicalize();
    return v;
}

std::string DyadicOrRational::to_string() const
{
    return value().get_str();
}

DyadicOrRational question_mark(const Rational& x)
{
    if (x < 0 || x > 1) {
        throw InputError("question_mark needs a rational in [0, 1], got " + x.get_str());
    }
    const auto cf = cf_expand(x);
    PartialSum acc;
    accumulate(acc, cf.preperiod, 1);
    return make_image(Rational(cf.preperiod.front()) + 2 * acc.sum);
}

DyadicOrRational question_mark_quad(const QuadNumber& x)
{
    if (x.is_rational()) {
        throw InputError("question_mark_quad needs an irrational input; use question_mark for rationals");
    }
    if (x.sign() <= 0 || x.floor() != 0) {
        throw InputError("question_mark_quad needs a value in (0, 1), got " + x.to_string());
    }
    const auto cf = cf_expand(x);
    PartialSum acc;
    accumulate(acc, cf.preperiod, 1);

    // One period contributes T; each further period scales it by
    // q = (-1)^L 2^-P with L the period length and P its quotient sum.
    PartialSum one_period;
    one_period.sign = acc.sign;
    one_period.exponent = acc.exponent;
    accumulate(one_period, cf.period, 0);
    const Rational tail = one_period.sum;
    BigInt period_sum = 0;
    for (const auto& q : cf.period) {
        period_sum += q;
    }
    Rational ratio = pow2_inverse(period_sum);
    if (cf.period.size() % 2 == 1) {
        ratio = -ratio;
    }
    const Rational total = acc.sum + tail / (1 - ratio);
    return make_image(Rational(cf.preperiod.front()) + 2 * total);
}

std::vector<ScalePoint> scale_embedding(const QuadNumber& theta, std::int64_t bound)
{
    if (theta.is_rational() || theta.sign() <= 0 || theta.floor() != 0) {
        throw InputError("theta must be a quadratic irrational in (0, 1)");
    }
    if (bound < 1) {
        throw InputError("bound must be >= 1");
    }
    const auto d = theta.radicand();
    std::vector<ScalePoint> out;
    for (std::int64_t n = -bound; n <= bound; ++n) {
        for (std::int64_t m = -bound; m <= bound; ++m) {
            const QuadNumber v = QuadNumber::rational(Rational(m), d) + QuadNumber::rational(Rational(n), d) * theta;
            if (v.sign() < 0 || QuadNumber::rational(Rational(1), d) < v) {
                continue;
            }
            ScalePoint p;
            p.m = m;
            p.n = n;
            p.value = v;
            p.image = v.is_rational() ? question_mark(v.to_rational()) : question_mark_quad(v);
            out.push_back(std::move(p));
        }
    }
    std::sort(out.begin(), out.end(), [](const ScalePoint& x, const ScalePoint& y) { return x.value < y.value; });
    return out;
}

} // namespace sha_predict
