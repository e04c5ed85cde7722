#pragma once

// Minkowski question-mark function, evaluated exactly:
//   ?(x) = a0 + 2 * sum_{k>=1} (-1)^(k+1) / 2^(a1 + ... + ak),  x = [a0; a1, a2, ...].
// Rationals have finite expansions and map to dyadic rationals; quadratic
// irrationals have eventually periodic expansions and the tail is a
// geometric series, so they map to non-dyadic rationals.

#include <cstdint>
#include <vector>

#include "sha_predict/arith.hpp"

namespace sha_predict {

// Reduced fraction in [0, 1].
struct DyadicOrRational {
    BigInt numerator;
    BigInt denominator;

    bool is_dyadic() const;
    Rational value() const;
    std::string to_string() const;
    bool operator==(const DyadicOrRational&) const = default;
};

DyadicOrRational question_mark(const Rational& x);
DyadicOrRational question_mark_quad(const QuadNumber& x);

struct ScalePoint {
    std::int64_t m = 0;
    std::int64_t n = 0;
    QuadNumber value; // m + n*theta
    DyadicOrRational image;
};

// Every m + n*theta in [0, 1] with |m|, |n| <= bound, sorted by value,
// paired with its question-mark image.
std::vector<ScalePoint> scale_embedding(const QuadNumber& theta, std::int64_t bound);

} // namespace sha_predict
