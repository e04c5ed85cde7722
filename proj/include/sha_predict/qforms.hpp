#pragma once

// Binary quadratic forms ax^2 + bxy + cy^2: reduction, Gauss composition
// and class groups for negative discriminants; cycles of reduced forms and
// narrow/wide class numbers for positive ones.

#include <cstdint>
#include <string>
#include <vector>

#include "sha_predict/abelian.hpp"

namespace sha_predict {

struct BinaryQuadraticForm {
    std::int64_t a = 0;
    std::int64_t b = 0;
    std::int64_t c = 0;

    std::int64_t discriminant() const { return b * b - 4 * a * c; }
    bool is_primitive() const;
    std::string to_string() const;

    auto operator<=>(const BinaryQuadraticForm&) const = default;
};

// (1, b, (b^2 - disc)/4) with b = disc mod 2.
BinaryQuadraticForm principal_form(std::int64_t disc);

// Unique reduced representative: |b| <= a <= c, b >= 0 if |b| == a or a == c.
BinaryQuadraticForm reduce_definite(const BinaryQuadraticForm& f);

// Primitive reduced forms of a negative discriminant, sorted by (a, b).
std::vector<BinaryQuadraticForm> enumerate_reduced(std::int64_t disc);

// Reduced representative of the composite class. Inputs primitive,
// positive definite, same discriminant.
BinaryQuadraticForm compose(const BinaryQuadraticForm& f, const BinaryQuadraticForm& g);

BinaryQuadraticForm inverse(const BinaryQuadraticForm& f);
BinaryQuadraticForm power(const BinaryQuadraticForm& f, std::int64_t n);

struct ClassGroupOptions {
    std::int64_t max_class_number = 10'000;
};

// Structure of the form class group of a negative discriminant, from the
// element orders of the reduced forms under composition.
AbelianGroupStructure class_group_definite(std::int64_t disc, const ClassGroupOptions& opts = {});

// --- positive discriminants

// 0 < b < sqrt(disc) and sqrt(disc) - b < 2|a| < sqrt(disc) + b.
bool is_reduced_indefinite(const BinaryQuadraticForm& f);

// All primitive reduced forms of a positive non-square discriminant.
std::vector<BinaryQuadraticForm> enumerate_reduced_indefinite(std::int64_t disc);

// Cycle step: (a, b, c) -> (c, b', (b'^2 - disc)/4c) with b' = -b mod 2|c|.
BinaryQuadraticForm rho(const BinaryQuadraticForm& f);

struct IndefiniteClassNumbers {
    std::int64_t h_narrow = 0;
    std::int64_t h_wide = 0;
};

IndefiniteClassNumbers class_numbers_indefinite(std::int64_t disc);

} // namespace sha_predict
