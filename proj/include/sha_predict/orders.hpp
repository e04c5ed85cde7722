#pragma once

// Quadratic orders Z + f*O_K, their (wide) class numbers via the conductor
// formula, and the least-conductor search in a real quadratic field.

#include <cstdint>
#include <string>

namespace sha_predict {

enum class FieldSign { imaginary, real };

struct QuadOrder {
    std::int64_t fundamental_disc = 0; // d_K
    std::int64_t conductor = 1;        // f
    std::int64_t disc = 0;             // f^2 * d_K

    bool is_maximal() const { return conductor == 1; }
    std::string to_string() const;
    bool operator==(const QuadOrder&) const = default;
};

bool is_fundamental_discriminant(std::int64_t d);

// Throws InputError unless d_K is fundamental and f >= 1.
QuadOrder make_order(std::int64_t fundamental_disc, std::int64_t conductor);

// Order of conductor f in Q(sqrt(-D)) or Q(sqrt(D)), D > 1 square-free.
QuadOrder order_from_cm_input(std::int64_t D, std::int64_t f, FieldSign sign);

struct ClassNumberOptions {
    // Largest power of the fundamental unit tried when looking for the
    // first power that lies in the order.
    std::int64_t max_unit_power = 10'000'000;
    // Compare against a direct count of reduced forms when |disc| is small.
    bool cross_check = true;
    std::int64_t cross_check_limit = 1'000'000;
};

// Wide class number h(O_f) = h(d_K) * f * prod_{p | f}(1 - (d_K/p)/p) / [O_K^x : O_f^x].
std::int64_t class_number_order(const QuadOrder& order, const ClassNumberOptions& opts = {});

// [O_K^x : O_f^x]. Imaginary: 3 or 2 for d_K = -3, -4 when f > 1, else 1.
// Real: least m >= 1 with eps^m in O_f, eps the fundamental unit of O_K.
std::int64_t unit_index(const QuadOrder& order, const ClassNumberOptions& opts = {});

// Direct count from reduced forms (wide count for positive discriminants).
std::int64_t class_number_by_forms(std::int64_t disc);

inline constexpr std::int64_t default_conductor_bound = 10'000;

// Least f' in [1, bound] with h(Z + f' O_k) = h_target, k = Q(sqrt(D)).
// Throws SearchExhausted carrying the bound when there is none.
std::int64_t conductor_search(std::int64_t D, std::int64_t h_target, std::int64_t bound = default_conductor_bound,
                              const ClassNumberOptions& opts = {});

} // namespace sha_predict
