#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <vector>

namespace sha_predict {

// A finite abelian group Z/d1 + ... + Z/dr with d1 | d2 | ... | dr, each
// di >= 2. The empty list is the trivial group.
class AbelianGroupStructure {
public:
    AbelianGroupStructure() = default;

    // Accepts any list of cyclic orders >= 1 and canonicalizes it into the
    // invariant-factor chain; 1s are dropped.
    static AbelianGroupStructure from_cyclic_factors(const std::vector<std::int64_t>& orders);

    // Requires an already-valid divisor chain; throws InputError otherwise.
    static AbelianGroupStructure from_divisors(const std::vector<std::int64_t>& divisors);

    // p -> partition (exponents, descending) of the p-Sylow subgroup.
    static AbelianGroupStructure from_sylow(const std::map<std::int64_t, std::vector<int>>& sylow);

    const std::vector<std::int64_t>& divisors() const noexcept { return divisors_; }
    std::int64_t order() const;
    bool is_trivial() const noexcept { return divisors_.empty(); }

    // p -> exponents (descending) of each cyclic p-power factor.
    std::map<std::int64_t, std::vector<int>> sylow() const;

    int two_adic_valuation() const;
    bool two_sylow_cyclic() const;
    AbelianGroupStructure odd_part() const;

    std::string to_string() const;

    friend AbelianGroupStructure operator+(const AbelianGroupStructure& x, const AbelianGroupStructure& y);
    bool operator==(const AbelianGroupStructure&) const = default;

private:
    std::vector<std::int64_t> divisors_;
};

} // namespace sha_predict
