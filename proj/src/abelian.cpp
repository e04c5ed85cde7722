#include "sha_predict/abelian.hpp"

#include <algorithm>
#include <sstream>

#include "sha_predict/arith.hpp"
#include "sha_predict/errors.hpp"

namespace sha_predict {

namespace {

std::int64_t ipow(std::int64_t p, int e)
{
    std::int64_t r = 1;
    for (int i = 0; i < e; ++i) {
        r *= p;
    }
    return r;
}

} // namespace

AbelianGroupStructure AbelianGroupStructure::from_sylow(const std::map<std::int64_t, std::vector<int>>& sylow)
{
    std::size_t rank = 0;
    for (const auto& [p, exps] : sylow) {
        rank = std::max(rank, exps.size());
    }
    // Largest invariant factor collects the largest power of every prime.
    std::vector<std::int64_t> chain(rank, 1);
    for (const auto& [p, exps] : sylow) {
        auto sorted = exps;
        std::sort(sorted.begin(), sorted.end(), std::greater<>());
        for (std::size_t i = 0; i < sorted.size(); ++i) {
            chain[rank - 1 - i] *= ipow(p, sorted[i]);
        }
    }
    AbelianGroupStructure g;
    for (auto d : chain) {
        if (d > 1) {
            g.divisors_.push_back(d);
        }
    }
    return g;
}

AbelianGroupStructure AbelianGroupStructure::from_cyclic_factors(const std::vector<std::int64_t>& orders)
{
    std::map<std::int64_t, std::vector<int>> sylow;
    for (auto n : orders) {
        if (n < 1) {
            throw InputError("cyclic factor orders must be >= 1");
        }
        if (n == 1) {
            continue;
        }
        for (const auto& [p, e] : factorize(n)) {
            sylow[p].push_back(e);
        }
    }
    return from_sylow(sylow);
}

AbelianGroupStructure AbelianGroupStructure::from_divisors(const std::vector<std::int64_t>& divisors)
{
    for (std::size_t i = 0; i < divisors.size(); ++i) {
        if (divisors[i] < 2) {
            throw InputError("elementary divisors must be >= 2");
        }
        if (i > 0 && divisors[i] % divisors[i - 1] != 0) {
            throw InputError("elementary divisors must form a divisor chain d1 | d2 | ...");
        }
    }
    AbelianGroupStructure g;
    g.divisors_ = divisors;
    return g;
}

std::int64_t AbelianGroupStructure::order() const
{
    std::int64_t n = 1;
    for (auto d : divisors_) {
        n *= d;
    }
    return n;
}

std::map<std::int64_t, std::vector<int>> AbelianGroupStructure::sylow() const
{
    std::map<std::int64_t, std::vector<int>> out;
    for (auto it = divisors_.rbegin(); it != divisors_.rend(); ++it) {
        for (const auto& [p, e] : factorize(*it)) {
            out[p].push_back(e);
        }
    }
    return out;
}

int AbelianGroupStructure::two_adic_valuation() const
{
    int v = 0;
    for (auto d : divisors_) {
        while (d % 2 == 0) {
            d /= 2;
            ++v;
        }
    }
    return v;
}

bool AbelianGroupStructure::two_sylow_cyclic() const
{
    return std::count_if(divisors_.begin(), divisors_.end(), [](auto d) { return d % 2 == 0; }) <= 1;
}

AbelianGroupStructure AbelianGroupStructure::odd_part() const
{
    std::vector<std::int64_t> odd;
    for (auto d : divisors_) {
        while (d % 2 == 0) {
            d /= 2;
        }
        odd.push_back(d);
    }
    return from_cyclic_factors(odd);
}

std::string AbelianGroupStructure::to_string() const
{
    if (divisors_.empty()) {
        return "trivial";
    }
    std::ostringstream os;
    for (std::size_t i = 0; i < divisors_.size(); ++i) {
        os << (i ? " + " : "") << "Z/" << divisors_[i];
    }
    return os.str();
}

AbelianGroupStructure operator+(const AbelianGroupStructure& x, const AbelianGroupStructure& y)
{
    auto all = x.divisors_;
    all.insert(all.end(), y.divisors_.begin(), y.divisors_.end());
    return AbelianGroupStructure::from_cyclic_factors(all);
}

} // namespace sha_predict
