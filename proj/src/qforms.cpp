#include "sha_predict/qforms.hpp"

#include <map>
#include <numeric>
#include <set>
#include <sstream>
#include <tuple>

#include "sha_predict/arith.hpp"
#include "sha_predict/errors.hpp"

namespace sha_predict {

using i128 = __int128;

namespace {

std::int64_t floor_div(std::int64_t a, std::int64_t b)
{
    std::int64_t q = a / b;
    if ((a % b != 0) && ((a < 0) != (b < 0))) {
        --q;
    }
    return q;
}

std::int64_t floor_mod(i128 a, std::int64_t m)
{
    i128 r = a % m;
    if (r < 0) {
        r += m;
    }
    return static_cast<std::int64_t>(r);
}

// u*a + v*b = g = gcd(a, b) >= 0
std::tuple<std::int64_t, std::int64_t, std::int64_t> xgcd(std::int64_t a, std::int64_t b)
{
    std::int64_t old_r = a, r = b;
    std::int64_t old_s = 1, s = 0;
    std::int64_t old_t = 0, t = 1;
    while (r != 0) {
        const auto q = old_r / r;
        std::tie(old_r, r) = std::make_tuple(r, old_r - q * r);
        std::tie(old_s, s) = std::make_tuple(s, old_s - q * s);
        std::tie(old_t, t) = std::make_tuple(t, old_t - q * t);
    }
    if (old_r < 0) {
        return {-old_s, -old_t, -old_r};
    }
    return {old_s, old_t, old_r};
}

void require_definite(const BinaryQuadraticForm& f)
{
    if (f.discriminant() >= 0 || f.a <= 0) {
        throw InputError("form " + f.to_string() + " is not positive definite");
    }
    if (!f.is_primitive()) {
        throw InputError("form " + f.to_string() + " is not primitive");
    }
}

void require_negative_discriminant(std::int64_t disc)
{
    if (disc >= 0 || !is_quadratic_discriminant(disc)) {
        throw InputError("expected a negative discriminant = 0,1 mod 4, got " + std::to_string(disc));
    }
}

} // namespace

bool BinaryQuadraticForm::is_primitive() const
{
    return std::gcd(std::gcd(a, b), c) == 1;
}

std::string BinaryQuadraticForm::to_string() const
{
    std::ostringstream os;
    os << "(" << a << "," << b << "," << c << ")";
    return os.str();
}

BinaryQuadraticForm principal_form(std::int64_t disc)
{
    if (!is_quadratic_discriminant(disc)) {
        throw InputError("not a quadratic discriminant: " + std::to_string(disc));
    }
    const std::int64_t b = ((disc % 2) + 2) % 2;
    return {1, b, (b * b - disc) / 4};
}

BinaryQuadraticForm reduce_definite(const BinaryQuadraticForm& f)
{
    require_definite(f);
    const auto disc = f.discriminant();
    auto [a, b, c] = f;
    for (;;) {
        // b into (-a, a]
        if (!(-a < b && b <= a)) {
            const auto q = floor_div(a - b, 2 * a);
            b += 2 * a * q;
            c = static_cast<std::int64_t>((static_cast<i128>(b) * b - disc) / (4 * static_cast<i128>(a)));
        }
        if (a > c) {
            std::swap(a, c);
            b = -b;
            continue;
        }
        break;
    }
    if ((a == c || a == -b) && b < 0) {
        b = -b;
    }
    return {a, b, c};
}

std::vector<BinaryQuadraticForm> enumerate_reduced(std::int64_t disc)
{
    require_negative_discriminant(disc);
    std::vector<BinaryQuadraticForm> out;
    const std::int64_t n = -disc;
    const std::int64_t parity = n % 2;
    for (std::int64_t a = 1; 3 * a * a <= n; ++a) {
        std::int64_t b = -a + 1;
        if (((b % 2) + 2) % 2 != parity) {
            ++b;
        }
        for (; b <= a; b += 2) {
            const std::int64_t num = b * b + n;
            if (num % (4 * a) != 0) {
                continue;
            }
            const std::int64_t c = num / (4 * a);
            if (c < a || (b < 0 && a == c)) {
                continue;
            }
            if (std::gcd(std::gcd(a, b), c) != 1) {
                continue;
            }
            out.push_back({a, b, c});
        }
    }
    return out;
}

BinaryQuadraticForm compose(const BinaryQuadraticForm& f, const BinaryQuadraticForm& g)
{
    require_definite(f);
    require_definite(g);
    if (f.discriminant() != g.discriminant()) {
        throw InputError("cannot compose forms of discriminants " + std::to_string(f.discriminant()) + " and " +
                         std::to_string(g.discriminant()));
    }
    const auto disc = f.discriminant();
    auto f1 = f;
    auto f2 = g;
    if (f1.a > f2.a) {
        std::swap(f1, f2);
    }
    const std::int64_t s = (f1.b + f2.b) / 2;
    const std::int64_t n = f2.b - s;

    std::int64_t y1 = 0;
    std::int64_t d = f1.a;
    if (f2.a % f1.a != 0) {
        auto [u, v, g1] = xgcd(f2.a, f1.a);
        y1 = u;
        d = g1;
    }
    std::int64_t x2 = 0;
    std::int64_t y2 = -1;
    std::int64_t d1 = d;
    if (s % d != 0) {
        auto [u, v, g2] = xgcd(s, d);
        x2 = u;
        y2 = -v;
        d1 = g2;
    }
    const std::int64_t v1 = f1.a / d1;
    const std::int64_t v2 = f2.a / d1;
    const auto r = floor_mod(static_cast<i128>(y1) * y2 * n - static_cast<i128>(x2) * f2.c, v1);
    const i128 b3 = f2.b + static_cast<i128>(2) * v2 * r;
    const i128 a3 = static_cast<i128>(v1) * v2;
    const i128 c3 = (b3 * b3 - disc) / (4 * a3);
    return reduce_definite({static_cast<std::int64_t>(a3), static_cast<std::int64_t>(b3), static_cast<std::int64_t>(c3)});
}

BinaryQuadraticForm inverse(const BinaryQuadraticForm& f)
{
    return reduce_definite({f.a, -f.b, f.c});
}

BinaryQuadraticForm power(const BinaryQuadraticForm& f, std::int64_t n)
{
    auto result = principal_form(f.discriminant());
    auto base = n < 0 ? inverse(f) : reduce_definite(f);
    std::uint64_t e = n < 0 ? static_cast<std::uint64_t>(-n) : static_cast<std::uint64_t>(n);
    while (e > 0) {
        if (e & 1) {
            result = compose(result, base);
        }
        e >>= 1;
        if (e > 0) {
            base = compose(base, base);
        }
    }
    return result;
}

AbelianGroupStructure class_group_definite(std::int64_t disc, const ClassGroupOptions& opts)
{
    const auto forms = enumerate_reduced(disc);
    const auto h = static_cast<std::int64_t>(forms.size());
    if (h > opts.max_class_number) {
        throw SearchExhausted("class number of " + std::to_string(disc) + " exceeds the configured limit",
                              opts.max_class_number);
    }
    if (h == 1) {
        return {};
    }
    const auto identity = principal_form(disc);
    const auto primes = factorize(h);

    // Number of elements whose order divides p^j, for each p | h.
    std::map<std::int64_t, std::vector<std::int64_t>> killed;
    for (const auto& [p, e] : primes) {
        killed[p].assign(static_cast<std::size_t>(e) + 1, 0);
    }
    for (const auto& f : forms) {
        std::int64_t ord = h;
        for (const auto& [p, e] : primes) {
            while (ord % p == 0 && power(f, ord / p) == identity) {
                ord /= p;
            }
        }
        for (const auto& [p, e] : primes) {
            int v = 0;
            for (auto o = ord; o % p == 0; o /= p) {
                ++v;
            }
            for (int j = v; j <= e; ++j) {
                ++killed[p][static_cast<std::size_t>(j)];
            }
        }
    }

    // |G[p^j]| = p^(sum_i min(j, e_i)); successive differences of the
    // logarithms count the cyclic factors of exponent >= j.
    std::map<std::int64_t, std::vector<int>> sylow;
    for (const auto& [p, e] : primes) {
        std::vector<int> logs;
        for (auto count : killed[p]) {
            int l = 0;
            for (auto c = count; c > 1; c /= p) {
                ++l;
            }
            logs.push_back(l);
        }
        std::vector<int> at_least; // at_least[j-1] = #{i : e_i >= j}
        for (std::size_t j = 1; j < logs.size(); ++j) {
            at_least.push_back(logs[j] - logs[j - 1]);
        }
        std::vector<int> exps;
        for (int i = 0; !at_least.empty() && i < at_least.front(); ++i) {
            int ei = 0;
            while (ei < static_cast<int>(at_least.size()) && at_least[static_cast<std::size_t>(ei)] > i) {
                ++ei;
            }
            exps.push_back(ei);
        }
        sylow[p] = exps;
    }
    return AbelianGroupStructure::from_sylow(sylow);
}

// ------------------------------------------------------------- indefinite

bool is_reduced_indefinite(const BinaryQuadraticForm& f)
{
    const i128 disc = f.discriminant();
    if (disc <= 0) {
        return false;
    }
    const i128 b = f.b;
    const i128 two_a = 2 * static_cast<i128>(f.a < 0 ? -f.a : f.a);
    // 0 < b < sqrt(disc)
    if (b <= 0 || b * b >= disc) {
        return false;
    }
    // sqrt(disc) - b < 2|a|  <=>  (2|a| + b)^2 > disc
    if ((two_a + b) * (two_a + b) <= disc) {
        return false;
    }
    // 2|a| < sqrt(disc) + b  <=>  2|a| - b <= 0 or (2|a| - b)^2 < disc
    return two_a - b <= 0 || (two_a - b) * (two_a - b) < disc;
}

std::vector<BinaryQuadraticForm> enumerate_reduced_indefinite(std::int64_t disc)
{
    if (disc <= 0 || !is_quadratic_discriminant(disc)) {
        throw InputError("expected a positive non-square discriminant = 0,1 mod 4, got " + std::to_string(disc));
    }
    const auto s = isqrt(disc);
    std::vector<BinaryQuadraticForm> out;
    for (std::int64_t b = (disc % 2 == 0) ? 2 : 1; b <= s; b += 2) {
        const std::int64_t n = (disc - b * b) / 4; // = -ac
        for (std::int64_t abs_a = 1; 2 * abs_a <= s + b; ++abs_a) {
            if (n % abs_a != 0) {
                continue;
            }
            for (const std::int64_t a : {abs_a, -abs_a}) {
                const BinaryQuadraticForm f{a, b, -n / a};
                if (f.is_primitive() && is_reduced_indefinite(f)) {
                    out.push_back(f);
                }
            }
        }
    }
    return out;
}

BinaryQuadraticForm rho(const BinaryQuadraticForm& f)
{
    const auto disc = f.discriminant();
    if (disc <= 0 || f.c == 0) {
        throw InputError("rho needs an indefinite form with c != 0");
    }
    const auto s = isqrt(disc);
    const std::int64_t m = 2 * (f.c < 0 ? -f.c : f.c);
    const std::int64_t b = s - floor_mod(static_cast<i128>(s) + f.b, m);
    const auto c = static_cast<std::int64_t>((static_cast<i128>(b) * b - disc) / (4 * static_cast<i128>(f.c)));
    return {f.c, b, c};
}

IndefiniteClassNumbers class_numbers_indefinite(std::int64_t disc)
{
    const auto forms = enumerate_reduced_indefinite(disc);
    std::set<BinaryQuadraticForm> unvisited(forms.begin(), forms.end());
    std::int64_t cycles = 0;
    while (!unvisited.empty()) {
        auto f = *unvisited.begin();
        while (unvisited.erase(f) > 0) {
            f = rho(f);
        }
        ++cycles;
    }
    IndefiniteClassNumbers out;
    out.h_narrow = cycles;
    out.h_wide = fundamental_pell(disc).sign == -4 ? cycles : cycles / 2;
    return out;
}

} // namespace sha_predict
