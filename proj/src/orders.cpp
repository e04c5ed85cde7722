#include "sha_predict/orders.hpp"

#include <sstream>
#include <stdexcept>

#include "sha_predict/arith.hpp"
#include "sha_predict/errors.hpp"
#include "sha_predict/qforms.hpp"

namespace sha_predict {

namespace {

// Data of the maximal order needed by the conductor formula.
struct FieldData {
    std::int64_t fundamental_disc = 0;
    std::int64_t class_number = 0;
    // Fundamental unit A + B*omega, omega = (r + sqrt(d_K))/2 (real fields).
    BigInt unit_a;
    BigInt unit_b;
};

FieldData field_data(std::int64_t d_k)
{
    FieldData fd;
    fd.fundamental_disc = d_k;
    if (d_k < 0) {
        fd.class_number = static_cast<std::int64_t>(enumerate_reduced(d_k).size());
        return fd;
    }
    fd.class_number = class_numbers_indefinite(d_k).h_wide;
    const auto eps = fundamental_pell(d_k);
    const std::int64_t r = d_k % 2;
    // (x + y sqrt(d_K))/2 = (x - y r)/2 + y omega
    fd.unit_a = (eps.x - eps.y * r) / 2;
    fd.unit_b = eps.y;
    return fd;
}

std::int64_t unit_index_real(const FieldData& fd, std::int64_t f, const ClassNumberOptions& opts)
{
    if (f == 1) {
        return 1;
    }
    const std::int64_t r = fd.fundamental_disc % 2;
    const std::int64_t norm_omega = (r * r - fd.fundamental_disc) / 4; // omega^2 = r*omega - norm_omega
    const BigInt mod = f;
    auto reduce = [&](const BigInt& v) {
        BigInt out;
        mpz_fdiv_r(out.get_mpz_t(), v.get_mpz_t(), mod.get_mpz_t());
        return out.get_si();
    };
    const auto ea = static_cast<__int128>(reduce(fd.unit_a));
    const auto eb = static_cast<__int128>(reduce(fd.unit_b));
    __int128 a = ea;
    __int128 b = eb;
    for (std::int64_t m = 1; m <= opts.max_unit_power; ++m) {
        if (b == 0) {
            return m;
        }
        const __int128 na = (a * ea - ((b * eb) % f) * norm_omega) % f;
        const __int128 nb = (a * eb + b * ea + ((b * eb) % f) * r) % f;
        a = na < 0 ? na + f : na;
        b = nb < 0 ? nb + f : nb;
    }
    throw SearchExhausted("unit index of conductor " + std::to_string(f) + " in d_K = " +
                              std::to_string(fd.fundamental_disc) + " not reached",
                          opts.max_unit_power);
}

// f * prod_{p | f} (1 - (d_K/p)/p) as an integer.
std::int64_t euler_factor(std::int64_t d_k, std::int64_t f)
{
    std::int64_t out = 1;
    for (const auto& [p, e] : factorize(f)) {
        for (int i = 1; i < e; ++i) {
            out *= p;
        }
        out *= p - kronecker(d_k, p);
    }
    return out;
}

std::int64_t class_number_with(const FieldData& fd, std::int64_t f, const ClassNumberOptions& opts)
{
    const auto d_k = fd.fundamental_disc;
    std::int64_t u = 1;
    if (d_k < 0) {
        if (f > 1 && d_k == -3) {
            u = 3;
        } else if (f > 1 && d_k == -4) {
            u = 2;
        }
    } else {
        u = unit_index_real(fd, f, opts);
    }
    const std::int64_t numerator = fd.class_number * euler_factor(d_k, f);
    if (numerator % u != 0) {
        throw std::logic_error("conductor formula: unit index " + std::to_string(u) + " does not divide " +
                               std::to_string(numerator));
    }
    const std::int64_t h = numerator / u;
    const std::int64_t disc = f * f * d_k;
    if (opts.cross_check && (disc < 0 ? -disc : disc) <= opts.cross_check_limit) {
        const auto direct = class_number_by_forms(disc);
        if (direct != h) {
            throw std::logic_error("class number of disc " + std::to_string(disc) + ": conductor formula gives " +
                                   std::to_string(h) + ", reduced forms give " + std::to_string(direct));
        }
    }
    return h;
}

} // namespace

std::string QuadOrder::to_string() const
{
    std::ostringstream os;
    os << "O(d_K=" << fundamental_disc << ", f=" << conductor << ", disc=" << disc << ")";
    return os.str();
}

bool is_fundamental_discriminant(std::int64_t d)
{
    if (d == 0 || d == 1) {
        return false;
    }
    const auto r = ((d % 4) + 4) % 4;
    if (r == 1) {
        return is_squarefree(d);
    }
    if (r == 0) {
        const auto m = d / 4;
        const auto rm = ((m % 4) + 4) % 4;
        return (rm == 2 || rm == 3) && is_squarefree(m);
    }
    return false;
}

QuadOrder make_order(std::int64_t fundamental_disc, std::int64_t conductor)
{
    if (!is_fundamental_discriminant(fundamental_disc)) {
        throw InputError(std::to_string(fundamental_disc) + " is not a fundamental discriminant");
    }
    if (conductor < 1) {
        throw InputError("conductor must be >= 1");
    }
    return {fundamental_disc, conductor, conductor * conductor * fundamental_disc};
}

QuadOrder order_from_cm_input(std::int64_t D, std::int64_t f, FieldSign sign)
{
    if (D <= 1 || !is_squarefree(D)) {
        throw InputError("D must be a square-free integer > 1, got " + std::to_string(D));
    }
    const std::int64_t m = sign == FieldSign::imaginary ? -D : D;
    const std::int64_t d_k = (((m % 4) + 4) % 4 == 1) ? m : 4 * m;
    return make_order(d_k, f);
}

std::int64_t class_number_by_forms(std::int64_t disc)
{
    if (disc < 0) {
        return static_cast<std::int64_t>(enumerate_reduced(disc).size());
    }
    return class_numbers_indefinite(disc).h_wide;
}

std::int64_t unit_index(const QuadOrder& order, const ClassNumberOptions& opts)
{
    if (order.fundamental_disc < 0) {
        if (order.conductor == 1) {
            return 1;
        }
        return order.fundamental_disc == -3 ? 3 : order.fundamental_disc == -4 ? 2 : 1;
    }
    return unit_index_real(field_data(order.fundamental_disc), order.conductor, opts);
}

std::int64_t class_number_order(const QuadOrder& order, const ClassNumberOptions& opts)
{
    return class_number_with(field_data(order.fundamental_disc), order.conductor, opts);
}

std::int64_t conductor_search(std::int64_t D, std::int64_t h_target, std::int64_t bound,
                              const ClassNumberOptions& opts)
{
    if (h_target < 1) {
        throw InputError("target class number must be >= 1");
    }
    if (bound < 1) {
        throw InputError("search bound must be >= 1");
    }
    const auto maximal = order_from_cm_input(D, 1, FieldSign::real);
    const auto fd = field_data(maximal.fundamental_disc);
    for (std::int64_t f = 1; f <= bound; ++f) {
        if (class_number_with(fd, f, opts) == h_target) {
            return f;
        }
    }
    throw SearchExhausted("search exhausted: no conductor f' with h(Z + f' O_k) = " + std::to_string(h_target) +
                              " for k = Q(sqrt " + std::to_string(D) + ")",
                          bound);
}

} // namespace sha_predict
