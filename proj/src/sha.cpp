#include "sha_predict/sha.hpp"

#include "sha_predict/arith.hpp"
#include "sha_predict/errors.hpp"

namespace sha_predict {

std::string to_string(Parity p)
{
    return p == Parity::even ? "even" : "odd";
}

std::string to_string(Assembly a)
{
    return a == Assembly::parity_split ? "parity_split" : "doubled";
}

ShaPrediction sha_from_class_group(const AbelianGroupStructure& cl)
{
    if (!cl.two_sylow_cyclic()) {
        throw InputError("decomposition hypothesis violated: 2-Sylow subgroup of " + cl.to_string() +
                         " is not cyclic, so Cl = Z/2^k + Cl_odd does not hold");
    }
    ShaPrediction s;
    s.input_class_group = cl;
    s.k = cl.two_adic_valuation();
    s.parity = s.k % 2 == 0 ? Parity::even : Parity::odd;
    s.assembly = Assembly::parity_split;
    if (s.parity == Parity::even) {
        s.result = cl + cl;
    } else {
        const auto odd = cl.odd_part();
        s.result = AbelianGroupStructure::from_cyclic_factors({std::int64_t{1} << s.k}) + odd + odd;
    }
    s.order = s.result.order();
    return s;
}

CMCurveReport sha_cm_curve(std::int64_t D, std::int64_t f, const CMOptions& opts)
{
    CMCurveReport rep;
    rep.D = D;
    rep.f = f;
    rep.R = order_from_cm_input(D, f, FieldSign::imaginary);
    rep.cl_R = class_group_definite(rep.R.disc, opts.class_group);
    const auto h_R = rep.cl_R.order();

    try {
        RealOrderMatch m;
        m.f_prime = conductor_search(D, h_R, opts.conductor_bound, opts.class_number);
        m.order = order_from_cm_input(D, m.f_prime, FieldSign::real);
        m.h_wide = class_number_order(m.order, opts.class_number);
        m.h_narrow = class_numbers_indefinite(m.order.disc).h_narrow;
        rep.lambda = m;
    } catch (const SearchExhausted& e) {
        if (!opts.allow_missing_lambda) {
            throw;
        }
        rep.warnings.push_back(std::string("Lambda not determined: ") + e.what());
    }

    ShaPrediction& s = rep.sha;
    s.input_class_group = rep.cl_R;
    s.k = rep.cl_R.two_adic_valuation();
    s.parity = s.k % 2 == 0 ? Parity::even : Parity::odd;
    s.assembly = Assembly::doubled;
    s.result = rep.cl_R + rep.cl_R;
    s.order = s.result.order();

    if (s.parity == Parity::odd) {
        if (rep.cl_R.two_sylow_cyclic()) {
            rep.parity_split = sha_from_class_group(rep.cl_R);
            rep.warnings.push_back("k = " + std::to_string(s.k) +
                                   " is odd: the parity-split assembly gives order " +
                                   std::to_string(rep.parity_split->order) + " instead of " + std::to_string(s.order));
        }
    }
    if (!rep.cl_R.two_sylow_cyclic()) {
        rep.warnings.push_back("2-Sylow subgroup of Cl(R) is not cyclic; only the doubled assembly applies");
    }
    rep.warnings.push_back("assumes the curve is simple (no splitting of the functor)");
    return rep;
}

namespace {

void require_prime(std::int64_t p)
{
    if (!is_prime(p)) {
        throw InputError("p = " + std::to_string(p) + " is not prime");
    }
}

IntMatrix companion(const std::vector<std::int64_t>& a, std::int64_t p, bool alternate)
{
    require_prime(p);
    if (a.size() % 2 != 1) {
        throw InputError("need 2n-1 coefficients, got " + std::to_string(a.size()));
    }
    const std::size_t n = a.size() + 1;
    IntMatrix m(n);
    for (std::size_t i = 0; i + 1 < n; ++i) {
        m(i, 0) = (alternate && i % 2 == 1) ? -a[i] : a[i];
        m(i, i + 1) = 1;
    }
    m(n - 1, 0) = alternate ? -p : p;
    return m;
}

// Checks the companion shape and returns the first column.
std::vector<std::int64_t> companion_column(const IntMatrix& m)
{
    const std::size_t n = m.size();
    if (n < 2 || n % 2 != 0) {
        throw InputError("companion matrices have even size >= 2");
    }
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = 1; j < n; ++j) {
            const std::int64_t expected = (j == i + 1) ? 1 : 0;
            if (m(i, j) != expected) {
                throw InputError("matrix " + m.to_string() + " is not in companion shape");
            }
        }
    }
    std::vector<std::int64_t> col(n);
    for (std::size_t i = 0; i < n; ++i) {
        col[i] = m(i, 0);
    }
    return col;
}

IntMatrix flip_signs(const IntMatrix& m)
{
    auto out = m;
    for (std::size_t i = 1; i < m.size(); i += 2) {
        out(i, 0) = -m(i, 0);
    }
    return out;
}

} // namespace

IntMatrix companion_L(const std::vector<std::int64_t>& a, std::int64_t p)
{
    return companion(a, p, false);
}

IntMatrix companion_Fr(const std::vector<std::int64_t>& a, std::int64_t p)
{
    return companion(a, p, true);
}

IntMatrix functor_map(const IntMatrix& fr)
{
    const auto col = companion_column(fr);
    if (col.back() >= 0 || !is_prime(-col.back())) {
        throw InputError("Frobenius matrix must end its first column with -p, p prime");
    }
    return flip_signs(fr);
}

IntMatrix functor_map_inverse(const IntMatrix& l)
{
    const auto col = companion_column(l);
    if (!is_prime(col.back())) {
        throw InputError("L matrix must end its first column with a prime p");
    }
    return flip_signs(l);
}

bool satisfies_hasse_bound(std::int64_t a1, std::int64_t p)
{
    return a1 * a1 <= 4 * p;
}

} // namespace sha_predict
