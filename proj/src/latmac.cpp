#include "sha_predict/latmac.hpp"

#include <algorithm>
#include <cctype>
#include <map>
#include <set>

#include "sha_predict/errors.hpp"
#include "sha_predict/qforms.hpp"

namespace sha_predict {

namespace {

IntMatrix matrix_of_form(const MonicQuadratic& poly, const BinaryQuadraticForm& f)
{
    // lambda = tau + k with tau = (-b + sqrt(disc))/2, k = (b - c1)/2;
    // tau*a = a*tau, tau*tau = -c*a - b*tau.
    const std::int64_t k = (f.b - poly.c1) / 2;
    return IntMatrix{{k, -f.c}, {f.a, k - f.b}};
}

std::int64_t parse_int(const std::string& s, std::size_t& pos)
{
    std::size_t start = pos;
    while (pos < s.size() && std::isdigit(static_cast<unsigned char>(s[pos]))) {
        ++pos;
    }
    if (start == pos) {
        throw InputError("expected a number in polynomial");
    }
    return std::stoll(s.substr(start, pos - start));
}

} // namespace

bool MonicQuadratic::is_irreducible() const
{
    return !is_square(discriminant());
}

std::string MonicQuadratic::to_string() const
{
    return polynomial_to_string({1, c1, c0});
}

MonicQuadratic MonicQuadratic::parse(const std::string& text)
{
    std::string s;
    for (char ch : text) {
        if (!std::isspace(static_cast<unsigned char>(ch))) {
            s += static_cast<char>(std::tolower(static_cast<unsigned char>(ch)));
        }
    }
    // Terms: [sign][coef][*][x[^e]]
    std::map<int, std::int64_t> coeffs;
    std::size_t pos = 0;
    if (s.empty()) {
        throw InputError("empty polynomial");
    }
    while (pos < s.size()) {
        std::int64_t sign = 1;
        if (s[pos] == '+' || s[pos] == '-') {
            sign = s[pos] == '-' ? -1 : 1;
            ++pos;
        } else if (pos != 0) {
            throw InputError("malformed polynomial '" + text + "'");
        }
        std::int64_t coef = 1;
        bool has_coef = false;
        if (pos < s.size() && std::isdigit(static_cast<unsigned char>(s[pos]))) {
            coef = parse_int(s, pos);
            has_coef = true;
            if (pos < s.size() && s[pos] == '*') {
                ++pos;
            }
        }
        int power = 0;
        if (pos < s.size() && s[pos] == 'x') {
            ++pos;
            power = 1;
            if (pos < s.size() && s[pos] == '^') {
                ++pos;
                power = static_cast<int>(parse_int(s, pos));
            }
        } else if (!has_coef) {
            throw InputError("malformed polynomial '" + text + "'");
        }
        coeffs[power] += sign * coef;
    }
    for (const auto& [power, c] : coeffs) {
        if (power > 2 && c != 0) {
            throw InputError("only degree-2 polynomials are supported");
        }
    }
    if (coeffs[2] != 1) {
        throw InputError("polynomial must be monic of degree 2");
    }
    return {coeffs[1], coeffs[0]};
}

std::vector<IntMatrix> ideal_class_matrices(const MonicQuadratic& poly)
{
    if (!poly.is_irreducible()) {
        throw InputError("polynomial " + poly.to_string() + " is reducible over Q");
    }
    const auto disc = poly.discriminant();
    std::vector<IntMatrix> out;
    if (disc < 0) {
        for (const auto& f : enumerate_reduced(disc)) {
            out.push_back(matrix_of_form(poly, f));
        }
        return out;
    }
    // Narrow classes are rho-cycles; (a, b, c) and (-a, b, -c) give
    // matrices conjugate by diag(1, -1), so their cycles share a wide class.
    const auto forms = enumerate_reduced_indefinite(disc);
    std::set<BinaryQuadraticForm> unvisited(forms.begin(), forms.end());
    while (!unvisited.empty()) {
        const auto start = *unvisited.begin();
        out.push_back(matrix_of_form(poly, start));
        for (auto g : {start, BinaryQuadraticForm{-start.a, start.b, -start.c}}) {
            while (unvisited.erase(g) > 0) {
                g = rho(g);
            }
        }
    }
    return out;
}

std::optional<IntMatrix> similar_over_Z(const IntMatrix& a, const IntMatrix& b, std::int64_t bound)
{
    if (a.size() != 2 || b.size() != 2) {
        throw InputError("similar_over_Z works on 2x2 matrices");
    }
    if (a == b) {
        return IntMatrix::identity(2);
    }
    if (a.trace() != b.trace() || a.determinant() != b.determinant()) {
        return std::nullopt;
    }
    auto accept = [&](const IntMatrix& u) {
        const auto d = u.determinant();
        return (d == 1 || d == -1) && u * a == b * u;
    };
    auto in_range = [bound](std::int64_t v) { return v >= -bound && v <= bound; };

    // Row 1 of U*A = B*U reads u1*A = b11*u1 + b12*u2, which fixes u2 from
    // u1 when b12 != 0 (symmetrically for b21).
    const bool use_first = b(0, 1) != 0;
    const bool use_second = b(1, 0) != 0;
    for (std::int64_t p = -bound; p <= bound; ++p) {
        for (std::int64_t q = -bound; q <= bound; ++q) {
            if (use_first) {
                // u1 = (p, q)
                const std::int64_t n1 = p * a(0, 0) + q * a(1, 0) - b(0, 0) * p;
                const std::int64_t n2 = p * a(0, 1) + q * a(1, 1) - b(0, 0) * q;
                if (n1 % b(0, 1) != 0 || n2 % b(0, 1) != 0) {
                    continue;
                }
                const IntMatrix u{{p, q}, {n1 / b(0, 1), n2 / b(0, 1)}};
                if (in_range(u(1, 0)) && in_range(u(1, 1)) && accept(u)) {
                    return u;
                }
            } else if (use_second) {
                // u2 = (p, q); u2*A = b21*u1 + b22*u2
                const std::int64_t n1 = p * a(0, 0) + q * a(1, 0) - b(1, 1) * p;
                const std::int64_t n2 = p * a(0, 1) + q * a(1, 1) - b(1, 1) * q;
                if (n1 % b(1, 0) != 0 || n2 % b(1, 0) != 0) {
                    continue;
                }
                const IntMatrix u{{n1 / b(1, 0), n2 / b(1, 0)}, {p, q}};
                if (in_range(u(0, 0)) && in_range(u(0, 1)) && accept(u)) {
                    return u;
                }
            } else {
                for (std::int64_t r = -bound; r <= bound; ++r) {
                    for (std::int64_t s = -bound; s <= bound; ++s) {
                        const IntMatrix u{{p, q}, {r, s}};
                        if (accept(u)) {
                            return u;
                        }
                    }
                }
            }
        }
    }
    return std::nullopt;
}

PerronLattice perron_vector_lattice(const IntMatrix& b)
{
    if (b.size() != 2) {
        throw InputError("Perron lattice needs a 2x2 matrix");
    }
    for (std::size_t i = 0; i < 2; ++i) {
        for (std::size_t j = 0; j < 2; ++j) {
            if (b(i, j) < 0) {
                throw InputError("matrix " + b.to_string() + " has a negative entry");
            }
        }
    }
    if (b(0, 1) == 0 || b(1, 0) == 0) {
        throw InputError("matrix " + b.to_string() + " is reducible (not Perron-Frobenius)");
    }
    const std::int64_t tr = b.trace();
    const std::int64_t disc = tr * tr - 4 * b.determinant();
    if (is_square(disc)) {
        throw InputError("matrix " + b.to_string() + " has rational eigenvalues");
    }
    // b11 + b12*theta = lambda  =>  theta = (b22 - b11 + sqrt(disc)) / (2 b12)
    PerronLattice out;
    out.eigenvalue = QuadNumber(tr, 1, 2, disc);
    out.theta = QuadNumber(b(1, 1) - b(0, 0), 1, 2 * b(0, 1), disc);
    return out;
}

} // namespace sha_predict
