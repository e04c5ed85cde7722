#pragma once

// Latimer-MacDuffee correspondence for monic quadratics: integer matrices
// with a fixed characteristic polynomial, up to GL(2,Z)-similarity, versus
// ideal classes of Z[lambda].

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "sha_predict/arith.hpp"
#include "sha_predict/matrix.hpp"

namespace sha_predict {

// x^2 + c1*x + c0
struct MonicQuadratic {
    std::int64_t c1 = 0;
    std::int64_t c0 = 0;

    std::int64_t discriminant() const { return c1 * c1 - 4 * c0; }
    bool is_irreducible() const;
    std::string to_string() const;

    // Accepts "x^2-10", "x^2 - x - 1", "x^2+3*x+1", "x^2". Throws InputError.
    static MonicQuadratic parse(const std::string& text);

    bool operator==(const MonicQuadratic&) const = default;
};

// One matrix per ideal class of Z[lambda], lambda a root of poly: the action
// of lambda on the basis (a, (-b + sqrt(disc))/2) of the ideal attached to a
// primitive form (a, b, c). For a positive discriminant the narrow classes
// are merged into wide ones.
std::vector<IntMatrix> ideal_class_matrices(const MonicQuadratic& poly);

// Some U with entries in [-bound, bound], det U = +-1 and U*A = B*U.
// nullopt means "not found within bound", not "not similar".
std::optional<IntMatrix> similar_over_Z(const IntMatrix& a, const IntMatrix& b, std::int64_t bound);

struct PerronLattice {
    QuadNumber theta;      // (1, theta) is the dominant eigenvector
    QuadNumber eigenvalue; // Perron-Frobenius eigenvalue lambda_B
};

// B must be 2x2, nonnegative, with positive off-diagonal entries and an
// irrational dominant eigenvalue.
PerronLattice perron_vector_lattice(const IntMatrix& b);

} // namespace sha_predict
