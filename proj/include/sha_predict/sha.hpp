#pragma once

// Predicted Shafarevich-Tate groups from class groups, the CM elliptic
// curve pipeline, and the companion matrices L_v / Fr_v.

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "sha_predict/abelian.hpp"
#include "sha_predict/matrix.hpp"
#include "sha_predict/orders.hpp"
#include "sha_predict/qforms.hpp"

namespace sha_predict {

enum class Parity { even, odd };

std::string to_string(Parity p);

// How the result was assembled from the class group.
enum class Assembly {
    // Cl + Cl when k is even, Z/2^k + Cl_odd + Cl_odd when k is odd.
    parity_split,
    // Cl + Cl unconditionally (CM elliptic curves).
    doubled,
};

std::string to_string(Assembly a);

struct ShaPrediction {
    AbelianGroupStructure input_class_group;
    int k = 0; // v_2(|Cl|)
    Parity parity = Parity::even;
    Assembly assembly = Assembly::parity_split;
    AbelianGroupStructure result;
    std::int64_t order = 1;
};

// Requires a cyclic 2-Sylow subgroup; throws InputError ("decomposition
// hypothesis violated") otherwise.
ShaPrediction sha_from_class_group(const AbelianGroupStructure& cl);

// Lambda = Z + f' O_k, k = Q(sqrt(D)), with f' least such that
// |Cl(Lambda)| = |Cl(R)|.
struct RealOrderMatch {
    std::int64_t f_prime = 1;
    QuadOrder order;
    std::int64_t h_wide = 1;
    std::int64_t h_narrow = 1;
};

struct CMCurveReport {
    std::int64_t D = 0;
    std::int64_t f = 1;
    QuadOrder R;                  // Z + f O_K, K = Q(sqrt(-D))
    AbelianGroupStructure cl_R;
    // Absent only when CMOptions::allow_missing_lambda is set and the
    // conductor search came up empty.
    std::optional<RealOrderMatch> lambda;
    ShaPrediction sha;            // doubled assembly: Cl(R) + Cl(R)
    // Parity-split value when it differs from the doubled one (k odd and
    // 2-Sylow cyclic).
    std::optional<ShaPrediction> parity_split;
    std::vector<std::string> warnings;
};

struct CMOptions {
    std::int64_t conductor_bound = default_conductor_bound;
    ClassGroupOptions class_group;
    ClassNumberOptions class_number;
    // Report Sha with a warning instead of throwing SearchExhausted when no
    // f' exists within the bound.
    bool allow_missing_lambda = false;
};

CMCurveReport sha_cm_curve(std::int64_t D, std::int64_t f, const CMOptions& opts = {});

// --- companion matrices

// 2n x 2n matrix: first column a1, ..., a_{2n-1}, p; ones on the superdiagonal.
IntMatrix companion_L(const std::vector<std::int64_t>& a, std::int64_t p);

// Same layout with alternating signs down the first column:
// a1, -a2, a3, ..., a_{2n-1}, -p.
IntMatrix companion_Fr(const std::vector<std::int64_t>& a, std::int64_t p);

// Fr_v -> L_v: flips the signs of the even-indexed first-column entries.
// Throws InputError if the input is not in companion shape.
IntMatrix functor_map(const IntMatrix& fr);

// L_v -> Fr_v, the inverse sign flip.
IntMatrix functor_map_inverse(const IntMatrix& l);

// |a1| <= 2 sqrt(p), the Hasse bound for the 2x2 Frobenius trace.
bool satisfies_hasse_bound(std::int64_t a1, std::int64_t p);

} // namespace sha_predict
