#include "sha_predict/matrix.hpp"

#include <sstream>

#include "sha_predict/errors.hpp"

namespace sha_predict {

IntMatrix::IntMatrix(std::size_t n)
    : n_(n), data_(n * n, 0)
{
}

IntMatrix::IntMatrix(std::initializer_list<std::initializer_list<std::int64_t>> rows)
    : n_(rows.size()), data_()
{
    data_.reserve(n_ * n_);
    for (const auto& row : rows) {
        if (row.size() != n_) {
            throw InputError("matrix must be square");
        }
        data_.insert(data_.end(), row.begin(), row.end());
    }
}

IntMatrix IntMatrix::identity(std::size_t n)
{
    IntMatrix m(n);
    for (std::size_t i = 0; i < n; ++i) {
        m(i, i) = 1;
    }
    return m;
}

std::int64_t IntMatrix::trace() const
{
    std::int64_t t = 0;
    for (std::size_t i = 0; i < n_; ++i) {
        t += (*this)(i, i);
    }
    return t;
}

std::int64_t IntMatrix::determinant() const
{
    const auto cp = characteristic_polynomial();
    // det(M) = (-1)^n * cp(0)
    return (n_ % 2 == 0) ? cp.back() : -cp.back();
}

// Faddeev-LeVerrier: M_k = M (M_{k-1} + c_{k-1} I), c_k = -tr(M M_{k-1}...)/k.
// All divisions are exact over the integers.
std::vector<std::int64_t> IntMatrix::characteristic_polynomial() const
{
    std::vector<std::int64_t> coeffs{1};
    if (n_ == 0) {
        return coeffs;
    }
    IntMatrix acc = IntMatrix::identity(n_); // M_{k-1} + c_{k-1} I
    for (std::size_t k = 1; k <= n_; ++k) {
        const IntMatrix mk = *this * acc;
        const std::int64_t tr = mk.trace();
        const auto kk = static_cast<std::int64_t>(k);
        if (tr % kk != 0) {
            throw std::logic_error("characteristic polynomial: inexact division");
        }
        const std::int64_t ck = -tr / kk;
        coeffs.push_back(ck);
        acc = mk;
        for (std::size_t i = 0; i < n_; ++i) {
            acc(i, i) += ck;
        }
    }
    return coeffs;
}

std::vector<std::vector<std::int64_t>> IntMatrix::rows() const
{
    std::vector<std::vector<std::int64_t>> out(n_);
    for (std::size_t i = 0; i < n_; ++i) {
        out[i].assign(data_.begin() + static_cast<long>(i * n_), data_.begin() + static_cast<long>((i + 1) * n_));
    }
    return out;
}

std::string IntMatrix::to_string() const
{
    std::ostringstream os;
    os << "[";
    for (std::size_t i = 0; i < n_; ++i) {
        os << (i ? ", " : "") << "[";
        for (std::size_t j = 0; j < n_; ++j) {
            os << (j ? ", " : "") << (*this)(i, j);
        }
        os << "]";
    }
    os << "]";
    return os.str();
}

IntMatrix operator*(const IntMatrix& x, const IntMatrix& y)
{
    if (x.n_ != y.n_) {
        throw InputError("matrix size mismatch");
    }
    IntMatrix r(x.n_);
    for (std::size_t i = 0; i < x.n_; ++i) {
        for (std::size_t k = 0; k < x.n_; ++k) {
            const auto xik = x(i, k);
            if (xik == 0) {
                continue;
            }
            for (std::size_t j = 0; j < x.n_; ++j) {
                r(i, j) += xik * y(k, j);
            }
        }
    }
    return r;
}

IntMatrix operator+(const IntMatrix& x, const IntMatrix& y)
{
    if (x.n_ != y.n_) {
        throw InputError("matrix size mismatch");
    }
    IntMatrix r = x;
    for (std::size_t i = 0; i < r.data_.size(); ++i) {
        r.data_[i] += y.data_[i];
    }
    return r;
}

std::string polynomial_to_string(const std::vector<std::int64_t>& coeffs)
{
    std::ostringstream os;
    const auto deg = coeffs.empty() ? 0 : coeffs.size() - 1;
    bool first = true;
    for (std::size_t i = 0; i < coeffs.size(); ++i) {
        const auto c = coeffs[i];
        const auto power = deg - i;
        if (c == 0 && !(first && i + 1 == coeffs.size())) {
            continue;
        }
        const auto mag = c < 0 ? -c : c;
        if (first) {
            if (c < 0) {
                os << "-";
            }
        } else {
            os << (c < 0 ? " - " : " + ");
        }
        if (power == 0 || mag != 1) {
            os << mag;
            if (power > 0) {
                os << "*";
            }
        }
        if (power >= 1) {
            os << "x";
        }
        if (power >= 2) {
            os << "^" << power;
        }
        first = false;
    }
    return os.str();
}

} // namespace sha_predict
