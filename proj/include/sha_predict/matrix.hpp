#pragma once

#include <cstdint>
#include <initializer_list>
#include <string>
#include <vector>

namespace sha_predict {

// Square integer matrix, row-major.
class IntMatrix {
public:
    IntMatrix() = default;
    explicit IntMatrix(std::size_t n);
    IntMatrix(std::initializer_list<std::initializer_list<std::int64_t>> rows);

    static IntMatrix identity(std::size_t n);

    std::size_t size() const noexcept { return n_; }
    std::int64_t& operator()(std::size_t i, std::size_t j) { return data_[i * n_ + j]; }
    std::int64_t operator()(std::size_t i, std::size_t j) const { return data_[i * n_ + j]; }

    std::int64_t trace() const;
    std::int64_t determinant() const;

    // Coefficients of det(xI - M), highest degree first; leading 1 included.
    std::vector<std::int64_t> characteristic_polynomial() const;

    std::vector<std::vector<std::int64_t>> rows() const;
    std::string to_string() const;

    friend IntMatrix operator*(const IntMatrix& x, const IntMatrix& y);
    friend IntMatrix operator+(const IntMatrix& x, const IntMatrix& y);
    bool operator==(const IntMatrix&) const = default;

private:
    std::size_t n_ = 0;
    std::vector<std::int64_t> data_;
};

// "x^2 - 3*x + 1" style rendering of a monic coefficient list (highest first).
std::string polynomial_to_string(const std::vector<std::int64_t>& coeffs);

} // namespace sha_predict
