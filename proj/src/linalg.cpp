#include "toricding/linalg.hpp"

#include <numeric>

namespace toric {

Rational determinant(MatQ m) {
    const std::size_t n = m.size();
    for (const auto& row : m)
        if (row.size() != n) throw std::invalid_argument("determinant: not square");
    Rational det = 1;
    for (std::size_t col = 0; col < n; ++col) {
        std::size_t pivot = col;
        while (pivot < n && m[pivot][col] == 0) ++pivot;
        if (pivot == n) return 0;
        if (pivot != col) {
            std::swap(m[pivot], m[col]);
            det = -det;
        }
        det *= m[col][col];
        for (std::size_t r = col + 1; r < n; ++r) {
            if (m[r][col] == 0) continue;
            Rational f = m[r][col] / m[col][col];
            for (std::size_t c = col; c < n; ++c) m[r][c] -= f * m[col][c];
        }
    }
    return det;
}

std::size_t rank(MatQ m) {
    if (m.empty()) return 0;
    const std::size_t rows = m.size(), cols = m[0].size();
    std::size_t r = 0;
    for (std::size_t col = 0; col < cols && r < rows; ++col) {
        std::size_t pivot = r;
        while (pivot < rows && m[pivot][col] == 0) ++pivot;
        if (pivot == rows) continue;
        std::swap(m[pivot], m[r]);
        for (std::size_t i = r + 1; i < rows; ++i) {
            if (m[i][col] == 0) continue;
            Rational f = m[i][col] / m[r][col];
            for (std::size_t c = col; c < cols; ++c) m[i][c] -= f * m[r][c];
        }
        ++r;
    }
    return r;
}

std::optional<VecQ> solve_linear(MatQ m, VecQ rhs) {
    const std::size_t n = m.size();
    if (rhs.size() != n) throw std::invalid_argument("solve_linear: size mismatch");
    for (std::size_t col = 0; col < n; ++col) {
        std::size_t pivot = col;
        while (pivot < n && m[pivot][col] == 0) ++pivot;
        if (pivot == n) return std::nullopt;
        std::swap(m[pivot], m[col]);
        std::swap(rhs[pivot], rhs[col]);
        for (std::size_t r = 0; r < n; ++r) {
            if (r == col || m[r][col] == 0) continue;
            Rational f = m[r][col] / m[col][col];
            for (std::size_t c = col; c < n; ++c) m[r][c] -= f * m[col][c];
            rhs[r] -= f * rhs[col];
        }
    }
    VecQ x(n);
    for (std::size_t i = 0; i < n; ++i) x[i] = rhs[i] / m[i][i];
    return x;
}

VecQ cross_generalized(const MatQ& rows, std::size_t n) {
    if (rows.size() + 1 != n) throw std::invalid_argument("cross_generalized: need n-1 rows");
    VecQ normal(n);
    for (std::size_t j = 0; j < n; ++j) {
        MatQ minor;
        minor.reserve(n - 1);
        for (const auto& row : rows) {
            VecQ m;
            m.reserve(n - 1);
            for (std::size_t c = 0; c < n; ++c)
                if (c != j) m.push_back(row[c]);
            minor.push_back(std::move(m));
        }
        Rational d = minor.empty() ? Rational(1) : determinant(minor);
        normal[j] = (j % 2 == 0) ? d : -d;
    }
    return normal;
}

VecZ primitive(VecZ v) {
    long long g = 0;
    for (long long x : v) g = std::gcd(g, x < 0 ? -x : x);
    if (g <= 1) return v;
    for (auto& x : v) x /= g;
    return v;
}

}  // namespace toric
