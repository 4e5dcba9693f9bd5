#pragma once

// Random chart changes with exact inverses, for transition tests.

#include "test_support.hpp"

#include "tmcalc/transitions.hpp"

#include <algorithm>
#include <numeric>

namespace tmcalc::testing {

using RMatrix = std::vector<std::vector<Rational>>;

// Gauss-Jordan over the rationals; empty when singular.
inline RMatrix invert(RMatrix a) {
    const std::size_t n = a.size();
    RMatrix inv(n, std::vector<Rational>(n));
    for (std::size_t i = 0; i < n; ++i) inv[i][i] = 1;
    for (std::size_t c = 0; c < n; ++c) {
        std::size_t pivot = c;
        while (pivot < n && a[pivot][c] == 0) ++pivot;
        if (pivot == n) return {};
        std::swap(a[c], a[pivot]);
        std::swap(inv[c], inv[pivot]);
        const Rational s = a[c][c];
        for (std::size_t k = 0; k < n; ++k) a[c][k] /= s, inv[c][k] /= s;
        for (std::size_t r = 0; r < n; ++r) {
            if (r == c || a[r][c] == 0) continue;
            const Rational f = a[r][c];
            for (std::size_t k = 0; k < n; ++k) a[r][k] -= f * a[c][k], inv[r][k] -= f * inv[c][k];
        }
    }
    return inv;
}

inline std::vector<ScalarExpr> affine_map(const RMatrix& A, const std::vector<Rational>& b) {
    std::vector<ScalarExpr> out;
    for (std::size_t i = 0; i < A.size(); ++i) {
        ScalarExpr e(b[i]);
        for (std::size_t j = 0; j < A.size(); ++j) e += ScalarExpr(A[i][j]) * ScalarExpr::base(static_cast<int>(j) + 1);
        out.push_back(e);
    }
    return out;
}

inline ChartTransition random_affine(Gen& g, int m) {
    for (;;) {
        RMatrix A(static_cast<std::size_t>(m), std::vector<Rational>(static_cast<std::size_t>(m)));
        std::vector<Rational> b(static_cast<std::size_t>(m));
        for (auto& row : A)
            for (auto& a : row) a = g.integer(-3, 3);
        for (auto& c : b) c = g.integer(-2, 2);
        const RMatrix Ai = invert(A);
        if (Ai.empty()) continue;
        // x = A^{-1}(x' - b)
        std::vector<Rational> bi(b.size());
        for (std::size_t i = 0; i < b.size(); ++i)
            for (std::size_t j = 0; j < b.size(); ++j) bi[i] -= Ai[i][j] * b[j];
        return ChartTransition(affine_map(A, b), affine_map(Ai, bi));
    }
}

// affine, then x1 += c (x2)^2, then affine; m = 1 uses a Moebius change instead
inline ChartTransition random_quadratic(Gen& g, int m) {
    if (m == 1) {
        const ScalarExpr c(g.integer(1, 3));
        const ScalarExpr x = ScalarExpr::base(1);
        return ChartTransition({x / (ScalarExpr(1) + c * x)}, {x / (ScalarExpr(1) - c * x)});
    }
    std::vector<ScalarExpr> fwd, inv;
    for (int i = 1; i <= m; ++i) fwd.push_back(ScalarExpr::base(i)), inv.push_back(ScalarExpr::base(i));
    const ScalarExpr c(g.integer(1, 3) * (g.coin() ? 1 : -1));
    const ScalarExpr x = ScalarExpr::base(1), y = ScalarExpr::base(2);
    fwd[0] = x + c * y * y;
    inv[0] = x - c * y * y;
    const ChartTransition shear(fwd, inv);
    return random_affine(g, m).then(shear).then(random_affine(g, m));
}

inline ScalarExpr determinant(const Matrix& J) {
    const int n = static_cast<int>(J.size());
    std::vector<int> p(static_cast<std::size_t>(n));
    std::iota(p.begin(), p.end(), 0);
    ScalarExpr det;
    do {
        int sign = 1;
        for (int i = 0; i < n; ++i)
            for (int j = i + 1; j < n; ++j)
                if (p[static_cast<std::size_t>(i)] > p[static_cast<std::size_t>(j)]) sign = -sign;
        ScalarExpr prod(sign);
        for (int i = 0; i < n; ++i) prod *= J[static_cast<std::size_t>(i)][static_cast<std::size_t>(p[static_cast<std::size_t>(i)])];
        det += prod;
    } while (std::next_permutation(p.begin(), p.end()));
    return det;
}

} // namespace tmcalc::testing
