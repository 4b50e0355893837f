#pragma once

#include <algorithm>
#include <cstdint>
#include <random>
#include <vector>

#include "crjet/errors.hpp"
#include "crjet/gaussian_rational.hpp"

namespace crjet {

/// Dense matrix over Q(i), row major. Kept as a plain-value helper; all
/// eliminations are exact.
using QMatrix = std::vector<std::vector<GaussianRational>>;

inline QMatrix q_identity(std::size_t n) {
    QMatrix m(n, std::vector<GaussianRational>(n));
    for (std::size_t k = 0; k < n; ++k) m[k][k] = GaussianRational(1);
    return m;
}

inline GaussianRational q_det(QMatrix m) {
    std::size_t n = m.size();
    for (const auto& row : m)
        if (row.size() != n) throw domain_error("matrix must be square");
    GaussianRational det(1);
    for (std::size_t col = 0; col < n; ++col) {
        std::size_t piv = col;
        while (piv < n && m[piv][col].is_zero()) ++piv;
        if (piv == n) return GaussianRational(0);
        if (piv != col) {
            std::swap(m[piv], m[col]);
            det = -det;
        }
        det *= m[col][col];
        for (std::size_t r = col + 1; r < n; ++r) {
            if (m[r][col].is_zero()) continue;
            GaussianRational f = m[r][col] / m[col][col];
            for (std::size_t c = col; c < n; ++c) m[r][c] -= f * m[col][c];
        }
    }
    return det;
}

inline QMatrix q_inverse(QMatrix m) {
    std::size_t n = m.size();
    for (const auto& row : m)
        if (row.size() != n) throw domain_error("matrix must be square");
    QMatrix inv = q_identity(n);
    for (std::size_t col = 0; col < n; ++col) {
        std::size_t piv = col;
        while (piv < n && m[piv][col].is_zero()) ++piv;
        if (piv == n) throw domain_error("singular matrix");
        std::swap(m[piv], m[col]);
        std::swap(inv[piv], inv[col]);
        GaussianRational lead = m[col][col];
        for (std::size_t c = 0; c < n; ++c) {
            m[col][c] /= lead;
            inv[col][c] /= lead;
        }
        for (std::size_t r = 0; r < n; ++r) {
            if (r == col || m[r][col].is_zero()) continue;
            GaussianRational f = m[r][col];
            for (std::size_t c = 0; c < n; ++c) {
                m[r][c] -= f * m[col][c];
                inv[r][c] -= f * inv[col][c];
            }
        }
    }
    return inv;
}

struct PivotedRank {
    std::size_t rank = 0;
    std::vector<std::size_t> rows;
    std::vector<std::size_t> cols;
};

/// Row-echelon rank together with the original row and column indices of the
/// pivots; the pivot submatrix is invertible.
inline PivotedRank q_rank_with_pivots(QMatrix m) {
    std::size_t nr = m.size();
    std::size_t nc = nr ? m[0].size() : 0;
    std::vector<std::size_t> origin(nr);
    for (std::size_t r = 0; r < nr; ++r) origin[r] = r;
    PivotedRank out;
    std::size_t top = 0;
    for (std::size_t col = 0; col < nc && top < nr; ++col) {
        std::size_t piv = top;
        while (piv < nr && m[piv][col].is_zero()) ++piv;
        if (piv == nr) continue;
        std::swap(m[piv], m[top]);
        std::swap(origin[piv], origin[top]);
        for (std::size_t r = top + 1; r < nr; ++r) {
            if (m[r][col].is_zero()) continue;
            GaussianRational f = m[r][col] / m[top][col];
            for (std::size_t c = col; c < nc; ++c) m[r][c] -= f * m[top][c];
        }
        out.rows.push_back(origin[top]);
        out.cols.push_back(col);
        ++top;
    }
    out.rank = out.rows.size();
    std::sort(out.rows.begin(), out.rows.end());
    return out;
}

/// Deterministic sampler for small Gaussian rationals. The entire library is
/// seeded through this type, so identical seeds reproduce identical runs on
/// any platform; no distribution adaptors are involved.
class SmallRng {
public:
    explicit SmallRng(std::uint64_t seed) : eng_(seed) {}

    /// Uniform-ish integer in [lo, hi] via modulo reduction; the slight bias
    /// is irrelevant here and keeps the stream implementation independent.
    long pick(long lo, long hi) {
        auto span = static_cast<std::uint64_t>(hi - lo + 1);
        return lo + static_cast<long>(eng_() % span);
    }

    /// Nonzero numerators keep sampled points away from coordinate planes
    /// often enough for rank probing.
    GaussianRational gaussian_rational() {
        BigRational re(pick(-17, 17), pick(1, 7));
        BigRational im(pick(-17, 17), pick(1, 7));
        return {re, im};
    }

    std::vector<GaussianRational> point(std::size_t n) {
        std::vector<GaussianRational> p;
        p.reserve(n);
        for (std::size_t k = 0; k < n; ++k) p.push_back(gaussian_rational());
        return p;
    }

private:
    std::mt19937_64 eng_;
};

} // namespace crjet
