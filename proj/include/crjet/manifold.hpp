#pragma once

#include <string>
#include <vector>

#include "crjet/errors.hpp"
#include "crjet/linalg.hpp"
#include "crjet/series.hpp"

namespace crjet {

/// Variable lists used throughout: a manifold's Q lives over
/// (z1..zn, chi1..chin, tau1..taud) in that fixed block order.
inline VarsPtr manifold_vars(int n, int d) {
    Vars v;
    for (int k = 1; k <= n; ++k) v.push_back("z" + std::to_string(k));
    for (int k = 1; k <= n; ++k) v.push_back("chi" + std::to_string(k));
    for (int k = 1; k <= d; ++k) v.push_back("tau" + std::to_string(k));
    return make_vars(std::move(v));
}

inline VarsPtr chi_vars(int n) {
    Vars v;
    for (int k = 1; k <= n; ++k) v.push_back("chi" + std::to_string(k));
    return make_vars(std::move(v));
}

/// Generic formal submanifold of C^(n+d) in normal coordinates, given by
/// w_j = Q_j(z, chi, tau). Normality and the reality identity are enforced by
/// validate(); constructors run it.
struct Manifold {
    int n = 0;
    int d = 0;
    std::string label;
    VarsPtr vars;                // z block, chi block, tau block
    std::vector<Series> Q;       // d components over vars

    std::size_t z_index(int k) const { return static_cast<std::size_t>(k); }
    std::size_t chi_index(int k) const { return static_cast<std::size_t>(n + k); }
    std::size_t tau_index(int k) const { return static_cast<std::size_t>(2 * n + k); }

    bool exact() const {
        for (const auto& q : Q)
            if (!q.exact()) return false;
        return true;
    }
};

struct ValidationIssue {
    std::string what;
    Series residual;
};

struct ValidationReport {
    bool ok = true;
    std::vector<ValidationIssue> issues;
};

namespace detail {

/// Images sending each variable of `vars` to itself inside `vars`.
inline std::vector<Series> identity_images(const VarsPtr& vars) {
    std::vector<Series> im;
    im.reserve(vars->size());
    for (std::size_t k = 0; k < vars->size(); ++k) im.push_back(Series::variable(vars, k));
    return im;
}

} // namespace detail

/// Checks dimensions, normality Q(0,chi,tau) = Q(z,0,tau) = tau, and the
/// reality identity Q(z, chi, Qbar(chi, z, w)) = w, all up to truncation.
inline ValidationReport validate(const Manifold& m) {
    ValidationReport rep;
    auto fail = [&](std::string what, Series residual) {
        rep.ok = false;
        rep.issues.push_back({std::move(what), std::move(residual)});
    };
    if (m.n < 1 || m.d < 1) {
        fail("dimensions must satisfy n >= 1 and d >= 1", Series::zero(make_vars({})));
        return rep;
    }
    if (static_cast<int>(m.Q.size()) != m.d)
        throw domain_error("manifold needs exactly d components of Q");
    for (const auto& q : m.Q)
        if (q.vars() != *m.vars) throw domain_error("Q component over wrong variable list");
    for (int j = 0; j < m.d; ++j) {
        Series c0 = Series::constant(m.vars, m.Q[static_cast<std::size_t>(j)]
                                                 .coefficient(Monomial::one(m.vars->size())));
        if (!c0.vanishes()) {
            fail("Q(0) must vanish in component " + std::to_string(j + 1), c0);
            return rep;
        }
    }

    const VarsPtr& V = m.vars;
    std::vector<Series> zero_z = detail::identity_images(V);
    std::vector<Series> zero_chi = detail::identity_images(V);
    for (int k = 0; k < m.n; ++k) {
        zero_z[m.z_index(k)] = Series::zero(V);
        zero_chi[m.chi_index(k)] = Series::zero(V);
    }
    for (int j = 0; j < m.d; ++j) {
        Series tau = Series::variable(V, m.tau_index(j));
        Series rz = m.Q[j].substituted(zero_z) - tau;
        if (!rz.vanishes()) fail("normality Q(0,chi,tau) = tau fails in component " + std::to_string(j + 1), rz);
        Series rc = m.Q[j].substituted(zero_chi) - tau;
        if (!rc.vanishes()) fail("normality Q(z,0,tau) = tau fails in component " + std::to_string(j + 1), rc);
    }

    // Reality: ambient list (z, chi, w); Qbar is Q with conjugated
    // coefficients read in the swapped arguments (chi, z, w).
    Vars ambient_names;
    for (int k = 1; k <= m.n; ++k) ambient_names.push_back("z" + std::to_string(k));
    for (int k = 1; k <= m.n; ++k) ambient_names.push_back("chi" + std::to_string(k));
    for (int k = 1; k <= m.d; ++k) ambient_names.push_back("w" + std::to_string(k));
    VarsPtr ambient = make_vars(std::move(ambient_names));

    std::vector<Series> swap_images;
    swap_images.reserve(V->size());
    for (int k = 0; k < m.n; ++k) swap_images.push_back(Series::variable(ambient, m.n + k));
    for (int k = 0; k < m.n; ++k) swap_images.push_back(Series::variable(ambient, k));
    for (int k = 0; k < m.d; ++k) swap_images.push_back(Series::variable(ambient, 2 * m.n + k));
    std::vector<Series> qbar;
    qbar.reserve(m.Q.size());
    for (const auto& q : m.Q) qbar.push_back(q.conjugated().substituted(swap_images));

    std::vector<Series> inner;
    inner.reserve(V->size());
    for (int k = 0; k < m.n; ++k) inner.push_back(Series::variable(ambient, k));
    for (int k = 0; k < m.n; ++k) inner.push_back(Series::variable(ambient, m.n + k));
    for (int k = 0; k < m.d; ++k) inner.push_back(qbar[static_cast<std::size_t>(k)]);
    for (int j = 0; j < m.d; ++j) {
        Series lhs = m.Q[j].substituted(inner);
        Series r = lhs - Series::variable(ambient, 2 * m.n + j);
        if (!r.vanishes())
            fail("reality identity fails in component " + std::to_string(j + 1), r);
    }
    return rep;
}

inline Manifold make_manifold(int n, int d, std::vector<Series> Q, std::string label = "") {
    Manifold m{n, d, std::move(label), manifold_vars(n, d), std::move(Q)};
    ValidationReport rep = validate(m);
    if (!rep.ok) {
        std::string what = "invalid manifold";
        if (!m.label.empty()) what += " '" + m.label + "'";
        for (const auto& issue : rep.issues) what += "; " + issue.what;
        throw domain_error(what);
    }
    return m;
}

namespace detail {

/// phi must vanish for z = 0 and for chi = 0 and satisfy the reality symmetry
/// phibar(chi, z, s) = phi(z, chi, s).
inline void check_graph_datum(const Series& phi_like, int n, int d, const VarsPtr& gview) {
    std::vector<Series> z0 = identity_images(gview);
    std::vector<Series> c0 = identity_images(gview);
    for (int k = 0; k < n; ++k) {
        z0[static_cast<std::size_t>(k)] = Series::zero(gview);
        c0[static_cast<std::size_t>(n + k)] = Series::zero(gview);
    }
    if (!phi_like.substituted(z0).vanishes() || !phi_like.substituted(c0).vanishes())
        throw domain_error("graph datum must vanish when z = 0 and when chi = 0");
    std::vector<Series> swap_zc = identity_images(gview);
    for (int k = 0; k < n; ++k) {
        swap_zc[static_cast<std::size_t>(k)] = Series::variable(gview, static_cast<std::size_t>(n + k));
        swap_zc[static_cast<std::size_t>(n + k)] = Series::variable(gview, static_cast<std::size_t>(k));
    }
    (void)d;
    Series sym = phi_like.conjugated().substituted(swap_zc) - phi_like;
    if (!sym.vanishes())
        throw domain_error("graph datum fails the reality symmetry");
}

} // namespace detail

inline VarsPtr graph_vars(int n, int d, bool with_s) {
    Vars v;
    for (int k = 1; k <= n; ++k) v.push_back("z" + std::to_string(k));
    for (int k = 1; k <= n; ++k) v.push_back("chi" + std::to_string(k));
    if (with_s)
        for (int k = 1; k <= d; ++k) v.push_back("s" + std::to_string(k));
    return make_vars(std::move(v));
}

/// Rigid graph Im w = phi(z, zbar): Q = tau + 2i*phi(z, chi), exact.
inline Manifold from_rigid_graph(int n, int d, const std::vector<Series>& phi, std::string label = "") {
    if (static_cast<int>(phi.size()) != d) throw domain_error("need d graph components");
    VarsPtr gview = graph_vars(n, d, false);
    VarsPtr V = manifold_vars(n, d);
    std::vector<Series> Q;
    Q.reserve(phi.size());
    for (int j = 0; j < d; ++j) {
        const Series& p = phi[static_cast<std::size_t>(j)];
        if (p.vars() != *gview) throw domain_error("graph component over wrong variable list");
        if (!p.exact()) throw domain_error("rigid graph datum must be an exact polynomial");
        detail::check_graph_datum(p, n, d, gview);
        Series two_i = Series::constant(V, GaussianRational(BigRational(0), BigRational(2)));
        Q.push_back(Series::variable(V, static_cast<std::size_t>(2 * n + j)) + two_i * p.embedded(V));
    }
    return make_manifold(n, d, std::move(Q), std::move(label));
}

/// Graph Im w = phi(z, zbar, Re w), complexified to
/// w = tau + 2i*phi(z, chi, (w + tau)/2) and solved for w by graded fixed
/// point iteration. The result is truncated at `trunc` even when the
/// iteration happens to stabilize exactly.
inline Manifold from_graph(int n, int d, const std::vector<Series>& phi, int trunc,
                           std::string label = "") {
    if (static_cast<int>(phi.size()) != d) throw domain_error("need d graph components");
    if (trunc < 1) throw domain_error("truncation degree must be at least 1");
    VarsPtr gview = graph_vars(n, d, true);
    VarsPtr V = manifold_vars(n, d);
    for (const auto& p : phi) {
        if (p.vars() != *gview) throw domain_error("graph component over wrong variable list");
        detail::check_graph_datum(p, n, d, gview);
    }

    GaussianRational half(BigRational(1, 2));
    GaussianRational two_i(BigRational(0), BigRational(2));
    std::vector<Series> w;
    w.reserve(static_cast<std::size_t>(d));
    for (int j = 0; j < d; ++j)
        w.push_back(Series::variable(V, static_cast<std::size_t>(2 * n + j)).truncated_to(trunc));

    // Each pass substitutes s = (w + tau)/2 with the previous w; new
    // dependence enters in strictly higher (z, chi) degree, so at most
    // trunc + 1 passes reach the fixed point below the cutoff.
    for (int pass = 0; pass <= trunc + 1; ++pass) {
        std::vector<Series> images;
        images.reserve(gview->size());
        for (int k = 0; k < 2 * n; ++k)
            images.push_back(Series::variable(V, static_cast<std::size_t>(k)).truncated_to(trunc));
        for (int j = 0; j < d; ++j) {
            Series tau = Series::variable(V, static_cast<std::size_t>(2 * n + j)).truncated_to(trunc);
            images.push_back((w[static_cast<std::size_t>(j)] + tau).scaled(half));
        }
        std::vector<Series> next;
        next.reserve(static_cast<std::size_t>(d));
        bool stable = true;
        for (int j = 0; j < d; ++j) {
            Series tau = Series::variable(V, static_cast<std::size_t>(2 * n + j)).truncated_to(trunc);
            next.push_back(tau + phi[static_cast<std::size_t>(j)].substituted(images).scaled(two_i));
            if (!next.back().same_series(w[static_cast<std::size_t>(j)])) stable = false;
        }
        w = std::move(next);
        if (stable) break;
    }
    return make_manifold(n, d, std::move(w), std::move(label));
}

/// Linear change of normal coordinates z -> Az, w -> Bw:
/// Qtilde(z, chi, tau) = B * Q(A^-1 z, Abar^-1 chi, B^-1 tau).
/// A is any invertible Gaussian-rational n x n matrix; B must be compatible
/// with reality (real B always is), which validation enforces.
inline Manifold linear_change(const Manifold& m, const QMatrix& A, const QMatrix& B,
                              std::string label = "") {
    if (A.size() != static_cast<std::size_t>(m.n) || B.size() != static_cast<std::size_t>(m.d))
        throw domain_error("matrix dimensions must match (n, d)");
    QMatrix Ainv = q_inverse(A);
    QMatrix Binv = q_inverse(B);
    QMatrix Abar_inv(Ainv.size());
    for (std::size_t r = 0; r < Ainv.size(); ++r)
        for (const auto& v : Ainv[r]) Abar_inv[r].push_back(v.conj());

    const VarsPtr& V = m.vars;
    auto linear_image = [&](const QMatrix& mat, std::size_t base, std::size_t count) {
        std::vector<Series> out;
        for (std::size_t r = 0; r < count; ++r) {
            Series s = Series::zero(V);
            for (std::size_t c = 0; c < count; ++c)
                s += Series::variable(V, base + c).scaled(mat[r][c]);
            out.push_back(std::move(s));
        }
        return out;
    };
    std::vector<Series> images = linear_image(Ainv, 0, static_cast<std::size_t>(m.n));
    std::vector<Series> chi_im = linear_image(Abar_inv, static_cast<std::size_t>(m.n),
                                              static_cast<std::size_t>(m.n));
    std::vector<Series> tau_im = linear_image(Binv, static_cast<std::size_t>(2 * m.n),
                                              static_cast<std::size_t>(m.d));
    images.insert(images.end(), chi_im.begin(), chi_im.end());
    images.insert(images.end(), tau_im.begin(), tau_im.end());

    std::vector<Series> pulled;
    pulled.reserve(m.Q.size());
    for (const auto& q : m.Q) pulled.push_back(q.substituted(images));
    std::vector<Series> Qt(static_cast<std::size_t>(m.d), Series::zero(V));
    for (int r = 0; r < m.d; ++r) {
        Series acc = Series::zero(V);
        for (int c = 0; c < m.d; ++c)
            acc += pulled[static_cast<std::size_t>(c)]
                       .scaled(B[static_cast<std::size_t>(r)][static_cast<std::size_t>(c)]);
        Qt[static_cast<std::size_t>(r)] = std::move(acc);
    }
    return make_manifold(m.n, m.d, std::move(Qt),
                         label.empty() ? m.label + "-changed" : std::move(label));
}

} // namespace crjet
