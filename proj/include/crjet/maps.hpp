#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "crjet/invariants.hpp"
#include "crjet/manifold.hpp"
#include "crjet/segre.hpp"
#include "crjet/series.hpp"

namespace crjet {

inline VarsPtr map_vars(int n, int d) {
    Vars v;
    for (int k = 1; k <= n; ++k) v.push_back("z" + std::to_string(k));
    for (int k = 1; k <= d; ++k) v.push_back("w" + std::to_string(k));
    return make_vars(std::move(v));
}

/// Formal holomorphic map H = (F, G) between source coordinates (z, w) in
/// C^(n+d) and targets of the same block sizes, with H(0) = 0.
struct FormalMap {
    int n = 0;
    int d = 0;
    std::string label;
    VarsPtr vars; // z1..zn, w1..wd
    std::vector<Series> F;
    std::vector<Series> G;

    std::size_t z_index(int k) const { return static_cast<std::size_t>(k); }
    std::size_t w_index(int k) const { return static_cast<std::size_t>(n + k); }
};

inline FormalMap make_map(int n, int d, std::vector<Series> F, std::vector<Series> G,
                          std::string label = "") {
    if (static_cast<int>(F.size()) != n || static_cast<int>(G.size()) != d)
        throw domain_error("map needs n components F and d components G");
    FormalMap h{n, d, std::move(label), map_vars(n, d), std::move(F), std::move(G)};
    Monomial c0 = Monomial::one(h.vars->size());
    for (const auto& f : h.F) {
        if (f.vars() != *h.vars) throw domain_error("map component over wrong variable list");
        if (!f.coefficient(c0).is_zero()) throw domain_error("map must fix the origin");
    }
    for (const auto& g : h.G) {
        if (g.vars() != *h.vars) throw domain_error("map component over wrong variable list");
        if (!g.coefficient(c0).is_zero()) throw domain_error("map must fix the origin");
    }
    return h;
}

inline FormalMap identity_map(int n, int d, std::string label = "identity") {
    VarsPtr v = map_vars(n, d);
    std::vector<Series> F, G;
    for (int k = 0; k < n; ++k) F.push_back(Series::variable(v, static_cast<std::size_t>(k)));
    for (int k = 0; k < d; ++k) G.push_back(Series::variable(v, static_cast<std::size_t>(n + k)));
    return make_map(n, d, std::move(F), std::move(G), std::move(label));
}

/// H2 after H1; source coordinates are H1's.
inline FormalMap compose(const FormalMap& h2, const FormalMap& h1) {
    if (h2.n != h1.n || h2.d != h1.d) throw domain_error("composition needs matching block sizes");
    std::vector<Series> images;
    images.reserve(h1.F.size() + h1.G.size());
    for (const auto& f : h1.F) images.push_back(f);
    for (const auto& g : h1.G) images.push_back(g);
    std::vector<Series> F, G;
    for (const auto& f : h2.F) F.push_back(f.substituted(images));
    for (const auto& g : h2.G) G.push_back(g.substituted(images));
    return make_map(h1.n, h1.d, std::move(F), std::move(G), h2.label + "*" + h1.label);
}

/// Coefficientwise agreement of all monomials of total degree <= k.
inline bool jets_agree(const FormalMap& a, const FormalMap& b, int k) {
    if (a.n != b.n || a.d != b.d) return false;
    auto agree = [&](const Series& x, const Series& y) {
        for (const auto& [m, c] : x.terms())
            if (m.degree() <= k && !(y.coefficient(m) == c)) return false;
        for (const auto& [m, c] : y.terms())
            if (m.degree() <= k && !(x.coefficient(m) == c)) return false;
        return true;
    };
    for (std::size_t i = 0; i < a.F.size(); ++i)
        if (!agree(a.F[i], b.F[i])) return false;
    for (std::size_t i = 0; i < a.G.size(); ++i)
        if (!agree(a.G[i], b.G[i])) return false;
    return true;
}

namespace detail {

/// Components of H composed with the graph w = Q(z, chi, tau), as series over
/// the source manifold variables (z, chi, tau).
struct MapOnGraph {
    std::vector<Series> F_on;    // F(z, Q(z,chi,tau))
    std::vector<Series> G_on;    // G(z, Q(z,chi,tau))
    std::vector<Series> Fbar;    // conj F read in (chi, tau)
    std::vector<Series> Gbar;    // conj G read in (chi, tau)
};

inline MapOnGraph map_on_graph(const Manifold& m, const FormalMap& h) {
    const VarsPtr& V = m.vars;
    std::vector<Series> graph_images;
    graph_images.reserve(h.vars->size());
    for (int k = 0; k < m.n; ++k) graph_images.push_back(Series::variable(V, m.z_index(k)));
    for (int k = 0; k < m.d; ++k) graph_images.push_back(m.Q[static_cast<std::size_t>(k)]);
    std::vector<Series> bar_images;
    bar_images.reserve(h.vars->size());
    for (int k = 0; k < m.n; ++k) bar_images.push_back(Series::variable(V, m.chi_index(k)));
    for (int k = 0; k < m.d; ++k) bar_images.push_back(Series::variable(V, m.tau_index(k)));
    MapOnGraph out;
    for (const auto& f : h.F) {
        out.F_on.push_back(f.substituted(graph_images));
        out.Fbar.push_back(f.conjugated().substituted(bar_images));
    }
    for (const auto& g : h.G) {
        out.G_on.push_back(g.substituted(graph_images));
        out.Gbar.push_back(g.conjugated().substituted(bar_images));
    }
    return out;
}

} // namespace detail

/// Residual of the fundamental identity
/// G(z, Q(z,chi,tau)) - Q'(F(z, Q(z,chi,tau)), Fbar(chi,tau), Gbar(chi,tau)),
/// one component per target dimension, over the source (z, chi, tau).
struct SendsIntoResult {
    std::vector<Series> residual;
    bool holds = false; // all components vanish up to truncation
    bool exact = false; // residual series are exact polynomials
};

inline SendsIntoResult check_sends_into(const Manifold& m, const Manifold& mp, const FormalMap& h) {
    if (h.n != m.n || h.d != m.d || mp.n != m.n || mp.d != m.d)
        throw domain_error("map blocks must match both manifolds");
    detail::MapOnGraph on = detail::map_on_graph(m, h);
    std::vector<Series> target_images;
    target_images.reserve(mp.vars->size());
    for (const auto& s : on.F_on) target_images.push_back(s);
    for (const auto& s : on.Fbar) target_images.push_back(s);
    for (const auto& s : on.Gbar) target_images.push_back(s);
    SendsIntoResult out;
    out.holds = true;
    out.exact = true;
    for (int j = 0; j < m.d; ++j) {
        Series rhs = mp.Q[static_cast<std::size_t>(j)].substituted(target_images);
        Series res = on.G_on[static_cast<std::size_t>(j)] - rhs;
        if (!res.vanishes()) out.holds = false;
        if (!res.exact()) out.exact = false;
        out.residual.push_back(std::move(res));
    }
    return out;
}

/// G_w(0) as a d x d matrix; CR transversality is its invertibility.
inline QMatrix g_w_jet(const FormalMap& h) {
    QMatrix m(static_cast<std::size_t>(h.d), std::vector<GaussianRational>(static_cast<std::size_t>(h.d)));
    Monomial c0 = Monomial::one(h.vars->size());
    for (int r = 0; r < h.d; ++r)
        for (int c = 0; c < h.d; ++c)
            m[static_cast<std::size_t>(r)][static_cast<std::size_t>(c)] =
                h.G[static_cast<std::size_t>(r)].derivative(h.w_index(c)).coefficient(c0);
    return m;
}

inline bool is_cr_transversal(const FormalMap& h) { return !q_det(g_w_jet(h)).is_zero(); }

/// Not totally degenerate: z -> F(z, 0) has generic rank n.
struct TotalDegeneracyResult {
    bool not_totally_degenerate = false;
    RankCertificate certificate;
};

inline TotalDegeneracyResult check_not_totally_degenerate(const FormalMap& h, std::uint64_t seed = 0) {
    VarsPtr zv = [&] {
        Vars v;
        for (int k = 1; k <= h.n; ++k) v.push_back("z" + std::to_string(k));
        return make_vars(std::move(v));
    }();
    std::vector<Series> images;
    images.reserve(h.vars->size());
    for (int k = 0; k < h.n; ++k) images.push_back(Series::variable(zv, static_cast<std::size_t>(k)));
    for (int k = 0; k < h.d; ++k) images.push_back(Series::zero(zv));
    std::vector<Series> fz;
    fz.reserve(h.F.size());
    for (const auto& f : h.F) fz.push_back(f.substituted(images));
    TotalDegeneracyResult out;
    out.certificate = generic_rank(fz, seed);
    out.not_totally_degenerate = out.certificate.rank == static_cast<std::size_t>(h.n);
    return out;
}

/// Fbar(chi, 0): conj F with (z, w) read as (chi, tau), then tau = 0.
inline std::vector<Series> fbar_at_tau0(const FormalMap& h) {
    VarsPtr cv = chi_vars(h.n);
    std::vector<Series> images;
    images.reserve(h.vars->size());
    for (int k = 0; k < h.n; ++k) images.push_back(Series::variable(cv, static_cast<std::size_t>(k)));
    for (int k = 0; k < h.d; ++k) images.push_back(Series::zero(cv));
    std::vector<Series> out;
    out.reserve(h.F.size());
    for (const auto& f : h.F) out.push_back(f.conjugated().substituted(images));
    return out;
}

inline OrderValue ord_det_fbar_chi(const FormalMap& h) {
    std::vector<Series> fb = fbar_at_tau0(h);
    std::vector<std::vector<Series>> jac;
    jac.reserve(fb.size());
    for (const auto& f : fb) {
        std::vector<Series> row;
        for (int c = 0; c < h.n; ++c) row.push_back(f.derivative(static_cast<std::size_t>(c)));
        jac.push_back(std::move(row));
    }
    return series_det(jac).order();
}

/// Order of the vector-valued Fbar(chi, 0): minimum over components.
inline OrderValue ord_fbar(const FormalMap& h) {
    OrderValue best = OrderValue::infinite();
    for (const auto& f : fbar_at_tau0(h)) {
        OrderValue o = f.order();
        if (o.is_infinite()) continue;
        if (best.is_infinite() || o.m < best.m ||
            (o.m == best.m && o.is_exact() && !best.is_exact()))
            best = o;
    }
    return best;
}

enum class Verdict { holds, violated, undecided };

inline std::string verdict_str(Verdict v) {
    switch (v) {
        case Verdict::holds: return "HOLDS";
        case Verdict::violated: return "VIOLATED";
        case Verdict::undecided: return "UNDECIDED";
    }
    return "";
}

/// The two rigidity inequalities and the uniform bound at level k:
///   nu_M(k) >= nu_M'(k) + ord det Fbar_chi(chi, 0)
///   nu_M'(k) * ord Fbar(chi, 0) + ord det Fbar_chi(chi, 0) <= nu_M(k)
///   ord det Fbar_chi(chi, 0) <= nu_M(infinity)
struct RigidityReport {
    int k = 0;
    bool hypotheses_ok = false;
    std::string hypothesis_failure;
    NuValue nu_src;
    NuValue nu_tgt;
    OrderValue ord_det;
    OrderValue ord_f;
    NuInfinity nu_inf_src;
    Verdict basic = Verdict::undecided;
    bool basic_strict = false;
    Verdict refined = Verdict::undecided;
    bool refined_equality = false;
    Verdict uniform = Verdict::undecided;
};

inline RigidityReport check_rigidity(const Manifold& m, const Manifold& mp, const FormalMap& h,
                                     int k, int kmax) {
    RigidityReport rep;
    rep.k = k;
    SendsIntoResult si = check_sends_into(m, mp, h);
    if (!si.holds) {
        rep.hypothesis_failure = "map does not send the source into the target";
        return rep;
    }
    if (!is_cr_transversal(h)) {
        rep.hypothesis_failure = "map is not CR transversal";
        return rep;
    }
    rep.hypotheses_ok = true;
    rep.nu_src = nu(m, k);
    rep.nu_tgt = nu(mp, k);
    rep.ord_det = ord_det_fbar_chi(h);
    rep.ord_f = ord_fbar(h);
    rep.nu_inf_src = nu_infinity(m, kmax);

    const OrderValue& a = rep.nu_src.value;
    const OrderValue& b = rep.nu_tgt.value;
    const OrderValue& od = rep.ord_det;

    if (a.is_exact() && b.is_exact() && od.is_exact()) {
        rep.basic = (a.m >= b.m + od.m) ? Verdict::holds : Verdict::violated;
        rep.basic_strict = a.m > b.m + od.m;
    } else if (a.is_infinite()) {
        rep.basic = Verdict::holds;
    }

    if (b.is_exact() && od.is_exact() && rep.ord_f.is_exact()) {
        if (a.is_exact()) {
            int lhs = b.m * rep.ord_f.m + od.m;
            rep.refined = (lhs <= a.m) ? Verdict::holds : Verdict::violated;
            rep.refined_equality = lhs == a.m;
        } else if (a.is_infinite()) {
            rep.refined = Verdict::holds;
        }
    }

    const OrderValue& ni = rep.nu_inf_src.nu_at_kmax.value;
    if (od.is_exact() && ni.is_exact())
        rep.uniform = (od.m <= ni.m) ? Verdict::holds : Verdict::violated;
    else if (ni.is_infinite() && od.is_exact())
        rep.uniform = Verdict::holds;
    return rep;
}

/// Residuals of the z-differentiated fundamental identity at z = tau = 0.
/// Both sides are composed independently, differentiated, and compared as
/// series in chi. For |alpha| = 1 the first-order jet identity
///   G_w(0) Theta_e(chi) = sum_k Theta'_e_k(Fbar(chi,0)) (F^k_z(0) + F^k_w(0) Theta_e(chi))
/// is additionally evaluated from the invariant side and cross-checked.
struct ThetaPullbackReport {
    int max_alpha = 0;
    bool all_vanish = false;
    bool first_order_cross_check = false;
    std::vector<std::pair<Multiindex, Series>> failures;
};

inline ThetaPullbackReport verify_theta_pullback(const Manifold& m, const Manifold& mp,
                                                 const FormalMap& h, int max_alpha) {
    ThetaPullbackReport rep;
    rep.max_alpha = max_alpha;
    detail::MapOnGraph on = detail::map_on_graph(m, h);
    std::vector<Series> target_images;
    for (const auto& s : on.F_on) target_images.push_back(s);
    for (const auto& s : on.Fbar) target_images.push_back(s);
    for (const auto& s : on.Gbar) target_images.push_back(s);
    std::vector<Series> rhs;
    rhs.reserve(mp.Q.size());
    for (const auto& q : mp.Q) rhs.push_back(q.substituted(target_images));

    const VarsPtr& V = m.vars;
    VarsPtr cv = chi_vars(m.n);
    std::vector<Series> at_zt0(V->size(), Series::zero(V));
    for (int k = 0; k < m.n; ++k) at_zt0[m.chi_index(k)] = Series::variable(V, m.chi_index(k));

    bool ok = true;
    for (const auto& alpha : multiindices_up_to(static_cast<std::size_t>(m.n), max_alpha)) {
        Multiindex full = Multiindex::one(V->size());
        for (int k = 0; k < m.n; ++k) full.exp[k] = alpha.exp[static_cast<std::size_t>(k)];
        for (int j = 0; j < m.d; ++j) {
            Series lhs_d = on.G_on[static_cast<std::size_t>(j)]
                               .derivative(full).substituted(at_zt0).projected(cv);
            Series rhs_d = rhs[static_cast<std::size_t>(j)]
                               .derivative(full).substituted(at_zt0).projected(cv);
            Series res = lhs_d - rhs_d;
            if (!res.vanishes()) {
                ok = false;
                rep.failures.emplace_back(alpha, std::move(res));
            }
        }
    }
    rep.all_vanish = ok;

    // First-order identity from the invariant side.
    QMatrix gw = g_w_jet(h);
    std::vector<Series> fbar0 = fbar_at_tau0(h);
    Monomial c0 = Monomial::one(h.vars->size());
    bool cross_ok = true;
    for (int jj = 0; jj < m.n; ++jj) {
        Multiindex e = Multiindex::unit(static_cast<std::size_t>(m.n), static_cast<std::size_t>(jj));
        std::vector<Series> th = theta(m, e);
        std::vector<Series> lhs(static_cast<std::size_t>(m.d), Series::zero(cv));
        for (int r = 0; r < m.d; ++r)
            for (int c = 0; c < m.d; ++c)
                lhs[static_cast<std::size_t>(r)] +=
                    th[static_cast<std::size_t>(c)]
                        .scaled(gw[static_cast<std::size_t>(r)][static_cast<std::size_t>(c)]);
        std::vector<Series> rhs_cross(static_cast<std::size_t>(m.d), Series::zero(cv));
        for (int kk = 0; kk < m.n; ++kk) {
            Multiindex ek = Multiindex::unit(static_cast<std::size_t>(m.n), static_cast<std::size_t>(kk));
            std::vector<Series> thp = theta(mp, ek);
            std::vector<Series> thp_comp;
            thp_comp.reserve(thp.size());
            for (const auto& s : thp) thp_comp.push_back(s.substituted(fbar0));
            GaussianRational fz = h.F[static_cast<std::size_t>(kk)]
                                      .derivative(h.z_index(jj)).coefficient(c0);
            Series factor = Series::constant(cv, fz);
            for (int l = 0; l < m.d; ++l) {
                GaussianRational fw = h.F[static_cast<std::size_t>(kk)]
                                          .derivative(h.w_index(l)).coefficient(c0);
                factor += th[static_cast<std::size_t>(l)].scaled(fw);
            }
            for (int r = 0; r < m.d; ++r)
                rhs_cross[static_cast<std::size_t>(r)] += thp_comp[static_cast<std::size_t>(r)] * factor;
        }
        for (int r = 0; r < m.d; ++r)
            if (!(lhs[static_cast<std::size_t>(r)] - rhs_cross[static_cast<std::size_t>(r)]).vanishes())
                cross_ok = false;
    }
    rep.first_order_cross_check = cross_ok;
    return rep;
}

/// A CR-transversal map sending M into M' is an automorphism onto M' exactly
/// when some k >= kappa_M has nu_M(k) = nu_M'(k); independently, that happens
/// exactly when dH(0) is invertible. Both routes are computed and compared.
struct AutomorphismReport {
    bool hypotheses_ok = false;
    std::string hypothesis_failure;
    std::optional<bool> criterion_satisfied; // empty when undecidable at budget
    std::optional<int> criterion_k;          // smallest witness k, when satisfied
    int kmax = 0;
    bool det_dH_nonzero = false;
    bool consistent = false;
};

inline QMatrix jacobian_at_origin(const FormalMap& h) {
    std::size_t N = static_cast<std::size_t>(h.n + h.d);
    QMatrix mat(N, std::vector<GaussianRational>(N));
    Monomial c0 = Monomial::one(h.vars->size());
    for (std::size_t r = 0; r < N; ++r) {
        const Series& comp = r < static_cast<std::size_t>(h.n)
                                 ? h.F[r]
                                 : h.G[r - static_cast<std::size_t>(h.n)];
        for (std::size_t c = 0; c < N; ++c) mat[r][c] = comp.derivative(c).coefficient(c0);
    }
    return mat;
}

inline AutomorphismReport automorphism_criterion(const Manifold& m, const Manifold& mp,
                                                 const FormalMap& h, int kmax,
                                                 std::uint64_t seed = 0) {
    AutomorphismReport rep;
    rep.kmax = kmax;
    SendsIntoResult si = check_sends_into(m, mp, h);
    if (!si.holds) {
        rep.hypothesis_failure = "map does not send the source into the target";
        return rep;
    }
    if (!is_cr_transversal(h)) {
        rep.hypothesis_failure = "map is not CR transversal";
        return rep;
    }
    rep.hypotheses_ok = true;
    KappaValue kap = kappa(m, kmax, seed);
    if (kap.is_class_c()) {
        ThetaTable ts = theta_table(m, kmax);
        ThetaTable tt = theta_table(mp, kmax);
        bool any_undecided = false;
        for (int k = *kap.value; k <= kmax; ++k) {
            NuValue a = nu_from_table(ts, k);
            NuValue b = nu_from_table(tt, k);
            bool decided = (a.value.is_exact() || a.value.is_infinite()) &&
                           (b.value.is_exact() || b.value.is_infinite());
            if (!decided) {
                any_undecided = true;
                continue;
            }
            if (a.value == b.value) {
                rep.criterion_k = k;
                rep.criterion_satisfied = true;
                break;
            }
        }
        if (!rep.criterion_k && !any_undecided) rep.criterion_satisfied = false;
    }
    rep.det_dH_nonzero = !q_det(jacobian_at_origin(h)).is_zero();
    rep.consistent = !rep.criterion_satisfied.has_value() ||
                     *rep.criterion_satisfied == rep.det_dH_nonzero;
    return rep;
}

/// Map-free obstruction: a k where both nu values are decided and differ
/// rules out biholomorphic equivalence; when the source is also finitely
/// nondegenerate, it rules out any CR-transversal map from source to target.
struct EquivalenceObstruction {
    std::vector<int> differing_k;
    bool not_equivalent = false;
    bool source_finitely_nondegenerate = false;
    bool rules_out_transversal_map = false;
    int kmax = 0;
};

inline EquivalenceObstruction equivalence_obstruction(const Manifold& m, const Manifold& mp,
                                                      int kmax) {
    EquivalenceObstruction out;
    out.kmax = kmax;
    ThetaTable ts = theta_table(m, kmax);
    ThetaTable tt = theta_table(mp, kmax);
    for (int k = 1; k <= kmax; ++k) {
        NuValue a = nu_from_table(ts, k);
        NuValue b = nu_from_table(tt, k);
        bool decided = (a.value.is_exact() || a.value.is_infinite()) &&
                       (b.value.is_exact() || b.value.is_infinite());
        if (decided && !(a.value == b.value)) out.differing_k.push_back(k);
    }
    out.not_equivalent = !out.differing_k.empty();
    out.source_finitely_nondegenerate =
        is_finitely_nondegenerate_from_table(ts, kmax).verdict == Nondegeneracy::yes;
    out.rules_out_transversal_map = out.not_equivalent && out.source_finitely_nondegenerate;
    return out;
}

} // namespace crjet
