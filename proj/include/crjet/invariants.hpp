#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "crjet/manifold.hpp"
#include "crjet/segre.hpp"
#include "crjet/series.hpp"

namespace crjet {

/// Theta_alpha(chi) = (d/dz)^alpha Q(0, chi, 0): a d-vector of series in chi.
/// The raw derivative is used, without dividing by alpha factorial.
inline std::vector<Series> theta(const Manifold& m, const Multiindex& alpha) {
    if (static_cast<int>(alpha.exp.size()) != m.n) throw domain_error("alpha must have n entries");
    if (alpha.degree() < 1) throw domain_error("alpha must be nonzero");
    std::vector<Series> za(static_cast<std::size_t>(2 * m.n + m.d), Series::zero(m.vars));
    for (int k = 0; k < m.n; ++k)
        za[m.chi_index(k)] = Series::variable(m.vars, m.chi_index(k));
    VarsPtr cvars = chi_vars(m.n);
    Multiindex full = Multiindex::one(m.vars->size());
    for (int k = 0; k < m.n; ++k) full.exp[m.z_index(k)] = alpha.exp[static_cast<std::size_t>(k)];
    std::vector<Series> out;
    out.reserve(m.Q.size());
    for (const auto& q : m.Q)
        out.push_back(q.derivative(full).substituted(za).projected(cvars));
    return out;
}

/// All Theta_alpha for 1 <= |alpha| <= max_degree, keyed by alpha.
struct ThetaTable {
    int n = 0;
    int d = 0;
    int max_degree = 0;
    VarsPtr cvars;
    std::map<Multiindex, std::vector<Series>, GradedLex> entries;
};

inline ThetaTable theta_table(const Manifold& m, int max_degree) {
    if (max_degree < 1) throw domain_error("max_degree must be at least 1");
    ThetaTable t;
    t.n = m.n;
    t.d = m.d;
    t.max_degree = max_degree;
    t.cvars = chi_vars(m.n);
    for (const auto& alpha : multiindices_up_to(static_cast<std::size_t>(m.n), max_degree))
        t.entries.emplace(alpha, theta(m, alpha));
    return t;
}

/// Smallest k for which chi -> (Theta_alpha(chi))_{|alpha| <= k} has generic
/// rank n. value is empty when no k <= searched_up_to works.
struct KappaValue {
    std::optional<int> value;
    int searched_up_to = 0;
    RankCertificate certificate;

    bool is_class_c() const { return value.has_value(); }
};

inline KappaValue kappa_from_table(const ThetaTable& t, int kmax, std::uint64_t seed = 0) {
    if (kmax < 1 || kmax > t.max_degree) throw domain_error("kmax out of table range");
    KappaValue out;
    out.searched_up_to = kmax;
    std::vector<Series> stacked;
    auto it = t.entries.begin();
    for (int k = 1; k <= kmax; ++k) {
        while (it != t.entries.end() && it->first.degree() <= k) {
            for (const auto& comp : it->second) stacked.push_back(comp);
            ++it;
        }
        if (stacked.empty()) continue;
        RankCertificate cert = generic_rank(stacked, seed);
        if (cert.rank == static_cast<std::size_t>(t.n)) {
            out.value = k;
            out.certificate = cert;
            return out;
        }
        out.certificate = cert;
    }
    return out;
}

inline KappaValue kappa(const Manifold& m, int kmax, std::uint64_t seed = 0) {
    return kappa_from_table(theta_table(m, kmax), kmax, seed);
}

/// Determinant of the n x n matrix whose row j is the chi-gradient of
/// Theta^{s_j}_{alpha_j}. Components in `ss` are 1-based.
inline std::pair<Series, OrderValue> det_D(const ThetaTable& t,
                                           const std::vector<Multiindex>& alphas,
                                           const std::vector<int>& ss) {
    if (alphas.size() != static_cast<std::size_t>(t.n) || ss.size() != alphas.size())
        throw domain_error("need n rows of (alpha, s)");
    std::vector<std::vector<Series>> rows;
    rows.reserve(alphas.size());
    for (std::size_t r = 0; r < alphas.size(); ++r) {
        if (ss[r] < 1 || ss[r] > t.d) throw domain_error("component index out of range");
        if (alphas[r].degree() < 1 || alphas[r].degree() > t.max_degree)
            throw domain_error("alpha degree out of table range");
        auto it = t.entries.find(alphas[r]);
        if (it == t.entries.end()) throw domain_error("alpha missing from table");
        const Series& th = it->second[static_cast<std::size_t>(ss[r] - 1)];
        std::vector<Series> grad;
        grad.reserve(static_cast<std::size_t>(t.n));
        for (int c = 0; c < t.n; ++c) grad.push_back(th.derivative(static_cast<std::size_t>(c)));
        rows.push_back(std::move(grad));
    }
    Series det = series_det(rows);
    return {det, det.order()};
}

inline std::pair<Series, OrderValue> det_D(const Manifold& m,
                                           const std::vector<Multiindex>& alphas,
                                           const std::vector<int>& ss) {
    int deg = 1;
    for (const auto& a : alphas) deg = std::max(deg, a.degree());
    return det_D(theta_table(m, deg), alphas, ss);
}

struct NuWitness {
    std::vector<Multiindex> alphas;
    std::vector<int> ss; // 1-based components
};

/// nu(k): infimum of ord det over all admissible row tuples with
/// max |alpha_j| <= k. Infinite when every determinant vanishes identically;
/// AtLeast when truncation blocks the verdict.
struct NuValue {
    OrderValue value;
    std::optional<NuWitness> witness;
};

inline NuValue nu_from_table(const ThetaTable& t, int k) {
    if (k < 1 || k > t.max_degree) throw domain_error("k out of table range");
    // Rows with identically vanishing Theta component contribute only zero
    // determinants and are skipped; a repeated row likewise forces a zero
    // determinant, so only strictly increasing row subsets are scanned.
    struct Row {
        Multiindex alpha;
        int s;
    };
    std::vector<Row> rows;
    for (const auto& [alpha, comps] : t.entries) {
        if (alpha.degree() > k) break;
        for (int s = 1; s <= t.d; ++s)
            if (!comps[static_cast<std::size_t>(s - 1)].vanishes()) rows.push_back({alpha, s});
    }
    NuValue out;
    std::size_t nn = static_cast<std::size_t>(t.n);
    if (rows.size() < nn) {
        out.value = OrderValue::infinite();
        return out;
    }
    std::optional<int> best_exact;
    std::optional<int> lowest_bound;
    NuWitness best_witness;
    std::vector<std::size_t> idx(nn);
    for (std::size_t q = 0; q < nn; ++q) idx[q] = q;
    while (true) {
        std::vector<Multiindex> alphas;
        std::vector<int> ss;
        for (std::size_t q : idx) {
            alphas.push_back(rows[q].alpha);
            ss.push_back(rows[q].s);
        }
        auto [det, ord] = det_D(t, alphas, ss);
        if (ord.is_exact()) {
            if (!best_exact || ord.m < *best_exact) {
                best_exact = ord.m;
                best_witness = {std::move(alphas), std::move(ss)};
            }
        } else if (ord.is_at_least()) {
            if (!lowest_bound || ord.m < *lowest_bound) lowest_bound = ord.m;
        }
        // advance combination
        std::size_t pos = nn;
        bool more = false;
        while (pos-- > 0) {
            if (idx[pos] + (nn - pos) < rows.size()) {
                ++idx[pos];
                for (std::size_t q = pos + 1; q < nn; ++q) idx[q] = idx[q - 1] + 1;
                more = true;
                break;
            }
        }
        if (!more) break;
    }
    if (best_exact && (!lowest_bound || *lowest_bound >= *best_exact)) {
        out.value = OrderValue::exact(*best_exact);
        out.witness = std::move(best_witness);
    } else if (!best_exact && !lowest_bound) {
        out.value = OrderValue::infinite();
    } else {
        int lb = lowest_bound ? *lowest_bound : 0;
        if (best_exact) lb = std::min(lb, *best_exact);
        out.value = OrderValue::at_least(lb);
    }
    return out;
}

inline NuValue nu(const Manifold& m, int k) { return nu_from_table(theta_table(m, k), k); }

enum class Certainty { exact, upper_bound, valid_upper_bound };

inline std::string certainty_str(Certainty c) {
    switch (c) {
        case Certainty::exact: return "EXACT";
        case Certainty::upper_bound: return "UPPER_BOUND";
        case Certainty::valid_upper_bound: return "VALID_UPPER_BOUND";
    }
    return "";
}

/// nu at the search budget, standing in for the limit over all k. The value
/// is exact only when it is 0 (it cannot decrease further); otherwise a
/// larger budget could still lower it.
struct NuInfinity {
    NuValue nu_at_kmax;
    int kmax = 0;
    Certainty certainty = Certainty::upper_bound;
};

inline NuInfinity nu_infinity_from_table(const ThetaTable& t, int kmax) {
    NuInfinity out;
    out.kmax = kmax;
    out.nu_at_kmax = nu_from_table(t, kmax);
    out.certainty = (out.nu_at_kmax.value == OrderValue::exact(0)) ? Certainty::exact
                                                                   : Certainty::upper_bound;
    return out;
}

inline NuInfinity nu_infinity(const Manifold& m, int kmax) {
    return nu_infinity_from_table(theta_table(m, kmax), kmax);
}

enum class Nondegeneracy { yes, no_up_to_kmax, unknown };

struct NondegeneracyResult {
    Nondegeneracy verdict = Nondegeneracy::unknown;
    std::optional<int> witness_k; // smallest k with nu(k) = 0
    int kmax = 0;
};

/// Finitely nondegenerate iff nu(k) = 0 for some k <= kmax.
inline NondegeneracyResult is_finitely_nondegenerate_from_table(const ThetaTable& t, int kmax) {
    NondegeneracyResult out;
    out.kmax = kmax;
    for (int k = 1; k <= kmax; ++k) {
        NuValue v = nu_from_table(t, k);
        if (v.value == OrderValue::exact(0)) {
            out.verdict = Nondegeneracy::yes;
            out.witness_k = k;
            return out;
        }
    }
    NuValue last = nu_from_table(t, kmax);
    if (last.value.is_exact() || last.value.is_infinite())
        out.verdict = Nondegeneracy::no_up_to_kmax;
    else if (last.value.is_at_least() && last.value.m >= 1)
        out.verdict = Nondegeneracy::no_up_to_kmax;
    else
        out.verdict = Nondegeneracy::unknown;
    return out;
}

inline NondegeneracyResult is_finitely_nondegenerate(const Manifold& m, int kmax) {
    return is_finitely_nondegenerate_from_table(theta_table(m, kmax), kmax);
}

/// Aggregate of the chi-side invariants at one search budget.
struct InvariantReport {
    std::string label;
    int n = 0;
    int d = 0;
    int kmax = 0;
    KappaValue kappa;
    std::map<int, NuValue> nu_table; // k = 1..kmax
    NuInfinity nu_inf;
    NondegeneracyResult nondegeneracy;
};

inline InvariantReport invariant_report(const Manifold& m, int kmax, std::uint64_t seed = 0) {
    ThetaTable t = theta_table(m, kmax);
    InvariantReport rep;
    rep.label = m.label;
    rep.n = m.n;
    rep.d = m.d;
    rep.kmax = kmax;
    rep.kappa = kappa_from_table(t, kmax, seed);
    for (int k = 1; k <= kmax; ++k) rep.nu_table.emplace(k, nu_from_table(t, k));
    rep.nu_inf = nu_infinity_from_table(t, kmax);
    rep.nondegeneracy = is_finitely_nondegenerate_from_table(t, kmax);
    return rep;
}

} // namespace crjet
