#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "crjet/invariants.hpp"
#include "crjet/segre.hpp"

namespace crjet {

/// Jet determination data for a manifold of class C and finite type:
///   k0 = min over k >= kappa of max(k, nu(k))
///   k1 = max(k0, kappa * (nu_inf + 1))
///   kj = k1 + kappa * (j - 1),  K = k_{d+1}
/// With --use-type-order, K = k_m for the finite type order m instead.
struct JetBoundReport {
    std::string label;
    int kmax = 0;
    KappaValue kappa;
    std::map<int, NuValue> nu_table;    // every k the search touched
    NuInfinity nu_inf;
    int k0 = 0;
    int k0_attained_at = 0;
    int k1 = 0;
    std::map<int, int> kj;              // j = 1..d+1
    int K = 0;
    Certainty certainty = Certainty::exact;
    std::optional<int> finite_type_m;
    bool used_type_order = false;
    std::vector<std::string> notes;
};

namespace detail {

inline int exact_nu(const ThetaTable& t, int k, std::map<int, NuValue>& table) {
    auto it = table.find(k);
    if (it == table.end()) it = table.emplace(k, nu_from_table(t, k)).first;
    const OrderValue& v = it->second.value;
    if (!v.is_exact())
        throw truncation_error("nu(" + std::to_string(k) +
                               ") undecided at this budget; raise kmax or the truncation degree");
    return v.m;
}

} // namespace detail

/// Searching k in [kappa, max(kappa, nu(kappa))] suffices: any larger k has
/// max(k, nu(k)) >= k beyond every candidate already seen.
inline JetBoundReport jet_bound_K(const Manifold& m, int kmax, bool use_type_order = false,
                                  std::uint64_t seed = 0) {
    JetBoundReport rep;
    rep.label = m.label;
    rep.kmax = kmax;
    rep.used_type_order = use_type_order;

    ThetaTable table = theta_table(m, kmax);
    rep.kappa = kappa_from_table(table, kmax, seed);
    if (!rep.kappa.is_class_c())
        throw truncation_error("class C refuted up to kmax = " + std::to_string(kmax) +
                               "; jet bound undefined at this budget");
    int kap = *rep.kappa.value;

    // nu beyond kmax needs a deeper theta table; extend lazily.
    ThetaTable deep = table;
    auto ensure_depth = [&](int k) {
        if (k > deep.max_degree) deep = theta_table(m, k);
    };
    ensure_depth(kap);
    int nu_kap = detail::exact_nu(deep, kap, rep.nu_table);
    int hi = std::max(kap, nu_kap);
    ensure_depth(hi);
    rep.k0 = 0;
    for (int k = kap; k <= hi; ++k) {
        int cand = std::max(k, detail::exact_nu(deep, k, rep.nu_table));
        if (rep.k0 == 0 || cand < rep.k0) {
            rep.k0 = cand;
            rep.k0_attained_at = k;
        }
    }
    rep.notes.push_back("k0 attained at k = " + std::to_string(rep.k0_attained_at));

    rep.nu_inf = nu_infinity_from_table(table, kmax);
    const OrderValue& ni = rep.nu_inf.nu_at_kmax.value;
    if (!ni.is_exact())
        throw truncation_error("nu(infinity) undecided at this budget");
    rep.k1 = std::max(rep.k0, kap * (ni.m + 1));
    rep.certainty = rep.nu_inf.certainty == Certainty::exact ? Certainty::exact
                                                             : Certainty::valid_upper_bound;
    if (rep.certainty == Certainty::valid_upper_bound)
        rep.notes.push_back("nu(infinity) taken at kmax = " + std::to_string(kmax) +
                            "; bound remains valid");

    FiniteTypeResult ft = finite_type_order(m, m.d + 1, seed);
    if (!ft.finite_type()) {
        std::string what = ft.refuted_exactly
                               ? "not of finite type; jet bound undefined"
                               : "finite type undecided up to j = " + std::to_string(m.d + 1);
        throw truncation_error(what);
    }
    rep.finite_type_m = ft.order;
    rep.notes.push_back("finite type of order m = " + std::to_string(*ft.order));

    for (int j = 1; j <= m.d + 1; ++j) rep.kj.emplace(j, rep.k1 + kap * (j - 1));
    int target_j = use_type_order ? *ft.order : m.d + 1;
    rep.K = rep.k1 + kap * (target_j - 1);
    if (use_type_order)
        rep.notes.push_back("K taken at the finite type order j = " + std::to_string(target_j));
    for (int k = 1; k <= kmax; ++k)
        if (!rep.nu_table.count(k)) rep.nu_table.emplace(k, nu_from_table(table, k));
    return rep;
}

} // namespace crjet
