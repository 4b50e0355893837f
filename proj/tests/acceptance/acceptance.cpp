// Acceptance harness for the catalog models and the command line tool.
// Usage: crjet_acceptance <path-to-crjet-binary> <fixtures-dir>
// Prints one [PASS]/[FAIL] line per criterion and exits nonzero on failure.

#include <algorithm>
#include <cstdio>
#include <functional>
#include <iostream>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <tuple>
#include <vector>

#include "catalog.hpp"
#include "crjet/bounds.hpp"
#include "crjet/io.hpp"
#include "crjet/maps.hpp"

using crjet::FormalMap;
using crjet::GaussianRational;
using crjet::Manifold;
using crjet::Multiindex;
using crjet::NuValue;
using crjet::OrderValue;
using crjet::Series;

namespace {

std::string g_cli;
std::string g_fixtures;

std::string fx(const std::string& name) { return g_fixtures + "/" + name; }

Manifold load(const std::string& name) {
    return crjet::read_manifold_file(fx(name)).manifold;
}

// Appends a failure note; the criterion keeps running so one line can list
// everything that went wrong.
bool expect(bool ok, const std::string& what, std::string& why) {
    if (!ok) {
        if (!why.empty()) why += "; ";
        why += what;
    }
    return ok;
}

// Reference nu: enumerate every row tuple, including identically vanishing
// rows, with the same exact/at-least combination rules as the library.
OrderValue blunt_nu(const crjet::ThetaTable& t, int k) {
    struct Row {
        Multiindex alpha;
        int s;
    };
    std::vector<Row> rows;
    for (const auto& [alpha, comps] : t.entries) {
        if (alpha.degree() > k) break;
        (void)comps;
        for (int s = 1; s <= t.d; ++s) rows.push_back({alpha, s});
    }
    std::size_t nn = static_cast<std::size_t>(t.n);
    if (rows.size() < nn) return OrderValue::infinite();
    std::optional<int> best_exact;
    std::optional<int> low_bound;
    std::vector<std::size_t> pick(nn);
    for (std::size_t q = 0; q < nn; ++q) pick[q] = q;
    bool more = true;
    while (more) {
        std::vector<Multiindex> alphas;
        std::vector<int> ss;
        for (std::size_t q : pick) {
            alphas.push_back(rows[q].alpha);
            ss.push_back(rows[q].s);
        }
        auto [det, ord] = crjet::det_D(t, alphas, ss);
        (void)det;
        if (ord.is_exact()) {
            if (!best_exact || ord.m < *best_exact) best_exact = ord.m;
        } else if (ord.is_at_least()) {
            if (!low_bound || ord.m < *low_bound) low_bound = ord.m;
        }
        more = false;
        for (std::size_t q = nn; q-- > 0;) {
            if (pick[q] + 1 <= rows.size() - (nn - q)) {
                ++pick[q];
                for (std::size_t r = q + 1; r < nn; ++r) pick[r] = pick[r - 1] + 1;
                more = true;
                break;
            }
        }
    }
    if (best_exact && (!low_bound || *low_bound >= *best_exact))
        return OrderValue::exact(*best_exact);
    if (!best_exact && !low_bound) return OrderValue::infinite();
    int floor = low_bound ? *low_bound : 0;
    if (best_exact) floor = std::min(floor, *best_exact);
    return OrderValue::at_least(floor);
}

// Reference generic rank by exhaustive minor enumeration.
std::size_t exhaustive_rank(const std::vector<Series>& F) {
    auto J = crjet::jacobian(F);
    std::size_t nr = J.size(), nc = J[0].size();
    std::size_t best = 0;
    auto scan = [&](std::size_t s) -> bool {
        std::vector<std::size_t> rows = crjet::detail::first_subset(s);
        do {
            std::vector<std::size_t> cols = crjet::detail::first_subset(s);
            do {
                std::vector<std::vector<Series>> sub;
                for (std::size_t r : rows) {
                    std::vector<Series> line;
                    for (std::size_t c : cols) line.push_back(J[r][c]);
                    sub.push_back(std::move(line));
                }
                if (!crjet::series_det(sub).vanishes()) return true;
            } while (crjet::detail::next_subset(cols, nc));
        } while (crjet::detail::next_subset(rows, nr));
        return false;
    };
    for (std::size_t s = 1; s <= std::min(nr, nc); ++s)
        if (scan(s)) best = s;
    return best;
}

std::vector<Series> theta_family(const Manifold& m, int k) {
    crjet::ThetaTable t = crjet::theta_table(m, k);
    std::vector<Series> fam;
    for (const auto& [alpha, comps] : t.entries) {
        (void)alpha;
        for (const auto& s : comps) fam.push_back(s);
    }
    return fam;
}

// The defining identity of the iterated Segre maps: the w block of v^(j+1)
// equals Q composed with (z block of v^(j+1), conj v^j).
bool segre_pullback_zero(const Manifold& m, int j) {
    crjet::SegreMap hi = crjet::segre_map(m, j + 1);
    crjet::SegreMap lo = crjet::segre_map(m, j);
    std::vector<Series> images;
    images.reserve(m.vars->size());
    for (int k = 0; k < m.n; ++k) images.push_back(hi.components[static_cast<std::size_t>(k)]);
    for (int k = 0; k < m.n; ++k)
        images.push_back(lo.components[static_cast<std::size_t>(k)].conjugated().embedded(hi.vars));
    for (int k = 0; k < m.d; ++k)
        images.push_back(
            lo.components[static_cast<std::size_t>(m.n + k)].conjugated().embedded(hi.vars));
    for (int k = 0; k < m.d; ++k) {
        Series res = hi.components[static_cast<std::size_t>(m.n + k)] -
                     m.Q[static_cast<std::size_t>(k)].substituted(images);
        if (!res.vanishes()) return false;
    }
    return true;
}

std::vector<Manifold> full_catalog() {
    return {catalog::sphere(), catalog::plane(), catalog::p4(),
            catalog::p8(),     catalog::m1(),    catalog::m2()};
}

std::vector<Manifold> class_c_catalog() {
    return {catalog::sphere(), catalog::p4(), catalog::p8(), catalog::m1(), catalog::m2()};
}

crjet::QMatrix random_invertible(crjet::SmallRng& rng, std::size_t size, bool real_only) {
    for (int attempt = 0; attempt < 32; ++attempt) {
        crjet::QMatrix mat(size, std::vector<GaussianRational>(size));
        for (auto& row : mat)
            for (auto& v : row) {
                crjet::BigRational re(rng.pick(-3, 3), rng.pick(1, 2));
                crjet::BigRational im =
                    real_only ? crjet::BigRational(0)
                              : crjet::BigRational(rng.pick(-3, 3), rng.pick(1, 2));
                v = GaussianRational(re, im);
            }
        if (!crjet::q_det(mat).is_zero()) return mat;
    }
    throw crjet::error("no invertible draw found");
}

std::optional<std::string> run_command(const std::string& args) {
    std::string cmd = "'" + g_cli + "' " + args + " 2>/dev/null";
    FILE* pipe = popen(cmd.c_str(), "r");
    if (!pipe) return std::nullopt;
    std::string out;
    char buf[4096];
    std::size_t got = 0;
    while ((got = fread(buf, 1, sizeof buf, pipe)) > 0) out.append(buf, got);
    if (pclose(pipe) != 0) return std::nullopt;
    return out;
}

// Criterion 1: the two-variable pair with matching kappa but different nu,
// and the map-free conclusion that no CR-transversal map can exist.
bool criterion_pair_separation(std::string& why) {
    Manifold m1 = load("m1.crm");
    Manifold m2 = load("m2.crm");
    bool ok = true;
    crjet::InvariantReport r1 = crjet::invariant_report(m1, 6);
    crjet::InvariantReport r2 = crjet::invariant_report(m2, 6);
    ok &= expect(r1.kappa.value == 2, "kappa of m1", why);
    ok &= expect(r2.kappa.value == 2, "kappa of m2", why);
    ok &= expect(r1.kappa.certificate.verdict == crjet::RankCertificate::Verdict::exact,
                 "kappa of m1 certified exactly", why);
    ok &= expect(r2.kappa.certificate.verdict == crjet::RankCertificate::Verdict::exact,
                 "kappa of m2 certified exactly", why);
    ok &= expect(r1.nu_table.at(2).value == OrderValue::exact(2), "nu_m1(2) = 2", why);
    ok &= expect(r2.nu_table.at(2).value == OrderValue::exact(1), "nu_m2(2) = 1", why);
    crjet::EquivalenceObstruction ob = crjet::equivalence_obstruction(m1, m2, 6);
    ok &= expect(ob.not_equivalent, "models distinguished", why);
    ok &= expect(ob.source_finitely_nondegenerate, "m1 finitely nondegenerate", why);
    ok &= expect(ob.rules_out_transversal_map, "transversal map ruled out", why);
    ok &= expect(std::find(ob.differing_k.begin(), ob.differing_k.end(), 2) !=
                     ob.differing_k.end(),
                 "separation visible at k = 2", why);
    return ok;
}

// Criterion 2: squaring chain between the two power models.
bool criterion_power_chain(std::string& why) {
    Manifold p8 = load("p8.crm");
    Manifold p4 = load("p4.crm");
    FormalMap h = crjet::read_map_file(fx("map24.crmap")).map;
    bool ok = true;
    crjet::SendsIntoResult si = crjet::check_sends_into(p8, p4, h);
    ok &= expect(si.holds && si.exact, "map sends p8 into p4 exactly", why);
    for (const auto& r : si.residual) ok &= expect(r.vanishes(), "residual vanishes", why);
    ok &= expect(crjet::ord_det_fbar_chi(h) == OrderValue::exact(1), "ord det = 1", why);
    ok &= expect(crjet::nu(p8, 4).value == OrderValue::exact(3), "nu_p8(4) = 3", why);
    ok &= expect(crjet::nu(p4, 4).value == OrderValue::exact(1), "nu_p4(4) = 1", why);
    crjet::RigidityReport rig = crjet::check_rigidity(p8, p4, h, 4, 8);
    ok &= expect(rig.hypotheses_ok, "rigidity hypotheses", why);
    ok &= expect(rig.basic == crjet::Verdict::holds && rig.basic_strict,
                 "basic inequality holds strictly", why);
    ok &= expect(rig.refined == crjet::Verdict::holds && rig.refined_equality,
                 "refined inequality holds with equality", why);
    ok &= expect(rig.uniform == crjet::Verdict::holds, "uniform bound holds", why);
    return ok;
}

// Criterion 3: classical sphere values.
bool criterion_sphere(std::string& why) {
    Manifold s = load("sphere.crm");
    bool ok = true;
    crjet::InvariantReport rep = crjet::invariant_report(s, 6);
    ok &= expect(rep.kappa.value == 1, "kappa = 1", why);
    ok &= expect(rep.nu_table.at(1).value == OrderValue::exact(0), "nu(1) = 0", why);
    ok &= expect(rep.nondegeneracy.verdict == crjet::Nondegeneracy::yes,
                 "finitely nondegenerate", why);
    crjet::FiniteTypeResult ft = crjet::finite_type_order(s, 2);
    ok &= expect(ft.order == 2, "finite type order 2", why);
    crjet::JetBoundReport jb = crjet::jet_bound_K(s, 8);
    ok &= expect(jb.K == 2, "K = 2", why);
    ok &= expect(jb.certainty == crjet::Certainty::exact, "K exact", why);
    return ok;
}

// Criterion 4: Segre pullback identity across the catalog.
bool criterion_segre_pullback(std::string& why) {
    bool ok = true;
    for (const Manifold& m : full_catalog())
        for (int j = 1; j <= m.d + 2; ++j)
            ok &= expect(segre_pullback_zero(m, j),
                         m.label + " pullback at j = " + std::to_string(j), why);
    return ok;
}

// Criterion 5: theta pullback residuals vanish on every catalog triple that
// sends source into target.
bool criterion_theta_pullback(std::string& why) {
    FormalMap id11 = crjet::identity_map(1, 1);
    FormalMap id21 = crjet::identity_map(2, 1);
    FormalMap square = catalog::map_square();
    FormalMap quartic = catalog::map_quartic();
    FormalMap scale = catalog::scale_map(2, 4, "scale");
    FormalMap halfscale = catalog::scale_map(1, 2, "halfscale");
    std::vector<std::tuple<Manifold, Manifold, FormalMap>> triples = {
        {catalog::p8(), catalog::p4(), square},
        {catalog::p4(), catalog::sphere(), square},
        {catalog::p8(), catalog::sphere(), quartic},
        {catalog::sphere(), catalog::sphere(), scale},
        {catalog::sphere(), catalog::sphere(), halfscale},
        {catalog::sphere(), catalog::sphere(), id11},
        {catalog::plane(), catalog::plane(), id11},
        {catalog::p4(), catalog::p8(), square},
        {catalog::p4(), catalog::p4(), id11},
        {catalog::p8(), catalog::p8(), id11},
        {catalog::m1(), catalog::m1(), id21},
        {catalog::m2(), catalog::m2(), id21},
    };
    bool ok = true;
    int passing = 0;
    for (const auto& [m, mp, h] : triples) {
        if (!crjet::check_sends_into(m, mp, h).holds) continue;
        ++passing;
        crjet::ThetaPullbackReport rep = crjet::verify_theta_pullback(m, mp, h, 6);
        ok &= expect(rep.all_vanish,
                     m.label + " -> " + mp.label + " via " + h.label + " residuals", why);
        ok &= expect(rep.first_order_cross_check,
                     m.label + " -> " + mp.label + " via " + h.label + " first order", why);
    }
    ok &= expect(passing >= 10, "enough admissible triples", why);
    return ok;
}

// Criterion 6: invariance of kappa, nu, type order, and K under random
// linear changes of normal coordinates.
bool criterion_linear_invariance(std::string& why) {
    crjet::SmallRng rng(2026);
    bool ok = true;
    for (const Manifold& m : class_c_catalog()) {
        crjet::InvariantReport base = crjet::invariant_report(m, 6);
        int base_K = crjet::jet_bound_K(m, 8).K;
        std::optional<int> base_type = crjet::finite_type_order(m, m.d + 1).order;
        for (int round = 0; round < 5; ++round) {
            crjet::QMatrix A =
                random_invertible(rng, static_cast<std::size_t>(m.n), false);
            crjet::QMatrix B =
                random_invertible(rng, static_cast<std::size_t>(m.d), true);
            Manifold changed = crjet::linear_change(m, A, B, m.label + "-changed");
            crjet::InvariantReport rep = crjet::invariant_report(changed, 6);
            std::string tag = m.label + " round " + std::to_string(round);
            ok &= expect(rep.kappa.value == base.kappa.value, tag + " kappa", why);
            for (int k = 1; k <= 6; ++k)
                ok &= expect(rep.nu_table.at(k).value == base.nu_table.at(k).value,
                             tag + " nu(" + std::to_string(k) + ")", why);
            ok &= expect(crjet::finite_type_order(changed, m.d + 1).order == base_type,
                         tag + " type order", why);
            ok &= expect(crjet::jet_bound_K(changed, 8).K == base_K, tag + " K", why);
        }
    }
    // The hyperplane stays outside class C under any such change.
    Manifold plane = catalog::plane();
    for (int round = 0; round < 5; ++round) {
        crjet::QMatrix A = random_invertible(rng, 1, false);
        crjet::QMatrix B = random_invertible(rng, 1, true);
        Manifold changed = crjet::linear_change(plane, A, B, "plane-changed");
        ok &= expect(!crjet::invariant_report(changed, 6).kappa.is_class_c(),
                     "plane stays outside class C", why);
        ok &= expect(!crjet::finite_type_order(changed, 2).finite_type(),
                     "plane stays of infinite type", why);
    }
    return ok;
}

// Criterion 7: pruned nu enumeration against the blunt reference, and the
// randomized rank pipeline against full symbolic minor search.
bool criterion_oracle_equivalence(std::string& why) {
    bool ok = true;
    for (const Manifold& m : full_catalog()) {
        crjet::ThetaTable t = crjet::theta_table(m, 4);
        for (int k = 1; k <= 4; ++k)
            ok &= expect(crjet::nu_from_table(t, k).value == blunt_nu(t, k),
                         m.label + " nu(" + std::to_string(k) + ") vs blunt", why);
        for (int j = 1; j <= 2; ++j) {
            std::vector<Series> fam = crjet::segre_map(m, j).components;
            ok &= expect(crjet::generic_rank(fam, 1).rank == exhaustive_rank(fam),
                         m.label + " segre rank at j = " + std::to_string(j), why);
        }
        std::vector<Series> th = theta_family(m, 4);
        ok &= expect(crjet::generic_rank(th, 1).rank == exhaustive_rank(th),
                     m.label + " theta family rank", why);
    }
    return ok;
}

// Criterion 8: monotonicity and internal consistency.
bool criterion_monotonicity(std::string& why) {
    bool ok = true;
    auto as_score = [](const OrderValue& v) {
        return v.is_infinite() ? 1000000 : v.m;
    };
    for (const Manifold& m : full_catalog()) {
        crjet::InvariantReport rep = crjet::invariant_report(m, 6);
        for (int k = 1; k < 6; ++k)
            ok &= expect(as_score(rep.nu_table.at(k + 1).value) <=
                             as_score(rep.nu_table.at(k).value),
                         m.label + " nu nonincreasing at k = " + std::to_string(k), why);
        std::size_t prev = 0;
        for (int j = 1; j <= 3; ++j) {
            std::size_t r = crjet::generic_rank(crjet::segre_map(m, j).components).rank;
            ok &= expect(r >= prev, m.label + " segre rank nondecreasing", why);
            prev = r;
        }
    }
    for (const Manifold& m : class_c_catalog()) {
        crjet::InvariantReport rep = crjet::invariant_report(m, 6);
        int kap = *rep.kappa.value;
        ok &= expect(rep.nu_table.at(kap).value.is_exact(),
                     m.label + " nu(kappa) finite", why);
        crjet::JetBoundReport jb = crjet::jet_bound_K(m, 8);
        ok &= expect(jb.K >= jb.k1 && jb.k1 >= jb.k0 && jb.k0 >= kap,
                     m.label + " ladder ordered", why);
    }
    return ok;
}

// Criterion 9: byte-identical JSON across repeated CLI runs.
bool criterion_cli_determinism(std::string& why) {
    std::vector<std::string> commands = {
        "invariants '" + fx("sphere.crm") + "' --json",
        "invariants '" + fx("m1.crm") + "' --kmax 6 --json",
        "invariants '" + fx("graph_s.crm") + "' --kmax 4 --json",
        "segre '" + fx("m1.crm") + "' --json",
        "segre '" + fx("p8.crm") + "' --jmax 3 --json",
        "bounds '" + fx("p4.crm") + "' --json",
        "bounds '" + fx("m1.crm") + "' --use-type-order --json",
        "check-map '" + fx("p8.crm") + "' '" + fx("p4.crm") + "' '" + fx("map24.crmap") +
            "' --k 4 --json",
        "check-map '" + fx("sphere.crm") + "' '" + fx("sphere.crm") + "' '" +
            fx("scale.crmap") + "' --json",
    };
    bool ok = true;
    for (const std::string& cmd : commands) {
        std::optional<std::string> first = run_command(cmd);
        std::optional<std::string> second = run_command(cmd);
        ok &= expect(first.has_value() && second.has_value(), "command runs: " + cmd, why);
        if (!first || !second) continue;
        ok &= expect(!first->empty(), "output nonempty: " + cmd, why);
        ok &= expect(*first == *second, "outputs identical: " + cmd, why);
    }
    return ok;
}

} // namespace

int main(int argc, char** argv) {
    if (argc != 3) {
        std::cerr << "usage: crjet_acceptance <crjet-binary> <fixtures-dir>\n";
        return 2;
    }
    g_cli = argv[1];
    g_fixtures = argv[2];

    struct Criterion {
        std::string name;
        std::function<bool(std::string&)> run;
    };
    std::vector<Criterion> criteria = {
        {"two-variable pair separated by nu", criterion_pair_separation},
        {"power model squaring chain", criterion_power_chain},
        {"sphere classical values", criterion_sphere},
        {"Segre pullback identity", criterion_segre_pullback},
        {"theta pullback identity", criterion_theta_pullback},
        {"linear change invariance", criterion_linear_invariance},
        {"oracle equivalence", criterion_oracle_equivalence},
        {"monotonicity and consistency", criterion_monotonicity},
        {"CLI determinism", criterion_cli_determinism},
    };

    int failed = 0;
    for (std::size_t k = 0; k < criteria.size(); ++k) {
        std::string why;
        bool ok = false;
        try {
            ok = criteria[k].run(why);
        } catch (const std::exception& e) {
            why = std::string("exception: ") + e.what();
        }
        std::cout << (ok ? "[PASS]" : "[FAIL]") << " criterion " << (k + 1) << ": "
                  << criteria[k].name << "\n";
        if (!ok) {
            ++failed;
            std::cerr << "  detail: " << (why.empty() ? "(none)" : why) << "\n";
        }
    }
    std::cout << criteria.size() - static_cast<std::size_t>(failed) << "/" << criteria.size()
              << " criteria passed\n";
    return failed == 0 ? 0 : 1;
}
