#include <catch2/catch_amalgamated.hpp>

#include <algorithm>
#include <vector>

#include "catalog.hpp"
#include "crjet/invariants.hpp"

using crjet::GaussianRational;
using crjet::Manifold;
using crjet::Monomial;
using crjet::Multiindex;
using crjet::NuValue;
using crjet::OrderValue;
using crjet::Series;
using crjet::VarsPtr;

namespace {

GaussianRational im(long n, long d = 1) { return catalog::imag(n, d); }

// Reference nu computed the blunt way: every component of every Theta row,
// including identically vanishing ones, and every n-element row subset.
NuValue blunt_nu(const crjet::ThetaTable& t, int k) {
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
    NuValue out;
    std::size_t nn = static_cast<std::size_t>(t.n);
    if (rows.size() < nn) {
        out.value = OrderValue::infinite();
        return out;
    }
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
    if (best_exact && (!low_bound || *low_bound >= *best_exact)) {
        out.value = OrderValue::exact(*best_exact);
        return out;
    }
    if (!best_exact && !low_bound) {
        out.value = OrderValue::infinite();
        return out;
    }
    int floor = low_bound ? *low_bound : 0;
    if (best_exact) floor = std::min(floor, *best_exact);
    out.value = OrderValue::at_least(floor);
    return out;
}

} // namespace

TEST_CASE("theta rows are raw derivatives on the first Segre set", "[invariants]") {
    VarsPtr c1 = crjet::chi_vars(1);
    auto th = crjet::theta(catalog::sphere(), Monomial({1}));
    REQUIRE(th.size() == 1);
    CHECK(th[0].same_series(Series::variable(c1, 0).scaled(im(2))));

    // No factorial normalization: Theta_4 of p8 carries 2i * 4! = 48i.
    auto t8 = crjet::theta(catalog::p8(), Monomial({4}));
    CHECK(t8[0].same_series(Series::term(c1, Monomial({4}), im(48))));
    CHECK(crjet::theta(catalog::p8(), Monomial({3}))[0].identically_zero());

    VarsPtr c2 = crjet::chi_vars(2);
    Manifold m1 = catalog::m1();
    CHECK(crjet::theta(m1, Monomial({1, 0}))[0]
              .same_series(Series::variable(c2, 0).scaled(im(2))));
    CHECK(crjet::theta(m1, Monomial({0, 1}))[0]
              .same_series(Series::term(c2, Monomial({4, 0}), im(1))));
    CHECK(crjet::theta(m1, Monomial({2, 0}))[0]
              .same_series(Series::term(c2, Monomial({0, 3}), im(2))));
    CHECK(crjet::theta(m1, Monomial({0, 3}))[0]
              .same_series(Series::term(c2, Monomial({2, 0}), im(6))));
    CHECK(crjet::theta(m1, Monomial({4, 0}))[0]
              .same_series(Series::term(c2, Monomial({0, 1}), im(24))));
}

TEST_CASE("theta table covers all alphas up to the degree", "[invariants]") {
    crjet::ThetaTable t = crjet::theta_table(catalog::m1(), 3);
    CHECK(t.n == 2);
    CHECK(t.d == 1);
    // Degrees 1..3 in two z variables.
    CHECK(t.entries.size() == 2 + 3 + 4);
    for (const auto& [alpha, comps] : t.entries) {
        CHECK(alpha.degree() <= 3);
        REQUIRE(comps.size() == 1);
    }
}

TEST_CASE("kappa across the catalog", "[invariants]") {
    CHECK(crjet::kappa(catalog::sphere(), 8).value == std::optional<int>(1));
    CHECK(crjet::kappa(catalog::p4(), 8).value == std::optional<int>(2));
    CHECK(crjet::kappa(catalog::p8(), 8).value == std::optional<int>(4));
    CHECK(crjet::kappa(catalog::m1(), 8).value == std::optional<int>(2));
    CHECK(crjet::kappa(catalog::m2(), 8).value == std::optional<int>(2));

    crjet::KappaValue flat = crjet::kappa(catalog::plane(), 6);
    CHECK_FALSE(flat.is_class_c());
    CHECK(flat.searched_up_to == 6);
}

TEST_CASE("determinants of chi gradients", "[invariants]") {
    SECTION("m1 pair (1,0), (2,0)") {
        auto [det, ord] = crjet::det_D(catalog::m1(), {Monomial({1, 0}), Monomial({2, 0})}, {1, 1});
        VarsPtr c2 = crjet::chi_vars(2);
        // det [[2i, 0], [0, 6i chi2^2]] = -12 chi2^2.
        CHECK(det.same_series(Series::term(c2, Monomial({0, 2}), GaussianRational(-12))));
        CHECK(ord == OrderValue::exact(2));
    }
    SECTION("m2 pair (1,0), (2,0)") {
        auto [det, ord] = crjet::det_D(catalog::m2(), {Monomial({1, 0}), Monomial({2, 0})}, {1, 1});
        VarsPtr c2 = crjet::chi_vars(2);
        CHECK(det.same_series(Series::term(c2, Monomial({0, 1}), GaussianRational(-8))));
        CHECK(ord == OrderValue::exact(1));
    }
    SECTION("degenerate pair gives the zero series") {
        auto [det, ord] = crjet::det_D(catalog::m1(), {Monomial({1, 0}), Monomial({0, 1})}, {1, 1});
        CHECK(det.identically_zero());
        CHECK(ord == OrderValue::infinite());
    }
}

TEST_CASE("nu values across the catalog", "[invariants]") {
    CHECK(crjet::nu(catalog::sphere(), 1).value == OrderValue::exact(0));
    CHECK(crjet::nu(catalog::plane(), 4).value == OrderValue::infinite());

    CHECK(crjet::nu(catalog::p4(), 1).value == OrderValue::infinite());
    CHECK(crjet::nu(catalog::p4(), 2).value == OrderValue::exact(1));
    CHECK(crjet::nu(catalog::p8(), 4).value == OrderValue::exact(3));

    Manifold m1 = catalog::m1();
    CHECK(crjet::nu(m1, 1).value == OrderValue::infinite());
    CHECK(crjet::nu(m1, 2).value == OrderValue::exact(2));
    CHECK(crjet::nu(m1, 3).value == OrderValue::exact(2));
    CHECK(crjet::nu(m1, 4).value == OrderValue::exact(0));

    Manifold m2 = catalog::m2();
    CHECK(crjet::nu(m2, 2).value == OrderValue::exact(1));
    CHECK(crjet::nu(m2, 3).value == OrderValue::exact(1));
    CHECK(crjet::nu(m2, 4).value == OrderValue::exact(0));
}

TEST_CASE("nu witnesses recompute to the reported order", "[invariants]") {
    for (const Manifold& m : {catalog::sphere(), catalog::p4(), catalog::p8(), catalog::m1(),
                              catalog::m2()}) {
        for (int k = 1; k <= 5; ++k) {
            NuValue v = crjet::nu(m, k);
            if (!v.value.is_exact()) continue;
            REQUIRE(v.witness.has_value());
            auto [det, ord] = crjet::det_D(m, v.witness->alphas, v.witness->ss);
            INFO(m.label << " k=" << k);
            CHECK(ord == v.value);
            for (const auto& a : v.witness->alphas) CHECK(a.degree() <= k);
        }
    }

    // m1 at k = 2 is pinned to the canonical witness pair.
    NuValue v = crjet::nu(catalog::m1(), 2);
    REQUIRE(v.witness.has_value());
    REQUIRE(v.witness->alphas.size() == 2);
    CHECK(v.witness->alphas[0].exp == std::vector<int>({1, 0}));
    CHECK(v.witness->alphas[1].exp == std::vector<int>({2, 0}));
    CHECK(v.witness->ss == std::vector<int>({1, 1}));
}

TEST_CASE("pruned search matches the blunt reference", "[invariants]") {
    for (const Manifold& m : {catalog::sphere(), catalog::plane(), catalog::p4(), catalog::m1(),
                              catalog::m2()}) {
        crjet::ThetaTable t = crjet::theta_table(m, 4);
        for (int k = 1; k <= 4; ++k) {
            INFO(m.label << " k=" << k);
            CHECK(crjet::nu_from_table(t, k).value == blunt_nu(t, k).value);
        }
    }
}

TEST_CASE("nu at the search horizon", "[invariants]") {
    crjet::NuInfinity inf1 = crjet::nu_infinity(catalog::m1(), 8);
    CHECK(inf1.nu_at_kmax.value == OrderValue::exact(0));
    CHECK(inf1.certainty == crjet::Certainty::exact);

    crjet::NuInfinity inf8 = crjet::nu_infinity(catalog::p8(), 8);
    CHECK(inf8.nu_at_kmax.value == OrderValue::exact(3));
    CHECK(inf8.certainty == crjet::Certainty::upper_bound);

    CHECK(crjet::certainty_str(crjet::Certainty::exact) == "EXACT");
    CHECK(crjet::certainty_str(crjet::Certainty::upper_bound) == "UPPER_BOUND");
    CHECK(crjet::certainty_str(crjet::Certainty::valid_upper_bound) == "VALID_UPPER_BOUND");
}

TEST_CASE("finite nondegeneracy detection", "[invariants]") {
    crjet::NondegeneracyResult s = crjet::is_finitely_nondegenerate(catalog::sphere(), 4);
    CHECK(s.verdict == crjet::Nondegeneracy::yes);
    CHECK(s.witness_k == std::optional<int>(1));

    crjet::NondegeneracyResult m = crjet::is_finitely_nondegenerate(catalog::m1(), 8);
    CHECK(m.verdict == crjet::Nondegeneracy::yes);
    CHECK(m.witness_k == std::optional<int>(4));

    crjet::NondegeneracyResult p = crjet::is_finitely_nondegenerate(catalog::plane(), 4);
    CHECK(p.verdict == crjet::Nondegeneracy::no_up_to_kmax);
}

TEST_CASE("full report ties the pieces together", "[invariants]") {
    crjet::InvariantReport rep = crjet::invariant_report(catalog::m1(), 6);
    CHECK(rep.label == "m1");
    CHECK(rep.kappa.value == std::optional<int>(2));
    REQUIRE(rep.nu_table.size() == 6);
    CHECK(rep.nu_table.at(2).value == OrderValue::exact(2));
    CHECK(rep.nu_table.at(6).value == OrderValue::exact(0));
    CHECK(rep.nu_inf.certainty == crjet::Certainty::exact);
    CHECK(rep.nondegeneracy.verdict == crjet::Nondegeneracy::yes);

    // nu is nonincreasing in k.
    int prev = -1;
    bool first = true;
    for (const auto& [k, v] : rep.nu_table) {
        if (v.value.is_exact()) {
            if (!first && prev >= 0) CHECK(v.value.m <= prev);
            prev = v.value.m;
            first = false;
        }
    }
}
