#include <catch2/catch_amalgamated.hpp>

#include <string>
#include <vector>

#include "catalog.hpp"
#include "crjet/invariants.hpp"
#include "crjet/manifold.hpp"

using crjet::BigRational;
using crjet::GaussianRational;
using crjet::Manifold;
using crjet::Monomial;
using crjet::Series;
using crjet::VarsPtr;

namespace {

bool has_issue(const crjet::ValidationReport& rep, const std::string& needle) {
    for (const auto& issue : rep.issues)
        if (issue.what.find(needle) != std::string::npos) return true;
    return false;
}

} // namespace

TEST_CASE("variable layout", "[manifold]") {
    VarsPtr v = crjet::manifold_vars(2, 1);
    REQUIRE(v->size() == 5);
    CHECK((*v)[0] == "z1");
    CHECK((*v)[2] == "chi1");
    CHECK((*v)[4] == "tau1");

    Manifold m = catalog::m1();
    CHECK(m.vars->size() == 5);
    CHECK(m.z_index(1) == 1);
    CHECK(m.chi_index(0) == 2);
    CHECK(m.tau_index(0) == 4);
    CHECK(m.exact());
}

TEST_CASE("validation accepts the catalog", "[manifold]") {
    for (const Manifold& m : {catalog::sphere(), catalog::plane(), catalog::p4(), catalog::p8(),
                              catalog::m1(), catalog::m2()}) {
        crjet::ValidationReport rep = crjet::validate(m);
        INFO(m.label);
        CHECK(rep.ok);
        CHECK(rep.issues.empty());
    }
}

TEST_CASE("Q = tau + i z chi satisfies the reality identity", "[manifold]") {
    // This is Im w = |z|^2 / 2 in disguise, so it must validate cleanly.
    VarsPtr v = crjet::manifold_vars(1, 1);
    Series q = Series::variable(v, 2) + catalog::mono(v, catalog::imag(1), {1, 1, 0});
    Manifold m = crjet::make_manifold(1, 1, {q}, "half-sphere");
    CHECK(crjet::validate(m).ok);
}

TEST_CASE("validation failures are reported with residuals", "[manifold]") {
    VarsPtr v = crjet::manifold_vars(1, 1);
    Series tau = Series::variable(v, 2);

    SECTION("real quadratic term breaks reality") {
        // Q = tau + z chi composes to w + 2 z chi instead of w.
        Manifold m{1, 1, "bad", v, {tau + catalog::mono(v, GaussianRational(1), {1, 1, 0})}};
        crjet::ValidationReport rep = crjet::validate(m);
        CHECK_FALSE(rep.ok);
        REQUIRE(has_issue(rep, "reality"));
        const Series& res = rep.issues.front().residual;
        CHECK(res.coefficient(Monomial({1, 1, 0})) == GaussianRational(2));
        CHECK(res.terms().size() == 1);
        CHECK_THROWS_AS(crjet::make_manifold(1, 1, {m.Q[0]}, "bad"), crjet::domain_error);
    }

    SECTION("constant term fails fast") {
        Manifold m{1, 1, "bad", v, {tau + Series::constant(v, GaussianRational(1))}};
        crjet::ValidationReport rep = crjet::validate(m);
        CHECK_FALSE(rep.ok);
        CHECK(has_issue(rep, "Q(0)"));
    }

    SECTION("z-dependence at chi = 0 breaks normality") {
        Manifold m{1, 1, "bad", v, {tau + catalog::mono(v, GaussianRational(1), {2, 0, 0})}};
        crjet::ValidationReport rep = crjet::validate(m);
        CHECK_FALSE(rep.ok);
        CHECK(has_issue(rep, "normality"));
    }
}

TEST_CASE("rigid graph data", "[manifold]") {
    VarsPtr g = crjet::graph_vars(1, 1, false);
    Series phi = Series::variable(g, 0) * Series::variable(g, 1); // z1 chi1
    Manifold m = crjet::from_rigid_graph(1, 1, {phi}, "sphere");
    CHECK(m.Q[0].same_series(catalog::sphere().Q[0]));
    CHECK(m.exact());

    // phi must be conjugate-symmetric: z1 chi1^2 is not.
    Series asym = Series::variable(g, 0) * Series::variable(g, 1) * Series::variable(g, 1);
    CHECK_THROWS_AS(crjet::from_rigid_graph(1, 1, {asym}, ""), crjet::domain_error);

    // phi must vanish at z = 0 and chi = 0.
    CHECK_THROWS_AS(crjet::from_rigid_graph(1, 1, {Series::variable(g, 0)}, ""),
                    crjet::domain_error);
}

TEST_CASE("graph with Re w dependence solves the fixed point", "[manifold]") {
    // Im w = |z|^2 Re w complexifies to w = tau + i z chi (w + tau), whose
    // exact solution is w = tau (1 + i z chi) / (1 - i z chi): the
    // coefficient of z^k chi^k tau is 2 i^k for every k >= 1.
    VarsPtr g = crjet::graph_vars(1, 1, true);
    Series phi = Series::variable(g, 0) * Series::variable(g, 1) * Series::variable(g, 2);
    const int T = 11;
    Manifold m = crjet::from_graph(1, 1, {phi}, T, "recursive");
    REQUIRE_FALSE(m.exact());
    CHECK(m.Q[0].trunc() == std::optional<int>(T));

    GaussianRational ik(1);
    for (int k = 1; 2 * k + 1 <= T; ++k) {
        ik *= GaussianRational::i();
        CHECK(m.Q[0].coefficient(Monomial({k, k, 1})) == GaussianRational(2) * ik);
    }
    CHECK(m.Q[0].coefficient(Monomial({0, 0, 1})) == GaussianRational(1));
    CHECK(m.Q[0].coefficient(Monomial({1, 1, 0})) == GaussianRational(0));
    // tau, plus one solved term per feasible k.
    CHECK(m.Q[0].terms().size() == 1 + (T - 1) / 2);

    // The result still passes validation up to the cutoff.
    CHECK(crjet::validate(m).ok);
}

TEST_CASE("graph without s agrees with the rigid constructor", "[manifold]") {
    VarsPtr g = crjet::graph_vars(1, 1, true);
    Series phi = Series::variable(g, 0) * Series::variable(g, 1);
    Manifold viaiter = crjet::from_graph(1, 1, {phi}, 6, "sphere");
    CHECK(viaiter.Q[0].same_series(catalog::sphere().Q[0].truncated_to(6)));
}

TEST_CASE("linear coordinate changes", "[manifold]") {
    Manifold s = catalog::sphere();

    SECTION("the CR scaling (2z, 4w) fixes the sphere") {
        crjet::QMatrix A = {{GaussianRational(2)}};
        crjet::QMatrix B = {{GaussianRational(4)}};
        Manifold t = crjet::linear_change(s, A, B);
        CHECK(t.Q[0].same_series(s.Q[0]));
        CHECK(t.label == "sphere-changed");
    }

    SECTION("a unit rotation fixes the sphere") {
        crjet::QMatrix A = {{GaussianRational::i()}};
        crjet::QMatrix B = {{GaussianRational(1)}};
        Manifold t = crjet::linear_change(s, A, B);
        CHECK(t.Q[0].same_series(s.Q[0]));
    }

    SECTION("scaling w alone rescales the Levi term") {
        crjet::QMatrix A = {{GaussianRational(1)}};
        crjet::QMatrix B = {{GaussianRational(2)}};
        Manifold t = crjet::linear_change(s, A, B);
        CHECK(t.Q[0].coefficient(Monomial({1, 1, 0})) ==
              GaussianRational(BigRational(0), BigRational(4)));
    }

    SECTION("complex B breaks reality and is rejected") {
        crjet::QMatrix A = {{GaussianRational(1)}};
        crjet::QMatrix B = {{GaussianRational::i()}};
        CHECK_THROWS_AS(crjet::linear_change(s, A, B), crjet::domain_error);
    }

    SECTION("singular A is rejected") {
        crjet::QMatrix A = {{GaussianRational(0)}};
        crjet::QMatrix B = {{GaussianRational(1)}};
        CHECK_THROWS_AS(crjet::linear_change(s, A, B), crjet::domain_error);
    }

    SECTION("kappa and nu survive a change on m1") {
        Manifold m = catalog::m1();
        crjet::QMatrix A = {{GaussianRational(1), GaussianRational(BigRational(1), BigRational(2))},
                            {GaussianRational(0), GaussianRational(3)}};
        crjet::QMatrix B = {{GaussianRational::from_ratio(2, 3)}};
        Manifold t = crjet::linear_change(m, A, B);
        CHECK(crjet::kappa(t, 4).value == crjet::kappa(m, 4).value);
        for (int k = 1; k <= 4; ++k)
            CHECK(crjet::nu(t, k).value == crjet::nu(m, k).value);
    }
}
