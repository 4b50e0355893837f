// Command-line front end: invariants, segre, bounds, check-map.
//
// Exit codes: 0 success, 2 invalid input, 3 undecided at the given budget,
// 4 internal inconsistency between independently computed verdicts.

#include <CLI11.hpp>

#include <cstdint>
#include <iostream>
#include <string>

#include "crjet/bounds.hpp"
#include "crjet/invariants.hpp"
#include "crjet/io.hpp"
#include "crjet/maps.hpp"
#include "crjet/report.hpp"
#include "crjet/segre.hpp"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitInvalidInput = 2;
constexpr int kExitUndecided = 3;
constexpr int kExitInconsistent = 4;

struct Common {
    int kmax = 8;
    int trunc = 16;
    std::uint64_t seed = 0;
    bool json = false;
};

void add_common(CLI::App* cmd, Common& c) {
    cmd->add_option("--kmax", c.kmax, "search budget for kappa and nu")->check(CLI::Range(1, 64));
    cmd->add_option("--trunc", c.trunc, "truncation degree for graph-form inputs")
        ->check(CLI::Range(1, 64));
    cmd->add_option("--seed", c.seed, "seed for randomized rank probing");
    cmd->add_flag("--json", c.json, "emit a canonical JSON report");
}

void print_kappa(std::ostream& os, const crjet::KappaValue& k) {
    if (k.value)
        os << "kappa = " << *k.value << "\n";
    else
        os << "kappa: class C refuted up to kmax = " << k.searched_up_to << "\n";
}

void print_nu_table(std::ostream& os, const std::map<int, crjet::NuValue>& table) {
    for (const auto& [k, v] : table) {
        os << "nu(" << k << ") = " << v.value.str();
        if (v.witness) {
            os << "  [witness alpha =";
            for (const auto& a : v.witness->alphas) {
                os << " (";
                for (std::size_t q = 0; q < a.exp.size(); ++q)
                    os << (q ? "," : "") << a.exp[q];
                os << ")";
            }
            os << "]";
        }
        os << "\n";
    }
}

int run_invariants(const std::string& path, const Common& c) {
    crjet::ManifoldFile mf = crjet::read_manifold_file(path, c.trunc);
    crjet::InvariantReport rep = crjet::invariant_report(mf.manifold, c.kmax, c.seed);
    if (c.json) {
        std::cout << crjet::dump_canonical(crjet::invariants_json(rep, c.seed));
        return kExitOk;
    }
    std::cout << "manifold '" << rep.label << "' (n = " << rep.n << ", d = " << rep.d << ")\n";
    print_kappa(std::cout, rep.kappa);
    print_nu_table(std::cout, rep.nu_table);
    std::cout << "nu(infinity) = " << rep.nu_inf.nu_at_kmax.value.str() << " ["
              << crjet::certainty_str(rep.nu_inf.certainty) << " at kmax = " << rep.nu_inf.kmax
              << "]\n";
    switch (rep.nondegeneracy.verdict) {
        case crjet::Nondegeneracy::yes:
            std::cout << "finitely nondegenerate: yes (nu(" << *rep.nondegeneracy.witness_k
                      << ") = 0)\n";
            break;
        case crjet::Nondegeneracy::no_up_to_kmax:
            std::cout << "finitely nondegenerate: no up to kmax = " << rep.nondegeneracy.kmax
                      << "\n";
            break;
        case crjet::Nondegeneracy::unknown:
            std::cout << "finitely nondegenerate: unknown at this budget\n";
            break;
    }
    return kExitOk;
}

int run_segre(const std::string& path, const Common& c, int jmax_opt) {
    crjet::ManifoldFile mf = crjet::read_manifold_file(path, c.trunc);
    const crjet::Manifold& m = mf.manifold;
    int jmax = jmax_opt > 0 ? jmax_opt : m.d + 1;
    std::vector<crjet::SegreMap> maps;
    std::vector<crjet::RankCertificate> certs;
    for (int j = 1; j <= jmax; ++j) {
        maps.push_back(crjet::segre_map(m, j));
        certs.push_back(crjet::generic_rank(maps.back().components, c.seed));
    }
    crjet::FiniteTypeResult ft = crjet::finite_type_order(m, jmax, c.seed);
    if (c.json) {
        std::cout << crjet::dump_canonical(crjet::segre_json(m, maps, certs, ft, c.seed));
        return kExitOk;
    }
    std::cout << "manifold '" << m.label << "' (n = " << m.n << ", d = " << m.d
              << "), N = " << m.n + m.d << "\n";
    for (std::size_t k = 0; k < maps.size(); ++k) {
        std::cout << "v^" << maps[k].order_j << ":";
        for (const auto& comp : maps[k].components) std::cout << " (" << comp.str() << ")";
        std::cout << "\n  generic rank " << certs[k].rank << " [" << certs[k].verdict_str()
                  << "]\n";
    }
    if (ft.order)
        std::cout << "finite type of order " << *ft.order << "\n";
    else
        std::cout << "not of finite type up to j = " << ft.searched_up_to
                  << (ft.refuted_exactly ? " (refuted exactly)" : " (at this budget)") << "\n";
    return kExitOk;
}

int run_bounds(const std::string& path, const Common& c, bool use_type_order) {
    crjet::ManifoldFile mf = crjet::read_manifold_file(path, c.trunc);
    crjet::JetBoundReport rep = crjet::jet_bound_K(mf.manifold, c.kmax, use_type_order, c.seed);
    if (c.json) {
        std::cout << crjet::dump_canonical(crjet::bounds_json(rep, c.seed));
        return kExitOk;
    }
    std::cout << "manifold '" << rep.label << "'\n";
    print_kappa(std::cout, rep.kappa);
    print_nu_table(std::cout, rep.nu_table);
    std::cout << "nu(infinity) = " << rep.nu_inf.nu_at_kmax.value.str() << " ["
              << crjet::certainty_str(rep.nu_inf.certainty) << "]\n";
    std::cout << "k0 = " << rep.k0 << ", k1 = " << rep.k1 << "\n";
    for (const auto& [j, v] : rep.kj) std::cout << "k_" << j << " = " << v << "\n";
    std::cout << "K = " << rep.K << " [" << crjet::certainty_str(rep.certainty) << "]\n";
    for (const auto& note : rep.notes) std::cout << "note: " << note << "\n";
    return kExitOk;
}

int run_check_map(const std::string& src_path, const std::string& tgt_path,
                  const std::string& map_path, const Common& c, int k_opt) {
    crjet::ManifoldFile src = crjet::read_manifold_file(src_path, c.trunc);
    crjet::ManifoldFile tgt = crjet::read_manifold_file(tgt_path, c.trunc);
    crjet::MapFile h = crjet::read_map_file(map_path);
    int k = k_opt > 0 ? k_opt : c.kmax;

    crjet::SendsIntoResult si = crjet::check_sends_into(src.manifold, tgt.manifold, h.map);
    bool transversal = crjet::is_cr_transversal(h.map);
    crjet::TotalDegeneracyResult td = crjet::check_not_totally_degenerate(h.map, c.seed);
    crjet::OrderValue od = crjet::ord_det_fbar_chi(h.map);
    crjet::OrderValue of = crjet::ord_fbar(h.map);
    crjet::RigidityReport rig = crjet::check_rigidity(src.manifold, tgt.manifold, h.map, k, c.kmax);
    crjet::ThetaPullbackReport tp;
    bool ran_pullback = false;
    if (si.holds) {
        tp = crjet::verify_theta_pullback(src.manifold, tgt.manifold, h.map, std::min(c.kmax, 6));
        ran_pullback = true;
    }
    crjet::AutomorphismReport am =
        crjet::automorphism_criterion(src.manifold, tgt.manifold, h.map, c.kmax, c.seed);
    crjet::EquivalenceObstruction ob =
        crjet::equivalence_obstruction(src.manifold, tgt.manifold, c.kmax);

    bool inconsistent = false;
    if (am.hypotheses_ok && !am.consistent) inconsistent = true;
    if (rig.hypotheses_ok &&
        (rig.basic == crjet::Verdict::violated || rig.refined == crjet::Verdict::violated ||
         rig.uniform == crjet::Verdict::violated))
        inconsistent = true;
    if (ran_pullback && si.holds && !tp.all_vanish) inconsistent = true;

    if (c.json) {
        crjet::Json j;
        j["command"] = "check-map";
        j["source"] = src.manifold.label;
        j["target"] = tgt.manifold.label;
        j["map"] = h.map.label;
        j["k"] = k;
        j["kmax"] = c.kmax;
        j["seed"] = c.seed;
        crjet::Json checks;
        checks["sends_into"] = crjet::to_json(si);
        checks["cr_transversal"] = transversal;
        crjet::Vars zv;
        for (int q = 1; q <= h.map.n; ++q) zv.push_back("z" + std::to_string(q));
        crjet::Json ntd;
        ntd["value"] = td.not_totally_degenerate;
        ntd["certificate"] = crjet::to_json(td.certificate, zv);
        checks["not_totally_degenerate"] = ntd;
        checks["ord_det_fbar_chi"] = od.str();
        checks["ord_fbar"] = of.str();
        checks["rigidity"] = crjet::to_json(rig);
        if (ran_pullback) checks["theta_pullback"] = crjet::to_json(tp);
        checks["automorphism"] = crjet::to_json(am);
        checks["equivalence_obstruction"] = crjet::to_json(ob);
        j["checks"] = checks;
        std::cout << crjet::dump_canonical(j);
        return inconsistent ? kExitInconsistent : kExitOk;
    }

    std::cout << "map '" << h.map.label << "': " << src.manifold.label << " -> "
              << tgt.manifold.label << "\n";
    std::cout << "sends into target: " << (si.holds ? "yes" : "NO") << "\n";
    if (!si.holds)
        for (const auto& r : si.residual) std::cout << "  residual: " << r.str() << "\n";
    std::cout << "CR transversal: " << (transversal ? "yes" : "no") << "\n";
    std::cout << "not totally degenerate: " << (td.not_totally_degenerate ? "yes" : "no")
              << " [rank " << td.certificate.rank << ", " << td.certificate.verdict_str() << "]\n";
    std::cout << "ord det Fbar_chi(chi,0) = " << od.str() << ", ord Fbar(chi,0) = " << of.str()
              << "\n";
    if (rig.hypotheses_ok) {
        std::cout << "rigidity at k = " << rig.k << ": nu_src = " << rig.nu_src.value.str()
                  << ", nu_tgt = " << rig.nu_tgt.value.str() << "\n";
        std::cout << "  basic " << crjet::verdict_str(rig.basic)
                  << (rig.basic_strict ? " (strict)" : "") << ", refined "
                  << crjet::verdict_str(rig.refined) << (rig.refined_equality ? " (equality)" : "")
                  << ", uniform " << crjet::verdict_str(rig.uniform) << "\n";
    } else {
        std::cout << "rigidity: skipped (" << rig.hypothesis_failure << ")\n";
    }
    if (ran_pullback)
        std::cout << "theta pullback residuals vanish up to |alpha| = " << tp.max_alpha << ": "
                  << (tp.all_vanish ? "yes" : "NO") << " (first-order cross check "
                  << (tp.first_order_cross_check ? "ok" : "FAILED") << ")\n";
    if (am.hypotheses_ok) {
        std::cout << "automorphism criterion: ";
        if (am.criterion_satisfied)
            std::cout << (*am.criterion_satisfied ? "satisfied" : "refuted");
        else
            std::cout << "undecided";
        if (am.criterion_k) std::cout << " at k = " << *am.criterion_k;
        std::cout << "; det dH(0) " << (am.det_dH_nonzero ? "nonzero" : "zero") << "; "
                  << (am.consistent ? "consistent" : "INCONSISTENT") << "\n";
    } else {
        std::cout << "automorphism criterion: skipped (" << am.hypothesis_failure << ")\n";
    }
    if (ob.not_equivalent) {
        std::cout << "equivalence obstruction: nu differs at k =";
        for (int kk : ob.differing_k) std::cout << " " << kk;
        std::cout << (ob.rules_out_transversal_map
                          ? "; no CR-transversal map source -> target can exist"
                          : "; manifolds are not biholomorphically equivalent")
                  << "\n";
    }
    return inconsistent ? kExitInconsistent : kExitOk;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"CR invariants and jet determination bounds for formal generic submanifolds"};
    app.require_subcommand(1);

    Common ci, cs, cb, cm;
    std::string m_path, s_path, b_path, src_path, tgt_path, map_path;
    int jmax_opt = 0;
    int k_opt = 0;
    bool use_type_order = false;

    CLI::App* inv = app.add_subcommand("invariants", "kappa, nu(k), nu(infinity), nondegeneracy");
    inv->add_option("manifold", m_path, "manifold file (.crm)")->required();
    add_common(inv, ci);

    CLI::App* seg = app.add_subcommand("segre", "iterated Segre maps, ranks, finite type order");
    seg->add_option("manifold", s_path, "manifold file (.crm)")->required();
    seg->add_option("--jmax", jmax_opt, "highest Segre order to examine (default d + 1)")
        ->check(CLI::Range(1, 16));
    add_common(seg, cs);

    CLI::App* bnd = app.add_subcommand("bounds", "jet determination bound K and its ladder");
    bnd->add_option("manifold", b_path, "manifold file (.crm)")->required();
    bnd->add_flag("--use-type-order", use_type_order,
                  "use the finite type order instead of d + 1 in the ladder");
    add_common(bnd, cb);

    CLI::App* chk = app.add_subcommand("check-map", "verify a formal map between two manifolds");
    chk->add_option("source", src_path, "source manifold (.crm)")->required();
    chk->add_option("target", tgt_path, "target manifold (.crm)")->required();
    chk->add_option("map", map_path, "map file (.crmap)")->required();
    chk->add_option("--k", k_opt, "level for the rigidity comparison (default kmax)")
        ->check(CLI::Range(1, 64));
    add_common(chk, cm);

    CLI11_PARSE(app, argc, argv);

    try {
        if (inv->parsed()) return run_invariants(m_path, ci);
        if (seg->parsed()) return run_segre(s_path, cs, jmax_opt);
        if (bnd->parsed()) return run_bounds(b_path, cb, use_type_order);
        if (chk->parsed()) return run_check_map(src_path, tgt_path, map_path, cm, k_opt);
    } catch (const crjet::parse_error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitInvalidInput;
    } catch (const crjet::truncation_error& e) {
        std::cerr << "undecided: " << e.what() << "\n";
        return kExitUndecided;
    } catch (const crjet::domain_error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitInvalidInput;
    } catch (const crjet::error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitInvalidInput;
    }
    return kExitOk;
}
