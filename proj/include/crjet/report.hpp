#pragma once

#include <nlohmann/json.hpp>

#include <string>

#include "crjet/bounds.hpp"
#include "crjet/invariants.hpp"
#include "crjet/maps.hpp"
#include "crjet/segre.hpp"

namespace crjet {

using Json = nlohmann::json;

/// JSON reports carry only integers, booleans, strings, and arrays of those;
/// object keys are emitted sorted, so equal reports serialize byte-identically.
inline std::string dump_canonical(const Json& j) { return j.dump(2) + "\n"; }

inline Json to_json(const OrderValue& v) {
    return v.str();
}

inline Json to_json(const NuWitness& w) {
    Json alphas = Json::array();
    for (const auto& a : w.alphas) alphas.push_back(a.exp);
    return Json{{"alpha", alphas}, {"s", w.ss}};
}

inline Json to_json(const NuValue& v) {
    Json j;
    j["value"] = to_json(v.value);
    j["certainty"] = v.value.is_at_least() ? "UNDECIDED" : "EXACT";
    if (v.witness) j["witness"] = to_json(*v.witness);
    return j;
}

inline Json nu_table_json(const std::map<int, NuValue>& table) {
    Json rows = Json::array();
    for (const auto& [k, v] : table) {
        Json row = to_json(v);
        row["k"] = k;
        rows.push_back(std::move(row));
    }
    return rows;
}

inline Json to_json(const KappaValue& k) {
    Json j;
    if (k.value) j["value"] = *k.value;
    else j["refuted_up_to"] = k.searched_up_to;
    return j;
}

inline Json to_json(const NuInfinity& ni) {
    return Json{{"value", to_json(ni.nu_at_kmax.value)},
                {"certainty", certainty_str(ni.certainty)},
                {"kmax", ni.kmax}};
}

inline Json to_json(const NondegeneracyResult& r) {
    Json j;
    switch (r.verdict) {
        case Nondegeneracy::yes: j["verdict"] = "yes"; break;
        case Nondegeneracy::no_up_to_kmax: j["verdict"] = "no_up_to_kmax"; break;
        case Nondegeneracy::unknown: j["verdict"] = "unknown"; break;
    }
    if (r.witness_k) j["witness_k"] = *r.witness_k;
    j["kmax"] = r.kmax;
    return j;
}

inline Json to_json(const RankCertificate& c, const Vars& vars) {
    Json j;
    j["rank"] = c.rank;
    j["verdict"] = c.verdict_str();
    j["minor_rows"] = c.minor_rows;
    j["minor_cols"] = c.minor_cols;
    if (c.rank > 0) {
        j["witness_monomial"] = c.witness_monomial.str(vars);
        j["witness_coefficient"] = c.witness_coeff.str();
    }
    return j;
}

inline Json invariants_json(const InvariantReport& rep, std::uint64_t seed) {
    Json j;
    j["command"] = "invariants";
    j["label"] = rep.label;
    j["n"] = rep.n;
    j["d"] = rep.d;
    j["kmax"] = rep.kmax;
    j["seed"] = seed;
    j["kappa"] = to_json(rep.kappa);
    j["class_c"] = rep.kappa.is_class_c();
    j["nu"] = nu_table_json(rep.nu_table);
    j["nu_inf"] = to_json(rep.nu_inf);
    j["finitely_nondegenerate"] = to_json(rep.nondegeneracy);
    return j;
}

inline Json segre_json(const Manifold& m, const std::vector<SegreMap>& maps,
                       const std::vector<RankCertificate>& certs, const FiniteTypeResult& ft,
                       std::uint64_t seed) {
    Json j;
    j["command"] = "segre";
    j["label"] = m.label;
    j["n"] = m.n;
    j["d"] = m.d;
    j["seed"] = seed;
    j["jmax"] = ft.searched_up_to;
    Json rows = Json::array();
    for (std::size_t k = 0; k < maps.size(); ++k) {
        Json row;
        row["j"] = maps[k].order_j;
        Json comps = Json::array();
        for (const auto& c : maps[k].components) comps.push_back(c.str());
        row["components"] = comps;
        if (k < certs.size()) row["rank"] = to_json(certs[k], *maps[k].vars);
        rows.push_back(std::move(row));
    }
    j["segre_maps"] = rows;
    Json f;
    if (ft.order) f["order"] = *ft.order;
    else {
        f["not_finite_type_up_to"] = ft.searched_up_to;
        f["refuted_exactly"] = ft.refuted_exactly;
    }
    j["finite_type_order"] = f;
    return j;
}

inline Json bounds_json(const JetBoundReport& rep, std::uint64_t seed) {
    Json j;
    j["command"] = "bounds";
    j["label"] = rep.label;
    j["kmax"] = rep.kmax;
    j["seed"] = seed;
    j["kappa"] = to_json(rep.kappa);
    j["nu"] = nu_table_json(rep.nu_table);
    j["nu_inf"] = to_json(rep.nu_inf);
    j["k0"] = rep.k0;
    j["k1"] = rep.k1;
    Json kj;
    for (const auto& [jj, v] : rep.kj) kj[std::to_string(jj)] = v;
    j["kj"] = kj;
    j["K"] = rep.K;
    j["certainty"] = certainty_str(rep.certainty);
    if (rep.finite_type_m) j["finite_type_order"] = *rep.finite_type_m;
    j["use_type_order"] = rep.used_type_order;
    j["notes"] = rep.notes;
    return j;
}

inline Json to_json(const SendsIntoResult& r) {
    Json res = Json::array();
    for (const auto& s : r.residual) res.push_back(s.str());
    return Json{{"holds", r.holds}, {"exact", r.exact}, {"residual", res}};
}

inline Json to_json(const RigidityReport& r) {
    Json j;
    j["k"] = r.k;
    j["hypotheses_ok"] = r.hypotheses_ok;
    if (!r.hypotheses_ok) {
        j["hypothesis_failure"] = r.hypothesis_failure;
        return j;
    }
    j["nu_source"] = to_json(r.nu_src.value);
    j["nu_target"] = to_json(r.nu_tgt.value);
    j["ord_det_fbar_chi"] = to_json(r.ord_det);
    j["ord_fbar"] = to_json(r.ord_f);
    j["nu_inf_source"] = to_json(r.nu_inf_src.nu_at_kmax.value);
    j["basic"] = Json{{"verdict", verdict_str(r.basic)}, {"strict", r.basic_strict}};
    j["refined"] = Json{{"verdict", verdict_str(r.refined)}, {"equality", r.refined_equality}};
    j["uniform"] = Json{{"verdict", verdict_str(r.uniform)}};
    return j;
}

inline Json to_json(const ThetaPullbackReport& r) {
    Json j;
    j["max_alpha"] = r.max_alpha;
    j["all_vanish"] = r.all_vanish;
    j["first_order_cross_check"] = r.first_order_cross_check;
    Json fails = Json::array();
    for (const auto& [alpha, res] : r.failures)
        fails.push_back(Json{{"alpha", alpha.exp}, {"residual", res.str()}});
    j["failures"] = fails;
    return j;
}

inline Json to_json(const AutomorphismReport& r) {
    Json j;
    j["hypotheses_ok"] = r.hypotheses_ok;
    if (!r.hypotheses_ok) {
        j["hypothesis_failure"] = r.hypothesis_failure;
        return j;
    }
    if (r.criterion_satisfied) j["criterion_satisfied"] = *r.criterion_satisfied;
    else j["criterion_satisfied"] = "undecided";
    if (r.criterion_k) j["criterion_k"] = *r.criterion_k;
    j["kmax"] = r.kmax;
    j["det_dH_nonzero"] = r.det_dH_nonzero;
    j["consistent"] = r.consistent;
    return j;
}

inline Json to_json(const EquivalenceObstruction& r) {
    return Json{{"differing_k", r.differing_k},
                {"not_equivalent", r.not_equivalent},
                {"source_finitely_nondegenerate", r.source_finitely_nondegenerate},
                {"rules_out_transversal_map", r.rules_out_transversal_map},
                {"kmax", r.kmax}};
}

} // namespace crjet
