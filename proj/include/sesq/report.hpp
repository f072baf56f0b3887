#pragma once

#include <json.hpp>

#include "sesq/deffile.hpp"

namespace sesq {

// nlohmann::json with the default map container: keys serialize sorted, so
// reports are byte-identical across runs for the same input and options.
using Json = nlohmann::json;

struct RunOptions {
  int bound_spec = 8;
  int cap_sep = 3;
  long seed = 0;
  bool timings = false;
  Int flat_bound = 256;
  SaturationBounds saturation;
};

namespace report_detail {

inline Json group_json(const FgModule& m) {
  Json j;
  j["free_rank"] = m.free_rank();
  Json tor = Json::array();
  for (const Int& t : m.torsion()) tor.push_back(t.get_str());
  j["torsion"] = tor;
  j["group"] = m.group_str();
  return j;
}

inline Json vec_json(const Vec& v) {
  Json j = Json::array();
  for (const Int& x : v) j.push_back(x.get_str());
  return j;
}

inline Json matrix_json(const IntMatrix& m) {
  Json rows = Json::array();
  for (int i = 0; i < m.rows(); ++i) {
    Json row = Json::array();
    for (int j = 0; j < m.cols(); ++j) row.push_back(m.at(i, j).get_str());
    rows.push_back(row);
  }
  return rows;
}

inline Json sesquiad_json(const SesquiadPtr& a) {
  Json j;
  j["elements"] = a->names;
  j["ring"] = group_json(a->ring.underlying_module());
  Json facts = Json::array();
  for (const auto& f : a->facts) facts.push_back(a->fact_str(f));
  j["facts"] = facts;
  return j;
}

inline Json module_points_json(const ModulePtr& m) {
  Json pts = Json::array();
  for (const Vec& p : m->points) pts.push_back(vec_json(p));
  return pts;
}

inline Json module_json(const ModulePtr& m) {
  Json j;
  j["carrier"] = group_json(m->carrier);
  j["points"] = module_points_json(m);
  j["point_count"] = m->point_count();
  return j;
}

inline Json congruence_json(const Congruence& c) {
  Json j;
  j["classes"] = c.classes_str();
  j["class_count"] = c.num_classes;
  j["prime"] = is_prime(c);
  j["primality_definition"] = "integral quotient (imported definition)";
  return j;
}

inline Json tristate_json(Tristate t) {
  switch (t) {
    case Tristate::yes: return "yes";
    case Tristate::no: return "no";
    default: return "unknown";
  }
}

inline Json flat_json(const FlatReport& r) {
  Json j;
  j["verdict"] = r.verdict == Flatness::flat ? "flat"
                 : r.verdict == Flatness::not_flat ? "not_flat"
                                                   : "unknown";
  j["detail"] = r.detail;
  if (!r.witness_ideal.empty()) {
    Json w = Json::array();
    for (const Vec& v : r.witness_ideal) w.push_back(vec_json(v));
    j["witness_ideal"] = w;
  }
  return j;
}

inline std::vector<std::pair<int, int>> parse_pairs(const SesquiadPtr& a,
                                                    const std::vector<std::string>& toks,
                                                    int line) {
  std::vector<std::pair<int, int>> out;
  for (const std::string& t : toks) {
    if (t.size() < 5 || t.front() != '(' || t.back() != ')')
      detail::syntax_error(line, "expected pair (x,y)");
    auto comma = t.find(',');
    if (comma == std::string::npos) detail::syntax_error(line, "expected pair (x,y)");
    out.emplace_back(a->element_index(t.substr(1, comma - 1)),
                     a->element_index(t.substr(comma + 1, t.size() - comma - 2)));
  }
  return out;
}

}  // namespace report_detail

// Runs one task and returns its payload; domain errors are caught by the
// caller so one failing task does not hide the other reports.
inline Json run_task(const Resolved& defs, const TaskSpec& task, const RunOptions& opt,
                     std::string* dot_output) {
  using namespace report_detail;
  Json out;
  auto arg1 = [&](const char* key) -> const std::string& {
    auto it = task.args.find(key);
    if (it == task.args.end() || it->second.size() != 1)
      fail(Errc::syntax_error,
           "task " + task.name + " needs exactly one '" + key + "' argument");
    return it->second[0];
  };
  auto the_sesquiad = [&]() { return detail::look(defs.sesquiads, arg1("sesquiad"), task.line); };
  auto the_module = [&]() -> const NamedModule& {
    return detail::look(defs.modules, arg1("module"), task.line);
  };
  auto the_hom = [&]() -> const Hom& { return detail::look(defs.homs, arg1("hom"), task.line); };
  auto the_shom = [&]() -> const SesquiadHom& {
    return detail::look(defs.sesquiad_homs, arg1("sesquiadhom"), task.line);
  };
  auto the_sheaf = [&]() -> const NamedSheaf& {
    return detail::look(defs.sheaves, arg1("sheaf"), task.line);
  };
  auto int_arg = [&](const char* key, long dflt) {
    auto it = task.args.find(key);
    if (it == task.args.end()) return dflt;
    return detail::parse_long(it->second.at(0), task.line);
  };
  auto pairs_arg = [&](const SesquiadPtr& a) {
    auto it = task.args.find("pairs");
    if (it == task.args.end()) return std::vector<std::pair<int, int>>{};
    return parse_pairs(a, it->second, task.line);
  };
  auto module_point_subset = [&](const NamedModule& nm) {
    std::vector<int> pts{nm.mod->zero_index()};
    auto it = task.args.find("points");
    if (it != task.args.end())
      for (const std::string& p : it->second) pts.push_back(nm.point_by_name(p));
    std::sort(pts.begin(), pts.end());
    pts.erase(std::unique(pts.begin(), pts.end()), pts.end());
    return pts;
  };

  if (task.op == "saturate") {
    auto s = saturate(the_sesquiad(), opt.saturation);
    out["sesquiad"] = sesquiad_json(s);
  } else if (task.op == "spec") {
    auto a = the_sesquiad();
    auto sc = spec_scheme(a, opt.bound_spec);
    Json pts = Json::array();
    for (int i = 0; i < sc->space.size(); ++i) {
      Json p;
      p["classes"] = sc->space.names[size_t(i)];
      p["stalk_elements"] = sc->stalk[size_t(i)]->names;
      pts.push_back(p);
    }
    out["points"] = pts;
    Json edges = Json::array();
    for (int i = 0; i < sc->space.size(); ++i)
      for (int j = 0; j < sc->space.size(); ++j)
        if (i != j && sc->space.leq(i, j)) edges.push_back({i, j});
    out["order"] = edges;
    out["dimension"] = sc->space.dimension();
    out["global_sections"] = sesquiad_json(sc->global);
    if (dot_output) {
      std::vector<std::string> annotations;
      for (int i = 0; i < sc->space.size(); ++i) {
        std::string ann = "stalk:";
        for (const std::string& nm : sc->stalk[size_t(i)]->names) ann += " " + nm;
        annotations.push_back(ann);
      }
      *dot_output = to_dot(sc->space, annotations);
    }
  } else if (task.op == "simple") {
    auto a = the_sesquiad();
    out["simple"] = is_simple(a, opt.bound_spec);
    out["via_units"] = is_simple_via_units(a);
  } else if (task.op == "congruence") {
    auto a = the_sesquiad();
    auto c = congruence_generated(a, pairs_arg(a));
    out["congruence"] = congruence_json(c);
    out["maximal"] = c.zero_one_separated() ? is_maximal(c, opt.bound_spec) : false;
    Json w = Json::array();
    for (auto [x, y] : finitely_generated_witness(c))
      w.push_back({a->names[size_t(x)], a->names[size_t(y)]});
    out["witness_pairs"] = w;
  } else if (task.op == "quotient") {
    auto a = the_sesquiad();
    auto c = congruence_generated(a, pairs_arg(a));
    auto q = quotient(a, c);
    out["quotient"] = sesquiad_json(q.result);
  } else if (task.op == "localize") {
    auto a = the_sesquiad();
    auto c = congruence_generated(a, pairs_arg(a));
    auto loc = localize(a, c);
    out["local"] = sesquiad_json(loc.local);
    out["residue"] = sesquiad_json(loc.residue);
    out["residue_isomorphism_verified"] = residue_isomorphism_verified(a, c);
  } else if (task.op == "units") {
    auto a = the_sesquiad();
    auto rep = unit_inclusions(a, opt.bound_spec);
    Json units = Json::array();
    for (int u : rep.monoid_units) units.push_back(a->names[size_t(u)]);
    out["monoid_units"] = units;
    out["nonzero_in_ring_units"] = rep.second_inclusion_holds;
    out["first_inclusion_strict"] = rep.first_strict;
    out["second_inclusion"] = rep.second == UnitReport::Strictness::strict ? "strict"
                              : rep.second == UnitReport::Strictness::equality ? "equality"
                                                                               : "unknown";
  } else if (task.op == "closed_upto") {
    auto a = the_sesquiad();
    auto rep = is_algebraically_closed_upto(a, int(int_arg("degree", 1)));
    out["closed"] = rep.closed;
    if (!rep.closed) {
      Json ce = Json::array();
      for (int c : rep.counterexample.coeff) ce.push_back(a->names[size_t(c)]);
      out["counterexample_coefficients"] = ce;
    }
  } else if (task.op == "roots") {
    auto a = the_sesquiad();
    std::vector<int> coeff;
    for (const std::string& c : task.args.at("poly")) coeff.push_back(a->element_index(c));
    Polynomial p{coeff};
    Json roots = Json::array();
    for (int rt : poly_roots(p, a)) roots.push_back(a->names[size_t(rt)]);
    out["roots"] = roots;
    out["degree"] = p.degree();
  } else if (task.op == "separable") {
    const SesquiadHom& h = the_shom();
    int b = h.dst->element_index(arg1("element"));
    auto rep = is_separable(h, b, int(int_arg("cap", opt.cap_sep)));
    out["verdict"] = rep.verdict == Separability::separable ? "separable"
                     : rep.verdict == Separability::inseparable ? "inseparable"
                                                                : "not_algebraic_up_to_cap";
    out["degree_cap"] = rep.degree_cap;
    out["search_exhaustive"] = rep.search_exhaustive;
    if (rep.verdict == Separability::separable) {
      Json w = Json::array();
      for (int c : rep.witness.coeff) w.push_back(h.src->names[size_t(c)]);
      out["witness_coefficients"] = w;
    }
  } else if (task.op == "subsesquiad") {
    out["full_subsesquiad"] = is_full_subsesquiad(the_shom());
  } else if (task.op == "morphism") {
    auto mc = morphism_class(the_shom());
    out["finite"] = mc.finite;
    out["finite_type"] = mc.finite_type;
    out["finitely_presented"] = mc.finitely_presented;
    out["module_generator_count"] = int(mc.witness.size());
    out["presentation_kernel"] = matrix_json(mc.presentation_kernel);
  } else if (task.op == "classify") {
    const Hom& h = the_hom();
    auto c = classify(h);
    out["mono"] = c.mono;
    out["epi"] = c.epi;
    out["iso"] = c.iso;
    out["full"] = is_full(h);
    auto s = is_strong(h);
    out["strong"] = s.strong;
  } else if (task.op == "kernel" || task.op == "cokernel" || task.op == "image" ||
             task.op == "coimage") {
    const Hom& h = the_hom();
    ModulePtr m;
    if (task.op == "kernel") m = kernel(h).module;
    if (task.op == "cokernel") m = cokernel(h).module;
    if (task.op == "image") m = image(h).module;
    if (task.op == "coimage") m = coimage(h).module;
    out[task.op] = module_json(m);
  } else if (task.op == "closure") {
    const NamedModule& nm = the_module();
    auto cl = full_closure_points(nm.mod, module_point_subset(nm));
    Json pts = Json::array();
    for (int i : cl) pts.push_back(nm.point_name[size_t(i)]);
    out["closure_points"] = pts;
    out["full"] = is_full_submodule(nm.mod, module_point_subset(nm));
  } else if (task.op == "quotient_module") {
    const NamedModule& nm = the_module();
    auto q = quotient_module(nm.mod, module_point_subset(nm));
    out["quotient"] = module_json(q.module);
  } else if (task.op == "tensor") {
    const NamedModule& a = the_module();
    const NamedModule& b = detail::look(defs.modules, arg1("with"), task.line);
    out["tensor"] = module_json(tensor_module(a.mod, b.mod));
  } else if (task.op == "flat") {
    out["flat"] = flat_json(is_flat(the_module().mod, opt.flat_bound));
  } else if (task.op == "cover") {
    const Hom& c = cover(the_module().mod);
    out["free_copies"] = c.src->carrier.rank() /
                         std::max(1, c.src->base->ring.rank());
    out["surjective"] = extension_surjective(c);
    out["full"] = is_full(c);
  } else if (task.op == "injective") {
    out["injective"] = is_injective_module(the_module().mod, opt.flat_bound);
  } else if (task.op == "exact") {
    Sequence seq;
    for (const std::string& hn : task.args.at("homs"))
      seq.maps.push_back(detail::look(defs.homs, hn, task.line));
    Json at = Json::array();
    bool all = true;
    for (size_t i = 0; i + 1 < seq.maps.size(); ++i) {
      bool e = is_exact_at(seq, i);
      at.push_back(e);
      all = all && e;
    }
    out["exact_at"] = at;
    out["exact"] = all;
    out["strong"] = is_strong_sequence(seq);
    out["strong_exact"] = all && is_strong_sequence(seq);
  } else if (task.op == "sheaf_full") {
    const SheafHom& phi = detail::look(defs.sheaf_homs, arg1("sheafhom"), task.line);
    auto rep = is_full_sheaf(phi);
    out["full"] = rep.full;
    out["stalkwise"] = rep.stalkwise;
    out["openwise"] = rep.openwise;
  } else if (task.op == "sheaf_kernel" || task.op == "sheaf_cokernel") {
    const SheafHom& phi = detail::look(defs.sheaf_homs, arg1("sheafhom"), task.line);
    auto pair = task.op == "sheaf_kernel" ? sheaf_kernel(phi) : sheaf_cokernel(phi);
    Json pts = Json::array();
    for (int x = 0; x < phi.src->scheme->space.size(); ++x) {
      Json p;
      p["point"] = phi.src->scheme->space.names[size_t(x)];
      p["module"] = module_json(pair.sheaf->at[size_t(x)]);
      pts.push_back(p);
    }
    out[task.op] = pts;
  } else if (task.op == "cohomology") {
    const NamedSheaf& f = the_sheaf();
    auto rep = cohomology(f.sheaf);
    Json degs = Json::array();
    for (const auto& d : rep.degrees) {
      Json j;
      j["degree"] = d.degree;
      j["group"] = group_json(d.group);
      j["module_carrier"] = group_json(d.sesquiad_module->carrier);
      j["point_count"] = d.sesquiad_module->point_count();
      if (d.degree == 0) j["base_change_strict"] = d.base_change_strict;
      degs.push_back(j);
    }
    out["degrees"] = degs;
    out["dimension"] = rep.dimension;
    out["vanishing_above_dimension_checked"] = rep.vanishing_checked;
    out["higher_limit_oracle_checked"] = rep.oracle_checked;
  } else if (task.op == "base_change") {
    auto rep = base_change_compare(the_sheaf().sheaf);
    Json degs = Json::array();
    for (const auto& d : rep.degrees) {
      Json j;
      j["degree"] = d.degree;
      j["injective"] = d.injective;
      j["strict"] = d.strict;
      j["lhs_free_rank"] = d.lhs_free;
      j["rhs_free_rank"] = d.rhs_free;
      degs.push_back(j);
    }
    out["degrees"] = degs;
    out["all_injective"] = rep.all_injective;
  } else if (task.op == "flabby") {
    out["flabby_and_acyclic"] = flabby_acyclicity_check(the_sheaf().sheaf);
  } else if (task.op == "unramified") {
    auto rep = is_unramified(the_shom(), opt.bound_spec, opt.cap_sep);
    out["unramified"] = tristate_json(rep.unramified);
    Json pr = Json::array();
    for (const auto& rc : rep.primes) {
      Json j;
      j["prime_index"] = rc.prime_index;
      j["injective_residue"] = rc.injective_residue;
      j["injective_fiber"] = rc.injective_fiber;
      j["separable_residue"] = tristate_json(rc.separable_residue);
      j["separable_fiber"] = tristate_json(rc.separable_fiber);
      pr.push_back(j);
    }
    out["primes"] = pr;
  } else if (task.op == "etale") {
    auto rep = is_etale(the_shom(), opt.bound_spec, opt.cap_sep);
    out["etale"] = tristate_json(rep.etale);
    out["flat"] = rep.flat == Flatness::flat ? "flat"
                  : rep.flat == Flatness::not_flat ? "not_flat"
                                                   : "unknown";
    out["unramified"] = tristate_json(rep.unramified.unramified);
  } else if (task.op == "dot") {
    const SchemePtr& sc = detail::look(defs.schemes, arg1("scheme"), task.line);
    std::string dot = to_dot(sc->space, {});
    out["dot"] = dot;
    if (dot_output) *dot_output = dot;
  } else {
    fail(Errc::syntax_error, "task " + task.name + ": unknown op " + task.op);
  }
  return out;
}

inline Json run_definition(const Resolved& defs, const RunOptions& opt,
                           const std::string& only_task, std::string* dot_output,
                           bool* any_error) {
  Json report;
  Json bounds;
  bounds["spec_size"] = opt.bound_spec;
  bounds["separability_cap"] = opt.cap_sep;
  bounds["flat_enumeration"] = opt.flat_bound.get_str();
  bounds["saturation_arity"] = opt.saturation.arity;
  bounds["saturation_coefficient_cap"] = opt.saturation.coeff_cap;
  bounds["seed"] = opt.seed;
  report["bounds"] = bounds;
  Json notes = Json::array();
  notes.push_back("primality of congruences: integral quotient (imported definition)");
  notes.push_back("sections over an open are the limit over its points");
  notes.push_back("higher cohomology modules are reported with full point sets");
  report["notes"] = notes;

  Json tasks = Json::array();
  for (const TaskSpec& t : defs.tasks) {
    if (!only_task.empty() && t.name != only_task) continue;
    Json entry;
    entry["task"] = t.name;
    entry["op"] = t.op;
    try {
      entry["result"] = run_task(defs, t, opt, dot_output);
      entry["status"] = "ok";
    } catch (const Error& e) {
      entry["status"] = "error";
      entry["error"] = e.what();
      if (any_error) *any_error = true;
    }
    tasks.push_back(std::move(entry));
  }
  report["tasks"] = tasks;
  return report;
}

}  // namespace sesq
