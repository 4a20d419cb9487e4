#include "ccm/run.hpp"

#include <chrono>
#include <map>
#include <sstream>

#include "ccm/acceptance.hpp"
#include "ccm/builders.hpp"
#include "ccm/dc.hpp"
#include "ccm/errors.hpp"
#include "ccm/mean.hpp"
#include "ccm/witness.hpp"

namespace ccm {

using nlohmann::json;

GroupPtr to_finite_cayley(const GroupPtr& g) {
  if (g->cls() == GroupClass::FiniteCayley) return g;
  if (!g->order()) throw UnsupportedForClass("group is infinite");
  auto elems = g->ball(0);
  std::map<Element, uint16_t, ElementLess> idx;
  std::vector<std::string> labels;
  for (const Element& e : elems) {
    idx[e] = (uint16_t)labels.size();
    labels.push_back(g->describe_element(e));
  }
  size_t n = elems.size();
  std::vector<uint16_t> table(n * n);
  for (size_t i = 0; i < n; ++i)
    for (size_t j = 0; j < n; ++j)
      table[i * n + j] = idx.at(g->multiply(elems[i], elems[j]));
  return Group::make_finite_cayley(std::move(labels), std::move(table), /*trusted=*/true);
}

namespace {

Subgroup subgroup_from_entry(const GroupPtr& g, const SpecFile::Section& sec,
                             const std::string& key) {
  std::string raw = section_require(sec, key);
  int line = 0;
  for (const auto& e : sec.entries)
    if (e.key == key) line = e.line;
  return subgroup_from_generators(g, parse_element_list(g, raw, line));
}

json rational_json(const Rational& r) { return r.str(); }

json witness_json(const WitnessSet& w) {
  const GroupPtr& g = w.request.g;
  json elems = json::array();
  for (const Element& e : w.elements) elems.push_back(g->describe_element(e));
  json cert;
  if (!w.certificate.constraint_deviations.empty()) {
    json devs = json::array();
    for (size_t i = 0; i < w.certificate.constraint_deviations.size(); ++i)
      devs.push_back(json{{"deviation", w.certificate.constraint_deviations[i].str()},
                          {"exact", (bool)w.certificate.constraint_exact[i]}});
    cert["constraints"] = devs;
  }
  if (!w.certificate.atom_proportions.empty()) {
    json atoms = json::array();
    for (size_t i = 0; i < w.certificate.atom_proportions.size(); ++i)
      atoms.push_back(json{{"proportion", w.certificate.atom_proportions[i].str()},
                           {"deviation", w.certificate.atom_deviations[i].str()},
                           {"target", w.request.atoms[i].target.str()}});
    cert["atoms"] = atoms;
  }
  if (!w.certificate.translate_disjoint.empty()) {
    json dis = json::array();
    for (bool b : w.certificate.translate_disjoint) dis.push_back(b);
    cert["translate_disjoint"] = dis;
  }
  if (!w.certificate.folner_ratios.empty()) {
    json ratios = json::array();
    for (const Rational& r : w.certificate.folner_ratios) ratios.push_back(r.str());
    cert["boundary_ratios"] = ratios;
  }
  return json{{"size", w.elements.size()}, {"elements", elems}, {"certificate", cert}};
}

json cmd_dc(const GroupPtr& g) {
  return json{{"dc", rational_json(dc_finite(to_finite_cayley(g)))}};
}

json cmd_dc_strata(const GroupPtr& g) {
  StratumTable t = centralizer_strata(g);
  t.validate();
  return json{{"dc_strata", rational_json(dc_strata(t))}};
}

// ring element = denominator generators + finite-coset reps + infinite cosets
json ring_elem_json(const RingElem& x) {
  const GroupPtr& g = x.group();
  json dgens = json::array();
  for (const Element& e : x.denominator().canonical_generators())
    dgens.push_back(g->describe_element(e));
  json reps = json::array();
  for (const Element& e : x.finite_reps()) reps.push_back(g->describe_element(e));
  json inf = json::array();
  for (const Coset& c : x.infinite_part()) {
    json sgens = json::array();
    for (const Element& e : c.sub.canonical_generators())
      sgens.push_back(g->describe_element(e));
    inf.push_back(json{{"subgroup_generators", sgens},
                       {"representative", g->describe_element(c.rep)}});
  }
  return json{{"denominator_generators", dgens},
              {"finite_coset_reps", reps},
              {"infinite_cosets", inf}};
}

json cmd_strata(const GroupPtr& g) {
  StratumTable t = centralizer_strata(g);
  t.validate();
  json rows = json::array();
  for (size_t i = 0; i < t.strata.size(); ++i)
    rows.push_back(json{{"m", t.strata[i].first},
                        {"measure", t.measures[i].str()},
                        {"set", ring_elem_json(t.strata[i].second)}});
  return json{{"strata", rows},
              {"infinity_measure", t.infinity_measure.str()},
              {"dc_strata", rational_json(dc_strata(t))}};
}

json cmd_dc_rf(const GroupPtr& g, const SpecFile& spec, i64 cap) {
  const auto& sec = spec.require("chain");
  std::vector<Subgroup> chain;
  if (auto mods = section_get(sec, "mod")) {
    std::vector<i64> moduli;
    std::istringstream is(*mods);
    std::string tok;
    while (std::getline(is, tok, ',')) moduli.push_back(std::stoll(tok));
    chain = mod_chain(g, moduli);
  } else {
    for (const auto& e : sec.entries) {
      if (e.key.rfind("sub", 0) != 0) continue;
      chain.push_back(subgroup_from_generators(g, parse_element_list(g, e.value, e.line)));
    }
  }
  if (chain.empty()) throw SchemaError("[chain] needs mod = ... or subN = ... entries");
  if (section_get(sec, "require_nested").value_or("false") == "true") {
    for (size_t i = 1; i < chain.size(); ++i)
      if (!chain[i].subgroup_of(chain[i - 1]))
        throw SchemaError("chain is not nested: entry " + std::to_string(i + 1) +
                          " is not contained in entry " + std::to_string(i));
  }
  RfChainResult res = dc_rf_chain(g, chain, cap);
  json rows = json::array();
  for (size_t i = 0; i < res.values.size(); ++i)
    rows.push_back(json{{"order", res.quotient_orders[i]}, {"dc", res.values[i].str()}});
  return json{{"quotients", rows},
              {"nested", res.nested},
              {"non_increasing", res.non_increasing}};
}

json cmd_neumann(const GroupPtr& g, const SpecFile& spec) {
  const auto& sec = spec.require("neumann");
  std::vector<Coset> cosets;
  for (const auto& e : sec.entries) {
    if (e.key.rfind("coset", 0) != 0) continue;
    size_t at = e.value.find('@');
    if (at == std::string::npos)
      throw SchemaError("coset entries look like '<generators> @ <representative>'");
    Subgroup h = subgroup_from_generators(
        g, parse_element_list(g, e.value.substr(0, at), e.line));
    Element rep = parse_element(g, e.value.substr(at + 1), e.line);
    cosets.push_back(coset_of(h, rep));
  }
  if (cosets.empty()) throw SchemaError("[neumann] needs cosetN entries");
  NeumannReport rep = neumann_check(cosets);
  return json{{"covers", rep.covers}, {"reciprocal_sum", rep.reciprocal_sum.str()}};
}

json cmd_witness(const GroupPtr& g, const SpecFile& spec) {
  const auto& sec = spec.require("witness");
  std::string mode = section_get(sec, "mode").value_or("basic");
  size_t max_scan = 1000000;
  if (auto ms = section_get(sec, "max_scan")) max_scan = (size_t)std::stoull(*ms);
  if (mode == "basic") {
    std::vector<WitnessConstraint> cons;
    for (int i = 1;; ++i) {
      auto h = section_get(sec, "h" + std::to_string(i));
      if (!h) break;
      Subgroup sub = subgroup_from_entry(g, sec, "h" + std::to_string(i));
      Rational eps = parse_rational(
          section_get(sec, "eps" + std::to_string(i)).value_or("1/2"), sec.line);
      cons.push_back({std::move(sub), eps});
    }
    if (cons.empty()) throw SchemaError("[witness] basic mode needs h1 = ... entries");
    return witness_json(build_witness(g, std::move(cons), max_scan));
  }

  // the remaining modes partition the group into cosets of one denominator
  Subgroup d = subgroup_from_entry(g, sec, "denominator");
  if (!d.index().is_finite()) throw SchemaError("denominator must have finite index");
  std::vector<WitnessAtom> atoms;
  for (const Element& t : transversal(d)) {
    RingElem c = RingElem::from_coset(coset_of(d, t));
    Rational m = c.measure();
    atoms.push_back({std::move(c), m});
  }
  if (mode == "mean" || mode == "disjoint") {
    i64 n = std::stoll(section_require(sec, "n"));
    std::vector<Element> s;
    if (mode == "disjoint")
      s = parse_element_list(g, section_require(sec, "s"), sec.line);
    return witness_json(disjoint_translates_witness(g, std::move(atoms), n, std::move(s)));
  }
  if (mode == "amplify") {
    std::vector<Element> k = parse_element_list(g, section_get(sec, "k").value_or(""), sec.line);
    Rational eps = parse_rational(section_require(sec, "eps"), sec.line);
    return witness_json(folner_amplify(g, std::move(atoms), std::move(k), eps));
  }
  throw SchemaError("unknown witness mode: " + mode);
}

json cmd_folner(const GroupPtr& g, const SpecFile& spec) {
  const auto& sec = spec.require("folner");
  auto k = parse_element_list(g, section_get(sec, "k").value_or(""), sec.line);
  Rational eps = parse_rational(section_require(sec, "eps"), sec.line);
  auto s = folner_set(g, k, eps);
  json elems = json::array();
  for (const Element& e : s) elems.push_back(g->describe_element(e));
  json ratios = json::array();
  WitnessRequest req;
  req.g = g;
  req.folner_k = k;
  auto cert = compute_certificate(req, s);
  for (const Rational& r : cert.folner_ratios) ratios.push_back(r.str());
  return json{{"size", s.size()}, {"elements", elems}, {"boundary_ratios", ratios}};
}

MeanVector mean_from_spec(const GroupPtr& g, const SpecFile& spec) {
  const auto& sec = spec.require("mean");
  std::string raw = section_require(sec, "weights");
  std::vector<Rational> w(g->fc_order(), Rational(0));
  std::istringstream is(raw);
  std::string tok;
  while (is >> tok) {
    size_t colon = tok.rfind(':');
    if (colon == std::string::npos) throw SchemaError("weights look like label:p/q");
    std::string label = tok.substr(0, colon);
    Rational val = parse_rational(tok.substr(colon + 1), sec.line);
    bool found = false;
    for (uint32_t i = 0; i < g->fc_order(); ++i)
      if (g->labels()[i] == label) {
        w[i] = val;
        found = true;
        break;
      }
    if (!found) throw SchemaError("unknown element label in weights: " + label);
  }
  return MeanVector(g, std::move(w));
}

json cmd_defect(const GroupPtr& g0, const SpecFile& spec) {
  GroupPtr g = to_finite_cayley(g0);
  MeanVector mu = mean_from_spec(g, spec);
  return json{{"defect_left", defect_left(mu).str()},
              {"defect_right", defect_right(mu).str()}};
}

json cmd_smooth(const GroupPtr& g0, const SpecFile& spec) {
  GroupPtr g = to_finite_cayley(g0);
  MeanVector mu = mean_from_spec(g, spec);
  MeanVector sm = smooth_mean(mu);
  json weights = json::object();
  for (uint32_t i = 0; i < g->fc_order(); ++i) weights[g->labels()[i]] = sm.weight(i).str();
  return json{{"weights", weights},
              {"defect_left", defect_left(sm).str()},
              {"defect_right", defect_right(sm).str()},
              {"input_defect_left", defect_left(mu).str()},
              {"input_defect_right", defect_right(mu).str()}};
}

json cmd_kmu(const GroupPtr& g0, const SpecFile& spec) {
  GroupPtr g = to_finite_cayley(g0);
  json out;
  out["k_uniform"] = k_uniform(g).str();
  if (spec.find("mean")) {
    MeanVector mu = mean_from_spec(g, spec);
    out["k_mu"] = k_mu(g, mu).str();
    if (auto n = section_get(spec.require("mean"), "n")) {
      auto rep = kmu_strata_inequality(g, mu, std::stoll(*n));
      out["inequality"] = json{{"lhs", rep.lhs.str()}, {"rhs", rep.rhs.str()},
                               {"holds", rep.holds}};
    }
  } else {
    out["k_mu"] = k_mu(g, MeanVector::uniform(g)).str();
  }
  return out;
}

json cmd_transversal(const GroupPtr& g0, const SpecFile& spec) {
  GroupPtr h = to_finite_cayley(g0);
  const auto& sec = spec.require("transversal");
  GroupPtr square = builders::direct_product(h, h);
  Subgroup l = subgroup_from_generators(
      h, parse_element_list(h, section_require(sec, "l_gens"), sec.line));
  std::vector<Element> kgens;
  for (const Element& e : l.canonical_generators()) {
    kgens.push_back(square->make_fc(e.idx * h->fc_order() + h->fc_id()));
    kgens.push_back(square->make_fc(h->fc_id() * h->fc_order() + e.idx));
  }
  Subgroup k = subgroup_from_generators(square, std::move(kgens));
  Element g1 = parse_element(h, section_require(sec, "g1"), sec.line);
  Element g2 = parse_element(h, section_require(sec, "g2"), sec.line);
  Element g = square->make_fc(g1.idx * h->fc_order() + g2.idx);
  auto found = commuting_transversal(h, square, k, g);
  json out;
  out["found"] = found.has_value();
  if (found) {
    uint32_t idx = found->idx;
    out["pair"] = json::array({h->labels()[idx / h->fc_order()],
                               h->labels()[idx % h->fc_order()]});
  }
  return out;
}

json cmd_faf(const GroupPtr& g) {
  FafWitness w = faf_witness(g);
  json out;
  out["is_faf"] = w.is_faf;
  out["certificate"] = w.certificate;
  if (w.is_faf) {
    auto desc = [&](const Subgroup& s) {
      json a = json::array();
      for (const Element& e : s.canonical_generators()) a.push_back(g->describe_element(e));
      return a;
    };
    out["n0_generators"] = desc(*w.n0);
    out["h0_generators"] = desc(*w.h0);
    out["n0_order"] = *w.n0->subgroup_order();
    out["h0_index"] = w.h0->index().value();
  }
  return out;
}

json cmd_verify_all() {
  auto results = run_acceptance();
  json rows = json::array();
  bool all = true;
  for (const auto& r : results) {
    rows.push_back(json{{"id", r.id}, {"name", r.name}, {"pass", r.pass},
                        {"detail", r.detail}});
    all = all && r.pass;
  }
  return json{{"criteria", rows}, {"all_pass", all}};
}

}  // namespace

RunReport dispatch(const RunRequest& req) {
  auto start = std::chrono::steady_clock::now();
  RunReport rep;
  rep.command = req.command;

  if (req.command == "verify-all") {
    rep.result = cmd_verify_all();
  } else {
    GroupPtr g = group_from_spec(req.spec);
    if (req.command == "dc")
      rep.result = cmd_dc(g);
    else if (req.command == "dc-strata")
      rep.result = cmd_dc_strata(g);
    else if (req.command == "strata")
      rep.result = cmd_strata(g);
    else if (req.command == "dc-rf")
      rep.result = cmd_dc_rf(g, req.spec, req.cap);
    else if (req.command == "neumann-check")
      rep.result = cmd_neumann(g, req.spec);
    else if (req.command == "witness")
      rep.result = cmd_witness(g, req.spec);
    else if (req.command == "folner")
      rep.result = cmd_folner(g, req.spec);
    else if (req.command == "defect")
      rep.result = cmd_defect(g, req.spec);
    else if (req.command == "smooth")
      rep.result = cmd_smooth(g, req.spec);
    else if (req.command == "kmu")
      rep.result = cmd_kmu(g, req.spec);
    else if (req.command == "transversal")
      rep.result = cmd_transversal(g, req.spec);
    else if (req.command == "faf-witness")
      rep.result = cmd_faf(g);
    else
      throw SchemaError("unknown command: " + req.command);
  }

  rep.wall_ms =
      std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - start)
          .count();
  return rep;
}

namespace {

void csv_escape(std::ostringstream& os, const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) {
    os << s;
    return;
  }
  os << '"';
  for (char c : s) {
    if (c == '"') os << '"';
    os << c;
  }
  os << '"';
}

std::string scalar_to_string(const json& v) {
  if (v.is_string()) return v.get<std::string>();
  return v.dump();
}

}  // namespace

std::string emit(const RunReport& report, const std::string& format) {
  if (format == "json") {
    json out;
    out["command"] = report.command;
    out["version"] = report.version;
    out["result"] = report.result;
    out["timing_ms"] = report.wall_ms;
    return out.dump(2) + "\n";
  }
  if (format != "csv") throw SchemaError("unknown output format: " + format);

  std::ostringstream os;
  os << "command," << report.command << "\n";
  // stable order: nlohmann objects iterate in sorted key order
  for (auto it = report.result.begin(); it != report.result.end(); ++it) {
    const json& v = it.value();
    if (v.is_array() && !v.empty() && v.front().is_object()) {
      std::vector<std::string> cols;
      for (auto f = v.front().begin(); f != v.front().end(); ++f) cols.push_back(f.key());
      os << it.key() << "\n";
      for (size_t c = 0; c < cols.size(); ++c) os << (c ? "," : "") << cols[c];
      os << "\n";
      for (const json& row : v) {
        for (size_t c = 0; c < cols.size(); ++c) {
          if (c) os << ',';
          csv_escape(os, scalar_to_string(row.at(cols[c])));
        }
        os << "\n";
      }
    } else if (v.is_array()) {
      os << it.key();
      for (const json& x : v) {
        os << ',';
        csv_escape(os, scalar_to_string(x));
      }
      os << "\n";
    } else if (v.is_object()) {
      for (auto f = v.begin(); f != v.end(); ++f) {
        os << it.key() << '.' << f.key() << ',';
        csv_escape(os, scalar_to_string(f.value()));
        os << "\n";
      }
    } else {
      os << it.key() << ',';
      csv_escape(os, scalar_to_string(v));
      os << "\n";
    }
  }
  return os.str();
}

}  // namespace ccm
