#include "ccm/acceptance.hpp"

#include <chrono>
#include <functional>
#include <map>
#include <random>
#include <sstream>

#include "ccm/builders.hpp"
#include "ccm/dc.hpp"
#include "ccm/errors.hpp"
#include "ccm/mean.hpp"
#include "ccm/run.hpp"
#include "ccm/witness.hpp"

namespace ccm {

namespace {

using Corpus = std::vector<std::pair<std::string, GroupPtr>>;

Corpus finite_corpus() { return builders::finite_library(48); }

Corpus infinite_corpus() {
  Corpus c = builders::infinite_library();
  c.emplace_back("heisenberg_f2(1)", builders::heisenberg_f2(1));
  c.emplace_back("heisenberg_f2(2)", builders::heisenberg_f2(2));
  return c;
}

std::map<const Group*, std::vector<Subgroup>>& subgroup_cache() {
  static std::map<const Group*, std::vector<Subgroup>> cache;
  return cache;
}

const std::vector<Subgroup>& subgroups_of(const GroupPtr& g) {
  auto& cache = subgroup_cache();
  auto it = cache.find(g.get());
  if (it == cache.end()) it = cache.emplace(g.get(), all_subgroups(g)).first;
  return it->second;
}

Element random_element(const GroupPtr& g, std::mt19937_64& rng, i64 bound = 5) {
  std::uniform_int_distribution<i64> coord(-bound, bound);
  switch (g->cls()) {
    case GroupClass::FiniteCayley:
      return g->make_fc((uint32_t)(rng() % g->fc_order()));
    case GroupClass::VirtuallyAbelian: {
      Vec v(g->rank());
      for (i64& x : v) x = coord(rng);
      return g->make_va(std::move(v), (uint32_t)(rng() % g->point_group()->fc_order()));
    }
    case GroupClass::CentralPairing: {
      Vec a(g->base().ngens()), nu(g->central().ngens());
      for (i64& x : a) x = coord(rng);
      for (i64& x : nu) x = coord(rng);
      return g->make_cp(std::move(nu), std::move(a));
    }
  }
  throw Error("unreachable");
}

// deterministic family of subgroups for the infinite corpus members
std::vector<Subgroup> sample_subgroups(const GroupPtr& g, std::mt19937_64& rng) {
  std::vector<Subgroup> out;
  out.push_back(trivial_subgroup(g));
  out.push_back(whole_group(g));
  out.push_back(center(g));
  if (g->cls() != GroupClass::FiniteCayley)
    for (const Subgroup& s : mod_chain(g, {2, 3})) out.push_back(s);
  for (int i = 0; i < 5; ++i) {
    std::vector<Element> gens;
    int k = 1 + (int)(rng() % 2);
    for (int j = 0; j < k; ++j) gens.push_back(random_element(g, rng, 3));
    out.push_back(subgroup_from_generators(g, std::move(gens)));
  }
  return out;
}

struct Runner {
  std::vector<CriterionResult> results;

  void run(int id, const std::string& name, const std::function<void(std::string&)>& body) {
    CriterionResult r;
    r.id = id;
    r.name = name;
    auto start = std::chrono::steady_clock::now();
    try {
      std::string detail;
      body(detail);
      r.pass = true;
      r.detail = detail;
    } catch (const std::exception& e) {
      r.pass = false;
      r.detail = e.what();
    }
    r.wall_ms = std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() -
                                                          start)
                    .count();
    results.push_back(std::move(r));
  }
};

void expect(bool cond, const std::string& msg) {
  if (!cond) throw Error(msg);
}

// ---------------------------------------------------------------------------

void criterion_coset_correctness(std::string& detail) {
  std::mt19937_64 rng(20260811);
  i64 checked = 0;
  for (auto& [name, g] : finite_corpus()) {
    for (const Subgroup& h : subgroups_of(g)) {
      for (int t = 0; t < 20; ++t) {
        Element x = random_element(g, rng);
        Coset c = coset_of(h, x);
        expect(RingElem::from_coset(c).measure() == h.index().reciprocal(),
               name + ": coset measure differs from the index reciprocal");
        ++checked;
      }
    }
  }
  for (auto& [name, g] : infinite_corpus()) {
    for (const Subgroup& h : sample_subgroups(g, rng)) {
      for (int t = 0; t < 20; ++t) {
        Element x = random_element(g, rng);
        Coset c = coset_of(h, x);
        expect(RingElem::from_coset(c).measure() == h.index().reciprocal(),
               name + ": coset measure differs from the index reciprocal");
        ++checked;
      }
    }
  }
  detail = std::to_string(checked) + " coset measures checked";
}

void criterion_neumann(std::string& detail) {
  GroupPtr z = builders::z(1);
  std::vector<std::pair<i64, i64>> pool;  // (modulus, residue)
  for (i64 m = 1; m <= 6; ++m)
    for (i64 r = 0; r < m; ++r) pool.emplace_back(m, r);
  std::vector<Subgroup> subs;
  for (i64 m = 1; m <= 6; ++m)
    subs.push_back(subgroup_from_generators(z, {z->make_va({m}, 0)}));

  i64 systems = 0, covers = 0;
  std::vector<size_t> pick;
  std::function<void(size_t)> recurse = [&](size_t from) {
    if (!pick.empty()) {
      std::vector<Coset> cosets;
      for (size_t i : pick)
        cosets.push_back(coset_of(subs[(size_t)pool[i].first - 1],
                                  z->make_va({pool[i].second}, 0)));
      NeumannReport rep = neumann_check(cosets);  // throws if a cover sums below 1
      ++systems;
      if (rep.covers) {
        ++covers;
        expect(!(rep.reciprocal_sum < Rational(1)), "cover with reciprocal sum below one");
      }
    }
    if (pick.size() == 4) return;
    for (size_t i = from; i < pool.size(); ++i) {
      pick.push_back(i);
      recurse(i);
      pick.pop_back();
    }
  };
  recurse(0);

  Subgroup two = subs[1], four = subs[3];
  NeumannReport rep = neumann_check({coset_of(two, z->make_va({0}, 0)),
                                     coset_of(four, z->make_va({1}, 0)),
                                     coset_of(four, z->make_va({3}, 0))});
  expect(rep.covers && rep.reciprocal_sum == Rational(1),
         "three-coset cover not certified with sum exactly one");
  detail = std::to_string(systems) + " systems, " + std::to_string(covers) + " covers";
}

void criterion_strata_oracle(std::string& detail) {
  std::map<std::string, Rational> anchors = {
      {"symmetric(3)", Rational(1, 2)},
      {"dihedral(4)", Rational(5, 8)},
      {"quaternion8", Rational(5, 8)},
      {"symmetric(4)", Rational(5, 24)},
  };
  i64 n = 0;
  for (auto& [name, g] : finite_corpus()) {
    StratumTable t = centralizer_strata(g);
    t.validate();
    Rational via_strata = dc_strata(t);
    Rational direct = dc_finite(g);
    expect(via_strata == direct, name + ": strata route disagrees with the pair count");
    auto it = anchors.find(name);
    if (it != anchors.end())
      expect(direct == it->second, name + ": anchor value mismatch");
    ++n;
  }
  detail = std::to_string(n) + " groups cross-checked";
}

void criterion_infinite_anchors(std::string& detail) {
  struct Case {
    const char* name;
    GroupPtr g;
    Rational expected;
    std::vector<i64> moduli;
  };
  std::vector<Case> cases = {
      {"infinite_dihedral", builders::infinite_dihedral(), Rational(1, 4), {3, 5, 7, 9, 11}},
      {"sympl_z2", builders::sympl_z2(), Rational(5, 8), {2, 4}},
      {"int_heisenberg", builders::int_heisenberg(), Rational(0), {2, 3, 5}},
      {"z2_rot4", builders::z2_rot4(), Rational(1, 16), {2, 3, 4}},
  };
  for (auto& c : cases) {
    StratumTable t = centralizer_strata(c.g);
    t.validate();
    Rational v = dc_strata(t);
    expect(v == c.expected, std::string(c.name) + ": strata value mismatch");
    RfChainResult rf = dc_rf_chain(c.g, mod_chain(c.g, c.moduli));
    for (size_t i = 0; i < rf.values.size(); ++i)
      expect(!(rf.values[i] < v), std::string(c.name) + ": quotient value below the strata value");
    if (std::string(c.name) == "infinite_dihedral") {
      for (size_t i = 0; i < rf.values.size(); ++i)
        expect(!(rf.values[i] > v + Rational(1, c.moduli[i])),
               "dihedral chain does not approach within 1/n");
    }
    if (std::string(c.name) == "int_heisenberg") {
      std::vector<Rational> want = {Rational(5, 8), Rational(11, 27), Rational(29, 125)};
      for (size_t i = 0; i < want.size(); ++i)
        expect(rf.values[i] == want[i], "heisenberg quotient value mismatch");
    }
  }
  detail = "4 infinite anchors with dominating chains";
}

void criterion_faf_dichotomy(std::string& detail) {
  i64 n = 0;
  for (auto& corpus : {finite_corpus(), infinite_corpus()}) {
    for (auto& [name, g] : corpus) {
      FafWitness w = faf_witness(g);
      bool positive = dc_strata(g) > Rational(0);
      expect(w.is_faf == positive, name + ": witness / positivity mismatch");
      ++n;
    }
  }
  detail = std::to_string(n) + " groups classified";
}

void criterion_witness_suite(std::string& detail) {
  std::mt19937_64 rng(777);
  GroupPtr z1 = builders::z(1);
  GroupPtr z2 = builders::z(2);
  GroupPtr dinf = builders::infinite_dihedral();
  std::vector<GroupPtr> groups = {z1, z2, dinf};

  auto lattice_subgroup = [&](const GroupPtr& g, i64 m) {
    return mod_chain(g, {m})[0];
  };
  auto infinite_subgroup = [&](const GroupPtr& g) -> Subgroup {
    if (g.get() == z2.get()) {
      i64 a = 1 + (i64)(rng() % 2), b = (i64)(rng() % 2);
      return subgroup_from_generators(g, {g->make_va({a, b}, 0)});
    }
    if (g.get() == dinf.get())
      return subgroup_from_generators(g, {g->make_va({(i64)(rng() % 3)}, 1)});
    return trivial_subgroup(g);
  };
  std::vector<Rational> epses = {Rational(1, 3), Rational(1, 4), Rational(1, 5)};

  i64 built = 0;
  for (int t = 0; t < 100; ++t) {  // basic
    const GroupPtr& g = groups[t % groups.size()];
    std::vector<WitnessConstraint> cons;
    cons.push_back({lattice_subgroup(g, 2 + (i64)(rng() % 3)), epses[rng() % 3]});
    if (t % 2 == 0) cons.push_back({lattice_subgroup(g, 2 + (i64)(rng() % 4)), epses[rng() % 3]});
    if (t % 3 == 0) cons.push_back({infinite_subgroup(g), epses[rng() % 3]});
    WitnessSet w = build_witness(g, std::move(cons));
    assert_certificate(w);
    ++built;
  }
  for (int t = 0; t < 100; ++t) {  // mean
    const GroupPtr& g = groups[t % groups.size()];
    Subgroup d = lattice_subgroup(g, 2 + (i64)(rng() % 3));
    std::vector<WitnessAtom> atoms;
    for (const Element& rep : transversal(d)) {
      RingElem c = RingElem::from_coset(coset_of(d, rep));
      Rational m = c.measure();
      atoms.push_back({std::move(c), m});
    }
    WitnessSet w = approximate_mean(g, std::move(atoms), 4 + (i64)(rng() % 9));
    assert_certificate(w);
    ++built;
  }
  for (int t = 0; t < 100; ++t) {  // disjoint translates
    const GroupPtr& g = groups[t % groups.size()];
    Subgroup d = lattice_subgroup(g, 2 + (i64)(rng() % 2));
    std::vector<WitnessAtom> atoms;
    for (const Element& rep : transversal(d)) {
      RingElem c = RingElem::from_coset(coset_of(d, rep));
      Rational m = c.measure();
      atoms.push_back({std::move(c), m});
    }
    std::vector<Element> s;
    s.push_back(random_element(g, rng, 2));
    if (s.back() == g->identity()) s.back() = g->multiply(s.back(), g->generators()[0]);
    if (t % 2 == 0) {
      Element extra = random_element(g, rng, 2);
      if (!(extra == g->identity())) s.push_back(extra);
    }
    WitnessSet w = disjoint_translates_witness(g, std::move(atoms), 4 + (i64)(rng() % 6),
                                               std::move(s));
    assert_certificate(w);
    for (bool ok : w.certificate.translate_disjoint)
      expect(ok, "translate disjointness failed");
    ++built;
  }
  for (int t = 0; t < 100; ++t) {  // amplified
    const GroupPtr& g = (t % 5 == 4) ? z2 : groups[t % 2];  // mostly Z and D_inf
    Rational eps = (g.get() == z2.get()) ? Rational(1, 2)
                                         : (t % 2 ? Rational(1, 2) : Rational(1, 3));
    Subgroup d = lattice_subgroup(g, 2 + (i64)(rng() % 2));
    std::vector<WitnessAtom> atoms;
    for (const Element& rep : transversal(d)) {
      RingElem c = RingElem::from_coset(coset_of(d, rep));
      Rational m = c.measure();
      atoms.push_back({std::move(c), m});
    }
    std::vector<Element> k = {random_element(g, rng, 1)};
    WitnessSet w = folner_amplify(g, std::move(atoms), std::move(k), eps);
    assert_certificate(w);
    ++built;
  }
  detail = std::to_string(built) + " randomized witness builds certified";
}

MeanVector random_mean(const GroupPtr& g, std::mt19937_64& rng) {
  uint32_t n = g->fc_order();
  std::vector<i64> raw(n);
  i64 total = 0;
  while (total == 0)
    for (uint32_t i = 0; i < n; ++i) total += (raw[i] = (i64)(rng() % 64));
  std::vector<Rational> w(n);
  for (uint32_t i = 0; i < n; ++i) w[i] = Rational(raw[i], total);
  return MeanVector(g, std::move(w));
}

void criterion_defect(std::string& detail) {
  std::mt19937_64 rng(4242);
  i64 tv_checked = 0, smooth_checked = 0;
  for (auto& [name, g] : finite_corpus()) {
    i64 n = *g->order();
    if (n > 12) continue;
    expect(defect_left(MeanVector::uniform(g)) == Rational(0),
           name + ": uniform mean has nonzero defect");
    if (n <= 8) {
      for (int t = 0; t < 50; ++t) {
        MeanVector mu = random_mean(g, rng);
        // exhaustive-subset oracle
        Rational brute(0);
        for (uint32_t gi = 0; gi < (uint32_t)n; ++gi) {
          for (uint32_t mask = 0; mask < (1u << n); ++mask) {
            Rational a(0), ta(0);
            for (uint32_t x = 0; x < (uint32_t)n; ++x)
              if (mask & (1u << x)) {
                a += mu.weight(x);
                ta += mu.weight(g->fc_mul(gi, x));
              }
            brute = std::max(brute, abs(ta - a));
          }
        }
        expect(defect_left(mu) == brute, name + ": TV formula disagrees with brute force");
        ++tv_checked;
      }
    }
    for (int t = 0; t < 100; ++t) {
      MeanVector mu = random_mean(g, rng);
      Rational dl = defect_left(mu), dr = defect_right(mu);
      MeanVector sm = smooth_mean(mu);  // asserts both contraction bounds
      if (dr < Rational(1) && dl > Rational(0))
        expect(defect_left(sm) < dl, name + ": no strict decrease under smoothing");
      ++smooth_checked;
    }
  }
  detail = std::to_string(tv_checked) + " oracle defects, " +
           std::to_string(smooth_checked) + " smoothing steps";
}

void criterion_conjugacy(std::string& detail) {
  i64 n = 0;
  for (auto& [name, g] : finite_corpus()) {
    expect(k_uniform(g) == dc_finite(g), name + ": class count over order differs from dc");
    MeanVector uni = MeanVector::uniform(g);
    Subgroup der = derived_subgroup(g);
    expect(!(k_mu(g, uni) < Rational(1, (i64)der.fc_elements().size())),
           name + ": uniform k_mu below the derived-subgroup bound");
    for (i64 k = 1; k <= *g->order(); ++k) {
      auto rep = kmu_strata_inequality(g, uni, k);
      expect(rep.holds, name + ": representative-set inequality fails");
    }
    ++n;
  }
  detail = std::to_string(n) + " groups checked";
}

void criterion_gustafson_gallagher(std::string& detail) {
  i64 pairs = 0;
  for (auto& [name, g] : finite_corpus()) {
    Rational dc = dc_finite(g);
    bool abelian = dc == Rational(1);
    if (!abelian)
      expect(!(dc > Rational(5, 8)), name + ": non-abelian group above the five-eighths bound");
    for (const Subgroup& s : subgroups_of(g)) {
      if (!is_normal(s)) continue;
      GallagherReport rep = gallagher_check(g, s);
      expect(rep.holds, name + ": multiplicative bound fails");
      ++pairs;
    }
  }
  detail = std::to_string(pairs) + " normal pairs checked";
}

void criterion_heisenberg_transversal(std::string& detail) {
  GroupPtr cp = builders::heisenberg_f2(2);
  GroupPtr h = to_finite_cayley(cp);
  // index-2 subgroup {x1 = 0}: recover element indices through the sorted ball
  auto elems = cp->ball(0);
  std::vector<uint16_t> lset;
  for (size_t i = 0; i < elems.size(); ++i)
    if (elems[i].v[0] == 0) lset.push_back((uint16_t)i);
  Subgroup l = fc_subgroup_from_elements(h, lset);
  expect(l.index().value() == 2, "x1-kernel is not of index two");

  GroupPtr square = builders::direct_product(h, h);
  std::vector<Element> kgens;
  for (uint16_t x : l.fc_elements()) {
    kgens.push_back(square->make_fc((uint32_t)x * h->fc_order() + h->fc_id()));
    kgens.push_back(square->make_fc((uint32_t)h->fc_id() * h->fc_order() + x));
  }
  Subgroup k = subgroup_from_generators(square, std::move(kgens));
  expect(k.index().value() == 4, "L x L does not have index four in the square");
  i64 found = 0;
  for (const Element& rep : transversal(k)) {
    auto pair = commuting_transversal(h, square, k, rep);
    expect(pair.has_value(), "a coset of L x L without a commuting pair");
    ++found;
  }
  detail = std::to_string(found) + " cosets, each with a commuting pair";
}

}  // namespace

std::vector<CriterionResult> run_acceptance() {
  Runner r;
  r.run(1, "coset-correctness", criterion_coset_correctness);
  r.run(2, "neumann-suite", criterion_neumann);
  r.run(3, "strata-brute-force-oracle", criterion_strata_oracle);
  r.run(4, "infinite-group-anchors", criterion_infinite_anchors);
  r.run(5, "faf-dichotomy", criterion_faf_dichotomy);
  r.run(6, "witness-set-suite", criterion_witness_suite);
  r.run(7, "defect-suite", criterion_defect);
  r.run(8, "conjugacy-suite", criterion_conjugacy);
  r.run(9, "gustafson-gallagher", criterion_gustafson_gallagher);
  r.run(10, "heisenberg-transversal", criterion_heisenberg_transversal);
  return r.results;
}

}  // namespace ccm
