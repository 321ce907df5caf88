#include "corpus.hpp"

#include <random>
#include <set>

namespace qpskew::corpus {

namespace {

struct OrbitPlan {
  int first_vertex;
  Subgroup stab;
  std::vector<GroupElement> transversal;  // lex-least coset representatives
  std::vector<size_t> coset_of;           // group element index -> coset index
};

OrbitPlan plan_orbit(const AbelianGroup& g, const Subgroup& h, int first_vertex) {
  OrbitPlan plan;
  plan.first_vertex = first_vertex;
  plan.stab = h;
  auto elems = g.elements();
  plan.coset_of.assign(elems.size(), SIZE_MAX);
  for (size_t i = 0; i < elems.size(); ++i) {
    if (plan.coset_of[i] != SIZE_MAX) continue;
    size_t coset = plan.transversal.size();
    plan.transversal.push_back(elems[i]);
    for (const auto& s : h.elements) plan.coset_of[g.index_of(g.mul(elems[i], s))] = coset;
  }
  return plan;
}

Scalar random_rational(std::mt19937_64& rng, long conductor) {
  static const std::pair<long, long> pool[] = {{1, 1}, {-1, 1}, {2, 1}, {1, 2}, {-2, 3}, {3, 1}};
  auto [num, den] = pool[rng() % std::size(pool)];
  return Scalar(Rational(num, den), conductor);
}

CorpusInstance try_generate(std::mt19937_64& rng, size_t idx) {
  static const std::vector<std::vector<long>> group_pool = {{2}, {3}, {2, 2}, {3, 3}};
  CorpusInstance ci;
  ci.name = "corpus" + std::to_string(idx);
  ci.group.factors = group_pool[rng() % group_pool.size()];
  ci.conductor = ci.group.exponent();
  const AbelianGroup& g = ci.group;
  auto elems = g.elements();
  auto subs = all_subgroups(g);

  // vertex orbits
  size_t target_vertices = 1 + rng() % 4;
  std::vector<OrbitPlan> vorbits;
  std::vector<size_t> vertex_orbit;  // per vertex
  std::vector<size_t> vertex_coset;
  while (ci.quiver.vertex_count() < static_cast<int>(target_vertices)) {
    size_t remaining = target_vertices - ci.quiver.vertex_count();
    const Subgroup& h = subs[rng() % subs.size()];
    size_t orbit_size = g.order() / h.order();
    if (orbit_size > remaining) continue;
    OrbitPlan plan = plan_orbit(g, h, ci.quiver.vertex_count());
    for (size_t k = 0; k < orbit_size; ++k) {
      vertex_orbit.push_back(vorbits.size());
      vertex_coset.push_back(k);
      ci.quiver.vertex_names.push_back("v" + std::to_string(ci.quiver.vertex_count()));
    }
    vorbits.push_back(std::move(plan));
  }

  auto vertex_image = [&](const GroupElement& e, int v) {
    const OrbitPlan& plan = vorbits[vertex_orbit[v]];
    GroupElement moved = g.mul(e, plan.transversal[vertex_coset[v]]);
    return plan.first_vertex + static_cast<int>(plan.coset_of[g.index_of(moved)]);
  };

  // arrow orbits with a character of the pair stabilizer
  struct ArrowOrbit {
    int first_arrow;
    OrbitPlan plan;  // transversal of G / pair stabilizer
    Character chi;
    int src, tgt;  // seed endpoints
  };
  std::vector<ArrowOrbit> aorbits;
  std::vector<size_t> arrow_orbit, arrow_coset;
  size_t budget = 1 + rng() % 6;
  for (int tries = 0; tries < 24 && budget > 0; ++tries) {
    int s = static_cast<int>(rng() % ci.quiver.vertex_count());
    int t = static_cast<int>(rng() % ci.quiver.vertex_count());
    std::vector<GroupElement> stab_elems;
    for (const auto& e : elems)
      if (vertex_image(e, s) == s && vertex_image(e, t) == t) stab_elems.push_back(e);
    Subgroup stab = subgroup_generated(g, stab_elems);
    size_t orbit_size = g.order() / stab.order();
    if (orbit_size > budget) continue;
    auto chars = characters_of(stab, ci.conductor);
    ArrowOrbit ao{ci.quiver.arrow_count(), plan_orbit(g, stab, 0), chars[rng() % chars.size()], s,
                  t};
    for (size_t k = 0; k < orbit_size; ++k) {
      const GroupElement& rep = ao.plan.transversal[k];
      arrow_orbit.push_back(aorbits.size());
      arrow_coset.push_back(k);
      ci.quiver.arrows.push_back({"a" + std::to_string(aorbits.size()) + "o" + std::to_string(k),
                                  vertex_image(rep, s), vertex_image(rep, t)});
    }
    aorbits.push_back(std::move(ao));
    budget -= orbit_size;
  }

  // generator tables
  std::vector<std::vector<int>> gen_vperm;
  std::vector<std::vector<std::pair<Scalar, int>>> gen_amap;
  for (size_t k = 0; k < g.factors.size(); ++k) {
    GroupElement gen = g.identity();
    if (g.factors[k] > 1) gen.residues[k] = 1;
    std::vector<int> vp(ci.quiver.vertex_count());
    for (int v = 0; v < ci.quiver.vertex_count(); ++v) vp[v] = vertex_image(gen, v);
    std::vector<std::pair<Scalar, int>> am(ci.quiver.arrow_count());
    for (int a = 0; a < ci.quiver.arrow_count(); ++a) {
      const ArrowOrbit& ao = aorbits[arrow_orbit[a]];
      const GroupElement& rep = ao.plan.transversal[arrow_coset[a]];
      GroupElement moved = g.mul(gen, rep);
      size_t new_coset = ao.plan.coset_of[g.index_of(moved)];
      // gen * rep = rep' * u with u in the stabilizer
      GroupElement u = g.mul(g.inv(ao.plan.transversal[new_coset]), moved);
      am[a] = {ao.chi(u), ao.first_arrow + static_cast<int>(new_coset)};
    }
    gen_vperm.push_back(std::move(vp));
    gen_amap.push_back(std::move(am));
  }
  ci.quiver.validate();
  ci.action = monomial_action(ci.quiver, g, ci.conductor, gen_vperm, gen_amap);

  // invariant potential: symmetrize a few random cycles
  auto cycles = cycles_up_to_length(ci.quiver, 4);
  if (!cycles.empty()) {
    size_t picks = 1 + rng() % 3;
    Potential w;
    for (size_t p = 0; p < picks; ++p) {
      const Path& c = cycles[rng() % cycles.size()];
      Scalar coeff = random_rational(rng, ci.conductor);
      for (const auto& e : elems) {
        auto [sc, img] = ci.action.apply_path(ci.quiver, e, c);
        w.add_cycle(ci.quiver, img, coeff * sc);
      }
    }
    ci.potential = w;
  }
  if (!check_invariance(ci.quiver, ci.action, ci.potential).invariant)
    throw Error(Errc::NotInvariant, "corpus symmetrization failed");
  return ci;
}

}  // namespace

std::vector<CorpusInstance> make_corpus(size_t count, uint64_t seed) {
  std::vector<CorpusInstance> out;
  std::mt19937_64 rng(seed);
  size_t idx = 0;
  while (out.size() < count) {
    try {
      CorpusInstance ci = try_generate(rng, idx++);
      if (ci.quiver.arrow_count() == 0) continue;
      out.push_back(std::move(ci));
    } catch (const Error&) {
      // rejected draw; try again
    }
    if (idx > count * 50)
      throw Error(Errc::InvalidInstance, "corpus generation did not converge");
  }
  return out;
}

Engine engine_for(const CorpusInstance& ci, size_t truncation) {
  Engine eng;
  eng.inst.group = ci.group;
  eng.inst.conductor = ci.conductor;
  eng.inst.truncation = truncation;
  eng.inst.quiver = ci.quiver;
  eng.quiver = ci.quiver;
  eng.action = ci.action;
  eng.w = ci.potential;
  eng.choices = make_choices(eng.quiver, eng.action);
  eng.qg = build_qg(eng.quiver, eng.action, eng.choices);
  SkewAlgebra alg{&eng.quiver, &eng.action, truncation};
  eng.wg = compute_wg(alg, eng.choices, eng.qg, eng.w);
  return eng;
}

}  // namespace qpskew::corpus
