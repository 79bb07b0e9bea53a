#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>
#include <set>

#include "ptower/artin.hpp"
#include "ptower/genalg.hpp"

using namespace ptower;

namespace {

// step-2 stem children of the extraspecial group of order p^3
std::vector<PcPresentation> stem_groups(int p) {
  auto G = abelian_presentation(p, {1, 1});
  auto ctx = make_lift_context(G, root_automorphisms(G));
  std::vector<PcPresentation> out;
  for (auto& r : immediate_descendants(ctx)) {
    if (p_cover(r.child).nu() != 2) continue;
    DescendantOptions o;
    o.only_step = 2;
    for (auto& c : immediate_descendants(make_lift_context(r.child, descendant_automorphisms(r)), o))
      out.push_back(c.child);
  }
  return out;
}

std::set<Elem> enumerate(const PcPresentation& G, const std::vector<Elem>& gens) {
  std::set<Elem> s{Elem{}};
  std::vector<Elem> todo{Elem{}};
  while (!todo.empty()) {
    Elem x = todo.back();
    todo.pop_back();
    for (const auto& g : gens) {
      Elem y = G.mul(x, g);
      if (s.insert(y).second) todo.push_back(y);
    }
  }
  return s;
}

// Transfer kernel straight from the definition: naive cosets, V(g) as the
// product of the h_i, membership of V(g) in H' by explicit enumeration.
std::set<Elem> oracle_kernel(const PcPresentation& G, const Subgroup& H) {
  auto Hs = enumerate(G, H.gens);
  std::vector<Elem> comms;
  for (const auto& x : Hs)
    for (const auto& y : Hs) comms.push_back(G.comm(x, y));
  auto Hd = enumerate(G, comms);
  std::vector<Elem> all_gens;
  for (int k = 0; k < G.n(); ++k) all_gens.push_back(Elem::gen(k));
  auto Gs = enumerate(G, all_gens);
  std::vector<Elem> reps;
  std::set<Elem> covered;
  for (const auto& g : Gs) {
    if (covered.count(g)) continue;
    reps.push_back(g);
    for (const auto& h : Hs) covered.insert(G.mul(g, h));
  }
  std::set<Elem> ker;
  for (const auto& g : Gs) {
    Elem v;
    for (const auto& t : reps) {
      Elem x = G.mul(g, t);
      for (const auto& r : reps) {
        Elem h = G.mul(G.inv(r), x);
        if (Hs.count(h)) {
          v = G.mul(v, h);
          break;
        }
      }
    }
    if (Hd.count(v)) ker.insert(g);
  }
  return ker;
}

std::vector<int> brute_lexmin(const std::vector<int>& d) {
  const int m = static_cast<int>(d.size());
  std::vector<int> perm(m), best;
  std::iota(perm.begin(), perm.end(), 0);
  do {
    // perm[new] = old
    std::vector<int> inv(m), s(m);
    for (int i = 0; i < m; ++i) inv[perm[i]] = i;
    for (int i = 0; i < m; ++i) s[i] = d[perm[i]] == 0 ? 0 : inv[d[perm[i]] - 1] + 1;
    if (best.empty() || s < best) best = s;
  } while (std::next_permutation(perm.begin(), perm.end()));
  return best;
}

}  // namespace

TEST(Transfer, KernelsMatchDefinition) {
  for (int p : {2, 3}) {
    std::vector<PcPresentation> groups;
    PcPresentation E(p, 3);
    E.set_comm(1, 0, Elem::gen(2));
    groups.push_back(E);
    if (p == 3)
      for (auto& g : stem_groups(3)) groups.push_back(g);
    for (const auto& G : groups) {
      auto ab = abelianization_data(G);
      auto ap = artin_pattern(G);
      for (const auto& L : ap.layers)
        for (size_t i = 0; i < L.members.size(); ++i) {
          Subgroup H = ab.lift(G, L.members[i]);
          auto ker = oracle_kernel(G, H);
          Subgroup K = ab.lift(G, L.kernels[i]);
          ASSERT_EQ(ker.size(), static_cast<size_t>(std::pow(p, K.size_log())));
          for (const auto& x : ker) EXPECT_TRUE(contains(G, K, x));
          // a second transversal gives the same homomorphism
          auto t1 = artin_transfer(G, ab, L.members[i], false);
          auto t2 = artin_transfer(G, ab, L.members[i], true);
          EXPECT_EQ(t1.images, t2.images);
        }
    }
  }
}

TEST(Artin, LayersOfElementaryAbelianRank3) {
  auto A = abelian_presentation(3, {1, 1, 1});
  EXPECT_EQ(layer_in_abelianization(A, 1).size(), 13u);
  EXPECT_EQ(layer_in_abelianization(A, 2).size(), 13u);
  EXPECT_EQ(layer_in_abelianization(A, 3).size(), 1u);
  auto B = abelian_presentation(2, {2, 1});
  EXPECT_EQ(layer_in_abelianization(B, 1).size(), 3u);
  EXPECT_EQ(layer_in_abelianization(B, 2).size(), 3u);
}

TEST(Artin, StemOfPhi6ForFive) {
  auto gs = stem_groups(5);
  ASSERT_EQ(gs.size(), 12u);
  std::multiset<int> etas;
  std::multiset<std::string> shapes;
  for (const auto& G : gs) {
    auto ap = artin_pattern(G);
    auto d = ap.kappa1();
    EXPECT_EQ(eta(d), eta_targets(ap.tau1(), {1, 1, 1}));
    etas.insert(eta(d));
    auto cyc = cycle_pattern(d);
    shapes.insert(cyc.empty() ? render_digits(tkt_canonical(d).digits) : render_cycles(cyc));
  }
  EXPECT_EQ(etas, (std::multiset<int>{6, 2, 2, 1, 1, 0, 0, 0, 2, 1, 1, 6}));
  std::multiset<std::string> want{"(1)(1)(1)(1)(1)(1)", "(4)(1)(1)", "(2)(2)(1)(1)", "(5)(1)", "(5)(1)",
                                   "(2)(2)(2)", "(6)", "(3)(3)", "(0,2^5)", "(0,1^5)", "(0,1^5)", "(0^6)"};
  EXPECT_EQ(shapes, want);
}

TEST(Tkt, CanonicalIsLexMinAndInvariant) {
  std::mt19937 rng(11);
  for (int t = 0; t < 300; ++t) {
    const int m = 2 + static_cast<int>(rng() % 5);
    std::vector<int> d(m);
    for (auto& x : d) x = static_cast<int>(rng() % (m + 1));
    auto c = tkt_canonical(d);
    EXPECT_EQ(c.digits, brute_lexmin(d));
    std::vector<int> perm(m), inv(m), e(m);
    std::iota(perm.begin(), perm.end(), 0);
    std::shuffle(perm.begin(), perm.end(), rng);
    for (int i = 0; i < m; ++i) inv[perm[i]] = i;
    for (int i = 0; i < m; ++i) e[i] = d[perm[i]] == 0 ? 0 : inv[d[perm[i]] - 1] + 1;
    EXPECT_EQ(tkt_canonical(e).digits, c.digits);
  }
  // identity on twelve letters must not explode
  std::vector<int> id(12);
  std::iota(id.begin(), id.end(), 1);
  EXPECT_EQ(tkt_canonical(id).digits, id);
  EXPECT_NE(tkt_canonical({2, 0, 0, 0, 0, 0}).digits, tkt_canonical({1, 0, 0, 0, 0, 0}).digits);
}

TEST(Tkt, EtaCounts) {
  EXPECT_EQ(eta({0, 2, 2, 2, 2, 2}), 2);
  EXPECT_EQ(eta({0, 1, 1, 1, 1, 1}), 1);
  EXPECT_EQ(eta_fixed_points({1, 2, 5, 3, 6, 4}), 2);
  EXPECT_EQ(cycle_pattern({5, 1, 2, 6, 4, 3}), (std::vector<int>{6}));
}

TEST(Rendering, TypeListsDigitsAndSpecs) {
  std::vector<AbelianType> l{{2, 1}, {1, 1}, {1, 1}, {1, 1}, {1, 1}, {1, 1}};
  EXPECT_EQ(render_type_list(l), "21,(1^2)^5");
  EXPECT_EQ(parse_type_list("[21,(1^2)^5]"), l);
  EXPECT_EQ(render_digits({1, 0, 0, 0, 0, 0}), "(1,0^5)");
  EXPECT_EQ(parse_digits("(1,0^5)"), (std::vector<int>{1, 0, 0, 0, 0, 0}));
  EXPECT_EQ(parse_digits("(4443)"), (std::vector<int>{4, 4, 4, 3}));
  auto s = parse_pattern_spec("tau0=1^2 tau1=[21,(1^2)^5] kappa1=(1,0^5) ipad2=[[1^2;21,1^2],[21;1^3,21]]");
  EXPECT_EQ(parse_pattern_spec(s.render()).render(), s.render());
  EXPECT_EQ(s.ipad2.size(), 2u);
}

TEST(Matching, RenumerationAndMonotony) {
  for (const auto& G : stem_groups(5)) {
    auto ap = artin_pattern(G);
    auto spec = spec_of(ap, 2);
    EXPECT_TRUE(match_spec(ap, spec, MatchMode::Equal));
    EXPECT_TRUE(match_spec(ap, spec, MatchMode::Leq));
    // renumbered target still matches
    auto d = *spec.kappa1;
    const int m = static_cast<int>(d.size());
    std::vector<int> perm(m), inv(m);
    std::iota(perm.begin(), perm.end(), 0);
    std::reverse(perm.begin(), perm.end());
    for (int i = 0; i < m; ++i) inv[perm[i]] = i;
    PatternSpec r = spec;
    for (int i = 0; i < m; ++i) {
      (*r.kappa1)[i] = d[perm[i]] == 0 ? 0 : inv[d[perm[i]] - 1] + 1;
      r.tau[1][i] = spec.tau[1][perm[i]];
    }
    EXPECT_TRUE(match_spec(ap, r, MatchMode::Equal));
    // the parent (extraspecial, all kernels total) is <= every stem child
    PcPresentation E(5, 3);
    E.set_comm(1, 0, Elem::gen(2));
    EXPECT_TRUE(match_spec(artin_pattern(E), spec, MatchMode::Leq));
  }
}
