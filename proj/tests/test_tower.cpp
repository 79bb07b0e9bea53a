#include <gtest/gtest.h>

#include <algorithm>
#include <set>

#include "ptower/tower.hpp"

using namespace ptower;

namespace {

DescendantTree tree(const std::string& root, int max_lo, const std::string& prune = {}, int threads = 0) {
  TreeOptions o;
  o.bounds = Bounds::defaults(RootSpec::parse(root).p);
  o.bounds.max_lo = max_lo;
  o.threads = threads;
  if (!prune.empty()) o.prune = parse_pattern_spec(prune);
  return build_tree(RootSpec::parse(root), o);
}

std::vector<std::string> listing(const DescendantTree& t) {
  std::vector<std::string> v;
  for (size_t i = 0; i < t.nodes.size(); ++i)
    v.push_back(t.path_string(static_cast<int>(i)) + " " + t.nodes[i].group.serialize() + " " +
                std::to_string(t.nodes[i].aut.order));
  return v;
}

std::vector<std::string> paths(const DescendantTree& t, const std::vector<int>& ids) {
  std::vector<std::string> v;
  for (int id : ids) v.push_back(t.path_string(id));
  std::sort(v.begin(), v.end());
  return v;
}

// layer-2 targets of the preimage of each layer-1 subgroup
std::multiset<std::string> layer2_of_L(const PcPresentation& G) {
  auto ab = abelianization_data(G);
  auto ap = artin_pattern(G, 1);
  std::multiset<std::string> out;
  for (const auto& S : ap.layers[1].members) {
    auto L = induced_presentation(G, ab.lift(G, S));
    auto al = artin_pattern(L, 2);
    auto t2 = al.layers.size() > 2 ? al.layers[2].ttt : std::vector<AbelianType>{};
    std::sort(t2.begin(), t2.end(), type_greater);
    out.insert(render_type_list(t2));
  }
  return out;
}

}  // namespace

TEST(Paths, RenderParseRoundTrip) {
  for (std::string s : {"ab(5,2)(-#1;1)^3-#1;19", "ab(3,2)-#1;1-#2;5-#1;2-#2;6", "ab(2,(21))-#1;1-#2;4-#1;2",
                        "ab(3,2)", "ab(3,2)(-#2;1-#1;1)^2-#2;4"}) {
    auto [r, p] = parse_path(s);
    EXPECT_EQ(r.label() + render_steps(p), s);
  }
  auto [r, p] = parse_path("ab(5,2)-#1;1-#1;1-#1;1-#2;101");
  EXPECT_EQ(render_steps(p), "(-#1;1)^3-#2;101");
  EXPECT_EQ(p.size(), 4u);
  EXPECT_THROW(parse_path("ab(5,2)-#1"), Error);
  EXPECT_THROW(parse_path("ab(4,2)"), Error);
  EXPECT_THROW(RootSpec::parse("cyc(3)"), Error);
}

TEST(Tree, SmallTreeStructure) {
  auto t = tree("ab(3,2)", 4);
  ASSERT_EQ(t.nodes.size(), 7u);
  EXPECT_EQ(t.nodes[0].aut.order, 48u);
  for (size_t i = 1; i < t.nodes.size(); ++i) {
    const auto& c = t.nodes[i];
    const auto& par = t.nodes[c.parent];
    // the parent is the last lower central quotient
    auto lcs = lower_central_series(c.group);
    auto q = quotient(c.group, lcs[lcs.size() - 2]).pres;
    EXPECT_EQ(fingerprint(q), fingerprint(par.group)) << t.path_string(static_cast<int>(i));
    EXPECT_EQ(c.stats.lo - par.stats.lo, c.path.back().step);
    EXPECT_EQ(c.stats.cl, par.stats.cl + 1);
  }
  EXPECT_THROW(tree("ab(3,2)", 1), Error);
}

TEST(Tree, MonotonyAndTotalKernelOnG1) {
  for (auto [root, lo] : {std::pair{"ab(2,2)", 6}, std::pair{"ab(3,2)", 6}, std::pair{"ab(5,2)", 5}}) {
    auto t = tree(root, lo);
    for (size_t i = 0; i < t.nodes.size(); ++i) {
      const auto& n = t.nodes[i];
      const auto& last = n.pattern.layers.back();
      ASSERT_EQ(last.kernels.size(), 1u);
      EXPECT_EQ(last.kernels[0].size_log(), n.pattern.A.n()) << t.path_string(static_cast<int>(i));
      if (n.parent >= 0) EXPECT_TRUE(pattern_leq(t.nodes[n.parent].pattern, n.pattern)) << t.path_string(int(i));
    }
  }
}

TEST(Tree, PrunedAgreesWithUnpruned) {
  const std::string target = "tau0=1^2 tau1=[(1^3)^2,21,1^3] kappa1=(4443)";
  auto full = tree("ab(3,2)", 6);
  auto cut = tree("ab(3,2)", 6, target);
  auto spec = parse_pattern_spec(target);
  auto a = paths(full, find_by_pattern(full, spec));
  auto b = paths(cut, find_by_pattern(cut, spec));
  EXPECT_EQ(a, b);
  EXPECT_EQ(a.size(), 5u);
  EXPECT_GT(cut.pruned, 0u);
  EXPECT_LT(cut.nodes.size(), full.nodes.size());
}

TEST(Tree, IncrementalParallelAndSerialAgree) {
  auto scratch = tree("ab(3,2)", 6, {}, 1);
  auto grown = tree("ab(3,2)", 4, {}, 1);
  auto b = grown.bounds;
  b.max_lo = 6;
  extend_tree(grown, b, 4);
  EXPECT_EQ(listing(grown), listing(scratch));
  EXPECT_EQ(grown.complete, scratch.complete);
  auto par = tree("ab(3,2)", 6, {}, 8);
  EXPECT_EQ(listing(par), listing(scratch));
  EXPECT_EQ(to_dot(par), to_dot(scratch));
  b.max_lo = 5;
  EXPECT_THROW(extend_tree(grown, b), Error);
}

TEST(Topology, IncrementsAddUp) {
  auto t = tree("ab(3,2)", 6);
  std::set<std::string> shapes;
  for (size_t a = 0; a < t.nodes.size(); ++a)
    for (size_t b = 0; b < t.nodes.size(); ++b) {
      auto T = topology(t, int(a), int(b));
      EXPECT_EQ(T.delta_lo, T.delta_cl + T.delta_cc);
      shapes.insert(T.shape);
    }
  EXPECT_EQ(shapes, (std::set<std::string>{"equal", "child", "bastard", "sibling", "descent", "fork"}));
  auto T = topology(node_at(RootSpec::parse("ab(3,2)"), parse_path("ab(3,2)-#1;1-#2;2-#1;2").second),
                    node_at(RootSpec::parse("ab(3,2)"), parse_path("ab(3,2)-#1;1-#2;2-#1;2-#2;2").second));
  EXPECT_EQ(T.shape, "bastard");
  EXPECT_EQ(T.delta_lo, 2);
  EXPECT_EQ(T.delta_cl, 1);
  EXPECT_EQ(T.delta_cc, 1);
}

TEST(Cover, AbelianRootIsAlone) {
  auto c = cover("ab(5,2)", Bounds{4, 2, 0});
  ASSERT_EQ(c.members.size(), 1u);
  EXPECT_EQ(c.members[0], c.base);
  EXPECT_TRUE(c.complete_within_bounds);
}

TEST(Cover, SchurSigmaStemGroupIsAlone) {
  auto t = tree("ab(3,2)", 5);
  int found = 0;
  for (size_t i = 0; i < t.nodes.size(); ++i) {
    if (!t.nodes[i].schur_sigma) continue;
    ++found;
    auto c = cover(t.path_string(int(i)), Bounds{8, 2, 0});
    EXPECT_EQ(c.members.size(), 1u) << t.path_string(int(i));
    EXPECT_TRUE(c.complete_within_bounds);
  }
  EXPECT_EQ(found, 2);
}

TEST(Cover, ShafarevichFilterChecksRank) {
  auto c = cover("ab(3,2)-#1;1-#2;5-#1;2-#1;7", Bounds{8, 2, 0});
  ASSERT_TRUE(c.complete_within_bounds);
  EXPECT_EQ(paths(c.tree, c.members), (std::vector<std::string>{"ab(3,2)-#1;1-#2;5-#1;2-#1;7",
                                                                 "ab(3,2)-#1;1-#2;5-#1;2-#2;5"}));
  EXPECT_EQ(shafarevich_filter(c, 2, 0, 0).size(), 1u);  // complex: d2 <= 2
  EXPECT_EQ(shafarevich_filter(c, 2, 1, 0).size(), 2u);  // real: d2 <= 3
  EXPECT_THROW(shafarevich_filter(c, 3, 0, 0), Error);
}

TEST(Stem, PhiSixForFive) {
  auto st = stem_phi6(5, 1);
  ASSERT_EQ(st.size(), 12u);
  std::multiset<int> etas;
  int schur = 0;
  for (const auto& e : st) {
    etas.insert(e.eta);
    schur += e.node.schur_sigma;
    if (e.node.schur_sigma) {
      EXPECT_FALSE(e.capable) << e.path;
      EXPECT_TRUE(is_permutation(e.tkt_canonical)) << e.path;
    }
  }
  EXPECT_EQ(etas, (std::multiset<int>{6, 2, 2, 1, 1, 0, 0, 0, 2, 1, 1, 6}));
  EXPECT_EQ(schur, 6);
}

TEST(TwoStage, LengthTwoPatterns) {
  auto st = stem_phi6(5, 0);
  EXPECT_EQ(two_stage_decision(parse_pattern_spec("tau0=1^2 tau1=[(1^3)^6] kappa1=(123456)"), 5, &st),
            TwoStage::Length2);
  EXPECT_EQ(two_stage_decision(parse_pattern_spec("tau0=1^2 tau1=[(21)^6] kappa1=(512643)"), 5, &st),
            TwoStage::Length2);
  // a stem group that is capable is not decided
  EXPECT_EQ(two_stage_decision(parse_pattern_spec("tau0=1^2 tau1=[21^3,(1^2)^5] kappa1=(1,0^5)"), 5, &st),
            TwoStage::Unknown);
}

// tau=[1^3,1^3,21,1^3], kappa=(4443): the sigma-group of order 3^6 and its bastard tower group
TEST(Anchors, SporadicThreeGroup) {
  auto root = RootSpec::parse("ab(3,2)");
  auto N = node_at(root, parse_path("ab(3,2)-#1;1-#2;2-#1;2").second);
  EXPECT_EQ(N.stats.lo, 6);
  EXPECT_EQ(N.d2, 4);
  EXPECT_TRUE(N.sigma);
  EXPECT_TRUE(match_spec(N.pattern, parse_pattern_spec("tau0=1^2 tau1=[(1^3)^2,21,1^3] kappa1=(4443)"),
                         MatchMode::Equal));
  auto twin = node_at(root, parse_path("ab(3,2)-#1;1-#2;2-#1;1").second);
  EXPECT_EQ(fingerprint(twin.group), fingerprint(N.group));
  EXPECT_FALSE(twin.sigma);
  auto G = node_at(root, parse_path("ab(3,2)-#1;1-#2;2-#1;2-#2;2").second);
  EXPECT_EQ(G.stats.lo, 8);
  EXPECT_EQ(G.stats.cl, 5);
  EXPECT_EQ(G.stats.cc, 3);
  EXPECT_EQ(G.stats.dl, 3);
  EXPECT_EQ(G.d2, 2);
  EXPECT_TRUE(G.schur_sigma);
  EXPECT_EQ(layer2_of_L(G.group), (std::multiset<std::string>{"2^21,(2^2)^3", "2^21,(21^2)^12", "2^21,(21^2)^12",
                                                        "2^21,(2^2)^3,(21)^6,(1^3)^3"}));
}

// kappa=(2334), tau=(21,32,21,21): ipad2 separates the metabelian pair from the tower groups
TEST(Anchors, IpadTwoSeparation) {
  auto root = RootSpec::parse("ab(3,2)");
  for (auto [m, g] : {std::pair{"-#1;7", "-#2;5"}, std::pair{"-#1;8", "-#2;6"}}) {
    auto M = node_at(root, parse_path(std::string("ab(3,2)-#1;1-#2;5-#1;2") + m).second);
    auto G = node_at(root, parse_path(std::string("ab(3,2)-#1;1-#2;5-#1;2") + g).second);
    auto a = ipad2(M.group), b = ipad2(G.group);
    EXPECT_EQ(ipad(M.group), ipad(G.group));
    EXPECT_NE(a, b);
    int l2 = 0, l3 = 0;
    for (const auto& c : a.components) l2 += render_type_list(c.tau1) == "2^21,(21)^3";
    for (const auto& c : b.components) l3 += render_type_list(c.tau1) == "(31)^3,2^21";
    EXPECT_EQ(l2, 3);
    EXPECT_EQ(l3, 3);
  }
}

TEST(Anchors, TwoGroupWithTwoTowerCandidates) {
  auto c = cover("ab(2,(21))-#1;1-#2;4-#1;2", Bounds{8, 2, 0});
  ASSERT_TRUE(c.complete_within_bounds);
  const auto& Y = c.tree.nodes[c.base];
  EXPECT_EQ(Y.stats.lo, 7);
  EXPECT_EQ(Y.d2, 4);
  auto spec = parse_pattern_spec(
      "tau0=21 tau1=[2^2,31,1^3] tau2=[2^2,21^2,21^2] ipad2=[[2^2;(21^2)^3],[31;(41)^2,21^2],[1^3;2^2,(21^2)^6]]");
  int same = 0, match = 0;
  for (int id : c.members) {
    const auto& n = c.tree.nodes[id];
    if (n.stats.lo != 8) continue;
    EXPECT_EQ(n.stats.cl, 5);
    EXPECT_EQ(n.stats.cc, 3);
    EXPECT_EQ(n.stats.dl, 3);
    EXPECT_EQ(n.d2, 3);
    ++same;
    auto i2 = ipad2(n.group);
    match += match_spec(n.pattern, spec, MatchMode::Equal, &i2);
  }
  EXPECT_EQ(same, 4);
  EXPECT_EQ(match, 2);
}

TEST(Output, DotIsDeterministicAndStyled) {
  auto t = tree("ab(3,2)", 5);
  auto d = to_dot(t);
  EXPECT_EQ(d, to_dot(tree("ab(3,2)", 5)));
  EXPECT_NE(d.find("digraph"), std::string::npos);
  EXPECT_NE(d.find("style=dashed"), std::string::npos);
  DescendantTree empty;
  EXPECT_THROW(to_dot(empty), Error);
}

TEST(Output, AnnotationsResolveTwinsByPath) {
  auto ann = load_annotations(default_annotation_path());
  auto root = RootSpec::parse("ab(3,2)");
  auto N = node_at(root, parse_path("ab(3,2)-#1;1-#2;2-#1;2").second);
  auto twin = node_at(root, parse_path("ab(3,2)-#1;1-#2;2-#1;1").second);
  EXPECT_EQ(annotate(N.group, ann, "ab(3,2)-#1;1-#2;2-#1;2"), "N");
  EXPECT_EQ(annotate(twin.group, ann, "ab(3,2)-#1;1-#2;2-#1;1"), "");
  auto U = node_at(root, parse_path("ab(3,2)-#1;1-#2;5-#1;2").second);
  EXPECT_EQ(annotate(U.group, ann), "U");
}
