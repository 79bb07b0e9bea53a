#include <gtest/gtest.h>

#include <random>

#include "oracles.hpp"
#include "ptower/pcgroup.hpp"

using namespace ptower;

namespace {

// extraspecial p^3 of exponent p: a0, a1, a2 = [a1,a0] central
PcPresentation heisenberg(int p) {
  PcPresentation G(p, 3);
  G.set_comm(1, 0, Elem::gen(2));
  return G;
}

oracle::Uni to_matrix(const Elem& x, int p) {
  oracle::Uni X{1, 0, 0}, Y{0, 1, 0};
  // z = [y,x] = y^-1 x^-1 y x
  oracle::Uni Z = oracle::uni_mul(
      oracle::uni_mul(oracle::uni_inv(Y, p), oracle::uni_inv(X, p), p), oracle::uni_mul(Y, X, p),
      p);
  oracle::Uni r;
  r = oracle::uni_mul(r, oracle::uni_pow(X, x[0], p), p);
  r = oracle::uni_mul(r, oracle::uni_pow(Y, x[1], p), p);
  r = oracle::uni_mul(r, oracle::uni_pow(Z, x[2], p), p);
  return r;
}

}  // namespace

TEST(Collector, HeisenbergMatchesUnitriangularMatrices) {
  for (int p : {3, 5, 7}) {
    auto G = heisenberg(p);
    ASSERT_TRUE(G.consistent());
    int N = p * p * p;
    for (int u = 0; u < N; ++u)
      for (int v = 0; v < N; v += 7) {
        Elem x = elem_from_index(u, 3, p), y = elem_from_index(v, 3, p);
        EXPECT_EQ(to_matrix(G.mul(x, y), p), oracle::uni_mul(to_matrix(x, p), to_matrix(y, p), p));
      }
  }
}

TEST(Collector, InversePowerCommutator) {
  auto G = heisenberg(3);
  std::mt19937 rng(7);
  for (int t = 0; t < 200; ++t) {
    Elem x = elem_from_index(rng() % 27, 3, 3), y = elem_from_index(rng() % 27, 3, 3);
    EXPECT_TRUE(G.mul(x, G.inv(x)).is_identity(3));
    EXPECT_TRUE(G.pow(x, 3).is_identity(3));
    EXPECT_EQ(G.mul(x, y), G.mul(y, G.mul(x, G.comm(x, y))));
  }
}

TEST(Collector, DetectsInconsistency) {
  // M(27): a1 of order 9 with [a1,a0] = a1^3
  PcPresentation G(3, 3);
  G.set_comm(1, 0, Elem::gen(2));
  G.set_pow(1, Elem::gen(2));
  EXPECT_TRUE(G.consistent());
  // a1 = a0^2 must commute with a0
  PcPresentation H(2, 3);
  H.set_pow(0, Elem::gen(1));
  H.set_comm(1, 0, Elem::gen(2));
  EXPECT_FALSE(H.consistent());
}

TEST(Subgroups, SeriesAndInvariants) {
  auto G = heisenberg(5);
  EXPECT_EQ(nilpotency_class(G), 2);
  EXPECT_EQ(derived_length(G), 2);
  EXPECT_EQ(generator_rank(G), 2);
  EXPECT_EQ(abelianization(G), (AbelianType{1, 1}));
  EXPECT_EQ(center(G).size_log(), 1);
  auto A = abelian_presentation(2, {2, 1});
  EXPECT_EQ(A.n(), 3);
  EXPECT_EQ(abelianization(A), (AbelianType{2, 1}));
  EXPECT_EQ(generator_rank(A), 2);
  auto B = abelian_presentation(3, {3, 1, 1});
  EXPECT_EQ(abelianization(B), (AbelianType{3, 1, 1}));
}

TEST(Subgroups, CanonicalFormIndependentOfGenerators) {
  auto G = heisenberg(3);
  Subgroup S1 = closure(G, {Elem::gen(0)});
  Elem y = G.mul(Elem::gen(0), Elem::gen(2));
  Subgroup S2 = closure(G, {G.pow(y, 2), Elem::gen(2)});
  Subgroup S3 = closure(G, {Elem::gen(0), Elem::gen(2)});
  EXPECT_EQ(S1.size_log(), 1);
  EXPECT_EQ(S2, S3);
  EXPECT_TRUE(contains(G, S3, y));
  EXPECT_FALSE(contains(G, S3, Elem::gen(1)));
}

TEST(Subgroups, QuotientAndInducedPresentation) {
  auto G = heisenberg(3);
  auto Z = center(G);
  auto Q = quotient(G, Z);
  EXPECT_EQ(Q.pres.n(), 2);
  EXPECT_EQ(nilpotency_class(Q.pres), 1);
  Subgroup M = closure(G, {Elem::gen(1), Elem::gen(2)});
  auto P = induced_presentation(G, M);
  EXPECT_TRUE(P.consistent());
  EXPECT_EQ(abelianization(P), (AbelianType{1, 1}));
}

TEST(Subgroups, SerializeRoundTrip) {
  auto G = heisenberg(7);
  G.set_pow(0, Elem::gen(2, 3));
  auto s = G.serialize();
  EXPECT_EQ(PcPresentation::deserialize(s), G);
}

TEST(Types, RenderParse) {
  EXPECT_EQ(render_type({2, 2, 1}), "2^21");
  EXPECT_EQ(parse_type("2^21"), (AbelianType{2, 2, 1}));
  EXPECT_EQ(render_type({1, 1, 1}), "1^3");
  EXPECT_EQ(render_type({12, 1}), "{12}1");
  EXPECT_EQ(parse_type("{12}1"), (AbelianType{12, 1}));
  EXPECT_EQ(render_type({}), "0");
}
