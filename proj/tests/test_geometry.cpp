#include <gtest/gtest.h>

#include "support.hpp"

using namespace lsopi;
using namespace testing_support;

namespace {

const auto X4 = xs(4);
const Sampler kSampler;

Distribution dist(std::size_t n, std::vector<VectorField> gens) { return Distribution(n, std::move(gens), kSampler); }

bool same_span(const Distribution& a, const Distribution& b) { return a.contains(b) && b.contains(a); }

// [V, W](p) assembled from partial derivatives of the raw parse trees.
std::vector<mpq_class> bracket_at(const std::vector<ExprTree>& V, const std::vector<ExprTree>& W, const Point& p) {
  const std::size_t n = V.size();
  std::vector<mpq_class> v(n), w(n), out(n);
  for (std::size_t i = 0; i < n; ++i) {
    v[i] = tree_eval(V[i], p);
    w[i] = tree_eval(W[i], p);
  }
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j)
      out[i] += dual_eval(W[i].root(), p, j).d * v[j] - dual_eval(V[i].root(), p, j).d * w[j];
  return out;
}

}  // namespace

TEST(LieBracket, Examples) {
  VectorField d1 = coordinate_field(4, 0), x1d2 = field({"0", "x1", "0", "0"}, X4);
  EXPECT_EQ(lie_bracket(d1, x1d2), coordinate_field(4, 1));
  auto ch = chained_form();
  EXPECT_EQ(lie_bracket(ch.g1, ch.g2), field({"0", "0", "-1", "0"}, X4));
  // prolonging u1 of the chained form: f = u * g1, new g1 = d/du
  auto p = prolong(ch, Expr(0), Expr(1), "u");
  EXPECT_EQ(lie_bracket(p.system.f, p.system.g1), Expr(-1) * extend_field(ch.g1, 5));
}

TEST(LieBracket, MatchesPointwiseJacobians) {
  ExprGen gen(606);
  std::mt19937_64 rng(1);
  for (int it = 0; it < 60; ++it) {
    std::vector<ExprTree> tv, tw;
    VectorField V, W;
    for (std::size_t i = 0; i < 4; ++i) {
      tv.push_back(parse_expr(gen.entry(X4, 3, 2), X4));
      tw.push_back(parse_expr(gen.entry(X4, 3, 3), X4));
      V.push_back(normalize(tv.back()));
      W.push_back(normalize(tw.back()));
    }
    auto B = lie_bracket(V, W);
    Point p = random_point(rng, 4);
    auto expect = bracket_at(tv, tw, p);
    for (std::size_t i = 0; i < 4; ++i) EXPECT_EQ(B[i].eval(p), expect[i]);
  }
}

TEST(LieBracket, AntisymmetryAndJacobi) {
  ExprGen gen(8);
  for (int it = 0; it < 40; ++it) {
    auto U = random_rational_field(gen, X4), V = random_rational_field(gen, X4), W = random_rational_field(gen, X4);
    EXPECT_TRUE(is_zero_field(lie_bracket(V, W) + lie_bracket(W, V)));
    auto j = lie_bracket(U, lie_bracket(V, W)) + lie_bracket(V, lie_bracket(W, U)) + lie_bracket(W, lie_bracket(U, V));
    EXPECT_TRUE(is_zero_field(j));
  }
}

TEST(Filtration, ChainedForm) {
  auto ch = chained_form();
  LinearizabilitySequence seq(ch, kSampler);
  EXPECT_EQ(seq.level(0).rank(), 2u);
  // zero drift: every higher level equals D^0
  EXPECT_EQ(seq.level(1).rank(), 2u);
  EXPECT_EQ(non_involutivity_index(seq), 0u);
  EXPECT_FALSE(is_involutive(seq.level(0)));
}

TEST(Filtration, Brunovsky) {
  LinearizabilitySequence seq(brunovsky_2_2(), kSampler);
  EXPECT_EQ(seq.ranks(), (std::vector<std::size_t>{2, 4}));
  EXPECT_FALSE(non_involutivity_index(seq).has_value());
  EXPECT_EQ(full_rank_index(seq), 1u);
  LinearizabilitySequence seq31(brunovsky_3_1(), kSampler);
  EXPECT_EQ(seq31.ranks(), (std::vector<std::size_t>{2, 3, 4}));
  EXPECT_EQ(full_rank_index(seq31), 2u);
}

TEST(Filtration, CoupledChains) {
  LinearizabilitySequence seq(two_chains_coupled(), kSampler);
  EXPECT_EQ(seq.level(2).rank(), 6u);
  EXPECT_TRUE(is_involutive(seq.level(0)));
  EXPECT_TRUE(is_involutive(seq.level(1)));
  EXPECT_FALSE(is_involutive(seq.level(2)));
  EXPECT_EQ(non_involutivity_index(seq), 2u);
  EXPECT_EQ(involutive_closure(seq.level(2), kSampler).closure.rank(), 7u);
}

TEST(Involutivity, RankOneIsInvolutive) {
  ExprGen gen(12);
  for (int it = 0; it < 10; ++it) {
    auto V = random_rational_field(gen, X4);
    if (is_zero_field(V)) continue;
    EXPECT_TRUE(is_involutive(dist(4, {V})));
  }
}

TEST(Involutivity, PairTestAgreesWithRandomCombinations) {
  // brackets of random function combinations stay inside exactly when the generator pairs do
  ExprGen gen(99);
  int involutive = 0, not_involutive = 0;
  for (int it = 0; it < 40; ++it) {
    std::vector<VectorField> gens;
    if (gen.pick(2)) {
      // built from coordinate fields rescaled by functions: always involutive
      for (std::size_t i : {0u, 2u}) gens.push_back(parse_normalized("1 + " + gen.entry(X4, 1, 2), X4) * coordinate_field(4, i));
    } else {
      gens = {random_field(gen, X4, 2, 1), random_field(gen, X4, 2, 1)};
    }
    Distribution D = dist(4, gens);
    if (D.rank() < 2) continue;
    bool pair = is_involutive(D);
    bool combos = true;
    for (int c = 0; c < 3 && combos; ++c) {
      VectorField a = parse_normalized(gen.entry(X4), X4) * gens[0] + parse_normalized(gen.entry(X4), X4) * gens[1];
      VectorField b = parse_normalized(gen.entry(X4), X4) * gens[0] + parse_normalized(gen.entry(X4), X4) * gens[1];
      combos = D.contains(lie_bracket(a, b));
    }
    if (pair) {
      EXPECT_TRUE(combos);
      ++involutive;
    } else {
      ++not_involutive;
      EXPECT_FALSE(D.contains(lie_bracket(gens[0], gens[1])));
    }
  }
  EXPECT_GT(involutive, 0);
  EXPECT_GT(not_involutive, 0);
}

TEST(Closure, Examples) {
  auto ch = chained_form();
  Distribution D0 = dist(4, {ch.g1, ch.g2});
  auto cl = involutive_closure(D0, kSampler);
  EXPECT_EQ(cl.growth, (std::vector<std::size_t>{2, 3, 4}));
  EXPECT_EQ(cl.closure.rank(), 4u);
  EXPECT_EQ(growth_vector(D0, 10, kSampler), (std::vector<std::size_t>{2, 3, 4}));
  EXPECT_EQ(growth_vector(D0, 2, kSampler), (std::vector<std::size_t>{2, 3}));
  auto pm = pomet_form();
  EXPECT_EQ(growth_vector(dist(4, {pm.g1, pm.g2}), 10, kSampler), (std::vector<std::size_t>{2, 3, 4}));
  Distribution inv = dist(4, {coordinate_field(4, 0), coordinate_field(4, 1)});
  EXPECT_EQ(involutive_closure(inv, kSampler).growth, (std::vector<std::size_t>{2}));
}

TEST(Closure, Idempotent) {
  ExprGen gen(5);
  for (int it = 0; it < 15; ++it) {
    Distribution D = dist(4, {random_field(gen, X4, 2, 1), random_field(gen, X4, 2, 1)});
    auto c1 = involutive_closure(D, kSampler).closure;
    auto c2 = involutive_closure(c1, kSampler).closure;
    EXPECT_EQ(c1.rank(), c2.rank());
    EXPECT_TRUE(same_span(c1, c2));
    EXPECT_TRUE(is_involutive(c1));
  }
}

TEST(Characteristic, Examples) {
  auto ch = chained_form();
  Distribution D0 = dist(4, {ch.g1, ch.g2});
  Distribution E = add_brackets(D0, D0, D0, kSampler);
  Distribution C = characteristic(E, kSampler);
  EXPECT_EQ(C.rank(), 1u);
  EXPECT_TRUE(C.contains(coordinate_field(4, 3)));
  Distribution inv = dist(4, {coordinate_field(4, 0), field({"0", "x1", "0", "x1"}, X4)});
  ASSERT_TRUE(is_involutive(inv));
  EXPECT_TRUE(same_span(characteristic(inv, kSampler), inv));
}

TEST(Characteristic, AlwaysInvolutive) {
  ExprGen gen(13);
  for (int it = 0; it < 20; ++it) {
    const auto X5 = xs(5);
    Distribution D(5, {random_field(gen, X5, 2, 1), random_field(gen, X5, 2, 1), random_field(gen, X5, 2, 1)},
                   kSampler);
    Distribution C = characteristic(D, kSampler);
    EXPECT_TRUE(is_involutive(C));
    EXPECT_TRUE(D.contains(C));
    for (const auto& xi : C.frame())
      for (const auto& g : D.frame()) EXPECT_TRUE(D.contains(lie_bracket(xi, g)));
  }
}

TEST(Corank, Examples) {
  auto ch = chained_form();
  Distribution D0 = dist(4, {ch.g1, ch.g2});
  EXPECT_EQ(corank(D0, D0), 0u);
  EXPECT_EQ(corank(D0, add_brackets(D0, D0, D0, kSampler)), 1u);
  auto s1 = prolong(pomet_form(), Expr(0), Expr(1), "u").system;
  LinearizabilitySequence seq(s1, kSampler);
  EXPECT_EQ(corank(seq.level(0), seq.level(1)), 2u);
  EXPECT_THROW(corank(add_brackets(D0, D0, D0, kSampler), D0), AlgebraError);
}

TEST(StaticLinearizability, Examples) {
  EXPECT_TRUE(is_sfl(brunovsky_2_2(), kSampler));
  EXPECT_TRUE(is_sfl(brunovsky_3_1(), kSampler));
  EXPECT_FALSE(is_sfl(chained_form(), kSampler));
  // three raw prolongations of u1
  ControlSystem s = pomet_form();
  for (int i = 0; i < 3; ++i) {
    EXPECT_FALSE(is_sfl(s, kSampler));
    s = prolong(s, Expr(0), Expr(1), "v" + std::to_string(i)).system;
  }
  EXPECT_TRUE(is_sfl(s, kSampler));
}

TEST(Filtration, FeedbackInvariant) {
  ExprGen gen(71);
  std::vector<ControlSystem> systems = {chained_form(), pomet_form(), two_chains_coupled()};
  for (const auto& sys : systems) {
    auto names = sys.states;
    LinearizabilitySequence seq(sys, kSampler);
    const std::size_t k = non_involutivity_index(seq).value();
    for (int it = 0; it < 3; ++it) {
      Expr a1 = parse_normalized(gen.entry(names), names), a2 = parse_normalized(gen.entry(names), names);
      Expr b11 = parse_normalized("1 + " + gen.entry(names, 1, 1), names), b12 = parse_normalized(gen.entry(names, 1, 1), names);
      Expr b21 = parse_normalized(gen.entry(names, 1, 1), names), b22 = parse_normalized("2", names);
      if ((b11 * b22 - b12 * b21).is_zero()) continue;
      ControlSystem fb{sys.name, names, sys.f + a1 * sys.g1 + a2 * sys.g2, b11 * sys.g1 + b21 * sys.g2,
                       b12 * sys.g1 + b22 * sys.g2};
      LinearizabilitySequence fseq(fb, kSampler);
      for (std::size_t j = 0; j <= k; ++j) EXPECT_TRUE(same_span(seq.level(j), fseq.level(j))) << sys.name << " j=" << j;
    }
  }
}
