// Shared helpers for the test suites: fixtures, random generators and
// evaluators that work directly on parse trees.
#ifndef LSOPI_TESTS_SUPPORT_HPP
#define LSOPI_TESTS_SUPPORT_HPP

#include <random>
#include <string>
#include <vector>

#include "lsopi/lsopi.hpp"

namespace testing_support {

using namespace lsopi;

inline std::vector<std::string> xs(std::size_t n) {
  std::vector<std::string> v;
  for (std::size_t i = 0; i < n; ++i) v.push_back("x" + std::to_string(i + 1));
  return v;
}

inline VectorField field(const std::vector<std::string>& entries, const std::vector<std::string>& names) {
  VectorField v;
  for (const auto& e : entries) v.push_back(parse_normalized(e, names));
  return v;
}

inline ControlSystem make_system(const std::string& name, const std::vector<std::string>& states,
                                 const std::vector<std::string>& f, const std::vector<std::string>& g1,
                                 const std::vector<std::string>& g2) {
  return ControlSystem{name, states, field(f, states), field(g1, states), field(g2, states)};
}

inline ControlSystem chained_form() {
  return make_system("chained", xs(4), {"0", "0", "0", "0"}, {"1", "x3", "x4", "0"}, {"0", "0", "0", "1"});
}

inline ControlSystem pomet_form() {
  return make_system("pomet", xs(4), {"0", "x4", "0", "0"}, {"1", "x3", "x4", "0"}, {"0", "0", "0", "1"});
}

/// w' = y1 z2 with two triple integrators.
inline ControlSystem two_chains_coupled() {
  std::vector<std::string> s = {"w", "y1", "y2", "y3", "z1", "z2", "z3"};
  return make_system("two_chains_coupled", s, {"y1*z2", "y2", "y3", "0", "z2", "z3", "0"},
                     {"0", "0", "0", "1", "0", "0", "0"}, {"0", "0", "0", "0", "0", "0", "1"});
}

inline ControlSystem brunovsky_2_2() {
  return make_system("brunovsky_2_2", xs(4), {"x2", "0", "x4", "0"}, {"0", "1", "0", "0"}, {"0", "0", "0", "1"});
}

inline ControlSystem brunovsky_3_1() {
  return make_system("brunovsky_3_1", xs(4), {"x2", "x3", "0", "0"}, {"0", "0", "1", "0"}, {"0", "0", "0", "1"});
}

/// Pointwise value and one directional derivative, evaluated on the raw tree.
struct Dual {
  mpq_class v, d;
};

inline Dual dual_eval(const ExprTree::Node& n, const Point& p, std::size_t var) {
  using K = ExprTree::Kind;
  switch (n.kind) {
    case K::Number: return {mpq_class(n.number), 0};
    case K::Variable: return {p[n.var], n.var == var ? 1 : 0};
    case K::Neg: {
      auto a = dual_eval(*n.lhs, p, var);
      return {-a.v, -a.d};
    }
    case K::Add: {
      auto a = dual_eval(*n.lhs, p, var), b = dual_eval(*n.rhs, p, var);
      return {a.v + b.v, a.d + b.d};
    }
    case K::Sub: {
      auto a = dual_eval(*n.lhs, p, var), b = dual_eval(*n.rhs, p, var);
      return {a.v - b.v, a.d - b.d};
    }
    case K::Mul: {
      auto a = dual_eval(*n.lhs, p, var), b = dual_eval(*n.rhs, p, var);
      return {a.v * b.v, a.d * b.v + a.v * b.d};
    }
    case K::Div: {
      auto a = dual_eval(*n.lhs, p, var), b = dual_eval(*n.rhs, p, var);
      if (b.v == 0) throw NonGenericPoint();
      return {a.v / b.v, (a.d * b.v - a.v * b.d) / (b.v * b.v)};
    }
    case K::Pow: {
      auto a = dual_eval(*n.lhs, p, var);
      long e = n.exponent;
      if (e < 0) {
        if (a.v == 0) throw NonGenericPoint();
        a = {1 / a.v, -a.d / (a.v * a.v)};
        e = -e;
      }
      Dual r{1, 0};
      for (long i = 0; i < e; ++i) r = {r.v * a.v, r.d * a.v + r.v * a.d};
      return r;
    }
  }
  return {0, 0};
}

inline mpq_class tree_eval(const ExprTree& t, const Point& p) { return dual_eval(t.root(), p, kMaxVars).v; }

/// Random expression text over the given names.
class ExprGen {
 public:
  explicit ExprGen(std::uint64_t seed) : rng_(seed) {}

  std::string text(const std::vector<std::string>& names, int depth) {
    if (depth <= 0 || pick(4) == 0) return leaf(names);
    switch (pick(6)) {
      case 0: return "(" + text(names, depth - 1) + " + " + text(names, depth - 1) + ")";
      case 1: return "(" + text(names, depth - 1) + " - " + text(names, depth - 1) + ")";
      case 2:
      case 3: return text(names, depth - 1) + "*" + text(names, depth - 1);
      case 4: return "(" + text(names, depth - 1) + ")/(" + text(names, depth - 1) + ")";
      default: return "(" + text(names, depth - 1) + ")^" + std::to_string(pick(3));
    }
  }

  /// Random polynomial-ish entry with few terms, suitable for vector fields.
  std::string entry(const std::vector<std::string>& names, int max_terms = 2, int max_deg = 2) {
    int terms = pick(max_terms + 1);
    if (terms == 0) return "0";
    std::string out;
    for (int t = 0; t < terms; ++t) {
      long c = static_cast<long>(pick(5)) - 2;
      if (c == 0) c = 1;
      std::string term = std::to_string(c);
      int d = pick(max_deg + 1);
      for (int i = 0; i < d; ++i) term += "*" + names[pick(static_cast<int>(names.size()))];
      out += (t ? " + " : "") + term;
    }
    return out;
  }

  int pick(int n) { return std::uniform_int_distribution<int>(0, n - 1)(rng_); }

  std::mt19937_64& rng() { return rng_; }

 private:
  std::string leaf(const std::vector<std::string>& names) {
    switch (pick(3)) {
      case 0: return std::to_string(pick(7) + 1);
      case 1: return std::to_string(pick(9) + 1) + "/" + std::to_string(pick(5) + 2);
      default: return names[pick(static_cast<int>(names.size()))];
    }
  }

  std::mt19937_64 rng_;
};

/// Random point with small rational coordinates (independent of the library sampler).
inline Point random_point(std::mt19937_64& rng, std::size_t n) {
  Point p;
  for (std::size_t i = 0; i < n; ++i) {
    mpq_class q(static_cast<long>(rng() % 2001) - 1000, static_cast<long>(rng() % 97) + 1);
    q.canonicalize();
    p.push_back(q);
  }
  return p;
}

inline VectorField random_field(ExprGen& gen, const std::vector<std::string>& names, int max_terms = 2,
                                int max_deg = 2) {
  VectorField v;
  for (std::size_t i = 0; i < names.size(); ++i) v.push_back(parse_normalized(gen.entry(names, max_terms, max_deg), names));
  return v;
}

/// Random rational field: polynomial entries, some divided by a random linear form.
inline VectorField random_rational_field(ExprGen& gen, const std::vector<std::string>& names) {
  VectorField v = random_field(gen, names);
  Expr den = parse_normalized("1 + " + gen.entry(names, 1, 1), names);
  if (den.is_zero()) den = Expr(1);
  for (auto& e : v)
    if (gen.pick(3) == 0) e = e / den;
  return v;
}

/// Random two-input system of dimension n: a perturbed double chain with
/// occasional couplings in the control fields and rational drift entries.
inline ControlSystem random_system(std::mt19937_64& rng, std::size_t n) {
  auto pick = [&](std::size_t m) { return static_cast<std::size_t>(rng() % m); };
  auto poly = [&](int terms, int deg) {
    Expr e;
    int nt = static_cast<int>(pick(static_cast<std::size_t>(terms) + 1));
    for (int t = 0; t < nt; ++t) {
      Expr m(static_cast<long>(pick(5)) - 2);
      int d = static_cast<int>(pick(static_cast<std::size_t>(deg) + 1));
      for (int j = 0; j < d; ++j) m = m * Expr::variable(pick(n));
      e += m;
    }
    return e;
  };
  ControlSystem sys;
  sys.name = "random";
  sys.states = xs(n);
  sys.f = VectorField(n);
  for (std::size_t i = 0; i + 2 < n; ++i) {
    sys.f[i] = poly(2, 2);
    if (pick(2) && i + 1 < n) sys.f[i] += Expr::variable(i + 1);
  }
  if (pick(3) == 0) sys.f[n - 2] = poly(1, 1);
  if (pick(4) == 0) {
    std::size_t i = pick(n - 2);
    sys.f[i] = sys.f[i] / (Expr(2) + Expr::variable(pick(n)));
  }
  sys.g1 = coordinate_field(n, n - 2);
  sys.g2 = coordinate_field(n, n - 1);
  if (pick(2)) sys.g1[pick(n - 2)] = poly(1, 1);
  if (pick(3) == 0) sys.g2[pick(n - 2)] = poly(1, 1);
  return sys;
}

struct SweepResult {
  std::size_t systems = 0, with_k = 0, with_h = 0, prolonged = 0, skipped = 0, proper = 0;
  std::vector<std::string> failures;
};

/// Structural invariants over `count` random systems of dimension 3 to 6.
inline SweepResult property_sweep(std::size_t count, std::uint64_t seed) {
  SweepResult res;
  std::mt19937_64 rng(seed);
  const Sampler s;
  for (std::size_t it = 0; it < count; ++it) {
    const std::size_t n = 3 + static_cast<std::size_t>(rng() % 4);
    ControlSystem sys = random_system(rng, n);
    ++res.systems;
    auto fail = [&](const std::string& what) {
      res.failures.push_back("system " + std::to_string(it) + ": " + what);
    };
    try {
      if (!is_zero_field(lie_bracket(sys.f, sys.g1) + lie_bracket(sys.g1, sys.f))) fail("antisymmetry");
      auto jac = lie_bracket(sys.f, lie_bracket(sys.g1, sys.g2)) + lie_bracket(sys.g1, lie_bracket(sys.g2, sys.f)) +
                 lie_bracket(sys.g2, lie_bracket(sys.f, sys.g1));
      if (!is_zero_field(jac)) fail("Jacobi identity");
      try {
        validate_system(sys, s);
      } catch (const AlgebraError&) {
        ++res.skipped;
        continue;
      }
      LinearizabilitySequence seq(sys, s);
      Distribution D0 = seq.level(0);
      auto cl = involutive_closure(D0, s).closure;
      auto cl2 = involutive_closure(cl, s).closure;
      if (cl2.rank() != cl.rank() || !cl.contains(cl2) || !cl2.contains(cl)) fail("closure not idempotent");
      auto k = non_involutivity_index(seq);
      if (!k) continue;
      ++res.with_k;
      auto c = classify(sys, seq, *k, s);
      if (!is_involutive(characteristic(c.level, s))) fail("characteristic not involutive");
      if (!is_involutive(characteristic(c.bracketed, s))) fail("characteristic not involutive");
      // exactly one case predicate holds
      const std::size_t d = c.level.rank();
      const bool two = *k >= 1 && c.r_two && *c.r_two > 0;
      const bool gains_one = !two && c.closure_rank == d + 1;
      int hits = 0;
      hits += two;
      hits += gains_one && c.closure.is_full();
      hits += gains_one && !c.closure.is_full();
      hits += !two && !gains_one && c.growth.size() > 2 && c.growth[2] == d + 2;
      hits += !two && !gains_one && !(c.growth.size() > 2 && c.growth[2] == d + 2);
      if (hits != 1) fail("case predicates not mutually exclusive");
      if (two != is_case_two(c.label)) fail("case II label mismatch");
      if (!flatness_necessary_check(c).passed) continue;
      auto hc = construct_h(sys, seq, c, s);
      if (!hc.H) continue;
      ++res.with_h;
      if (c.r > 2) fail("H returned with r > 2");
      if (is_case_two(c.label) && c.r_two != 1u) fail("H returned in case II with r_II != 1");
      auto p = build_prolongation(sys, seq, *k, *hc.H, "v", s);
      LinearizabilitySequence ps(p.system, s);
      for (std::size_t j = 0; j <= *k; ++j)
        if (!is_involutive(ps.level(j))) fail("prolonged D^" + std::to_string(j) + " not involutive");
      if (ps.level(*k).rank() != hc.H->rank() + 1) fail("prolonged D^k rank differs from rk H + 1");
      ++res.prolonged;
    } catch (const GenericityError&) {
      ++res.skipped;
    } catch (const std::exception& e) {
      fail(e.what());
    }
  }
  return res;
}

/// Characteristic of a random distribution against the pointwise oracle at `points` samples.
inline SweepResult characteristic_sweep(std::size_t count, std::size_t points, std::uint64_t seed) {
  SweepResult res;
  ExprGen gen(seed);
  const Sampler s;
  for (std::size_t it = 0; it < count; ++it) {
    const std::size_t n = 4 + static_cast<std::size_t>(gen.pick(2));
    const auto names = xs(n);
    std::vector<VectorField> gens;
    const std::size_t m = 2 + static_cast<std::size_t>(gen.pick(2));
    for (std::size_t i = 0; i < m; ++i) gens.push_back(random_field(gen, names, 2, 1));
    ++res.systems;
    try {
      Distribution D(n, gens, s);
      Distribution C = characteristic(D, s);
      if (C.rank() > 0 && C.rank() < D.rank()) ++res.proper;
      for (std::size_t i = 0; i < points; ++i) {
        Point p = s.point(100 + i, n);
        std::vector<oracle::QVector> sym;
        for (const auto& g : C.frame()) sym.push_back(oracle::eval_field(g, p));
        auto pw = oracle::pointwise_characteristic(D.frame(), p);
        if (pw.size() != C.rank() || !oracle::same_span(pw, sym))
          res.failures.push_back("fixture " + std::to_string(it) + " point " + std::to_string(i));
      }
    } catch (const GenericityError&) {
      ++res.skipped;
    } catch (const NonGenericPoint&) {
      ++res.skipped;
    }
  }
  return res;
}

}  // namespace testing_support

#endif  // LSOPI_TESTS_SUPPORT_HPP
