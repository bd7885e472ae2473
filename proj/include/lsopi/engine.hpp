/**
 * @file engine.hpp
 * @brief Linearizability by one-fold prolongations: case analysis and the step loop.
 */
#ifndef LSOPI_ENGINE_HPP
#define LSOPI_ENGINE_HPP

#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "lsopi/geometry.hpp"

namespace lsopi {

enum class Verdict { Lsopi, NotLsopi, NotFlat, Inconclusive };

inline std::string to_string(Verdict v) {
  switch (v) {
    case Verdict::Lsopi: return "LSOPI";
    case Verdict::NotLsopi: return "NOT_LSOPI";
    case Verdict::NotFlat: return "NOT_FLAT";
    case Verdict::Inconclusive: return "INCONCLUSIVE";
  }
  return "?";
}

enum class CaseLabel {
  I,
  II_A,       // r = 2
  II_B,       // r = 1
  II_Other,   // r outside {1, 2}
  III_C1,
  III_C2,
  III_C3,
  III_C4,
  III_C5_Single,  // rk D^{k+1} = 2k+3
  III_C5_Double,  // rk D^{k+1} = 2k+4
  III_C6,
};

inline std::string to_string(CaseLabel c) {
  switch (c) {
    case CaseLabel::I: return "I";
    case CaseLabel::II_A: return "II_A";
    case CaseLabel::II_B: return "II_B";
    case CaseLabel::II_Other: return "II_NO_H";
    case CaseLabel::III_C1: return "III_C1";
    case CaseLabel::III_C2: return "III_C2";
    case CaseLabel::III_C3: return "III_C3";
    case CaseLabel::III_C4: return "III_C4";
    case CaseLabel::III_C5_Single: return "III_C5_PRIME";
    case CaseLabel::III_C5_Double: return "III_C5_DOUBLE_PRIME";
    case CaseLabel::III_C6: return "III_C6";
  }
  return "?";
}

inline bool is_case_two(CaseLabel c) {
  return c == CaseLabel::II_A || c == CaseLabel::II_B || c == CaseLabel::II_Other;
}

/// Structural data of the first noninvolutive distribution D^k.
struct Classification {
  CaseLabel label = CaseLabel::I;
  std::size_t k = 0;
  std::size_t r = 0;                   // cork(D^k in D^k + [D^k, D^k])
  std::optional<std::size_t> r_two;    // cork(D^k in D^k + [D^{k-1}, D^k]), k >= 1
  std::vector<std::size_t> growth;     // growth vector of D^k
  std::size_t closure_rank = 0;
  std::optional<std::size_t> drift_rank;  // rk(closure + [f, D^k]) when the closure gains one
  std::size_t next_rank = 0;              // rk D^{k+1}
  Distribution lower;                      // D^{k-1} (zero distribution when k = 0)
  Distribution level;                      // D^k
  Distribution bracketed;                  // D^k + [D^k, D^k]
  Distribution closure;
  Distribution next;                       // D^{k+1}
};

inline Distribution zero_distribution(std::size_t n, const Sampler& s) { return Distribution(n, {}, {}, s); }

inline Classification classify(const ControlSystem& sys, const LinearizabilitySequence& seq, std::size_t k,
                               const Sampler& s) {
  const std::size_t n = sys.dim();
  Classification c;
  c.k = k;
  c.level = seq.level(k);
  c.lower = k == 0 ? zero_distribution(n, s) : seq.level(k - 1);
  const std::size_t d = c.level.rank();
  std::string p = "ad_f^" + std::to_string(k + 1);
  c.next = c.level.with({seq.ad_field(0, k + 1), seq.ad_field(1, k + 1)}, {p + " g1", p + " g2"}, s);
  c.next_rank = c.next.rank();
  c.bracketed = add_brackets(c.level, c.level, c.level, s);
  c.r = c.bracketed.rank() - d;
  auto cl = involutive_closure(c.level, s);
  c.closure = cl.closure;
  c.growth = cl.growth;
  c.closure_rank = c.closure.rank();
  if (k >= 1) {
    Distribution mixed = add_brackets(c.level, c.lower, c.level, s);
    c.r_two = mixed.rank() - d;
    if (*c.r_two > 0) {
      c.label = c.r == 2 ? CaseLabel::II_A : c.r == 1 ? CaseLabel::II_B : CaseLabel::II_Other;
      return c;
    }
  }
  if (c.closure_rank == d + 1) {
    if (c.closure.is_full()) {
      c.label = CaseLabel::III_C1;
      return c;
    }
    c.drift_rank = add_drift_brackets(c.closure, sys.f, c.level, s).rank();
    std::size_t extra = *c.drift_rank - (d + 1);
    if (extra == 0) c.label = CaseLabel::III_C4;
    else if (extra == 1) c.label = c.next_rank == d + 1 ? CaseLabel::III_C5_Single : CaseLabel::III_C5_Double;
    else c.label = CaseLabel::III_C6;
    return c;
  }
  c.label = c.growth.size() > 2 && c.growth[2] == d + 2 ? CaseLabel::III_C2 : CaseLabel::III_C3;
  return c;
}

/// Outcome of the necessary flatness test at the first noninvolutive level.
struct FlatnessCheck {
  bool passed = true;
  std::string reason;
};

inline FlatnessCheck flatness_necessary_check(const Classification& c) {
  if (corank(c.lower, c.level) == 1)
    return {false, "cork(D^{k-1} in D^k) = 1 with D^k noninvolutive"};
  if (c.label == CaseLabel::III_C4)
    return {false, "closure of D^k is f-invariant and proper: not strongly accessible"};
  return {};
}

/// Result of the corank-one involutive subdistribution construction.
struct HConstruction {
  std::optional<Distribution> H;
  bool forced = true;  // false when the choice was not dictated by the theory
  bool special = false;
  bool c5a = false;  // rk(closure + [f, closure]) = rk D^k + 3
  std::vector<std::string> notes;
};

namespace detail {

inline std::string yes_no(bool b) { return b ? "yes" : "no"; }

/// True when D^{k-1} + span{xi} is a valid corank-one involutive subdistribution of D^k.
inline bool valid_h(const Distribution& H, const Classification& c) {
  return H.rank() == c.lower.rank() + 1 && H.contains(c.lower) && c.level.contains(H) && is_involutive(H);
}

/// First candidate D^{k-1} + span{b1 ad^k g1 + b2 ad^k g2} in a fixed order that is involutive.
inline std::optional<Distribution> canonical_h(const ControlSystem& sys, const LinearizabilitySequence& seq,
                                               const Classification& c, const Sampler& s,
                                               std::vector<std::string>& notes) {
  const std::size_t n = sys.dim();
  std::vector<std::pair<Expr, Expr>> cands = {{Expr(1), Expr(0)}, {Expr(0), Expr(1)}};
  for (long num : {1L, -1L, 2L, -2L}) cands.push_back({Expr(1), Expr(num)});
  cands.push_back({Expr(1), Expr(mpq_class(1, 2))});
  cands.push_back({Expr(1), Expr(mpq_class(-1, 2))});
  for (std::size_t i = 0; i < n; ++i) cands.push_back({Expr(1), Expr::variable(i)});
  for (std::size_t i = 0; i < n; ++i) cands.push_back({Expr::variable(i), Expr(1)});
  const auto& X1 = seq.ad_field(0, c.k);
  const auto& X2 = seq.ad_field(1, c.k);
  for (const auto& [b1, b2] : cands) {
    VectorField xi = b1 * X1 + b2 * X2;
    if (is_zero_field(xi)) continue;
    Distribution H = c.lower.with({xi}, {"h"}, s);
    if (valid_h(H, c)) {
      notes.push_back("canonical H from combination (" + b1.str(sys.states) + ", " + b2.str(sys.states) + ")");
      return H;
    }
  }
  notes.push_back("no involutive candidate in the canonical family");
  return std::nullopt;
}

}  // namespace detail

/// Vector field g~2 in D^0 with ad_f^{k+1} g~2 in the closure of D^k.
inline VectorField find_tilde_g2(const ControlSystem& sys, const LinearizabilitySequence& seq,
                                 const Classification& c) {
  auto R1 = c.closure.residual(seq.ad_field(0, c.k + 1));
  auto R2 = c.closure.residual(seq.ad_field(1, c.k + 1));
  if (is_zero_field(R1)) return sys.g1;
  std::size_t idx = 0;
  while (R1[idx].is_zero()) ++idx;
  Expr alpha = R2[idx] / R1[idx];
  if (!is_zero_field(R2 - alpha * R1)) throw AlgebraError("drift brackets are not dependent modulo the closure");
  return sys.g2 - alpha * sys.g1;
}

/// Quantities deciding whether the special choice is forced.
struct ForcedCheck {
  std::size_t defect = 0;  // cork(D^{k+1} in D^{k+1} + [D^k, D^{k+1}])
  bool bracket_condition = false;
  bool forced = false;
};

inline ForcedCheck special_choice_check(const ControlSystem& sys, const LinearizabilitySequence& seq,
                                         const Classification& c, const VectorField& tg2, const Sampler& s) {
  ForcedCheck f;
  if (c.k == 0) return f;
  Distribution grown = add_brackets(c.next, c.level, c.next, s);
  f.defect = grown.rank() - c.next.rank();
  VectorField top = ad(sys.f, tg2, static_cast<unsigned>(c.k));
  f.bracket_condition = true;
  for (const auto& g : c.next.frame())
    if (!c.next.contains(lie_bracket(top, g))) {
      f.bracket_condition = false;
      break;
    }
  f.forced = f.defect == 2 || (f.defect == 1 && f.bracket_condition);
  (void)seq;
  return f;
}

inline HConstruction construct_h(const ControlSystem& sys, const LinearizabilitySequence& seq,
                                 const Classification& c, const Sampler& s) {
  using detail::yes_no;
  HConstruction out;
  const std::size_t base = c.lower.rank();
  auto& notes = out.notes;
  switch (c.label) {
    case CaseLabel::II_A: {
      Distribution ch = characteristic(c.level, s);
      bool a1 = c.r_two && *c.r_two == 1;
      bool a2 = ch.rank() + 1 == base;
      Distribution H = add_drift_brackets(c.lower, sys.f, ch, s);
      bool a3 = H.rank() == base + 1;
      bool a4 = is_involutive(H);
      notes.push_back("A1 r_II = 1: " + yes_no(a1));
      notes.push_back("A2 rk C(D^k) = " + std::to_string(ch.rank()) + ": " + yes_no(a2));
      notes.push_back("A3 rk(D^{k-1} + [f, C(D^k)]) = " + std::to_string(H.rank()) + ": " + yes_no(a3));
      notes.push_back("A4 involutive: " + yes_no(a4));
      if (a1 && a2 && a3 && a4 && detail::valid_h(H, c)) out.H = H;
      return out;
    }
    case CaseLabel::II_B: {
      Distribution ch = characteristic(c.level, s);
      bool b1 = ch.rank() == base;
      Distribution H = sum(c.lower, ch, s);
      bool b2 = H.rank() == base + 1;
      bool b3 = is_involutive(H);
      notes.push_back("B1 rk C(D^k) = " + std::to_string(ch.rank()) + ": " + yes_no(b1));
      notes.push_back("B2 rk(D^{k-1} + C(D^k)) = " + std::to_string(H.rank()) + ": " + yes_no(b2));
      notes.push_back("B3 involutive: " + yes_no(b3));
      if (b1 && b2 && b3 && detail::valid_h(H, c)) out.H = H;
      return out;
    }
    case CaseLabel::II_Other:
      notes.push_back("r = " + std::to_string(c.r) + " outside {1, 2}");
      return out;
    case CaseLabel::III_C1:
      out.H = detail::canonical_h(sys, seq, c, s, notes);
      return out;
    case CaseLabel::III_C2: {
      Distribution H = characteristic(c.bracketed, s);
      if (detail::valid_h(H, c)) {
        out.H = H;
      } else {
        notes.push_back("C(D^k + [D^k, D^k]) of rank " + std::to_string(H.rank()) +
                        " is not a corank-one involutive subdistribution of D^k");
      }
      return out;
    }
    case CaseLabel::III_C5_Double: {
      VectorField tg2 = find_tilde_g2(sys, seq, c);
      VectorField top = ad(sys.f, tg2, static_cast<unsigned>(c.k));
      Distribution E = c.lower.with({top}, {"ad_f^k g~2"}, s);
      bool inv = is_involutive(E);
      std::size_t fr = add_drift_brackets(c.closure, sys.f, c.closure, s).rank();
      out.c5a = fr == c.level.rank() + 3;
      notes.push_back("special candidate involutive: " + yes_no(inv));
      notes.push_back("rk(closure + [f, closure]) = " + std::to_string(fr) + " (C5a " +
                      yes_no(fr == c.level.rank() + 3) + ")");
      ForcedCheck fc = special_choice_check(sys, seq, c, tg2, s);
      if (c.k >= 1) {
        notes.push_back("defect cork(D^{k+1} in D^{k+1} + [D^k, D^{k+1}]) = " + std::to_string(fc.defect));
        notes.push_back("[ad_f^k g~2, D^{k+1}] in D^{k+1}: " + yes_no(fc.bracket_condition));
      }
      out.forced = fc.forced;
      if (inv && detail::valid_h(E, c)) {
        out.H = E;
        out.special = true;
        notes.push_back(fc.forced ? "special choice is forced" : "special choice is not forced");
        return out;
      }
      if (fc.forced) {
        notes.push_back("special candidate not involutive while forced: not LSOPI");
        return out;
      }
      out.H = detail::canonical_h(sys, seq, c, s, notes);
      notes.push_back("fallback choice; run is not conclusive beyond this step");
      return out;
    }
    case CaseLabel::III_C3:
    case CaseLabel::III_C4:
    case CaseLabel::III_C5_Single:
    case CaseLabel::III_C6:
    case CaseLabel::I:
      return out;
  }
  return out;
}

/// Column (b1, b2) with ad_f^k (b1 g1 + b2 g2) in H and outside D^{k-1}.
inline std::pair<Expr, Expr> extract_beta_column(const ControlSystem& sys, const LinearizabilitySequence& seq,
                                                 std::size_t k, const Distribution& H, const Sampler& s) {
  const std::size_t n = sys.dim();
  auto R1 = H.residual(seq.ad_field(0, k));
  auto R2 = H.residual(seq.ad_field(1, k));
  auto ker = kernel_basis(FunMatrix::from_columns({R1, R2}, n), s);
  if (ker.size() != 1) throw AlgebraError("H does not select a unique direction in D^k modulo D^{k-1}");
  Expr b1 = ker[0][0], b2 = ker[0][1];
  VectorField g = b1 * sys.g1 + b2 * sys.g2;
  VectorField top = ad(sys.f, g, static_cast<unsigned>(k));
  if (!H.contains(top)) throw AlgebraError("beta column does not map into H");
  if (k >= 1 && seq.level(k - 1).contains(top)) throw AlgebraError("beta column degenerates into D^{k-1}");
  return {b1, b2};
}

/// Lineage of one prolongation.
struct Prolongation {
  ControlSystem system;
  Expr beta1, beta2;           // second column of the feedback matrix
  Expr first1, first2;         // first column
  std::string control;         // prolonged control in terms of the old inputs
};

inline std::string fresh_name(const std::vector<std::string>& taken, std::string base) {
  while (std::find(taken.begin(), taken.end(), base) != taken.end()) base += "_";
  return base;
}

/// Prolongs u~1 = b2 u1 - b1 u2 where (b1, b2) is the given feedback column; no checks.
inline Prolongation prolong(const ControlSystem& sys, const Expr& b1, const Expr& b2, const std::string& name) {
  const std::size_t n = sys.dim();
  Prolongation p;
  p.beta1 = b1;
  p.beta2 = b2;
  if (!b2.is_zero()) {
    p.first1 = Expr(1);
    p.first2 = Expr(0);
  } else {
    if (b1.is_zero()) throw AlgebraError("zero feedback column");
    p.first1 = Expr(0);
    p.first2 = Expr(1);
  }
  VectorField gt1 = p.first1 * sys.g1 + p.first2 * sys.g2;
  VectorField gt2 = b1 * sys.g1 + b2 * sys.g2;
  ControlSystem& q = p.system;
  q.name = sys.name;
  q.states = sys.states;
  q.states.push_back(fresh_name(sys.states, name));
  Expr u = Expr::variable(n);
  q.f = extend_field(sys.f, n + 1);
  for (std::size_t i = 0; i < n; ++i)
    if (!gt1[i].is_zero()) q.f[i] += u * gt1[i];
  q.g1 = coordinate_field(n + 1, n);
  q.g2 = extend_field(gt2, n + 1);
  // u~1 in terms of the old inputs, up to the nonzero factor det(beta)
  std::vector<std::string> names = sys.states;
  names.push_back("u1");
  names.push_back("u2");
  Expr ctl = b2 * Expr::variable(n) - b1 * Expr::variable(n + 1);
  p.control = ctl.str(names);
  return p;
}

/// Prolongation defined by H with its structural post-conditions verified.
inline Prolongation build_prolongation(const ControlSystem& sys, const LinearizabilitySequence& seq,
                                       std::size_t k, const Distribution& H, const std::string& name,
                                       const Sampler& s) {
  auto [b1, b2] = extract_beta_column(sys, seq, k, H, s);
  Prolongation p = prolong(sys, b1, b2, name);
  const std::size_t n = sys.dim();
  LinearizabilitySequence ps(p.system, s);
  VectorField gt2 = b1 * sys.g1 + b2 * sys.g2;
  VectorField top = gt2;
  std::vector<VectorField> hj_gens;
  for (std::size_t j = 0; j <= k; ++j) {
    if (j > 0) top = lie_bracket(sys.f, top);
    // H^j = D^{j-1} + span{ad_f^j g~2}, lifted with the new coordinate direction
    std::vector<VectorField> gens = {coordinate_field(n + 1, n), extend_field(top, n + 1)};
    if (j > 0)
      for (const auto& g : seq.level(j - 1).frame()) gens.push_back(extend_field(g, n + 1));
    Distribution expected(n + 1, gens, s);
    const Distribution& got = ps.level(j);
    if (!(got.rank() == expected.rank() && got.contains(expected) && is_involutive(got)))
      throw AlgebraError("prolongation post-condition failed at level " + std::to_string(j));
  }
  if (ps.level(k).rank() != H.rank() + 1) throw AlgebraError("prolongation rank mismatch at level k");
  return p;
}

/// Two-input system x' = F(x, u1, u2), F given over the states followed by u1, u2.
struct GeneralSystem {
  std::string name;
  std::vector<std::string> states;
  std::vector<Expr> F;
};

/// Control-affine extension with u1, u2 appended as states and driven by new inputs.
inline ControlSystem affinize(const GeneralSystem& g, const Sampler& s) {
  const std::size_t n = g.states.size();
  if (g.F.size() != n) throw AlgebraError("F must have one entry per state");
  std::vector<FunVector> du(2, FunVector(n));
  for (std::size_t i = 0; i < n; ++i) {
    du[0][i] = g.F[i].diff(n);
    du[1][i] = g.F[i].diff(n + 1);
  }
  if (generic_rank(FunMatrix::from_columns(du, n), s) != 2) throw AlgebraError("dF/du has rank below 2");
  ControlSystem sys;
  sys.name = g.name;
  sys.states = g.states;
  sys.states.push_back(fresh_name(g.states, "u1"));
  sys.states.push_back(fresh_name(sys.states, "u2"));
  sys.f = VectorField(n + 2);
  for (std::size_t i = 0; i < n; ++i) sys.f[i] = g.F[i];
  sys.g1 = coordinate_field(n + 2, n);
  sys.g2 = coordinate_field(n + 2, n + 1);
  return sys;
}

/// Checks dimensions and that g1, g2 are generically independent.
inline void validate_system(const ControlSystem& sys, const Sampler& s) {
  const std::size_t n = sys.dim();
  if (n < 2) throw AlgebraError("at least two states are required");
  if (n > kMaxVars) throw AlgebraError("too many states");
  if (sys.f.size() != n || sys.g1.size() != n || sys.g2.size() != n)
    throw AlgebraError("f, g1 and g2 must have one entry per state");
  if (generic_rank(FunMatrix::from_columns({sys.g1, sys.g2}, n), s) != 2)
    throw AlgebraError("g1 and g2 are not independent");
}

/// One iteration of the algorithm.
struct Step {
  std::size_t index = 0;
  std::size_t n = 0;
  std::optional<std::size_t> k;
  std::string label;
  std::optional<std::size_t> r, r_two;
  std::vector<std::size_t> growth;
  std::optional<std::size_t> closure_rank;
  std::vector<std::size_t> ranks;  // rk D^j, j = 0, 1, ...
  std::vector<std::vector<std::string>> h_generators;
  std::optional<std::pair<std::string, std::string>> beta;
  std::string prolonged_control;
  std::vector<std::string> notes;
};

struct RunOptions {
  std::optional<std::size_t> max_steps;
  SamplerConfig sampler{};
};

struct Report {
  std::string name;
  Verdict verdict = Verdict::Inconclusive;
  std::optional<std::size_t> ell;
  bool conclusive = true;
  std::optional<std::size_t> failing_step;
  std::string reason;
  SamplerConfig sampler{};
  std::vector<Step> steps;
  ControlSystem final_system;
};

inline std::vector<std::vector<std::string>> field_strings(const Distribution& D,
                                                           const std::vector<std::string>& names) {
  std::vector<std::vector<std::string>> out;
  for (const auto& g : D.frame()) {
    std::vector<std::string> v;
    for (const auto& e : g) v.push_back(e.str(names));
    out.push_back(std::move(v));
  }
  return out;
}

inline Report run_lsopi(const ControlSystem& input, const RunOptions& opt = {}) {
  const Sampler s(opt.sampler);
  Report rep;
  rep.name = input.name;
  rep.sampler = opt.sampler;
  const std::size_t limit = opt.max_steps.value_or(input.dim());
  ControlSystem sys = input;
  std::optional<std::size_t> prev_k;
  bool conclusive = true;
  auto finish = [&](Verdict v, std::size_t step, std::string reason) {
    if (v == Verdict::NotLsopi && !conclusive) v = Verdict::Inconclusive;
    rep.verdict = v;
    rep.conclusive = v != Verdict::Inconclusive;
    if (v != Verdict::Lsopi) rep.failing_step = step;
    rep.reason = std::move(reason);
    rep.final_system = sys;
    return rep;
  };
  for (std::size_t i = 0;; ++i) {
    Step st;
    st.index = i;
    st.n = sys.dim();
    LinearizabilitySequence seq(sys, s);
    st.ranks = seq.ranks();
    if (seq.level(0).rank() != 2) throw AlgebraError("control vector fields are dependent");
    auto k = non_involutivity_index(seq);
    if (!k) {
      st.label = to_string(CaseLabel::I);
      auto rho = full_rank_index(seq);
      rep.steps.push_back(st);
      if (rho) {
        rep.ell = i;
        return finish(Verdict::Lsopi, i, "static feedback linearizable after " + std::to_string(i) +
                                             " prolongation(s)");
      }
      return finish(Verdict::NotFlat, i, "all D^j involutive but none equals TX: not controllable");
    }
    if (prev_k && *k <= *prev_k) throw AlgebraError("noninvolutivity index did not increase");
    prev_k = k;
    st.k = k;
    if (i >= limit) {
      conclusive = false;
      return finish(Verdict::Inconclusive, i, "step cap exceeded: internal inconsistency");
    }
    Classification c = classify(sys, seq, *k, s);
    st.label = to_string(c.label);
    st.r = c.r;
    st.r_two = c.r_two;
    st.growth = c.growth;
    st.closure_rank = c.closure_rank;
    FlatnessCheck fc = flatness_necessary_check(c);
    if (!fc.passed) {
      st.notes.push_back(fc.reason);
      rep.steps.push_back(st);
      return finish(Verdict::NotFlat, i, fc.reason);
    }
    HConstruction hc = construct_h(sys, seq, c, s);
    for (auto& nte : hc.notes) st.notes.push_back(nte);
    if (!hc.H) {
      if (c.label == CaseLabel::III_C1) {
        // every involutive choice works here; only the explicit construction is missing
        rep.ell = i + 1;
        st.notes.push_back("H not constructed explicitly");
        rep.steps.push_back(st);
        return finish(Verdict::Lsopi, i, "case C1: one prolongation suffices");
      }
      rep.steps.push_back(st);
      return finish(Verdict::NotLsopi, i, "no admissible involutive subdistribution in case " + st.label);
    }
    if (!hc.forced) conclusive = false;
    st.h_generators = field_strings(*hc.H, sys.states);
    Prolongation p = build_prolongation(sys, seq, *k, *hc.H, "up" + std::to_string(i), s);
    if (hc.special && hc.c5a) {
      // both special conditions: D_p^{k+1} involutive with a corank-two jump to D_p^{k+2}
      LinearizabilitySequence ps(p.system, s);
      const auto& up = ps.level(*k + 1);
      if (!is_involutive(up) || ps.level(*k + 2).rank() != up.rank() + 2)
        throw AlgebraError("special prolongation post-condition failed");
      st.notes.push_back("special prolongation: D^{k+1} involutive, corank two to D^{k+2}");
    }
    st.beta = std::make_pair(p.beta1.str(sys.states), p.beta2.str(sys.states));
    st.prolonged_control = p.control;
    rep.steps.push_back(st);
    sys = p.system;
  }
}

}  // namespace lsopi

#endif  // LSOPI_ENGINE_HPP
