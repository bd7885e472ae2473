/**
 * @file geometry.hpp
 * @brief Vector fields, distributions and the control-affine filtration.
 */
#ifndef LSOPI_GEOMETRY_HPP
#define LSOPI_GEOMETRY_HPP

#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "lsopi/funlinalg.hpp"

namespace lsopi {

using VectorField = std::vector<Expr>;

inline VectorField zero_field(std::size_t n) { return VectorField(n); }

inline VectorField coordinate_field(std::size_t n, std::size_t i) {
  VectorField v(n);
  v[i] = Expr(1);
  return v;
}

inline bool is_zero_field(const VectorField& v) {
  for (const auto& e : v)
    if (!e.is_zero()) return false;
  return true;
}

inline VectorField operator+(const VectorField& a, const VectorField& b) {
  VectorField r(a.size());
  for (std::size_t i = 0; i < a.size(); ++i) r[i] = a[i] + b[i];
  return r;
}

inline VectorField operator-(const VectorField& a, const VectorField& b) {
  VectorField r(a.size());
  for (std::size_t i = 0; i < a.size(); ++i) r[i] = a[i] - b[i];
  return r;
}

inline VectorField operator*(const Expr& c, const VectorField& v) {
  VectorField r(v.size());
  if (c.is_zero()) return r;
  for (std::size_t i = 0; i < v.size(); ++i)
    if (!v[i].is_zero()) r[i] = c * v[i];
  return r;
}

/// Directional derivative v(h).
inline Expr lie_derivative(const VectorField& v, const Expr& h) {
  Expr acc;
  std::uint32_t sup = h.support();
  for (std::size_t j = 0; j < v.size(); ++j)
    if ((sup >> j & 1u) && !v[j].is_zero()) acc += v[j] * h.diff(j);
  return acc;
}

/// [V, W] = DW * V - DV * W.
inline VectorField lie_bracket(const VectorField& V, const VectorField& W) {
  if (V.size() != W.size()) throw std::invalid_argument("bracket of fields of different dimension");
  VectorField r(V.size());
  for (std::size_t i = 0; i < V.size(); ++i) r[i] = lie_derivative(V, W[i]) - lie_derivative(W, V[i]);
  return r;
}

/// ad_f^q g.
inline VectorField ad(const VectorField& f, VectorField g, unsigned q) {
  for (unsigned i = 0; i < q; ++i) g = lie_bracket(f, g);
  return g;
}

inline VectorField extend_field(const VectorField& v, std::size_t n) {
  VectorField r = v;
  r.resize(n);
  return r;
}

/// Span of vector fields with a cached reduced basis.
class Distribution {
 public:
  Distribution() = default;

  Distribution(std::size_t n, std::vector<VectorField> gens, std::vector<std::string> tags, const Sampler& s)
      : n_(n), gens_(std::move(gens)), tags_(std::move(tags)) {
    if (tags_.size() != gens_.size()) tags_.resize(gens_.size());
    for (const auto& g : gens_)
      if (g.size() != n_) throw std::invalid_argument("generator has wrong dimension");
    basis_ = SpanBasis(n_, gens_);
    confirm_generic_rank(gens_, n_, basis_.rank(), s);
  }

  Distribution(std::size_t n, std::vector<VectorField> gens, const Sampler& s)
      : Distribution(n, gens, std::vector<std::string>(gens.size()), s) {}

  std::size_t dim() const { return n_; }
  std::size_t rank() const { return basis_.rank(); }
  bool is_full() const { return rank() == n_; }
  const std::vector<VectorField>& generators() const { return gens_; }
  const std::vector<std::string>& tags() const { return tags_; }
  const SpanBasis& basis() const { return basis_; }

  /// Independent subset of the generators spanning the distribution.
  std::vector<VectorField> frame() const {
    std::vector<VectorField> out;
    for (std::size_t i : basis_.sources()) out.push_back(gens_[i]);
    return out;
  }
  std::vector<std::string> frame_tags() const {
    std::vector<std::string> out;
    for (std::size_t i : basis_.sources()) out.push_back(tags_[i]);
    return out;
  }

  bool contains(const VectorField& v) const { return basis_.contains(v); }
  VectorField residual(const VectorField& v) const { return basis_.residual(v); }

  bool contains(const Distribution& o) const {
    for (const auto& g : o.frame())
      if (!contains(g)) return false;
    return true;
  }

  /// Adds the fields that are not already in the span.
  Distribution with(const std::vector<VectorField>& extra, const std::vector<std::string>& extra_tags,
                    const Sampler& s) const {
    auto g = frame();
    auto t = frame_tags();
    bool grew = false;
    for (std::size_t i = 0; i < extra.size(); ++i) {
      if (contains(extra[i])) continue;
      g.push_back(extra[i]);
      t.push_back(i < extra_tags.size() ? extra_tags[i] : std::string());
      grew = true;
    }
    if (!grew) return *this;
    return Distribution(n_, std::move(g), std::move(t), s);
  }

 private:
  std::size_t n_ = 0;
  std::vector<VectorField> gens_;
  std::vector<std::string> tags_;
  SpanBasis basis_;
};

inline Distribution sum(const Distribution& a, const Distribution& b, const Sampler& s) {
  return a.with(b.frame(), b.frame_tags(), s);
}

/// base + [A, B].
inline Distribution add_brackets(const Distribution& base, const Distribution& A, const Distribution& B,
                                 const Sampler& s) {
  std::vector<VectorField> extra;
  std::vector<std::string> tags;
  auto fa = A.frame(), fb = B.frame();
  auto ta = A.frame_tags(), tb = B.frame_tags();
  bool same = &A == &B;
  for (std::size_t i = 0; i < fa.size(); ++i)
    for (std::size_t j = same ? i + 1 : 0; j < fb.size(); ++j) {
      auto br = lie_bracket(fa[i], fb[j]);
      if (is_zero_field(br) || base.contains(br)) continue;
      extra.push_back(std::move(br));
      tags.push_back("[" + ta[i] + "," + tb[j] + "]");
    }
  return base.with(extra, tags, s);
}

/// base + [f, D].
inline Distribution add_drift_brackets(const Distribution& base, const VectorField& f, const Distribution& D,
                                       const Sampler& s) {
  std::vector<VectorField> extra;
  std::vector<std::string> tags;
  auto fd = D.frame();
  auto td = D.frame_tags();
  for (std::size_t i = 0; i < fd.size(); ++i) {
    extra.push_back(lie_bracket(f, fd[i]));
    tags.push_back("[f," + td[i] + "]");
  }
  return base.with(extra, tags, s);
}

/// Involutivity checked on pairs of frame generators.
inline bool is_involutive(const Distribution& D) {
  auto fr = D.frame();
  for (std::size_t i = 0; i < fr.size(); ++i)
    for (std::size_t j = i + 1; j < fr.size(); ++j)
      if (!D.contains(lie_bracket(fr[i], fr[j]))) return false;
  return true;
}

struct Closure {
  Distribution closure;
  std::vector<std::size_t> growth;  // ranks of E, E + [E,E], ... up to stabilization
};

/// Smallest involutive distribution containing D, with its growth vector.
inline Closure involutive_closure(const Distribution& D, const Sampler& s) {
  Closure c{D, {D.rank()}};
  while (true) {
    Distribution next = add_brackets(c.closure, c.closure, c.closure, s);
    if (next.rank() == c.closure.rank()) break;
    c.closure = std::move(next);
    c.growth.push_back(c.closure.rank());
  }
  return c;
}

/// Ranks of E, E + [E,E], ... truncated at stabilization or after `depth` entries.
inline std::vector<std::size_t> growth_vector(const Distribution& D, std::size_t depth, const Sampler& s) {
  std::vector<std::size_t> g{D.rank()};
  Distribution cur = D;
  while (g.size() < depth) {
    Distribution next = add_brackets(cur, cur, cur, s);
    if (next.rank() == cur.rank()) break;
    cur = std::move(next);
    g.push_back(cur.rank());
  }
  return g;
}

/// Characteristic distribution {xi in D : [xi, D] in D}.
inline Distribution characteristic(const Distribution& D, const Sampler& s) {
  const std::size_t n = D.dim();
  auto fr = D.frame();
  const std::size_t r = fr.size();
  if (r == 0) return D;
  // w[i][j] = [g_i, g_j] reduced modulo D
  std::vector<std::vector<VectorField>> w(r, std::vector<VectorField>(r, zero_field(n)));
  for (std::size_t i = 0; i < r; ++i)
    for (std::size_t j = i + 1; j < r; ++j) {
      w[i][j] = D.residual(lie_bracket(fr[i], fr[j]));
      w[j][i] = Expr(-1) * w[i][j];
    }
  std::vector<FunVector> eqs;
  for (std::size_t j = 0; j < r; ++j)
    for (std::size_t c = 0; c < n; ++c) {
      FunVector row(r);
      bool nz = false;
      for (std::size_t i = 0; i < r; ++i) {
        row[i] = w[i][j][c];
        nz = nz || !row[i].is_zero();
      }
      if (nz) eqs.push_back(std::move(row));
    }
  std::vector<VectorField> gens;
  std::vector<std::string> tags;
  if (eqs.empty()) return Distribution(n, fr, D.frame_tags(), s);
  auto ker = kernel_basis(FunMatrix::from_rows(eqs, r), s);
  for (const auto& a : ker) {
    VectorField xi = zero_field(n);
    for (std::size_t i = 0; i < r; ++i)
      if (!a[i].is_zero()) xi = xi + a[i] * fr[i];
    gens.push_back(std::move(xi));
    tags.push_back("char");
  }
  Distribution out(n, std::move(gens), std::move(tags), s);
  if (!is_involutive(out)) throw AlgebraError("characteristic distribution is not involutive");
  return out;
}

/// Corank of a inside b; throws when a is not contained in b.
inline std::size_t corank(const Distribution& a, const Distribution& b) {
  if (!b.contains(a)) throw AlgebraError("corank of a distribution that is not a subdistribution");
  return b.rank() - a.rank();
}

/// Control-affine system x' = f + u1 g1 + u2 g2.
struct ControlSystem {
  std::string name;
  std::vector<std::string> states;
  VectorField f, g1, g2;

  std::size_t dim() const { return states.size(); }
};

/// D^j = span{ad_f^q g_i : q <= j}, computed until it stops growing.
class LinearizabilitySequence {
 public:
  LinearizabilitySequence(const ControlSystem& sys, const Sampler& s) : n_(sys.dim()) {
    ad_[0].push_back(sys.g1);
    ad_[1].push_back(sys.g2);
    levels_.push_back(Distribution(n_, {sys.g1, sys.g2}, {"g1", "g2"}, s));
    std::size_t j = 0;
    while (!levels_.back().is_full() && j + 1 < n_) {
      ++j;
      ad_[0].push_back(lie_bracket(sys.f, ad_[0].back()));
      ad_[1].push_back(lie_bracket(sys.f, ad_[1].back()));
      std::string p = "ad_f^" + std::to_string(j);
      Distribution next = levels_.back().with({ad_[0].back(), ad_[1].back()}, {p + " g1", p + " g2"}, s);
      bool grew = next.rank() > levels_.back().rank();
      levels_.push_back(std::move(next));
      if (!grew) break;
    }
    f_ = sys.f;
  }

  std::size_t dim() const { return n_; }
  /// Number of computed levels; D^j for larger j equals the last one.
  std::size_t computed() const { return levels_.size(); }

  const Distribution& level(std::size_t j) const { return levels_[std::min(j, levels_.size() - 1)]; }

  /// ad_f^q g_i, i in {0, 1}.
  const VectorField& ad_field(std::size_t i, std::size_t q) const {
    auto& chain = ad_[i];
    while (chain.size() <= q) chain.push_back(lie_bracket(f_, chain.back()));
    return chain[q];
  }

  std::vector<std::size_t> ranks() const {
    std::vector<std::size_t> r;
    for (const auto& d : levels_) r.push_back(d.rank());
    return r;
  }

 private:
  std::size_t n_;
  VectorField f_;
  std::vector<Distribution> levels_;
  mutable std::vector<VectorField> ad_[2];
};

/// First j whose D^j is not involutive.
inline std::optional<std::size_t> non_involutivity_index(const LinearizabilitySequence& seq) {
  for (std::size_t j = 0; j < seq.computed(); ++j)
    if (!is_involutive(seq.level(j))) return j;
  return std::nullopt;
}

/// Smallest j with rk D^j = n.
inline std::optional<std::size_t> full_rank_index(const LinearizabilitySequence& seq) {
  for (std::size_t j = 0; j < seq.computed(); ++j)
    if (seq.level(j).is_full()) return j;
  return std::nullopt;
}

/// Static feedback linearizability test: every D^j involutive and some D^j = TX.
inline bool is_sfl(const ControlSystem& sys, const Sampler& s) {
  LinearizabilitySequence seq(sys, s);
  return !non_involutivity_index(seq) && full_rank_index(seq).has_value();
}

}  // namespace lsopi

#endif  // LSOPI_GEOMETRY_HPP
