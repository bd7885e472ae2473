/**
 * @file oracle.hpp
 * @brief Independent cross-checks: brute-force prolongation search and pointwise linear algebra.
 */
#ifndef LSOPI_ORACLE_HPP
#define LSOPI_ORACLE_HPP

#include <deque>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "lsopi/engine.hpp"

namespace lsopi::oracle {

using QVector = std::vector<mpq_class>;
using QMatrix = std::vector<QVector>;

/// Reduced row echelon form in place; returns pivot columns.
inline std::vector<std::size_t> rref(QMatrix& m) {
  std::vector<std::size_t> piv;
  if (m.empty()) return piv;
  const std::size_t cols = m[0].size();
  std::size_t row = 0;
  for (std::size_t c = 0; c < cols && row < m.size(); ++c) {
    std::size_t p = row;
    while (p < m.size() && m[p][c] == 0) ++p;
    if (p == m.size()) continue;
    std::swap(m[p], m[row]);
    mpq_class inv = 1 / m[row][c];
    for (auto& x : m[row]) x *= inv;
    for (std::size_t r = 0; r < m.size(); ++r) {
      if (r == row || m[r][c] == 0) continue;
      mpq_class f = m[r][c];
      for (std::size_t k = c; k < cols; ++k) m[r][k] -= f * m[row][k];
    }
    piv.push_back(c);
    ++row;
  }
  m.resize(row);
  return piv;
}

/// Basis of {x : A x = 0} for an exact rational matrix with `cols` columns.
inline std::vector<QVector> nullspace(QMatrix a, std::size_t cols) {
  auto piv = rref(a);
  std::vector<bool> is_piv(cols, false);
  for (auto p : piv) is_piv[p] = true;
  std::vector<QVector> out;
  for (std::size_t f = 0; f < cols; ++f) {
    if (is_piv[f]) continue;
    QVector x(cols, 0);
    x[f] = 1;
    for (std::size_t i = 0; i < piv.size(); ++i) x[piv[i]] = -a[i][f];
    out.push_back(std::move(x));
  }
  return out;
}

inline std::size_t rank_of(QMatrix m) { return rref(m).size(); }

inline QVector eval_field(const VectorField& v, const Point& p) {
  QVector out;
  for (const auto& e : v) out.push_back(e.eval(p));
  return out;
}

/// Row-reduced basis of span(vectors).
inline std::vector<QVector> span_basis(std::vector<QVector> vectors) {
  rref(vectors);
  return vectors;
}

/// True when span(a) = span(b).
inline bool same_span(const std::vector<QVector>& a, const std::vector<QVector>& b) {
  std::size_t ra = rank_of(a), rb = rank_of(b);
  std::vector<QVector> both = a;
  both.insert(both.end(), b.begin(), b.end());
  return ra == rb && rank_of(both) == ra;
}

/// Characteristic subspace at p: {sum a_i g_i(p) : sum_i a_i [g_i, g_j](p) in D(p) for all j}.
inline std::vector<QVector> pointwise_characteristic(const std::vector<VectorField>& gens, const Point& p) {
  const std::size_t m = gens.size();
  if (m == 0) return {};
  const std::size_t n = gens[0].size();
  std::vector<QVector> G;
  for (const auto& g : gens) G.push_back(eval_field(g, p));
  std::vector<std::vector<QVector>> B(m, std::vector<QVector>(m));
  for (std::size_t i = 0; i < m; ++i)
    for (std::size_t j = 0; j < m; ++j) B[i][j] = eval_field(lie_bracket(gens[i], gens[j]), p);
  // unknowns: a (m entries) then one coefficient block c_j (m entries) per j
  const std::size_t cols = m + m * m;
  QMatrix eq;
  for (std::size_t j = 0; j < m; ++j)
    for (std::size_t row = 0; row < n; ++row) {
      QVector e(cols, 0);
      for (std::size_t i = 0; i < m; ++i) e[i] = B[i][j][row];
      for (std::size_t l = 0; l < m; ++l) e[m + j * m + l] = -G[l][row];
      eq.push_back(std::move(e));
    }
  auto ns = nullspace(eq, cols);
  std::vector<QVector> xs;
  for (const auto& sol : ns) {
    QVector xi(n, 0);
    for (std::size_t i = 0; i < m; ++i)
      if (sol[i] != 0)
        for (std::size_t r = 0; r < n; ++r) xi[r] += sol[i] * G[i][r];
    xs.push_back(std::move(xi));
  }
  return span_basis(std::move(xs));
}

/// A ratio [b1 : b2] of the projective line; b1 = 0 encodes the point at infinity.
struct Ratio {
  mpq_class b1, b2;
};

/// Default sweep: [1 : t] for t = -10, -9.9, ..., 10 and [0 : 1].
inline std::vector<Ratio> default_ratio_grid() {
  std::vector<Ratio> g;
  for (long j = -100; j <= 100; ++j) {
    mpq_class t(j, 10);
    t.canonicalize();
    g.push_back({mpq_class(1), t});
  }
  g.push_back({mpq_class(0), mpq_class(1)});
  return g;
}

/// Constant ratios whose corank-one candidate passes the pointwise involutivity
/// obstruction b1 [eta, ad^k g1] + b2 [eta, ad^k g2] in D^k at every point.
inline std::vector<Ratio> h_candidate_search(const ControlSystem& sys, std::size_t k, const std::vector<Point>& points,
                                             const Sampler& s, const std::vector<Ratio>& grid = default_ratio_grid()) {
  LinearizabilitySequence seq(sys, s);
  const auto& X1 = seq.ad_field(0, k);
  const auto& X2 = seq.ad_field(1, k);
  std::vector<VectorField> lower;
  if (k >= 1)
    for (std::size_t q = 0; q < k; ++q) {
      lower.push_back(seq.ad_field(0, q));
      lower.push_back(seq.ad_field(1, q));
    }
  std::vector<VectorField> level = lower;
  level.push_back(X1);
  level.push_back(X2);
  std::vector<VectorField> A, B;
  for (const auto& eta : lower) {
    A.push_back(lie_bracket(eta, X1));
    B.push_back(lie_bracket(eta, X2));
  }
  struct Sample {
    std::vector<QVector> level;
    std::size_t rank;
    std::vector<QVector> a, b;
  };
  std::vector<Sample> samples;
  for (const auto& p : points) {
    Sample sm;
    for (const auto& g : level) sm.level.push_back(eval_field(g, p));
    sm.rank = rank_of(sm.level);
    for (std::size_t i = 0; i < lower.size(); ++i) {
      sm.a.push_back(eval_field(A[i], p));
      sm.b.push_back(eval_field(B[i], p));
    }
    samples.push_back(std::move(sm));
  }
  std::vector<Ratio> out;
  for (const auto& r : grid) {
    bool ok = true;
    for (const auto& sm : samples) {
      for (std::size_t i = 0; i < sm.a.size() && ok; ++i) {
        QVector v(sm.a[i].size());
        for (std::size_t c = 0; c < v.size(); ++c) v[c] = r.b1 * sm.a[i][c] + r.b2 * sm.b[i][c];
        auto m = sm.level;
        m.push_back(v);
        ok = rank_of(m) == sm.rank;
      }
      if (!ok) break;
    }
    if (ok) out.push_back(r);
  }
  return out;
}

/// Path of raw prolongations reaching a static feedback linearizable system.
struct Witness {
  std::vector<std::string> path;  // "u1" or "u2" per prolongation
};

/// Breadth-first search over prolongations of u1 or u2 without preliminary feedback.
inline std::optional<Witness> brute_force_lsop(const ControlSystem& sys, std::size_t depth, const Sampler& s) {
  std::deque<std::pair<ControlSystem, std::vector<std::string>>> queue;
  queue.push_back({sys, {}});
  while (!queue.empty()) {
    auto [cur, path] = std::move(queue.front());
    queue.pop_front();
    if (is_sfl(cur, s)) return Witness{path};
    if (path.size() >= depth) continue;
    std::string name = "w" + std::to_string(path.size());
    // column (0, 1) prolongs u1, column (1, 0) prolongs u2
    auto p1 = prolong(cur, Expr(0), Expr(1), name);
    auto next1 = path;
    next1.push_back("u1");
    queue.push_back({p1.system, next1});
    auto p2 = prolong(cur, Expr(1), Expr(0), name);
    auto next2 = path;
    next2.push_back("u2");
    queue.push_back({p2.system, next2});
  }
  return std::nullopt;
}

}  // namespace lsopi::oracle

#endif  // LSOPI_ORACLE_HPP
