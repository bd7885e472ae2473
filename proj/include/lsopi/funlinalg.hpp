/**
 * @file funlinalg.hpp
 * @brief Linear algebra over the field of rational functions.
 *
 * Ranks, memberships and kernels are decided symbolically. A seeded sampler
 * evaluates at rational points to confirm that a pointwise rank matches the
 * symbolic one and to short-cut full-rank matrices.
 */
#ifndef LSOPI_FUNLINALG_HPP
#define LSOPI_FUNLINALG_HPP

#include <algorithm>
#include <cstdint>
#include <optional>
#include <random>
#include <stdexcept>
#include <string>
#include <tuple>
#include <vector>

#include "lsopi/expr.hpp"

namespace lsopi {

using FunVector = std::vector<Expr>;

/// No sampled point reproduced the symbolic rank within the budget.
struct GenericityError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct SamplerConfig {
  std::uint64_t seed = 42;
  std::size_t samples = 5;
  std::size_t resample_budget = 20;
};

/// Deterministic stream of rational sample points.
class Sampler {
 public:
  Sampler() = default;
  explicit Sampler(SamplerConfig cfg) : cfg_(cfg) {
    if (cfg_.samples == 0) throw std::invalid_argument("sampler needs at least one sample");
  }

  const SamplerConfig& config() const { return cfg_; }
  std::size_t attempts() const { return cfg_.samples + cfg_.resample_budget; }

  /// Point `index` restricted to the first `nvars` coordinates.
  /// Coordinates are prefix-stable, so growing the state keeps earlier values.
  Point point(std::size_t index, std::size_t nvars) const {
    std::seed_seq seq{static_cast<std::uint32_t>(cfg_.seed), static_cast<std::uint32_t>(cfg_.seed >> 32),
                      static_cast<std::uint32_t>(index)};
    std::mt19937_64 rng(seq);
    Point p;
    p.reserve(nvars);
    for (std::size_t i = 0; i < nvars; ++i) {
      long num = static_cast<long>(rng() % 2000001ULL) - 1000000L;
      long den = static_cast<long>(rng() % 1000ULL) + 1L;
      mpq_class q(num, den);
      q.canonicalize();
      p.push_back(q);
    }
    return p;
  }

 private:
  SamplerConfig cfg_{};
};

/// Dense matrix of expressions, row-major.
class FunMatrix {
 public:
  FunMatrix() = default;
  FunMatrix(std::size_t rows, std::size_t cols) : rows_(rows), cols_(cols), data_(rows * cols) {}

  static FunMatrix from_columns(const std::vector<FunVector>& cols, std::size_t nrows) {
    FunMatrix m(nrows, cols.size());
    for (std::size_t j = 0; j < cols.size(); ++j) {
      if (cols[j].size() != nrows) throw std::invalid_argument("column length mismatch");
      for (std::size_t i = 0; i < nrows; ++i) m(i, j) = cols[j][i];
    }
    return m;
  }

  static FunMatrix from_rows(const std::vector<FunVector>& rows, std::size_t ncols) {
    FunMatrix m(rows.size(), ncols);
    for (std::size_t i = 0; i < rows.size(); ++i) {
      if (rows[i].size() != ncols) throw std::invalid_argument("row length mismatch");
      for (std::size_t j = 0; j < ncols; ++j) m(i, j) = rows[i][j];
    }
    return m;
  }

  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }
  Expr& operator()(std::size_t i, std::size_t j) { return data_[i * cols_ + j]; }
  const Expr& operator()(std::size_t i, std::size_t j) const { return data_[i * cols_ + j]; }

  FunVector row(std::size_t i) const { return FunVector(data_.begin() + i * cols_, data_.begin() + (i + 1) * cols_); }
  FunVector column(std::size_t j) const {
    FunVector c(rows_);
    for (std::size_t i = 0; i < rows_; ++i) c[i] = (*this)(i, j);
    return c;
  }
  std::vector<FunVector> row_list() const {
    std::vector<FunVector> r;
    for (std::size_t i = 0; i < rows_; ++i) r.push_back(row(i));
    return r;
  }

  std::vector<std::vector<mpq_class>> eval(const Point& p) const {
    std::vector<std::vector<mpq_class>> out(rows_, std::vector<mpq_class>(cols_));
    for (std::size_t i = 0; i < rows_; ++i)
      for (std::size_t j = 0; j < cols_; ++j) out[i][j] = (*this)(i, j).eval(p);
    return out;
  }

 private:
  std::size_t rows_ = 0, cols_ = 0;
  std::vector<Expr> data_;
};

/// Rank of an exact rational matrix by Gaussian elimination.
inline std::size_t rational_rank(std::vector<std::vector<mpq_class>> m) {
  std::size_t rank = 0;
  if (m.empty()) return 0;
  std::size_t cols = m[0].size();
  for (std::size_t c = 0; c < cols && rank < m.size(); ++c) {
    std::size_t piv = rank;
    while (piv < m.size() && m[piv][c] == 0) ++piv;
    if (piv == m.size()) continue;
    std::swap(m[piv], m[rank]);
    for (std::size_t r = rank + 1; r < m.size(); ++r) {
      if (m[r][c] == 0) continue;
      mpq_class f = m[r][c] / m[rank][c];
      for (std::size_t k = c; k < cols; ++k) m[r][k] -= f * m[rank][k];
    }
    ++rank;
  }
  return rank;
}

/// Pointwise rank of a family of vectors; throws NonGenericPoint at poles.
inline std::size_t pointwise_rank(const std::vector<FunVector>& vecs, const Point& p) {
  std::vector<std::vector<mpq_class>> m;
  m.reserve(vecs.size());
  for (const auto& v : vecs) {
    std::vector<mpq_class> row;
    row.reserve(v.size());
    for (const auto& e : v) row.push_back(e.eval(p));
    m.push_back(std::move(row));
  }
  return rational_rank(std::move(m));
}

/// Maximum pointwise rank over the first `count` sample points (poles skipped).
inline std::size_t sampled_rank(const std::vector<FunVector>& vecs, std::size_t nvars, const Sampler& s,
                                std::size_t count) {
  std::size_t best = 0;
  for (std::size_t i = 0; i < count; ++i) {
    try {
      best = std::max(best, pointwise_rank(vecs, s.point(i, nvars)));
    } catch (const NonGenericPoint&) {
    }
  }
  return best;
}

/// Throws GenericityError unless some sample point attains `rank`.
inline void confirm_generic_rank(const std::vector<FunVector>& vecs, std::size_t nvars, std::size_t rank,
                                 const Sampler& s) {
  if (rank == 0) return;
  for (std::size_t i = 0; i < s.attempts(); ++i) {
    try {
      if (pointwise_rank(vecs, s.point(i, nvars)) == rank) return;
    } catch (const NonGenericPoint&) {
    }
  }
  throw GenericityError("no sample point attains symbolic rank " + std::to_string(rank) + " after " +
                        std::to_string(s.attempts()) + " attempts");
}

namespace detail {

/// Pivot preference: lower total degree first, then column, then row.
inline bool better_pivot(const Expr& e, std::size_t col, std::size_t row, const Expr* best, std::size_t bcol,
                         std::size_t brow) {
  if (!best) return true;
  unsigned d = e.degree(), bd = best->degree();
  if (d != bd) return d < bd;
  if (col != bcol) return col < bcol;
  return row < brow;
}

inline Poly poly_lcm(const Poly& a, const Poly& b) {
  if (a.is_one()) return b;
  if (b.is_one()) return a;
  Poly g = gcd(a, b);
  return divide_exact(a * b, g).value().monic();
}

/// Fraction-free elimination rank of a matrix whose rows are cleared of denominators.
inline std::size_t bareiss_rank(const FunMatrix& m) {
  const std::size_t R = m.rows(), C = m.cols();
  std::vector<std::vector<Poly>> a(R, std::vector<Poly>(C));
  for (std::size_t i = 0; i < R; ++i) {
    Poly l(1);
    for (std::size_t j = 0; j < C; ++j) l = poly_lcm(l, m(i, j).denominator());
    for (std::size_t j = 0; j < C; ++j) {
      const Expr& e = m(i, j);
      if (e.is_zero()) continue;
      a[i][j] = divide_exact(l, e.denominator()).value() * e.numerator();
    }
  }
  std::vector<bool> row_used(R, false), col_used(C, false);
  Poly prev(1);
  std::size_t rank = 0;
  while (true) {
    std::size_t pr = R, pc = C;
    unsigned pd = 0;
    for (std::size_t j = 0; j < C; ++j) {
      if (col_used[j]) continue;
      for (std::size_t i = 0; i < R; ++i) {
        if (row_used[i] || a[i][j].is_zero()) continue;
        unsigned d = a[i][j].total_degree();
        if (pr == R || d < pd) {
          pr = i;
          pc = j;
          pd = d;
        }
      }
    }
    if (pr == R) break;
    row_used[pr] = col_used[pc] = true;
    ++rank;
    const Poly piv = a[pr][pc];
    for (std::size_t i = 0; i < R; ++i) {
      if (row_used[i]) continue;
      for (std::size_t j = 0; j < C; ++j) {
        if (col_used[j]) continue;
        Poly v = piv * a[i][j] - a[i][pc] * a[pr][j];
        a[i][j] = prev.is_one() ? v : divide_exact(v, prev).value();
      }
      a[i][pc] = Poly();
    }
    prev = piv;
  }
  return rank;
}

}  // namespace detail

/// Generic rank over the rational function field.
inline std::size_t generic_rank(const FunMatrix& m, const Sampler& s) {
  const std::size_t full = std::min(m.rows(), m.cols());
  if (full == 0) return 0;
  auto rows = m.row_list();
  std::size_t nvars = 0;
  for (std::size_t i = 0; i < m.rows(); ++i)
    for (std::size_t j = 0; j < m.cols(); ++j) {
      std::uint32_t sup = m(i, j).support();
      if (sup) nvars = std::max<std::size_t>(nvars, 32 - std::countl_zero(sup));
    }
  // a pointwise rank never exceeds the generic one, so full rank at a sample is conclusive
  if (sampled_rank(rows, nvars, s, s.config().samples) == full) return full;
  std::size_t r = detail::bareiss_rank(m);
  confirm_generic_rank(rows, nvars, r, s);
  return r;
}

/// Reduced row-echelon basis of the span of a family of vectors.
///
/// Basis vector i has entry one at coordinate pivots()[i] and zero at every
/// other pivot coordinate, so membership reduces to a residual check.
class SpanBasis {
 public:
  SpanBasis() = default;

  SpanBasis(std::size_t dim, const std::vector<FunVector>& vectors, bool track = false) : dim_(dim) {
    std::vector<FunVector> rows;
    std::vector<FunVector> comb;
    for (std::size_t k = 0; k < vectors.size(); ++k) {
      if (vectors[k].size() != dim) throw std::invalid_argument("vector length mismatch");
      rows.push_back(vectors[k]);
      if (track) {
        FunVector c(vectors.size());
        c[k] = Expr(1);
        comb.push_back(std::move(c));
      }
    }
    std::vector<bool> col_used(dim, false), row_used(rows.size(), false);
    std::vector<std::size_t> order;
    while (true) {
      const Expr* best = nullptr;
      std::size_t br = 0, bc = 0;
      for (std::size_t r = 0; r < rows.size(); ++r) {
        if (row_used[r]) continue;
        for (std::size_t c = 0; c < dim; ++c) {
          if (col_used[c] || rows[r][c].is_zero()) continue;
          if (detail::better_pivot(rows[r][c], c, r, best, bc, br)) {
            best = &rows[r][c];
            br = r;
            bc = c;
          }
        }
      }
      if (!best) break;
      Expr inv = rows[br][bc].inverse();
      for (auto& e : rows[br])
        if (!e.is_zero()) e = e * inv;
      if (track)
        for (auto& e : comb[br])
          if (!e.is_zero()) e = e * inv;
      for (std::size_t r = 0; r < rows.size(); ++r) {
        if (r == br || rows[r][bc].is_zero()) continue;
        Expr f = rows[r][bc];
        for (std::size_t c = 0; c < dim; ++c)
          if (!rows[br][c].is_zero()) rows[r][c] = rows[r][c] - f * rows[br][c];
        if (track)
          for (std::size_t c = 0; c < comb[r].size(); ++c)
            if (!comb[br][c].is_zero()) comb[r][c] = comb[r][c] - f * comb[br][c];
      }
      row_used[br] = col_used[bc] = true;
      order.push_back(br);
      pivots_.push_back(bc);
    }
    for (std::size_t r : order) {
      sources_.push_back(r);
      basis_.push_back(rows[r]);
      if (track) comb_.push_back(comb[r]);
    }
  }

  std::size_t dim() const { return dim_; }
  std::size_t rank() const { return basis_.size(); }
  const std::vector<FunVector>& basis() const { return basis_; }
  const std::vector<std::size_t>& pivots() const { return pivots_; }
  /// Input indices selected as pivot rows; those inputs are independent and span.
  const std::vector<std::size_t>& sources() const { return sources_; }
  /// Coefficients of each basis vector over the input family (when tracked).
  const std::vector<FunVector>& combinations() const { return comb_; }

  /// v minus its projection along the pivot coordinates; zero iff v is in the span.
  FunVector residual(const FunVector& v) const {
    FunVector r = v;
    for (std::size_t i = 0; i < basis_.size(); ++i) {
      const Expr& c = v[pivots_[i]];
      if (c.is_zero()) continue;
      for (std::size_t k = 0; k < dim_; ++k)
        if (!basis_[i][k].is_zero()) r[k] = r[k] - c * basis_[i][k];
    }
    return r;
  }

  bool contains(const FunVector& v) const {
    auto r = residual(v);
    return std::all_of(r.begin(), r.end(), [](const Expr& e) { return e.is_zero(); });
  }

  /// Coordinates of a member of the span with respect to basis().
  FunVector coordinates(const FunVector& v) const {
    FunVector c;
    c.reserve(pivots_.size());
    for (std::size_t p : pivots_) c.push_back(v[p]);
    return c;
  }

 private:
  std::size_t dim_ = 0;
  std::vector<FunVector> basis_;
  std::vector<std::size_t> pivots_;
  std::vector<std::size_t> sources_;
  std::vector<FunVector> comb_;
};

inline std::size_t support_width(const std::vector<FunVector>& vecs) {
  std::uint32_t sup = 0;
  for (const auto& v : vecs)
    for (const auto& e : v) sup |= e.support();
  return sup ? static_cast<std::size_t>(32 - std::countl_zero(sup)) : 0;
}

/// Coefficients c with sum_j c_j cols_j = v, or nullopt when v is not in the span.
inline std::optional<FunVector> solve_membership(const FunVector& v, const std::vector<FunVector>& cols,
                                                 const Sampler& s) {
  const std::size_t n = v.size();
  SpanBasis sb(n, cols, true);
  auto all = cols;
  confirm_generic_rank(all, support_width(all), sb.rank(), s);
  if (!sb.contains(v)) return std::nullopt;
  FunVector coef(cols.size());
  auto coords = sb.coordinates(v);
  for (std::size_t i = 0; i < coords.size(); ++i) {
    if (coords[i].is_zero()) continue;
    for (std::size_t k = 0; k < cols.size(); ++k)
      if (!sb.combinations()[i][k].is_zero()) coef[k] += coords[i] * sb.combinations()[i][k];
  }
  for (std::size_t r = 0; r < n; ++r) {
    Expr acc;
    for (std::size_t k = 0; k < cols.size(); ++k)
      if (!coef[k].is_zero()) acc += coef[k] * cols[k][r];
    if (!(acc == v[r])) throw AlgebraError("membership coefficients failed verification");
  }
  return coef;
}

/// Basis of the right kernel {x : M x = 0}, one vector per free column.
inline std::vector<FunVector> kernel_basis(const FunMatrix& m, const Sampler& s) {
  auto rows = m.row_list();
  SpanBasis sb(m.cols(), rows);
  confirm_generic_rank(rows, support_width(rows), sb.rank(), s);
  std::vector<bool> is_pivot(m.cols(), false);
  for (std::size_t p : sb.pivots()) is_pivot[p] = true;
  std::vector<FunVector> out;
  for (std::size_t f = 0; f < m.cols(); ++f) {
    if (is_pivot[f]) continue;
    FunVector x(m.cols());
    x[f] = Expr(1);
    for (std::size_t i = 0; i < sb.rank(); ++i) x[sb.pivots()[i]] = -sb.basis()[i][f];
    for (std::size_t r = 0; r < m.rows(); ++r) {
      Expr acc;
      for (std::size_t c = 0; c < m.cols(); ++c)
        if (!x[c].is_zero()) acc += m(r, c) * x[c];
      if (!acc.is_zero()) throw AlgebraError("kernel vector failed verification");
    }
    out.push_back(std::move(x));
  }
  return out;
}

}  // namespace lsopi

#endif  // LSOPI_FUNLINALG_HPP
