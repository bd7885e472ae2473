/**
 * @file poly.hpp
 * @brief Sparse multivariate polynomials over Q with exact division and gcd.
 */
#ifndef LSOPI_POLY_HPP
#define LSOPI_POLY_HPP

#include <gmpxx.h>

#include <algorithm>
#include <array>
#include <bit>
#include <cstdint>
#include <cstring>
#include <optional>
#include <random>
#include <stdexcept>
#include <utility>
#include <vector>

namespace lsopi {

inline constexpr std::size_t kMaxVars = 32;

using Point = std::vector<mpq_class>;

struct AlgebraError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct ZeroDenominator : AlgebraError {
  ZeroDenominator() : AlgebraError("zero denominator") {}
};

/// Raised when an evaluation point is a pole of the expression.
struct NonGenericPoint : AlgebraError {
  NonGenericPoint() : AlgebraError("evaluation point hits a pole") {}
};

/// Exponent vector with graded-lex ordering (x0 > x1 > ...).
class Monomial {
 public:
  Monomial() = default;

  static Monomial variable(std::size_t i, unsigned e = 1) {
    if (i >= kMaxVars) throw AlgebraError("too many variables");
    Monomial m;
    m.set(i, e);
    return m;
  }

  unsigned exponent(std::size_t i) const { return exp_[i]; }
  unsigned degree() const { return deg_; }
  bool is_one() const { return deg_ == 0; }

  std::uint32_t support() const {
    std::uint32_t s = 0;
    for (std::size_t i = 0; i < kMaxVars; ++i)
      if (exp_[i]) s |= (std::uint32_t{1} << i);
    return s;
  }

  void set(std::size_t i, unsigned e) {
    if (e > 255) throw AlgebraError("exponent overflow");
    deg_ = static_cast<std::uint16_t>(deg_ - exp_[i] + e);
    exp_[i] = static_cast<std::uint8_t>(e);
  }

  Monomial operator*(const Monomial& o) const {
    Monomial r;
    for (std::size_t i = 0; i < kMaxVars; ++i) {
      unsigned e = unsigned(exp_[i]) + o.exp_[i];
      if (e > 255) throw AlgebraError("exponent overflow");
      r.exp_[i] = static_cast<std::uint8_t>(e);
    }
    r.deg_ = static_cast<std::uint16_t>(deg_ + o.deg_);
    return r;
  }

  bool divides(const Monomial& o) const {
    if (deg_ > o.deg_) return false;
    for (std::size_t i = 0; i < kMaxVars; ++i)
      if (exp_[i] > o.exp_[i]) return false;
    return true;
  }

  /// Precondition: `o.divides(*this)`.
  Monomial operator/(const Monomial& o) const {
    Monomial r;
    for (std::size_t i = 0; i < kMaxVars; ++i) r.exp_[i] = exp_[i] - o.exp_[i];
    r.deg_ = static_cast<std::uint16_t>(deg_ - o.deg_);
    return r;
  }

  static Monomial gcd(const Monomial& a, const Monomial& b) {
    Monomial r;
    for (std::size_t i = 0; i < kMaxVars; ++i) {
      r.exp_[i] = std::min(a.exp_[i], b.exp_[i]);
      r.deg_ = static_cast<std::uint16_t>(r.deg_ + r.exp_[i]);
    }
    return r;
  }

  /// Positive when a > b in graded-lex order.
  friend int compare(const Monomial& a, const Monomial& b) {
    if (a.deg_ != b.deg_) return a.deg_ > b.deg_ ? 1 : -1;
    return std::memcmp(a.exp_.data(), b.exp_.data(), kMaxVars);
  }

  friend bool operator==(const Monomial& a, const Monomial& b) {
    return a.deg_ == b.deg_ && a.exp_ == b.exp_;
  }

 private:
  std::array<std::uint8_t, kMaxVars> exp_{};
  std::uint16_t deg_ = 0;
};

struct Term {
  Monomial mono;
  mpq_class coef;
};

/// Polynomial with terms kept strictly decreasing in graded-lex order.
class Poly {
 public:
  Poly() = default;
  explicit Poly(const mpq_class& c) {
    if (c != 0) terms_.push_back({Monomial{}, c});
  }
  explicit Poly(long c) : Poly(mpq_class(c)) {}

  static Poly variable(std::size_t i) {
    Poly p;
    p.terms_.push_back({Monomial::variable(i), mpq_class(1)});
    return p;
  }

  static Poly monomial(const Monomial& m, const mpq_class& c) {
    Poly p;
    if (c != 0) p.terms_.push_back({m, c});
    return p;
  }

  /// Sorts and merges arbitrary terms.
  static Poly from_terms(std::vector<Term> terms) {
    std::sort(terms.begin(), terms.end(), [](const Term& a, const Term& b) {
      return compare(a.mono, b.mono) > 0;
    });
    Poly p;
    for (auto& t : terms) {
      if (!p.terms_.empty() && p.terms_.back().mono == t.mono) {
        p.terms_.back().coef += t.coef;
      } else {
        if (!p.terms_.empty() && p.terms_.back().coef == 0) p.terms_.pop_back();
        p.terms_.push_back(std::move(t));
      }
    }
    if (!p.terms_.empty() && p.terms_.back().coef == 0) p.terms_.pop_back();
    return p;
  }

  bool is_zero() const { return terms_.empty(); }
  bool is_constant() const {
    return terms_.empty() || (terms_.size() == 1 && terms_[0].mono.is_one());
  }
  bool is_one() const {
    return terms_.size() == 1 && terms_[0].mono.is_one() && terms_[0].coef == 1;
  }
  mpq_class constant_value() const {
    return terms_.empty() ? mpq_class(0) : terms_.back().mono.is_one() ? terms_.back().coef : mpq_class(0);
  }

  std::size_t size() const { return terms_.size(); }
  const std::vector<Term>& terms() const { return terms_; }
  const Term& leading() const { return terms_.front(); }

  unsigned total_degree() const { return terms_.empty() ? 0 : terms_.front().mono.degree(); }

  unsigned degree_in(std::size_t v) const {
    unsigned d = 0;
    for (const auto& t : terms_) d = std::max(d, t.mono.exponent(v));
    return d;
  }

  std::uint32_t support() const {
    std::uint32_t s = 0;
    for (const auto& t : terms_) s |= t.mono.support();
    return s;
  }

  Poly operator-() const {
    Poly r = *this;
    for (auto& t : r.terms_) t.coef = -t.coef;
    return r;
  }

  friend Poly operator+(const Poly& a, const Poly& b) { return merge(a, b, false); }
  friend Poly operator-(const Poly& a, const Poly& b) { return merge(a, b, true); }

  friend Poly operator*(const Poly& a, const Poly& b) {
    if (a.is_zero() || b.is_zero()) return {};
    if (a.terms_.size() == 1) return b.mul_term(a.terms_[0].mono, a.terms_[0].coef);
    if (b.terms_.size() == 1) return a.mul_term(b.terms_[0].mono, b.terms_[0].coef);
    std::vector<Term> out;
    out.reserve(a.terms_.size() * b.terms_.size());
    for (const auto& s : a.terms_)
      for (const auto& t : b.terms_) out.push_back({s.mono * t.mono, s.coef * t.coef});
    return from_terms(std::move(out));
  }

  Poly& operator+=(const Poly& o) { return *this = *this + o; }
  Poly& operator-=(const Poly& o) { return *this = *this - o; }
  Poly& operator*=(const Poly& o) { return *this = *this * o; }

  Poly scaled(const mpq_class& c) const {
    if (c == 0) return {};
    Poly r = *this;
    for (auto& t : r.terms_) t.coef *= c;
    return r;
  }

  Poly mul_term(const Monomial& m, const mpq_class& c) const {
    if (c == 0) return {};
    Poly r;
    r.terms_.reserve(terms_.size());
    for (const auto& t : terms_) r.terms_.push_back({t.mono * m, t.coef * c});
    return r;
  }

  Poly derivative(std::size_t v) const {
    std::vector<Term> out;
    for (const auto& t : terms_) {
      unsigned e = t.mono.exponent(v);
      if (e == 0) continue;
      Monomial m = t.mono;
      m.set(v, e - 1);
      out.push_back({m, t.coef * e});
    }
    Poly r;
    r.terms_ = std::move(out);
    return r;
  }

  /// Scales so the leading coefficient is one.
  Poly monic() const {
    if (terms_.empty() || terms_.front().coef == 1) return *this;
    mpq_class inv = 1 / terms_.front().coef;
    return scaled(inv);
  }

  mpq_class eval(const Point& pt) const {
    mpq_class acc = 0;
    std::uint32_t sup = support();
    std::vector<std::vector<mpq_class>> powers(kMaxVars);
    for (const auto& t : terms_) {
      mpq_class v = t.coef;
      for (std::size_t i = 0; i < kMaxVars; ++i) {
        if (!(sup >> i & 1u)) continue;
        unsigned e = t.mono.exponent(i);
        if (e == 0) continue;
        if (i >= pt.size()) throw AlgebraError("evaluation point has too few coordinates");
        auto& cache = powers[i];
        if (cache.size() <= e) {
          if (cache.empty()) cache.push_back(mpq_class(1));
          while (cache.size() <= e) cache.push_back(cache.back() * pt[i]);
        }
        v *= cache[e];
      }
      acc += v;
    }
    return acc;
  }

  /// Coefficients with respect to variable v, indexed by degree.
  std::vector<Poly> coefficients_in(std::size_t v) const {
    std::vector<std::vector<Term>> buckets(degree_in(v) + 1);
    for (const auto& t : terms_) {
      Monomial m = t.mono;
      unsigned e = m.exponent(v);
      m.set(v, 0);
      buckets[e].push_back({m, t.coef});
    }
    std::vector<Poly> out;
    out.reserve(buckets.size());
    for (auto& b : buckets) out.push_back(from_terms(std::move(b)));
    return out;
  }

  /// Coefficient of v^e as a polynomial in the other variables.
  Poly coefficient_in(std::size_t v, unsigned e) const {
    std::vector<Term> out;
    for (const auto& t : terms_) {
      if (t.mono.exponent(v) != e) continue;
      Monomial m = t.mono;
      m.set(v, 0);
      out.push_back({m, t.coef});
    }
    return from_terms(std::move(out));
  }

  /// Largest monomial dividing every term.
  Monomial monomial_content() const {
    if (terms_.empty()) return {};
    Monomial g = terms_.front().mono;
    for (const auto& t : terms_) {
      g = Monomial::gcd(g, t.mono);
      if (g.is_one()) break;
    }
    return g;
  }

  Poly div_monomial(const Monomial& m) const {
    Poly r;
    r.terms_.reserve(terms_.size());
    for (const auto& t : terms_) r.terms_.push_back({t.mono / m, t.coef});
    return r;
  }

  friend bool operator==(const Poly& a, const Poly& b) {
    if (a.terms_.size() != b.terms_.size()) return false;
    for (std::size_t i = 0; i < a.terms_.size(); ++i)
      if (!(a.terms_[i].mono == b.terms_[i].mono) || a.terms_[i].coef != b.terms_[i].coef) return false;
    return true;
  }

  /// Total order used for deterministic tie-breaking.
  friend int compare(const Poly& a, const Poly& b) {
    std::size_t n = std::min(a.terms_.size(), b.terms_.size());
    for (std::size_t i = 0; i < n; ++i) {
      int c = compare(a.terms_[i].mono, b.terms_[i].mono);
      if (c != 0) return c;
      int d = cmp(a.terms_[i].coef, b.terms_[i].coef);
      if (d != 0) return d;
    }
    if (a.terms_.size() == b.terms_.size()) return 0;
    return a.terms_.size() > b.terms_.size() ? 1 : -1;
  }

 private:
  static Poly merge(const Poly& a, const Poly& b, bool subtract) {
    if (b.is_zero()) return a;
    if (a.is_zero()) return subtract ? -b : b;
    Poly r;
    r.terms_.reserve(a.terms_.size() + b.terms_.size());
    std::size_t i = 0, j = 0;
    while (i < a.terms_.size() && j < b.terms_.size()) {
      int c = compare(a.terms_[i].mono, b.terms_[j].mono);
      if (c > 0) {
        r.terms_.push_back(a.terms_[i++]);
      } else if (c < 0) {
        r.terms_.push_back(b.terms_[j++]);
        if (subtract) r.terms_.back().coef = -r.terms_.back().coef;
      } else {
        mpq_class s = subtract ? mpq_class(a.terms_[i].coef - b.terms_[j].coef)
                               : mpq_class(a.terms_[i].coef + b.terms_[j].coef);
        if (s != 0) r.terms_.push_back({a.terms_[i].mono, std::move(s)});
        ++i;
        ++j;
      }
    }
    for (; i < a.terms_.size(); ++i) r.terms_.push_back(a.terms_[i]);
    for (; j < b.terms_.size(); ++j) {
      r.terms_.push_back(b.terms_[j]);
      if (subtract) r.terms_.back().coef = -r.terms_.back().coef;
    }
    return r;
  }

  std::vector<Term> terms_;
};

/// Quotient a / b when b divides a exactly, otherwise nullopt.
inline std::optional<Poly> divide_exact(const Poly& a, const Poly& b) {
  if (b.is_zero()) throw ZeroDenominator();
  if (a.is_zero()) return Poly{};
  if (b.is_constant()) return a.scaled(1 / b.constant_value());
  const Term& lb = b.leading();
  if (b.size() == 1) {
    std::vector<Term> out;
    out.reserve(a.size());
    for (const auto& t : a.terms()) {
      if (!lb.mono.divides(t.mono)) return std::nullopt;
      out.push_back({t.mono / lb.mono, t.coef / lb.coef});
    }
    return Poly::from_terms(std::move(out));
  }
  if (a.total_degree() < b.total_degree()) return std::nullopt;
  std::vector<Term> q;
  Poly r = a;
  while (!r.is_zero()) {
    const Term& lr = r.leading();
    if (!lb.mono.divides(lr.mono)) return std::nullopt;
    Monomial m = lr.mono / lb.mono;
    mpq_class c = lr.coef / lb.coef;
    r = r - b.mul_term(m, c);
    q.push_back({m, c});
  }
  return Poly::from_terms(std::move(q));
}

namespace detail {

/// Modular images used to certify coprimality cheaply.
class ModImage {
 public:
  static constexpr std::uint64_t kPrime = 2305843009213693951ULL;  // 2^61 - 1

  static std::uint64_t mul(std::uint64_t a, std::uint64_t b) {
    unsigned __int128 p = static_cast<unsigned __int128>(a) * b;
    std::uint64_t lo = static_cast<std::uint64_t>(p & kPrime);
    std::uint64_t hi = static_cast<std::uint64_t>(p >> 61);
    std::uint64_t s = lo + hi;
    if (s >= kPrime) s -= kPrime;
    return s;
  }
  static std::uint64_t add(std::uint64_t a, std::uint64_t b) {
    std::uint64_t s = a + b;
    return s >= kPrime ? s - kPrime : s;
  }
  static std::uint64_t sub(std::uint64_t a, std::uint64_t b) { return a >= b ? a - b : a + kPrime - b; }
  static std::uint64_t pow(std::uint64_t a, std::uint64_t e) {
    std::uint64_t r = 1;
    while (e) {
      if (e & 1) r = mul(r, a);
      a = mul(a, a);
      e >>= 1;
    }
    return r;
  }
  static std::uint64_t inv(std::uint64_t a) { return pow(a, kPrime - 2); }

  static std::optional<std::uint64_t> reduce(const mpq_class& q) {
    std::uint64_t n = mpz_fdiv_ui(q.get_num_mpz_t(), kPrime);
    std::uint64_t d = mpz_fdiv_ui(q.get_den_mpz_t(), kPrime);
    if (d == 0) return std::nullopt;
    return mul(n, inv(d));
  }

  using UPoly = std::vector<std::uint64_t>;  // ascending degree

  static void trim(UPoly& p) {
    while (!p.empty() && p.back() == 0) p.pop_back();
  }

  static UPoly gcd(UPoly a, UPoly b) {
    trim(a);
    trim(b);
    while (!b.empty()) {
      // a <- a mod b
      std::uint64_t inv_lb = inv(b.back());
      while (a.size() >= b.size()) {
        std::uint64_t c = mul(a.back(), inv_lb);
        std::size_t shift = a.size() - b.size();
        for (std::size_t i = 0; i < b.size(); ++i) a[i + shift] = sub(a[i + shift], mul(c, b[i]));
        a.pop_back();
        trim(a);
      }
      std::swap(a, b);
    }
    return a;
  }

  /// Image in F_p[x_v] after substituting `vals` for the other variables.
  static std::optional<UPoly> image(const Poly& p, std::size_t v, const std::vector<std::uint64_t>& vals) {
    UPoly out(p.degree_in(v) + 1, 0);
    for (const auto& t : p.terms()) {
      auto c = reduce(t.coef);
      if (!c) return std::nullopt;
      std::uint64_t acc = *c;
      for (std::size_t i = 0; i < kMaxVars; ++i) {
        if (i == v) continue;
        unsigned e = t.mono.exponent(i);
        if (e) acc = mul(acc, pow(vals[i], e));
      }
      unsigned ev = t.mono.exponent(v);
      out[ev] = add(out[ev], acc);
    }
    return out;
  }
};

/// True when a and b are certainly coprime; false means "unknown".
inline bool certainly_coprime(const Poly& a, const Poly& b) {
  std::uint32_t common = a.support() & b.support();
  if (common == 0) return true;
  std::mt19937_64 rng(0x5eedULL);
  for (std::size_t v = 0; v < kMaxVars; ++v) {
    if (!(common >> v & 1u)) continue;
    bool certified = false;
    for (int attempt = 0; attempt < 2 && !certified; ++attempt) {
      std::vector<std::uint64_t> vals(kMaxVars);
      for (auto& x : vals) x = rng() % ModImage::kPrime;
      auto ia = ModImage::image(a, v, vals);
      auto ib = ModImage::image(b, v, vals);
      if (!ia || !ib) continue;
      ModImage::trim(*ia);
      // the leading coefficient in v must survive for the degree bound to hold
      if (ia->size() != a.degree_in(v) + 1) continue;
      auto g = ModImage::gcd(*ia, *ib);
      if (g.size() <= 1) certified = true;
      else return false;
    }
    if (!certified) return false;
  }
  return true;
}

inline Poly gcd_no_monomial(const Poly& a, const Poly& b);

/// Gcd of the coefficients of p viewed as a polynomial in v (monic).
inline Poly content_in(const Poly& p, std::size_t v);

}  // namespace detail

/// Monic greatest common divisor; gcd(0, 0) = 0.
inline Poly gcd(const Poly& a, const Poly& b) {
  if (a.is_zero()) return b.monic();
  if (b.is_zero()) return a.monic();
  if (a.is_constant() || b.is_constant()) return Poly(1);
  Monomial ma = a.monomial_content();
  Monomial mb = b.monomial_content();
  Monomial mg = Monomial::gcd(ma, mb);
  Poly a1 = ma.is_one() ? a : a.div_monomial(ma);
  Poly b1 = mb.is_one() ? b : b.div_monomial(mb);
  Poly g = detail::gcd_no_monomial(a1, b1);
  if (!mg.is_one()) g = g.mul_term(mg, mpq_class(1));
  return g.monic();
}

namespace detail {

inline Poly content_in(const Poly& p, std::size_t v) {
  auto cs = p.coefficients_in(v);
  std::sort(cs.begin(), cs.end(), [](const Poly& x, const Poly& y) { return x.size() < y.size(); });
  Poly g;
  for (const auto& c : cs) {
    if (c.is_zero()) continue;
    g = g.is_zero() ? c.monic() : gcd(g, c);
    if (g.is_constant()) return Poly(1);
  }
  return g;
}

inline Poly primitive_part_in(const Poly& p, std::size_t v) {
  Poly c = content_in(p, v);
  if (c.is_constant()) return p.monic();
  return divide_exact(p, c).value().monic();
}

/// Pseudo-remainder of a by b with respect to variable v.
inline Poly pseudo_remainder(const Poly& a, const Poly& b, std::size_t v) {
  unsigned db = b.degree_in(v);
  Poly lcb = b.coefficient_in(v, db);
  Poly r = a;
  while (!r.is_zero()) {
    unsigned dr = r.degree_in(v);
    if (dr < db) break;
    Poly lcr = r.coefficient_in(v, dr);
    r = lcb * r - (lcr * b).mul_term(Monomial::variable(v, dr - db), mpq_class(1));
  }
  return r;
}

/// Gcd of polynomials that are primitive in v, via the primitive PRS.
inline Poly prs_gcd(Poly a, Poly b, std::size_t v) {
  if (a.degree_in(v) < b.degree_in(v)) std::swap(a, b);
  if (b.degree_in(v) == 0) return Poly(1);
  while (true) {
    Poly r = pseudo_remainder(a, b, v);
    if (r.is_zero()) return b.monic();
    if (r.degree_in(v) == 0) return Poly(1);
    a = std::move(b);
    b = primitive_part_in(r, v);
  }
}

inline Poly gcd_no_monomial(const Poly& a, const Poly& b) {
  if (a.is_constant() || b.is_constant()) return Poly(1);
  Poly am = a.monic(), bm = b.monic();
  if (am == bm) return am;
  if (certainly_coprime(a, b)) return Poly(1);
  std::uint32_t sa = a.support(), sb = b.support();
  if (std::uint32_t only_a = sa & ~sb) {
    std::size_t v = std::countr_zero(only_a);
    return gcd(content_in(a, v), b);
  }
  if (std::uint32_t only_b = sb & ~sa) {
    std::size_t v = std::countr_zero(only_b);
    return gcd(a, content_in(b, v));
  }
  std::size_t best = kMaxVars;
  unsigned best_deg = ~0u;
  for (std::size_t v = 0; v < kMaxVars; ++v) {
    if (!(sa >> v & 1u)) continue;
    unsigned d = std::max(a.degree_in(v), b.degree_in(v));
    if (d < best_deg) {
      best_deg = d;
      best = v;
    }
  }
  std::size_t v = best;
  Poly ca = content_in(a, v), cb = content_in(b, v);
  Poly pa = ca.is_constant() ? a : divide_exact(a, ca).value();
  Poly pb = cb.is_constant() ? b : divide_exact(b, cb).value();
  Poly c = gcd(ca, cb);
  Poly g = prs_gcd(pa.monic(), pb.monic(), v);
  return (c * g).monic();
}

}  // namespace detail

}  // namespace lsopi

#endif  // LSOPI_POLY_HPP
