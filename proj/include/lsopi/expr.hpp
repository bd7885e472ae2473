/**
 * @file expr.hpp
 * @brief Rational functions over Q in canonical reduced form.
 *
 * An Expr holds numerator/denominator with gcd one and a monic denominator,
 * so structural equality is mathematical equality.
 */
#ifndef LSOPI_EXPR_HPP
#define LSOPI_EXPR_HPP

#include <memory>
#include <string>
#include <vector>

#include "lsopi/poly.hpp"

namespace lsopi {

class Expr {
 public:
  Expr() : rep_(zero_rep()) {}
  Expr(long c) : Expr(mpq_class(c)) {}  // NOLINT(google-explicit-constructor)
  Expr(const mpq_class& c)              // NOLINT(google-explicit-constructor)
      : rep_(c == 0 ? zero_rep() : std::make_shared<const Rep>(Rep{Poly(c), Poly(1)})) {}
  explicit Expr(Poly p) : rep_(p.is_zero() ? zero_rep() : std::make_shared<const Rep>(Rep{std::move(p), Poly(1)})) {}

  static Expr variable(std::size_t i) { return Expr(Poly::variable(i)); }

  /// num / den reduced to canonical form.
  static Expr ratio(const Poly& num, const Poly& den) {
    if (den.is_zero()) throw ZeroDenominator();
    if (num.is_zero()) return Expr();
    if (den.is_constant()) return Expr(num.scaled(1 / den.constant_value()));
    Poly g = gcd(num, den);
    if (g.is_constant()) return reduced(num, den);
    return reduced(divide_exact(num, g).value(), divide_exact(den, g).value());
  }

  const Poly& numerator() const { return rep_->num; }
  const Poly& denominator() const { return rep_->den; }

  bool is_zero() const { return rep_->num.is_zero(); }
  bool is_polynomial() const { return rep_->den.is_one(); }
  bool is_constant() const { return is_polynomial() && rep_->num.is_constant(); }
  /// Precondition: is_constant().
  mpq_class constant_value() const { return rep_->num.constant_value(); }

  /// Degree used for pivot ranking.
  unsigned degree() const { return rep_->num.total_degree() + rep_->den.total_degree(); }
  std::size_t term_count() const { return rep_->num.size() + rep_->den.size(); }
  std::uint32_t support() const { return rep_->num.support() | rep_->den.support(); }

  Expr operator-() const {
    if (is_zero()) return *this;
    return reduced(-rep_->num, rep_->den);
  }

  friend Expr operator+(const Expr& a, const Expr& b) { return add(a, b, false); }
  friend Expr operator-(const Expr& a, const Expr& b) { return add(a, b, true); }

  friend Expr operator*(const Expr& a, const Expr& b) {
    if (a.is_zero() || b.is_zero()) return Expr();
    if (a.is_polynomial() && b.is_polynomial()) return Expr(a.numerator() * b.numerator());
    Poly an = a.numerator(), ad = a.denominator(), bn = b.numerator(), bd = b.denominator();
    if (!bd.is_one()) {
      Poly g = gcd(an, bd);
      if (!g.is_constant()) {
        an = divide_exact(an, g).value();
        bd = divide_exact(bd, g).value();
      }
    }
    if (!ad.is_one()) {
      Poly g = gcd(bn, ad);
      if (!g.is_constant()) {
        bn = divide_exact(bn, g).value();
        ad = divide_exact(ad, g).value();
      }
    }
    return reduced(an * bn, ad * bd);
  }

  Expr inverse() const {
    if (is_zero()) throw ZeroDenominator();
    const mpq_class lc = rep_->num.leading().coef;
    mpq_class inv = 1 / lc;
    return reduced(rep_->den.scaled(inv), rep_->num.scaled(inv));
  }

  friend Expr operator/(const Expr& a, const Expr& b) { return a * b.inverse(); }

  Expr& operator+=(const Expr& o) { return *this = *this + o; }
  Expr& operator-=(const Expr& o) { return *this = *this - o; }
  Expr& operator*=(const Expr& o) { return *this = *this * o; }

  Expr pow(long e) const {
    if (e < 0) return inverse().pow(-e);
    Expr r(1), base = *this;
    while (e) {
      if (e & 1) r *= base;
      e >>= 1;
      if (e) base *= base;
    }
    return r;
  }

  /// Partial derivative with respect to variable i.
  Expr diff(std::size_t i) const {
    const Poly& n = rep_->num;
    const Poly& d = rep_->den;
    if (!(support() >> i & 1u)) return Expr();
    if (d.is_one()) return Expr(n.derivative(i));
    return ratio(n.derivative(i) * d - n * d.derivative(i), d * d);
  }

  mpq_class eval(const Point& pt) const {
    mpq_class den = rep_->den.eval(pt);
    if (den == 0) throw NonGenericPoint();
    return rep_->num.eval(pt) / den;
  }

  friend bool operator==(const Expr& a, const Expr& b) {
    return a.rep_ == b.rep_ || (a.rep_->num == b.rep_->num && a.rep_->den == b.rep_->den);
  }

  /// Deterministic total order (used for tie-breaking only).
  friend int compare(const Expr& a, const Expr& b) {
    int c = compare(a.rep_->den, b.rep_->den);
    return c != 0 ? c : compare(a.rep_->num, b.rep_->num);
  }

  std::string str(const std::vector<std::string>& names) const;

 private:
  struct Rep {
    Poly num;
    Poly den;
  };

  static const std::shared_ptr<const Rep>& zero_rep() {
    static const std::shared_ptr<const Rep> z = std::make_shared<const Rep>(Rep{Poly(), Poly(1)});
    return z;
  }

  /// Caller guarantees gcd(num, den) is constant.
  static Expr reduced(const Poly& num, const Poly& den) {
    Expr e;
    if (num.is_zero()) return e;
    if (den.is_constant()) return Expr(num.scaled(1 / den.constant_value()));
    const mpq_class& lc = den.leading().coef;
    if (lc == 1) {
      e.rep_ = std::make_shared<const Rep>(Rep{num, den});
    } else {
      mpq_class inv = 1 / lc;
      e.rep_ = std::make_shared<const Rep>(Rep{num.scaled(inv), den.scaled(inv)});
    }
    return e;
  }

  static Expr add(const Expr& a, const Expr& b, bool subtract) {
    if (b.is_zero()) return a;
    if (a.is_zero()) return subtract ? -b : b;
    const Poly& an = a.numerator();
    const Poly& ad = a.denominator();
    const Poly& bn = b.numerator();
    const Poly& bd = b.denominator();
    if (ad.is_one() && bd.is_one()) return Expr(subtract ? an - bn : an + bn);
    if (ad == bd) return ratio(subtract ? an - bn : an + bn, ad);
    Poly g = gcd(ad, bd);
    if (g.is_constant()) {
      Poly num = subtract ? an * bd - bn * ad : an * bd + bn * ad;
      return reduced(num, ad * bd);
    }
    Poly ad1 = divide_exact(ad, g).value();
    Poly bd1 = divide_exact(bd, g).value();
    Poly num = subtract ? an * bd1 - bn * ad1 : an * bd1 + bn * ad1;
    if (num.is_zero()) return Expr();
    Poly h = gcd(num, g);
    if (h.is_constant()) return reduced(num, ad1 * bd);
    return reduced(divide_exact(num, h).value(), divide_exact(ad1 * bd, h).value());
  }

  std::shared_ptr<const Rep> rep_;
};

inline bool equals_zero(const Expr& e) { return e.is_zero(); }

namespace detail {

inline std::string monomial_str(const Monomial& m, const std::vector<std::string>& names) {
  std::string s;
  for (std::size_t i = 0; i < kMaxVars; ++i) {
    unsigned e = m.exponent(i);
    if (!e) continue;
    if (!s.empty()) s += "*";
    s += i < names.size() ? names[i] : "_v" + std::to_string(i);
    if (e > 1) s += "^" + std::to_string(e);
  }
  return s;
}

inline std::string poly_str(const Poly& p, const std::vector<std::string>& names) {
  if (p.is_zero()) return "0";
  std::string s;
  bool first = true;
  for (const auto& t : p.terms()) {
    mpq_class c = t.coef;
    bool neg = c < 0;
    if (neg) c = -c;
    if (first) {
      if (neg) s += "-";
    } else {
      s += neg ? " - " : " + ";
    }
    first = false;
    if (t.mono.is_one()) {
      s += c.get_str();
    } else {
      if (c != 1) s += c.get_str() + "*";
      s += monomial_str(t.mono, names);
    }
  }
  return s;
}

}  // namespace detail

inline std::string Expr::str(const std::vector<std::string>& names) const {
  const Poly& n = rep_->num;
  const Poly& d = rep_->den;
  std::string ns = detail::poly_str(n, names);
  if (d.is_one()) return ns;
  if (n.size() > 1 || ns.find('/') != std::string::npos) ns = "(" + ns + ")";
  std::string ds = detail::poly_str(d, names);
  bool bare = d.size() == 1 && std::popcount(d.support()) == 1;
  return ns + "/" + (bare ? ds : "(" + ds + ")");
}

}  // namespace lsopi

#endif  // LSOPI_EXPR_HPP
