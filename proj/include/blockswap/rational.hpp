#pragma once

#include <gmpxx.h>

#include <compare>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <string_view>

namespace blockswap {

/// Exact arbitrary-precision rational. Text form is "p/q" (or "p" when q == 1).
class Rational {
 public:
  Rational() = default;
  Rational(std::int64_t n) : v_(static_cast<long>(n)) {}  // NOLINT(google-explicit-constructor)
  Rational(std::int64_t num, std::int64_t den) {
    if (den == 0) throw std::domain_error("rational with zero denominator");
    v_ = mpq_class(mpz_class(static_cast<long>(num)), mpz_class(static_cast<long>(den)));
    v_.canonicalize();
  }

  static Rational parse(std::string_view text) {
    std::string s(text);
    auto trim = [](std::string& t) {
      auto b = t.find_first_not_of(" \t");
      auto e = t.find_last_not_of(" \t");
      t = b == std::string::npos ? std::string() : t.substr(b, e - b + 1);
    };
    trim(s);
    auto slash = s.find('/');
    std::string num = slash == std::string::npos ? s : s.substr(0, slash);
    std::string den = slash == std::string::npos ? std::string("1") : s.substr(slash + 1);
    trim(num);
    trim(den);
    auto digits_ok = [](const std::string& t, bool allow_sign) {
      if (t.empty()) return false;
      std::size_t i = 0;
      if (allow_sign && (t[0] == '-' || t[0] == '+')) i = 1;
      if (i == t.size()) return false;
      for (; i < t.size(); ++i)
        if (t[i] < '0' || t[i] > '9') return false;
      return true;
    };
    if (!digits_ok(num, true) || !digits_ok(den, false))
      throw std::invalid_argument("malformed rational '" + std::string(text) + "'");
    if (num[0] == '+') num.erase(0, 1);
    Rational r;
    mpz_class n(num, 10);
    mpz_class d(den, 10);
    if (d == 0) throw std::invalid_argument("rational with zero denominator '" + std::string(text) + "'");
    r.v_ = mpq_class(n, d);
    r.v_.canonicalize();
    return r;
  }

  std::string str() const {
    if (v_.get_den() == 1) return v_.get_num().get_str();
    return v_.get_num().get_str() + "/" + v_.get_den().get_str();
  }

  double to_double() const { return v_.get_d(); }
  std::string numerator_str() const { return v_.get_num().get_str(); }
  std::string denominator_str() const { return v_.get_den().get_str(); }
  std::int64_t numerator() const {
    if (!v_.get_num().fits_slong_p()) throw std::overflow_error("numerator out of range");
    return v_.get_num().get_si();
  }
  std::int64_t denominator() const {
    if (!v_.get_den().fits_slong_p()) throw std::overflow_error("denominator out of range");
    return v_.get_den().get_si();
  }
  bool is_integer() const { return v_.get_den() == 1; }
  int sign() const { return sgn(v_); }

  /// Largest integer <= value, clamped to int64.
  std::int64_t floor_int() const {
    mpz_class q;
    mpz_fdiv_q(q.get_mpz_t(), v_.get_num().get_mpz_t(), v_.get_den().get_mpz_t());
    if (!q.fits_slong_p()) throw std::overflow_error("rational floor out of range");
    return q.get_si();
  }

  /// ceil(value) for positive-range values, as int64.
  std::int64_t ceil_int() const {
    mpz_class q;
    mpz_cdiv_q(q.get_mpz_t(), v_.get_num().get_mpz_t(), v_.get_den().get_mpz_t());
    if (!q.fits_slong_p()) throw std::overflow_error("rational ceil out of range");
    return q.get_si();
  }

  Rational& operator+=(const Rational& o) { v_ += o.v_; return *this; }
  Rational& operator-=(const Rational& o) { v_ -= o.v_; return *this; }
  Rational& operator*=(const Rational& o) { v_ *= o.v_; return *this; }
  Rational& operator/=(const Rational& o) {
    if (o.v_ == 0) throw std::domain_error("rational division by zero");
    v_ /= o.v_;
    return *this;
  }
  friend Rational operator+(Rational a, const Rational& b) { return a += b; }
  friend Rational operator-(Rational a, const Rational& b) { return a -= b; }
  friend Rational operator*(Rational a, const Rational& b) { return a *= b; }
  friend Rational operator/(Rational a, const Rational& b) { return a /= b; }
  Rational operator-() const { Rational r; r.v_ = -v_; return r; }

  friend bool operator==(const Rational& a, const Rational& b) { return cmp(a.v_, b.v_) == 0; }
  friend std::strong_ordering operator<=>(const Rational& a, const Rational& b) {
    int c = cmp(a.v_, b.v_);
    return c < 0 ? std::strong_ordering::less
                 : (c > 0 ? std::strong_ordering::greater : std::strong_ordering::equal);
  }

  const mpq_class& raw() const { return v_; }

 private:
  mpq_class v_{0};
};

inline Rational max(const Rational& a, const Rational& b) { return a < b ? b : a; }
inline Rational min(const Rational& a, const Rational& b) { return b < a ? b : a; }

}  // namespace blockswap
