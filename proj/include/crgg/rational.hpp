#pragma once

#include <gmp.h>

#include <cstdint>
#include <stdexcept>
#include <string>
#include <string_view>
#include <utility>

namespace crgg {

/// Arbitrary-precision integer, value semantics over GMP's mpz_t.
class BigInt {
 public:
  BigInt() { mpz_init(z_); }
  BigInt(long v) { mpz_init_set_si(z_, v); }  // NOLINT: implicit by design
  explicit BigInt(std::string_view s) {
    mpz_init(z_);
    if (mpz_set_str(z_, std::string(s).c_str(), 10) != 0) {
      mpz_clear(z_);
      throw std::invalid_argument("BigInt: malformed integer literal '" + std::string(s) + "'");
    }
  }
  BigInt(const BigInt& o) { mpz_init_set(z_, o.z_); }
  BigInt(BigInt&& o) noexcept {
    mpz_init(z_);
    mpz_swap(z_, o.z_);
  }
  BigInt& operator=(const BigInt& o) {
    if (this != &o) mpz_set(z_, o.z_);
    return *this;
  }
  BigInt& operator=(BigInt&& o) noexcept {
    mpz_swap(z_, o.z_);
    return *this;
  }
  ~BigInt() { mpz_clear(z_); }

  mpz_ptr raw() { return z_; }
  mpz_srcptr raw() const { return z_; }

  friend BigInt operator+(const BigInt& a, const BigInt& b) {
    BigInt r;
    mpz_add(r.z_, a.z_, b.z_);
    return r;
  }
  friend BigInt operator-(const BigInt& a, const BigInt& b) {
    BigInt r;
    mpz_sub(r.z_, a.z_, b.z_);
    return r;
  }
  friend BigInt operator*(const BigInt& a, const BigInt& b) {
    BigInt r;
    mpz_mul(r.z_, a.z_, b.z_);
    return r;
  }
  BigInt& operator+=(const BigInt& o) {
    mpz_add(z_, z_, o.z_);
    return *this;
  }
  BigInt& operator*=(const BigInt& o) {
    mpz_mul(z_, z_, o.z_);
    return *this;
  }

  friend bool operator==(const BigInt& a, const BigInt& b) { return mpz_cmp(a.z_, b.z_) == 0; }
  friend bool operator<(const BigInt& a, const BigInt& b) { return mpz_cmp(a.z_, b.z_) < 0; }

  static BigInt binomial(unsigned long n, unsigned long k) {
    BigInt r;
    mpz_bin_uiui(r.z_, n, k);
    return r;
  }
  static BigInt pow(const BigInt& base, unsigned long e) {
    BigInt r;
    mpz_pow_ui(r.z_, base.z_, e);
    return r;
  }

  std::string str() const {
    char* s = mpz_get_str(nullptr, 10, z_);
    std::string out(s);
    void (*freefn)(void*, size_t);
    mp_get_memory_functions(nullptr, nullptr, &freefn);
    freefn(s, out.size() + 1);
    return out;
  }
  double to_double() const { return mpz_get_d(z_); }
  bool fits_ulong() const { return mpz_fits_ulong_p(z_) != 0; }
  unsigned long to_ulong() const { return mpz_get_ui(z_); }

 private:
  mpz_t z_;
};

/// Exact rational, always stored in canonical (reduced, positive-denominator) form.
class Rational {
 public:
  Rational() { mpq_init(q_); }
  Rational(long num, long den) {
    if (den == 0) throw std::invalid_argument("Rational: zero denominator");
    mpq_init(q_);
    mpq_set_si(q_, num, 1);
    mpq_t d;
    mpq_init(d);
    mpq_set_si(d, den, 1);
    mpq_div(q_, q_, d);
    mpq_clear(d);
  }
  Rational(long v) : Rational(v, 1) {}  // NOLINT: implicit by design
  Rational(const BigInt& num, const BigInt& den) {
    if (mpz_sgn(den.raw()) == 0) throw std::invalid_argument("Rational: zero denominator");
    mpq_init(q_);
    mpz_set(mpq_numref(q_), num.raw());
    mpz_set(mpq_denref(q_), den.raw());
    mpq_canonicalize(q_);
  }
  /// Parses "p/q" or "p" (base 10). Rejects anything else, including decimals.
  explicit Rational(std::string_view s) {
    mpq_init(q_);
    std::string t(s);
    if (t.empty() || mpq_set_str(q_, t.c_str(), 10) != 0 || mpz_sgn(mpq_denref(q_)) == 0) {
      mpq_clear(q_);
      throw std::invalid_argument("Rational: expected 'p/q' with integer p, q; got '" + t + "'");
    }
    mpq_canonicalize(q_);
  }
  Rational(const Rational& o) {
    mpq_init(q_);
    mpq_set(q_, o.q_);
  }
  Rational(Rational&& o) noexcept {
    mpq_init(q_);
    mpq_swap(q_, o.q_);
  }
  Rational& operator=(const Rational& o) {
    if (this != &o) mpq_set(q_, o.q_);
    return *this;
  }
  Rational& operator=(Rational&& o) noexcept {
    mpq_swap(q_, o.q_);
    return *this;
  }
  ~Rational() { mpq_clear(q_); }

  /// Exact conversion of an IEEE double (binary fraction).
  static Rational from_double(double x) {
    Rational r;
    mpq_set_d(r.q_, x);
    return r;
  }

  mpq_ptr raw() { return q_; }
  mpq_srcptr raw() const { return q_; }

  BigInt num() const {
    BigInt b;
    mpz_set(b.raw(), mpq_numref(q_));
    return b;
  }
  BigInt den() const {
    BigInt b;
    mpz_set(b.raw(), mpq_denref(q_));
    return b;
  }

  friend Rational operator+(const Rational& a, const Rational& b) {
    Rational r;
    mpq_add(r.q_, a.q_, b.q_);
    return r;
  }
  friend Rational operator-(const Rational& a, const Rational& b) {
    Rational r;
    mpq_sub(r.q_, a.q_, b.q_);
    return r;
  }
  friend Rational operator*(const Rational& a, const Rational& b) {
    Rational r;
    mpq_mul(r.q_, a.q_, b.q_);
    return r;
  }
  friend Rational operator/(const Rational& a, const Rational& b) {
    if (mpq_sgn(b.q_) == 0) throw std::domain_error("Rational: division by zero");
    Rational r;
    mpq_div(r.q_, a.q_, b.q_);
    return r;
  }
  Rational operator-() const {
    Rational r;
    mpq_neg(r.q_, q_);
    return r;
  }
  Rational& operator+=(const Rational& o) {
    mpq_add(q_, q_, o.q_);
    return *this;
  }
  Rational& operator-=(const Rational& o) {
    mpq_sub(q_, q_, o.q_);
    return *this;
  }
  Rational& operator*=(const Rational& o) {
    mpq_mul(q_, q_, o.q_);
    return *this;
  }

  friend bool operator==(const Rational& a, const Rational& b) { return mpq_equal(a.q_, b.q_) != 0; }
  friend bool operator!=(const Rational& a, const Rational& b) { return !(a == b); }
  friend bool operator<(const Rational& a, const Rational& b) { return mpq_cmp(a.q_, b.q_) < 0; }
  friend bool operator<=(const Rational& a, const Rational& b) { return mpq_cmp(a.q_, b.q_) <= 0; }
  friend bool operator>(const Rational& a, const Rational& b) { return b < a; }
  friend bool operator>=(const Rational& a, const Rational& b) { return b <= a; }

  int sign() const { return mpq_sgn(q_); }

  Rational pow(unsigned long e) const {
    Rational r;
    mpz_pow_ui(mpq_numref(r.q_), mpq_numref(q_), e);
    mpz_pow_ui(mpq_denref(r.q_), mpq_denref(q_), e);
    return r;  // powers of a canonical value stay canonical
  }

  double to_double() const { return mpq_get_d(q_); }

  /// "p/q", or just "p" when the denominator is 1.
  std::string str() const {
    char* s = mpq_get_str(nullptr, 10, q_);
    std::string out(s);
    void (*freefn)(void*, size_t);
    mp_get_memory_functions(nullptr, nullptr, &freefn);
    freefn(s, out.size() + 1);
    return out;
  }

 private:
  mpq_t q_;
};

}  // namespace crgg
