#include "crgg/exact_sequence.hpp"

#include <gmp.h>

#include <cmath>
#include <stdexcept>
#include <string>
#include <vector>

namespace crgg {

namespace {

// Multiplies t by f_k = q * 2^k - 2p in place. Shift-and-subtract beats a general
// product because f_k has just two sparse components.
void mul_fk(mpz_ptr t, mpz_srcptr q, mpz_srcptr two_p, unsigned long k, mpz_ptr scratch) {
  mpz_mul_2exp(scratch, t, k);
  mpz_mul(scratch, scratch, q);
  mpz_mul(t, t, two_p);
  mpz_sub(t, scratch, t);
}

}  // namespace

ExactSequence compute_sequence(const Rational& phi, int n_max) {
  if (!(Rational(0) < phi && phi < Rational(1, 2))) {
    throw std::domain_error("compute_sequence: phi must lie in (0, 1/2); got " + phi.str());
  }
  if (n_max < 1) throw std::domain_error("compute_sequence: n_max must be >= 1");

  // phi = p/q canonical. Substituting c_n = a_n * Q_n with Q_n = prod_{k<=n} f_k,
  // f_k = q 2^k - 2p, clears all denominators:
  //   c_n = (q - p) Q_{n-1} + p * sum_{k=1}^{n-1} C(n,k) c_k prod_{j=k+1}^{n-1} f_j,
  // and the sum evaluates as one Horner pass over the sparse factors f_j.
  const BigInt p = phi.num();
  const BigInt q = phi.den();
  BigInt two_p = p + p;
  BigInt q_minus_p = q - p;

  const std::size_t count = static_cast<std::size_t>(n_max);
  std::vector<BigInt> c(count + 1);
  std::vector<BigInt> row(count + 1);  // binomial row C(n, k), updated in place
  BigInt Q, T, tmp, term;

  // n = 1: f_1 a_1 = q - p, so c_1 = q - p and Q_1 = f_1.
  c[1] = q_minus_p;
  mpz_mul_2exp(Q.raw(), q.raw(), 1);
  mpz_sub(Q.raw(), Q.raw(), two_p.raw());
  row[0] = BigInt(1);
  row[1] = BigInt(1);

  for (std::size_t n = 2; n <= count; ++n) {
    // advance C(n-1, .) -> C(n, .), descending so each source survives
    mpz_set_ui(row[n].raw(), 1);
    for (std::size_t k = n - 1; k >= 1; --k) mpz_add(row[k].raw(), row[k].raw(), row[k - 1].raw());

    // T = sum over k = 1..n-1 by Horner, factor f_k applied when stepping past k
    mpz_mul(T.raw(), row[1].raw(), c[1].raw());
    for (std::size_t k = 2; k <= n - 1; ++k) {
      mul_fk(T.raw(), q.raw(), two_p.raw(), static_cast<unsigned long>(k), tmp.raw());
      mpz_mul(term.raw(), row[k].raw(), c[k].raw());
      mpz_add(T.raw(), T.raw(), term.raw());
    }

    // c_n = (q - p) Q_{n-1} + p T;  then Q_n = Q_{n-1} f_n
    mpz_mul(c[n].raw(), Q.raw(), q_minus_p.raw());
    mpz_mul(term.raw(), T.raw(), p.raw());
    mpz_add(c[n].raw(), c[n].raw(), term.raw());
    mul_fk(Q.raw(), q.raw(), two_p.raw(), static_cast<unsigned long>(n), tmp.raw());
  }

  // reduce a_n = c_n / Q_n once per value; the Q ladder is rebuilt incrementally
  ExactSequence seq;
  seq.phi = phi;
  seq.n_max = n_max;
  seq.values.resize(count);
  BigInt qk(1);
  for (std::size_t n = 1; n <= count; ++n) {
    mul_fk(qk.raw(), q.raw(), two_p.raw(), static_cast<unsigned long>(n), tmp.raw());
    Rational& a = seq.values[n - 1];
    mpz_set(mpq_numref(a.raw()), c[n].raw());
    mpz_set(mpq_denref(a.raw()), qk.raw());
    mpq_canonicalize(a.raw());
    c[n] = BigInt();  // release the ladder entry; keeps peak memory bounded
  }
  return seq;
}

std::vector<double> sequence_asymptotic_ratio(const ExactSequence& seq, const RateConstant& constant) {
  if (!(seq.phi == constant.phi)) {
    throw std::invalid_argument("sequence_asymptotic_ratio: sequence phi " + seq.phi.str() +
                                " does not match constant phi " + constant.phi.str());
  }
  std::vector<double> rho(static_cast<std::size_t>(seq.n_max));
  for (int n = 1; n <= seq.n_max; ++n) {
    const double a = seq.at(n).to_double();
    rho[static_cast<std::size_t>(n) - 1] =
        a * std::pow(static_cast<double>(n), constant.exponent) / constant.value;
  }
  return rho;
}

namespace {

// base^n by binary exponentiation, n >= 0
long double pow_n(long double base, long n) {
  long double r = 1.0L;
  long double b = base;
  for (long e = n; e > 0; e >>= 1) {
    if (e & 1) r *= b;
    b *= b;
  }
  return r;
}

}  // namespace

OracleInterval min_expectation_oracle(const Rational& phi, int n, int depth) {
  if (!(Rational(0) < phi && phi < Rational(1, 2))) {
    throw std::domain_error("min_expectation_oracle: phi must lie in (0, 1/2)");
  }
  if (n < 1) throw std::domain_error("min_expectation_oracle: n must be >= 1");
  if (depth < 1 || depth > 26) {
    throw std::domain_error("min_expectation_oracle: depth must lie in [1, 26]");
  }

  // a_n = int_0^1 (1 - F(t))^n dt. F is flat on deleted gaps: the level-j gaps,
  // left to right, carry F = (2i-1)/2^j and have length phi^(j-1) (1-2phi). What
  // remains after `depth` levels is 2^depth intervals of length phi^depth on which
  // F spans [i/2^depth, (i+1)/2^depth]; bounding F by either end brackets a_n.
  const long double phi_l = static_cast<long double>(phi.num().to_double()) /
                            static_cast<long double>(phi.den().to_double());
  const long double gap_l = 1.0L - 2.0L * phi_l;

  long double gaps_sum = 0.0L;
  long double level_len = gap_l;  // phi^(j-1) (1 - 2 phi)
  for (int j = 1; j <= depth; ++j) {
    const long double m = pow_n(2.0L, j);
    long double inner = 0.0L;
    for (long i = 1; i <= (1L << (j - 1)); ++i) {
      const long double f = static_cast<long double>(2 * i - 1) / m;
      inner += pow_n(1.0L - f, n);
    }
    gaps_sum += level_len * inner;
    level_len *= phi_l;
  }

  const long M = 1L << depth;
  long double res_lo = 0.0L;
  for (long t = 1; t < M; ++t) {
    res_lo += pow_n(static_cast<long double>(t) / static_cast<long double>(M), n);
  }
  const long double res_len = pow_n(phi_l, depth);
  const long double lo = gaps_sum + res_len * res_lo;
  const long double hi = gaps_sum + res_len * (res_lo + 1.0L);

  // widen by more than the worst-case accumulated roundoff of the two sums;
  // still orders of magnitude below the phi^depth bracket width
  const long double slack = 1e-12L;
  OracleInterval out;
  out.lo = static_cast<double>(lo - slack - lo * 1e-15L);
  out.hi = static_cast<double>(hi + slack + hi * 1e-15L);
  return out;
}

}  // namespace crgg
