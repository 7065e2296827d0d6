#pragma once

#include <gmpxx.h>

#include <map>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace hmf {

using Int = mpz_class;
using Rat = mpq_class;

// Exit-code aligned failure classes used by the CLI.
enum class ErrorKind { Validation = 2, Precondition = 3, Internal = 4 };

class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& what) : std::runtime_error(what), kind_(kind) {}
  ErrorKind kind() const { return kind_; }

 private:
  ErrorKind kind_;
};

[[noreturn]] inline void fail(ErrorKind kind, const std::string& what) { throw Error(kind, what); }

Rat make_rat(const Int& num, const Int& den = 1);
std::string rat_str(const Rat& r);
Rat parse_rat(const std::string& s);

/// Truncated Laurent series sum c(e) q^e, exact for all exponents e < prec.
/// Missing keys are zero; no key is stored outside [low, prec).
class QSeries {
 public:
  QSeries() : low_(0), prec_(1) {}
  QSeries(long low, long prec);

  long low() const { return low_; }
  long prec() const { return prec_; }
  const std::map<long, Rat>& coeffs() const { return coeffs_; }

  // Coefficient at e; throws if e >= prec since that value is not known.
  Rat coeff(long e) const;
  void set(long e, const Rat& c);
  void add_to(long e, const Rat& c);

  bool is_zero() const { return coeffs_.empty(); }
  // Exponent of the first nonzero coefficient, or prec if none is known.
  long valuation() const;

  QSeries truncated(long new_prec) const;
  // Shrinks low to the first nonzero exponent (keeps low < prec).
  QSeries normalized() const;

  static QSeries monomial(const Rat& c, long e, long prec);
  static QSeries constant(const Rat& c, long prec) { return monomial(c, 0, prec); }

  bool operator==(const QSeries& o) const;

 private:
  long low_;
  long prec_;
  std::map<long, Rat> coeffs_;
};

QSeries operator+(const QSeries& a, const QSeries& b);
QSeries operator-(const QSeries& a, const QSeries& b);
QSeries operator-(const QSeries& a);
QSeries operator*(const Rat& c, const QSeries& a);
QSeries mul(const QSeries& a, const QSeries& b);
inline QSeries operator*(const QSeries& a, const QSeries& b) { return mul(a, b); }
QSeries invert_unit(const QSeries& a);
QSeries pow(const QSeries& a, long n);
// Multiply by q^k.
QSeries shift(const QSeries& a, long k);
// Substitute q -> q^k, i.e. f(tau) -> f(k tau).
QSeries scale_arg(const QSeries& a, long k);

// Agreement on the common precision window.
bool agree(const QSeries& a, const QSeries& b);

struct EtaQuotient {
  QSeries series;    // carries q^{floor(offset)}
  Rat frac_offset;   // offset - floor(offset), in [0,1)
};

/// prod_delta eta(delta tau)^{r_delta}; `prec` bounds the returned exponents.
EtaQuotient eta_quotient(const std::vector<std::pair<long, long>>& spec, long prec);

enum class Level1 { E4, E6, Delta, j };
QSeries level1_form(Level1 which, long prec);

/// E_{2k} = -B_{2k}/(4k) + sum sigma_{2k-1}(n) q^n.
QSeries eisenstein_level1(long k, long prec);
/// Same series rescaled to constant term 1.
QSeries eisenstein_level1_normalized(long weight, long prec);

Rat bernoulli(long n);
Rat bernoulli_poly(long n, const Rat& x);
Int divisor_sigma(long s, long n);

}  // namespace hmf
