#include "hmf/qseries.hpp"

#include <algorithm>
#include <mutex>

namespace hmf {

Rat make_rat(const Int& num, const Int& den) {
  Rat r(num, den);
  r.canonicalize();
  return r;
}

std::string rat_str(const Rat& r) {
  if (r.get_den() == 1) return r.get_num().get_str();
  return r.get_num().get_str() + "/" + r.get_den().get_str();
}

Rat parse_rat(const std::string& s) {
  Rat r;
  if (s.empty() || r.set_str(s, 10) != 0 || r.get_den() == 0)
    fail(ErrorKind::Validation, "not a rational: '" + s + "'");
  r.canonicalize();
  return r;
}

QSeries::QSeries(long low, long prec) : low_(low), prec_(prec) {
  if (prec <= low) fail(ErrorKind::Internal, "QSeries requires prec > low");
}

Rat QSeries::coeff(long e) const {
  if (e >= prec_)
    fail(ErrorKind::Internal, "coefficient q^" + std::to_string(e) + " beyond precision " + std::to_string(prec_));
  auto it = coeffs_.find(e);
  return it == coeffs_.end() ? Rat(0) : it->second;
}

void QSeries::set(long e, const Rat& c) {
  if (e < low_ || e >= prec_) {
    if (c == 0) return;
    fail(ErrorKind::Internal, "exponent outside QSeries window");
  }
  if (c == 0)
    coeffs_.erase(e);
  else
    coeffs_[e] = c;
}

void QSeries::add_to(long e, const Rat& c) {
  if (c == 0) return;
  if (e < low_ || e >= prec_) fail(ErrorKind::Internal, "exponent outside QSeries window");
  auto [it, inserted] = coeffs_.try_emplace(e, c);
  if (!inserted) {
    it->second += c;
    if (it->second == 0) coeffs_.erase(it);
  }
}

long QSeries::valuation() const { return coeffs_.empty() ? prec_ : coeffs_.begin()->first; }

QSeries QSeries::truncated(long new_prec) const {
  long p = std::min(prec_, new_prec);
  QSeries r(std::min(low_, p - 1), p);
  for (auto& [e, c] : coeffs_)
    if (e < p) r.coeffs_.emplace(e, c);
  return r;
}

QSeries QSeries::normalized() const {
  QSeries r = *this;
  r.low_ = std::min(valuation(), prec_ - 1);
  return r;
}

QSeries QSeries::monomial(const Rat& c, long e, long prec) {
  QSeries r(std::min(e, prec - 1), prec);
  if (e < prec) r.set(e, c);
  return r;
}

bool QSeries::operator==(const QSeries& o) const {
  return prec_ == o.prec_ && coeffs_ == o.coeffs_;
}

QSeries operator+(const QSeries& a, const QSeries& b) {
  long prec = std::min(a.prec(), b.prec());
  long low = std::min({a.low(), b.low(), prec - 1});
  QSeries r(low, prec);
  for (auto& [e, c] : a.coeffs())
    if (e < prec) r.add_to(e, c);
  for (auto& [e, c] : b.coeffs())
    if (e < prec) r.add_to(e, c);
  return r;
}

QSeries operator-(const QSeries& a) { return Rat(-1) * a; }
QSeries operator-(const QSeries& a, const QSeries& b) { return a + (-b); }

QSeries operator*(const Rat& c, const QSeries& a) {
  QSeries r(a.low(), a.prec());
  if (c == 0) return r;
  for (auto& [e, x] : a.coeffs()) r.set(e, c * x);
  return r;
}

QSeries mul(const QSeries& a, const QSeries& b) {
  long low = a.low() + b.low();
  long prec = std::min(a.prec() + b.low(), b.prec() + a.low());
  QSeries r(low, prec);
  std::map<long, Rat> acc;
  Rat t;
  for (auto& [ea, ca] : a.coeffs()) {
    if (ea + b.low() >= prec) break;
    for (auto& [eb, cb] : b.coeffs()) {
      long e = ea + eb;
      if (e >= prec) break;
      t = ca * cb;
      acc[e] += t;
    }
  }
  for (auto& [e, c] : acc) r.set(e, c);
  return r;
}

QSeries invert_unit(const QSeries& a) {
  long v = a.low();
  Rat lead = a.coeff(v);
  if (lead == 0) fail(ErrorKind::Precondition, "non-unit series");
  // a = q^v u with u known to relative precision n.
  long n = a.prec() - v;
  std::vector<Rat> u(n), w(n);
  for (auto& [e, c] : a.coeffs()) u[e - v] = c;
  Rat inv = 1 / lead;
  w[0] = inv;
  for (long k = 1; k < n; ++k) {
    Rat s = 0;
    for (long i = 1; i <= k; ++i)
      if (u[i] != 0) s += u[i] * w[k - i];
    w[k] = -s * inv;
  }
  QSeries r(-v, n - v);
  for (long k = 0; k < n; ++k) r.set(k - v, w[k]);
  return r;
}

QSeries pow(const QSeries& a, long n) {
  if (n < 0) return pow(invert_unit(a), -n);
  if (n == 0) return QSeries::constant(1, a.prec() - a.low());
  QSeries base = a;
  QSeries result;
  bool first = true;
  while (n > 0) {
    if (n & 1) {
      result = first ? base : mul(result, base);
      first = false;
    }
    n >>= 1;
    if (n) base = mul(base, base);
  }
  return result;
}

QSeries shift(const QSeries& a, long k) {
  QSeries r(a.low() + k, a.prec() + k);
  for (auto& [e, c] : a.coeffs()) r.set(e + k, c);
  return r;
}

QSeries scale_arg(const QSeries& a, long k) {
  if (k <= 0) fail(ErrorKind::Internal, "scale_arg needs k > 0");
  // Nonzero exponents are multiples of k, so everything below prec*k is known.
  QSeries r(a.low() * k, a.prec() * k);
  for (auto& [e, c] : a.coeffs()) r.set(e * k, c);
  return r;
}

bool agree(const QSeries& a, const QSeries& b) {
  long p = std::min(a.prec(), b.prec());
  return a.truncated(p).coeffs() == b.truncated(p).coeffs();
}

Int divisor_sigma(long s, long n) {
  Int acc = 0, t;
  for (long d = 1; d * d <= n; ++d) {
    if (n % d) continue;
    mpz_ui_pow_ui(t.get_mpz_t(), d, s);
    acc += t;
    long e = n / d;
    if (e != d) {
      mpz_ui_pow_ui(t.get_mpz_t(), e, s);
      acc += t;
    }
  }
  return acc;
}

EtaQuotient eta_quotient(const std::vector<std::pair<long, long>>& spec, long prec) {
  Rat offset = 0;
  for (auto& [delta, r] : spec) {
    if (delta <= 0) fail(ErrorKind::Validation, "eta quotient scale must be positive");
    offset += make_rat(delta * r, 24);
  }
  offset.canonicalize();
  Int fl;
  mpz_fdiv_q(fl.get_mpz_t(), offset.get_num_mpz_t(), offset.get_den_mpz_t());
  long shift_by = fl.get_si();
  Rat frac = offset - Rat(fl);

  // prod (1-q^{delta n})^r via the logarithmic derivative recurrence
  // N a_N = sum_j c_j a_{N-j}, c_j = -sum_delta r delta sigma_1(j/delta).
  long n = std::max<long>(prec - shift_by, 1);
  std::vector<Int> c(n, 0), a(n, 0);
  for (auto& [delta, r] : spec)
    for (long j = delta; j < n; j += delta) c[j] -= Int(r * delta) * divisor_sigma(1, j / delta);
  a[0] = 1;
  for (long N = 1; N < n; ++N) {
    Int s = 0;
    for (long j = 1; j <= N; ++j)
      if (c[j] != 0) s += c[j] * a[N - j];
    a[N] = s / N;
  }
  QSeries out(shift_by, shift_by + n);
  for (long k = 0; k < n; ++k) out.set(k + shift_by, Rat(a[k]));
  return {out.truncated(std::max(prec, shift_by + 1)), frac};
}

namespace {
std::mutex bern_mu;
std::vector<Rat> bern_cache{Rat(1)};
}  // namespace

Rat bernoulli(long n) {
  if (n < 0) fail(ErrorKind::Internal, "negative Bernoulli index");
  std::lock_guard<std::mutex> lk(bern_mu);
  // B_1 = -1/2 convention; sum_{k<=m} C(m+1,k) B_k = 0.
  while ((long)bern_cache.size() <= n) {
    long m = bern_cache.size();
    Rat s = 0;
    Int binom = 1;
    for (long k = 0; k < m; ++k) {
      s += Rat(binom) * bern_cache[k];
      binom = binom * (m + 1 - k) / (k + 1);
    }
    Rat b = -s / Rat(m + 1);
    b.canonicalize();
    bern_cache.push_back(b);
  }
  return bern_cache[n];
}

Rat bernoulli_poly(long n, const Rat& x) {
  Rat s = 0, xp = 1;
  Int binom = 1;
  // B_n(x) = sum_k C(n,k) B_{n-k} x^k
  for (long k = 0; k <= n; ++k) {
    s += Rat(binom) * bernoulli(n - k) * xp;
    xp *= x;
    binom = binom * (n - k) / (k + 1);
  }
  s.canonicalize();
  return s;
}

QSeries eisenstein_level1(long k, long prec) {
  QSeries r(0, std::max<long>(prec, 1));
  r.set(0, -bernoulli(2 * k) / Rat(4 * k));
  for (long n = 1; n < prec; ++n) r.set(n, Rat(divisor_sigma(2 * k - 1, n)));
  return r;
}

QSeries eisenstein_level1_normalized(long weight, long prec) {
  if (weight % 2 || weight < 4) fail(ErrorKind::Validation, "level-1 Eisenstein weight must be even >= 4");
  QSeries e = eisenstein_level1(weight / 2, prec);
  return (1 / e.coeff(0)) * e;
}

QSeries level1_form(Level1 which, long prec) {
  switch (which) {
    case Level1::E4:
      return eisenstein_level1_normalized(4, prec);
    case Level1::E6:
      return eisenstein_level1_normalized(6, prec);
    case Level1::Delta:
      return eta_quotient({{1, 24}}, prec).series;
    case Level1::j: {
      QSeries e4 = eisenstein_level1_normalized(4, prec + 2);
      QSeries d = eta_quotient({{1, 24}}, prec + 2).series;
      return mul(pow(e4, 3), invert_unit(d)).truncated(prec);
    }
  }
  fail(ErrorKind::Internal, "unknown level-1 form");
}

}  // namespace hmf
