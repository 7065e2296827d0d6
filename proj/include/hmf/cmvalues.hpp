#pragma once

#include <map>
#include <string>
#include <vector>

#include <boost/multiprecision/cpp_bin_float.hpp>

#include "hmf/plusspace.hpp"
#include "hmf/quadfield.hpp"

namespace hmf {

struct GenusChar {
  long d1 = 0, d2 = 0;
  long D() const { return d1 * d2; }
};

GenusChar make_genus_char(long d1, long d2);
/// Multiplicative extension of eps(l) = (d1/l) if l does not divide d1, else (d2/l).
int genus_char(const GenusChar& gc, long n);

/// +-prod l^{e_l}; sign 0 means unknown.
struct FactoredValue {
  int sign = 0;
  std::map<long, Rat> exponents;

  double log_abs() const;
  // "2^20 * 3^10"; the sign is not included.
  std::string str() const;
  // str() prefixed by "+ ", "- " or "+- " (unknown sign).
  std::string signed_str() const;
  bool operator==(const FactoredValue& o) const { return sign == o.sign && exponents == o.exponents; }
};

FactoredValue gross_zagier_J2(long d1, long d2);

using BigFloat = boost::multiprecision::number<boost::multiprecision::cpp_bin_float<60>>;
struct BigComplex {
  BigFloat re, im;
};

struct ReducedForm {
  long a, b, c;
};
/// Reduced positive definite forms [a, b, c] of discriminant d.
std::vector<ReducedForm> reduced_forms(long d);
long unit_count(long d);
/// j at (-b + sqrt d)/(2a) for each reduced form of discriminant d.
std::vector<BigComplex> j_cm_oracle(long d, int digits = 40);
/// log |prod_{tau1, tau2} (j(tau1) - j(tau2))|^{8/(w1 w2)}, the log of J(d1, d2)^2.
double gz_oracle_log(long d1, long d2);

enum class SplitKind { Split, Inert, Ramified };

struct CMFieldData {
  long p = 0, q = 0;
  QuadElem Delta;        // in F = Q(sqrt p)
  QuadElem delta_tilde;  // in Ftilde = Q(sqrt q), Ktilde = Ftilde(sqrt delta_tilde)
  QuadIdeal rel_disc;
  long W_Ktilde = 2;
};

CMFieldData cm_field_setup(long p, long q, const QuadElem& Delta);
SplitKind split_kind(const CMFieldData& data, const PrimeIdeal& l);
long rho(const CMFieldData& data, const QuadIdeal& a);
/// B_t as l -> multiplicity of log l.
std::map<long, Rat> bt(const CMFieldData& data, const QuadElem& t);
/// b_m(l) as l -> multiplicity of log l.
std::map<long, Rat> b_m(const CMFieldData& data, long m);

struct CMValue {
  std::map<long, Rat> log_terms;
  FactoredValue value;
};
CMValue by_cm_value(const CMFieldData& data, const PlusForm& f);

struct BoundCheck {
  bool ok = true;
  std::vector<long> offending;
};
BoundCheck prime_bound_check(const CMFieldData& data, const PlusForm& f, const CMValue& v);

}  // namespace hmf
