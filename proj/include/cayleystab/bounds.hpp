#pragma once

// Closed-form bounds h_δ(r), k_δ(r) and the per-class proportion bounds,
// evaluated with MPFR. Every bound is a sum of powers of two, so values are
// carried as base-2 logarithms; 2^(-r/24) at large r would underflow any
// fixed exponent range, while its logarithm is an ordinary number.
// Each elementary operation rounds to nearest, so a term carries at most a
// few ulps of error at the working precision.

#include <mpfr.h>

#include <cctype>
#include <cstdio>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "cayleystab/abelian_group.hpp"
#include "cayleystab/error.hpp"

namespace cayleystab {

inline constexpr mpfr_prec_t kDefaultPrecision = 256;

/// RAII wrapper over mpfr_t; all results round to nearest at the precision of
/// the left operand.
class BigReal {
 public:
  explicit BigReal(mpfr_prec_t prec = kDefaultPrecision) {
    mpfr_init2(v_, prec);
    mpfr_set_zero(v_, 1);
  }
  BigReal(long v, mpfr_prec_t prec) : BigReal(prec) { mpfr_set_si(v_, v, MPFR_RNDN); }
  BigReal(const BigInt& v, mpfr_prec_t prec) : BigReal(prec) {
    const std::string s = v.str();
    mpfr_set_str(v_, s.c_str(), 10, MPFR_RNDN);
  }
  BigReal(const BigReal& o) : BigReal(mpfr_get_prec(o.v_)) { mpfr_set(v_, o.v_, MPFR_RNDN); }
  BigReal(BigReal&& o) noexcept : BigReal(mpfr_get_prec(o.v_)) { mpfr_swap(v_, o.v_); }
  BigReal& operator=(BigReal o) noexcept {
    mpfr_swap(v_, o.v_);
    return *this;
  }
  ~BigReal() { mpfr_clear(v_); }

  mpfr_prec_t precision() const { return mpfr_get_prec(v_); }
  mpfr_ptr get() { return v_; }
  mpfr_srcptr get() const { return v_; }

  friend BigReal operator+(const BigReal& a, const BigReal& b) { return a.binary(b, mpfr_add); }
  friend BigReal operator-(const BigReal& a, const BigReal& b) { return a.binary(b, mpfr_sub); }
  friend BigReal operator*(const BigReal& a, const BigReal& b) { return a.binary(b, mpfr_mul); }
  friend BigReal operator/(const BigReal& a, const BigReal& b) { return a.binary(b, mpfr_div); }
  friend BigReal operator+(const BigReal& a, long b) { return a + BigReal(b, a.precision()); }
  friend BigReal operator-(const BigReal& a, long b) { return a - BigReal(b, a.precision()); }
  friend BigReal operator*(long a, const BigReal& b) { return BigReal(a, b.precision()) * b; }
  BigReal operator-() const {
    BigReal out(precision());
    mpfr_neg(out.v_, v_, MPFR_RNDN);
    return out;
  }

  friend bool operator<(const BigReal& a, const BigReal& b) { return mpfr_less_p(a.v_, b.v_) != 0; }
  friend bool operator>(const BigReal& a, const BigReal& b) { return b < a; }
  friend bool operator<=(const BigReal& a, const BigReal& b) { return mpfr_lessequal_p(a.v_, b.v_) != 0; }
  friend bool operator>=(const BigReal& a, const BigReal& b) { return b <= a; }
  friend bool operator==(const BigReal& a, const BigReal& b) { return mpfr_equal_p(a.v_, b.v_) != 0; }
  int sign() const { return mpfr_sgn(v_); }

  BigReal log2() const { return unary(mpfr_log2); }
  BigReal exp2() const { return unary(mpfr_exp2); }
  BigReal log1p() const { return unary(mpfr_log1p); }
  BigReal square() const { return *this * *this; }
  static BigReal pow(const BigReal& a, const BigReal& b) { return a.binary(b, mpfr_pow); }
  static BigReal ln2(mpfr_prec_t prec) {
    BigReal out(prec);
    mpfr_const_log2(out.v_, MPFR_RNDN);
    return out;
  }

  double to_double() const { return mpfr_get_d(v_, MPFR_RNDN); }

  /// Scientific notation with `digits` significant digits.
  std::string to_string(int digits = 20) const {
    char* buf = nullptr;
    mpfr_asprintf(&buf, "%.*Re", digits - 1, v_);
    std::string out = buf ? buf : "";
    mpfr_free_str(buf);
    return out;
  }

 private:
  using Binary = int (*)(mpfr_ptr, mpfr_srcptr, mpfr_srcptr, mpfr_rnd_t);
  using Unary = int (*)(mpfr_ptr, mpfr_srcptr, mpfr_rnd_t);

  BigReal binary(const BigReal& b, Binary f) const {
    BigReal out(precision());
    f(out.v_, v_, b.v_, MPFR_RNDN);
    return out;
  }
  BigReal unary(Unary f) const {
    BigReal out(precision());
    f(out.v_, v_, MPFR_RNDN);
    return out;
  }

  mpfr_t v_;
};

/// log₂(2^a + 2^b) = max + log₂(1 + 2^{-|a-b|}).
inline BigReal log2_sum(const BigReal& a, const BigReal& b) {
  const BigReal& hi = a >= b ? a : b;
  const BigReal& lo = a >= b ? b : a;
  const BigReal d = (lo - hi).exp2();  // underflows to 0 harmlessly
  return hi + (d.log1p() / BigReal::ln2(a.precision()));
}

inline BigReal log2_sum(const std::vector<BigReal>& terms) {
  BigReal acc = terms.at(0);
  for (std::size_t i = 1; i < terms.size(); ++i) acc = log2_sum(acc, terms[i]);
  return acc;
}

/// δ as an exact fraction num/den, parsed from a decimal literal.
struct Delta {
  long long num = 1;
  long long den = 10;

  static Delta parse(std::string_view text) {
    Delta d{0, 1};
    bool dot = false, digits = false;
    for (char c : text) {
      if (c == '.' && !dot) {
        dot = true;
        continue;
      }
      if (!std::isdigit(static_cast<unsigned char>(c))) throw DomainError("delta: not a decimal number: " + std::string(text));
      if (d.den > 100'000'000'000LL) throw DomainError("delta: too many digits");
      digits = true;
      d.num = d.num * 10 + (c - '0');
      if (dot) d.den *= 10;
    }
    if (!digits) throw DomainError("delta: not a decimal number: " + std::string(text));
    d.validate();
    return d;
  }

  void validate() const {
    // 0 < num/den < 1/2
    if (den <= 0 || num <= 0 || 2 * num >= den) throw DomainError("delta must lie strictly between 0 and 1/2");
  }

  BigReal value(mpfr_prec_t prec) const { return BigReal(num, prec) / BigReal(den, prec); }
  double to_double() const { return static_cast<double>(num) / static_cast<double>(den); }

  std::string to_string() const {
    // den is a power of ten by construction of parse(); fall back to a fraction otherwise.
    long long d = den;
    int places = 0;
    while (d % 10 == 0) {
      d /= 10;
      ++places;
    }
    if (d != 1) return std::to_string(num) + "/" + std::to_string(den);
    std::string digits = std::to_string(num);
    if (places == 0) return digits;
    while (static_cast<int>(digits.size()) <= places) digits.insert(digits.begin(), '0');
    digits.insert(digits.end() - places, '.');
    return digits;
  }
};

/// A bound 2^{log2} with its vacuity flag (bound > 1).
struct BoundValue {
  BigReal log2;
  bool vacuous() const { return log2.sign() > 0; }
  BigReal value() const { return log2.exp2(); }
};

namespace detail {

/// Bounds at large r have exponents far outside MPFR's default range.
inline void widen_exponent_range() {
  static const bool done = [] {
    mpfr_set_emin(mpfr_get_emin_min());
    mpfr_set_emax(mpfr_get_emax_max());
    return true;
  }();
  (void)done;
}

/// Shared quantities for one (r, δ): L = log₂ r, r^δ, r^{2δ}.
struct BoundTerms {
  BigReal r, l, l2, rd, r2d, delta;

  BoundTerms(const BigReal& r_value, const Delta& d, mpfr_prec_t prec)
      : r(r_value), l(r_value.log2()), l2(l.square()), rd(prec), r2d(prec), delta(d.value(prec)) {
    rd = BigReal::pow(r, delta);
    r2d = rd.square();
  }

  BigReal frac(long a, long b) const { return BigReal(a, r.precision()) / BigReal(b, r.precision()); }

  /// -r/24 + (r^{2δ} + r^δ + 6) L² + coeff·L + c
  BigReal big_exponent(const BigReal& coeff_l, long c) const {
    return -(r / BigReal(24, r.precision())) + (r2d + rd + 6) * l2 + coeff_l * l + c;
  }
  /// -(2/25) r^δ + 3L + 1
  BigReal small_exponent() const { return -(frac(2, 25) * rd) + 3 * l + 1; }
};

inline BigReal real_r(const BigInt& r, mpfr_prec_t prec) {
  widen_exponent_range();
  if (r < 2) throw DomainError("bounds: r must be at least 2");
  return BigReal(r, prec);
}

}  // namespace detail

struct HTerms {
  BigReal first;   // log₂ of 2^{-r/24 + (r^{2δ}+r^δ+6)L² + 5L + 4}
  BigReal second;  // log₂ of 2^{-(2/25) r^δ + 3L + 1}
  BigReal total;   // log₂ h_δ(r)
};

inline HTerms h_terms(const BigReal& r, const Delta& delta) {
  delta.validate();
  detail::widen_exponent_range();
  const detail::BoundTerms t(r, delta, r.precision());
  HTerms out{t.big_exponent(BigReal(5, r.precision()), 4), t.small_exponent(), BigReal(r.precision())};
  out.total = log2_sum(out.first, out.second);
  return out;
}

/// log₂ h_δ(r).
inline BigReal h_delta(const BigInt& r, const Delta& delta, mpfr_prec_t prec = kDefaultPrecision) {
  return h_terms(detail::real_r(r, prec), delta).total;
}

/// log₂ k_δ(r), or nothing when h_δ(r) ≥ 1 (the formula is undefined there).
inline std::optional<BigReal> k_delta_from_h(const BigReal& r, const BigReal& log2_h) {
  if (log2_h.sign() >= 0) return std::nullopt;
  const mpfr_prec_t prec = r.precision();
  const BigReal l = r.log2();
  // log₂(1 - h) = log1p(-h) / ln 2
  const BigReal log2_one_minus_h = (-log2_h.exp2()).log1p() / BigReal::ln2(prec);
  return log2_h - log2_one_minus_h + l.square() + l;
}

inline std::optional<BigReal> k_delta(const BigInt& r, const Delta& delta, mpfr_prec_t prec = kDefaultPrecision) {
  const BigReal rr = detail::real_r(r, prec);
  return k_delta_from_h(rr, h_terms(rr, delta).total);
}

/// Names of the per-class bounds, in report order.
inline const std::vector<std::string>& bound_names() {
  static const std::vector<std::string> names = {"trivial-disconnected", "trivial-bipartite", "trivial-twins", "S-minus-S1",
                                                 "S3", "S4", "S5"};
  return names;
}

/// log₂ of the three trivial-instability bounds (disconnected, connected and
/// bipartite, not twin-free); defined for every r ≥ 1.
inline std::map<std::string, BoundValue> trivial_instability_bounds(const BigInt& r, mpfr_prec_t prec = kDefaultPrecision) {
  detail::widen_exponent_range();
  if (r < 1) throw DomainError("bounds: r must be positive");
  const BigReal rr(r, prec);
  const BigReal l = rr.log2();
  const BigReal quarter = -(rr / BigReal(4, prec)) + l.square();
  std::map<std::string, BoundValue> out;
  out.emplace("trivial-disconnected", BoundValue{quarter});
  out.emplace("trivial-bipartite", BoundValue{quarter});
  out.emplace("trivial-twins", BoundValue{-(rr / BigReal(6, prec)) + l + 1});
  return out;
}

struct BoundProfile {
  BigInt r;
  Delta delta;
  mpfr_prec_t precision = kDefaultPrecision;
  HTerms h;
  std::optional<BigReal> k;  // log₂ k; empty when undefined
  std::map<std::string, BoundValue> bounds;
  BigReal component_sum;     // log₂ of the sum of the S-minus-S1, S3, S4, S5 bounds
  bool first_below_second = false;
  bool component_sum_within_h = false;

  bool h_vacuous() const { return h.total.sign() > 0; }
};

inline BoundProfile lemma_bound_table(const BigInt& r, const Delta& delta, mpfr_prec_t prec = kDefaultPrecision) {
  delta.validate();
  const BigReal rr = detail::real_r(r, prec);
  const detail::BoundTerms t(rr, delta, prec);
  BoundProfile p{r, delta, prec, h_terms(rr, delta), std::nullopt, {}, BigReal(prec)};
  p.k = k_delta_from_h(rr, p.h.total);

  auto put = [&](const std::string& name, BigReal log2) { p.bounds.emplace(name, BoundValue{std::move(log2)}); };
  p.bounds = trivial_instability_bounds(r, prec);
  put("S-minus-S1", -(rr / BigReal(6, prec)) + t.l2 + 2);
  put("S3", -(rr / BigReal(24, prec)) + t.l2 + t.l + 2);
  put("S4", log2_sum(t.big_exponent(BigReal(2, prec) + t.delta, 0), t.small_exponent()));
  put("S5", -(rr / BigReal(5, prec)) + 2 * t.l2 + 5 * t.l);

  p.component_sum = log2_sum(std::vector<BigReal>{p.bounds.at("S-minus-S1").log2, p.bounds.at("S3").log2,
                                                  p.bounds.at("S4").log2, p.bounds.at("S5").log2});
  p.first_below_second = p.h.first < p.h.second;
  p.component_sum_within_h = p.component_sum <= p.h.total;
  return p;
}

/// Default grid: r = 2^10 … 2^30, δ ∈ {0.01, 0.05, 0.1, 0.2}.
inline std::vector<std::pair<BigInt, Delta>> default_bound_grid() {
  std::vector<std::pair<BigInt, Delta>> out;
  for (const char* d : {"0.01", "0.05", "0.1", "0.2"})
    for (int t = 10; t <= 30; ++t) out.emplace_back(BigInt(1) << t, Delta::parse(d));
  return out;
}

}  // namespace cayleystab
