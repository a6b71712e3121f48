#pragma once

#include <cstdint>
#include <memory>
#include <ostream>
#include <span>
#include <string>
#include <vector>

#include <gmpxx.h>

namespace acx {

/// Exact rational number.
///
/// Values whose reduced numerator and denominator fit in a signed 64-bit
/// word are stored inline; anything larger is promoted to a shared,
/// immutable GMP rational.  The representation is canonical: a value is
/// stored big if and only if it does not fit inline, so structural equality
/// is value equality.
class Rational {
 public:
  __extension__ typedef __int128 wide;

  Rational() = default;
  Rational(std::int64_t num);  // NOLINT(google-explicit-constructor)
  Rational(std::int64_t num, std::int64_t den);
  explicit Rational(const mpq_class& value);

  bool is_zero() const { return !big_ && num_ == 0; }
  bool is_one() const { return !big_ && num_ == 1 && den_ == 1; }
  bool is_small() const { return !big_; }
  /// Inline numerator and denominator; meaningful only when is_small().
  std::int64_t small_num() const { return num_; }
  std::int64_t small_den() const { return den_; }
  /// num/den for den > 0, reduced.
  static Rational from_wide(wide num, wide den) { return reduce128(num, den); }
  int sign() const;

  mpq_class to_mpq() const;
  std::string to_string() const;

  friend Rational operator+(const Rational& a, const Rational& b);
  friend Rational operator-(const Rational& a, const Rational& b);
  friend Rational operator*(const Rational& a, const Rational& b);
  friend Rational operator/(const Rational& a, const Rational& b);
  Rational operator-() const;

  Rational& operator+=(const Rational& o) { return *this = *this + o; }
  Rational& operator-=(const Rational& o) { return *this = *this - o; }
  Rational& operator*=(const Rational& o) { return *this = *this * o; }

  friend bool operator==(const Rational& a, const Rational& b);

 private:
  static Rational from_mpq(mpq_class value);
  static Rational reduce128(wide num, wide den);

  std::int64_t num_ = 0;
  std::int64_t den_ = 1;
  std::shared_ptr<const mpq_class> big_;
};

/// Exact Gaussian rational re + i*im.
struct GaussRational {
  Rational re;
  Rational im;

  GaussRational() = default;
  GaussRational(Rational r) : re(std::move(r)) {}  // NOLINT
  GaussRational(std::int64_t r) : re(r) {}         // NOLINT
  GaussRational(Rational r, Rational i) : re(std::move(r)), im(std::move(i)) {}

  static GaussRational imaginary_unit() { return {Rational(0), Rational(1)}; }

  bool is_zero() const { return re.is_zero() && im.is_zero(); }
  bool is_real() const { return im.is_zero(); }
  GaussRational conj() const { return {re, -im}; }
  std::string to_string() const;

  friend GaussRational operator+(const GaussRational& a, const GaussRational& b);
  friend GaussRational operator-(const GaussRational& a, const GaussRational& b);
  friend GaussRational operator*(const GaussRational& a, const GaussRational& b);
  /// Throws std::domain_error on division by zero.
  friend GaussRational operator/(const GaussRational& a, const GaussRational& b);
  GaussRational operator-() const { return {-re, -im}; }

  GaussRational& operator+=(const GaussRational& o) { return *this = *this + o; }
  GaussRational& operator-=(const GaussRational& o) { return *this = *this - o; }
  GaussRational& operator*=(const GaussRational& o) { return *this = *this * o; }

  friend bool operator==(const GaussRational& a, const GaussRational& b) {
    return a.re == b.re && a.im == b.im;
  }
};

std::ostream& operator<<(std::ostream& os, const Rational& r);
std::ostream& operator<<(std::ostream& os, const GaussRational& z);

/// Exponent multi-index packed eight bits per variable (at most 8 variables,
/// total degree at most 255).
using Monomial = std::uint64_t;

inline constexpr int kMaxVariables = 8;
inline constexpr int kMaxTotalDegree = 255;

inline int monomial_exponent(Monomial m, int var) {
  return static_cast<int>((m >> (8 * var)) & 0xffu);
}
int monomial_degree(Monomial m);

class PolyScalar;

/// One signed product a*b in a batched sum.
struct ProductTerm {
  const PolyScalar* a;
  const PolyScalar* b;
  bool negate = false;
};

/// Multivariate polynomial over the Gaussian rationals.
///
/// Terms are kept sorted by packed exponent with no zero coefficients, so two
/// polynomials are equal iff their term lists are equal.
class PolyScalar {
 public:
  struct Term {
    Monomial monomial;
    GaussRational coeff;
    friend bool operator==(const Term&, const Term&) = default;
  };

  PolyScalar() = default;
  explicit PolyScalar(int num_vars);

  static PolyScalar zero(int num_vars) { return PolyScalar(num_vars); }
  static PolyScalar constant(int num_vars, const GaussRational& c);
  /// The coordinate function x_{axis+1}.
  static PolyScalar variable(int num_vars, int axis);
  static PolyScalar monomial(int num_vars, std::span<const int> exponents,
                             const GaussRational& c);
  /// Builds from arbitrary (unsorted, possibly repeated) terms.
  static PolyScalar from_terms(int num_vars, std::vector<Term> terms);

  int num_vars() const { return num_vars_; }
  bool is_zero() const { return terms_.empty(); }
  std::size_t size() const { return terms_.size(); }
  const std::vector<Term>& terms() const { return terms_; }
  /// Total degree; -1 for the zero polynomial.
  int degree() const;
  bool is_constant() const;
  /// Coefficient of the monomial 1.
  GaussRational constant_term() const;
  bool has_real_coefficients() const;

  friend PolyScalar operator+(const PolyScalar& a, const PolyScalar& b);
  friend PolyScalar operator-(const PolyScalar& a, const PolyScalar& b);
  friend PolyScalar operator*(const PolyScalar& a, const PolyScalar& b);
  friend PolyScalar operator*(const GaussRational& c, const PolyScalar& p);
  PolyScalar operator-() const;

  PolyScalar& operator+=(const PolyScalar& o);
  PolyScalar& operator-=(const PolyScalar& o);
  PolyScalar& operator*=(const PolyScalar& o) { return *this = *this * o; }

  friend bool operator==(const PolyScalar& a, const PolyScalar& b);
  friend PolyScalar sum_of_products(int num_vars, std::span<const ProductTerm> batch);

  /// Formal partial derivative with respect to x_{axis+1}.
  PolyScalar partial(int axis) const;
  /// Complex conjugation of every coefficient.
  PolyScalar conj() const;

  /// Human-readable form using x1..xN.
  std::string to_string() const;

 private:
  void check_compatible(const PolyScalar& o, const char* op) const;
  static std::vector<Term> merge(const std::vector<Term>& a,
                                 const std::vector<Term>& b, bool subtract);

  int num_vars_ = 0;
  std::vector<Term> terms_;
};

std::ostream& operator<<(std::ostream& os, const PolyScalar& p);

/// Sum of +-a*b over the batch, accumulated exactly without intermediate
/// rounding to canonical form.  Equal to adding the products one by one.
PolyScalar sum_of_products(int num_vars, std::span<const ProductTerm> batch);

PolyScalar partial_derivative(const PolyScalar& p, int axis);
PolyScalar conjugate_poly(const PolyScalar& p);

}  // namespace acx
