#include "acx/algebra.hpp"

#include <algorithm>
#include <array>
#include <climits>
#include <limits>
#include <numeric>
#include <sstream>
#include <stdexcept>
#include <tuple>

namespace acx {

namespace {

__extension__ typedef __int128 i128;
__extension__ typedef unsigned __int128 u128;

constexpr std::int64_t kSmallMax = std::numeric_limits<std::int64_t>::max();

int ctz128(u128 v) {
  const auto lo = static_cast<std::uint64_t>(v);
  return lo ? __builtin_ctzll(lo) : 64 + __builtin_ctzll(static_cast<std::uint64_t>(v >> 64));
}

// Binary gcd; falls through to the hardware 64-bit path once both fit.
u128 gcd128(u128 a, u128 b) {
  if (a == 0) return b;
  if (b == 0) return a;
  const int shift = std::min(ctz128(a), ctz128(b));
  a >>= ctz128(a);
  do {
    b >>= ctz128(b);
    if ((a >> 64) == 0 && (b >> 64) == 0) {
      a = std::gcd(static_cast<std::uint64_t>(a), static_cast<std::uint64_t>(b));
      break;
    }
    if (a > b) std::swap(a, b);
    b -= a;
  } while (b != 0);
  return a << shift;
}

u128 abs128(i128 v) { return v < 0 ? static_cast<u128>(-v) : static_cast<u128>(v); }

bool fits_small(i128 v) { return v >= -static_cast<i128>(kSmallMax) && v <= kSmallMax; }

mpz_class mpz_from_i128(i128 v) {
  const bool neg = v < 0;
  u128 mag = abs128(v);
  mpz_class hi(static_cast<unsigned long>(static_cast<std::uint64_t>(mag >> 64)));
  mpz_class lo(static_cast<unsigned long>(static_cast<std::uint64_t>(mag)));
  mpz_class out = (hi << 64) + lo;
  return neg ? mpz_class(-out) : out;
}

}  // namespace

Rational::Rational(std::int64_t num) : num_(num) {
  if (num == std::numeric_limits<std::int64_t>::min()) *this = from_mpq(mpq_class(mpz_class(num)));
}

Rational::Rational(std::int64_t num, std::int64_t den) {
  if (den == 0) throw std::domain_error("Rational: zero denominator");
  *this = reduce128(static_cast<i128>(num), static_cast<i128>(den));
}

Rational::Rational(const mpq_class& value) { *this = from_mpq(value); }

Rational Rational::from_mpq(mpq_class value) {
  value.canonicalize();
  Rational r;
  const mpz_class& n = value.get_num();
  const mpz_class& d = value.get_den();
  if (n.fits_slong_p() && d.fits_slong_p() && n != LONG_MIN) {
    r.num_ = n.get_si();
    r.den_ = d.get_si();
  } else {
    r.num_ = 0;
    r.den_ = 1;
    r.big_ = std::make_shared<const mpq_class>(std::move(value));
  }
  return r;
}

// Builds a Rational from an exact fraction num/den (den > 0) held in 128 bits.
Rational Rational::reduce128(i128 num, i128 den) {
  if (num == 0) return Rational();
  if (den < 0) {
    num = -num;
    den = -den;
  }
  u128 g;
  if (fits_small(num) && den <= kSmallMax) {
    g = std::gcd(static_cast<std::uint64_t>(num < 0 ? -num : num),
                 static_cast<std::uint64_t>(den));
  } else {
    g = gcd128(abs128(num), static_cast<u128>(den));
  }
  if (g > 1) {
    num /= static_cast<i128>(g);
    den /= static_cast<i128>(g);
  }
  if (fits_small(num) && den <= kSmallMax) {
    Rational r;
    r.num_ = static_cast<std::int64_t>(num);
    r.den_ = static_cast<std::int64_t>(den);
    return r;
  }
  return from_mpq(mpq_class(mpz_from_i128(num), mpz_from_i128(den)));
}

int Rational::sign() const {
  if (big_) return sgn(*big_);
  return (num_ > 0) - (num_ < 0);
}

mpq_class Rational::to_mpq() const {
  if (big_) return *big_;
  mpq_class q(mpz_class(static_cast<long>(num_)), mpz_class(static_cast<long>(den_)));
  return q;
}

std::string Rational::to_string() const {
  if (big_) return big_->get_str();
  if (den_ == 1) return std::to_string(num_);
  return std::to_string(num_) + "/" + std::to_string(den_);
}

Rational operator+(const Rational& a, const Rational& b) {
  if (a.is_zero()) return b;
  if (b.is_zero()) return a;
  if (!a.big_ && !b.big_) {
    if (a.den_ == 1 && b.den_ == 1) {
      i128 s = static_cast<i128>(a.num_) + b.num_;
      if (fits_small(s)) {
        Rational r;
        r.num_ = static_cast<std::int64_t>(s);
        return r;
      }
      return Rational::reduce128(s, 1);
    }
    const i128 g = std::gcd(a.den_, b.den_);
    const i128 num = static_cast<i128>(a.num_) * (b.den_ / g) +
                     static_cast<i128>(b.num_) * (a.den_ / g);
    const i128 den = static_cast<i128>(a.den_ / g) * b.den_;
    return Rational::reduce128(num, den);
  }
  return Rational::from_mpq(a.to_mpq() + b.to_mpq());
}

Rational operator-(const Rational& a, const Rational& b) { return a + (-b); }

Rational Rational::operator-() const {
  if (big_) return from_mpq(-*big_);
  Rational r = *this;
  r.num_ = -num_;
  return r;
}

Rational operator*(const Rational& a, const Rational& b) {
  if (a.is_zero() || b.is_zero()) return Rational();
  if (a.is_one()) return b;
  if (b.is_one()) return a;
  if (!a.big_ && !b.big_) {
    if (a.den_ == 1 && b.den_ == 1) {
      i128 p = static_cast<i128>(a.num_) * b.num_;
      if (fits_small(p)) {
        Rational r;
        r.num_ = static_cast<std::int64_t>(p);
        return r;
      }
      return Rational::reduce128(p, 1);
    }
    // Cross-reduce before multiplying.
    const std::int64_t g1 = std::gcd(a.num_, b.den_);
    const std::int64_t g2 = std::gcd(b.num_, a.den_);
    const i128 num = static_cast<i128>(a.num_ / g1) * (b.num_ / g2);
    const i128 den = static_cast<i128>(a.den_ / g2) * (b.den_ / g1);
    if (fits_small(num) && den <= kSmallMax) {
      Rational r;
      r.num_ = static_cast<std::int64_t>(num);
      r.den_ = static_cast<std::int64_t>(den);
      return r;
    }
    return Rational::reduce128(num, den);
  }
  return Rational::from_mpq(a.to_mpq() * b.to_mpq());
}

Rational operator/(const Rational& a, const Rational& b) {
  if (b.is_zero()) throw std::domain_error("Rational: division by zero");
  if (a.is_zero()) return Rational();
  if (!a.big_ && !b.big_) {
    // a.num/a.den * b.den/b.num with sign normalisation.
    std::int64_t bn = b.num_;
    std::int64_t bd = b.den_;
    if (bn < 0) {
      bn = -bn;
      bd = -bd;
    }
    const std::int64_t g1 = std::gcd(a.num_, bn);
    const std::int64_t g2 = std::gcd(bd, a.den_);
    const i128 num = static_cast<i128>(a.num_ / g1) * (bd / g2);
    const i128 den = static_cast<i128>(a.den_ / g2) * (bn / g1);
    if (fits_small(num) && den <= kSmallMax) {
      Rational r;
      r.num_ = static_cast<std::int64_t>(num);
      r.den_ = static_cast<std::int64_t>(den);
      return r;
    }
    return Rational::reduce128(num, den);
  }
  return Rational::from_mpq(a.to_mpq() / b.to_mpq());
}

bool operator==(const Rational& a, const Rational& b) {
  if (a.big_ || b.big_) {
    if (!a.big_ || !b.big_) return false;
    return *a.big_ == *b.big_;
  }
  return a.num_ == b.num_ && a.den_ == b.den_;
}

std::ostream& operator<<(std::ostream& os, const Rational& r) { return os << r.to_string(); }

GaussRational operator+(const GaussRational& a, const GaussRational& b) {
  return {a.re + b.re, a.im + b.im};
}

GaussRational operator-(const GaussRational& a, const GaussRational& b) {
  return {a.re - b.re, a.im - b.im};
}

GaussRational operator*(const GaussRational& a, const GaussRational& b) {
  if (a.im.is_zero() && b.im.is_zero()) return {a.re * b.re, Rational()};
  if (a.im.is_zero()) return {a.re * b.re, a.re * b.im};
  if (b.im.is_zero()) return {a.re * b.re, a.im * b.re};
  return {a.re * b.re - a.im * b.im, a.re * b.im + a.im * b.re};
}

GaussRational operator/(const GaussRational& a, const GaussRational& b) {
  const Rational norm = b.re * b.re + b.im * b.im;
  if (norm.is_zero()) throw std::domain_error("GaussRational: division by zero");
  const GaussRational num = a * b.conj();
  return {num.re / norm, num.im / norm};
}

std::string GaussRational::to_string() const {
  if (im.is_zero()) return re.to_string();
  if (re.is_zero()) return "(" + im.to_string() + ")i";
  return "(" + re.to_string() + (im.sign() < 0 ? "" : "+") + im.to_string() + "i)";
}

std::ostream& operator<<(std::ostream& os, const GaussRational& z) { return os << z.to_string(); }

int monomial_degree(Monomial m) {
  int d = 0;
  for (int v = 0; v < kMaxVariables; ++v) d += monomial_exponent(m, v);
  return d;
}

PolyScalar::PolyScalar(int num_vars) : num_vars_(num_vars) {
  if (num_vars < 0 || num_vars > kMaxVariables) {
    throw std::invalid_argument("PolyScalar: unsupported variable count " +
                                std::to_string(num_vars));
  }
}

PolyScalar PolyScalar::constant(int num_vars, const GaussRational& c) {
  PolyScalar p(num_vars);
  if (!c.is_zero()) p.terms_.push_back({0, c});
  return p;
}

PolyScalar PolyScalar::variable(int num_vars, int axis) {
  PolyScalar p(num_vars);
  if (axis < 0 || axis >= num_vars) {
    throw std::out_of_range("PolyScalar::variable: axis out of range");
  }
  p.terms_.push_back({Monomial{1} << (8 * axis), GaussRational(1)});
  return p;
}

PolyScalar PolyScalar::monomial(int num_vars, std::span<const int> exponents,
                                const GaussRational& c) {
  PolyScalar p(num_vars);
  if (static_cast<int>(exponents.size()) != num_vars) {
    throw std::invalid_argument("PolyScalar::monomial: exponent count mismatch");
  }
  Monomial m = 0;
  int total = 0;
  for (int v = 0; v < num_vars; ++v) {
    if (exponents[v] < 0) throw std::invalid_argument("PolyScalar::monomial: negative exponent");
    total += exponents[v];
    m |= static_cast<Monomial>(exponents[v]) << (8 * v);
  }
  if (total > kMaxTotalDegree) throw std::overflow_error("PolyScalar: degree overflow");
  if (!c.is_zero()) p.terms_.push_back({m, c});
  return p;
}

PolyScalar PolyScalar::from_terms(int num_vars, std::vector<Term> terms) {
  PolyScalar p(num_vars);
  std::sort(terms.begin(), terms.end(),
            [](const Term& a, const Term& b) { return a.monomial < b.monomial; });
  for (auto& t : terms) {
    if (!p.terms_.empty() && p.terms_.back().monomial == t.monomial) {
      p.terms_.back().coeff += t.coeff;
      if (p.terms_.back().coeff.is_zero()) p.terms_.pop_back();
    } else if (!t.coeff.is_zero()) {
      p.terms_.push_back(std::move(t));
    }
  }
  return p;
}

int PolyScalar::degree() const {
  int d = -1;
  for (const auto& t : terms_) d = std::max(d, monomial_degree(t.monomial));
  return d;
}

bool PolyScalar::is_constant() const {
  return terms_.empty() || (terms_.size() == 1 && terms_[0].monomial == 0);
}

GaussRational PolyScalar::constant_term() const {
  if (!terms_.empty() && terms_[0].monomial == 0) return terms_[0].coeff;
  return {};
}

bool PolyScalar::has_real_coefficients() const {
  return std::all_of(terms_.begin(), terms_.end(),
                     [](const Term& t) { return t.coeff.is_real(); });
}

void PolyScalar::check_compatible(const PolyScalar& o, const char* op) const {
  if (num_vars_ != o.num_vars_) {
    throw std::invalid_argument(std::string("PolyScalar ") + op + ": variable count mismatch (" +
                                std::to_string(num_vars_) + " vs " +
                                std::to_string(o.num_vars_) + ")");
  }
}

std::vector<PolyScalar::Term> PolyScalar::merge(const std::vector<Term>& a,
                                                const std::vector<Term>& b, bool subtract) {
  std::vector<Term> out;
  out.reserve(a.size() + b.size());
  std::size_t i = 0;
  std::size_t j = 0;
  while (i < a.size() || j < b.size()) {
    if (j == b.size() || (i < a.size() && a[i].monomial < b[j].monomial)) {
      out.push_back(a[i++]);
    } else if (i == a.size() || b[j].monomial < a[i].monomial) {
      out.push_back({b[j].monomial, subtract ? -b[j].coeff : b[j].coeff});
      ++j;
    } else {
      GaussRational c = subtract ? a[i].coeff - b[j].coeff : a[i].coeff + b[j].coeff;
      if (!c.is_zero()) out.push_back({a[i].monomial, std::move(c)});
      ++i;
      ++j;
    }
  }
  return out;
}

PolyScalar operator+(const PolyScalar& a, const PolyScalar& b) {
  a.check_compatible(b, "add");
  if (a.is_zero()) return b;
  if (b.is_zero()) return a;
  PolyScalar r(a.num_vars_);
  r.terms_ = PolyScalar::merge(a.terms_, b.terms_, false);
  return r;
}

PolyScalar operator-(const PolyScalar& a, const PolyScalar& b) {
  a.check_compatible(b, "subtract");
  if (b.is_zero()) return a;
  PolyScalar r(a.num_vars_);
  r.terms_ = PolyScalar::merge(a.terms_, b.terms_, true);
  return r;
}

PolyScalar& PolyScalar::operator+=(const PolyScalar& o) {
  check_compatible(o, "add");
  if (o.is_zero()) return *this;
  if (is_zero()) {
    terms_ = o.terms_;
    return *this;
  }
  terms_ = merge(terms_, o.terms_, false);
  return *this;
}

PolyScalar& PolyScalar::operator-=(const PolyScalar& o) {
  check_compatible(o, "subtract");
  if (o.is_zero()) return *this;
  terms_ = merge(terms_, o.terms_, true);
  return *this;
}

PolyScalar PolyScalar::operator-() const {
  PolyScalar r = *this;
  for (auto& t : r.terms_) t.coeff = -t.coeff;
  return r;
}

PolyScalar operator*(const GaussRational& c, const PolyScalar& p) {
  PolyScalar r(p.num_vars_);
  if (c.is_zero() || p.is_zero()) return r;
  r.terms_.reserve(p.terms_.size());
  for (const auto& t : p.terms_) r.terms_.push_back({t.monomial, c * t.coeff});
  return r;
}

namespace {

int bit_length(u128 v) {
  int bits = 0;
  while (v != 0) {
    v >>= 1;
    ++bits;
  }
  return bits;
}

// Gaussian-integer image of a polynomial: coefficients times a common
// denominator.
struct ScaledPoly {
  std::int64_t denominator = 1;
  std::vector<std::int64_t> re;
  std::vector<std::int64_t> im;
  int bits = 0;
};

bool scale_terms(const std::vector<PolyScalar::Term>& terms, ScaledPoly& out) {
  constexpr std::int64_t kDenLimit = std::int64_t{1} << 40;
  std::int64_t l = 1;
  for (const auto& t : terms) {
    if (!t.coeff.re.is_small() || !t.coeff.im.is_small()) return false;
    for (std::int64_t den : {t.coeff.re.small_den(), t.coeff.im.small_den()}) {
      if (den == 1) continue;
      l = std::lcm(l, den);
      if (l > kDenLimit) return false;
    }
  }
  out.denominator = l;
  out.re.resize(terms.size());
  out.im.resize(terms.size());
  u128 max_abs = 0;
  constexpr i128 kLimit = i128{1} << 62;
  for (std::size_t k = 0; k < terms.size(); ++k) {
    const Rational& re = terms[k].coeff.re;
    const Rational& im = terms[k].coeff.im;
    const i128 sr = static_cast<i128>(re.small_num()) * (l / re.small_den());
    const i128 si = static_cast<i128>(im.small_num()) * (l / im.small_den());
    if (sr >= kLimit || sr <= -kLimit || si >= kLimit || si <= -kLimit) return false;
    out.re[k] = static_cast<std::int64_t>(sr);
    out.im[k] = static_cast<std::int64_t>(si);
    max_abs = std::max({max_abs, abs128(sr), abs128(si)});
  }
  out.bits = bit_length(max_abs);
  return true;
}

// Open-addressing accumulator keyed by monomial.
class MonomialTable {
 public:
  explicit MonomialTable(std::size_t expected) {
    std::size_t cap = 16;
    while (cap < 2 * expected) cap <<= 1;
    keys_.assign(cap, kEmpty);
    re_.assign(cap, 0);
    im_.assign(cap, 0);
    mask_ = cap - 1;
  }

  void add(Monomial m, i128 re, i128 im) {
    if (10 * (used_.size() + 1) > 7 * keys_.size()) grow();
    std::size_t h = static_cast<std::size_t>((m ^ (m >> 29)) * 0x9e3779b97f4a7c15ULL) & mask_;
    for (;;) {
      if (keys_[h] == m) break;
      if (keys_[h] == kEmpty) {
        keys_[h] = m;
        used_.push_back(h);
        break;
      }
      h = (h + 1) & mask_;
    }
    re_[h] += re;
    im_[h] += im;
  }

  void grow() {
    std::vector<Monomial> keys = std::move(keys_);
    std::vector<i128> re = std::move(re_);
    std::vector<i128> im = std::move(im_);
    std::vector<std::size_t> used = std::move(used_);
    const std::size_t cap = keys.size() * 2;
    keys_.assign(cap, kEmpty);
    re_.assign(cap, 0);
    im_.assign(cap, 0);
    used_.clear();
    mask_ = cap - 1;
    for (std::size_t h : used) add(keys[h], re[h], im[h]);
  }

  template <typename Fn>
  void for_each_sorted(Fn&& fn) {
    std::sort(used_.begin(), used_.end(),
              [this](std::size_t x, std::size_t y) { return keys_[x] < keys_[y]; });
    for (std::size_t h : used_) fn(keys_[h], re_[h], im_[h]);
  }

 private:
  static constexpr Monomial kEmpty = ~Monomial{0};
  std::vector<Monomial> keys_;
  std::vector<i128> re_;
  std::vector<i128> im_;
  std::vector<std::size_t> used_;
  std::size_t mask_ = 0;
};

std::array<int, kMaxVariables> max_exponents(const PolyScalar& p) {
  std::array<int, kMaxVariables> e{};
  for (const auto& t : p.terms()) {
    for (int v = 0; v < p.num_vars(); ++v) e[v] = std::max(e[v], monomial_exponent(t.monomial, v));
  }
  return e;
}

struct ScaledOperand {
  const PolyScalar* poly = nullptr;
  ScaledPoly scaled;
  std::array<int, kMaxVariables> exponents{};
};

// Exact sum of signed products through 128-bit Gaussian-integer accumulation
// over one common denominator.  Returns false, leaving `out` untouched, when
// an overflow-free bound cannot be guaranteed.
bool accumulate_scaled(int nv, std::span<const ProductTerm> batch,
                       std::vector<PolyScalar::Term>& out) {
  // Operands repeat across a batch; scale each distinct one once.
  std::vector<ScaledOperand> operands;
  auto operand = [&](const PolyScalar* p) -> const ScaledOperand* {
    for (const auto& o : operands) {
      if (o.poly == p) return &o;
    }
    ScaledOperand o;
    o.poly = p;
    if (!scale_terms(p->terms(), o.scaled)) return nullptr;
    o.exponents = max_exponents(*p);
    operands.push_back(std::move(o));
    return &operands.back();
  };
  struct Prepared {
    std::size_t a;
    std::size_t b;
    bool negate;
    i128 den;
  };
  std::vector<Prepared> prepared;
  prepared.reserve(batch.size());
  operands.reserve(2 * batch.size());
  constexpr i128 kDenLimit = i128{1} << 100;
  i128 den = 1;
  std::size_t pairs = 0;
  std::size_t shorter_sum = 0;
  for (const auto& t : batch) {
    const ScaledOperand* oa = operand(t.a);
    if (!oa) return false;
    const std::size_t ia = static_cast<std::size_t>(oa - operands.data());
    const ScaledOperand* ob = operand(t.b);
    if (!ob) return false;
    const std::size_t ib = static_cast<std::size_t>(ob - operands.data());
    const i128 d = static_cast<i128>(operands[ia].scaled.denominator) *
                   operands[ib].scaled.denominator;
    const u128 g = gcd128(static_cast<u128>(den), static_cast<u128>(d));
    const i128 step = d / static_cast<i128>(g);
    if (den > kDenLimit / step) return false;
    den *= step;
    prepared.push_back({ia, ib, t.negate, d});
    pairs += t.a->size() * t.b->size();
    shorter_sum += std::min(t.a->size(), t.b->size());
  }
  // Each output coefficient sums at most `shorter_sum` products.
  int worst = 0;
  for (const auto& p : prepared) {
    const int bits = operands[p.a].scaled.bits + operands[p.b].scaled.bits + 1 +
                     bit_length(static_cast<u128>(den / p.den));
    worst = std::max(worst, bits);
  }
  if (worst + bit_length(shorter_sum) > 125) return false;

  std::array<std::size_t, kMaxVariables> radix{};
  std::array<std::size_t, kMaxVariables> stride{};
  for (const auto& p : prepared) {
    for (int v = 0; v < nv; ++v) {
      radix[v] = std::max(radix[v], static_cast<std::size_t>(operands[p.a].exponents[v] +
                                                             operands[p.b].exponents[v] + 1));
    }
  }
  std::size_t box = 1;
  const std::size_t limit = std::min<std::size_t>(std::size_t{1} << 20, 4 * pairs);
  bool dense = true;
  for (int v = 0; v < nv && dense; ++v) {
    stride[v] = box;
    box *= radix[v];
    dense = box <= limit;
  }

  auto emit = [&](Monomial m, i128 re, i128 im) {
    if (re == 0 && im == 0) return;
    out.push_back({m, GaussRational(re == 0 ? Rational() : Rational::from_wide(re, den),
                                    im == 0 ? Rational() : Rational::from_wide(im, den))});
  };

  if (!dense) {
    MonomialTable table(std::min(pairs, std::size_t{1} << 16));
    for (const auto& p : prepared) {
      const auto& ta = operands[p.a].poly->terms();
      const auto& tb = operands[p.b].poly->terms();
      const ScaledPoly& sa = operands[p.a].scaled;
      const ScaledPoly& sb = operands[p.b].scaled;
      const i128 f = p.negate ? -(den / p.den) : den / p.den;
      for (std::size_t i = 0; i < ta.size(); ++i) {
        const i128 ar = sa.re[i] * f;
        const i128 ai = sa.im[i] * f;
        for (std::size_t j = 0; j < tb.size(); ++j) {
          const i128 br = sb.re[j];
          const i128 bi = sb.im[j];
          table.add(ta[i].monomial + tb[j].monomial, ar * br - ai * bi, ar * bi + ai * br);
        }
      }
    }
    table.for_each_sorted(emit);
    return true;
  }

  // Kronecker indexing: index order agrees with the packed monomial order
  // (variable 0 lowest), so a linear scan emits terms already sorted.
  auto index_of = [&](Monomial m) {
    std::size_t idx = 0;
    for (int v = 0; v < nv; ++v) idx += static_cast<std::size_t>(monomial_exponent(m, v)) * stride[v];
    return idx;
  };
  thread_local std::vector<i128> acc_re;
  thread_local std::vector<i128> acc_im;
  thread_local std::vector<unsigned char> touched;
  if (acc_re.size() < box) {
    acc_re.assign(box, 0);
    acc_im.assign(box, 0);
    touched.assign(box, 0);
  }
  std::vector<std::size_t> ib;
  for (const auto& p : prepared) {
    const auto& ta = operands[p.a].poly->terms();
    const auto& tb = operands[p.b].poly->terms();
    const ScaledPoly& sa = operands[p.a].scaled;
    const ScaledPoly& sb = operands[p.b].scaled;
    const i128 f = p.negate ? -(den / p.den) : den / p.den;
    ib.resize(tb.size());
    for (std::size_t j = 0; j < tb.size(); ++j) ib[j] = index_of(tb[j].monomial);
    for (std::size_t i = 0; i < ta.size(); ++i) {
      const i128 ar = sa.re[i] * f;
      const i128 ai = sa.im[i] * f;
      const std::size_t base = index_of(ta[i].monomial);
      i128* re = acc_re.data() + base;
      i128* im = acc_im.data() + base;
      unsigned char* hit = touched.data() + base;
      for (std::size_t j = 0; j < tb.size(); ++j) {
        const i128 br = sb.re[j];
        const i128 bi = sb.im[j];
        const std::size_t k = ib[j];
        re[k] += ar * br - ai * bi;
        im[k] += ar * bi + ai * br;
        hit[k] = 1;
      }
    }
  }
  for (std::size_t k = 0; k < box; ++k) {
    if (!touched[k]) continue;
    touched[k] = 0;
    const i128 re = acc_re[k];
    const i128 im = acc_im[k];
    acc_re[k] = 0;
    acc_im[k] = 0;
    Monomial m = 0;
    std::size_t rest = k;
    for (int v = 0; v < nv; ++v) {
      m |= static_cast<Monomial>(rest % radix[v]) << (8 * v);
      rest /= radix[v];
    }
    emit(m, re, im);
  }
  return true;
}

}  // namespace

PolyScalar operator*(const PolyScalar& a, const PolyScalar& b) {
  a.check_compatible(b, "multiply");
  PolyScalar r(a.num_vars_);
  if (a.is_zero() || b.is_zero()) return r;
  if (a.degree() + b.degree() > kMaxTotalDegree) {
    throw std::overflow_error("PolyScalar: product degree exceeds packed exponent range");
  }
  if (a.terms_.size() == 1 || b.terms_.size() == 1) {
    // Shifting by a fixed monomial preserves the term order.
    const auto& single = a.terms_.size() == 1 ? a.terms_[0] : b.terms_[0];
    const auto& other = a.terms_.size() == 1 ? b.terms_ : a.terms_;
    r.terms_.reserve(other.size());
    for (const auto& t : other) {
      r.terms_.push_back({t.monomial + single.monomial, single.coeff * t.coeff});
    }
    return r;
  }
  const ProductTerm single_product{&a, &b, false};
  if (accumulate_scaled(a.num_vars_, {&single_product, 1}, r.terms_)) return r;
  // Sort the index pairs by product monomial, then accumulate runs.
  struct Slot {
    Monomial m;
    std::uint32_t i;
    std::uint32_t j;
  };
  std::vector<Slot> slots;
  slots.reserve(a.terms_.size() * b.terms_.size());
  for (std::uint32_t i = 0; i < a.terms_.size(); ++i) {
    for (std::uint32_t j = 0; j < b.terms_.size(); ++j) {
      slots.push_back({a.terms_[i].monomial + b.terms_[j].monomial, i, j});
    }
  }
  std::sort(slots.begin(), slots.end(), [](const Slot& x, const Slot& y) {
    return std::tie(x.m, x.i, x.j) < std::tie(y.m, y.i, y.j);
  });
  std::size_t k = 0;
  while (k < slots.size()) {
    const Monomial m = slots[k].m;
    GaussRational acc = a.terms_[slots[k].i].coeff * b.terms_[slots[k].j].coeff;
    ++k;
    while (k < slots.size() && slots[k].m == m) {
      acc += a.terms_[slots[k].i].coeff * b.terms_[slots[k].j].coeff;
      ++k;
    }
    if (!acc.is_zero()) r.terms_.push_back({m, std::move(acc)});
  }
  return r;
}

PolyScalar sum_of_products(int num_vars, std::span<const ProductTerm> batch) {
  PolyScalar r(num_vars);
  std::vector<ProductTerm> live;
  live.reserve(batch.size());
  for (const auto& t : batch) {
    if (t.a->num_vars() != num_vars || t.b->num_vars() != num_vars) {
      throw std::invalid_argument("sum_of_products: variable count mismatch");
    }
    if (t.a->is_zero() || t.b->is_zero()) continue;
    if (t.a->degree() + t.b->degree() > kMaxTotalDegree) {
      throw std::overflow_error("PolyScalar: product degree exceeds packed exponent range");
    }
    live.push_back(t);
  }
  if (live.empty()) return r;
  if (live.size() > 1 && accumulate_scaled(num_vars, live, r.terms_)) return r;
  for (const auto& t : live) {
    if (t.negate) r -= *t.a * *t.b;
    else r += *t.a * *t.b;
  }
  return r;
}

bool operator==(const PolyScalar& a, const PolyScalar& b) {
  return a.num_vars_ == b.num_vars_ && a.terms_ == b.terms_;
}

PolyScalar PolyScalar::partial(int axis) const {
  if (axis < 0 || axis >= num_vars_) {
    throw std::out_of_range("partial_derivative: axis " + std::to_string(axis) +
                            " out of range for " + std::to_string(num_vars_) + " variables");
  }
  PolyScalar r(num_vars_);
  const Monomial unit = Monomial{1} << (8 * axis);
  for (const auto& t : terms_) {
    const int e = monomial_exponent(t.monomial, axis);
    if (e == 0) continue;
    r.terms_.push_back({t.monomial - unit, GaussRational(e) * t.coeff});
  }
  // Lowering one exponent is monotone on the packed key, so order is kept.
  return r;
}

PolyScalar PolyScalar::conj() const {
  PolyScalar r = *this;
  for (auto& t : r.terms_) t.coeff = t.coeff.conj();
  return r;
}

std::string PolyScalar::to_string() const {
  if (terms_.empty()) return "0";
  std::ostringstream os;
  bool first = true;
  for (const auto& t : terms_) {
    if (!first) os << " + ";
    first = false;
    const bool unit_coeff = t.coeff == GaussRational(1);
    if (!unit_coeff || t.monomial == 0) os << t.coeff.to_string();
    bool wrote = !unit_coeff || t.monomial == 0;
    for (int v = 0; v < num_vars_; ++v) {
      const int e = monomial_exponent(t.monomial, v);
      if (e == 0) continue;
      os << (wrote ? "*" : "") << "x" << (v + 1);
      if (e > 1) os << "^" << e;
      wrote = true;
    }
  }
  return os.str();
}

std::ostream& operator<<(std::ostream& os, const PolyScalar& p) { return os << p.to_string(); }

PolyScalar partial_derivative(const PolyScalar& p, int axis) { return p.partial(axis); }

PolyScalar conjugate_poly(const PolyScalar& p) { return p.conj(); }

}  // namespace acx
