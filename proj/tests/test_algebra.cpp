#include <gtest/gtest.h>

#include <array>
#include <limits>

#include "acx/algebra.hpp"
#include "acx/forms.hpp"
#include "support/naive.hpp"

namespace acx {
namespace {

using testing::NaivePoly;

PolyScalar x(int nv, int axis) { return PolyScalar::variable(nv, axis); }
const GaussRational kI = GaussRational::imaginary_unit();

TEST(Rational, ReducesAndNormalisesSign) {
  EXPECT_EQ(Rational(2, 4), Rational(1, 2));
  EXPECT_EQ(Rational(1, -2), Rational(-1, 2));
  EXPECT_EQ(Rational(-3, -6), Rational(1, 2));
  EXPECT_EQ(Rational(1, -2).small_den(), 2);
  EXPECT_EQ(Rational(0, -5), Rational());
  EXPECT_THROW(Rational(1, 0), std::domain_error);
}

TEST(Rational, PromotesToBigAndBack) {
  const std::int64_t big = std::numeric_limits<std::int64_t>::max();
  const Rational a(big);
  const Rational sum = a + a;
  EXPECT_FALSE(sum.is_small());
  EXPECT_EQ(sum.to_mpq(), mpq_class(mpz_class(big) * 2));
  const Rational back = sum - a;
  EXPECT_TRUE(back.is_small());
  EXPECT_EQ(back, a);
  const Rational product = a * a;
  EXPECT_EQ(product.to_mpq(), mpq_class(mpz_class(big) * mpz_class(big)));
  EXPECT_EQ(product / a, a);
}

TEST(Rational, MinimumInt64IsHeldExactly) {
  const Rational m(std::numeric_limits<std::int64_t>::min());
  EXPECT_EQ(m.to_mpq(), mpq_class(mpz_class(std::numeric_limits<std::int64_t>::min())));
  EXPECT_EQ((-m).to_mpq(), -m.to_mpq());
}

TEST(Rational, ArithmeticAgreesWithGmpOnRandomValues) {
  FormRng rng(11);
  for (int t = 0; t < 500; ++t) {
    const std::int64_t an = rng.uniform(-1'000'000'000'000, 1'000'000'000'000);
    const std::int64_t ad = rng.uniform(1, 1'000'000'000);
    const std::int64_t bn = rng.uniform(-1'000'000'000'000, 1'000'000'000'000);
    const std::int64_t bd = rng.uniform(1, 1'000'000'000);
    const Rational a(an, ad);
    const Rational b(bn, bd);
    mpq_class qa(an, ad);
    mpq_class qb(bn, bd);
    qa.canonicalize();
    qb.canonicalize();
    EXPECT_EQ((a + b).to_mpq(), mpq_class(qa + qb));
    EXPECT_EQ((a - b).to_mpq(), mpq_class(qa - qb));
    EXPECT_EQ((a * b).to_mpq(), mpq_class(qa * qb));
    if (bn != 0) EXPECT_EQ((a / b).to_mpq(), mpq_class(qa / qb));
  }
}

TEST(Rational, FromWideReduces) {
  const Rational::wide big = static_cast<Rational::wide>(1) << 100;
  EXPECT_EQ(Rational::from_wide(big * 3, big * 6), Rational(1, 2));
  EXPECT_EQ(Rational::from_wide(-big, big * 4), Rational(-1, 4));
  const Rational huge = Rational::from_wide(big + 1, 3);
  EXPECT_FALSE(huge.is_small());
}

TEST(GaussRational, FieldOperations) {
  const GaussRational a(Rational(1, 2), Rational(-3));
  const GaussRational b(Rational(2), Rational(5, 7));
  EXPECT_EQ(a * b / b, a);
  EXPECT_EQ(kI * kI, GaussRational(-1));
  EXPECT_EQ(a.conj().conj(), a);
  EXPECT_EQ((a * b).conj(), a.conj() * b.conj());
  EXPECT_THROW(a / GaussRational(), std::domain_error);
}

TEST(PolyScalar, ExamplesFromHandExpansion) {
  const int nv = 2;
  EXPECT_TRUE((x(nv, 0) + (-x(nv, 0))).is_zero());
  const std::array<int, 2> e11{1, 1};
  EXPECT_EQ(x(nv, 0) * x(nv, 1), PolyScalar::monomial(nv, e11, 1));
  const PolyScalar i = PolyScalar::constant(nv, kI);
  const PolyScalar lhs = (x(nv, 0) + i) * (x(nv, 0) - i);
  EXPECT_EQ(lhs, x(nv, 0) * x(nv, 0) + PolyScalar::constant(nv, 1));
}

TEST(PolyScalar, PartialDerivatives) {
  const int nv = 2;
  const PolyScalar p = x(nv, 0) * x(nv, 0) * x(nv, 1);
  EXPECT_EQ(p.partial(0), PolyScalar::constant(nv, 2) * x(nv, 0) * x(nv, 1));
  EXPECT_TRUE(x(nv, 0).partial(1).is_zero());
  EXPECT_THROW(p.partial(2), std::out_of_range);
  FormRng rng(5);
  for (int t = 0; t < 20; ++t) {
    const PolyScalar q = rng.poly(4, 5);
    EXPECT_EQ(q.partial(0).partial(1), q.partial(1).partial(0));
  }
}

TEST(PolyScalar, Conjugation) {
  const int nv = 2;
  const PolyScalar z = x(nv, 0) + PolyScalar::constant(nv, kI) * x(nv, 1);
  EXPECT_EQ(z.conj(), x(nv, 0) - PolyScalar::constant(nv, kI) * x(nv, 1));
  FormRng rng(6);
  for (int t = 0; t < 20; ++t) {
    const PolyScalar p = rng.poly(3, 3);
    const PolyScalar q = rng.poly(3, 3);
    EXPECT_EQ(p.conj().conj(), p);
    EXPECT_EQ((p * q).conj(), p.conj() * q.conj());
  }
}

// Products agree with the map-based oracle across the dense, hashed and
// big-number paths.
TEST(PolyScalar, ProductMatchesNaiveOracle) {
  FormRng rng(7);
  for (int t = 0; t < 60; ++t) {
    const int nv = 1 + static_cast<int>(rng.uniform(0, 5));
    const int da = static_cast<int>(rng.uniform(0, 6));
    const int db = static_cast<int>(rng.uniform(0, 6));
    PolyScalar a = rng.poly(nv, da);
    PolyScalar b = rng.poly(nv, db);
    if (t % 3 == 0) {
      // Push some coefficients past 64 bits.
      a = PolyScalar::constant(nv, GaussRational(Rational(std::numeric_limits<std::int64_t>::max(),
                                                          3))) * a;
    }
    if (t % 4 == 0) b = b * PolyScalar::constant(nv, GaussRational(Rational(1, 1'000'003)));
    const PolyScalar prod = a * b;
    EXPECT_EQ(NaivePoly::from(prod), NaivePoly::from(a) * NaivePoly::from(b)) << "trial " << t;
  }
}

TEST(PolyScalar, SparseHighDegreeProductMatchesOracle) {
  // Exponent box too large for dense accumulation.
  const int nv = 6;
  std::array<int, 6> e1{40, 0, 3, 0, 0, 50};
  std::array<int, 6> e2{0, 60, 0, 2, 70, 0};
  std::array<int, 6> e3{1, 1, 1, 1, 1, 1};
  const PolyScalar a = PolyScalar::monomial(nv, e1, GaussRational(Rational(1, 3), Rational(2))) +
                       PolyScalar::monomial(nv, e3, 5);
  const PolyScalar b = PolyScalar::monomial(nv, e2, GaussRational(Rational(-7, 2))) +
                       PolyScalar::monomial(nv, e3, kI);
  EXPECT_EQ(NaivePoly::from(a * b), NaivePoly::from(a) * NaivePoly::from(b));
}

TEST(PolyScalar, RingAxiomsOnRandomPolynomials) {
  FormRng rng(8);
  for (int t = 0; t < 30; ++t) {
    const PolyScalar a = rng.poly(4, 3);
    const PolyScalar b = rng.poly(4, 3);
    const PolyScalar c = rng.poly(4, 2);
    EXPECT_EQ(a * b, b * a);
    EXPECT_EQ((a * b) * c, a * (b * c));
    EXPECT_EQ(a * (b + c), a * b + a * c);
    EXPECT_TRUE((a - a).is_zero());
  }
}

TEST(PolyScalar, SumOfProductsEqualsSequentialSum) {
  FormRng rng(9);
  for (int t = 0; t < 30; ++t) {
    std::vector<PolyScalar> polys;
    for (int k = 0; k < 8; ++k) polys.push_back(rng.poly(4, 3));
    polys.push_back(PolyScalar::constant(4, GaussRational(Rational(1, 1'000'000'007))) * polys[0]);
    polys.push_back(PolyScalar(4));
    std::vector<ProductTerm> batch;
    PolyScalar expected(4);
    for (int k = 0; k < 12; ++k) {
      const auto& a = polys[static_cast<std::size_t>(rng.uniform(0, 9))];
      const auto& b = polys[static_cast<std::size_t>(rng.uniform(0, 9))];
      const bool negate = rng.uniform(0, 1) == 1;
      batch.push_back({&a, &b, negate});
      if (negate) expected -= a * b;
      else expected += a * b;
    }
    EXPECT_EQ(sum_of_products(4, batch), expected);
  }
}

TEST(PolyScalar, CancellationLeavesCanonicalZero) {
  const PolyScalar a = x(3, 0) + x(3, 1);
  const PolyScalar b = x(3, 0) - x(3, 1);
  const std::vector<ProductTerm> batch{{&a, &b, false}, {&b, &a, true}};
  const PolyScalar r = sum_of_products(3, batch);
  EXPECT_TRUE(r.is_zero());
  EXPECT_EQ(r, PolyScalar(3));
}

TEST(PolyScalar, MismatchedVariableCountsThrow) {
  EXPECT_THROW(x(2, 0) * x(3, 0), std::invalid_argument);
  EXPECT_THROW(x(2, 0) + x(3, 0), std::invalid_argument);
}

TEST(PolyScalar, FromTermsMergesDuplicates) {
  const Monomial m = PolyScalar::variable(2, 1).terms()[0].monomial;
  const PolyScalar p = PolyScalar::from_terms(2, {{m, 1}, {0, 3}, {m, -1}});
  EXPECT_EQ(p, PolyScalar::constant(2, 3));
}

}  // namespace
}  // namespace acx
