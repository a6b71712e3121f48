#include <gtest/gtest.h>

#include "acx/chart.hpp"
#include "acx/forms.hpp"
#include "acx/torsion.hpp"
#include "support/naive.hpp"

namespace acx {
namespace {

const GaussRational kI = GaussRational::imaginary_unit();

PolyMatrix minus_identity(int dim) { return GaussRational(-1) * PolyMatrix::identity(dim, dim); }

TEST(Chart, StandardStructureMatrix) {
  const auto c1 = make_standard_chart(1);
  PolyMatrix j1(2, 2, 2);
  j1(0, 1) = PolyScalar::constant(2, -1);
  j1(1, 0) = PolyScalar::constant(2, 1);
  EXPECT_EQ(c1->j(), j1);
  EXPECT_TRUE(c1->has_constant_structure());

  const auto c2 = make_standard_chart(2);
  PolyMatrix j2(4, 4, 4);
  j2(0, 1) = PolyScalar::constant(4, -1);
  j2(1, 0) = PolyScalar::constant(4, 1);
  j2(2, 3) = PolyScalar::constant(4, -1);
  j2(3, 2) = PolyScalar::constant(4, 1);
  EXPECT_EQ(c2->j(), j2);
}

TEST(Chart, ZeroTwistIsStandard) {
  const auto twisted = make_twisted_chart(2, PolyMatrix(4, 4, 4));
  EXPECT_EQ(twisted->j(), make_standard_chart(2)->j());
}

TEST(Chart, SingleEntryTwistSquaresToMinusIdentity) {
  PolyMatrix n(4, 4, 4);
  n(0, 2) = PolyScalar::variable(4, 3);
  const auto chart = make_twisted_chart(2, n);
  EXPECT_FALSE(chart->has_constant_structure());
  EXPECT_EQ(chart->j() * chart->j(), minus_identity(4));
}

TEST(Chart, RandomTriangularTwistsSquareToMinusIdentity) {
  FormRng rng(21);
  for (int t = 0; t < 5; ++t) {
    PolyMatrix n(4, 4, 4);
    for (int r = 0; r < 4; ++r) {
      for (int c = r + 1; c < 4; ++c) n(r, c) = rng.real_poly(4, 1);
    }
    const auto chart = make_twisted_chart(2, n);
    EXPECT_EQ(chart->j() * chart->j(), minus_identity(4));
  }
}

TEST(Chart, NonTriangularTwistIsRejected) {
  PolyMatrix n(4, 4, 4);
  n(0, 0) = PolyScalar::variable(4, 0);
  EXPECT_THROW(make_twisted_chart(2, n), std::invalid_argument);
}

TEST(Chart, HolomorphicProjectorOnStandardPlane) {
  const auto chart = make_standard_chart(1);
  const Rational half(1, 2);
  PolyMatrix expected(2, 2, 2);
  expected(0, 0) = PolyScalar::constant(2, half);
  expected(0, 1) = PolyScalar::constant(2, GaussRational(Rational(0), half));
  expected(1, 0) = PolyScalar::constant(2, GaussRational(Rational(0), -half));
  expected(1, 1) = PolyScalar::constant(2, half);
  EXPECT_EQ(chart->projectors().p10, expected);
  EXPECT_EQ(chart->projectors().p01, expected.conj());
}

TEST(Chart, ProjectorsAreComplementaryIdempotents) {
  for (const char* name : {"standard:2", "twisted:1", "twisted:2", "twisted:3"}) {
    const auto chart = chart_from_name(name);
    const auto& p = chart->projectors();
    const int d = chart->dim();
    EXPECT_EQ(p.p10 + p.p01, PolyMatrix::identity(d, d)) << name;
    EXPECT_TRUE((p.p10 * p.p01).is_zero()) << name;
    EXPECT_EQ(p.p10 * p.p10, p.p10) << name;
    // J acts as i on T10 and -i on T01.
    EXPECT_EQ(chart->j() * p.p10, kI * p.p10) << name;
    EXPECT_EQ(chart->j() * p.p01, (-kI) * p.p01) << name;
  }
}

TEST(Chart, NameParsing) {
  EXPECT_EQ(chart_from_name("standard:3")->n(), 3);
  EXPECT_EQ(chart_from_name("twisted:2")->dim(), 4);
  for (const char* bad : {"standard:0", "standard:", "twisted:-1", "flat:2", "standard:two", "",
                          "standard:5"}) {
    EXPECT_THROW(chart_from_name(bad), std::invalid_argument) << bad;
  }
}

TEST(Integrability, NijenhuisTensorByChart) {
  EXPECT_TRUE(nijenhuis_tensor(make_standard_chart(2)).is_zero());
  EXPECT_TRUE(nijenhuis_tensor(chart_from_name("twisted:1")).is_zero());
  EXPECT_FALSE(nijenhuis_tensor(chart_from_name("twisted:2")).is_zero());
}

TEST(Integrability, SingleEntryTwistExampleIsIntegrable) {
  // The x4 twist keeps J integrable; the builtin twist uses x1 instead.
  PolyMatrix n(4, 4, 4);
  n(0, 2) = PolyScalar::variable(4, 3);
  const auto chart = make_twisted_chart(2, n);
  EXPECT_TRUE(nijenhuis_tensor(chart).is_zero());
  EXPECT_TRUE(torsion_form(chart).is_zero());
}

TEST(Integrability, NijenhuisMatchesCoordinateFormula) {
  for (const char* name : {"standard:1", "twisted:1", "twisted:2"}) {
    const auto chart = chart_from_name(name);
    const auto j = VectorForm::from_matrix(chart, chart->j());
    EXPECT_EQ(nijenhuis_tensor(chart), testing::naive_fn_bracket_one_forms(j, j)) << name;
  }
}

TEST(Torsion, VanishesOnStandardCharts) {
  for (int n = 1; n <= 3; ++n) EXPECT_TRUE(torsion_form(make_standard_chart(n)).is_zero());
}

TEST(Torsion, PureTypeOnTwistedChart) {
  const auto chart = chart_from_name("twisted:2");
  const VectorForm theta = torsion_form(chart);
  ASSERT_FALSE(theta.is_zero());
  EXPECT_EQ(theta.degree(), 2);
  EXPECT_EQ(bidegree_split(theta, 2, 0, ValueSide::kAntiholomorphic), theta);
  const VectorForm theta_bar = conjugate_form(theta);
  EXPECT_EQ(bidegree_split(theta_bar, 0, 2, ValueSide::kHolomorphic), theta_bar);
}

TEST(Torsion, EvaluatesBracketOfHolomorphicFrame) {
  // theta(X_a, X_b) = P01 [X_a, X_b] with X_a = P10 d/dx_a.
  const auto chart = chart_from_name("twisted:2");
  const int d = chart->dim();
  const auto& p10 = chart->projectors().p10;
  const auto& p01 = chart->projectors().p01;
  const VectorForm theta = torsion_form(chart);
  auto frame = [&](int a) {
    std::vector<PolyScalar> x;
    for (int r = 0; r < d; ++r) x.push_back(p10(r, a));
    return x;
  };
  for (int a = 0; a < d; ++a) {
    for (int b = a + 1; b < d; ++b) {
      const auto bracket = testing::naive_field_bracket(frame(a), frame(b));
      // theta evaluated on (X_a, X_b) by expanding both frame fields.
      std::vector<PolyScalar> value(static_cast<std::size_t>(d), PolyScalar(d));
      for (int c = 0; c < d; ++c) {
        for (int s = 0; s < d; ++s) {
          for (int t = s + 1; t < d; ++t) {
            const PolyScalar minor = p10(s, a) * p10(t, b) - p10(t, a) * p10(s, b);
            value[c] += minor * theta.component(c).coeff((1u << s) | (1u << t));
          }
        }
      }
      for (int c = 0; c < d; ++c) {
        PolyScalar expected(d);
        for (int r = 0; r < d; ++r) expected += p01(c, r) * bracket[r];
        EXPECT_EQ(value[c], expected) << a << b << c;
      }
    }
  }
}

}  // namespace
}  // namespace acx
