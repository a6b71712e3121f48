#include <gtest/gtest.h>

#include "acx/forms.hpp"
#include "acx/torsion.hpp"
#include "support/naive.hpp"

namespace acx {
namespace {

const GaussRational kI = GaussRational::imaginary_unit();

class FormsOnStandard : public ::testing::Test {
 protected:
  ChartPtr chart = make_standard_chart(2);
  PolyScalar x(int axis) const { return PolyScalar::variable(4, axis); }
  ScalarForm dx(int axis) const { return ScalarForm::differential(chart, axis); }
  ScalarForm fn(const PolyScalar& f) const { return ScalarForm::function(chart, f); }
  VectorForm field(int axis, const PolyScalar& f) const {
    std::vector<PolyScalar> comps(4, PolyScalar(4));
    comps[static_cast<std::size_t>(axis)] = f;
    return VectorForm::vector_field(chart, comps);
  }
  /// alpha (x) d/dx_axis.
  VectorForm valued(const ScalarForm& alpha, int degree, int axis) const {
    std::vector<ScalarForm> comps(4, ScalarForm(chart));
    comps[static_cast<std::size_t>(axis)] = alpha;
    return VectorForm(chart, degree, comps);
  }
};

TEST_F(FormsOnStandard, WedgeOfDifferentials) {
  EXPECT_EQ(wedge(dx(0), dx(1)), ScalarForm::basis(chart, 0b11, PolyScalar::constant(4, 1)));
  EXPECT_TRUE(wedge(dx(0), dx(0)).is_zero());
  EXPECT_EQ(wedge(dx(1), dx(0)), -wedge(dx(0), dx(1)));
}

TEST_F(FormsOnStandard, WedgeHandExpansion) {
  const ScalarForm a = x(0) * dx(0);
  const ScalarForm b = x(1) * dx(1) + dx(2);
  const ScalarForm expected = ScalarForm::basis(chart, 0b011, x(0) * x(1)) +
                              ScalarForm::basis(chart, 0b101, x(0));
  EXPECT_EQ(wedge(a, b), expected);
}

TEST_F(FormsOnStandard, WedgeIsGradedCommutativeAndAssociative) {
  FormRng rng(31);
  for (int k = 0; k <= 2; ++k) {
    for (int l = 0; l <= 2; ++l) {
      const ScalarForm a = random_scalar_form(chart, k, 2, rng);
      const ScalarForm b = random_scalar_form(chart, l, 2, rng);
      const ScalarForm c = random_scalar_form(chart, 1, 1, rng);
      const GaussRational sign = (k * l) % 2 == 0 ? 1 : -1;
      EXPECT_EQ(wedge(a, b), sign * wedge(b, a));
      EXPECT_EQ(wedge(wedge(a, b), c), wedge(a, wedge(b, c)));
    }
  }
}

TEST_F(FormsOnStandard, InteriorExamples) {
  EXPECT_EQ(interior_coordinate(0, wedge(dx(0), dx(1))), dx(1));
  const VectorForm k = valued(dx(0), 1, 1);
  EXPECT_EQ(interior(k, dx(1)), dx(0));
  EXPECT_TRUE(interior(k, fn(x(0) * x(2))).is_zero());
}

TEST_F(FormsOnStandard, InteriorIsGradedDerivation) {
  FormRng rng(32);
  for (int kdeg = 0; kdeg <= 2; ++kdeg) {
    const VectorForm k = random_vector_form(chart, kdeg, 1, rng);
    for (int a = 0; a <= 2; ++a) {
      const ScalarForm alpha = random_scalar_form(chart, a, 1, rng);
      const ScalarForm beta = random_scalar_form(chart, 1, 1, rng);
      const GaussRational sign = ((kdeg - 1) * a) % 2 == 0 ? 1 : -1;
      EXPECT_EQ(interior(k, wedge(alpha, beta)),
                wedge(interior(k, alpha), beta) + sign * wedge(alpha, interior(k, beta)));
    }
  }
}

TEST_F(FormsOnStandard, ContractExamples) {
  const VectorForm k = valued(dx(0), 1, 1);
  const VectorForm l = valued(dx(1), 1, 2);
  EXPECT_EQ(contract(k, l), valued(dx(0), 1, 2));
  EXPECT_TRUE(contract(field(0, x(1)), field(1, x(0))).is_zero());
}

TEST_F(FormsOnStandard, NijenhuisRichardsonBracket) {
  EXPECT_TRUE(nr_bracket(field(0, x(1)), field(1, x(0))).is_zero());
  FormRng rng(33);
  const VectorForm id = VectorForm::identity(chart);
  for (int kdeg = 1; kdeg <= 3; ++kdeg) {
    const VectorForm k = random_vector_form(chart, kdeg, 1, rng);
    // [K, I]^ = -(k-1) K for K of form degree k.
    EXPECT_EQ(nr_bracket(k, id), GaussRational(1 - kdeg) * k) << kdeg;
    EXPECT_EQ(iterated_nr_bracket(k, id, 0), k);
  }
}

TEST_F(FormsOnStandard, NijenhuisRichardsonAntisymmetry) {
  FormRng rng(34);
  for (int kdeg = 0; kdeg <= 2; ++kdeg) {
    for (int ldeg = 0; ldeg <= 2; ++ldeg) {
      const VectorForm k = random_vector_form(chart, kdeg, 1, rng);
      const VectorForm l = random_vector_form(chart, ldeg, 1, rng);
      const GaussRational sign = ((kdeg - 1) * (ldeg - 1)) % 2 == 0 ? -1 : 1;
      EXPECT_EQ(nr_bracket(k, l), sign * nr_bracket(l, k)) << kdeg << ldeg;
    }
  }
}

TEST_F(FormsOnStandard, ExteriorDerivative) {
  EXPECT_EQ(exterior_d(x(0) * dx(1)), wedge(dx(0), dx(1)));
  FormRng rng(35);
  for (int k = 0; k <= 2; ++k) {
    const ScalarForm a = random_scalar_form(chart, k, 3, rng);
    const ScalarForm b = random_scalar_form(chart, 1, 2, rng);
    EXPECT_TRUE(exterior_d(exterior_d(a)).is_zero());
    const GaussRational sign = k % 2 == 0 ? 1 : -1;
    EXPECT_EQ(exterior_d(wedge(a, b)),
              wedge(exterior_d(a), b) + sign * wedge(a, exterior_d(b)));
  }
}

TEST_F(FormsOnStandard, HolomorphicDifferentialIsPure) {
  const auto plane = make_standard_chart(1);
  const ScalarForm dz = ScalarForm::differential(plane, 0) +
                        kI * ScalarForm::differential(plane, 1);
  EXPECT_EQ(bidegree_split(dz, 1, 0), dz);
  EXPECT_TRUE(bidegree_split(dz, 0, 1).is_zero());
  const ScalarForm dzbar = ScalarForm::differential(plane, 0) -
                           kI * ScalarForm::differential(plane, 1);
  EXPECT_EQ(conjugate_form(dz), dzbar);
  EXPECT_EQ(bidegree_split(dzbar, 0, 1), dzbar);
}

TEST_F(FormsOnStandard, LieBracketOfVectorFields) {
  const VectorForm expected = field(1, PolyScalar::constant(4, 1));
  EXPECT_EQ(fn_bracket(field(0, PolyScalar::constant(4, 1)), field(1, x(0))), expected);
}

TEST_F(FormsOnStandard, StructureIsIntegrable) {
  const VectorForm j = VectorForm::from_matrix(chart, chart->j());
  EXPECT_TRUE(fn_bracket(j, j).is_zero());
}

class FormsOnCharts : public ::testing::TestWithParam<const char*> {
 protected:
  ChartPtr chart = chart_from_name(GetParam());
};

TEST_P(FormsOnCharts, BidegreePiecesSumToForm) {
  FormRng rng(41);
  const int n = chart->n();
  for (int k = 0; k <= chart->dim(); ++k) {
    const ScalarForm a = random_scalar_form(chart, k, 1, rng);
    ScalarForm sum(chart);
    for (int p = 0; p <= k; ++p) {
      const ScalarForm piece = bidegree_split(a, p, k - p);
      if (p > n || k - p > n) EXPECT_TRUE(piece.is_zero()) << p << "," << k - p;
      EXPECT_EQ(bidegree_split(piece, p, k - p), piece);
      for (int q = 0; q <= k; ++q) {
        if (q != p) EXPECT_TRUE(bidegree_split(piece, q, k - q).is_zero());
      }
      sum += piece;
    }
    EXPECT_EQ(sum, a) << "degree " << k;
  }
}

TEST_P(FormsOnCharts, ConjugationSwapsBidegree) {
  FormRng rng(42);
  for (int k = 1; k <= 2; ++k) {
    const ScalarForm a = random_scalar_form(chart, k, 1, rng);
    for (int p = 0; p <= k; ++p) {
      EXPECT_EQ(conjugate_form(bidegree_split(a, p, k - p)),
                bidegree_split(conjugate_form(a), k - p, p));
    }
  }
  const VectorForm phi = random_form(chart, {0, 1}, ValueSide::kHolomorphic, 2, 5);
  const VectorForm psi_bar = conjugate_form(phi);
  EXPECT_EQ(conjugate_form(psi_bar), phi);
  EXPECT_EQ(bidegree_split(psi_bar, 1, 0, ValueSide::kAntiholomorphic), psi_bar);
}

TEST_P(FormsOnCharts, RandomFormIsReproducibleAndPure) {
  const VectorForm a = random_form(chart, {0, 1}, ValueSide::kHolomorphic, 2, 77);
  const VectorForm b = random_form(chart, {0, 1}, ValueSide::kHolomorphic, 2, 77);
  EXPECT_EQ(a, b);
  EXPECT_EQ(bidegree_split(a, 0, 1, ValueSide::kHolomorphic), a);
  int nonzero = 0;
  for (std::uint64_t seed = 0; seed < 100; ++seed) {
    if (!random_form(chart, {1, 1}, ValueSide::kAntiholomorphic, 1, seed).is_zero()) ++nonzero;
  }
  EXPECT_EQ(nonzero, 100);
}

TEST_P(FormsOnCharts, FroelicherNijenhuisMatchesCoordinateFormula) {
  FormRng rng(43);
  for (int t = 0; t < 3; ++t) {
    const VectorForm k = random_vector_form(chart, 1, 1, rng);
    const VectorForm l = random_vector_form(chart, 1, 1, rng);
    const VectorForm bracket = fn_bracket(k, l);
    ASSERT_FALSE(bracket.is_zero());
    EXPECT_EQ(bracket, testing::naive_fn_bracket_one_forms(k, l));
  }
}

TEST_P(FormsOnCharts, FroelicherNijenhuisAntisymmetry) {
  FormRng rng(44);
  for (int kdeg = 0; kdeg <= 2; ++kdeg) {
    for (int ldeg = 0; ldeg <= 1; ++ldeg) {
      const VectorForm k = random_vector_form(chart, kdeg, 1, rng);
      const VectorForm l = random_vector_form(chart, ldeg, 1, rng);
      const GaussRational sign = (kdeg * ldeg) % 2 == 0 ? -1 : 1;
      EXPECT_EQ(fn_bracket(k, l), sign * fn_bracket(l, k)) << kdeg << ldeg;
    }
  }
}

TEST_P(FormsOnCharts, LieDerivativeOfFunctionIsDirectional) {
  FormRng rng(45);
  const int d = chart->dim();
  std::vector<PolyScalar> comps;
  for (int a = 0; a < d; ++a) comps.push_back(rng.poly(d, 2));
  const VectorForm x = VectorForm::vector_field(chart, comps);
  const PolyScalar f = rng.poly(d, 3);
  PolyScalar expected(d);
  for (int a = 0; a < d; ++a) expected += comps[static_cast<std::size_t>(a)] * f.partial(a);
  EXPECT_EQ(lie_derivative_scalar(x, ScalarForm::function(chart, f)),
            ScalarForm::function(chart, expected));
}

TEST_P(FormsOnCharts, BracketOfHolomorphicTypeFormsHasListedTypes) {
  for (std::uint64_t seed = 1; seed <= 3; ++seed) {
    const VectorForm phi = random_form(chart, {0, 1}, ValueSide::kHolomorphic, 2, seed);
    const VectorForm psi = random_form(chart, {0, 1}, ValueSide::kHolomorphic, 2, seed + 100);
    const VectorForm bracket = fn_bracket(phi, psi);
    const VectorForm listed = bidegree_split(bracket, 0, 2, ValueSide::kHolomorphic) +
                              bidegree_split(bracket, 1, 1, ValueSide::kHolomorphic) +
                              bidegree_split(bracket, 0, 2, ValueSide::kAntiholomorphic);
    EXPECT_EQ(listed, bracket) << "seed " << seed;
    if (chart->has_constant_structure()) {
      EXPECT_EQ(bidegree_split(bracket, 0, 2, ValueSide::kHolomorphic), bracket);
    }
  }
}

TEST_P(FormsOnCharts, IteratedInteriorBracketsTerminate) {
  const int n = chart->n();
  const VectorForm phi = random_form(chart, {0, 1}, ValueSide::kHolomorphic, 1, 3);
  const VectorForm psi_bar =
      conjugate_form(random_form(chart, {0, 1}, ValueSide::kHolomorphic, 1, 4));
  const VectorForm theta = torsion_form(chart);
  EXPECT_TRUE(iterated_nr_bracket(phi, psi_bar, 3).is_zero());
  EXPECT_TRUE(iterated_nr_bracket(theta, phi, 4).is_zero());
  EXPECT_TRUE(nr_bracket(conjugate_form(theta), phi).is_zero());
  const VectorForm phi_phi = fn_bracket(phi, phi);
  EXPECT_TRUE(nr_bracket(nr_bracket(phi_phi, phi), phi).is_zero());
  EXPECT_TRUE(iterated_nr_bracket(phi_phi, psi_bar, 2 * n + 1).is_zero());
}

INSTANTIATE_TEST_SUITE_P(Charts, FormsOnCharts,
                         ::testing::Values("standard:1", "standard:2", "twisted:1", "twisted:2"),
                         [](const auto& info) {
                           std::string name = info.param;
                           name[name.find(':')] = '_';
                           return name;
                         });

}  // namespace
}  // namespace acx
