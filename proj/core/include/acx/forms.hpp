#pragma once

#include <cstdint>
#include <random>
#include <string>
#include <vector>

#include "acx/algebra.hpp"
#include "acx/chart.hpp"

namespace acx {

/// A pair (p, q).  Form bidegrees are non-negative; derivation bidegrees may
/// have a negative entry.
struct Bidegree {
  int p = 0;
  int q = 0;
  int total() const { return p + q; }
  friend bool operator==(const Bidegree&, const Bidegree&) = default;
};

/// Which summand of T_C M = T^{1,0} + T^{0,1} a vector value lies in.
enum class ValueSide { kHolomorphic, kAntiholomorphic };

/// Complex-valued differential form on a chart, possibly of mixed degree.
///
/// Coefficients are stored against the real coordinate coframe, indexed by
/// the bitmask of the basis form dx^{i1} ^ ... ^ dx^{ik}.
class ScalarForm {
 public:
  ScalarForm() = default;
  explicit ScalarForm(ChartPtr chart);

  static ScalarForm function(ChartPtr chart, PolyScalar f);
  /// f dx^{mask}.
  static ScalarForm basis(ChartPtr chart, unsigned mask, PolyScalar f);
  static ScalarForm coordinate(ChartPtr chart, int axis);
  static ScalarForm differential(ChartPtr chart, int axis);

  const ChartPtr& chart() const { return chart_; }
  int dim() const;
  unsigned basis_count() const { return static_cast<unsigned>(coeffs_.size()); }
  const PolyScalar& coeff(unsigned mask) const { return coeffs_.at(mask); }
  PolyScalar& coeff(unsigned mask) { return coeffs_.at(mask); }

  bool is_zero() const;
  /// Degree of a homogeneous nonzero form; -1 for zero; throws if mixed.
  int degree() const;
  bool is_homogeneous() const;
  /// The degree-k part.
  ScalarForm part(int k) const;

  ScalarForm& operator+=(const ScalarForm& o);
  ScalarForm& operator-=(const ScalarForm& o);
  friend ScalarForm operator+(ScalarForm a, const ScalarForm& b) { return a += b; }
  friend ScalarForm operator-(ScalarForm a, const ScalarForm& b) { return a -= b; }
  ScalarForm operator-() const;
  friend ScalarForm operator*(const GaussRational& c, const ScalarForm& f);
  friend ScalarForm operator*(const PolyScalar& c, const ScalarForm& f);
  friend bool operator==(const ScalarForm& a, const ScalarForm& b);

  ScalarForm conj() const;
  std::string to_string() const;

 private:
  void check_chart(const ScalarForm& o, const char* op) const;

  ChartPtr chart_;
  std::vector<PolyScalar> coeffs_;
};

/// Tangent-valued form K = sum_a K^a (x) d/dx_a of form degree k.
///
/// Degree -1 and degrees above the real dimension are permitted for the zero
/// form only; they arise when a contraction or bracket leaves the range.
class VectorForm {
 public:
  VectorForm() = default;
  VectorForm(ChartPtr chart, int degree);
  VectorForm(ChartPtr chart, int degree, std::vector<ScalarForm> components);

  /// sum_a dx^a (x) d/dx_a.
  static VectorForm identity(ChartPtr chart);
  /// The vector 1-form v -> M v for a matrix acting on tangent components.
  static VectorForm from_matrix(ChartPtr chart, const PolyMatrix& m);
  static VectorForm vector_field(ChartPtr chart, std::vector<PolyScalar> components);

  const ChartPtr& chart() const { return chart_; }
  int degree() const { return degree_; }
  int dim() const { return static_cast<int>(components_.size()); }
  const ScalarForm& component(int axis) const { return components_.at(axis); }
  const std::vector<ScalarForm>& components() const { return components_; }

  bool is_zero() const;

  VectorForm& operator+=(const VectorForm& o);
  VectorForm& operator-=(const VectorForm& o);
  friend VectorForm operator+(VectorForm a, const VectorForm& b) { return a += b; }
  friend VectorForm operator-(VectorForm a, const VectorForm& b) { return a -= b; }
  VectorForm operator-() const;
  friend VectorForm operator*(const GaussRational& c, const VectorForm& k);
  friend bool operator==(const VectorForm& a, const VectorForm& b);

  /// Applies a projector to the vector values: K' = P K.
  VectorForm project_values(const PolyMatrix& projector) const;
  VectorForm conj() const;
  std::string to_string() const;

 private:
  void check_compatible(const VectorForm& o, const char* op) const;

  ChartPtr chart_;
  int degree_ = 0;
  std::vector<ScalarForm> components_;
};

/// Form with values in the trivial bundle of rank r, u = sum_j u^j (x) s_j.
class BundleForm {
 public:
  BundleForm() = default;
  BundleForm(ChartPtr chart, int rank);
  BundleForm(ChartPtr chart, std::vector<ScalarForm> components);

  /// alpha (x) s_j.
  static BundleForm single(const ScalarForm& alpha, int rank, int slot);

  const ChartPtr& chart() const { return chart_; }
  int rank() const { return static_cast<int>(components_.size()); }
  const ScalarForm& component(int j) const { return components_.at(j); }
  ScalarForm& component(int j) { return components_.at(j); }
  const std::vector<ScalarForm>& components() const { return components_; }

  bool is_zero() const;
  BundleForm part(int k) const;

  BundleForm& operator+=(const BundleForm& o);
  BundleForm& operator-=(const BundleForm& o);
  friend BundleForm operator+(BundleForm a, const BundleForm& b) { return a += b; }
  friend BundleForm operator-(BundleForm a, const BundleForm& b) { return a -= b; }
  BundleForm operator-() const;
  friend BundleForm operator*(const GaussRational& c, const BundleForm& u);
  friend bool operator==(const BundleForm& a, const BundleForm& b);

  BundleForm conj() const;
  std::string to_string() const;

 private:
  void check_compatible(const BundleForm& o, const char* op) const;

  ChartPtr chart_;
  std::vector<ScalarForm> components_;
};

ScalarForm wedge(const ScalarForm& a, const ScalarForm& b);
/// alpha ^ u, componentwise.
BundleForm wedge(const ScalarForm& a, const BundleForm& u);

/// Contraction with the coordinate field d/dx_{axis+1}.
ScalarForm interior_coordinate(int axis, const ScalarForm& a);
/// i_K alpha = sum_a K^a ^ i_{d/dx_a} alpha.
ScalarForm interior(const VectorForm& k, const ScalarForm& a);
BundleForm interior(const VectorForm& k, const BundleForm& u);

/// i_K L: interior of K applied to every component of L.
VectorForm contract(const VectorForm& k, const VectorForm& l);
/// [K, L]^ = i_K L - (-1)^{(k-1)(l-1)} i_L K.
VectorForm nr_bracket(const VectorForm& k, const VectorForm& l);
/// [..[K, L]^, L]^ .. ]^ with j brackets; j = 0 returns K.
VectorForm iterated_nr_bracket(const VectorForm& k, const VectorForm& l, int j);

ScalarForm exterior_d(const ScalarForm& a);
/// Lie derivative [i_K, d] on scalar forms.
ScalarForm lie_derivative_scalar(const VectorForm& k, const ScalarForm& a);
/// Froelicher-Nijenhuis bracket, extracted from [L_K, L_L] on coordinate functions.
VectorForm fn_bracket(const VectorForm& k, const VectorForm& l);

/// Pi^{p,q}; forms of other degrees project to zero.
ScalarForm bidegree_split(const ScalarForm& a, int p, int q);
BundleForm bidegree_split(const BundleForm& u, int p, int q);
/// Pi^{p,q} on the form slots followed by the value projection to `side`.
VectorForm bidegree_split(const VectorForm& k, int p, int q, ValueSide side);

/// Dolbeault pieces of d on scalar forms: sum_{p,q} Pi^{p+1,q} d Pi^{p,q} and
/// sum_{p,q} Pi^{p,q+1} d Pi^{p,q}.
ScalarForm del(const ScalarForm& a);
ScalarForm delbar(const ScalarForm& a);
/// Componentwise dbar of a vector form in the real coordinate frame.  Agrees
/// with the holomorphic-frame dbar only when J is constant.
VectorForm delbar_components(const VectorForm& k);

ScalarForm conjugate_form(const ScalarForm& a);
VectorForm conjugate_form(const VectorForm& k);
BundleForm conjugate_form(const BundleForm& u);

/// Deterministic generator for test inputs.  Uses its own integer mapping on
/// top of mt19937_64 so the output is identical across standard libraries.
class FormRng {
 public:
  explicit FormRng(std::uint64_t seed) : engine_(seed) {}

  /// Uniform integer in [lo, hi].
  std::int64_t uniform(std::int64_t lo, std::int64_t hi);
  GaussRational small_gauss();
  /// Random polynomial of total degree <= max_degree; each monomial is kept
  /// with probability one half.  Never returns zero.
  PolyScalar poly(int num_vars, int max_degree);
  /// Random real-coefficient polynomial (for real data such as connections).
  PolyScalar real_poly(int num_vars, int max_degree);

 private:
  std::mt19937_64 engine_;
};

/// Mixes a master seed with a stream label (splitmix64).
std::uint64_t derive_seed(std::uint64_t master, std::uint64_t stream);

ScalarForm random_scalar_form(ChartPtr chart, int degree, int max_degree, FormRng& rng);
BundleForm random_bundle_form(ChartPtr chart, int rank, int degree, int max_degree, FormRng& rng);
/// Unconstrained random K in A^degree(T_C M).
VectorForm random_vector_form(ChartPtr chart, int degree, int max_degree, FormRng& rng);
/// Random K in A^{p,q}(T^{1,0}) or A^{p,q}(T^{0,1}), obtained by projecting a
/// raw random form.
VectorForm random_form(ChartPtr chart, Bidegree bidegree, ValueSide side, int max_degree,
                       std::uint64_t seed);

}  // namespace acx
