#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "acx/forms.hpp"

namespace acx {

/// Linear connection d + omega ^ on the trivial bundle of rank r.
///
/// omega is an r x r matrix of 1-forms (row-major); nabla s_j = sum_i
/// omega^i_j s_i.
struct Connection {
  ChartPtr chart;
  int rank = 1;
  std::vector<ScalarForm> omega;

  const ScalarForm& entry(int i, int j) const {
    return omega.at(static_cast<std::size_t>(i * rank + j));
  }
};

Connection zero_connection(ChartPtr chart, int rank);
/// Random complex polynomial connection matrix with coefficient degree bound.
Connection random_connection(ChartPtr chart, int rank, int max_degree, std::uint64_t seed);

/// Graded operator on bundle-valued forms.
///
/// Holds an action rather than a normal form; equality of operators is
/// decided extensionally by applying both sides to a probe family.
class DerivationOp {
 public:
  using Action = std::function<BundleForm(const BundleForm&)>;

  DerivationOp(int degree, std::string tag, Action action,
               std::optional<Bidegree> bidegree = std::nullopt);

  static DerivationOp identity();
  static DerivationOp zero(int degree);

  int degree() const { return degree_; }
  const std::optional<Bidegree>& bidegree() const { return bidegree_; }
  const std::string& tag() const { return tag_; }

  BundleForm operator()(const BundleForm& u) const { return (*action_)(u); }

  DerivationOp with_tag(std::string tag) const;

 private:
  int degree_;
  std::string tag_;
  std::shared_ptr<const Action> action_;
  std::optional<Bidegree> bidegree_;
};

/// a o b.
DerivationOp compose(const DerivationOp& a, const DerivationOp& b);
DerivationOp operator+(const DerivationOp& a, const DerivationOp& b);
DerivationOp operator-(const DerivationOp& a, const DerivationOp& b);
DerivationOp operator*(const GaussRational& c, const DerivationOp& a);
/// [D1, D2] = D1 D2 - (-1)^{k1 k2} D2 D1.
DerivationOp graded_commutator(const DerivationOp& a, const DerivationOp& b);
/// k-fold [..[a, b], b ..]; k = 0 returns a.
DerivationOp iterated_commutator(const DerivationOp& a, const DerivationOp& b, int k);

DerivationOp interior_op(const VectorForm& k, std::string name = "K");
DerivationOp nabla(const Connection& conn);
/// Componentwise exterior derivative (the zero connection).
DerivationOp exterior_d_op(const ChartPtr& chart);

/// u -> sum_{p,q} Pi^{p+s,q+t} D Pi^{p,q} u: the bidegree-(s,t) part of D.
DerivationOp bidegree_component(const DerivationOp& d, Bidegree shift);

struct ConnectionSplit {
  DerivationOp nabla10 = DerivationOp::zero(1);
  DerivationOp nabla01 = DerivationOp::zero(1);
  DerivationOp i_theta = DerivationOp::zero(1);
  DerivationOp i_theta_bar = DerivationOp::zero(1);
  VectorForm theta;
};

/// nabla = nabla^{1,0} + nabla^{0,1} - i_theta - i_thetabar.
ConnectionSplit connection_split(const Connection& conn);

enum class LieFlavor { kFull, kHolomorphic, kAntiholomorphic };

/// [i_K, nabla], [i_K, nabla^{1,0}] or [i_K, nabla^{0,1}].
DerivationOp lie_derivative(const VectorForm& k, const Connection& conn,
                            LieFlavor flavor = LieFlavor::kFull, std::string name = "K");
/// Same, reusing an existing split of the connection.
DerivationOp lie_derivative(const VectorForm& k, const Connection& conn,
                            const ConnectionSplit& split, LieFlavor flavor,
                            std::string name = "K");

/// (e^{i_phi}, e^{-i_phi}) for a vector 1-form phi.  Series stop at order n;
/// every application checks that (i_phi)^{n+1} vanishes on its argument and
/// throws std::domain_error otherwise.
std::pair<DerivationOp, DerivationOp> exp_interior(const VectorForm& phi,
                                                   std::string name = "phi");

/// e^{-i_phi} o D o e^{i_phi}, by direct series.
DerivationOp conjugate_operator(const DerivationOp& d, const VectorForm& phi,
                                std::string name = "phi");

/// A named probe form for extensional operator comparison.
struct Probe {
  std::string name;
  BundleForm form;
};

/// x^a s_j, dx^a s_j, s_j, x^a dx^b s_j, plus one seeded random form in every
/// degree 0..2n.
std::vector<Probe> generator_family(const ChartPtr& chart, int rank, int max_degree,
                                    std::uint64_t seed);

/// First probe on which the two operators differ, with the difference.
struct OperatorMismatch {
  std::string probe;
  BundleForm residual;
};
/// Returns the mismatch with the largest residual, or nullopt if equal on all probes.
std::optional<OperatorMismatch> compare_operators(const DerivationOp& lhs, const DerivationOp& rhs,
                                                  const std::vector<Probe>& probes);

/// Number of polynomial terms across all coefficients.
std::size_t term_count(const BundleForm& u);
std::size_t term_count(const VectorForm& k);

struct Decomposition {
  VectorForm k;
  VectorForm l;
};

/// Recovers D = L_K + i_L.  K^a is read off from D on x^a s_1 and L^a from
/// the algebraic remainder on dx^a s_1.  Throws std::domain_error when the
/// reassembled operator differs from D on the probes.
Decomposition decompose_derivation(const DerivationOp& d, const Connection& conn,
                                   const std::vector<Probe>& probes);

struct RefinedDecomposition {
  VectorForm k10;   // A^{p,q}(T^{1,0}), enters through L^{1,0}
  VectorForm k01;   // A^{p,q}(T^{0,1}), enters through L^{0,1}
  VectorForm l10;   // A^{p+1,q}(T^{1,0})
  VectorForm l01;   // A^{p,q+1}(T^{0,1})
};

/// One realisation of D = L^{1,0}_{K'} + L^{0,1}_{K''} + i_{L'} + i_{L''} for
/// D of pure bidegree (p, q).  Not unique.  Throws std::domain_error when the
/// reassembly differs from D on the probes.
RefinedDecomposition refined_decompose(const DerivationOp& d, Bidegree bidegree,
                                       const Connection& conn, const ConnectionSplit& split,
                                       const std::vector<Probe>& probes);

/// L^{1,0}_{K'} + L^{0,1}_{K''} + i_{L'} + i_{L''}.
DerivationOp reassemble(const RefinedDecomposition& parts, const Connection& conn,
                        const ConnectionSplit& split);

// ------------------------------------------------------------ matrix playground

/// Square matrix over the Gaussian rationals, standing in for a unital
/// associative algebra.
class AlgebraElement {
 public:
  AlgebraElement() = default;
  explicit AlgebraElement(int dim);

  static AlgebraElement identity(int dim);
  static AlgebraElement elementary(int dim, int row, int col);

  int dim() const { return dim_; }
  GaussRational& operator()(int r, int c) { return data_.at(static_cast<std::size_t>(r * dim_ + c)); }
  const GaussRational& operator()(int r, int c) const {
    return data_.at(static_cast<std::size_t>(r * dim_ + c));
  }

  bool is_zero() const;
  bool is_nilpotent() const;
  /// Least N >= 1 with x^N = 0; throws if x is not nilpotent.
  int nilpotency_index() const;

  friend AlgebraElement operator+(const AlgebraElement& a, const AlgebraElement& b);
  friend AlgebraElement operator-(const AlgebraElement& a, const AlgebraElement& b);
  friend AlgebraElement operator*(const AlgebraElement& a, const AlgebraElement& b);
  friend AlgebraElement operator*(const GaussRational& c, const AlgebraElement& a);
  friend bool operator==(const AlgebraElement& a, const AlgebraElement& b) = default;

  std::string to_string() const;

 private:
  int dim_ = 0;
  std::vector<GaussRational> data_;
};

AlgebraElement commutator(const AlgebraElement& x, const AlgebraElement& y);
/// [x, y]^{(k)}.
AlgebraElement algebra_iterated_bracket(const AlgebraElement& x, const AlgebraElement& y, int k);
/// Least k >= 1 with [x, y]^{(k)} = 0, searched up to 2 dim - 1.  Throws
/// std::domain_error when the bound is exceeded.
int commutable_degree(const AlgebraElement& x, const AlgebraElement& y);
/// e^x for nilpotent x by finite series; throws if x is not nilpotent.
AlgebraElement exp_nilpotent(const AlgebraElement& x);
/// sum_{i<k} [x, y]^{(i)} / i! for nilpotent y.
AlgebraElement conjugation_closed_form(const AlgebraElement& x, const AlgebraElement& y);

struct ConjugatedExponential {
  AlgebraElement transported;  // sum_{i<k} [x, y]^{(i)} / i!
  AlgebraElement exponential;  // e^{transported}
  int nilpotency_index = 0;    // N with x^N = 0
  bool transported_nilpotent = false;  // transported^N == 0
};

/// Closed form of e^{-y} e^x e^y for nilpotent x and y.
ConjugatedExponential conjugated_exponential(const AlgebraElement& x, const AlgebraElement& y);

}  // namespace acx
