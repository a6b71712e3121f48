#pragma once

#include <memory>
#include <string>
#include <vector>

#include "acx/algebra.hpp"

namespace acx {

/// Dense square-or-rectangular matrix of polynomials, row-major.
class PolyMatrix {
 public:
  PolyMatrix() = default;
  PolyMatrix(int rows, int cols, int num_vars);

  static PolyMatrix identity(int dim, int num_vars);

  int rows() const { return rows_; }
  int cols() const { return cols_; }
  int num_vars() const { return num_vars_; }

  PolyScalar& operator()(int r, int c) { return data_[static_cast<std::size_t>(r * cols_ + c)]; }
  const PolyScalar& operator()(int r, int c) const {
    return data_[static_cast<std::size_t>(r * cols_ + c)];
  }

  friend PolyMatrix operator+(const PolyMatrix& a, const PolyMatrix& b);
  friend PolyMatrix operator-(const PolyMatrix& a, const PolyMatrix& b);
  friend PolyMatrix operator*(const PolyMatrix& a, const PolyMatrix& b);
  friend PolyMatrix operator*(const GaussRational& c, const PolyMatrix& m);
  friend bool operator==(const PolyMatrix& a, const PolyMatrix& b) = default;

  PolyMatrix conj() const;
  bool is_zero() const;
  bool is_strictly_upper_triangular() const;
  bool is_strictly_lower_triangular() const;
  std::string to_string() const;

 private:
  int rows_ = 0;
  int cols_ = 0;
  int num_vars_ = 0;
  std::vector<PolyScalar> data_;
};

/// P10 = (I - iJ)/2 and P01 = (I + iJ)/2, acting on column vectors of
/// tangent components.
struct Projectors {
  PolyMatrix p10;
  PolyMatrix p01;
};

class Chart;
using ChartPtr = std::shared_ptr<const Chart>;

/// One coordinate chart R^{2n} with a polynomial almost complex structure.
///
/// J acts on tangent component columns: column a of J holds the components
/// of J(d/dx_{a+1}).  Construction verifies J*J = -I exactly.  A chart also
/// caches the bidegree projection tables for every form degree.
class Chart {
 public:
  /// A single entry of a bidegree projection table: coefficient of dx^target.
  struct ProjectionEntry {
    unsigned target;
    PolyScalar coeff;
  };

  Chart(std::string name, int n, PolyMatrix j);

  const std::string& name() const { return name_; }
  /// Complex dimension n.
  int n() const { return n_; }
  /// Real dimension 2n, which is also the polynomial variable count.
  int dim() const { return 2 * n_; }
  const PolyMatrix& j() const { return j_; }
  const Projectors& projectors() const { return projectors_; }
  /// Whether J has constant coefficients (the standard chart family).
  bool has_constant_structure() const { return constant_j_; }

  /// Pi^{p,q}(dx^mask) as a list of basis coefficients; p + q = popcount(mask).
  const std::vector<ProjectionEntry>& projection(unsigned mask, int p) const;

 private:
  void build_projection_tables();

  std::string name_;
  int n_;
  PolyMatrix j_;
  Projectors projectors_;
  bool constant_j_ = false;
  // Indexed [mask][p].
  std::vector<std::vector<std::vector<ProjectionEntry>>> tables_;
};

/// Constant block structure J0 with J0 d/dx_{2i-1} = d/dx_{2i}.
ChartPtr make_standard_chart(int n);

/// J = (I+N) J0 (I+N)^{-1} for a strictly triangular polynomial N.
ChartPtr make_twisted_chart(int n, const PolyMatrix& nilpotent);

/// The pinned twisting matrix used by the "twisted:n" builtin: a single
/// entry N[0][2] = x_1 for n >= 2, which makes J non-integrable, and
/// N[0][1] = x_2 for n = 1, where every J is integrable.
PolyMatrix builtin_twist(int n);

/// Resolves "standard:n" or "twisted:n".  Throws std::invalid_argument.
ChartPtr chart_from_name(const std::string& spec);

Projectors projectors(const Chart& chart);

}  // namespace acx
