#include "acx/chart.hpp"

#include <sstream>
#include <stdexcept>

#include "acx/detail/masks.hpp"

namespace acx {

PolyMatrix::PolyMatrix(int rows, int cols, int num_vars)
    : rows_(rows), cols_(cols), num_vars_(num_vars),
      data_(static_cast<std::size_t>(rows * cols), PolyScalar(num_vars)) {
  if (rows < 0 || cols < 0) throw std::invalid_argument("PolyMatrix: negative shape");
}

PolyMatrix PolyMatrix::identity(int dim, int num_vars) {
  PolyMatrix m(dim, dim, num_vars);
  for (int i = 0; i < dim; ++i) m(i, i) = PolyScalar::constant(num_vars, 1);
  return m;
}

namespace {

void check_same_shape(const PolyMatrix& a, const PolyMatrix& b) {
  if (a.rows() != b.rows() || a.cols() != b.cols() || a.num_vars() != b.num_vars()) {
    throw std::invalid_argument("PolyMatrix: shape mismatch");
  }
}

}  // namespace

PolyMatrix operator+(const PolyMatrix& a, const PolyMatrix& b) {
  check_same_shape(a, b);
  PolyMatrix r = a;
  for (std::size_t k = 0; k < r.data_.size(); ++k) r.data_[k] += b.data_[k];
  return r;
}

PolyMatrix operator-(const PolyMatrix& a, const PolyMatrix& b) {
  check_same_shape(a, b);
  PolyMatrix r = a;
  for (std::size_t k = 0; k < r.data_.size(); ++k) r.data_[k] -= b.data_[k];
  return r;
}

PolyMatrix operator*(const PolyMatrix& a, const PolyMatrix& b) {
  if (a.cols_ != b.rows_ || a.num_vars_ != b.num_vars_) {
    throw std::invalid_argument("PolyMatrix: product shape mismatch");
  }
  PolyMatrix r(a.rows_, b.cols_, a.num_vars_);
  for (int i = 0; i < a.rows_; ++i) {
    for (int j = 0; j < b.cols_; ++j) {
      PolyScalar acc(a.num_vars_);
      for (int k = 0; k < a.cols_; ++k) {
        if (a(i, k).is_zero() || b(k, j).is_zero()) continue;
        acc += a(i, k) * b(k, j);
      }
      r(i, j) = std::move(acc);
    }
  }
  return r;
}

PolyMatrix operator*(const GaussRational& c, const PolyMatrix& m) {
  PolyMatrix r = m;
  for (auto& e : r.data_) e = c * e;
  return r;
}

PolyMatrix PolyMatrix::conj() const {
  PolyMatrix r = *this;
  for (auto& e : r.data_) e = e.conj();
  return r;
}

bool PolyMatrix::is_zero() const {
  for (const auto& e : data_) {
    if (!e.is_zero()) return false;
  }
  return true;
}

bool PolyMatrix::is_strictly_upper_triangular() const {
  for (int i = 0; i < rows_; ++i) {
    for (int j = 0; j <= i && j < cols_; ++j) {
      if (!(*this)(i, j).is_zero()) return false;
    }
  }
  return true;
}

bool PolyMatrix::is_strictly_lower_triangular() const {
  for (int i = 0; i < rows_; ++i) {
    for (int j = i; j < cols_; ++j) {
      if (!(*this)(i, j).is_zero()) return false;
    }
  }
  return true;
}

std::string PolyMatrix::to_string() const {
  std::ostringstream os;
  os << "[";
  for (int i = 0; i < rows_; ++i) {
    os << (i ? ", [" : "[");
    for (int j = 0; j < cols_; ++j) os << (j ? ", " : "") << (*this)(i, j).to_string();
    os << "]";
  }
  os << "]";
  return os.str();
}

Chart::Chart(std::string name, int n, PolyMatrix j) : name_(std::move(name)), n_(n), j_(std::move(j)) {
  if (n < 1) throw std::invalid_argument("Chart: complex dimension must be >= 1");
  if (2 * n > kMaxVariables) {
    throw std::invalid_argument("Chart: complex dimension " + std::to_string(n) +
                                " exceeds supported maximum " + std::to_string(kMaxVariables / 2));
  }
  const int d = 2 * n;
  if (j_.rows() != d || j_.cols() != d || j_.num_vars() != d) {
    throw std::invalid_argument("Chart: J must be a 2n x 2n matrix over 2n variables");
  }
  for (int r = 0; r < d; ++r) {
    for (int c = 0; c < d; ++c) {
      if (!j_(r, c).has_real_coefficients()) {
        throw std::invalid_argument("Chart: J must have real coefficients");
      }
    }
  }
  const PolyMatrix id = PolyMatrix::identity(d, d);
  if (!(j_ * j_ + id).is_zero()) {
    throw std::invalid_argument("Chart: J*J != -I");
  }
  constant_j_ = true;
  for (int r = 0; r < d; ++r) {
    for (int c = 0; c < d; ++c) constant_j_ = constant_j_ && j_(r, c).is_constant();
  }
  const GaussRational half(Rational(1, 2));
  const GaussRational half_i(Rational(0), Rational(1, 2));
  projectors_.p10 = half * id - half_i * j_;
  projectors_.p01 = half * id + half_i * j_;
  build_projection_tables();
}

void Chart::build_projection_tables() {
  const int d = dim();
  const unsigned full = 1u << d;
  // One-form projections: (dx^i)^{1,0} = sum_b P10(i,b) dx^b.
  auto one_form = [&](int i, bool holomorphic) {
    const PolyMatrix& p = holomorphic ? projectors_.p10 : projectors_.p01;
    std::vector<PolyScalar> f(full, PolyScalar(d));
    for (int b = 0; b < d; ++b) f[1u << b] = p(i, b);
    return f;
  };
  auto wedge = [&](const std::vector<PolyScalar>& a, const std::vector<PolyScalar>& b) {
    std::vector<PolyScalar> out(full, PolyScalar(d));
    for (unsigned ma = 0; ma < full; ++ma) {
      if (a[ma].is_zero()) continue;
      for (unsigned mb = 0; mb < full; ++mb) {
        if (b[mb].is_zero()) continue;
        const int s = detail::wedge_sign(ma, mb);
        if (s == 0) continue;
        PolyScalar prod = a[ma] * b[mb];
        if (s < 0) out[ma | mb] -= prod;
        else out[ma | mb] += prod;
      }
    }
    return out;
  };

  std::vector<std::vector<PolyScalar>> hol(static_cast<std::size_t>(d));
  std::vector<std::vector<PolyScalar>> antihol(static_cast<std::size_t>(d));
  for (int i = 0; i < d; ++i) {
    hol[i] = one_form(i, true);
    antihol[i] = one_form(i, false);
  }

  tables_.assign(full, {});
  for (unsigned mask = 0; mask < full; ++mask) {
    const int k = detail::popcount(mask);
    std::vector<int> slots;
    for (int i = 0; i < d; ++i) {
      if (mask & (1u << i)) slots.push_back(i);
    }
    std::vector<std::vector<PolyScalar>> by_p(static_cast<std::size_t>(k + 1),
                                              std::vector<PolyScalar>(full, PolyScalar(d)));
    for (unsigned choice = 0; choice < (1u << k); ++choice) {
      std::vector<PolyScalar> acc(full, PolyScalar(d));
      acc[0] = PolyScalar::constant(d, 1);
      for (int s = 0; s < k; ++s) {
        acc = wedge(acc, (choice & (1u << s)) ? hol[slots[s]] : antihol[slots[s]]);
      }
      auto& target = by_p[static_cast<std::size_t>(detail::popcount(choice))];
      for (unsigned m = 0; m < full; ++m) target[m] += acc[m];
    }
    tables_[mask].resize(static_cast<std::size_t>(k + 1));
    for (int p = 0; p <= k; ++p) {
      for (unsigned m = 0; m < full; ++m) {
        if (!by_p[p][m].is_zero()) tables_[mask][p].push_back({m, std::move(by_p[p][m])});
      }
    }
  }
}

const std::vector<Chart::ProjectionEntry>& Chart::projection(unsigned mask, int p) const {
  static const std::vector<ProjectionEntry> kEmpty;
  if (mask >= tables_.size()) throw std::out_of_range("Chart::projection: mask out of range");
  const auto& row = tables_[mask];
  if (p < 0 || p >= static_cast<int>(row.size())) return kEmpty;
  return row[static_cast<std::size_t>(p)];
}

namespace {

PolyMatrix standard_structure(int n) {
  const int d = 2 * n;
  PolyMatrix j(d, d, d);
  for (int i = 0; i < n; ++i) {
    // J0 e_{2i} = e_{2i+1}, J0 e_{2i+1} = -e_{2i} (zero-based columns).
    j(2 * i + 1, 2 * i) = PolyScalar::constant(d, 1);
    j(2 * i, 2 * i + 1) = PolyScalar::constant(d, -1);
  }
  return j;
}

}  // namespace

ChartPtr make_standard_chart(int n) {
  if (n < 1) throw std::invalid_argument("make_standard_chart: n must be >= 1");
  if (2 * n > kMaxVariables) throw std::invalid_argument("make_standard_chart: n too large");
  return std::make_shared<const Chart>("standard:" + std::to_string(n), n, standard_structure(n));
}

ChartPtr make_twisted_chart(int n, const PolyMatrix& nilpotent) {
  if (n < 1) throw std::invalid_argument("make_twisted_chart: n must be >= 1");
  if (2 * n > kMaxVariables) throw std::invalid_argument("make_twisted_chart: n too large");
  const int d = 2 * n;
  if (nilpotent.rows() != d || nilpotent.cols() != d || nilpotent.num_vars() != d) {
    throw std::invalid_argument("make_twisted_chart: N must be 2n x 2n over 2n variables");
  }
  const bool upper = nilpotent.is_strictly_upper_triangular();
  if (!upper && !nilpotent.is_strictly_lower_triangular()) {
    throw std::invalid_argument("make_twisted_chart: N must be strictly triangular");
  }
  for (int r = 0; r < d; ++r) {
    for (int c = 0; c < d; ++c) {
      if (!nilpotent(r, c).has_real_coefficients()) {
        throw std::invalid_argument("make_twisted_chart: N must have real coefficients");
      }
    }
  }
  const PolyMatrix id = PolyMatrix::identity(d, d);
  const PolyMatrix a = id + nilpotent;
  // (I+N)^{-1} = I - N + N^2 - ... ; N^d = 0.
  PolyMatrix inverse = id;
  PolyMatrix power = id;
  for (int k = 1; k < d; ++k) {
    power = power * nilpotent;
    inverse = (k % 2) ? inverse - power : inverse + power;
  }
  const PolyMatrix j = a * standard_structure(n) * inverse;
  return std::make_shared<const Chart>("twisted:" + std::to_string(n), n, j);
}

PolyMatrix builtin_twist(int n) {
  const int d = 2 * n;
  PolyMatrix nil(d, d, d);
  if (n == 1) {
    nil(0, 1) = PolyScalar::variable(d, 1);
  } else {
    nil(0, 2) = PolyScalar::variable(d, 0);
  }
  return nil;
}

ChartPtr chart_from_name(const std::string& spec) {
  const auto colon = spec.find(':');
  if (colon == std::string::npos) {
    throw std::invalid_argument("unknown chart '" + spec + "' (expected standard:n or twisted:n)");
  }
  const std::string kind = spec.substr(0, colon);
  const std::string count = spec.substr(colon + 1);
  int n = 0;
  try {
    std::size_t used = 0;
    n = std::stoi(count, &used);
    if (used != count.size()) throw std::invalid_argument("trailing characters");
  } catch (const std::exception&) {
    throw std::invalid_argument("chart '" + spec + "': dimension must be an integer");
  }
  if (n < 1) throw std::invalid_argument("chart '" + spec + "': n must be >= 1");
  if (kind == "standard") return make_standard_chart(n);
  if (kind == "twisted") return make_twisted_chart(n, builtin_twist(n));
  throw std::invalid_argument("unknown chart kind '" + kind + "' (expected standard or twisted)");
}

Projectors projectors(const Chart& chart) { return chart.projectors(); }

}  // namespace acx
