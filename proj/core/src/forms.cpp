#include "acx/forms.hpp"

#include <sstream>
#include <stdexcept>

#include "acx/detail/masks.hpp"

namespace acx {

namespace {

void require_chart(const ChartPtr& chart, const char* who) {
  if (!chart) throw std::invalid_argument(std::string(who) + ": null chart");
}

std::string basis_name(unsigned mask) {
  if (mask == 0) return "1";
  std::string s;
  for (int i = 0; i < 32; ++i) {
    if (!(mask & (1u << i))) continue;
    if (!s.empty()) s += "^";
    s += "dx" + std::to_string(i + 1);
  }
  return s;
}

}  // namespace

// ---------------------------------------------------------------- ScalarForm

ScalarForm::ScalarForm(ChartPtr chart) : chart_(std::move(chart)) {
  require_chart(chart_, "ScalarForm");
  coeffs_.assign(1u << chart_->dim(), PolyScalar(chart_->dim()));
}

ScalarForm ScalarForm::function(ChartPtr chart, PolyScalar f) {
  return basis(std::move(chart), 0, std::move(f));
}

ScalarForm ScalarForm::basis(ChartPtr chart, unsigned mask, PolyScalar f) {
  ScalarForm out(std::move(chart));
  if (mask >= out.basis_count()) throw std::out_of_range("ScalarForm::basis: mask out of range");
  if (f.num_vars() != out.dim()) throw std::invalid_argument("ScalarForm::basis: variable count");
  out.coeffs_[mask] = std::move(f);
  return out;
}

ScalarForm ScalarForm::coordinate(ChartPtr chart, int axis) {
  const int d = chart->dim();
  return function(std::move(chart), PolyScalar::variable(d, axis));
}

ScalarForm ScalarForm::differential(ChartPtr chart, int axis) {
  const int d = chart->dim();
  if (axis < 0 || axis >= d) throw std::out_of_range("ScalarForm::differential: axis");
  return basis(std::move(chart), 1u << axis, PolyScalar::constant(d, 1));
}

int ScalarForm::dim() const { return chart_ ? chart_->dim() : 0; }

bool ScalarForm::is_zero() const {
  for (const auto& c : coeffs_) {
    if (!c.is_zero()) return false;
  }
  return true;
}

int ScalarForm::degree() const {
  int deg = -1;
  for (unsigned m = 0; m < coeffs_.size(); ++m) {
    if (coeffs_[m].is_zero()) continue;
    const int k = detail::popcount(m);
    if (deg >= 0 && k != deg) throw std::logic_error("ScalarForm::degree: mixed-degree form");
    deg = k;
  }
  return deg;
}

bool ScalarForm::is_homogeneous() const {
  int deg = -1;
  for (unsigned m = 0; m < coeffs_.size(); ++m) {
    if (coeffs_[m].is_zero()) continue;
    const int k = detail::popcount(m);
    if (deg >= 0 && k != deg) return false;
    deg = k;
  }
  return true;
}

ScalarForm ScalarForm::part(int k) const {
  ScalarForm out(chart_);
  for (unsigned m = 0; m < coeffs_.size(); ++m) {
    if (detail::popcount(m) == k) out.coeffs_[m] = coeffs_[m];
  }
  return out;
}

void ScalarForm::check_chart(const ScalarForm& o, const char* op) const {
  if (chart_ != o.chart_) throw std::invalid_argument(std::string(op) + ": chart mismatch");
}

ScalarForm& ScalarForm::operator+=(const ScalarForm& o) {
  check_chart(o, "ScalarForm +");
  for (std::size_t m = 0; m < coeffs_.size(); ++m) coeffs_[m] += o.coeffs_[m];
  return *this;
}

ScalarForm& ScalarForm::operator-=(const ScalarForm& o) {
  check_chart(o, "ScalarForm -");
  for (std::size_t m = 0; m < coeffs_.size(); ++m) coeffs_[m] -= o.coeffs_[m];
  return *this;
}

ScalarForm ScalarForm::operator-() const {
  ScalarForm out = *this;
  for (auto& c : out.coeffs_) c = -c;
  return out;
}

ScalarForm operator*(const GaussRational& c, const ScalarForm& f) {
  ScalarForm out = f;
  for (auto& e : out.coeffs_) e = c * e;
  return out;
}

ScalarForm operator*(const PolyScalar& c, const ScalarForm& f) {
  ScalarForm out = f;
  for (auto& e : out.coeffs_) {
    if (!e.is_zero()) e = c * e;
  }
  return out;
}

bool operator==(const ScalarForm& a, const ScalarForm& b) {
  return a.chart_ == b.chart_ && a.coeffs_ == b.coeffs_;
}

ScalarForm ScalarForm::conj() const {
  ScalarForm out = *this;
  for (auto& e : out.coeffs_) e = e.conj();
  return out;
}

std::string ScalarForm::to_string() const {
  std::ostringstream os;
  bool first = true;
  for (unsigned m = 0; m < coeffs_.size(); ++m) {
    if (coeffs_[m].is_zero()) continue;
    if (!first) os << " + ";
    first = false;
    os << "(" << coeffs_[m].to_string() << ")";
    if (m != 0) os << " " << basis_name(m);
  }
  return first ? "0" : os.str();
}

// ---------------------------------------------------------------- VectorForm

VectorForm::VectorForm(ChartPtr chart, int degree) : chart_(std::move(chart)), degree_(degree) {
  require_chart(chart_, "VectorForm");
  if (degree < -1) throw std::invalid_argument("VectorForm: degree out of range");
  components_.assign(static_cast<std::size_t>(chart_->dim()), ScalarForm(chart_));
}

VectorForm::VectorForm(ChartPtr chart, int degree, std::vector<ScalarForm> components)
    : VectorForm(std::move(chart), degree) {
  if (static_cast<int>(components.size()) != chart_->dim()) {
    throw std::invalid_argument("VectorForm: need one component per tangent axis");
  }
  for (const auto& c : components) {
    if (c.chart() != chart_) throw std::invalid_argument("VectorForm: component chart mismatch");
    if (!c.is_zero() && (!c.is_homogeneous() || c.degree() != degree)) {
      throw std::invalid_argument("VectorForm: component is not of degree " +
                                  std::to_string(degree));
    }
  }
  components_ = std::move(components);
}

VectorForm VectorForm::identity(ChartPtr chart) {
  VectorForm out(chart, 1);
  for (int a = 0; a < chart->dim(); ++a) out.components_[a] = ScalarForm::differential(chart, a);
  return out;
}

VectorForm VectorForm::from_matrix(ChartPtr chart, const PolyMatrix& m) {
  const int d = chart->dim();
  if (m.rows() != d || m.cols() != d) throw std::invalid_argument("VectorForm::from_matrix: shape");
  VectorForm out(chart, 1);
  for (int a = 0; a < d; ++a) {
    for (int b = 0; b < d; ++b) {
      out.components_[a].coeff(1u << b) = m(a, b);
    }
  }
  return out;
}

VectorForm VectorForm::vector_field(ChartPtr chart, std::vector<PolyScalar> components) {
  if (static_cast<int>(components.size()) != chart->dim()) {
    throw std::invalid_argument("VectorForm::vector_field: component count");
  }
  VectorForm out(chart, 0);
  for (int a = 0; a < chart->dim(); ++a) {
    out.components_[a] = ScalarForm::function(chart, std::move(components[a]));
  }
  return out;
}

bool VectorForm::is_zero() const {
  for (const auto& c : components_) {
    if (!c.is_zero()) return false;
  }
  return true;
}

void VectorForm::check_compatible(const VectorForm& o, const char* op) const {
  if (chart_ != o.chart_) throw std::invalid_argument(std::string(op) + ": chart mismatch");
  if (degree_ != o.degree_) {
    throw std::invalid_argument(std::string(op) + ": degree mismatch (" + std::to_string(degree_) +
                                " vs " + std::to_string(o.degree_) + ")");
  }
}

VectorForm& VectorForm::operator+=(const VectorForm& o) {
  check_compatible(o, "VectorForm +");
  for (std::size_t a = 0; a < components_.size(); ++a) components_[a] += o.components_[a];
  return *this;
}

VectorForm& VectorForm::operator-=(const VectorForm& o) {
  check_compatible(o, "VectorForm -");
  for (std::size_t a = 0; a < components_.size(); ++a) components_[a] -= o.components_[a];
  return *this;
}

VectorForm VectorForm::operator-() const {
  VectorForm out = *this;
  for (auto& c : out.components_) c = -c;
  return out;
}

VectorForm operator*(const GaussRational& c, const VectorForm& k) {
  VectorForm out = k;
  for (auto& e : out.components_) e = c * e;
  return out;
}

bool operator==(const VectorForm& a, const VectorForm& b) {
  return a.chart_ == b.chart_ && a.degree_ == b.degree_ && a.components_ == b.components_;
}

VectorForm VectorForm::project_values(const PolyMatrix& projector) const {
  const int d = dim();
  VectorForm out(chart_, degree_);
  for (int b = 0; b < d; ++b) {
    ScalarForm acc(chart_);
    for (int a = 0; a < d; ++a) {
      if (projector(b, a).is_zero() || components_[a].is_zero()) continue;
      acc += projector(b, a) * components_[a];
    }
    out.components_[b] = std::move(acc);
  }
  return out;
}

VectorForm VectorForm::conj() const {
  VectorForm out = *this;
  for (auto& c : out.components_) c = c.conj();
  return out;
}

std::string VectorForm::to_string() const {
  std::ostringstream os;
  bool first = true;
  for (int a = 0; a < dim(); ++a) {
    if (components_[a].is_zero()) continue;
    if (!first) os << " + ";
    first = false;
    os << "[" << components_[a].to_string() << "] d/dx" << (a + 1);
  }
  return first ? "0" : os.str();
}

// ---------------------------------------------------------------- BundleForm

BundleForm::BundleForm(ChartPtr chart, int rank) : chart_(std::move(chart)) {
  require_chart(chart_, "BundleForm");
  if (rank < 1) throw std::invalid_argument("BundleForm: rank must be >= 1");
  components_.assign(static_cast<std::size_t>(rank), ScalarForm(chart_));
}

BundleForm::BundleForm(ChartPtr chart, std::vector<ScalarForm> components)
    : chart_(std::move(chart)), components_(std::move(components)) {
  require_chart(chart_, "BundleForm");
  if (components_.empty()) throw std::invalid_argument("BundleForm: rank must be >= 1");
  for (const auto& c : components_) {
    if (c.chart() != chart_) throw std::invalid_argument("BundleForm: component chart mismatch");
  }
}

BundleForm BundleForm::single(const ScalarForm& alpha, int rank, int slot) {
  BundleForm out(alpha.chart(), rank);
  if (slot < 0 || slot >= rank) throw std::out_of_range("BundleForm::single: slot");
  out.components_[slot] = alpha;
  return out;
}

bool BundleForm::is_zero() const {
  for (const auto& c : components_) {
    if (!c.is_zero()) return false;
  }
  return true;
}

BundleForm BundleForm::part(int k) const {
  BundleForm out = *this;
  for (auto& c : out.components_) c = c.part(k);
  return out;
}

void BundleForm::check_compatible(const BundleForm& o, const char* op) const {
  if (chart_ != o.chart_) throw std::invalid_argument(std::string(op) + ": chart mismatch");
  if (rank() != o.rank()) throw std::invalid_argument(std::string(op) + ": rank mismatch");
}

BundleForm& BundleForm::operator+=(const BundleForm& o) {
  check_compatible(o, "BundleForm +");
  for (std::size_t j = 0; j < components_.size(); ++j) components_[j] += o.components_[j];
  return *this;
}

BundleForm& BundleForm::operator-=(const BundleForm& o) {
  check_compatible(o, "BundleForm -");
  for (std::size_t j = 0; j < components_.size(); ++j) components_[j] -= o.components_[j];
  return *this;
}

BundleForm BundleForm::operator-() const {
  BundleForm out = *this;
  for (auto& c : out.components_) c = -c;
  return out;
}

BundleForm operator*(const GaussRational& c, const BundleForm& u) {
  BundleForm out = u;
  for (auto& e : out.components_) e = c * e;
  return out;
}

bool operator==(const BundleForm& a, const BundleForm& b) {
  return a.chart_ == b.chart_ && a.components_ == b.components_;
}

BundleForm BundleForm::conj() const {
  BundleForm out = *this;
  for (auto& c : out.components_) c = c.conj();
  return out;
}

std::string BundleForm::to_string() const {
  std::ostringstream os;
  bool first = true;
  for (int j = 0; j < rank(); ++j) {
    if (components_[j].is_zero()) continue;
    if (!first) os << " + ";
    first = false;
    os << "{" << components_[j].to_string() << "} s" << (j + 1);
  }
  return first ? "0" : os.str();
}

// ---------------------------------------------------------------- operations

namespace {

// Products grouped by target basis element, summed in one pass each.
class ProductBatches {
 public:
  explicit ProductBatches(unsigned count) : batches_(count) {}

  void add(unsigned target, const PolyScalar& a, const PolyScalar& b, bool negate) {
    batches_[target].push_back({&a, &b, negate});
  }

  void flush_into(ScalarForm& out) const {
    for (unsigned m = 0; m < batches_.size(); ++m) {
      if (batches_[m].empty()) continue;
      out.coeff(m) += sum_of_products(out.dim(), batches_[m]);
    }
  }

 private:
  std::vector<std::vector<ProductTerm>> batches_;
};

}  // namespace

ScalarForm wedge(const ScalarForm& a, const ScalarForm& b) {
  if (a.chart() != b.chart()) throw std::invalid_argument("wedge: chart mismatch");
  ScalarForm out(a.chart());
  const unsigned count = a.basis_count();
  ProductBatches batches(count);
  for (unsigned ma = 0; ma < count; ++ma) {
    if (a.coeff(ma).is_zero()) continue;
    for (unsigned mb = 0; mb < count; ++mb) {
      if (b.coeff(mb).is_zero()) continue;
      const int s = detail::wedge_sign(ma, mb);
      if (s == 0) continue;
      batches.add(ma | mb, a.coeff(ma), b.coeff(mb), s < 0);
    }
  }
  batches.flush_into(out);
  return out;
}

BundleForm wedge(const ScalarForm& a, const BundleForm& u) {
  std::vector<ScalarForm> comps;
  comps.reserve(static_cast<std::size_t>(u.rank()));
  for (const auto& c : u.components()) comps.push_back(wedge(a, c));
  return BundleForm(u.chart(), std::move(comps));
}

ScalarForm interior_coordinate(int axis, const ScalarForm& a) {
  ScalarForm out(a.chart());
  if (axis < 0 || axis >= a.dim()) throw std::out_of_range("interior_coordinate: axis");
  for (unsigned m = 0; m < a.basis_count(); ++m) {
    const int s = detail::interior_sign(axis, m);
    if (s == 0 || a.coeff(m).is_zero()) continue;
    const unsigned target = m & ~(1u << axis);
    out.coeff(target) = s > 0 ? a.coeff(m) : -a.coeff(m);
  }
  return out;
}

ScalarForm interior(const VectorForm& k, const ScalarForm& a) {
  if (k.chart() != a.chart()) throw std::invalid_argument("interior: chart mismatch");
  // sum_axis K^axis ^ i_axis a, each product landing directly on its target.
  ScalarForm out(a.chart());
  const unsigned count = a.basis_count();
  ProductBatches batches(count);
  for (int axis = 0; axis < k.dim(); ++axis) {
    const ScalarForm& ka = k.component(axis);
    if (ka.is_zero()) continue;
    for (unsigned m = 0; m < count; ++m) {
      const int si = detail::interior_sign(axis, m);
      if (si == 0 || a.coeff(m).is_zero()) continue;
      const unsigned rest = m & ~(1u << axis);
      for (unsigned mk = 0; mk < count; ++mk) {
        if (ka.coeff(mk).is_zero()) continue;
        const int sw = detail::wedge_sign(mk, rest);
        if (sw == 0) continue;
        batches.add(mk | rest, ka.coeff(mk), a.coeff(m), si * sw < 0);
      }
    }
  }
  batches.flush_into(out);
  return out;
}

BundleForm interior(const VectorForm& k, const BundleForm& u) {
  std::vector<ScalarForm> comps;
  comps.reserve(static_cast<std::size_t>(u.rank()));
  for (const auto& c : u.components()) comps.push_back(interior(k, c));
  return BundleForm(u.chart(), std::move(comps));
}

VectorForm contract(const VectorForm& k, const VectorForm& l) {
  if (k.chart() != l.chart()) throw std::invalid_argument("contract: chart mismatch");
  const int degree = k.degree() + l.degree() - 1;
  VectorForm out(k.chart(), std::max(degree, -1));
  if (l.degree() <= 0 || k.degree() < 0) return out;
  std::vector<ScalarForm> comps;
  comps.reserve(static_cast<std::size_t>(l.dim()));
  for (const auto& c : l.components()) comps.push_back(interior(k, c));
  return VectorForm(k.chart(), degree, std::move(comps));
}

VectorForm nr_bracket(const VectorForm& k, const VectorForm& l) {
  const int kk = k.degree() - 1;
  const int ll = l.degree() - 1;
  VectorForm left = contract(k, l);
  VectorForm right = contract(l, k);
  if (((kk * ll) % 2) != 0) return left + right;
  return left - right;
}

VectorForm iterated_nr_bracket(const VectorForm& k, const VectorForm& l, int j) {
  if (j < 0) throw std::invalid_argument("iterated_nr_bracket: negative count");
  VectorForm acc = k;
  for (int i = 0; i < j; ++i) acc = nr_bracket(acc, l);
  return acc;
}

ScalarForm exterior_d(const ScalarForm& a) {
  ScalarForm out(a.chart());
  const int d = a.dim();
  for (unsigned m = 0; m < a.basis_count(); ++m) {
    if (a.coeff(m).is_zero()) continue;
    for (int axis = 0; axis < d; ++axis) {
      const int s = detail::prepend_sign(axis, m);
      if (s == 0) continue;
      PolyScalar deriv = a.coeff(m).partial(axis);
      if (deriv.is_zero()) continue;
      if (s < 0) out.coeff(m | (1u << axis)) -= deriv;
      else out.coeff(m | (1u << axis)) += deriv;
    }
  }
  return out;
}

ScalarForm lie_derivative_scalar(const VectorForm& k, const ScalarForm& a) {
  // [i_K, d] = i_K d - (-1)^{k-1} d i_K.
  ScalarForm first = interior(k, exterior_d(a));
  ScalarForm second = exterior_d(interior(k, a));
  const bool odd = ((k.degree() - 1) % 2) != 0;
  return odd ? first + second : first - second;
}

VectorForm fn_bracket(const VectorForm& k, const VectorForm& l) {
  if (k.chart() != l.chart()) throw std::invalid_argument("fn_bracket: chart mismatch");
  const int degree = k.degree() + l.degree();
  if (degree > k.chart()->dim()) return VectorForm(k.chart(), degree);
  const bool odd = ((k.degree() * l.degree()) % 2) != 0;
  // L_M x^a = M^a, so [L_K, L_L] x^a = L_K(L^a) -+ L_L(K^a).
  std::vector<ScalarForm> comps;
  comps.reserve(static_cast<std::size_t>(k.dim()));
  for (int a = 0; a < k.dim(); ++a) {
    ScalarForm first = lie_derivative_scalar(k, l.component(a));
    ScalarForm second = lie_derivative_scalar(l, k.component(a));
    comps.push_back(odd ? first + second : first - second);
  }
  return VectorForm(k.chart(), degree, std::move(comps));
}

ScalarForm bidegree_split(const ScalarForm& a, int p, int q) {
  if (p < 0 || q < 0) throw std::invalid_argument("bidegree_split: negative form bidegree");
  ScalarForm out(a.chart());
  const Chart& chart = *a.chart();
  ProductBatches batches(a.basis_count());
  for (unsigned m = 0; m < a.basis_count(); ++m) {
    if (detail::popcount(m) != p + q || a.coeff(m).is_zero()) continue;
    for (const auto& entry : chart.projection(m, p)) {
      batches.add(entry.target, entry.coeff, a.coeff(m), false);
    }
  }
  batches.flush_into(out);
  return out;
}

BundleForm bidegree_split(const BundleForm& u, int p, int q) {
  std::vector<ScalarForm> comps;
  comps.reserve(static_cast<std::size_t>(u.rank()));
  for (const auto& c : u.components()) comps.push_back(bidegree_split(c, p, q));
  return BundleForm(u.chart(), std::move(comps));
}

VectorForm bidegree_split(const VectorForm& k, int p, int q, ValueSide side) {
  if (p < 0 || q < 0) throw std::invalid_argument("bidegree_split: negative form bidegree");
  if (p + q != k.degree()) {
    throw std::invalid_argument("bidegree_split: (" + std::to_string(p) + "," + std::to_string(q) +
                                ") does not match vector form degree " +
                                std::to_string(k.degree()));
  }
  std::vector<ScalarForm> comps;
  comps.reserve(static_cast<std::size_t>(k.dim()));
  for (const auto& c : k.components()) comps.push_back(bidegree_split(c, p, q));
  VectorForm slots(k.chart(), k.degree(), std::move(comps));
  const Projectors& proj = k.chart()->projectors();
  return slots.project_values(side == ValueSide::kHolomorphic ? proj.p10 : proj.p01);
}

ScalarForm del(const ScalarForm& a) {
  ScalarForm out(a.chart());
  const int d = a.dim();
  for (int k = 0; k < d; ++k) {
    for (int p = 0; p <= k; ++p) {
      ScalarForm piece = bidegree_split(a, p, k - p);
      if (piece.is_zero()) continue;
      out += bidegree_split(exterior_d(piece), p + 1, k - p);
    }
  }
  return out;
}

ScalarForm delbar(const ScalarForm& a) {
  ScalarForm out(a.chart());
  const int d = a.dim();
  for (int k = 0; k < d; ++k) {
    for (int p = 0; p <= k; ++p) {
      ScalarForm piece = bidegree_split(a, p, k - p);
      if (piece.is_zero()) continue;
      out += bidegree_split(exterior_d(piece), p, k - p + 1);
    }
  }
  return out;
}

VectorForm delbar_components(const VectorForm& k) {
  std::vector<ScalarForm> comps;
  comps.reserve(static_cast<std::size_t>(k.dim()));
  for (const auto& c : k.components()) comps.push_back(delbar(c));
  const int degree = k.degree() + 1;
  if (degree > k.chart()->dim()) return VectorForm(k.chart(), degree);
  return VectorForm(k.chart(), degree, std::move(comps));
}

ScalarForm conjugate_form(const ScalarForm& a) { return a.conj(); }
VectorForm conjugate_form(const VectorForm& k) { return k.conj(); }
BundleForm conjugate_form(const BundleForm& u) { return u.conj(); }

// ---------------------------------------------------------------- random inputs

std::int64_t FormRng::uniform(std::int64_t lo, std::int64_t hi) {
  const auto span = static_cast<std::uint64_t>(hi - lo) + 1u;
  return lo + static_cast<std::int64_t>(engine_() % span);
}

GaussRational FormRng::small_gauss() {
  for (;;) {
    const std::int64_t re = uniform(-3, 3);
    const std::int64_t im = uniform(-3, 3);
    if (re != 0 || im != 0) return {Rational(re), Rational(im)};
  }
}

namespace {

// All exponent vectors with total degree <= max_degree, in a fixed order.
void enumerate_exponents(int num_vars, int max_degree, std::vector<int>& current, int var,
                         int remaining, std::vector<std::vector<int>>& out) {
  if (var == num_vars) {
    out.push_back(current);
    return;
  }
  for (int e = 0; e <= remaining; ++e) {
    current[var] = e;
    enumerate_exponents(num_vars, max_degree, current, var + 1, remaining - e, out);
  }
  current[var] = 0;
}

std::vector<std::vector<int>> exponents_up_to(int num_vars, int max_degree) {
  std::vector<std::vector<int>> out;
  std::vector<int> current(static_cast<std::size_t>(num_vars), 0);
  enumerate_exponents(num_vars, max_degree, current, 0, max_degree, out);
  return out;
}

}  // namespace

PolyScalar FormRng::poly(int num_vars, int max_degree) {
  if (max_degree < 0) throw std::invalid_argument("FormRng::poly: negative degree bound");
  const auto exps = exponents_up_to(num_vars, max_degree);
  for (;;) {
    PolyScalar p(num_vars);
    for (const auto& e : exps) {
      if (uniform(0, 1) == 0) continue;
      p += PolyScalar::monomial(num_vars, e, small_gauss());
    }
    if (!p.is_zero()) return p;
  }
}

PolyScalar FormRng::real_poly(int num_vars, int max_degree) {
  if (max_degree < 0) throw std::invalid_argument("FormRng::real_poly: negative degree bound");
  const auto exps = exponents_up_to(num_vars, max_degree);
  for (;;) {
    PolyScalar p(num_vars);
    for (const auto& e : exps) {
      if (uniform(0, 1) == 0) continue;
      const std::int64_t c = uniform(-3, 3);
      if (c != 0) p += PolyScalar::monomial(num_vars, e, GaussRational(c));
    }
    if (!p.is_zero()) return p;
  }
}

std::uint64_t derive_seed(std::uint64_t master, std::uint64_t stream) {
  std::uint64_t z = master + 0x9e3779b97f4a7c15ULL * (stream + 1);
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

ScalarForm random_scalar_form(ChartPtr chart, int degree, int max_degree, FormRng& rng) {
  ScalarForm out(chart);
  const int d = chart->dim();
  if (degree < 0 || degree > d) throw std::invalid_argument("random_scalar_form: degree");
  for (unsigned m = 0; m < out.basis_count(); ++m) {
    if (detail::popcount(m) == degree) out.coeff(m) = rng.poly(d, max_degree);
  }
  return out;
}

BundleForm random_bundle_form(ChartPtr chart, int rank, int degree, int max_degree, FormRng& rng) {
  std::vector<ScalarForm> comps;
  comps.reserve(static_cast<std::size_t>(rank));
  for (int j = 0; j < rank; ++j) comps.push_back(random_scalar_form(chart, degree, max_degree, rng));
  return BundleForm(chart, std::move(comps));
}

VectorForm random_vector_form(ChartPtr chart, int degree, int max_degree, FormRng& rng) {
  std::vector<ScalarForm> comps;
  comps.reserve(static_cast<std::size_t>(chart->dim()));
  for (int a = 0; a < chart->dim(); ++a) {
    comps.push_back(random_scalar_form(chart, degree, max_degree, rng));
  }
  return VectorForm(chart, degree, std::move(comps));
}

VectorForm random_form(ChartPtr chart, Bidegree bidegree, ValueSide side, int max_degree,
                       std::uint64_t seed) {
  if (bidegree.p < 0 || bidegree.q < 0 || bidegree.total() > chart->dim()) {
    throw std::invalid_argument("random_form: invalid bidegree");
  }
  FormRng rng(seed);
  VectorForm raw = random_vector_form(chart, bidegree.total(), max_degree, rng);
  return bidegree_split(raw, bidegree.p, bidegree.q, side);
}

}  // namespace acx
