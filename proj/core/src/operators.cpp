#include "acx/operators.hpp"

#include <sstream>
#include <stdexcept>

#include "acx/torsion.hpp"

namespace acx {

namespace {

bool odd(int k) { return (k % 2) != 0; }

GaussRational inverse_factorial(int m) {
  std::int64_t f = 1;
  for (int i = 2; i <= m; ++i) f *= i;
  return GaussRational(Rational(1, f));
}

}  // namespace

// ---------------------------------------------------------------- connections

Connection zero_connection(ChartPtr chart, int rank) {
  if (rank < 1) throw std::invalid_argument("zero_connection: rank must be positive");
  Connection c;
  c.rank = rank;
  c.omega.assign(static_cast<std::size_t>(rank * rank), ScalarForm(chart));
  c.chart = std::move(chart);
  return c;
}

Connection random_connection(ChartPtr chart, int rank, int max_degree, std::uint64_t seed) {
  Connection c = zero_connection(chart, rank);
  FormRng rng(seed);
  for (auto& entry : c.omega) entry = random_scalar_form(chart, 1, max_degree, rng);
  return c;
}

// ---------------------------------------------------------------- DerivationOp

DerivationOp::DerivationOp(int degree, std::string tag, Action action,
                           std::optional<Bidegree> bidegree)
    : degree_(degree),
      tag_(std::move(tag)),
      action_(std::make_shared<const Action>(std::move(action))),
      bidegree_(bidegree) {
  if (bidegree_ && bidegree_->total() != degree_) {
    throw std::invalid_argument("DerivationOp: bidegree does not match degree");
  }
}

DerivationOp DerivationOp::identity() {
  return DerivationOp(0, "1", [](const BundleForm& u) { return u; }, Bidegree{0, 0});
}

DerivationOp DerivationOp::zero(int degree) {
  return DerivationOp(degree, "0", [](const BundleForm& u) {
    return BundleForm(u.chart(), u.rank());
  });
}

DerivationOp DerivationOp::with_tag(std::string tag) const {
  DerivationOp out = *this;
  out.tag_ = std::move(tag);
  return out;
}

namespace {

std::optional<Bidegree> sum_bidegree(const std::optional<Bidegree>& a,
                                     const std::optional<Bidegree>& b) {
  if (a && b) return Bidegree{a->p + b->p, a->q + b->q};
  return std::nullopt;
}

std::optional<Bidegree> common_bidegree(const std::optional<Bidegree>& a,
                                        const std::optional<Bidegree>& b) {
  if (a && b && *a == *b) return a;
  return std::nullopt;
}

}  // namespace

DerivationOp compose(const DerivationOp& a, const DerivationOp& b) {
  return DerivationOp(a.degree() + b.degree(), a.tag() + " " + b.tag(),
                      [a, b](const BundleForm& u) { return a(b(u)); },
                      sum_bidegree(a.bidegree(), b.bidegree()));
}

DerivationOp operator+(const DerivationOp& a, const DerivationOp& b) {
  if (a.degree() != b.degree()) throw std::invalid_argument("DerivationOp +: degree mismatch");
  return DerivationOp(a.degree(), "(" + a.tag() + " + " + b.tag() + ")",
                      [a, b](const BundleForm& u) { return a(u) + b(u); },
                      common_bidegree(a.bidegree(), b.bidegree()));
}

DerivationOp operator-(const DerivationOp& a, const DerivationOp& b) {
  if (a.degree() != b.degree()) throw std::invalid_argument("DerivationOp -: degree mismatch");
  return DerivationOp(a.degree(), "(" + a.tag() + " - " + b.tag() + ")",
                      [a, b](const BundleForm& u) { return a(u) - b(u); },
                      common_bidegree(a.bidegree(), b.bidegree()));
}

DerivationOp operator*(const GaussRational& c, const DerivationOp& a) {
  return DerivationOp(a.degree(), c.to_string() + " " + a.tag(),
                      [c, a](const BundleForm& u) { return c * a(u); }, a.bidegree());
}

DerivationOp graded_commutator(const DerivationOp& a, const DerivationOp& b) {
  const bool anti = odd(a.degree() * b.degree());
  return DerivationOp(a.degree() + b.degree(), "[" + a.tag() + ", " + b.tag() + "]",
                      [a, b, anti](const BundleForm& u) {
                        BundleForm ab = a(b(u));
                        BundleForm ba = b(a(u));
                        return anti ? ab + ba : ab - ba;
                      },
                      sum_bidegree(a.bidegree(), b.bidegree()));
}

DerivationOp iterated_commutator(const DerivationOp& a, const DerivationOp& b, int k) {
  if (k < 0) throw std::invalid_argument("iterated_commutator: negative count");
  DerivationOp acc = a;
  for (int i = 0; i < k; ++i) acc = graded_commutator(acc, b);
  return acc;
}

DerivationOp interior_op(const VectorForm& k, std::string name) {
  return DerivationOp(k.degree() - 1, "i_{" + name + "}",
                      [k](const BundleForm& u) { return interior(k, u); });
}

DerivationOp nabla(const Connection& conn) {
  return DerivationOp(1, "nabla", [conn](const BundleForm& u) {
    if (u.rank() != conn.rank) throw std::invalid_argument("nabla: rank mismatch");
    if (u.chart() != conn.chart) throw std::invalid_argument("nabla: chart mismatch");
    std::vector<ScalarForm> comps;
    comps.reserve(static_cast<std::size_t>(conn.rank));
    for (int i = 0; i < conn.rank; ++i) {
      ScalarForm c = exterior_d(u.component(i));
      for (int j = 0; j < conn.rank; ++j) {
        const ScalarForm& w = conn.entry(i, j);
        if (w.is_zero() || u.component(j).is_zero()) continue;
        c += wedge(w, u.component(j));
      }
      comps.push_back(std::move(c));
    }
    return BundleForm(u.chart(), std::move(comps));
  });
}

DerivationOp exterior_d_op(const ChartPtr& chart) {
  return DerivationOp(1, "d", [chart](const BundleForm& u) {
    if (u.chart() != chart) throw std::invalid_argument("d: chart mismatch");
    std::vector<ScalarForm> comps;
    comps.reserve(static_cast<std::size_t>(u.rank()));
    for (const auto& c : u.components()) comps.push_back(exterior_d(c));
    return BundleForm(u.chart(), std::move(comps));
  });
}

DerivationOp bidegree_component(const DerivationOp& d, Bidegree shift) {
  if (shift.total() != d.degree()) {
    throw std::invalid_argument("bidegree_component: shift does not match operator degree");
  }
  std::ostringstream tag;
  tag << d.tag() << "^{" << shift.p << "," << shift.q << "}";
  return DerivationOp(d.degree(), tag.str(), [d, shift](const BundleForm& u) {
    const int n = u.chart()->n();
    BundleForm out(u.chart(), u.rank());
    for (int p = 0; p <= n; ++p) {
      for (int q = 0; q <= n; ++q) {
        const int tp = p + shift.p;
        const int tq = q + shift.q;
        if (tp < 0 || tq < 0 || tp > n || tq > n) continue;
        BundleForm piece = bidegree_split(u, p, q);
        if (piece.is_zero()) continue;
        out += bidegree_split(d(piece), tp, tq);
      }
    }
    return out;
  }, shift);
}

ConnectionSplit connection_split(const Connection& conn) {
  const DerivationOp full = nabla(conn);
  VectorForm theta = torsion_form(conn.chart);
  VectorForm theta_bar = conjugate_form(theta);
  return ConnectionSplit{
      bidegree_component(full, {1, 0}).with_tag("nabla^{1,0}"),
      bidegree_component(full, {0, 1}).with_tag("nabla^{0,1}"),
      DerivationOp(1, "i_{theta}", [theta](const BundleForm& u) { return interior(theta, u); },
                   Bidegree{2, -1}),
      DerivationOp(1, "i_{theta_bar}",
                   [theta_bar](const BundleForm& u) { return interior(theta_bar, u); },
                   Bidegree{-1, 2}),
      std::move(theta)};
}

DerivationOp lie_derivative(const VectorForm& k, const Connection& conn,
                            const ConnectionSplit& split, LieFlavor flavor, std::string name) {
  const DerivationOp ik = interior_op(k, name);
  switch (flavor) {
    case LieFlavor::kFull:
      return graded_commutator(ik, nabla(conn)).with_tag("L_{" + name + "}");
    case LieFlavor::kHolomorphic:
      return graded_commutator(ik, split.nabla10).with_tag("L^{1,0}_{" + name + "}");
    case LieFlavor::kAntiholomorphic:
      return graded_commutator(ik, split.nabla01).with_tag("L^{0,1}_{" + name + "}");
  }
  throw std::invalid_argument("lie_derivative: unknown flavor");
}

DerivationOp lie_derivative(const VectorForm& k, const Connection& conn, LieFlavor flavor,
                            std::string name) {
  if (flavor == LieFlavor::kFull) {
    return graded_commutator(interior_op(k, name), nabla(conn)).with_tag("L_{" + name + "}");
  }
  return lie_derivative(k, conn, connection_split(conn), flavor, std::move(name));
}

// ---------------------------------------------------------------- exponentials

namespace {

BundleForm exp_series(const VectorForm& phi, const BundleForm& u, bool negative) {
  const int n = u.chart()->n();
  BundleForm out = u;
  BundleForm power = u;
  for (int m = 1; m <= n; ++m) {
    power = interior(phi, power);
    if (power.is_zero()) return out;
    GaussRational c = inverse_factorial(m);
    if (negative && odd(m)) c = -c;
    out += c * power;
  }
  if (!interior(phi, power).is_zero()) {
    throw std::domain_error("exp_interior: interior power n+1 does not vanish");
  }
  return out;
}

}  // namespace

std::pair<DerivationOp, DerivationOp> exp_interior(const VectorForm& phi, std::string name) {
  if (phi.degree() != 1) throw std::invalid_argument("exp_interior: phi must be a vector 1-form");
  DerivationOp plus(0, "e^{i_{" + name + "}}",
                    [phi](const BundleForm& u) { return exp_series(phi, u, false); });
  DerivationOp minus(0, "e^{-i_{" + name + "}}",
                     [phi](const BundleForm& u) { return exp_series(phi, u, true); });
  return {std::move(plus), std::move(minus)};
}

DerivationOp conjugate_operator(const DerivationOp& d, const VectorForm& phi, std::string name) {
  auto [plus, minus] = exp_interior(phi, name);
  return DerivationOp(d.degree(), "e^{-i_{" + name + "}} " + d.tag() + " e^{i_{" + name + "}}",
                      [d, plus = std::move(plus), minus = std::move(minus)](const BundleForm& u) {
                        return minus(d(plus(u)));
                      });
}

// ---------------------------------------------------------------- probes

std::vector<Probe> generator_family(const ChartPtr& chart, int rank, int max_degree,
                                    std::uint64_t seed) {
  const int d = chart->dim();
  std::vector<Probe> out;
  for (int j = 0; j < rank; ++j) {
    const std::string s = " s" + std::to_string(j + 1);
    out.push_back({"1" + s, BundleForm::single(ScalarForm::function(
                                                   chart, PolyScalar::constant(d, GaussRational(1))),
                                               rank, j)});
    for (int a = 0; a < d; ++a) {
      const std::string xa = "x" + std::to_string(a + 1);
      out.push_back({xa + s, BundleForm::single(ScalarForm::coordinate(chart, a), rank, j)});
      out.push_back({"d" + xa + s, BundleForm::single(ScalarForm::differential(chart, a), rank, j)});
    }
    for (int a = 0; a < d; ++a) {
      for (int b = 0; b < d; ++b) {
        const std::string name =
            "x" + std::to_string(a + 1) + " dx" + std::to_string(b + 1) + s;
        out.push_back({name, BundleForm::single(
                                 wedge(ScalarForm::coordinate(chart, a),
                                       ScalarForm::differential(chart, b)),
                                 rank, j)});
      }
    }
  }
  FormRng rng(seed);
  for (int k = 0; k <= d; ++k) {
    out.push_back({"random degree " + std::to_string(k),
                   random_bundle_form(chart, rank, k, max_degree, rng)});
  }
  return out;
}

std::size_t term_count(const BundleForm& u) {
  std::size_t total = 0;
  for (const auto& c : u.components()) {
    for (unsigned m = 0; m < c.basis_count(); ++m) total += c.coeff(m).size();
  }
  return total;
}

std::size_t term_count(const VectorForm& k) {
  std::size_t total = 0;
  for (const auto& c : k.components()) {
    for (unsigned m = 0; m < c.basis_count(); ++m) total += c.coeff(m).size();
  }
  return total;
}

std::optional<OperatorMismatch> compare_operators(const DerivationOp& lhs, const DerivationOp& rhs,
                                                  const std::vector<Probe>& probes) {
  std::optional<OperatorMismatch> worst;
  std::size_t worst_terms = 0;
  for (const auto& probe : probes) {
    BundleForm diff = lhs(probe.form) - rhs(probe.form);
    if (diff.is_zero()) continue;
    const std::size_t terms = term_count(diff);
    if (!worst || terms > worst_terms) {
      worst = OperatorMismatch{probe.name, std::move(diff)};
      worst_terms = terms;
    }
  }
  return worst;
}

// ---------------------------------------------------------------- decomposition

namespace {

BundleForm unit_section(const ChartPtr& chart, int rank) {
  return BundleForm::single(ScalarForm::function(chart, PolyScalar::constant(chart->dim(),
                                                                             GaussRational(1))),
                            rank, 0);
}

// K^a = D(x^a) for the scalar part of D, read off slot 0.
VectorForm extract_lie_part(const DerivationOp& d, const ChartPtr& chart, int rank) {
  const BundleForm s = unit_section(chart, rank);
  const BundleForm ds = d(s);
  std::vector<ScalarForm> comps;
  for (int a = 0; a < chart->dim(); ++a) {
    const ScalarForm xa = ScalarForm::coordinate(chart, a);
    BundleForm value = d(wedge(xa, s)) - wedge(xa, ds);
    comps.push_back(value.component(0));
  }
  return VectorForm(chart, d.degree(), std::move(comps));
}

// L^a = A(dx^a) for an algebraic A, read off slot 0.
VectorForm extract_algebraic_part(const DerivationOp& a, const ChartPtr& chart, int rank) {
  const BundleForm s = unit_section(chart, rank);
  const BundleForm as = a(s);
  const bool sign = odd(a.degree());
  std::vector<ScalarForm> comps;
  for (int axis = 0; axis < chart->dim(); ++axis) {
    const ScalarForm dxa = ScalarForm::differential(chart, axis);
    BundleForm value = a(wedge(dxa, s));
    BundleForm tail = wedge(dxa, as);
    value = sign ? value + tail : value - tail;
    comps.push_back(value.component(0));
  }
  const int degree = a.degree() + 1;
  if (degree > chart->dim()) return VectorForm(chart, degree);
  return VectorForm(chart, degree, std::move(comps));
}

void require_reassembly(const DerivationOp& d, const DerivationOp& rebuilt,
                        const std::vector<Probe>& probes, const char* who) {
  if (auto mismatch = compare_operators(d, rebuilt, probes)) {
    throw std::domain_error(std::string(who) + ": reassembly differs on probe '" +
                            mismatch->probe + "'; the operator is not a derivation of this form");
  }
}

VectorForm split_or_zero(const VectorForm& k, int p, int q, ValueSide side) {
  if (p < 0 || q < 0) return VectorForm(k.chart(), k.degree());
  return bidegree_split(k, p, q, side);
}

}  // namespace

Decomposition decompose_derivation(const DerivationOp& d, const Connection& conn,
                                   const std::vector<Probe>& probes) {
  const ChartPtr& chart = conn.chart;
  VectorForm k = extract_lie_part(d, chart, conn.rank);
  const DerivationOp lk = lie_derivative(k, conn, LieFlavor::kFull);
  VectorForm l = extract_algebraic_part(d - lk, chart, conn.rank);
  require_reassembly(d, lk + interior_op(l, "L"), probes, "decompose_derivation");
  return {std::move(k), std::move(l)};
}

DerivationOp reassemble(const RefinedDecomposition& parts, const Connection& conn,
                        const ConnectionSplit& split) {
  DerivationOp sum = lie_derivative(parts.k10, conn, split, LieFlavor::kHolomorphic, "K'");
  sum = sum + lie_derivative(parts.k01, conn, split, LieFlavor::kAntiholomorphic, "K''");
  sum = sum + interior_op(parts.l10, "L'");
  sum = sum + interior_op(parts.l01, "L''");
  return sum;
}

RefinedDecomposition refined_decompose(const DerivationOp& d, Bidegree bidegree,
                                       const Connection& conn, const ConnectionSplit& split,
                                       const std::vector<Probe>& probes) {
  if (bidegree.total() != d.degree()) {
    throw std::invalid_argument("refined_decompose: bidegree does not match operator degree");
  }
  const ChartPtr& chart = conn.chart;
  const int p = bidegree.p;
  const int q = bidegree.q;
  const VectorForm k = extract_lie_part(d, chart, conn.rank);
  RefinedDecomposition parts;
  parts.k10 = split_or_zero(k, p, q, ValueSide::kHolomorphic);
  parts.k01 = split_or_zero(k, p, q, ValueSide::kAntiholomorphic);
  const DerivationOp lie_parts =
      lie_derivative(parts.k10, conn, split, LieFlavor::kHolomorphic, "K'") +
      lie_derivative(parts.k01, conn, split, LieFlavor::kAntiholomorphic, "K''");
  const VectorForm r = extract_algebraic_part(d - lie_parts, chart, conn.rank);
  const int rd = r.degree();
  parts.l10 = (p + 1 + q == rd) ? split_or_zero(r, p + 1, q, ValueSide::kHolomorphic)
                                : VectorForm(chart, rd);
  parts.l01 = (p + q + 1 == rd) ? split_or_zero(r, p, q + 1, ValueSide::kAntiholomorphic)
                                : VectorForm(chart, rd);
  require_reassembly(d, reassemble(parts, conn, split), probes, "refined_decompose");
  return parts;
}

// ---------------------------------------------------------------- matrix playground

AlgebraElement::AlgebraElement(int dim)
    : dim_(dim), data_(static_cast<std::size_t>(dim * dim), GaussRational()) {
  if (dim < 1) throw std::invalid_argument("AlgebraElement: dimension must be positive");
}

AlgebraElement AlgebraElement::identity(int dim) {
  AlgebraElement out(dim);
  for (int i = 0; i < dim; ++i) out(i, i) = GaussRational(1);
  return out;
}

AlgebraElement AlgebraElement::elementary(int dim, int row, int col) {
  AlgebraElement out(dim);
  out(row, col) = GaussRational(1);
  return out;
}

bool AlgebraElement::is_zero() const {
  for (const auto& v : data_) {
    if (!v.is_zero()) return false;
  }
  return true;
}

int AlgebraElement::nilpotency_index() const {
  if (is_zero()) return 1;
  AlgebraElement power = *this;
  for (int k = 2; k <= dim_; ++k) {
    power = power * *this;
    if (power.is_zero()) return k;
  }
  throw std::domain_error("AlgebraElement: not nilpotent");
}

bool AlgebraElement::is_nilpotent() const {
  try {
    nilpotency_index();
    return true;
  } catch (const std::domain_error&) {
    return false;
  }
}

static void check_dims(const AlgebraElement& a, const AlgebraElement& b) {
  if (a.dim() != b.dim()) throw std::invalid_argument("AlgebraElement: dimension mismatch");
}

AlgebraElement operator+(const AlgebraElement& a, const AlgebraElement& b) {
  check_dims(a, b);
  AlgebraElement out = a;
  for (std::size_t i = 0; i < out.data_.size(); ++i) out.data_[i] = out.data_[i] + b.data_[i];
  return out;
}

AlgebraElement operator-(const AlgebraElement& a, const AlgebraElement& b) {
  check_dims(a, b);
  AlgebraElement out = a;
  for (std::size_t i = 0; i < out.data_.size(); ++i) out.data_[i] = out.data_[i] - b.data_[i];
  return out;
}

AlgebraElement operator*(const AlgebraElement& a, const AlgebraElement& b) {
  check_dims(a, b);
  const int n = a.dim();
  AlgebraElement out(n);
  for (int i = 0; i < n; ++i) {
    for (int k = 0; k < n; ++k) {
      const GaussRational& aik = a(i, k);
      if (aik.is_zero()) continue;
      for (int j = 0; j < n; ++j) {
        if (b(k, j).is_zero()) continue;
        out(i, j) = out(i, j) + aik * b(k, j);
      }
    }
  }
  return out;
}

AlgebraElement operator*(const GaussRational& c, const AlgebraElement& a) {
  AlgebraElement out = a;
  for (auto& v : out.data_) v = c * v;
  return out;
}

std::string AlgebraElement::to_string() const {
  std::ostringstream os;
  os << "[";
  for (int i = 0; i < dim_; ++i) {
    os << (i ? "; " : "");
    for (int j = 0; j < dim_; ++j) os << (j ? ", " : "") << (*this)(i, j).to_string();
  }
  os << "]";
  return os.str();
}

AlgebraElement commutator(const AlgebraElement& x, const AlgebraElement& y) {
  return x * y - y * x;
}

AlgebraElement algebra_iterated_bracket(const AlgebraElement& x, const AlgebraElement& y, int k) {
  if (k < 0) throw std::invalid_argument("algebra_iterated_bracket: negative count");
  AlgebraElement acc = x;
  for (int i = 0; i < k; ++i) acc = commutator(acc, y);
  return acc;
}

int commutable_degree(const AlgebraElement& x, const AlgebraElement& y) {
  check_dims(x, y);
  const int bound = 2 * x.dim() - 1;
  AlgebraElement acc = x;
  for (int k = 1; k <= bound; ++k) {
    acc = commutator(acc, y);
    if (acc.is_zero()) return k;
  }
  throw std::domain_error("commutable_degree: no vanishing bracket up to " +
                          std::to_string(bound));
}

AlgebraElement exp_nilpotent(const AlgebraElement& x) {
  const int n = x.nilpotency_index();
  AlgebraElement out = AlgebraElement::identity(x.dim());
  AlgebraElement power = AlgebraElement::identity(x.dim());
  for (int m = 1; m < n; ++m) {
    power = power * x;
    out = out + inverse_factorial(m) * power;
  }
  return out;
}

AlgebraElement conjugation_closed_form(const AlgebraElement& x, const AlgebraElement& y) {
  if (!y.is_nilpotent()) throw std::domain_error("conjugation_closed_form: y is not nilpotent");
  const int k = commutable_degree(x, y);
  AlgebraElement out(x.dim());
  AlgebraElement term = x;
  for (int i = 0; i < k; ++i) {
    if (i > 0) term = commutator(term, y);
    out = out + inverse_factorial(i) * term;
  }
  return out;
}

ConjugatedExponential conjugated_exponential(const AlgebraElement& x, const AlgebraElement& y) {
  ConjugatedExponential out;
  out.nilpotency_index = x.nilpotency_index();
  out.transported = conjugation_closed_form(x, y);
  out.exponential = exp_nilpotent(out.transported);
  AlgebraElement power = AlgebraElement::identity(x.dim());
  for (int i = 0; i < out.nilpotency_index; ++i) power = power * out.transported;
  out.transported_nilpotent = power.is_zero();
  return out;
}

}  // namespace acx
