#include "acx/verifier.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <functional>
#include <stdexcept>
#include <thread>

#include "acx/operators.hpp"
#include "acx/torsion.hpp"

namespace acx {

namespace {

enum Stream : std::uint64_t { kPhi = 1, kPsi = 2, kConnection = 3, kProbes = 4, kAux = 5 };

const GaussRational kHalf(Rational(1, 2));

GaussRational inv_factorial(int m) {
  std::int64_t f = 1;
  for (int i = 2; i <= m; ++i) f *= i;
  return GaussRational(Rational(1, f));
}

struct Context {
  ChartPtr chart;
  int rank = 1;
  int degree = 2;
  std::uint64_t master = 0;
  Connection conn;
  ConnectionSplit split;
  std::vector<Probe> probes;
  VectorForm phi;
  VectorForm psi;
  VectorForm psi_bar;

  std::uint64_t seed(Stream s) const { return derive_seed(master, s); }
};

Context make_context(const IdentityCheck& spec) {
  Context ctx;
  ctx.chart = chart_from_name(spec.chart);
  ctx.rank = spec.rank;
  ctx.degree = spec.degree;
  ctx.master = spec.seed;
  ctx.conn = random_connection(ctx.chart, spec.rank, spec.degree, ctx.seed(kConnection));
  ctx.split = connection_split(ctx.conn);
  ctx.probes = generator_family(ctx.chart, spec.rank, spec.degree, ctx.seed(kProbes));
  ctx.phi = random_form(ctx.chart, {0, 1}, ValueSide::kHolomorphic, spec.degree, ctx.seed(kPhi));
  ctx.psi = random_form(ctx.chart, {0, 1}, ValueSide::kHolomorphic, spec.degree, ctx.seed(kPsi));
  ctx.psi_bar = conjugate_form(ctx.psi);
  return ctx;
}

// Collects named residuals for one check.
class Collector {
 public:
  explicit Collector(const std::vector<Probe>* probes) : probes_(probes) {}

  void op(std::string name, const DerivationOp& lhs, const DerivationOp& rhs) {
    ResidualEntry e;
    e.name = std::move(name);
    if (auto m = compare_operators(lhs, rhs, *probes_)) {
      e.zero = false;
      e.probe = m->probe;
      e.terms = term_count(m->residual);
      e.residual = m->residual.to_string();
    }
    entries_.push_back(std::move(e));
  }

  /// Several left-hand sides against one right-hand side, evaluated once per probe.
  void ops(const std::vector<std::pair<std::string, DerivationOp>>& lhs, const DerivationOp& rhs) {
    std::vector<ResidualEntry> found(lhs.size());
    for (std::size_t i = 0; i < lhs.size(); ++i) found[i].name = lhs[i].first;
    for (const auto& probe : *probes_) {
      const BundleForm r = rhs(probe.form);
      for (std::size_t i = 0; i < lhs.size(); ++i) {
        const BundleForm diff = lhs[i].second(probe.form) - r;
        if (diff.is_zero()) continue;
        const std::size_t terms = term_count(diff);
        if (found[i].zero || terms > found[i].terms) {
          found[i].zero = false;
          found[i].probe = probe.name;
          found[i].terms = terms;
          found[i].residual = diff.to_string();
        }
      }
    }
    for (auto& e : found) entries_.push_back(std::move(e));
  }

  void vec(std::string name, const VectorForm& lhs, const VectorForm& rhs) {
    ResidualEntry e;
    e.name = std::move(name);
    if (lhs.degree() != rhs.degree()) {
      if (!lhs.is_zero() || !rhs.is_zero()) {
        e.zero = false;
        e.residual = "degree mismatch: " + std::to_string(lhs.degree()) + " vs " +
                     std::to_string(rhs.degree());
      }
    } else {
      VectorForm diff = lhs - rhs;
      if (!diff.is_zero()) {
        e.zero = false;
        e.terms = term_count(diff);
        e.residual = diff.to_string();
      }
    }
    entries_.push_back(std::move(e));
  }

  void flag(std::string name, bool ok, std::string detail = {}) {
    ResidualEntry e;
    e.name = std::move(name);
    e.zero = ok;
    if (!ok) e.residual = std::move(detail);
    entries_.push_back(std::move(e));
  }

  void add(ResidualEntry e) { entries_.push_back(std::move(e)); }

  /// Marks the whole check as not applicable to the given inputs.
  void skip(std::string reason) { skip_reason_ = std::move(reason); }
  const std::string& skip_reason() const { return skip_reason_; }

  std::vector<ResidualEntry> take() { return std::move(entries_); }

 private:
  const std::vector<Probe>* probes_;
  std::vector<ResidualEntry> entries_;
  std::string skip_reason_;
};

DerivationOp sum_interiors(const ChartPtr& chart, int degree,
                           const std::vector<std::pair<GaussRational, VectorForm>>& terms,
                           const std::string& name) {
  VectorForm total(chart, degree + 1);
  for (const auto& [c, k] : terms) total += c * k;
  return interior_op(total, name);
}

// nabla - L_X - 1/2 i_{[X,X]} - 1/3! i_{[[X,X],X]^}.
DerivationOp conjugated_nabla_rhs(const Context& ctx, const VectorForm& x, const std::string& name,
                                  const GaussRational& half = kHalf) {
  const VectorForm xx = fn_bracket(x, x);
  const VectorForm xxx = nr_bracket(xx, x);
  return nabla(ctx.conn) - lie_derivative(x, ctx.conn, ctx.split, LieFlavor::kFull, name) -
         half * interior_op(xx, "[" + name + "," + name + "]") -
         inv_factorial(3) * interior_op(xxx, "[[" + name + "," + name + "]," + name + "]^");
}

// sum_{j=0}^{3} 1/j! [K, psibar]^(j)
VectorForm conjugated_interior_form(const VectorForm& k, const VectorForm& psi_bar, int top) {
  VectorForm total(k.chart(), k.degree());
  VectorForm term = k;
  for (int j = 0; j <= top; ++j) {
    if (j > 0) term = nr_bracket(term, psi_bar);
    total += inv_factorial(j) * term;
  }
  return total;
}

// Right-hand side of the conjugated Lie derivative by psibar.  The sums run to
// j = top1 and j = top2.
DerivationOp conjugated_lie_rhs(const Context& ctx, int top1, int top2) {
  const VectorForm& phi = ctx.phi;
  const VectorForm& pb = ctx.psi_bar;
  const VectorForm chi = contract(pb, phi);
  VectorForm first(ctx.chart, 2);
  VectorForm second(ctx.chart, 2);
  VectorForm a = fn_bracket(phi, pb);
  VectorForm b = fn_bracket(chi, pb);
  for (int j = 0; j <= std::max(top1, top2); ++j) {
    if (j > 0) {
      a = nr_bracket(a, pb);
      b = nr_bracket(b, pb);
    }
    if (j <= top1) first += inv_factorial(j + 1) * a;
    if (j <= top2) second += inv_factorial(j + 2) * b;
  }
  return lie_derivative(phi - chi, ctx.conn, ctx.split, LieFlavor::kFull, "phi - i_psibar phi") +
         interior_op(first, "S1") - interior_op(second, "S2");
}

// ---------------------------------------------------------------- exponential identities

void check_t381(const Context& ctx, Collector& out) {
  out.op("conjugated nabla", conjugate_operator(nabla(ctx.conn), ctx.phi),
         conjugated_nabla_rhs(ctx, ctx.phi, "phi"));
}

void check_t382(const Context& ctx, Collector& out) {
  const VectorForm ff = fn_bracket(ctx.phi, ctx.phi);
  const VectorForm ff02 = bidegree_split(ff, 0, 2, ValueSide::kHolomorphic);
  out.op("conjugated nabla^{1,0}", conjugate_operator(ctx.split.nabla10, ctx.phi),
         ctx.split.nabla10 -
             lie_derivative(ctx.phi, ctx.conn, ctx.split, LieFlavor::kHolomorphic, "phi") -
             kHalf * interior_op(ff02, "[phi,phi]^{0,2;1,0}"));
  out.op("conjugated nabla^{0,1}", conjugate_operator(ctx.split.nabla01, ctx.phi),
         ctx.split.nabla01 -
             lie_derivative(ctx.phi, ctx.conn, ctx.split, LieFlavor::kAntiholomorphic, "phi"));
  if (ctx.chart->has_constant_structure()) {
    out.vec("[phi,phi] is pure (0,2) with (1,0) values", ff02, ff);
  }
}

void check_t383(const Context& ctx, Collector& out) {
  const VectorForm& theta = ctx.split.theta;
  std::vector<std::pair<GaussRational, VectorForm>> terms;
  VectorForm term = theta;
  for (int j = 0; j <= 3; ++j) {
    if (j > 0) term = nr_bracket(term, ctx.phi);
    terms.emplace_back(inv_factorial(j), term);
  }
  out.op("conjugated i_theta", conjugate_operator(ctx.split.i_theta, ctx.phi),
         sum_interiors(ctx.chart, 1, terms, "sum [theta,phi]^(j)/j!"));
  out.op("conjugated i_theta_bar", conjugate_operator(ctx.split.i_theta_bar, ctx.phi),
         ctx.split.i_theta_bar);
}

DerivationOp conjugated_interior_ff_rhs(const Context& ctx) {
  const VectorForm ff = fn_bracket(ctx.phi, ctx.phi);
  return interior_op(conjugated_interior_form(ff, ctx.psi_bar, 3), "sum [[phi,phi],psibar]^(j)/j!");
}

void check_t384(const Context& ctx, Collector& out) {
  const VectorForm& phi = ctx.phi;
  const VectorForm one = nr_bracket(phi, ctx.psi_bar);
  const VectorForm two = nr_bracket(one, ctx.psi_bar);
  out.op("conjugated i_phi", conjugate_operator(interior_op(phi, "phi"), ctx.psi_bar, "psibar"),
         interior_op(phi + one + kHalf * two, "phi + [phi,psibar]^ + 1/2 [phi,psibar]^(2)"));
  const VectorForm ff = fn_bracket(phi, phi);
  out.op("conjugated i_[phi,phi]",
         conjugate_operator(interior_op(ff, "[phi,phi]"), ctx.psi_bar, "psibar"),
         conjugated_interior_ff_rhs(ctx));
}

// Bounds of the two sums in the conjugated Lie derivative.  The displayed
// identity stops both at j = 2.  The conjugation series itself only stops once
// ad(i_psibar)^j vanishes, which is guaranteed for j > 2n.
enum class Series { kAsDisplayed, kFull };

std::pair<int, int> lie_sum_bounds(const Context& ctx, Series series) {
  if (series == Series::kAsDisplayed) return {2, 2};
  const int n = ctx.chart->n();
  return {2 * n - 1, 2 * n - 2};
}

void check_t385(const Context& ctx, Collector& out, Series series) {
  const auto [top1, top2] = lie_sum_bounds(ctx, series);
  out.op("conjugated L_phi",
         conjugate_operator(lie_derivative(ctx.phi, ctx.conn, ctx.split, LieFlavor::kFull, "phi"),
                            ctx.psi_bar, "psibar"),
         conjugated_lie_rhs(ctx, top1, top2));
}

DerivationOp double_conjugation_rhs(const Context& ctx, Series series) {
  const auto [top1, top2] = lie_sum_bounds(ctx, series);
  const VectorForm ff = fn_bracket(ctx.phi, ctx.phi);
  const VectorForm fff = nr_bracket(ff, ctx.phi);
  return conjugated_nabla_rhs(ctx, ctx.psi_bar, "psibar") - conjugated_lie_rhs(ctx, top1, top2) -
         kHalf * conjugated_interior_ff_rhs(ctx) -
         inv_factorial(3) * interior_op(conjugated_interior_form(fff, ctx.psi_bar, 3),
                                        "sum [[[phi,phi],phi]^,psibar]^(j)/j!");
}

void check_t386(const Context& ctx, Collector& out, Series series) {
  const DerivationOp direct =
      conjugate_operator(conjugate_operator(nabla(ctx.conn), ctx.phi), ctx.psi_bar, "psibar");
  const DerivationOp composed =
      conjugate_operator(conjugated_nabla_rhs(ctx, ctx.phi, "phi"), ctx.psi_bar, "psibar");
  out.ops({{"double conjugation, direct", direct},
           {"double conjugation, via the single conjugation", composed}},
          double_conjugation_rhs(ctx, series));
}

void check_negative_control(const Context& ctx, Collector& out) {
  if (fn_bracket(ctx.phi, ctx.phi).is_zero()) {
    out.skip("[phi,phi] vanishes for these inputs, so the perturbation changes nothing");
    return;
  }
  const auto mismatch =
      compare_operators(conjugate_operator(nabla(ctx.conn), ctx.phi),
                        conjugated_nabla_rhs(ctx, ctx.phi, "phi", GaussRational(1)), ctx.probes);
  ResidualEntry e;
  e.name = "perturbed right-hand side is detected";
  e.zero = mismatch.has_value();
  if (mismatch) {
    e.probe = mismatch->probe;
    e.terms = term_count(mismatch->residual);
  } else {
    e.residual = "perturbed identity agreed on every probe";
  }
  out.add(std::move(e));
}

// ------------------------------------------------------------- supporting identities

void check_l371(const Context& ctx, Collector& out) {
  const VectorForm f = fn_bracket(ctx.phi, ctx.psi);
  out.op("[L^{1,0}_phi, i_psi]",
         graded_commutator(
             lie_derivative(ctx.phi, ctx.conn, ctx.split, LieFlavor::kHolomorphic, "phi"),
             interior_op(ctx.psi, "psi")),
         interior_op(bidegree_split(f, 0, 2, ValueSide::kHolomorphic), "[phi,psi]^{0,2;1,0}"));
}

void check_l372(const Context& ctx, Collector& out) {
  out.op("[L^{0,1}_phi, i_psi]",
         graded_commutator(
             lie_derivative(ctx.phi, ctx.conn, ctx.split, LieFlavor::kAntiholomorphic, "phi"),
             interior_op(ctx.psi, "psi")),
         DerivationOp::zero(1));
}

void check_l373(const Context& ctx, Collector& out) {
  const VectorForm f = fn_bracket(ctx.phi, ctx.psi);
  const VectorForm phi_theta = nr_bracket(ctx.phi, ctx.split.theta);
  out.vec("-[[phi,theta]^,psi]^", -nr_bracket(phi_theta, ctx.psi),
          bidegree_split(f, 1, 1, ValueSide::kHolomorphic) +
              bidegree_split(f, 0, 2, ValueSide::kAntiholomorphic));
  const DerivationOp lie = lie_derivative(ctx.phi, ctx.conn, ctx.split, LieFlavor::kFull, "phi");
  out.op("L_phi splitting", lie,
         lie_derivative(ctx.phi, ctx.conn, ctx.split, LieFlavor::kHolomorphic, "phi") +
             lie_derivative(ctx.phi, ctx.conn, ctx.split, LieFlavor::kAntiholomorphic, "phi") -
             interior_op(phi_theta, "[phi,theta]^"));
  out.op("[L_phi, i_psi]", graded_commutator(lie, interior_op(ctx.psi, "psi")),
         interior_op(f, "[phi,psi]"));
}

void check_ex31(const Context& ctx, Collector& out) {
  const ChartPtr& chart = ctx.chart;
  const Connection flat = zero_connection(chart, ctx.rank);
  const ConnectionSplit dsplit = connection_split(flat);
  const DerivationOp d = exterior_d_op(chart);
  out.op("d splitting", d, dsplit.nabla10 + dsplit.nabla01 - dsplit.i_theta - dsplit.i_theta_bar);
  const ConnectionSplit& s = ctx.split;
  out.op("nabla splitting", nabla(ctx.conn), s.nabla10 + s.nabla01 - s.i_theta - s.i_theta_bar);

  const std::pair<const DerivationOp*, Bidegree> pieces[] = {
      {&s.nabla10, {1, 0}}, {&s.nabla01, {0, 1}}, {&s.i_theta, {2, -1}}, {&s.i_theta_bar, {-1, 2}}};
  for (const auto& [op, shift] : pieces) {
    out.op(op->tag() + " has bidegree (" + std::to_string(shift.p) + "," +
               std::to_string(shift.q) + ")",
           *op, bidegree_component(*op, shift));
  }

  // theta^a = -Pi^{2,0}((d - del - delbar) dx^a), read off the splitting residual.
  const DerivationOp remainder = d - dsplit.nabla10 - dsplit.nabla01;
  std::vector<ScalarForm> comps;
  for (int a = 0; a < chart->dim(); ++a) {
    const BundleForm u = BundleForm::single(ScalarForm::differential(chart, a), ctx.rank, 0);
    comps.push_back(-bidegree_split(remainder(u).component(0), 2, 0));
  }
  const VectorForm extracted(chart, 2, std::move(comps));
  out.vec("theta from the splitting equals the frame torsion", extracted, s.theta);
  out.vec("theta lies in A^{2,0}(T^{0,1})", s.theta,
          bidegree_split(s.theta, 2, 0, ValueSide::kAntiholomorphic));
  const bool nij_zero = nijenhuis_tensor(chart).is_zero();
  out.flag("theta vanishes iff [J,J] vanishes", nij_zero == s.theta.is_zero(),
           "theta zero: " + std::to_string(s.theta.is_zero()) +
               ", [J,J] zero: " + std::to_string(nij_zero));
  if (chart->has_constant_structure()) {
    out.flag("theta vanishes on a constant structure", s.theta.is_zero(), s.theta.to_string());
    out.op("d = del + delbar", d, dsplit.nabla10 + dsplit.nabla01);
  }
}

void check_eq24(const Context& ctx, Collector& out) {
  FormRng rng(ctx.seed(kAux));
  for (int k = 1; k <= 2; ++k) {
    for (int lf = 1; lf <= 2; ++lf) {
      const VectorForm kk = random_vector_form(ctx.chart, k, ctx.degree, rng);
      const VectorForm ll = random_vector_form(ctx.chart, lf, ctx.degree, rng);
      const int l = lf - 1;
      const DerivationOp lhs =
          graded_commutator(lie_derivative(kk, ctx.conn, ctx.split, LieFlavor::kFull, "K"),
                            interior_op(ll, "L"));
      const DerivationOp tail =
          lie_derivative(contract(ll, kk), ctx.conn, ctx.split, LieFlavor::kFull, "i_L K");
      const DerivationOp ik = interior_op(fn_bracket(kk, ll), "[K,L]");
      const DerivationOp rhs = ((k * l) % 2 == 0) ? ik - tail : ik + tail;
      out.op("K in A^" + std::to_string(k) + ", L in A^" + std::to_string(lf), lhs, rhs);
    }
  }
}

void check_eq22(const Context& ctx, Collector& out) {
  FormRng rng(ctx.seed(kAux));
  const Connection flat = zero_connection(ctx.chart, ctx.rank);
  const ConnectionSplit fsplit = connection_split(flat);
  for (int k = 1; k <= 2; ++k) {
    for (int l = 1; l <= 2; ++l) {
      const VectorForm kk = random_vector_form(ctx.chart, k, ctx.degree, rng);
      const VectorForm ll = random_vector_form(ctx.chart, l, ctx.degree, rng);
      const std::string tag = "K in A^" + std::to_string(k) + ", L in A^" + std::to_string(l);
      out.op("[i_K, i_L] = i_[K,L]^, " + tag,
             graded_commutator(interior_op(kk, "K"), interior_op(ll, "L")),
             interior_op(nr_bracket(kk, ll), "[K,L]^"));
      if (k + l <= 3) {
        out.op("[L_K, L_L] = L_[K,L], " + tag,
               graded_commutator(lie_derivative(kk, flat, fsplit, LieFlavor::kFull, "K"),
                                 lie_derivative(ll, flat, fsplit, LieFlavor::kFull, "L")),
               lie_derivative(fn_bracket(kk, ll), flat, fsplit, LieFlavor::kFull, "[K,L]"));
      }
    }
  }
}

void check_eq23(const Context& ctx, Collector& out) {
  const VectorForm f = fn_bracket(ctx.phi, ctx.psi);
  const VectorForm listed = bidegree_split(f, 0, 2, ValueSide::kHolomorphic) +
                            bidegree_split(f, 1, 1, ValueSide::kHolomorphic) +
                            bidegree_split(f, 0, 2, ValueSide::kAntiholomorphic);
  out.vec("[phi,psi] lies in the three listed slots", f, listed);
  VectorForm all(ctx.chart, 2);
  for (int p = 0; p <= 2; ++p) {
    for (ValueSide side : {ValueSide::kHolomorphic, ValueSide::kAntiholomorphic}) {
      all += bidegree_split(f, p, 2 - p, side);
    }
  }
  out.vec("bidegree components reassemble [phi,psi]", f, all);
  if (ctx.chart->has_constant_structure()) {
    out.vec("[phi,psi] is pure (0,2) with (1,0) values", f,
            bidegree_split(f, 0, 2, ValueSide::kHolomorphic));
  }
}

void check_nil(const Context& ctx, Collector& out) {
  const int n = ctx.chart->n();
  const std::pair<const VectorForm*, std::string> forms[] = {{&ctx.phi, "phi"},
                                                             {&ctx.psi_bar, "psibar"}};
  for (const auto& [form, name] : forms) {
    DerivationOp power = DerivationOp::identity();
    for (int i = 0; i <= n; ++i) power = compose(interior_op(*form, name), power);
    out.op("(i_" + name + ")^{n+1} = 0", power, DerivationOp::zero(0));
    auto [plus, minus] = exp_interior(*form, name);
    out.op("e^{i_" + name + "} e^{-i_" + name + "} = 1", compose(plus, minus),
           DerivationOp::identity());
    out.op("e^{-i_" + name + "} e^{i_" + name + "} = 1", compose(minus, plus),
           DerivationOp::identity());
  }
}

void check_r310(const Context&, Collector& out, const IdentityCheck& spec) {
  // Runs on a rank-one trivial bundle with the flat connection.
  IdentityCheck flat_spec = spec;
  flat_spec.rank = 1;
  Context ctx = make_context(flat_spec);
  ctx.conn = zero_connection(ctx.chart, 1);
  ctx.split = connection_split(ctx.conn);
  Collector local(&ctx.probes);
  local.op("L^{0,1}_phi = -i_{delbar phi}",
           lie_derivative(ctx.phi, ctx.conn, ctx.split, LieFlavor::kAntiholomorphic, "phi"),
           GaussRational(-1) * interior_op(delbar_components(ctx.phi), "delbar phi"));
  for (auto& e : local.take()) out.add(std::move(e));
}

void check_p33(const Context& ctx, Collector& out) {
  const Connection flat = zero_connection(ctx.chart, ctx.rank);
  const ConnectionSplit fsplit = connection_split(flat);
  auto attempt = [&](const std::string& name, const DerivationOp& d, Bidegree b,
                     const Connection& conn, const ConnectionSplit& split) {
    try {
      refined_decompose(d, b, conn, split, ctx.probes);
      out.flag(name, true);
    } catch (const std::domain_error& e) {
      out.flag(name, false, e.what());
    }
  };
  attempt("del", fsplit.nabla10, {1, 0}, flat, fsplit);
  attempt("delbar", fsplit.nabla01, {0, 1}, flat, fsplit);
  attempt("nabla^{1,0}", ctx.split.nabla10, {1, 0}, ctx.conn, ctx.split);
  attempt("nabla^{0,1}", ctx.split.nabla01, {0, 1}, ctx.conn, ctx.split);
  attempt("L^{1,0}_phi",
          lie_derivative(ctx.phi, ctx.conn, ctx.split, LieFlavor::kHolomorphic, "phi"), {0, 1},
          ctx.conn, ctx.split);
  // L_phi has three bidegree components; each is decomposed on its own.
  const DerivationOp lie = lie_derivative(ctx.phi, ctx.conn, ctx.split, LieFlavor::kFull, "phi");
  for (Bidegree b : {Bidegree{0, 1}, Bidegree{-1, 2}, Bidegree{1, 0}}) {
    attempt("L_phi component (" + std::to_string(b.p) + "," + std::to_string(b.q) + ")",
            bidegree_component(lie, b), b, ctx.conn, ctx.split);
  }
  out.op("L_phi is the sum of its three components", lie,
         bidegree_component(lie, {0, 1}) + bidegree_component(lie, {-1, 2}) +
             bidegree_component(lie, {1, 0}));
  FormRng rng(ctx.seed(kAux));
  const VectorForm l = random_vector_form(ctx.chart, 2, ctx.degree, rng);
  try {
    const Decomposition dec =
        decompose_derivation(lie + interior_op(l, "L"), ctx.conn, ctx.probes);
    out.vec("decompose(L_phi + i_L) recovers phi", dec.k, ctx.phi);
    out.vec("decompose(L_phi + i_L) recovers L", dec.l, l);
  } catch (const std::domain_error& e) {
    out.flag("decompose(L_phi + i_L)", false, e.what());
  }
}

// ---------------------------------------------------------------- matrix checks

GaussRational random_rational(FormRng& rng) {
  return GaussRational(Rational(rng.uniform(-5, 5), rng.uniform(1, 4)));
}

AlgebraElement random_matrix(FormRng& rng, int dim) {
  AlgebraElement x(dim);
  for (int i = 0; i < dim; ++i) {
    for (int j = 0; j < dim; ++j) x(i, j) = random_rational(rng);
  }
  return x;
}

AlgebraElement random_strict_upper(FormRng& rng, int dim) {
  AlgebraElement y(dim);
  for (int i = 0; i < dim; ++i) {
    for (int j = i + 1; j < dim; ++j) y(i, j) = random_rational(rng);
  }
  return y;
}

constexpr int kMatrixPairs = 100;

void check_l36_matrix(const Context& ctx, Collector& out) {
  FormRng rng(ctx.seed(kAux));
  int agree = 0;
  int bounded = 0;
  std::string first_failure;
  for (int t = 0; t < kMatrixPairs; ++t) {
    const AlgebraElement x = random_matrix(rng, 4);
    const AlgebraElement y = random_strict_upper(rng, 4);
    const int k = commutable_degree(x, y);
    if (k <= 7) ++bounded;
    const AlgebraElement closed = conjugation_closed_form(x, y);
    const AlgebraElement series =
        exp_nilpotent(GaussRational(-1) * y) * x * exp_nilpotent(y);
    if (closed == series) {
      ++agree;
    } else if (first_failure.empty()) {
      first_failure = "pair " + std::to_string(t) + ": x = " + x.to_string() +
                      ", y = " + y.to_string();
    }
  }
  out.flag("closed form equals series conjugation (" + std::to_string(agree) + "/" +
               std::to_string(kMatrixPairs) + ")",
           agree == kMatrixPairs, first_failure);
  out.flag("commutable degree <= 7 (" + std::to_string(bounded) + "/" +
               std::to_string(kMatrixPairs) + ")",
           bounded == kMatrixPairs, "bound exceeded");
}

void check_p312(const Context& ctx, Collector& out) {
  FormRng rng(ctx.seed(kAux));
  int agree = 0;
  int nilpotent = 0;
  std::string first_failure;
  for (int t = 0; t < kMatrixPairs; ++t) {
    const AlgebraElement x = random_strict_upper(rng, 3);
    const AlgebraElement y = random_strict_upper(rng, 3);
    const ConjugatedExponential ce = conjugated_exponential(x, y);
    const AlgebraElement lhs = exp_nilpotent(GaussRational(-1) * y) * exp_nilpotent(x) *
                               exp_nilpotent(y);
    if (ce.transported_nilpotent) ++nilpotent;
    if (lhs == ce.exponential) {
      ++agree;
    } else if (first_failure.empty()) {
      first_failure = "pair " + std::to_string(t) + ": x = " + x.to_string() +
                      ", y = " + y.to_string();
    }
  }
  out.flag("e^{-y} e^x e^y equals the transported exponential (" + std::to_string(agree) + "/" +
               std::to_string(kMatrixPairs) + ")",
           agree == kMatrixPairs, first_failure);
  out.flag("transported element is killed by the power N (" + std::to_string(nilpotent) + "/" +
               std::to_string(kMatrixPairs) + ")",
           nilpotent == kMatrixPairs, "transported element not nilpotent of order N");
}

// ---------------------------------------------------------------- registry

struct Entry {
  RegistryEntry info;
  std::function<void(const Context&, Collector&, const IdentityCheck&)> run;
  bool needs_forms = true;
};

template <typename Fn>
std::function<void(const Context&, Collector&, const IdentityCheck&)> plain(Fn fn) {
  return [fn](const Context& ctx, Collector& out, const IdentityCheck&) { fn(ctx, out); };
}

const std::vector<Entry>& entries() {
  static const std::vector<Entry> kEntries = {
      {{"T3.8.1", "e^{-i_phi} nabla e^{i_phi} = nabla - L_phi - 1/2 i_[phi,phi] - 1/3! i_[[phi,phi],phi]^"},
       plain(check_t381)},
      {{"T3.8.2", "conjugation of nabla^{1,0} and nabla^{0,1} by e^{i_phi}"}, plain(check_t382)},
      {{"T3.8.3", "conjugation of i_theta and i_theta_bar by e^{i_phi}"}, plain(check_t383)},
      {{"T3.8.4", "conjugation of i_phi and i_[phi,phi] by e^{i_psibar}"}, plain(check_t384)},
      {{"T3.8.5", "conjugation of L_phi by e^{i_psibar}, sums stopped at j = 2 as displayed"},
       plain([](const Context& c, Collector& o) { check_t385(c, o, Series::kAsDisplayed); })},
      {{"T3.8.6", "double conjugation e^{-i_psibar} e^{-i_phi} nabla e^{i_phi} e^{i_psibar}, "
                  "sums stopped at j = 2 as displayed"},
       plain([](const Context& c, Collector& o) { check_t386(c, o, Series::kAsDisplayed); })},
      {{"T3.8.5-full", "conjugation of L_phi by e^{i_psibar}, sums carried to the nilpotency order"},
       plain([](const Context& c, Collector& o) { check_t385(c, o, Series::kFull); })},
      {{"T3.8.6-full", "double conjugation with the sums carried to the nilpotency order"},
       plain([](const Context& c, Collector& o) { check_t386(c, o, Series::kFull); })},
      {{"L3.7.1", "[L^{1,0}_phi, i_psi] = i_{[phi,psi] in A^{0,2}(T^{1,0})}"}, plain(check_l371)},
      {{"L3.7.2", "[L^{0,1}_phi, i_psi] = 0"}, plain(check_l372)},
      {{"L3.7.3", "-[[phi,theta]^,psi]^ = [phi,psi]^{1,1;1,0} + [phi,psi]^{0,2;0,1}"},
       plain(check_l373)},
      {{"EX3.1", "d = del + delbar - i_theta - i_theta_bar and the same splitting of nabla"},
       plain(check_ex31)},
      {{"EQ2.2", "[i_K, i_L] = i_[K,L]^ and [L_K, L_L] = L_[K,L]"}, plain(check_eq22)},
      {{"EQ2.3", "bidegree slots of [phi,psi]"}, plain(check_eq23)},
      {{"EQ2.4", "[L_K, i_L] = i_[K,L] - (-1)^{kl} L_{i_L K}"}, plain(check_eq24)},
      {{"R3.10", "L^{0,1}_phi = -i_{delbar phi} for integrable J"}, check_r310},
      {{"P3.3", "refined decomposition D = L^{1,0}_K' + L^{0,1}_K'' + i_L' + i_L''"},
       plain(check_p33)},
      {{"L3.6-matrix", "e^{-y} x e^y = sum_{i<k} [x,y]^(i)/i! on random matrix pairs"},
       plain(check_l36_matrix), false},
      {{"P3.12", "e^{-y} e^x e^y = exp(sum_{i<k} [x,y]^(i)/i!) for nilpotent x, y"},
       plain(check_p312), false},
      {{"NIL", "(i_phi)^{n+1} = 0 and e^{i_phi} e^{-i_phi} = 1"}, plain(check_nil)},
      {{"NC-T3.8.1", "negative control: conjugated nabla with the 1/2 coefficient dropped must fail"},
       plain(check_negative_control)},
  };
  return kEntries;
}

const Entry& find_entry(const std::string& id) {
  for (const auto& e : entries()) {
    if (e.info.id == id) return e;
  }
  throw std::invalid_argument("unknown identity id '" + id + "'");
}

}  // namespace

const std::vector<RegistryEntry>& identity_registry() {
  static const std::vector<RegistryEntry> kRegistry = [] {
    std::vector<RegistryEntry> out;
    for (const auto& e : entries()) out.push_back(e.info);
    return out;
  }();
  return kRegistry;
}

bool is_registered(const std::string& id) {
  return std::any_of(entries().begin(), entries().end(),
                     [&](const Entry& e) { return e.info.id == id; });
}

const ResidualEntry* IdentityReport::worst() const {
  const ResidualEntry* best = nullptr;
  for (const auto& r : residuals) {
    if (r.zero) continue;
    if (!best || r.terms > best->terms) best = &r;
  }
  return best;
}

IdentityReport check_identity(const IdentityCheck& spec) {
  const Entry& entry = find_entry(spec.id);
  IdentityReport report;
  report.id = spec.id;
  report.chart = spec.chart;
  const auto start = std::chrono::steady_clock::now();
  auto finish = [&] {
    report.millis = std::chrono::duration<double, std::milli>(
                        std::chrono::steady_clock::now() - start)
                        .count();
  };

  const ChartPtr chart = chart_from_name(spec.chart);
  if (spec.rank < 1) throw std::invalid_argument("rank must be >= 1");
  if (spec.degree < 0) throw std::invalid_argument("degree bound must be >= 0");
  report.seeds = {{"master", spec.seed}};
  if (entry.needs_forms) {
    report.seeds.emplace_back("phi", derive_seed(spec.seed, kPhi));
    report.seeds.emplace_back("psi", derive_seed(spec.seed, kPsi));
    report.seeds.emplace_back("connection", derive_seed(spec.seed, kConnection));
    report.seeds.emplace_back("probes", derive_seed(spec.seed, kProbes));
  }
  report.seeds.emplace_back("aux", derive_seed(spec.seed, kAux));

  if (spec.id == "R3.10" && !chart->has_constant_structure()) {
    report.skip = true;
    report.reason = nijenhuis_tensor(chart).is_zero()
                        ? "requires integrable J in coordinates where J is constant"
                        : "requires integrable J";
    finish();
    return report;
  }

  try {
    Context ctx;
    if (entry.needs_forms) {
      ctx = make_context(spec);
    } else {
      ctx.chart = chart;
      ctx.master = spec.seed;
    }
    Collector out(&ctx.probes);
    entry.run(ctx, out, spec);
    report.residuals = out.take();
    if (!out.skip_reason().empty()) {
      report.skip = true;
      report.reason = out.skip_reason();
      finish();
      return report;
    }
    report.pass = std::all_of(report.residuals.begin(), report.residuals.end(),
                              [](const ResidualEntry& r) { return r.zero; });
    if (!report.pass) report.reason = "nonzero residual";
  } catch (const std::exception& e) {
    report.pass = false;
    report.reason = std::string("construction error: ") + e.what();
  }
  finish();
  return report;
}

SuiteResult run_suite(const SuiteConfig& config) {
  chart_from_name(config.chart);
  if (config.rank < 1) throw std::invalid_argument("rank must be >= 1");
  if (config.degree < 0) throw std::invalid_argument("degree bound must be >= 0");
  std::vector<std::string> ids = config.ids;
  if (ids.empty()) {
    for (const auto& e : identity_registry()) ids.push_back(e.id);
  }
  for (const auto& id : ids) {
    if (!is_registered(id)) throw std::invalid_argument("unknown identity id '" + id + "'");
  }

  SuiteResult result;
  result.reports.resize(ids.size());
  auto run_one = [&](std::size_t i) {
    IdentityCheck spec{ids[i], config.chart, config.rank, config.degree, config.seed};
    result.reports[i] = check_identity(spec);
  };
  if (config.parallel && ids.size() > 1) {
    const unsigned workers =
        std::max(1u, std::min<unsigned>(std::thread::hardware_concurrency(),
                                        static_cast<unsigned>(ids.size())));
    std::atomic<std::size_t> next{0};
    std::vector<std::thread> pool;
    for (unsigned w = 0; w < workers; ++w) {
      pool.emplace_back([&] {
        for (std::size_t i = next++; i < ids.size(); i = next++) run_one(i);
      });
    }
    for (auto& t : pool) t.join();
  } else {
    for (std::size_t i = 0; i < ids.size(); ++i) run_one(i);
  }
  for (const auto& r : result.reports) {
    if (r.skip) ++result.summary.skip;
    else if (r.pass) ++result.summary.pass;
    else ++result.summary.fail;
  }
  return result;
}

}  // namespace acx
