#pragma once

// Slow reference implementations used as independent oracles.

#include <gmpxx.h>

#include <map>
#include <utility>
#include <vector>

#include "acx/algebra.hpp"
#include "acx/forms.hpp"

namespace acx::testing {

/// Polynomial as an exponent-vector map over GMP rationals.
struct NaivePoly {
  int num_vars = 0;
  std::map<std::vector<int>, std::pair<mpq_class, mpq_class>> terms;

  explicit NaivePoly(int nv) : num_vars(nv) {}

  static NaivePoly from(const PolyScalar& p) {
    NaivePoly out(p.num_vars());
    for (const auto& t : p.terms()) {
      std::vector<int> e(static_cast<std::size_t>(p.num_vars()));
      for (int v = 0; v < p.num_vars(); ++v) e[v] = monomial_exponent(t.monomial, v);
      out.terms[e] = {t.coeff.re.to_mpq(), t.coeff.im.to_mpq()};
    }
    return out;
  }

  void add_term(const std::vector<int>& e, const mpq_class& re, const mpq_class& im) {
    auto& slot = terms[e];
    slot.first += re;
    slot.second += im;
    if (slot.first == 0 && slot.second == 0) terms.erase(e);
  }

  friend NaivePoly operator*(const NaivePoly& a, const NaivePoly& b) {
    NaivePoly out(a.num_vars);
    for (const auto& [ea, ca] : a.terms) {
      for (const auto& [eb, cb] : b.terms) {
        std::vector<int> e(ea.size());
        for (std::size_t v = 0; v < e.size(); ++v) e[v] = ea[v] + eb[v];
        out.add_term(e, ca.first * cb.first - ca.second * cb.second,
                     ca.first * cb.second + ca.second * cb.first);
      }
    }
    return out;
  }

  friend NaivePoly operator+(NaivePoly a, const NaivePoly& b) {
    for (const auto& [e, c] : b.terms) a.add_term(e, c.first, c.second);
    return a;
  }

  friend bool operator==(const NaivePoly& a, const NaivePoly& b) {
    return a.num_vars == b.num_vars && a.terms == b.terms;
  }
};

/// Lie bracket of vector fields from tangent components.
inline std::vector<PolyScalar> naive_field_bracket(const std::vector<PolyScalar>& x,
                                                   const std::vector<PolyScalar>& y) {
  const int d = static_cast<int>(x.size());
  std::vector<PolyScalar> out(x.size(), PolyScalar(d));
  for (int c = 0; c < d; ++c) {
    for (int a = 0; a < d; ++a) {
      out[c] += x[a] * y[c].partial(a) - y[a] * x[c].partial(a);
    }
  }
  return out;
}

/// K(d/dx_a) for a vector 1-form K.
inline std::vector<PolyScalar> apply_one_form(const VectorForm& k, int a) {
  std::vector<PolyScalar> out;
  for (int c = 0; c < k.dim(); ++c) out.push_back(k.component(c).coeff(1u << a));
  return out;
}

/// K applied to a vector field.
inline std::vector<PolyScalar> apply_one_form(const VectorForm& k, const std::vector<PolyScalar>& x) {
  const int d = k.dim();
  std::vector<PolyScalar> out(static_cast<std::size_t>(d), PolyScalar(d));
  for (int a = 0; a < d; ++a) {
    const auto col = apply_one_form(k, a);
    for (int c = 0; c < d; ++c) out[c] += x[a] * col[c];
  }
  return out;
}

/// Froelicher-Nijenhuis bracket of two vector 1-forms by the coordinate-field
/// formula [K,L](X,Y) = [KX,LY] - [KY,LX] - L([KX,Y] - [KY,X]) - K([X,LY] - [Y,LX]).
inline VectorForm naive_fn_bracket_one_forms(const VectorForm& k, const VectorForm& l) {
  const ChartPtr& chart = k.chart();
  const int d = chart->dim();
  std::vector<ScalarForm> comps(static_cast<std::size_t>(d), ScalarForm(chart));
  auto unit = [&](int a) {
    std::vector<PolyScalar> e(static_cast<std::size_t>(d), PolyScalar(d));
    e[a] = PolyScalar::constant(d, 1);
    return e;
  };
  auto sub = [](std::vector<PolyScalar> x, const std::vector<PolyScalar>& y) {
    for (std::size_t i = 0; i < x.size(); ++i) x[i] -= y[i];
    return x;
  };
  for (int a = 0; a < d; ++a) {
    for (int b = a + 1; b < d; ++b) {
      const auto kx = apply_one_form(k, a);
      const auto ky = apply_one_form(k, b);
      const auto lx = apply_one_form(l, a);
      const auto ly = apply_one_form(l, b);
      auto value = sub(naive_field_bracket(kx, ly), naive_field_bracket(ky, lx));
      value = sub(value, apply_one_form(l, sub(naive_field_bracket(kx, unit(b)),
                                               naive_field_bracket(ky, unit(a)))));
      value = sub(value, apply_one_form(k, sub(naive_field_bracket(unit(a), ly),
                                               naive_field_bracket(unit(b), lx))));
      for (int c = 0; c < d; ++c) comps[c].coeff((1u << a) | (1u << b)) = value[c];
    }
  }
  return VectorForm(chart, 2, std::move(comps));
}

}  // namespace acx::testing
