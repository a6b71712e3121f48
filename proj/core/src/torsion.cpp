#include "acx/torsion.hpp"

#include <stdexcept>

namespace acx {

std::vector<PolyScalar> lie_bracket(const std::vector<PolyScalar>& x,
                                    const std::vector<PolyScalar>& y) {
  if (x.size() != y.size() || x.empty()) throw std::invalid_argument("lie_bracket: size mismatch");
  const int d = static_cast<int>(x.size());
  const int nv = x[0].num_vars();
  std::vector<PolyScalar> out(static_cast<std::size_t>(d), PolyScalar(nv));
  for (int c = 0; c < d; ++c) {
    for (int b = 0; b < d; ++b) {
      if (!x[b].is_zero()) out[c] += x[b] * y[c].partial(b);
      if (!y[b].is_zero()) out[c] -= y[b] * x[c].partial(b);
    }
  }
  return out;
}

VectorForm torsion_form(const ChartPtr& chart) {
  const int d = chart->dim();
  const Projectors& proj = chart->projectors();
  std::vector<std::vector<PolyScalar>> frame(static_cast<std::size_t>(d));
  for (int a = 0; a < d; ++a) {
    frame[a].reserve(static_cast<std::size_t>(d));
    for (int c = 0; c < d; ++c) frame[a].push_back(proj.p10(c, a));
  }
  std::vector<ScalarForm> comps(static_cast<std::size_t>(d), ScalarForm(chart));
  for (int a = 0; a < d; ++a) {
    for (int b = a + 1; b < d; ++b) {
      const auto bracket = lie_bracket(frame[a], frame[b]);
      const unsigned mask = (1u << a) | (1u << b);
      for (int c = 0; c < d; ++c) {
        PolyScalar value(d);
        for (int e = 0; e < d; ++e) {
          if (!proj.p01(c, e).is_zero() && !bracket[e].is_zero()) value += proj.p01(c, e) * bracket[e];
        }
        comps[c].coeff(mask) = std::move(value);
      }
    }
  }
  return VectorForm(chart, 2, std::move(comps));
}

VectorForm nijenhuis_tensor(const ChartPtr& chart) {
  const VectorForm j = VectorForm::from_matrix(chart, chart->j());
  return fn_bracket(j, j);
}

}  // namespace acx
