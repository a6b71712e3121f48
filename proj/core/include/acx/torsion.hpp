#pragma once

#include "acx/chart.hpp"
#include "acx/forms.hpp"

namespace acx {

/// Lie bracket of two vector fields given by tangent components.
std::vector<PolyScalar> lie_bracket(const std::vector<PolyScalar>& x,
                                    const std::vector<PolyScalar>& y);

/// theta in A^{2,0}(T^{0,1}) with theta(X, Y) = [X, Y]^{0,1} for X, Y of type
/// (1,0).  Computed on the frame X_a = P10 d/dx_a, which is tensorial because
/// P01 X_a = 0.
VectorForm torsion_form(const ChartPtr& chart);

/// [J, J] with J viewed as a vector 1-form.
VectorForm nijenhuis_tensor(const ChartPtr& chart);

}  // namespace acx
