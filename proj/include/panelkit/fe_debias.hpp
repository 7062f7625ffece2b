#pragma once

#include "panelkit/correction.hpp"
#include "panelkit/fe.hpp"
#include "panelkit/sample.hpp"

namespace panelkit {

// Trimmed plug-in estimate of the first-order incidental-parameter bias b/n of
// the FE slopes. Solves
//   H b = - sum_i sum_{t<T} sum_{s=t+1}^{min(t+M,T)} D_is e_it / (T - s + t),
//   H   = (1/n) sum_i sum_t Dtilde_it Dtilde_it'
// where D is the whole predetermined block, so lag coefficients are corrected too.
Eigen::VectorXd nickell_bias(const FEFit& fit, int trim);

CorrectionReport debias_fe_analytic(const FEFit& fit, int trim);
CorrectionReport debias_fe_analytic(const RegressionSample& sample, int trim);

// Half-panel correction along time; each half re-estimates its own unit and time effects.
CorrectionReport debias_fe_split(const FEFit& full_fit, const RegressionSample& sample,
                                 SplitConvention convention = SplitConvention::paper);
CorrectionReport debias_fe_split(const RegressionSample& sample, SplitConvention convention = SplitConvention::paper);

}  // namespace panelkit
