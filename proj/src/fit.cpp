#include "hyperchip/fit.hpp"

#include <algorithm>
#include <cmath>

#include <unsupported/Eigen/NonLinearOptimization>

namespace hyperchip {

namespace {

Real sinc(Real u) { return u == 0.0 ? 1.0 : std::sin(u) / u; }

Real dsinc(Real u) { return u == 0.0 ? 0.0 : (std::cos(u) * u - std::sin(u)) / (u * u); }

// Parameters: (b, a, c, w[, s]).
struct EnvelopeResidual {
  std::span<const Real> x, y;
  std::vector<Real> inv_sigma;
  EnvelopeModel model;

  int inputs() const { return model == EnvelopeModel::gaussian ? 4 : 5; }
  int values() const { return static_cast<int>(x.size()); }

  int operator()(const Eigen::VectorXd& p, Eigen::VectorXd& r) const {
    for (std::size_t i = 0; i < x.size(); ++i) {
      const Real d = x[i] - p(2);
      Real shape = std::exp(-d * d / (2.0 * p(3) * p(3)));
      if (model == EnvelopeModel::gaussian_sinc) shape *= sinc(kPi * d / p(4));
      r(i) = (p(0) * (1.0 + p(1) * shape) - y[i]) * inv_sigma[i];
    }
    return 0;
  }

  int df(const Eigen::VectorXd& p, Eigen::MatrixXd& j) const {
    for (std::size_t i = 0; i < x.size(); ++i) {
      const Real d = x[i] - p(2);
      const Real g = std::exp(-d * d / (2.0 * p(3) * p(3)));
      Real s = 1.0, ds_dd = 0.0, ds_dw = 0.0;
      if (model == EnvelopeModel::gaussian_sinc) {
        const Real u = kPi * d / p(4);
        s = sinc(u);
        ds_dd = dsinc(u) * kPi / p(4);
        ds_dw = -dsinc(u) * u / p(4);
      }
      const Real shape = g * s;
      const Real dg_dd = -g * d / (p(3) * p(3));
      const Real w = inv_sigma[i];
      j(i, 0) = (1.0 + p(1) * shape) * w;
      j(i, 1) = p(0) * shape * w;
      // d/dc = -d/dd
      j(i, 2) = -p(0) * p(1) * (dg_dd * s + g * ds_dd) * w;
      j(i, 3) = p(0) * p(1) * g * s * d * d / (p(3) * p(3) * p(3)) * w;
      if (model == EnvelopeModel::gaussian_sinc) j(i, 4) = p(0) * p(1) * g * ds_dw * w;
    }
    return 0;
  }
};

}  // namespace

Real EnvelopeFit::evaluate(Real x) const {
  const Real d = x - center;
  Real shape = std::exp(-d * d / (2.0 * width * width));
  if (model == EnvelopeModel::gaussian_sinc) shape *= sinc(kPi * d / sinc_width);
  return baseline * (1.0 + amplitude * shape);
}

EnvelopeFit fit_envelope(std::span<const Real> x, std::span<const Real> y,
                         std::span<const Real> sigma, EnvelopeModel model) {
  const std::size_t n = x.size();
  if (n < 5 || y.size() != n || (!sigma.empty() && sigma.size() != n))
    throw PhysicsError("envelope fit needs at least 5 matching points");

  // Starting point: baseline from the outermost points, extremum from the
  // largest excursion, width from the half-excursion span.
  std::vector<std::size_t> order(n);
  for (std::size_t i = 0; i < n; ++i) order[i] = i;
  std::sort(order.begin(), order.end(), [&](auto a, auto b) { return x[a] < x[b]; });
  const std::size_t edge = std::max<std::size_t>(1, n / 8);
  Real b0 = 0.0;
  for (std::size_t k = 0; k < edge; ++k) b0 += y[order[k]] + y[order[n - 1 - k]];
  b0 /= static_cast<Real>(2 * edge);
  if (b0 == 0.0) b0 = 1.0;
  std::size_t ext = 0;
  for (std::size_t i = 1; i < n; ++i)
    if (std::abs(y[i] - b0) > std::abs(y[ext] - b0)) ext = i;
  const Real excursion = y[ext] - b0;
  Real lo = x[ext], hi = x[ext];
  for (std::size_t i = 0; i < n; ++i)
    if (std::abs(y[i] - b0) >= 0.5 * std::abs(excursion)) {
      lo = std::min(lo, x[i]);
      hi = std::max(hi, x[i]);
    }
  const Real span = x[order[n - 1]] - x[order[0]];
  Real w0 = (hi - lo) / 2.355;
  if (!(w0 > 0.0)) w0 = span / 20.0;

  EnvelopeResidual f{x, y, std::vector<Real>(n, 1.0), model};
  if (!sigma.empty())
    for (std::size_t i = 0; i < n; ++i) f.inv_sigma[i] = sigma[i] > 0.0 ? 1.0 / sigma[i] : 1.0;

  Eigen::VectorXd p(f.inputs());
  p(0) = b0;
  p(1) = excursion / b0;
  p(2) = x[ext];
  p(3) = w0;
  if (model == EnvelopeModel::gaussian_sinc) p(4) = 3.0 * w0;

  Eigen::LevenbergMarquardt<EnvelopeResidual> lm(f);
  lm.parameters.xtol = 1e-15;
  lm.parameters.ftol = 1e-15;
  lm.parameters.maxfev = 4000;
  const auto status = lm.minimize(p);

  EnvelopeFit fit;
  fit.model = model;
  fit.baseline = p(0);
  fit.amplitude = p(1);
  fit.center = p(2);
  fit.width = std::abs(p(3));
  if (model == EnvelopeModel::gaussian_sinc) fit.sinc_width = std::abs(p(4));
  fit.converged = status != Eigen::LevenbergMarquardtSpace::ImproperInputParameters &&
                  status != Eigen::LevenbergMarquardtSpace::TooManyFunctionEvaluation &&
                  std::isfinite(fit.baseline) && std::isfinite(fit.center);
  return fit;
}

Real visibility(const EnvelopeFit& fit) { return std::clamp(std::abs(fit.amplitude), 0.0, 1.0); }

}  // namespace hyperchip
