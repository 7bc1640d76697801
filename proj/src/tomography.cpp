#include "hyperchip/tomography.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "hyperchip/apparatus.hpp"

namespace hyperchip {

namespace {

constexpr std::uint64_t kTomographyStream = 0x70u;
constexpr std::uint64_t kMonteCarloStream = 0x7a000000ULL;
constexpr int kParams = 16;

using ParamVector = Eigen::Matrix<Real, kParams, 1>;
using ParamMatrix = Eigen::Matrix<Real, kParams, kParams>;

std::pair<Spatial, Spatial> pair_ports(PathPair pair) {
  return pair == PathPair::rA_ellB ? std::pair{Spatial::r, Spatial::ell}
                                   : std::pair{Spatial::ell, Spatial::r};
}

Matrix4c projector(const ExperimentRecord& rec) {
  if (!rec.setting.first.analyzer || !rec.setting.second.analyzer)
    throw PhysicsError("tomography record without polarization analyzers");
  const Vector2c a = polarization_ket(*rec.setting.first.analyzer);
  const Vector2c b = polarization_ket(*rec.setting.second.analyzer);
  return kron(Matrix2c(a * a.adjoint()), Matrix2c(b * b.adjoint()));
}

std::array<Matrix4c, 16> pauli_basis() {
  const std::array<Matrix2c, 4> s{pauli::identity(), pauli::x(), pauli::y(), pauli::z()};
  std::array<Matrix4c, 16> out;
  for (int i = 0; i < 4; ++i)
    for (int j = 0; j < 4; ++j) out[static_cast<std::size_t>(i * 4 + j)] = kron(s[i], s[j]);
  return out;
}

MeasurementSetting tomography_setting(const TomographySetting& t) {
  const auto [pa, pb] = pair_ports(t.pair);
  return {0.0, 0.0, 0.0, {Arm::A, pa, analyzer_direction(t.first)},
          {Arm::B, pb, analyzer_direction(t.second)}};
}

// Lower-triangular T from the parameter vector: 4 real diagonals, then
// (re, im) of the six sub-diagonal entries in row-major order.
Matrix4c unpack(const ParamVector& x) {
  Matrix4c t = Matrix4c::Zero();
  int k = 0;
  for (int i = 0; i < 4; ++i) t(i, i) = x(k++);
  for (int i = 1; i < 4; ++i)
    for (int j = 0; j < i; ++j) {
      t(i, j) = Complex(x(k), x(k + 1));
      k += 2;
    }
  return t;
}

ParamVector pack(const Matrix4c& t) {
  ParamVector x;
  int k = 0;
  for (int i = 0; i < 4; ++i) x(k++) = t(i, i).real();
  for (int i = 1; i < 4; ++i)
    for (int j = 0; j < i; ++j) {
      x(k++) = t(i, j).real();
      x(k++) = t(i, j).imag();
    }
  return x;
}

// Poisson negative log-likelihood (constant terms dropped) of rho = T T^dag
// against counts scaled to unit total.
class Likelihood {
 public:
  Likelihood(std::vector<Matrix4c> ops, std::vector<Real> n) : ops_(std::move(ops)), n_(std::move(n)) {}

  Real value(const ParamVector& x) const {
    const Matrix4c t = unpack(x);
    const Matrix4c rho = t * t.adjoint();
    Real f = 0.0;
    for (std::size_t v = 0; v < ops_.size(); ++v) {
      const Real mu = (ops_[v] * rho).trace().real();
      if (n_[v] > 0.0) {
        if (!(mu > 0.0)) return std::numeric_limits<Real>::infinity();
        f += mu - n_[v] * std::log(mu);
      } else {
        f += mu;
      }
    }
    return f;
  }

  // d mu / d Re T_ij = 2 Re (M T)_ij, d mu / d Im T_ij = 2 Im (M T)_ij.
  ParamVector gradient(const ParamVector& x) const {
    const Matrix4c t = unpack(x);
    const Matrix4c rho = t * t.adjoint();
    Matrix4c w = Matrix4c::Zero();
    for (std::size_t v = 0; v < ops_.size(); ++v) {
      const Real mu = (ops_[v] * rho).trace().real();
      const Real weight = n_[v] > 0.0 ? 1.0 - n_[v] / mu : 1.0;
      w += weight * ops_[v];
    }
    const Matrix4c g = 2.0 * w * t;
    ParamVector out;
    int k = 0;
    for (int i = 0; i < 4; ++i) out(k++) = g(i, i).real();
    for (int i = 1; i < 4; ++i)
      for (int j = 0; j < i; ++j) {
        out(k++) = g(i, j).real();
        out(k++) = g(i, j).imag();
      }
    return out;
  }

  Real expected_total(const Matrix4c& rho) const {
    Real s = 0.0;
    for (const auto& m : ops_) s += (m * rho).trace().real();
    return s;
  }

 private:
  std::vector<Matrix4c> ops_;
  std::vector<Real> n_;
};

Matrix4c positive_start(const Matrix4c& linear) {
  Eigen::SelfAdjointEigenSolver<Matrix4c> es(Matrix4c((linear + linear.adjoint()) / 2.0));
  Eigen::Vector4d ev = es.eigenvalues().cwiseMax(0.0);
  ev /= ev.sum();
  // Keep the start strictly inside the cone so every mu is positive.
  ev = 0.98 * ev + Eigen::Vector4d::Constant(0.005);
  return es.eigenvectors() * ev.asDiagonal() * es.eigenvectors().adjoint();
}

Real sample_sd(const std::vector<Real>& v) {
  Real mean = 0.0;
  for (Real x : v) mean += x;
  mean /= static_cast<Real>(v.size());
  Real ss = 0.0;
  for (Real x : v) ss += (x - mean) * (x - mean);
  return std::sqrt(ss / static_cast<Real>(v.size() - 1));
}

std::vector<TomographySetting> from_labels(const std::vector<const char*>& labels, PathPair pair) {
  std::vector<TomographySetting> out;
  for (const char* l : labels)
    out.push_back({static_cast<Analyzer>(l[0]), static_cast<Analyzer>(l[1]), pair});
  return out;
}

}  // namespace

DensityMatrix2Q::DensityMatrix2Q(const Matrix4c& rho) : rho_(rho) {
  if ((rho - rho.adjoint()).norm() > 1e-10)
    throw PhysicsError("density matrix is not Hermitian");
  if (std::abs(rho.trace() - Complex(1.0)) > 1e-10) throw PhysicsError("density matrix trace != 1");
  rho_ = (rho + rho.adjoint()) / 2.0;
}

Real DensityMatrix2Q::min_eigenvalue() const {
  return Eigen::SelfAdjointEigenSolver<Matrix4c>(rho_).eigenvalues().minCoeff();
}

DensityMatrix2Q DensityMatrix2Q::pure(const Vector4c& psi) {
  const Vector4c p = psi.normalized();
  return DensityMatrix2Q(p * p.adjoint());
}

Vector4c bell_state(BellState which) {
  const Real s = 1.0 / std::sqrt(2.0);
  Vector4c v = Vector4c::Zero();
  switch (which) {
    case BellState::phi_plus: v << s, 0, 0, s; break;
    case BellState::phi_minus: v << s, 0, 0, -s; break;
    case BellState::psi_plus: v << 0, s, s, 0; break;
    case BellState::psi_minus: v << 0, s, -s, 0; break;
  }
  return v;
}

Eigen::Vector3d analyzer_direction(Analyzer a) {
  switch (a) {
    case Analyzer::H: return {0, 0, 1};
    case Analyzer::V: return {0, 0, -1};
    case Analyzer::D: return {1, 0, 0};
    case Analyzer::A: return {-1, 0, 0};
    case Analyzer::R: return {0, 1, 0};
    case Analyzer::L: return {0, -1, 0};
  }
  throw PhysicsError("unknown analyzer");
}

std::vector<TomographySetting> standard_settings(PathPair pair) {
  return from_labels({"HH", "HV", "VV", "VH", "RH", "RV", "DV", "DH", "DR", "DD", "RD", "HD", "VD",
                      "VL", "HL", "RL"},
                     pair);
}

std::vector<TomographySetting> overcomplete_settings(PathPair pair) {
  const char names[] = "HVDARL";
  std::vector<TomographySetting> out;
  for (int i = 0; i < 6; ++i)
    for (int j = 0; j < 6; ++j)
      out.push_back({static_cast<Analyzer>(names[i]), static_cast<Analyzer>(names[j]), pair});
  return out;
}

std::vector<ExperimentRecord> simulate_counts(const MixedState& state,
                                              const std::vector<TomographySetting>& settings,
                                              Real shots_per_setting, const SourceConfig& cfg,
                                              std::uint64_t seed, bool sample) {
  if (state.stage() != Stage::pre_chip)
    throw PhysicsError("tomography tags the input modes in front of the chip");
  std::vector<ExperimentRecord> out;
  out.reserve(settings.size());
  for (std::size_t i = 0; i < settings.size(); ++i) {
    const MeasurementSetting s = tomography_setting(settings[i]);
    const Real p = coincidence_probability(state, s.first, s.second);
    const std::vector<InputPair> inputs{
        {{Arm::A, s.first.port}, {Arm::B, s.second.port}, 1.0}};
    ExperimentRecord rec =
        apply_efficiencies(make_record(s, p, shots_per_setting, cfg, inputs), cfg.efficiencies);
    if (sample) {
      auto rng = derived_rng(seed, kTomographyStream + i);
      sample_counts(rec, &rng);
    } else {
      sample_counts(rec, nullptr);
    }
    out.push_back(std::move(rec));
  }
  return out;
}

std::vector<ExperimentRecord> simulate_counts(const Matrix4c& rho,
                                              const std::vector<TomographySetting>& settings,
                                              Real shots_per_setting, std::uint64_t seed,
                                              bool sample) {
  const DensityMatrix2Q checked(rho);
  SourceConfig cfg = SourceConfig::ideal();
  std::vector<ExperimentRecord> out;
  for (std::size_t i = 0; i < settings.size(); ++i) {
    const MeasurementSetting s = tomography_setting(settings[i]);
    ExperimentRecord tmp;
    tmp.setting = s;
    const Real p = (projector(tmp) * checked.matrix()).trace().real();
    ExperimentRecord rec = make_record(s, p, shots_per_setting, cfg,
                                       {{{Arm::A, s.first.port}, {Arm::B, s.second.port}, 1.0}});
    if (sample) {
      auto rng = derived_rng(seed, kTomographyStream + i);
      sample_counts(rec, &rng);
    } else {
      sample_counts(rec, nullptr);
    }
    out.push_back(std::move(rec));
  }
  return out;
}

Matrix4c linear_inversion(const std::vector<ExperimentRecord>& records) {
  const auto basis = pauli_basis();
  Eigen::MatrixXd a(static_cast<Eigen::Index>(records.size()), kParams);
  Eigen::VectorXd n(static_cast<Eigen::Index>(records.size()));
  for (std::size_t v = 0; v < records.size(); ++v) {
    const Matrix4c m = projector(records[v]);
    for (int k = 0; k < kParams; ++k)
      a(static_cast<Eigen::Index>(v), k) = (m * basis[static_cast<std::size_t>(k)]).trace().real();
    n(static_cast<Eigen::Index>(v)) = static_cast<Real>(records[v].raw_counts);
  }
  const auto qr = a.colPivHouseholderQr();
  if (qr.rank() < kParams)
    throw PhysicsError("tomography settings are incomplete: rank " + std::to_string(qr.rank()) +
                       " of 16");
  const Eigen::VectorXd c = qr.solve(n);
  Matrix4c x = Matrix4c::Zero();
  for (int k = 0; k < kParams; ++k) x += c(k) * basis[static_cast<std::size_t>(k)];
  x /= 4.0;
  const Complex tr = x.trace();
  if (!(tr.real() > 0.0)) throw PhysicsError("no counts to reconstruct");
  return x / tr;
}

Reconstruction reconstruct(const std::vector<ExperimentRecord>& records, const MleOptions& options) {
  Reconstruction out;
  out.linear_estimate = linear_inversion(records);

  std::vector<Matrix4c> ops;
  std::vector<Real> n;
  Real total = 0.0;
  for (const auto& r : records) {
    ops.push_back(projector(r));
    n.push_back(static_cast<Real>(r.raw_counts));
    total += static_cast<Real>(r.raw_counts);
  }
  for (Real& v : n) v /= total;
  const Likelihood like(ops, n);

  Matrix4c start = positive_start(out.linear_estimate);
  start /= like.expected_total(start);
  ParamVector x = pack(Eigen::LLT<Matrix4c>(start).matrixL().toDenseMatrix());

  // BFGS with Armijo backtracking.
  ParamMatrix h = ParamMatrix::Identity();
  Real f = like.value(x);
  ParamVector g = like.gradient(x);
  int it = 0;
  int flat = 0;  // consecutive steps that moved f by rounding noise only
  std::string stop = "iteration limit";
  for (; it < options.max_iterations; ++it) {
    if (g.norm() < options.gradient_tolerance) {
      out.converged = true;
      stop = "gradient tolerance";
      break;
    }
    ParamVector d = -h * g;
    if (d.dot(g) >= 0.0) {
      h.setIdentity();
      d = -g;
    }
    Real step = 1.0;
    Real f_new = 0.0;
    ParamVector x_new;
    bool accepted = false;
    for (int ls = 0; ls < 60; ++ls) {
      x_new = x + step * d;
      f_new = like.value(x_new);
      if (std::isfinite(f_new) && f_new <= f + 1e-4 * step * g.dot(d)) {
        accepted = true;
        break;
      }
      step *= 0.5;
    }
    if (!accepted) {
      if (h.isIdentity()) {
        stop = "line search stalled";
        break;
      }
      h.setIdentity();
      continue;
    }
    const ParamVector g_new = like.gradient(x_new);
    const ParamVector s = x_new - x;
    const ParamVector y = g_new - g;
    const Real sy = s.dot(y);
    if (sy > 1e-300) {
      const Real r = 1.0 / sy;
      const ParamMatrix i_rsy = ParamMatrix::Identity() - r * s * y.transpose();
      h = i_rsy * h * i_rsy.transpose() + r * s * s.transpose();
    }
    flat = f - f_new <= 1e-15 * std::max(1.0, std::abs(f)) ? flat + 1 : 0;
    x = x_new;
    f = f_new;
    g = g_new;
    // Rank-deficient optima converge sublinearly in T; once f is flat to
    // machine precision more iterations only shuffle rounding noise.
    if (flat >= 20) {
      out.converged = g.norm() < 100.0 * options.gradient_tolerance;
      stop = "objective flat";
      ++it;
      break;
    }
  }

  const Matrix4c t = unpack(x);
  Matrix4c rho = t * t.adjoint();
  rho /= rho.trace();
  out.rho = DensityMatrix2Q(rho);
  out.iterations = it;
  out.gradient_norm = g.norm();
  out.neg_log_likelihood = f;
  std::ostringstream msg;
  msg << stop << " after " << it << " iterations, |grad| = " << out.gradient_norm;
  out.diagnostics = msg.str();
  return out;
}

Real trace_distance(const Matrix4c& a, const Matrix4c& b) {
  const Matrix4c d = (a - b + (a - b).adjoint()) / 2.0;
  return 0.5 * Eigen::SelfAdjointEigenSolver<Matrix4c>(d).eigenvalues().cwiseAbs().sum();
}

Matrix4c branch_polarization(const MixedState& state, PathPair pair) {
  const Matrix16c q = qubit_density_matrix(state);
  // Register order (pi_A, k_A, pi_B, k_B); r_A ell_B is k = (1, 0).
  const int ka = pair == PathPair::rA_ellB ? 1 : 0;
  const int kb = 1 - ka;
  Matrix4c out;
  for (int r = 0; r < 4; ++r)
    for (int c = 0; c < 4; ++c) {
      const int ir = ((r >> 1) << 3) | (ka << 2) | ((r & 1) << 1) | kb;
      const int ic = ((c >> 1) << 3) | (ka << 2) | ((c & 1) << 1) | kb;
      out(r, c) = q(ir, ic);
    }
  const Complex tr = out.trace();
  if (!(tr.real() > 0.0)) throw PhysicsError("path pair carries no population");
  return out / tr;
}

MonteCarloErrors monte_carlo_errors(const std::vector<ExperimentRecord>& records,
                                    const Vector4c& target, int n_resamples, std::uint64_t seed,
                                    unsigned threads) {
  if (n_resamples < 100) throw PhysicsError("Monte Carlo errors need at least 100 resamples");
  MonteCarloErrors out;
  const Reconstruction base = reconstruct(records);
  out.fidelity.value = fidelity(base.rho, target);
  out.concurrence.value = concurrence(base.rho);

  std::vector<Real> fs(static_cast<std::size_t>(n_resamples));
  std::vector<Real> cs(fs.size());
  parallel_for(fs.size(), threads, [&](std::size_t k) {
    auto rng = derived_rng(seed, kMonteCarloStream + k);
    std::vector<ExperimentRecord> resampled = records;
    for (auto& r : resampled)
      r.raw_counts = sample_poisson(static_cast<Real>(r.raw_counts), rng);
    const Reconstruction rec = reconstruct(resampled);
    fs[k] = fidelity(rec.rho, target);
    cs[k] = concurrence(rec.rho);
  });
  out.fidelity.sigma = sample_sd(fs);
  out.concurrence.sigma = sample_sd(cs);
  return out;
}

}  // namespace hyperchip
