#include "qpnn/elements.hpp"

#include <cmath>
#include <stdexcept>

namespace qpnn {

namespace {
const Complex kI(0.0, 1.0);

double clamp01(double x) { return x < 0.0 ? 0.0 : (x > 1.0 ? 1.0 : x); }
}  // namespace

double wrap_phase(double phase) {
  double w = std::fmod(phase, kTwoPi);
  if (w < 0.0) w += kTwoPi;
  // fmod can round back up to the period itself
  if (w >= kTwoPi) w = 0.0;
  return w;
}

double element_loss(double alpha_wg_db_cm, double length_cm) {
  return 1.0 - std::pow(10.0, -alpha_wg_db_cm * length_cm / 10.0);
}

Eigen::Matrix2cd coupler(double t, double sign) {
  const double c = std::sqrt(clamp01(t));
  const Complex x = sign * kI * std::sqrt(clamp01(1.0 - t));
  Eigen::Matrix2cd m;
  m << c, x, x, c;
  return m;
}

Eigen::Matrix2cd ideal_mzi(const MZIParams& p) {
  const Complex et = std::exp(kI * p.theta);
  const Complex ep = std::exp(kI * p.phi);
  const double c = std::cos(p.theta);
  const double s = std::sin(p.theta);
  Eigen::Matrix2cd m;
  m << et * ep * c, -et * s, et * ep * s, et * c;
  return m;
}

Eigen::Matrix2cd realistic_mzi(const MZIParams& p, const MZIImperfection& imp) {
  Eigen::Matrix2cd inner = Eigen::Matrix2cd::Zero();
  inner(0, 0) = std::exp(kI * (2.0 * p.theta));
  inner(1, 1) = 1.0;
  Eigen::Matrix2cd input = Eigen::Matrix2cd::Zero();
  input(0, 0) = std::exp(kI * p.phi);
  input(1, 1) = 1.0;
  return std::sqrt(1.0 - imp.alpha) *
         (coupler(imp.t2, -1.0) * inner * coupler(imp.t1, +1.0) * input);
}

ClementsPlan ClementsPlan::make(int modes) {
  if (modes < 2) throw std::invalid_argument("mesh needs at least two modes");
  ClementsPlan plan;
  plan.modes = modes;
  plan.flat_modes.resize(modes);
  for (int col = 0; col < modes; ++col) {
    std::vector<bool> covered(modes, false);
    for (int top = col % 2; top + 1 < modes; top += 2) {
      plan.mzis.push_back({col, top});
      covered[top] = covered[top + 1] = true;
    }
    for (int j = 0; j < modes; ++j)
      if (!covered[j]) plan.flat_modes[col].push_back(j);
  }
  return plan;
}

MeshImperfections MeshImperfections::none(const ClementsPlan& plan) {
  MeshImperfections imp;
  imp.mzi.assign(plan.mzi_count(), MZIImperfection{});
  imp.flat_alpha.resize(plan.flat_modes.size());
  for (std::size_t c = 0; c < plan.flat_modes.size(); ++c)
    imp.flat_alpha[c].assign(plan.flat_modes[c].size(), 0.0);
  imp.output_alpha.assign(plan.modes, 0.0);
  return imp;
}

MeshImperfections MeshImperfections::uniform(const ClementsPlan& plan,
                                             const ImperfectionModel& model) {
  const double um_to_cm = 1e-4;
  const double a_mzi =
      element_loss(model.alpha_wg_db_cm, model.mzi_length_um * um_to_cm);
  const double a_ps = element_loss(model.alpha_wg_db_cm,
                                   model.phase_shifter_length_um * um_to_cm);
  MeshImperfections imp = none(plan);
  for (auto& u : imp.mzi) u.alpha = a_mzi;
  for (auto& col : imp.flat_alpha)
    for (auto& a : col) a = a_mzi;
  for (auto& a : imp.output_alpha) a = a_ps;
  return imp;
}

MeshImperfections sample_imperfections(const ImperfectionModel& model,
                                       const ClementsPlan& plan, Rng& rng) {
  const double um_to_cm = 1e-4;
  const double wg_std = model.alpha_wg_rel_std * model.alpha_wg_db_cm;
  const auto draw_loss = [&](double length_um) {
    double a = rng.normal(model.alpha_wg_db_cm, wg_std);
    if (a < 0.0) a = 0.0;
    return element_loss(a, length_um * um_to_cm);
  };

  MeshImperfections imp;
  imp.mzi.reserve(plan.mzi_count());
  for (int k = 0; k < plan.mzi_count(); ++k) {
    MZIImperfection u;
    u.t1 = clamp01(rng.normal(model.coupler_mean, model.coupler_std));
    u.t2 = clamp01(rng.normal(model.coupler_mean, model.coupler_std));
    u.alpha = draw_loss(model.mzi_length_um);
    imp.mzi.push_back(u);
  }
  imp.flat_alpha.resize(plan.flat_modes.size());
  for (std::size_t c = 0; c < plan.flat_modes.size(); ++c) {
    imp.flat_alpha[c].resize(plan.flat_modes[c].size());
    for (std::size_t s = 0; s < plan.flat_modes[c].size(); ++s)
      imp.flat_alpha[c][s] = draw_loss(model.mzi_length_um);
  }
  imp.output_alpha.resize(plan.modes);
  for (int j = 0; j < plan.modes; ++j)
    imp.output_alpha[j] = draw_loss(model.phase_shifter_length_um);
  return imp;
}

Matrix build_mesh(const MeshLayer& layer) {
  const ClementsPlan& plan = *layer.plan;
  const int m = plan.modes;
  if (static_cast<int>(layer.params.size()) != plan.mzi_count())
    throw std::invalid_argument("wrong number of interferometer settings");
  if (static_cast<int>(layer.output_phases.size()) != m)
    throw std::invalid_argument("wrong number of output phases");
  if (static_cast<int>(layer.imperfections.mzi.size()) != plan.mzi_count() ||
      static_cast<int>(layer.imperfections.output_alpha.size()) != m)
    throw std::invalid_argument("imperfections do not match the mesh plan");

  Matrix u = Matrix::Identity(m, m);
  std::size_t slot = 0;
  for (int col = 0; col < m; ++col) {
    while (slot < layer.params.size() &&
           plan.mzis[slot].column == col) {
      const int p = plan.mzis[slot].top_mode;
      const Eigen::Matrix2cd t =
          realistic_mzi(layer.params[slot], layer.imperfections.mzi[slot]);
      // left-multiply the embedded 2x2 block: rows p and p+1
      const Eigen::RowVectorXcd top = u.row(p);
      u.row(p) = t(0, 0) * top + t(0, 1) * u.row(p + 1);
      u.row(p + 1) = t(1, 0) * top + t(1, 1) * u.row(p + 1);
      ++slot;
    }
    const auto& flats = plan.flat_modes[col];
    for (std::size_t s = 0; s < flats.size(); ++s)
      u.row(flats[s]) *= std::sqrt(1.0 - layer.imperfections.flat_alpha[col][s]);
  }
  for (int j = 0; j < m; ++j)
    u.row(j) *= std::exp(Complex(0.0, layer.output_phases[j])) *
                std::sqrt(1.0 - layer.imperfections.output_alpha[j]);
  return u;
}

Vector kerr_phases(double varphi, const FockBasis& basis) {
  Vector d(basis.size());
  for (int i = 0; i < basis.size(); ++i) {
    double pairs = 0.0;
    for (const int occ : basis.state(i)) pairs += occ * (occ - 1);
    d(i) = std::exp(Complex(0.0, 0.5 * varphi * pairs));
  }
  return d;
}

Matrix kerr_unitary(double varphi, const FockBasis& basis) {
  return kerr_phases(varphi, basis).asDiagonal();
}

}  // namespace qpnn
