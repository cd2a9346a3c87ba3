#include "qpnn/engine.hpp"

#include <cmath>
#include <stdexcept>

namespace qpnn {

namespace {
// p_cb below this is treated as "the photons never arrive", where the
// conditional fidelity stops being meaningful
constexpr double kDegenerateProbability = 1e-30;

bool compatible(const BasisPtr& a, const BasisPtr& b) {
  if (a == b) return true;
  if (!a || !b) return false;
  return a->photons() == b->photons() && a->modes() == b->modes();
}
}  // namespace

void TrainingSet::validate() const {
  if (!basis) throw std::invalid_argument("training set has no basis");
  if (pairs.empty()) throw std::invalid_argument("training set has no pairs");
  for (const auto& p : pairs) {
    if (!compatible(p.input.basis, basis) || !compatible(p.target.basis, basis))
      throw std::invalid_argument("training pair uses a different basis");
    if (p.input.amplitudes.size() != basis->size() ||
        p.target.amplitudes.size() != basis->size())
      throw std::invalid_argument("training pair has wrong dimension");
  }
  if (!labels.empty() && labels.size() != pairs.size())
    throw std::invalid_argument("label count does not match pair count");
}

std::vector<int> computational_basis_indices(
    const FockBasis& basis, const std::vector<std::pair<int, int>>& pairing) {
  const int q = static_cast<int>(pairing.size());
  if (q < 1) throw std::invalid_argument("empty qubit pairing");
  if (basis.photons() != q)
    throw std::invalid_argument("qubit count must match photon count");
  std::vector<bool> used(basis.modes(), false);
  for (const auto& [a, b] : pairing) {
    if (a < 0 || b < 0 || a >= basis.modes() || b >= basis.modes() || a == b)
      throw std::invalid_argument("invalid mode pair");
    if (used[a] || used[b])
      throw std::invalid_argument("mode appears in two pairs");
    used[a] = used[b] = true;
  }
  std::vector<int> indices;
  indices.reserve(std::size_t(1) << q);
  for (std::size_t bits = 0; bits < (std::size_t(1) << q); ++bits) {
    FockState s(basis.modes(), 0);
    for (int qi = 0; qi < q; ++qi) {
      const bool one = (bits >> (q - 1 - qi)) & 1;  // first pair = MSB
      s[one ? pairing[qi].second : pairing[qi].first] = 1;
    }
    indices.push_back(basis.index_of(s));
  }
  return indices;
}

QPNNInstance::QPNNInstance(BasisPtr basis, int layers, double varphi,
                           std::vector<std::pair<int, int>> qubit_pairing)
    : basis_(std::move(basis)),
      varphi_(varphi),
      pairing_(std::move(qubit_pairing)),
      lift_(basis_) {
  if (layers < 1) throw std::invalid_argument("network needs at least one layer");
  plan_ = std::make_shared<const ClementsPlan>(
      ClementsPlan::make(basis_->modes()));
  mesh_layers_.reserve(layers);
  for (int i = 0; i < layers; ++i) {
    MeshLayer layer;
    layer.plan = plan_;
    layer.params.assign(plan_->mzi_count(), MZIParams{});
    layer.output_phases.assign(basis_->modes(), 0.0);
    layer.imperfections = MeshImperfections::none(*plan_);
    mesh_layers_.push_back(std::move(layer));
  }
  cb_indices_ = computational_basis_indices(*basis_, pairing_);
  kerr_ = kerr_phases(varphi_, *basis_);
  layer_fock_.resize(layers);
}

int QPNNInstance::parameter_count() const {
  const int m = basis_->modes();
  return layers() * (m * (m - 1) + m);
}

void QPNNInstance::set_parameters(const Eigen::VectorXd& params) {
  if (params.size() != parameter_count())
    throw std::invalid_argument("wrong parameter vector length");
  int k = 0;
  for (auto& layer : mesh_layers_) {
    for (auto& p : layer.params) {
      p.phi = wrap_phase(params(k++));
      p.theta = wrap_phase(params(k++));
    }
    for (auto& ph : layer.output_phases) ph = wrap_phase(params(k++));
  }
  dirty_ = true;
}

Eigen::VectorXd QPNNInstance::parameters() const {
  Eigen::VectorXd out(parameter_count());
  int k = 0;
  for (const auto& layer : mesh_layers_) {
    for (const auto& p : layer.params) {
      out(k++) = p.phi;
      out(k++) = p.theta;
    }
    for (const double ph : layer.output_phases) out(k++) = ph;
  }
  return out;
}

void QPNNInstance::set_varphi(double varphi) {
  varphi_ = varphi;
  kerr_ = kerr_phases(varphi_, *basis_);
  dirty_ = true;
}

void QPNNInstance::set_imperfections(
    std::vector<MeshImperfections> per_layer) {
  if (per_layer.size() != mesh_layers_.size())
    throw std::invalid_argument("need one imperfection set per layer");
  for (std::size_t i = 0; i < per_layer.size(); ++i)
    mesh_layers_[i].imperfections = std::move(per_layer[i]);
  dirty_ = true;
}

void QPNNInstance::rebuild() {
  const int n_layers = layers();
  for (int i = 0; i < n_layers; ++i)
    lift_.apply(build_mesh(mesh_layers_[i]), layer_fock_[i]);
  transfer_ = layer_fock_[0];
  for (int i = 1; i < n_layers; ++i) {
    transfer_ = kerr_.asDiagonal() * transfer_;
    scratch_.noalias() = layer_fock_[i] * transfer_;
    transfer_.swap(scratch_);
  }
  dirty_ = false;
}

const Matrix& QPNNInstance::transfer() {
  if (dirty_) rebuild();
  return transfer_;
}

QuantumState QPNNInstance::propagate(const QuantumState& input) {
  if (!compatible(input.basis, basis_))
    throw std::invalid_argument("input state uses a different basis");
  return {basis_, transfer() * input.amplitudes};
}

MetricsReport QPNNInstance::metrics(const TrainingSet& set) {
  set.validate();
  if (!compatible(set.basis, basis_))
    throw std::invalid_argument("training set uses a different basis");
  const Matrix& s = transfer();
  MetricsReport report;
  report.per_pair.reserve(set.pairs.size());
  for (const auto& pair : set.pairs) {
    const Vector out = s * pair.input.amplitudes;
    PairMetrics pm;
    pm.f_unc = std::norm(pair.target.amplitudes.dot(out));
    // project onto the computational basis and renormalize; the overlap of
    // the target with the projected state gives the conditional fidelity
    double p = 0.0;
    Complex overlap(0.0, 0.0);
    for (const int idx : cb_indices_) {
      p += std::norm(out(idx));
      overlap += std::conj(pair.target.amplitudes(idx)) * out(idx);
    }
    pm.p_cb = p;
    if (p < kDegenerateProbability) {
      pm.f_con = 0.0;
      pm.degenerate = true;
      ++report.degenerate_pairs;
    } else {
      pm.f_con = std::norm(overlap) / p;
    }
    report.f_unc += pm.f_unc;
    report.p_cb += pm.p_cb;
    report.f_con += pm.f_con;
    report.per_pair.push_back(pm);
  }
  const double count = static_cast<double>(set.pairs.size());
  report.f_unc /= count;
  report.p_cb /= count;
  report.f_con /= count;
  return report;
}

std::vector<StageProfile> QPNNInstance::occupation_profile(
    const QuantumState& input) {
  if (!compatible(input.basis, basis_))
    throw std::invalid_argument("input state uses a different basis");
  const int m = basis_->modes();
  const int n = basis_->photons();

  const auto profile_of = [&](const std::string& label, const Vector& amps) {
    StageProfile sp;
    sp.label = label;
    sp.occupation = Eigen::MatrixXd::Zero(m, n + 1);
    for (int i = 0; i < basis_->size(); ++i) {
      const double w = std::norm(amps(i));
      const FockState& st = basis_->state(i);
      for (int j = 0; j < m; ++j) sp.occupation(j, st[j]) += w;
    }
    sp.lost_norm = 1.0 - amps.squaredNorm();
    return sp;
  };

  std::vector<StageProfile> stages;
  Vector amps = input.amplitudes;
  stages.push_back(profile_of("input", amps));
  for (int i = 0; i < layers(); ++i) {
    if (dirty_) rebuild();
    amps = layer_fock_[i] * amps;
    stages.push_back(profile_of("mesh " + std::to_string(i + 1), amps));
    if (i + 1 < layers()) {
      amps = kerr_.asDiagonal() * amps;
      stages.push_back(profile_of("kerr " + std::to_string(i + 1), amps));
    }
  }
  return stages;
}

double set_fidelity(const MetricsReport& report, bool conditional) {
  return conditional ? report.f_con : report.f_unc;
}

}  // namespace qpnn
