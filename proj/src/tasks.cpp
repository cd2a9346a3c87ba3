#include "qpnn/tasks.hpp"

#include <cmath>
#include <stdexcept>

namespace qpnn {

namespace {
const double kInvSqrt2 = 1.0 / std::sqrt(2.0);

QuantumState superposition(const BasisPtr& basis, const FockState& a,
                           const FockState& b, double sign) {
  Vector amps = Vector::Zero(basis->size());
  amps(basis->index_of(a)) = kInvSqrt2;
  amps(basis->index_of(b)) = sign * kInvSqrt2;
  return QuantumState::from_amplitudes(basis, std::move(amps));
}
}  // namespace

TrainingSet bsa_training_set() {
  TrainingSet set;
  set.basis = FockBasis::make(2, 4);
  set.qubit_pairing = {{0, 1}, {2, 3}};
  set.labels = {"phi+", "psi+", "phi-", "psi-"};

  const FockState q00{1, 0, 1, 0};
  const FockState q01{1, 0, 0, 1};
  const FockState q10{0, 1, 1, 0};
  const FockState q11{0, 1, 0, 1};

  set.pairs.push_back({superposition(set.basis, q00, q11, +1.0),
                       QuantumState::basis_state(set.basis, q00)});
  set.pairs.push_back({superposition(set.basis, q01, q10, +1.0),
                       QuantumState::basis_state(set.basis, q01)});
  set.pairs.push_back({superposition(set.basis, q00, q11, -1.0),
                       QuantumState::basis_state(set.basis, q10)});
  set.pairs.push_back({superposition(set.basis, q01, q10, -1.0),
                       QuantumState::basis_state(set.basis, q11)});
  set.validate();
  return set;
}

TrainingSet ghz_training_set() {
  TrainingSet set;
  set.basis = FockBasis::make(3, 6);
  set.qubit_pairing = {{0, 1}, {2, 3}, {4, 5}};
  set.labels = {"ghz"};

  const FockState q000{1, 0, 1, 0, 1, 0};
  const FockState q111{0, 1, 0, 1, 0, 1};
  set.pairs.push_back({QuantumState::basis_state(set.basis, q000),
                       superposition(set.basis, q000, q111, +1.0)});
  set.validate();
  return set;
}

TrainingSet training_set_for(const std::string& task) {
  if (task == "bsa") return bsa_training_set();
  if (task == "ghz") return ghz_training_set();
  throw std::invalid_argument("unknown task: " + task);
}

NetworkArch arch_for(const std::string& task, int layers, double alpha_wg,
                     double varphi) {
  const TrainingSet set = training_set_for(task);
  NetworkArch arch;
  arch.photons = set.basis->photons();
  arch.modes = set.basis->modes();
  arch.layers = layers;
  arch.varphi = varphi;
  arch.qubit_pairing = set.qubit_pairing;
  arch.imperfections.alpha_wg_db_cm = alpha_wg;
  return arch;
}

double fredkin_bsa_fidelity(double varphi) {
  return (5.0 - 3.0 * std::cos(varphi)) / 8.0;
}

double series_success_rate(double fidelity, int nodes) {
  if (fidelity < 0.0 || fidelity > 1.0)
    throw std::invalid_argument("fidelity outside [0, 1]");
  if (nodes < 1) throw std::invalid_argument("need at least one node");
  return std::pow(fidelity, nodes);
}

double linear_optical_bound() { return 0.5; }

}  // namespace qpnn
