#pragma once

#include <string>
#include <utility>
#include <vector>

#include "qpnn/elements.hpp"
#include "qpnn/fock.hpp"

namespace qpnn {

struct TrainingPair {
  QuantumState input;
  QuantumState target;
};

// Input/target pairs over a common basis. Targets live in the span of the
// dual-rail computational basis defined by qubit_pairing: qubit q is the
// mode pair (first, second) at position q, photon in `first` meaning |0>.
struct TrainingSet {
  BasisPtr basis;
  std::vector<TrainingPair> pairs;
  std::vector<std::pair<int, int>> qubit_pairing;
  std::vector<std::string> labels;  // one short name per pair

  void validate() const;
};

// Indices of the dual-rail computational basis states, ordered by qubit
// bitstring value with the first pair as the most significant bit.
std::vector<int> computational_basis_indices(
    const FockBasis& basis, const std::vector<std::pair<int, int>>& pairing);

struct PairMetrics {
  double f_unc = 0.0;  // |<target|S|input>|^2
  double p_cb = 0.0;   // probability of landing in the computational basis
  double f_con = 0.0;  // fidelity conditioned on that event
  bool degenerate = false;  // p_cb vanished, f_con forced to zero
};

struct MetricsReport {
  std::vector<PairMetrics> per_pair;
  double f_unc = 0.0;  // means over pairs
  double p_cb = 0.0;
  double f_con = 0.0;
  int degenerate_pairs = 0;
};

// Occupation statistics of a state at one point in the network. Row j,
// column k holds the probability of finding k photons in mode j; the
// columns of a row sum to the surviving norm.
struct StageProfile {
  std::string label;
  Eigen::MatrixXd occupation;
  double lost_norm = 0.0;
};

// A full network: L mesh layers with a Kerr interaction of strength varphi
// between consecutive layers. Owns the tunable phases and one fabrication
// realization per layer; rebuilds its Fock-space transfer matrix lazily
// when parameters change.
class QPNNInstance {
 public:
  QPNNInstance(BasisPtr basis, int layers, double varphi,
               std::vector<std::pair<int, int>> qubit_pairing);

  int layers() const { return static_cast<int>(mesh_layers_.size()); }
  int modes() const { return basis_->modes(); }
  double varphi() const { return varphi_; }
  const FockBasis& basis() const { return *basis_; }
  BasisPtr basis_ptr() const { return basis_; }
  const std::vector<int>& cb_indices() const { return cb_indices_; }
  const std::vector<std::pair<int, int>>& qubit_pairing() const {
    return pairing_;
  }

  // phases per layer: (phi, theta) for each unit in plan order, then the
  // output phase screen
  int parameter_count() const;
  void set_parameters(const Eigen::VectorXd& params);  // wraps into [0, 2*pi)
  Eigen::VectorXd parameters() const;

  void set_varphi(double varphi);
  void set_imperfections(std::vector<MeshImperfections> per_layer);

  // Fock-space transfer matrix of the whole network
  const Matrix& transfer();

  QuantumState propagate(const QuantumState& input);
  MetricsReport metrics(const TrainingSet& set);

  // state statistics at the input and after every mesh and Kerr stage
  std::vector<StageProfile> occupation_profile(const QuantumState& input);

 private:
  void rebuild();

  BasisPtr basis_;
  std::shared_ptr<const ClementsPlan> plan_;
  std::vector<MeshLayer> mesh_layers_;
  double varphi_;
  std::vector<std::pair<int, int>> pairing_;
  std::vector<int> cb_indices_;

  MultiPhotonTransformer lift_;
  Vector kerr_;
  std::vector<Matrix> layer_fock_;  // lifted per-layer transfer
  Matrix transfer_;
  Matrix scratch_;
  bool dirty_ = true;
};

// Mean fidelity of the chosen kind over the training set; this is the
// quantity the trainer maximizes.
double set_fidelity(const MetricsReport& report, bool conditional);

}  // namespace qpnn
