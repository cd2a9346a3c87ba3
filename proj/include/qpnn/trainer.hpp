#pragma once

#include <cstdint>

#include "qpnn/engine.hpp"
#include "qpnn/optim.hpp"

namespace qpnn {

enum class ObjectiveKind { unconditional, conditional };

// Everything that defines a network build: size, depth, nonlinear phase
// per Kerr stage, the dual-rail qubit layout, and the fabrication
// distributions (whose alpha_wg_db_cm carries the loss level).
struct NetworkArch {
  int photons = 0;
  int modes = 0;
  int layers = 1;
  double varphi = 0.0;
  std::vector<std::pair<int, int>> qubit_pairing;
  ImperfectionModel imperfections;
};

// lossless, perfect couplers
QPNNInstance make_ideal_instance(const NetworkArch& arch);

// one fabrication draw, fully determined by the seed
QPNNInstance make_sampled_instance(const NetworkArch& arch,
                                   std::uint64_t seed);

// every element at the mean loss, perfect couplers
QPNNInstance make_uniform_loss_instance(const NetworkArch& arch);

struct TrainOutcome {
  Eigen::VectorXd params;
  double infidelity = 1.0;  // final objective value
  MetricsReport metrics;    // evaluated at the final parameters
  std::vector<double> trace;
  int evaluations = 0;
  StopReason reason = StopReason::converged;
};

// One optimizer run on the given network, starting from uniformly random
// phases drawn from init_seed. The objective is one minus the mean
// fidelity of the chosen kind over the training set.
TrainOutcome train_instance(QPNNInstance& instance, const TrainingSet& set,
                            ObjectiveKind kind, const OptimizerConfig& config,
                            std::uint64_t init_seed);

// Repeated runs from derived seeds, keeping the best. Used wherever a
// single ideal network must be trained well rather than sampled. Stops
// early once the best infidelity reaches good_enough; individual runs
// regularly stall in local optima, so reference solutions should allow
// enough restarts to clear the gate.
TrainOutcome train_best_of(QPNNInstance& instance, const TrainingSet& set,
                           ObjectiveKind kind, const OptimizerConfig& config,
                           std::uint64_t seed, int restarts,
                           double good_enough = 0.0);

// Training with the imperfections in the loop: sample one fabrication
// realization and optimize the fidelity it actually delivers.
TrainOutcome train_in_situ(const NetworkArch& arch, const TrainingSet& set,
                           ObjectiveKind kind, const OptimizerConfig& config,
                           std::uint64_t seed);

// Training blind to fabrication: optimize an ideal network with full
// nonlinearity (varphi = pi), then program the fixed phases onto sampled
// imperfect networks running at the arch's varphi.
struct OfflineOutcome {
  TrainOutcome ideal;
  std::vector<MetricsReport> realizations;
};
OfflineOutcome train_offline(const NetworkArch& arch, const TrainingSet& set,
                             ObjectiveKind kind, const OptimizerConfig& config,
                             std::uint64_t seed, int n_realizations,
                             int restarts = 20);

// Performance ceiling from propagation loss alone: train the ideal
// network at varphi = pi, then run it with uniform loss and perfect
// couplers. Equals the ideal fidelity times T^(n*L) with T the power
// transmission of one mesh layer.
struct LossLimitOutcome {
  double ideal_fidelity = 0.0;
  double layer_transmission = 1.0;  // T
  double limit = 0.0;
};
LossLimitOutcome loss_limit(const NetworkArch& arch, const TrainingSet& set,
                            const OptimizerConfig& config, std::uint64_t seed,
                            int restarts = 20);

// power transmission of one full mesh layer at the model's mean loss
double layer_transmission(const ImperfectionModel& model, int modes);

}  // namespace qpnn
