#pragma once

#include <string>

#include "qpnn/engine.hpp"
#include "qpnn/trainer.hpp"

namespace qpnn {

// Bell state analysis: two photons on four modes as two dual-rail qubits.
// The four Bell states map to the four computational outcomes
//   phi+ -> |00>, psi+ -> |01>, phi- -> |10>, psi- -> |11>.
TrainingSet bsa_training_set();

// GHZ generation: three photons on six modes, |000> to the equal
// superposition (|000> + |111>)/sqrt(2).
TrainingSet ghz_training_set();

// training set for a task name ("bsa" or "ghz")
TrainingSet training_set_for(const std::string& task);

// network dimensions and qubit layout implied by a task name
NetworkArch arch_for(const std::string& task, int layers, double alpha_wg,
                     double varphi);

// Unconditional Bell analysis fidelity of the fixed two-qubit circuit
// built from a Fredkin gate sandwiched between Hadamards, as a function of
// the Kerr phase realizing the controlled swap: (5 - 3 cos varphi) / 8.
// Reaches 1 at varphi = pi and 1/4 with the nonlinearity off.
double fredkin_bsa_fidelity(double varphi);

// probability that n identical network nodes in series all succeed
double series_success_rate(double fidelity, int nodes);

// best possible unconditional Bell analysis success with linear optics only
double linear_optical_bound();

}  // namespace qpnn
