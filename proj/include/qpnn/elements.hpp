#pragma once

#include <memory>
#include <vector>

#include "qpnn/fock.hpp"
#include "qpnn/rng.hpp"

namespace qpnn {

inline constexpr double kTwoPi = 6.283185307179586476925286766559;

// map any angle into [0, 2*pi)
double wrap_phase(double phase);

// Tunable phases of one interferometer unit: phi on the top input arm,
// theta split across the internal arms.
struct MZIParams {
  double phi = 0.0;
  double theta = 0.0;
};

// Fabrication state of one interferometer unit: directional coupler
// transmissions (0.5 is the ideal 50:50 point) and the fractional power
// loss of the whole unit.
struct MZIImperfection {
  double t1 = 0.5;
  double t2 = 0.5;
  double alpha = 0.0;
};

// Distributions and geometry used when drawing fabrication imperfections.
// Lengths are in micrometers, propagation loss in dB/cm.
struct ImperfectionModel {
  double alpha_wg_db_cm = 0.0;     // mean propagation loss
  double alpha_wg_rel_std = 0.0667;
  double coupler_mean = 0.5;
  double coupler_std = 0.0508;
  double mzi_length_um = 286.684;
  double phase_shifter_length_um = 50.0;
};

// Fractional power loss of an element with the given propagation loss and
// physical length: 1 - 10^(-alpha_wg * length / 10).
double element_loss(double alpha_wg_db_cm, double length_cm);

// 2x2 directional coupler with transmission t; sign picks the phase of the
// cross coupling (+1 or -1).
Eigen::Matrix2cd coupler(double t, double sign);

// Interferometer unit with perfect 50:50 couplers and no loss:
//   e^{i theta} [ e^{i phi} cos th, -sin th; e^{i phi} sin th, cos th ]
Eigen::Matrix2cd ideal_mzi(const MZIParams& p);

// Interferometer unit with imperfect couplers and uniform loss:
//   sqrt(1-alpha) * C(t2,-) * diag(e^{2 i theta}, 1) * C(t1,+) * diag(e^{i phi}, 1)
// Reduces to ideal_mzi at t1 = t2 = 0.5, alpha = 0.
Eigen::Matrix2cd realistic_mzi(const MZIParams& p, const MZIImperfection& imp);

// Geometry of the rectangular mesh on m modes: m columns where column c
// couples mode pairs (p, p+1) with p congruent to c mod 2, for a total of
// m(m-1)/2 units. Modes not covered by a unit in a column pass through a
// straight waveguide of the same length.
struct ClementsPlan {
  struct Slot {
    int column;
    int top_mode;
  };

  int modes = 0;
  std::vector<Slot> mzis;                    // column-major order
  std::vector<std::vector<int>> flat_modes;  // per column

  static ClementsPlan make(int modes);
  int mzi_count() const { return static_cast<int>(mzis.size()); }
};

// One fractional loss per lossy element of a mesh: each interferometer
// unit, each straight section, and each output phase shifter.
struct MeshImperfections {
  std::vector<MZIImperfection> mzi;             // per plan slot
  std::vector<std::vector<double>> flat_alpha;  // [column][slot]
  std::vector<double> output_alpha;             // per mode

  // perfect couplers, zero loss
  static MeshImperfections none(const ClementsPlan& plan);

  // every element gets the model's mean loss and perfect couplers
  static MeshImperfections uniform(const ClementsPlan& plan,
                                   const ImperfectionModel& model);
};

// Draw one fabrication realization. The sampling order is fixed so a seed
// fully determines the mesh: for each unit in plan order draw t1, t2, then
// its propagation loss; then every straight section column by column; then
// the output phase shifters by mode.
MeshImperfections sample_imperfections(const ImperfectionModel& model,
                                       const ClementsPlan& plan, Rng& rng);

// Tunable and fabrication state of one full mesh plus its output phase
// screen.
struct MeshLayer {
  std::shared_ptr<const ClementsPlan> plan;
  std::vector<MZIParams> params;        // per plan slot
  std::vector<double> output_phases;    // per mode
  MeshImperfections imperfections;
};

// m x m transfer matrix of the mesh: columns applied left to right, then
// the output phase screen. Sub-unitary whenever any loss is present.
Matrix build_mesh(const MeshLayer& layer);

// Diagonal of the single-site Kerr interaction on the n-photon basis:
// entry exp(i * varphi/2 * sum_j occ_j (occ_j - 1)) per state.
Vector kerr_phases(double varphi, const FockBasis& basis);

Matrix kerr_unitary(double varphi, const FockBasis& basis);

}  // namespace qpnn
