#pragma once

#include <complex>
#include <memory>
#include <vector>

#include <Eigen/Dense>

namespace qpnn {

using Complex = std::complex<double>;
using Matrix = Eigen::MatrixXcd;
using Vector = Eigen::VectorXcd;

// Occupation numbers per spatial mode, e.g. {1,0,1,0} for one photon in
// modes 0 and 2.
using FockState = std::vector<int>;

// Enumeration of all n-photon states on m modes, ordered descending
// lexicographically so |n,0,...,0> comes first and |0,...,0,n> last. The
// ordering is the serialization convention: every vector and matrix indexed
// by Fock states uses it.
class FockBasis {
 public:
  FockBasis(int photons, int modes);

  static std::shared_ptr<const FockBasis> make(int photons, int modes) {
    return std::make_shared<const FockBasis>(photons, modes);
  }

  int photons() const { return photons_; }
  int modes() const { return modes_; }
  int size() const { return static_cast<int>(states_.size()); }

  const FockState& state(int idx) const { return states_[idx]; }
  const std::vector<FockState>& states() const { return states_; }

  // Index of a state in this basis; throws if the occupation list has the
  // wrong length or photon total.
  int index_of(const FockState& s) const;

  // sqrt(prod_j s_j!) for the state at idx
  double normalization(int idx) const { return norms_[idx]; }

  // Mode index j repeated s_j times, always of length photons(). These are
  // the row/column selectors for the permanent submatrices.
  const std::vector<int>& repeated_modes(int idx) const {
    return repeats_[idx];
  }

 private:
  int photons_;
  int modes_;
  std::vector<FockState> states_;
  std::vector<double> norms_;
  std::vector<std::vector<int>> repeats_;
};

using BasisPtr = std::shared_ptr<const FockBasis>;

// Permanent of a square complex matrix. Direct expansion for tiny inputs,
// Ryser's formula with Gray-code subset updates above that, so the cost is
// O(2^k k) instead of O(k! k).
Complex permanent(const Matrix& m);

// Lift of an m-mode transformation U to the n-photon basis:
//   <S| lift(U) |T> = Per(U_{S,T}) / sqrt(prod_i s_i! prod_j t_j!)
// where U_{S,T} repeats column j t_j times and row i s_i times. For a
// single photon this is U itself.
Matrix multi_photon_transform(const Matrix& u, const FockBasis& basis);

// Same computation with reusable scratch buffers for hot loops.
class MultiPhotonTransformer {
 public:
  explicit MultiPhotonTransformer(BasisPtr basis);

  void apply(const Matrix& u, Matrix& out);
  const FockBasis& basis() const { return *basis_; }

 private:
  BasisPtr basis_;
  Matrix cols_;  // columns of U repeated per target state
  Matrix sub_;   // rows of cols_ repeated per source state
};

// State vector over a Fock basis. Norms below one are meaningful: they
// encode amplitude that leaked out of the tracked photon-number sector.
struct QuantumState {
  BasisPtr basis;
  Vector amplitudes;

  double squared_norm() const { return amplitudes.squaredNorm(); }

  static QuantumState basis_state(BasisPtr basis, const FockState& s);
  static QuantumState from_amplitudes(BasisPtr basis, Vector amps);
};

}  // namespace qpnn
