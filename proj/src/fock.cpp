#include "qpnn/fock.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstdint>
#include <functional>
#include <stdexcept>

namespace qpnn {
namespace {

void enumerate(int remaining, int mode, int modes, FockState& scratch,
               std::vector<FockState>& out) {
  if (mode == modes - 1) {
    scratch[mode] = remaining;
    out.push_back(scratch);
    return;
  }
  for (int k = remaining; k >= 0; --k) {
    scratch[mode] = k;
    enumerate(remaining - k, mode + 1, modes, scratch, out);
  }
}

double factorial(int k) {
  double f = 1.0;
  for (int i = 2; i <= k; ++i) f *= i;
  return f;
}

}  // namespace

FockBasis::FockBasis(int photons, int modes)
    : photons_(photons), modes_(modes) {
  if (photons < 1) throw std::invalid_argument("basis needs at least one photon");
  if (modes < 1) throw std::invalid_argument("basis needs at least one mode");
  FockState scratch(modes, 0);
  enumerate(photons, 0, modes, scratch, states_);

  norms_.reserve(states_.size());
  repeats_.reserve(states_.size());
  for (const auto& s : states_) {
    double prod = 1.0;
    std::vector<int> rep;
    rep.reserve(photons);
    for (int j = 0; j < modes; ++j) {
      prod *= factorial(s[j]);
      for (int k = 0; k < s[j]; ++k) rep.push_back(j);
    }
    norms_.push_back(std::sqrt(prod));
    repeats_.push_back(std::move(rep));
  }
}

int FockBasis::index_of(const FockState& s) const {
  if (static_cast<int>(s.size()) != modes_)
    throw std::invalid_argument("occupation list has wrong number of modes");
  int total = 0;
  for (const int k : s) {
    if (k < 0) throw std::invalid_argument("negative occupation number");
    total += k;
  }
  if (total != photons_)
    throw std::invalid_argument("occupation list has wrong photon total");
  // states_ is sorted descending, so search with the reversed comparator
  const auto it = std::lower_bound(states_.begin(), states_.end(), s,
                                   std::greater<FockState>());
  return static_cast<int>(it - states_.begin());
}

Complex permanent(const Matrix& m) {
  if (m.rows() != m.cols())
    throw std::invalid_argument("permanent needs a square matrix");
  const int k = static_cast<int>(m.rows());
  if (k == 0) return Complex(1.0, 0.0);
  if (k == 1) return m(0, 0);
  if (k == 2) return m(0, 0) * m(1, 1) + m(0, 1) * m(1, 0);
  if (k == 3)
    return m(0, 0) * (m(1, 1) * m(2, 2) + m(1, 2) * m(2, 1)) +
           m(0, 1) * (m(1, 0) * m(2, 2) + m(1, 2) * m(2, 0)) +
           m(0, 2) * (m(1, 0) * m(2, 1) + m(1, 1) * m(2, 0));

  // Ryser with Gray-code ordering: each step toggles one column in the
  // running row sums, so the inner work per subset is O(k).
  Vector rowsum = Vector::Zero(k);
  Complex total(0.0, 0.0);
  std::uint64_t prev = 0;
  const std::uint64_t count = std::uint64_t(1) << k;
  for (std::uint64_t idx = 1; idx < count; ++idx) {
    const std::uint64_t gray = idx ^ (idx >> 1);
    const std::uint64_t diff = gray ^ prev;
    const int j = std::countr_zero(diff);
    if (gray & diff)
      rowsum += m.col(j);
    else
      rowsum -= m.col(j);
    prev = gray;
    Complex prod(1.0, 0.0);
    for (int i = 0; i < k; ++i) prod *= rowsum(i);
    if (std::popcount(gray) & 1)
      total -= prod;
    else
      total += prod;
  }
  return (k & 1) ? -total : total;
}

MultiPhotonTransformer::MultiPhotonTransformer(BasisPtr basis)
    : basis_(std::move(basis)),
      cols_(basis_->modes(), basis_->photons()),
      sub_(basis_->photons(), basis_->photons()) {}

void MultiPhotonTransformer::apply(const Matrix& u, Matrix& out) {
  const FockBasis& b = *basis_;
  const int mm = b.modes();
  if (u.rows() != mm || u.cols() != mm)
    throw std::invalid_argument("mode transformation has wrong dimension");
  const int nn = b.size();
  const int np = b.photons();
  if (np == 1) {
    out = u;
    return;
  }
  out.resize(nn, nn);
  for (int t = 0; t < nn; ++t) {
    const auto& tc = b.repeated_modes(t);
    for (int c = 0; c < np; ++c) cols_.col(c) = u.col(tc[c]);
    for (int s = 0; s < nn; ++s) {
      const auto& sr = b.repeated_modes(s);
      for (int r = 0; r < np; ++r)
        for (int c = 0; c < np; ++c) sub_(r, c) = cols_(sr[r], c);
      out(s, t) = permanent(sub_) / (b.normalization(s) * b.normalization(t));
    }
  }
}

Matrix multi_photon_transform(const Matrix& u, const FockBasis& basis) {
  // non-owning alias; the caller keeps the basis alive for the call
  BasisPtr alias(&basis, [](const FockBasis*) {});
  MultiPhotonTransformer tf(std::move(alias));
  Matrix out;
  tf.apply(u, out);
  return out;
}

QuantumState QuantumState::basis_state(BasisPtr basis, const FockState& s) {
  Vector amps = Vector::Zero(basis->size());
  amps(basis->index_of(s)) = Complex(1.0, 0.0);
  return {std::move(basis), std::move(amps)};
}

QuantumState QuantumState::from_amplitudes(BasisPtr basis, Vector amps) {
  if (amps.size() != basis->size())
    throw std::invalid_argument("amplitude vector has wrong dimension");
  if (amps.squaredNorm() > 1.0 + 1e-9)
    throw std::invalid_argument("state norm exceeds one");
  return {std::move(basis), std::move(amps)};
}

}  // namespace qpnn
