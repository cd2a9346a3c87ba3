#include <doctest.h>

#include <algorithm>
#include <complex>
#include <numeric>
#include <vector>

#include "qpnn/fock.hpp"
#include "qpnn/rng.hpp"

using namespace qpnn;

namespace {

// reference permanent: explicit sum over permutations, fine up to k = 5
Complex permanent_by_permutations(const Matrix& m) {
  const int k = static_cast<int>(m.rows());
  std::vector<int> perm(k);
  std::iota(perm.begin(), perm.end(), 0);
  Complex total(0.0, 0.0);
  do {
    Complex prod(1.0, 0.0);
    for (int i = 0; i < k; ++i) prod *= m(i, perm[i]);
    total += prod;
  } while (std::next_permutation(perm.begin(), perm.end()));
  return total;
}

Matrix random_complex(int k, std::uint64_t seed) {
  Rng rng(seed);
  Matrix m(k, k);
  for (int i = 0; i < k; ++i)
    for (int j = 0; j < k; ++j)
      m(i, j) = Complex(rng.normal(0.0, 1.0), rng.normal(0.0, 1.0));
  return m;
}

Matrix random_unitary(int k, std::uint64_t seed) {
  const Eigen::HouseholderQR<Matrix> qr(random_complex(k, seed));
  return qr.householderQ() * Matrix::Identity(k, k);
}

}  // namespace

TEST_SUITE("fock") {

TEST_CASE("two photons on four modes enumerate in descending order") {
  const auto basis = FockBasis::make(2, 4);
  REQUIRE(basis->size() == 10);
  const std::vector<FockState> expected = {
      {2, 0, 0, 0}, {1, 1, 0, 0}, {1, 0, 1, 0}, {1, 0, 0, 1}, {0, 2, 0, 0},
      {0, 1, 1, 0}, {0, 1, 0, 1}, {0, 0, 2, 0}, {0, 0, 1, 1}, {0, 0, 0, 2}};
  for (int i = 0; i < 10; ++i) CHECK(basis->state(i) == expected[i]);
}

TEST_CASE("basis sizes match the stars and bars count") {
  CHECK(FockBasis::make(1, 4)->size() == 4);
  CHECK(FockBasis::make(2, 4)->size() == 10);
  CHECK(FockBasis::make(3, 6)->size() == 56);
  CHECK(FockBasis::make(2, 6)->size() == 21);
}

TEST_CASE("index_of inverts enumeration and validates input") {
  const auto basis = FockBasis::make(3, 6);
  for (int i = 0; i < basis->size(); ++i)
    CHECK(basis->index_of(basis->state(i)) == i);
  CHECK_THROWS_AS(basis->index_of({3, 0, 0}), std::invalid_argument);
  CHECK_THROWS_AS(basis->index_of({1, 1, 0, 0, 0, 0}), std::invalid_argument);
  CHECK_THROWS_AS(basis->index_of({4, -1, 0, 0, 0, 0}), std::invalid_argument);
}

TEST_CASE("normalization and mode repeats") {
  const auto basis = FockBasis::make(2, 4);
  CHECK(basis->normalization(basis->index_of({2, 0, 0, 0})) ==
        doctest::Approx(std::sqrt(2.0)));
  CHECK(basis->normalization(basis->index_of({1, 1, 0, 0})) ==
        doctest::Approx(1.0));
  CHECK(basis->repeated_modes(basis->index_of({2, 0, 0, 0})) ==
        std::vector<int>{0, 0});
  CHECK(basis->repeated_modes(basis->index_of({0, 1, 0, 1})) ==
        std::vector<int>{1, 3});
}

TEST_CASE("degenerate basis arguments are rejected") {
  CHECK_THROWS_AS(FockBasis(0, 4), std::invalid_argument);
  CHECK_THROWS_AS(FockBasis(2, 0), std::invalid_argument);
}

TEST_CASE("permanent on small fixed matrices") {
  Matrix m2(2, 2);
  m2 << 1.0, 2.0, 3.0, 4.0;
  CHECK(permanent(m2).real() == doctest::Approx(10.0));
  CHECK(permanent(Matrix::Ones(3, 3)).real() == doctest::Approx(6.0));
  CHECK(permanent(Matrix::Identity(5, 5)).real() == doctest::Approx(1.0));
  Matrix m1(1, 1);
  m1 << Complex(0.0, 2.0);
  CHECK(permanent(m1) == Complex(0.0, 2.0));
  CHECK_THROWS_AS(permanent(Matrix::Ones(2, 3)), std::invalid_argument);
}

TEST_CASE("permanent agrees with the permutation sum on random input") {
  for (int k = 2; k <= 5; ++k) {
    const Matrix m = random_complex(k, 1000 + k);
    const Complex expected = permanent_by_permutations(m);
    CHECK(std::abs(permanent(m) - expected) <= 1e-10 * std::abs(expected));
  }
}

TEST_CASE("two photons entering a balanced coupler never split up") {
  // Hong-Ou-Mandel: the coincidence amplitude cancels exactly
  Matrix u(2, 2);
  const double r = std::sqrt(0.5);
  u << Complex(r, 0), Complex(0, r), Complex(0, r), Complex(r, 0);
  const auto basis = FockBasis::make(2, 2);
  const Matrix phi = multi_photon_transform(u, *basis);
  const int in = basis->index_of({1, 1});
  CHECK(std::abs(phi(in, in)) < 1e-12);
  // both photons bunch into one mode with probability 1/2 each
  CHECK(std::norm(phi(basis->index_of({2, 0}), in)) == doctest::Approx(0.5));
  CHECK(std::norm(phi(basis->index_of({0, 2}), in)) == doctest::Approx(0.5));
}

TEST_CASE("single photon lift is the mode transformation itself") {
  const auto basis = FockBasis::make(1, 4);
  const Matrix u = random_unitary(4, 7);
  CHECK((multi_photon_transform(u, *basis) - u).cwiseAbs().maxCoeff() == 0.0);
}

TEST_CASE("lift of a unitary is unitary") {
  const auto basis = FockBasis::make(2, 4);
  const Matrix u = random_unitary(4, 21);
  const Matrix phi = multi_photon_transform(u, *basis);
  const Matrix gram = phi.adjoint() * phi;
  CHECK((gram - Matrix::Identity(basis->size(), basis->size()))
            .cwiseAbs()
            .maxCoeff() < 1e-10);
}

TEST_CASE("lift respects composition") {
  const auto basis = FockBasis::make(2, 4);
  const Matrix u = random_unitary(4, 33);
  const Matrix v = random_unitary(4, 34);
  const Matrix lhs = multi_photon_transform(u * v, *basis);
  const Matrix rhs = multi_photon_transform(u, *basis) *
                     multi_photon_transform(v, *basis);
  CHECK((lhs - rhs).cwiseAbs().maxCoeff() < 1e-10);
}

TEST_CASE("lift of a lossy transformation contracts state norm") {
  const auto basis = FockBasis::make(2, 4);
  const Matrix u = 0.9 * random_unitary(4, 55);
  const Matrix phi = multi_photon_transform(u, *basis);
  Rng rng(99);
  Vector psi(basis->size());
  for (int i = 0; i < basis->size(); ++i)
    psi(i) = Complex(rng.normal(0, 1), rng.normal(0, 1));
  psi.normalize();
  CHECK((phi * psi).norm() <= 1.0 + 1e-12);
  // two photons attenuate as the fourth power of the amplitude scale
  CHECK((phi * psi).norm() == doctest::Approx(std::pow(0.9, 2)).epsilon(1e-9));
}

TEST_CASE("transformer workspace reuse matches the one-shot call") {
  const auto basis = FockBasis::make(3, 6);
  MultiPhotonTransformer tf(basis);
  const Matrix u = random_unitary(6, 11);
  const Matrix v = random_unitary(6, 12);
  Matrix out_u, out_v;
  tf.apply(u, out_u);
  tf.apply(v, out_v);
  CHECK((out_u - multi_photon_transform(u, *basis)).cwiseAbs().maxCoeff() <
        1e-14);
  CHECK((out_v - multi_photon_transform(v, *basis)).cwiseAbs().maxCoeff() <
        1e-14);
}

TEST_CASE("quantum state construction checks dimensions and norm") {
  const auto basis = FockBasis::make(2, 4);
  const QuantumState s = QuantumState::basis_state(basis, {1, 0, 1, 0});
  CHECK(s.squared_norm() == doctest::Approx(1.0));
  CHECK(std::abs(s.amplitudes(2) - Complex(1.0, 0.0)) < 1e-15);
  CHECK_THROWS_AS(QuantumState::from_amplitudes(basis, Vector::Ones(3)),
                  std::invalid_argument);
  CHECK_THROWS_AS(QuantumState::from_amplitudes(basis, 2.0 * Vector::Ones(10)),
                  std::invalid_argument);
}

}  // TEST_SUITE
