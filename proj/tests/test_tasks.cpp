#include <doctest.h>

#include <cmath>

#include "qpnn/tasks.hpp"

using namespace qpnn;

namespace {
constexpr double kPi = 3.14159265358979323846;
}

TEST_SUITE("tasks") {

TEST_CASE("Bell analysis set lists the four Bell states in order") {
  const TrainingSet set = bsa_training_set();
  set.validate();
  REQUIRE(set.pairs.size() == 4);
  CHECK(set.basis->photons() == 2);
  CHECK(set.basis->modes() == 4);
  CHECK(set.labels == std::vector<std::string>{"phi+", "psi+", "phi-", "psi-"});

  const int i1010 = set.basis->index_of({1, 0, 1, 0});
  const int i0101 = set.basis->index_of({0, 1, 0, 1});
  const int i1001 = set.basis->index_of({1, 0, 0, 1});
  const int i0110 = set.basis->index_of({0, 1, 1, 0});
  const double r = 1.0 / std::sqrt(2.0);

  // phi+ = (|00> + |11>)/sqrt2 in dual rail
  CHECK(std::abs(set.pairs[0].input.amplitudes(i1010) - Complex(r, 0)) < 1e-15);
  CHECK(std::abs(set.pairs[0].input.amplitudes(i0101) - Complex(r, 0)) < 1e-15);
  // phi- flips the sign on |11>
  CHECK(std::abs(set.pairs[2].input.amplitudes(i0101) + Complex(r, 0)) < 1e-15);
  // psi states live on the cross terms
  CHECK(std::abs(set.pairs[1].input.amplitudes(i1001) - Complex(r, 0)) < 1e-15);
  CHECK(std::abs(set.pairs[1].input.amplitudes(i0110) - Complex(r, 0)) < 1e-15);

  // targets are the four computational outcomes in bitstring order
  CHECK(std::abs(set.pairs[0].target.amplitudes(i1010) - Complex(1, 0)) <
        1e-15);
  CHECK(std::abs(set.pairs[1].target.amplitudes(i1001) - Complex(1, 0)) <
        1e-15);
  CHECK(std::abs(set.pairs[2].target.amplitudes(i0110) - Complex(1, 0)) <
        1e-15);
  CHECK(std::abs(set.pairs[3].target.amplitudes(i0101) - Complex(1, 0)) <
        1e-15);

  // Bell inputs are orthonormal
  for (std::size_t a = 0; a < 4; ++a)
    for (std::size_t b = 0; b < 4; ++b) {
      const Complex olap =
          set.pairs[a].input.amplitudes.dot(set.pairs[b].input.amplitudes);
      CHECK(std::abs(olap - (a == b ? Complex(1, 0) : Complex(0, 0))) < 1e-14);
    }
}

TEST_CASE("GHZ set prepares the balanced superposition target") {
  const TrainingSet set = ghz_training_set();
  set.validate();
  REQUIRE(set.pairs.size() == 1);
  CHECK(set.basis->photons() == 3);
  CHECK(set.basis->modes() == 6);
  const double r = 1.0 / std::sqrt(2.0);
  const int i000 = set.basis->index_of({1, 0, 1, 0, 1, 0});
  const int i111 = set.basis->index_of({0, 1, 0, 1, 0, 1});
  CHECK(std::abs(set.pairs[0].input.amplitudes(i000) - Complex(1, 0)) < 1e-15);
  CHECK(std::abs(set.pairs[0].target.amplitudes(i000) - Complex(r, 0)) <
        1e-15);
  CHECK(std::abs(set.pairs[0].target.amplitudes(i111) - Complex(r, 0)) <
        1e-15);
  CHECK(set.pairs[0].target.squared_norm() == doctest::Approx(1.0));
}

TEST_CASE("task lookup by name") {
  CHECK(training_set_for("bsa").pairs.size() == 4);
  CHECK(training_set_for("ghz").pairs.size() == 1);
  CHECK_THROWS_AS(training_set_for("qft"), std::invalid_argument);
  const NetworkArch arch = arch_for("ghz", 3, 0.2, 1.5);
  CHECK(arch.photons == 3);
  CHECK(arch.modes == 6);
  CHECK(arch.layers == 3);
  CHECK(arch.varphi == 1.5);
  CHECK(arch.imperfections.alpha_wg_db_cm == 0.2);
  CHECK(arch.qubit_pairing.size() == 3);
}

TEST_CASE("fixed-gate reference curve has the known endpoints and shape") {
  CHECK(fredkin_bsa_fidelity(0.0) == doctest::Approx(0.25).epsilon(1e-15));
  CHECK(fredkin_bsa_fidelity(kPi) == doctest::Approx(1.0).epsilon(1e-15));
  CHECK(fredkin_bsa_fidelity(kPi / 2) ==
        doctest::Approx(0.625).epsilon(1e-15));
  // strictly increasing on [0, pi], symmetric about pi
  double prev = -1.0;
  for (int i = 0; i <= 100; ++i) {
    const double v = fredkin_bsa_fidelity(kPi * i / 100);
    CHECK(v > prev);
    prev = v;
  }
  CHECK(fredkin_bsa_fidelity(1.0) ==
        doctest::Approx(fredkin_bsa_fidelity(2 * kPi - 1.0)).epsilon(1e-15));
}

TEST_CASE("series success rates and the linear-optical reference") {
  CHECK(linear_optical_bound() == 0.5);
  CHECK(series_success_rate(0.5, 10) ==
        doctest::Approx(0.0009765625).epsilon(1e-15));
  CHECK(series_success_rate(0.891, 10) ==
        doctest::Approx(0.3153385311684712).epsilon(1e-12));
  CHECK(series_success_rate(0.951, 10) ==
        doctest::Approx(0.6050693712100728).epsilon(1e-12));
  CHECK(series_success_rate(1.0, 3) == 1.0);
  CHECK(series_success_rate(0.7, 1) == doctest::Approx(0.7));
  CHECK_THROWS_AS(series_success_rate(1.1, 2), std::invalid_argument);
  CHECK_THROWS_AS(series_success_rate(0.5, 0), std::invalid_argument);
}

}  // TEST_SUITE
