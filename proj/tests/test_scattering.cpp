#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "ptscatter/scattering.hpp"

using namespace ptscatter;
using C = std::complex<double>;
using K = WaveNumber<double>;
using Vec2 = Eigen::Matrix<C, 2, 1>;

TEST_CASE("identity scatters nothing") {
  const auto s = scattering_from_matrix(TransferMatrix<double>::identity(K(1.0)));
  CHECK(s.t == C(1, 0));
  CHECK(s.r_left == C(0, 0));
  CHECK(s.r_right == C(0, 0));
  CHECK(s.big_t == 1.0);
}

TEST_CASE("vanishing M22 is a pole") {
  const TransferMatrix<double> m(C(0, 0), C(1, 0), C(-1, 0), C(0, 0), K(1.0));
  CHECK_THROWS_AS(scattering_from_matrix(m), SpectralPole);
  const TransferMatrix<double> near(C(1e8, 0), C(1, 0), C(-1, 0), C(1e-15, 0), K(1.0));
  CHECK_THROWS_AS(scattering_from_matrix(near), SpectralPole);
}

TEST_CASE("amplitudes solve the two incidence problems") {
  const auto m = periodic_matrix(PeriodicSpec<double>(40.0, 3, 1.0), K(2.3));
  const auto s = scattering_from_matrix(m);
  // from the left: (1, r_l) -> (t, 0)
  const Vec2 left = m.matrix() * Vec2(C(1, 0), s.r_left);
  CHECK(std::abs(left(0) - s.t) <= 1e-13);
  CHECK(std::abs(left(1)) <= 1e-13);
  // from the right: (0, t) -> (r_r, 1)
  const Vec2 right = m.matrix() * Vec2(C(0, 0), s.t);
  CHECK(std::abs(right(0) - s.r_right) <= 1e-13);
  CHECK(std::abs(right(1) - 1.0) <= 1e-13);
}

TEST_CASE("real barrier conserves flux") {
  for (double k : {0.5, 2.0, 4.0})
    for (double v0 : {-5.0, 3.0, 10.0}) {
      const auto s = scattering_from_matrix(barrier_matrix(K(k), C(v0, 0), 0.5, 0.2));
      CHECK(s.big_t + s.big_r_left == doctest::Approx(1.0).epsilon(1e-12));
      CHECK(s.big_t + s.big_r_right == doctest::Approx(1.0).epsilon(1e-12));
    }
  const auto s = scattering_from_matrix(barrier_matrix(K(1.0), C(10, 0), 0.5));
  const double kappa = 3.0;
  CHECK(s.big_t == doctest::Approx(1.0 / (1.0 + 100.0 * std::sinh(kappa * 0.5) * std::sinh(kappa * 0.5) / 36.0))
                       .epsilon(1e-12));
}

TEST_CASE("PT-symmetric stacks obey |T - 1|^2 = R_l R_r") {
  for (double k : {0.5, 1.0, 3.0, 7.0})
    for (std::int64_t n : {1, 5, 50}) {
      const auto s = scattering_from_matrix(periodic_matrix(PeriodicSpec<double>(40.0, n, 1.0), K(k)));
      const double lhs = (s.big_t - 1) * (s.big_t - 1);
      CHECK(std::abs(lhs - s.big_r_left * s.big_r_right) <= 1e-10 * std::max(1.0, lhs));
    }
}

TEST_CASE("transmission surface ordering and values") {
  const std::vector<std::int64_t> ns = {10, 1000};
  const std::vector<double> ks = {1.0, 5.0, 9.0};
  const auto rows = transmission_surface(40.0, 1.0, ns, ks);
  REQUIRE(rows.size() == 6);
  for (std::size_t i = 0; i < rows.size(); ++i) {
    CHECK(rows[i].n == ns[i / 3]);
    CHECK(rows[i].k == ks[i % 3]);
  }
  const auto direct =
      scattering_from_matrix(compose_stack(build_periodic(PeriodicSpec<double>(40.0, 1000, 1.0)), K(5.0)));
  CHECK(rows[4].big_t == doctest::Approx(direct.big_t).epsilon(1e-9));
  CHECK(rows[4].big_r_left == doctest::Approx(direct.big_r_left).epsilon(1e-6));
  CHECK(rows[4].big_r_right == doctest::Approx(direct.big_r_right).epsilon(1e-6));
  CHECK(std::abs(rows[4].big_t - 1.0) <= 5e-4);
  for (const auto& r : rows) CHECK(r.absdet_err <= 1e-10);
}

TEST_CASE("vanishing V transmits fully") {
  const auto rows = transmission_surface(1e-12, 1.0, {1, 100, 10'000}, {0.5, 5.0, 20.0});
  for (const auto& r : rows) {
    CHECK(std::abs(r.big_t - 1.0) <= 1e-10);
    CHECK(r.big_r_left <= 1e-20);
    CHECK(r.big_r_right <= 1e-20);
  }
}
