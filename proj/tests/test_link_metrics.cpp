#include <doctest.h>

#include <complex>

#include "bdris/link_metrics.hpp"
#include "bdris/rng.hpp"
#include "bdris/units.hpp"
#include "test_support.hpp"

using namespace bdris;
using std::complex;

TEST_CASE("dbm/watt conversion") {
  CHECK(dbm_to_watt(30.0) == doctest::Approx(1.0));
  CHECK(dbm_to_watt(40.0) == doctest::Approx(10.0));
  CHECK(dbm_to_watt(50.0) == doctest::Approx(100.0));
  CHECK(watt_to_dbm(dbm_to_watt(17.0)) == doctest::Approx(17.0));
}

TEST_CASE("effective_gain identity routing picks the first entry") {
  RisState ris;
  ris.phi = Eigen::MatrixXcd::Identity(3, 3);
  ris.a = Eigen::VectorXcd::Zero(3);
  ris.a(0) = 1.0;
  Eigen::VectorXcd v(3);
  v << complex<double>(1.5, -0.5), complex<double>(0.0, 2.0), complex<double>(3.0, 0.0);
  CHECK(effective_gain(v, ris, GainMode::FeedVector) == doctest::Approx(std::norm(v(0))));
}

TEST_CASE("effective_gain 2x2 hand computation") {
  RisState ris;
  ris.phi = Eigen::MatrixXcd::Zero(2, 2);
  ris.phi(0, 1) = 1.0;
  ris.phi(1, 0) = 1.0;
  ris.a = Eigen::VectorXcd::Zero(2);
  ris.a(0) = 1.0;
  Eigen::VectorXcd v(2);
  v << complex<double>(1.0, 0.0), complex<double>(0.0, 1.0);
  CHECK(effective_gain(v, ris, GainMode::FeedVector) == doctest::Approx(1.0));
}

TEST_CASE("effective_gain paper-literal norm is the plain norm under any unitary") {
  RandomStream stream(7);
  const Eigen::VectorXcd v = test::random_cvector(6, stream);
  RisState ris;
  ris.a = uniform_feed(6);
  ris.phi = test::random_unitary(6, stream);
  const double g1 = effective_gain(v, ris, GainMode::PaperLiteralNorm);
  ris.phi = test::random_unitary(6, stream);
  const double g2 = effective_gain(v, ris, GainMode::PaperLiteralNorm);
  CHECK(std::abs(g1 - v.squaredNorm()) < 1e-9 * v.squaredNorm());
  CHECK(std::abs(g1 - g2) < 1e-9 * v.squaredNorm());
}

TEST_CASE("effective_gain feed-vector mode obeys the Cauchy-Schwarz bound") {
  RandomStream stream(8);
  for (int rep = 0; rep < 50; ++rep) {
    const Eigen::VectorXcd v = test::random_cvector(5, stream);
    RisState ris;
    ris.a = uniform_feed(5);
    ris.phi = test::random_unitary(5, stream);
    CHECK(effective_gain(v, ris, GainMode::FeedVector) <= v.squaredNorm() + 1e-9);
  }
}

TEST_CASE("effective_gain rejects a length mismatch") {
  RisState ris = RisState::bd_identity(3);
  CHECK_THROWS_AS(effective_gain(Eigen::VectorXcd::Ones(4), ris, GainMode::FeedVector),
                  std::invalid_argument);
}

TEST_CASE("sinr direct arithmetic") {
  LinkBudget budget;
  budget.sigma2 = 0.1;
  budget.q_p = 10.0;
  const complex<double> f(0.2, 0.0);  // |f|^2 Qp = 0.4
  CHECK(sinr(2.0, 1.0, f, budget) == doctest::Approx(4.0));
  CHECK(sinr(2.0, 0.0, f, budget) == 0.0);

  budget.sigma2 = 1.0;
  CHECK(sinr(1.0, 1.0, complex<double>(0.0, 0.0), budget) == doctest::Approx(1.0));
}

TEST_CASE("spectral_efficiency known values") {
  CHECK(spectral_efficiency(0.0) == 0.0);
  CHECK(spectral_efficiency(1.0) == doctest::Approx(1.0));
  CHECK(spectral_efficiency(4.0) == doctest::Approx(2.321928094887362).epsilon(1e-12));
}

TEST_CASE("spectral_efficiency is strictly increasing") {
  double prev = spectral_efficiency(0.0);
  for (int i = 1; i <= 1000; ++i) {
    const double cur = spectral_efficiency(i * 0.05);
    CHECK(cur > prev);
    prev = cur;
  }
}

TEST_CASE("pu_interference basics") {
  RisState ris = RisState::bd_identity(2);
  Eigen::VectorXcd g(2);
  g << complex<double>(1.0, 0.0), complex<double>(0.0, 0.0);

  CHECK(pu_interference(g, ris, GainMode::FeedVector, 0.0) == 0.0);

  // g routed orthogonally to the feed
  ris.a = Eigen::VectorXcd::Zero(2);
  ris.a(1) = 1.0;
  CHECK(pu_interference(g, ris, GainMode::FeedVector, 5.0) == doctest::Approx(0.0));

  ris = RisState::bd_identity(2);
  const double gain = effective_gain(g, ris, GainMode::FeedVector);
  CHECK(pu_interference(g, ris, GainMode::FeedVector, 1.0) == doctest::Approx(gain));
  // exact linearity in the power
  CHECK(pu_interference(g, ris, GainMode::FeedVector, 2.0) ==
        2.0 * pu_interference(g, ris, GainMode::FeedVector, 1.0));
}

TEST_CASE("RisState check accepts valid states and rejects invalid ones") {
  RisState bd = RisState::bd_identity(4);
  CHECK_NOTHROW(bd.check());

  bd.phi(0, 0) = 2.0;  // breaks unitarity
  CHECK_THROWS_AS(bd.check(), std::invalid_argument);

  RisState d;
  d.mode = RisMode::D;
  d.phi = Eigen::MatrixXcd::Identity(2, 2);
  d.a = uniform_feed(2);
  CHECK_NOTHROW(d.check());
  d.phi(0, 1) = 0.5;  // off-diagonal entry
  CHECK_THROWS_AS(d.check(), std::invalid_argument);

  RisState bad_feed = RisState::bd_identity(2);
  bad_feed.a *= 2.0;
  CHECK_THROWS_AS(bad_feed.check(), std::invalid_argument);
}

TEST_CASE("LinkBudget check") {
  LinkBudget ok;
  CHECK_NOTHROW(ok.check());
  LinkBudget bad = ok;
  bad.sigma2 = 0.0;
  CHECK_THROWS_AS(bad.check(), std::invalid_argument);
  bad = ok;
  bad.i_th = -1.0;
  CHECK_THROWS_AS(bad.check(), std::invalid_argument);
}
