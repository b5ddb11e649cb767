#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "reuler/gas.hpp"
#include "reuler/numeric.hpp"

using namespace reuler;

namespace {

const GasModel kAir{1.4, 1.0, 1.0, 1.0, 0.0};

// 5x5 flux Jacobians by central differences.
MatN<5> fd_flux_jacobian(Vec5 (*flux)(const State&, const GasModel&), const State& s,
                         const GasModel& g) {
  MatN<5> jac{};
  Vec5 base = s.as_array();
  for (int j = 0; j < 5; ++j) {
    double h = 1e-6 * std::max(1.0, std::abs(base[j]));
    Vec5 up = base, dn = base;
    up[j] += h;
    dn[j] -= h;
    Vec5 fu = flux(State::from_array(up), g);
    Vec5 fd = flux(State::from_array(dn), g);
    for (int i = 0; i < 5; ++i) jac[i][j] = (fu[i] - fd[i]) / (2.0 * h);
  }
  return jac;
}

}  // namespace

TEST_CASE("sound speed") {
  CHECK(sound_speed(1.0, 1.0, kAir) == doctest::Approx(std::sqrt(1.4)).epsilon(1e-14));
  CHECK(sound_speed(1.0 / 1.4, 1.0, kAir) == doctest::Approx(1.0).epsilon(1e-14));
  CHECK(sound_speed(2.0, 0.5, kAir) == doctest::Approx(std::sqrt(5.6)).epsilon(1e-14));
  CHECK_THROWS_AS(sound_speed(-1.0, 1.0, kAir), DomainError);
  CHECK_THROWS_AS(sound_speed(1.0, 0.0, kAir), DomainError);
}

TEST_CASE("temperature") {
  CHECK(temperature(1.0, 1.0, kAir) == doctest::Approx(1.0));
  CHECK(temperature(2.0, 4.0, kAir) == doctest::Approx(0.5));
  GasModel real = kAir;
  real.R = 287.0;
  CHECK(temperature(1.0, 1.0, real) == doctest::Approx(1.0 / 287.0).epsilon(1e-12));
  CHECK_THROWS_AS(temperature(0.0, 1.0, kAir), DomainError);
}

TEST_CASE("reaction rate") {
  GasModel g = kAir;
  CHECK(rate(1.0, g) == doctest::Approx(1.0));
  g.eact = g.R;
  CHECK(rate(1.0, g) == doctest::Approx(std::exp(-1.0)).epsilon(1e-14));
  g.eact = 0.0;
  g.mu = 0.5;
  CHECK(rate(2.0, g) == doctest::Approx(std::sqrt(2.0)).epsilon(1e-14));
  CHECK_THROWS_AS(rate(0.0, g), DomainError);
  CHECK_THROWS_AS(rate(-2.0, g), DomainError);
}

TEST_CASE("rate is nondecreasing in T on the operating band") {
  for (double mu : {0.3, 1.0, 2.5}) {
    for (double eact : {0.0, 0.5, 3.0}) {
      GasModel g = kAir;
      g.mu = mu;
      g.eact = eact;
      double t0 = 0.4;
      double prev = rate(t0, g);
      for (int i = 1; i <= 64; ++i) {
        double t = t0 * std::pow(10.0, i / 64.0);
        double cur = rate(t, g);
        CHECK(cur >= prev - 1e-15);
        prev = cur;
      }
    }
  }
}

TEST_CASE("eigenvalues: symmetric at v = 0 and ordered") {
  State s{2.0, 0.0, 1.0, 1.0, 0.0};
  Vec5 lam = eigenvalues(s, kAir);
  double expected = std::sqrt(1.4) * std::sqrt(2.6) / 2.6;
  CHECK(lam[1] == doctest::Approx(0.0));
  CHECK(lam[4] == doctest::Approx(expected).epsilon(1e-12));
  CHECK(lam[0] == doctest::Approx(-lam[4]).epsilon(1e-12));

  State s2{2.0, 0.2, 1.0, 1.0, 0.0};
  Vec5 lam2 = eigenvalues(s2, kAir);
  CHECK(lam2[1] == doctest::Approx(0.1));
  CHECK(lam2[0] < 0.1);
  CHECK(lam2[4] > 0.1);

  CHECK_THROWS_AS(eigenvalues(State{1.0, 0.0, 1.0, 1.0, 0.0}, kAir), SonicError);
}

TEST_CASE("eigenvalues are roots of det(lambda W_U - H_U) with eigenvector r_i") {
  for (State s : {State{2.0, 0.2, 1.0, 1.0, 0.3}, State{2.4, -0.1, 1.1, 0.8, 0.0},
                  State{3.0, 0.4, 0.7, 1.3, 0.9}}) {
    MatN<5> wj = fd_flux_jacobian(flux_w, s, kAir);
    MatN<5> hj = fd_flux_jacobian(flux_h, s, kAir);
    Vec5 lam = eigenvalues(s, kAir);
    for (int fam : {0, 1, 4}) {
      MatN<5> m{};
      double scale = 0.0;
      for (int i = 0; i < 5; ++i)
        for (int j = 0; j < 5; ++j) {
          m[i][j] = hj[i][j] - lam[fam] * wj[i][j];
          scale = std::max(scale, std::abs(m[i][j]));
        }
      double det = determinant<5>(m);
      CHECK(std::abs(det) / std::pow(scale, 5) < 1e-8);
    }
    // eigenvector residual for the genuinely nonlinear families
    for (int fam : {1, 5}) {
      Vec5 r = eigvec_gnl_raw(fam, s, kAir);
      double lambda = lambda_gnl(fam, s, kAir);
      double rn = max_abs<5>(r);
      for (int i = 0; i < 5; ++i) {
        double acc = 0.0;
        for (int j = 0; j < 5; ++j) acc += (hj[i][j] - lambda * wj[i][j]) * r[j];
        CHECK(std::abs(acc) / rn < 1e-6);
      }
    }
  }
}

TEST_CASE("kappa normalizes r . grad(lambda) to one") {
  State s{2.0, 0.1, 1.0, 1.0, 0.2};
  for (int fam : {1, 5}) {
    Vec5 r = eigvec_gnl(fam, s, kAir);
    // finite-difference directional derivative of lambda along r
    double h = 1e-7;
    Vec5 up = s.as_array(), dn = s.as_array();
    for (int i = 0; i < 5; ++i) {
      up[i] += h * r[i];
      dn[i] -= h * r[i];
    }
    double dl = (lambda_gnl(fam, State::from_array(up), kAir) -
                 lambda_gnl(fam, State::from_array(dn), kAir)) /
                (2.0 * h);
    CHECK(dl == doctest::Approx(1.0).epsilon(1e-6));
  }
}

TEST_CASE("entropy") {
  CHECK(entropy(State{2.0, 0.0, 1.0, 1.0, 0.0}, kAir) == doctest::Approx(0.0));
  double rho = 1.3;
  CHECK(entropy(State{2.0, 0.0, std::pow(rho, 1.4), rho, 0.0}, kAir) ==
        doctest::Approx(0.0).epsilon(1e-13));
  GasModel g = kAir;
  g.R = 0.4;  // cv = 1
  CHECK(entropy(State{2.0, 0.0, std::exp(1.0), 1.0, 0.0}, g) ==
        doctest::Approx(1.0).epsilon(1e-13));
}

TEST_CASE("fluxes") {
  State s{1.0, 0.0, 1.0, 1.0, 0.0};
  Vec5 w = flux_w(s, kAir);
  CHECK(w[0] == doctest::Approx(1.0));
  CHECK(w[1] == doctest::Approx(2.0));
  CHECK(w[2] == doctest::Approx(0.0));
  CHECK(w[3] == doctest::Approx(4.0).epsilon(1e-14));  // 1 * (0.5 + 3.5)
  CHECK(w[4] == doctest::Approx(0.0));

  Vec5 src = source_g(s, kAir);
  for (double x : src) CHECK(x == 0.0);

  State burning{2.0, 0.1, 1.0, 1.0, 0.5};
  Vec5 g2 = source_g(burning, kAir);
  double phi = rate(temperature(burning, kAir), kAir);
  CHECK(g2[0] == 0.0);
  CHECK(g2[1] == 0.0);
  CHECK(g2[2] == 0.0);
  CHECK(g2[3] == doctest::Approx(kAir.q0 * burning.rho * phi * burning.z).epsilon(1e-14));
  CHECK(g2[4] == doctest::Approx(-burning.rho * phi * burning.z).epsilon(1e-14));

  // H follows W with the roles of u and v exchanged
  State uv{1.3, 1.7, 1.1, 0.9, 0.4};
  State vu{uv.v, uv.u, uv.p, uv.rho, uv.z};
  Vec5 h = flux_h(uv, kAir);
  Vec5 wswap = flux_w(vu, kAir);
  CHECK(h[0] == doctest::Approx(wswap[0]).epsilon(1e-14));
  CHECK(h[1] == doctest::Approx(wswap[2]).epsilon(1e-14));
  CHECK(h[2] == doctest::Approx(wswap[1]).epsilon(1e-14));
  CHECK(h[3] == doctest::Approx(wswap[3]).epsilon(1e-14));
  CHECK(h[4] == doctest::Approx(wswap[4]).epsilon(1e-14));
}

TEST_CASE("gas model validation") {
  GasModel g = kAir;
  g.gamma = 1.0;
  CHECK_THROWS_AS(g.validate(), DomainError);
  g = kAir;
  g.q0 = 0.0;
  CHECK_THROWS_AS(g.validate(), DomainError);
  g = kAir;
  g.mu = -1.0;
  CHECK_THROWS_AS(g.validate(), DomainError);
  CHECK(kAir.cv() == doctest::Approx(kAir.R / (kAir.gamma - 1.0)).epsilon(1e-16));
}
