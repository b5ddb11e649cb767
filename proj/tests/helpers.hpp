// Shared run configurations for the scheme-level tests and the acceptance
// suite: the two-state background and a family of small perturbations of it.
#pragma once

#include <cmath>
#include <functional>

#include "reuler/scheme.hpp"

namespace testcfg {

using namespace reuler;

inline GasModel gas() { return GasModel{1.4, 1.0, 1.0, 1.0, 0.0}; }
inline State bg1() { return State{2.0, 0.0, 1.0, 1.0, 0.0}; }
inline State bg2() { return State{2.4, 0.0, 1.0, 0.8, 0.0}; }

inline SchemeConfig background(double h, double x_max,
                               std::function<double(double)> wall = nullptr,
                               double delta0 = 0.05) {
  SchemeConfig sc;
  sc.gas = gas();
  if (!wall) wall = [](double) { return 0.0; };
  sc.wall = build_wall(wall, h, x_max, delta0);
  sc.bg1 = bg1();
  sc.bg2 = bg2();
  sc.u1.states = {bg1()};
  sc.u2.states = {bg2()};
  sc.y0 = -0.5;
  sc.h = h;
  sc.x_max = x_max;
  sc.cfl_ratio = 1.25;
  sc.eps_ball = 0.3;
  sc.delta0 = delta0;
  sc.theta = ThetaSpec{};
  return sc;
}

// Piecewise perturbation of the upper and lower data plus a smooth wall bump,
// everything proportional to `delta`. `z_on` switches the reactant on.
inline SchemeConfig perturbed(double delta, double h, double x_max, bool z_on,
                              ThetaSpec theta = ThetaSpec{}, double delta0 = 0.05) {
  auto wall = [delta](double x) { return 0.25 * delta * x * std::exp(-2.0 * x); };
  SchemeConfig sc = background(h, x_max, wall, delta0);
  sc.theta = theta;

  auto dev2 = [&](double du, double dv, double dp, double drho, double dz) {
    State s = bg2();
    s.u += delta * du;
    s.v += delta * dv;
    s.p += delta * dp;
    s.rho += delta * drho;
    s.z = z_on ? delta * dz : 0.0;
    return s;
  };
  sc.u2.breaks = {-0.4, -0.3, -0.2, -0.1};
  sc.u2.states = {dev2(0.20, 0.02, 0.05, -0.15, 0.50),
                  dev2(-0.15, -0.02, -0.05, 0.20, 0.90),
                  dev2(0.15, 0.00, 0.04, -0.15, 0.30),
                  dev2(-0.10, 0.02, -0.04, 0.15, 0.70),
                  dev2(0.10, -0.02, 0.03, -0.10, 0.40)};

  State deep = bg1();  // far field: exact background, Z = 0
  State upper1 = bg1();
  upper1.u += delta * 0.10;
  upper1.rho -= delta * 0.08;
  upper1.z = z_on ? delta * 0.30 : 0.0;
  sc.u1.breaks = {-0.8};
  sc.u1.states = {deep, upper1};
  return sc;
}

// Configuration for the perturbation-scaling experiment: a smooth wall bump,
// a smooth contact stratification of the upper data, and a smooth genuinely
// nonlinear ramp in the lower data, all proportional to `delta`. Smooth
// ramps keep the offset-sampling error of the scheme incoherent.
inline SchemeConfig scaling_config(double delta, double h, double x_max,
                                   ThetaSpec theta = ThetaSpec{}) {
  auto wall = [delta](double x) { return 0.1 * delta * x * std::exp(-2.0 * x); };
  SchemeConfig sc = background(h, x_max, wall, 0.7);
  sc.eps_ball = 0.6;
  sc.theta = theta;

  int n2 = 16;
  sc.u2.breaks.clear();
  sc.u2.states.clear();
  for (int i = 0; i <= n2; ++i) {
    double t = 2.0 * M_PI * i / n2;
    State s = bg2();
    s.u += delta * 0.40 * std::sin(t);
    s.rho -= delta * 0.32 * std::sin(t);
    s.z = delta * (0.5 + 0.4 * std::cos(t));
    sc.u2.states.push_back(s);
    if (i < n2) sc.u2.breaks.push_back(-0.5 + 0.5 * (i + 1) / (n2 + 1));
  }

  int n1 = 12;
  sc.u1.breaks.clear();
  sc.u1.states.clear();
  sc.u1.states.push_back(bg1());
  for (int i = 1; i <= n1; ++i) {
    double t = 2.0 * M_PI * i / n1;
    State s = bg1();
    s.p += delta * 0.35 * std::sin(t);
    s.rho += delta * 0.25 * std::sin(t);
    s.u += delta * 0.14 * std::sin(t);
    s.v += delta * 0.14 * std::sin(t);
    sc.u1.states.push_back(s);
  }
  for (int i = 0; i < n1; ++i) sc.u1.breaks.push_back(-0.90 + 0.3 * (i + 1) / (n1 + 1));
  return sc;
}

}  // namespace testcfg
