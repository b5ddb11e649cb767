// Quasi-one-dimensional duct model: contraction iteration on the integral
// form of the duct equations, field averaging between the wall and the
// strong contact, and the averaged-field comparison harness.
#pragma once

#include <array>
#include <cmath>
#include <functional>
#include <vector>

#include "diagnostics.hpp"
#include "scheme.hpp"

namespace reuler {

struct DuctGeometry {
  double dx = 0.0;
  std::vector<double> x;
  std::vector<double> A;

  void validate() const {
    if (x.size() != A.size() || x.size() < 2)
      throw ConfigError("duct: need matching x/A samples");
    for (double a : A)
      if (!(a > 0.0)) throw ConfigError("duct: cross-section must stay positive");
  }

  // second-order one-sided/central differencing
  std::vector<double> aprime() const {
    std::size_t n = x.size();
    std::vector<double> d(n);
    d[0] = (-3.0 * A[0] + 4.0 * A[1] - A[2]) / (2.0 * dx);
    for (std::size_t j = 1; j + 1 < n; ++j) d[j] = (A[j + 1] - A[j - 1]) / (2.0 * dx);
    d[n - 1] = (3.0 * A[n - 1] - 4.0 * A[n - 2] + A[n - 3]) / (2.0 * dx);
    return d;
  }
};

struct Q1DInlet {
  double rho = 0.0, u = 0.0, p = 0.0, z = 0.0;
};

struct Quasi1DSolution {
  std::vector<double> x;
  std::vector<double> rho, u, p, z;
  int iterations = 0;
  double final_update = 0.0;
  std::vector<double> update_ratios;  // per-iteration sup-update ratios
  double decay_lo = 0.0, decay_hi = 0.0;  // envelope rates C_* and C^*
};

namespace detail {

inline std::vector<double> cumtrapz(const std::vector<double>& f, double dx) {
  std::vector<double> acc(f.size(), 0.0);
  for (std::size_t j = 1; j < f.size(); ++j)
    acc[j] = acc[j - 1] + 0.5 * dx * (f[j - 1] + f[j]);
  return acc;
}

}  // namespace detail

// Fixed point of the integral duct equations: mass flux is enforced exactly,
// momentum and Bernoulli reduce to a quadratic in u per node (supersonic
// root), and the reactant follows its exponential closed form.
inline Quasi1DSolution solve_q1d(const DuctGeometry& geom, const Q1DInlet& inlet,
                                 const GasModel& g, double tol = 1e-12,
                                 int max_iter = 200) {
  geom.validate();
  if (!(inlet.rho > 0.0) || !(inlet.p > 0.0))
    throw DomainError("solve_q1d: inlet must have positive rho and p");
  double c0 = std::sqrt(g.gamma * inlet.p / inlet.rho);
  if (!(inlet.u - c0 >= kSonicTol * c0)) throw SonicError("solve_q1d: inlet not supersonic");
  if (inlet.z < 0.0 || inlet.z > 1.0) throw RangeError("solve_q1d: inlet Z outside [0,1]");

  std::size_t n = geom.x.size();
  double dx = geom.dx;
  std::vector<double> ap = geom.aprime();
  double m0 = inlet.rho * inlet.u * geom.A[0];
  double h0 = g.gamma * inlet.p / ((g.gamma - 1.0) * inlet.rho) + 0.5 * inlet.u * inlet.u;

  Quasi1DSolution sol;
  sol.x = geom.x;
  sol.rho.assign(n, inlet.rho);
  sol.u.assign(n, inlet.u);
  sol.p.assign(n, inlet.p);
  sol.z.assign(n, inlet.z);

  auto phi_of = [&](double p, double rho) { return rate(temperature(p, rho, g), g); };

  // starting iterate: constant flow variables, reactant integrated on them
  {
    std::vector<double> w(n);
    for (std::size_t j = 0; j < n; ++j)
      w[j] = geom.A[j] * inlet.rho * phi_of(inlet.p, inlet.rho) / m0;
    std::vector<double> acc = detail::cumtrapz(w, dx);
    for (std::size_t j = 0; j < n; ++j) sol.z[j] = inlet.z * std::exp(-acc[j]);
  }

  double scale = std::max({1.0, inlet.u, inlet.p, inlet.rho});
  double prev_update = -1.0;
  int slow = 0;
  for (int it = 1; it <= max_iter; ++it) {
    std::vector<double> integ_p(n), integ_q(n);
    for (std::size_t j = 0; j < n; ++j) {
      integ_p[j] = ap[j] * sol.p[j];
      integ_q[j] = geom.A[j] * sol.rho[j] * phi_of(sol.p[j], sol.rho[j]) * sol.z[j];
    }
    std::vector<double> ip = detail::cumtrapz(integ_p, dx);
    std::vector<double> iq = detail::cumtrapz(integ_q, dx);

    double update = 0.0;
    std::vector<double> nrho(n), nu(n), np(n);
    for (std::size_t j = 0; j < n; ++j) {
      double rhs2 = inlet.u + geom.A[0] * inlet.p / m0 + ip[j] / m0;
      double rhs3 = h0 + g.q0 * iq[j] / m0;
      double half_b = g.gamma * rhs2 / (g.gamma + 1.0);
      double disc = half_b * half_b - 2.0 * (g.gamma - 1.0) * rhs3 / (g.gamma + 1.0);
      if (disc < 0.0) throw SonicError("solve_q1d: no supersonic root (discriminant < 0)");
      double u = half_b + std::sqrt(disc);  // supersonic branch
      double p = (rhs2 - u) * m0 / geom.A[j];
      double rho = m0 / (u * geom.A[j]);
      if (!(p > 0.0) || !(rho > 0.0)) throw DomainError("solve_q1d: state left the admissible set");
      double c = std::sqrt(g.gamma * p / rho);
      if (!(u - c >= kSonicTol * c)) throw SonicError("solve_q1d: node went sonic");
      nrho[j] = rho;
      nu[j] = u;
      np[j] = p;
      update = std::max({update, std::abs(rho - sol.rho[j]), std::abs(u - sol.u[j]),
                         std::abs(p - sol.p[j])});
    }
    sol.rho = std::move(nrho);
    sol.u = std::move(nu);
    sol.p = std::move(np);

    std::vector<double> w(n);
    for (std::size_t j = 0; j < n; ++j)
      w[j] = geom.A[j] * sol.rho[j] * phi_of(sol.p[j], sol.rho[j]) / m0;
    std::vector<double> acc = detail::cumtrapz(w, dx);
    for (std::size_t j = 0; j < n; ++j) sol.z[j] = inlet.z * std::exp(-acc[j]);

    sol.iterations = it;
    sol.final_update = update;
    if (prev_update > 100.0 * tol * scale && it >= 2) {
      double ratio = update / prev_update;
      sol.update_ratios.push_back(ratio);
      if (ratio > 0.9) {
        if (++slow >= 3) throw NoContraction("solve_q1d: update ratio above 0.9");
      } else {
        slow = 0;
      }
    }
    prev_update = update;
    if (update <= tol * scale) break;
    if (it == max_iter) throw MaxIterations("solve_q1d: no convergence");
  }

  // decay-rate envelope on the converged iterate
  if (inlet.z > 0.0) {
    double lo = std::numeric_limits<double>::infinity(), hi = 0.0;
    for (std::size_t j = 0; j < n; ++j) {
      double w = geom.A[j] * sol.rho[j] * phi_of(sol.p[j], sol.rho[j]) / m0;
      lo = std::min(lo, w);
      hi = std::max(hi, w);
    }
    sol.decay_lo = lo;
    sol.decay_hi = hi;
  }
  return sol;
}

// ---------------------------------------------------------------------------
// Field averaging and comparison
// ---------------------------------------------------------------------------

struct FieldAverage {
  std::array<double, 4> value{};  // (rho, u, p, Z)
  double area = 0.0;              // g_h(x) - chi(x)
};

// Integral average over [chi(x), g_h(x)] at x = k h, taken on the exact
// slab traces rather than the resampled cells: the trace carries the true
// in-slab wave positions, so the average is free of the cell-quantization
// jitter. The integration starts at the hosting fan's own contact ray; the
// sub-cell gap to the committed contact path is filled with the fan's
// contact-adjacent state.
inline FieldAverage average_field(const SolutionField& f, int k) {
  if (k < 0 || k >= (int)f.columns.size())
    throw RangeError("average_field: column index out of range");
  const GasModel& g = f.cfg.gas;
  FieldAverage out;

  if (k == 0) {
    // exact average of the upstream data over (y0, 0)
    const SchemeConfig& cfg = f.cfg;
    std::vector<double> cuts{cfg.y0};
    for (double b : cfg.u2.breaks)
      if (b > cfg.y0 && b < 0.0) cuts.push_back(b);
    cuts.push_back(0.0);
    std::sort(cuts.begin(), cuts.end());
    for (std::size_t i = 0; i + 1 < cuts.size(); ++i) {
      const State& st = cfg.u2.eval(0.5 * (cuts[i] + cuts[i + 1]));
      double len = cuts[i + 1] - cuts[i];
      out.value[0] += len * st.rho;
      out.value[1] += len * st.u;
      out.value[2] += len * st.p;
      out.value[3] += len * st.z;
    }
    out.area = -cfg.y0;
    for (double& v : out.value) v /= out.area;
    return out;
  }

  const MeshColumn& prev = f.columns[k - 1];
  const MeshColumn& col = f.columns[k];
  double s = f.s;
  double h = f.cfg.h;
  out.area = col.y_wall - col.contact_y;
  if (!(out.area > 0.0)) throw RangeError("average_field: contact above the wall");

  const WaveFan& host = col.fans.at(prev.contact_n);
  double center = prev.y_wall + 2.0 * prev.contact_n * s;
  double ray_end = center + h * host.contact_slope;

  Vec5 acc{};
  auto add = [&](const State& st, double len) {
    acc[0] += len * st.rho;
    acc[1] += len * st.u;
    acc[2] += len * st.p;
    acc[3] += len * st.z;
  };
  auto add_trace = [&](const WaveFan& fan, double fan_center, double lo, double hi) {
    for (int c = 0; c < 4; ++c) {
      auto component = [&](const State& st) {
        switch (c) {
          case 0: return st.rho;
          case 1: return st.u;
          case 2: return st.p;
          default: return st.z;
        }
      };
      acc[(std::size_t)c] += detail::fan_trace_integral(fan, h, lo - fan_center,
                                                        hi - fan_center, g, component);
    }
  };

  // hosting diamond from its contact ray to the top of its span
  double host_top = col.y_wall + (2.0 * prev.contact_n + 1.0) * s;
  add_trace(host, center, ray_end, host_top);
  // interior diamonds above the host
  for (int n = prev.contact_n + 1; n <= -1; ++n) {
    double lo = col.y_wall + (2.0 * n - 1.0) * s;
    double hi = col.y_wall + (2.0 * n + 1.0) * s;
    auto it = col.fans.find(n);
    if (it == col.fans.end())
      add(prev.cell(n, f.far_field), hi - lo);
    else
      add_trace(it->second, prev.y_wall + 2.0 * n * s, lo, hi);
  }
  // boundary strip [wall - s, wall]
  if (col.bfan) {
    const BoundaryFan& bf = *col.bfan;
    double lo = col.y_wall - s - prev.y_wall, hi = col.y_wall - prev.y_wall;
    double y1l = bf.s_lo * h, y1h = bf.s_hi * h;
    auto flat = [&](double a, double b, const State& st) {
      a = std::max(a, lo);
      b = std::min(b, hi);
      if (b > a) add(st, b - a);
    };
    flat(lo, y1l, bf.data);
    if (y1h > y1l && bf.gamma1 > 0.0) {
      double wl = std::max(y1l, lo), wh = std::min(y1h, hi);
      if (wh > wl)
        for (int c = 0; c < 4; ++c) {
          auto component = [&](const State& st) {
            switch (c) {
              case 0: return st.rho;
              case 1: return st.u;
              case 2: return st.p;
              default: return st.z;
            }
          };
          acc[(std::size_t)c] += detail::fan_wedge_integral(1, 0.0, bf.gamma1, bf.data,
                                                            bf.s_lo, bf.s_hi, wl, wh, h,
                                                            g, component);
        }
    }
    flat(y1h, hi, bf.wall_state);
  }
  // gap between the committed path and the fan's ray: contact-adjacent state
  add(host.after4, ray_end - col.contact_y);

  for (int c = 0; c < 4; ++c) out.value[(std::size_t)c] = acc[(std::size_t)c] / out.area;
  return out;
}

// A(x) sampled on the dx = h/2 grid from the committed contact path and wall
// ordinates, linear between columns.
inline DuctGeometry extract_geometry(const SolutionField& f) {
  DuctGeometry geom;
  geom.dx = 0.5 * f.cfg.h;
  int K = (int)f.columns.size() - 1;
  geom.x.resize(2 * K + 1);
  geom.A.resize(2 * K + 1);
  for (int k = 0; k <= K; ++k) {
    geom.x[2 * k] = f.columns[k].x;
    geom.A[2 * k] = f.columns[k].y_wall - f.columns[k].contact_y;
  }
  for (int k = 0; k < K; ++k) {
    geom.x[2 * k + 1] = 0.5 * (geom.x[2 * k] + geom.x[2 * k + 2]);
    geom.A[2 * k + 1] = 0.5 * (geom.A[2 * k] + geom.A[2 * k + 2]);
  }
  return geom;
}

// Exact average of the upstream data U2 over (y0, 0): the duct inlet.
inline Q1DInlet inlet_from_initial_data(const SchemeConfig& cfg) {
  std::vector<double> cuts{cfg.y0};
  for (double b : cfg.u2.breaks)
    if (b > cfg.y0 && b < 0.0) cuts.push_back(b);
  cuts.push_back(0.0);
  std::sort(cuts.begin(), cuts.end());
  Q1DInlet in;
  for (std::size_t i = 0; i + 1 < cuts.size(); ++i) {
    double wgt = (cuts[i + 1] - cuts[i]) / (-cfg.y0);
    const State& s = cfg.u2.eval(0.5 * (cuts[i] + cuts[i + 1]));
    in.rho += wgt * s.rho;
    in.u += wgt * s.u;
    in.p += wgt * s.p;
    in.z += wgt * s.z;
  }
  return in;
}

struct CompareRow {
  double x = 0.0;
  double area = 0.0;
  std::array<double, 4> avg{};   // field average (rho, u, p, Z)
  std::array<double, 4> duct{};  // duct solution at the same x
  double max_abs_diff = 0.0;
};

struct CompareResult {
  std::vector<CompareRow> rows;
  double sup = 0.0;
};

inline CompareResult compare(const SolutionField& f, const Quasi1DSolution& q) {
  int K = (int)f.columns.size() - 1;
  if ((int)q.x.size() != 2 * K + 1)
    throw GridMismatch("compare: duct grid is not the h/2 refinement of the field");
  for (int k = 0; k <= K; ++k)
    if (std::abs(q.x[2 * k] - f.columns[k].x) > 1e-12 * std::max(1.0, f.columns[k].x))
      throw GridMismatch("compare: duct nodes do not hit the columns");

  CompareResult out;
  out.rows.resize(K + 1);
  for (int k = 0; k <= K; ++k) {
    FieldAverage avg = average_field(f, k);
    CompareRow& row = out.rows[k];
    row.x = f.columns[k].x;
    row.area = avg.area;
    row.avg = avg.value;
    row.duct = {q.rho[2 * k], q.u[2 * k], q.p[2 * k], q.z[2 * k]};
    for (int c = 0; c < 4; ++c)
      row.max_abs_diff = std::max(row.max_abs_diff, std::abs(row.avg[c] - row.duct[c]));
    out.sup = std::max(out.sup, row.max_abs_diff);
  }
  return out;
}

// Runs the full pipeline for one configuration: march the 2D field, extract
// the duct, solve it with the averaged-inlet data, and compare.
struct PipelineResult {
  SolutionField field;
  Quasi1DSolution duct;
  CompareResult cmp;
};

inline PipelineResult run_and_compare(const SchemeConfig& cfg) {
  PipelineResult out{};
  RunResult rr = run(cfg);
  out.field = std::move(rr.field);
  if (rr.error)
    throw SolverError("run_and_compare: scheme failed: " + rr.error->what);
  DuctGeometry geom = extract_geometry(out.field);
  out.duct = solve_q1d(geom, inlet_from_initial_data(out.field.cfg), cfg.gas);
  out.cmp = compare(out.field, out.duct);
  return out;
}

// ---------------------------------------------------------------------------
// Scaling study
// ---------------------------------------------------------------------------

struct ScalingRow {
  double delta_star = 0.0;
  double h = 0.0;
  double sup_diff = 0.0;
};

struct ScalingResult {
  std::vector<ScalingRow> rows;
  double exponent = 0.0;
};

// Least-squares log-log slope of sup|avg - duct| against delta_star.
inline ScalingResult scaling_study(
    const std::vector<std::pair<double, SchemeConfig>>& runs) {
  if (runs.size() < 2) throw ConfigError("scaling_study: need at least two deltas");
  ScalingResult out;
  double sx = 0.0, sy = 0.0, sxx = 0.0, sxy = 0.0;
  for (const auto& [delta, cfg] : runs) {
    PipelineResult pr = run_and_compare(cfg);
    out.rows.push_back({delta, cfg.h, pr.cmp.sup});
    double lx = std::log(delta), ly = std::log(pr.cmp.sup);
    sx += lx;
    sy += ly;
    sxx += lx * lx;
    sxy += lx * ly;
  }
  double n = (double)out.rows.size();
  out.exponent = (n * sxy - sx * sy) / (n * sxx - sx * sx);
  return out;
}

}  // namespace reuler
