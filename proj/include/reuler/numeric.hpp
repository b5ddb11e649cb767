// Small dense linear algebra and a damped Newton iteration, sized for the
// 4x4 / 5x5 systems that appear in the Riemann solvers and diagnostics.
#pragma once

#include <array>
#include <cmath>
#include <cstddef>
#include <functional>
#include <utility>

#include "errors.hpp"

namespace reuler {

template <std::size_t N>
using VecN = std::array<double, N>;

template <std::size_t N>
using MatN = std::array<std::array<double, N>, N>;

template <std::size_t N>
inline double max_abs(const VecN<N>& v) {
  double m = 0.0;
  for (double x : v) m = std::max(m, std::abs(x));
  return m;
}

template <std::size_t N>
inline bool all_finite(const VecN<N>& v) {
  for (double x : v)
    if (!std::isfinite(x)) return false;
  return true;
}

// Gaussian elimination with partial pivoting; A and b are taken by value.
template <std::size_t N>
inline VecN<N> lu_solve(MatN<N> a, VecN<N> b) {
  for (std::size_t col = 0; col < N; ++col) {
    std::size_t piv = col;
    for (std::size_t r = col + 1; r < N; ++r)
      if (std::abs(a[r][col]) > std::abs(a[piv][col])) piv = r;
    if (a[piv][col] == 0.0) throw SolverError("lu_solve: singular matrix");
    std::swap(a[piv], a[col]);
    std::swap(b[piv], b[col]);
    for (std::size_t r = col + 1; r < N; ++r) {
      double f = a[r][col] / a[col][col];
      if (f == 0.0) continue;
      for (std::size_t c = col; c < N; ++c) a[r][c] -= f * a[col][c];
      b[r] -= f * b[col];
    }
  }
  VecN<N> x{};
  for (std::size_t r = N; r-- > 0;) {
    double acc = b[r];
    for (std::size_t c = r + 1; c < N; ++c) acc -= a[r][c] * x[c];
    x[r] = acc / a[r][r];
  }
  return x;
}

template <std::size_t N>
inline double determinant(MatN<N> a) {
  double det = 1.0;
  for (std::size_t col = 0; col < N; ++col) {
    std::size_t piv = col;
    for (std::size_t r = col + 1; r < N; ++r)
      if (std::abs(a[r][col]) > std::abs(a[piv][col])) piv = r;
    if (a[piv][col] == 0.0) return 0.0;
    if (piv != col) {
      std::swap(a[piv], a[col]);
      det = -det;
    }
    det *= a[col][col];
    for (std::size_t r = col + 1; r < N; ++r) {
      double f = a[r][col] / a[col][col];
      if (f == 0.0) continue;
      for (std::size_t c = col; c < N; ++c) a[r][c] -= f * a[col][c];
    }
  }
  return det;
}

struct NewtonOptions {
  double tol = 1e-12;     // max-abs residual target
  int max_iter = 50;
  double fd_step = 1e-7;  // central-difference step for the Jacobian
  int max_halvings = 8;   // step damping
};

template <std::size_t N>
inline MatN<N> fd_jacobian(const std::function<VecN<N>(const VecN<N>&)>& f,
                           const VecN<N>& x, double step) {
  MatN<N> jac{};
  for (std::size_t j = 0; j < N; ++j) {
    double hj = step * std::max(1.0, std::abs(x[j]));
    VecN<N> xp = x, xm = x;
    xp[j] += hj;
    xm[j] -= hj;
    VecN<N> fp = f(xp), fm = f(xm);
    for (std::size_t i = 0; i < N; ++i) jac[i][j] = (fp[i] - fm[i]) / (2.0 * hj);
  }
  return jac;
}

struct NewtonReport {
  int iterations = 0;
  double residual = 0.0;
};

// Damped Newton with a finite-difference Jacobian. The Jacobian is reused
// across iterations and refreshed when a step fails to reduce the residual.
template <std::size_t N>
inline VecN<N> newton_solve(const std::function<VecN<N>(const VecN<N>&)>& f,
                            VecN<N> x, const NewtonOptions& opt = {},
                            NewtonReport* report = nullptr) {
  VecN<N> fx = f(x);
  if (!all_finite(fx)) throw NoConvergence("newton: residual not finite at initial guess");
  double res = max_abs(fx);
  MatN<N> jac{};
  bool have_jac = false;
  int it = 0;
  for (; it < opt.max_iter && res > opt.tol; ++it) {
    if (!have_jac) {
      jac = fd_jacobian<N>(f, x, opt.fd_step);
      have_jac = true;
    }
    VecN<N> rhs;
    for (std::size_t i = 0; i < N; ++i) rhs[i] = -fx[i];
    VecN<N> dx = lu_solve<N>(jac, rhs);

    double lam = 1.0;
    bool accepted = false;
    for (int halving = 0; halving <= opt.max_halvings; ++halving) {
      VecN<N> xt = x;
      for (std::size_t i = 0; i < N; ++i) xt[i] += lam * dx[i];
      VecN<N> ft;
      bool ok = true;
      try {
        ft = f(xt);
        ok = all_finite(ft);
      } catch (const Error&) {
        ok = false;
      }
      if (ok && max_abs(ft) < res) {
        x = xt;
        fx = ft;
        res = max_abs(ft);
        accepted = true;
        if (lam < 1.0) have_jac = false;  // trust region shrank; refresh next time
        break;
      }
      lam *= 0.5;
    }
    if (!accepted) {
      if (!have_jac) throw NoConvergence("newton: no descent step found");
      have_jac = false;  // stale chord Jacobian; recompute and retry
    }
  }
  if (report) {
    report->iterations = it;
    report->residual = res;
  }
  if (res > opt.tol) throw NoConvergence("newton: residual " + std::to_string(res) +
                                         " after " + std::to_string(it) + " iterations");
  return x;
}

// Scalar damped Newton with finite-difference derivative.
inline double newton_scalar(const std::function<double(double)>& f, double x,
                            const NewtonOptions& opt = {}) {
  double fx = f(x);
  for (int it = 0; it < opt.max_iter && std::abs(fx) > opt.tol; ++it) {
    double h = opt.fd_step * std::max(1.0, std::abs(x));
    double d = (f(x + h) - f(x - h)) / (2.0 * h);
    if (d == 0.0 || !std::isfinite(d)) throw NoConvergence("newton_scalar: zero derivative");
    double lam = 1.0;
    bool accepted = false;
    for (int halving = 0; halving <= opt.max_halvings; ++halving) {
      double xt = x - lam * fx / d;
      double ft;
      bool ok = true;
      try {
        ft = f(xt);
        ok = std::isfinite(ft);
      } catch (const Error&) {
        ok = false;
      }
      if (ok && std::abs(ft) < std::abs(fx)) {
        x = xt;
        fx = ft;
        accepted = true;
        break;
      }
      lam *= 0.5;
    }
    if (!accepted) throw NoConvergence("newton_scalar: no descent step");
  }
  if (std::abs(fx) > opt.tol) throw NoConvergence("newton_scalar: residual too large");
  return x;
}

}  // namespace reuler
