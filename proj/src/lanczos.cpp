#include "sylten/lanczos.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace sylten {

DenseMatrix TridiagonalMatrix::to_dense() const {
  const int m = size();
  DenseMatrix d(m, m);
  for (int i = 0; i < m; ++i) d(i, i) = alpha[static_cast<std::size_t>(i)];
  for (int i = 0; i + 1 < m; ++i) {
    d(i, i + 1) = beta[static_cast<std::size_t>(i)];
    d(i + 1, i) = delta[static_cast<std::size_t>(i)];
  }
  return d;
}

LanczosProcess::LanczosProcess(const OperatorHandle& op, DenseTensor v1,
                               DenseTensor w1, double breakdown_tol)
    : op_(op), breakdown_tol_(breakdown_tol) {
  v_.push_back(std::move(v1));
  w_.push_back(std::move(w1));
}

bool LanczosProcess::step() {
  if (breakdown_) return false;

  const std::size_t j = alpha_.size();  // completing one-based step j+1
  const DenseTensor& vj = v_[j];
  const DenseTensor& wj = w_[j];

  const DenseTensor lv = op_.apply(vj);
  const double alpha = inner(op_.apply(lv), wj);  // <L^2(V_j), W_j>
  alpha_.push_back(alpha);

  DenseTensor v_bar = lincomb(1.0, lv, -alpha, vj);
  DenseTensor w_bar = lincomb(1.0, op_.apply_transpose(wj), -alpha, wj);
  if (j > 0) {
    axpy_inplace(-beta_.back(), v_[j - 1], v_bar);
    axpy_inplace(-delta_.back(), w_[j - 1], w_bar);
  }

  const DenseTensor lv_bar = op_.apply(v_bar);
  const double pivot = inner(w_bar, lv_bar);
  const double guard = breakdown_tol_ * (1.0 + norm(lv_bar) * norm(w_bar));
  if (std::abs(pivot) < guard) {
    breakdown_ = true;
    breakdown_step_ = static_cast<int>(j) + 1;
    return false;
  }

  const double delta_next = std::sqrt(std::abs(pivot));
  const double beta_next = pivot / delta_next;  // carries the pivot's sign
  delta_.push_back(delta_next);
  beta_.push_back(beta_next);

  scale_inplace(1.0 / delta_next, v_bar);
  scale_inplace(1.0 / beta_next, w_bar);

  v_.push_back(std::move(v_bar));
  w_.push_back(std::move(w_bar));
  return true;
}

TridiagonalMatrix LanczosProcess::tridiagonal(int m) const {
  const std::size_t mm = static_cast<std::size_t>(m);
  TridiagonalMatrix t;
  t.alpha.assign(alpha_.begin(), alpha_.begin() + mm);
  t.beta.assign(beta_.begin(), beta_.begin() + (mm - 1));
  t.delta.assign(delta_.begin(), delta_.begin() + (mm - 1));
  t.next_delta = delta_.size() >= mm ? delta_[mm - 1] : 0.0;
  return t;
}

LanczosState LanczosProcess::snapshot() const {
  LanczosState state;
  state.v = v_;
  state.w = w_;
  state.t = steps() > 0 ? tridiagonal(steps()) : TridiagonalMatrix{};
  state.next_beta =
      beta_.size() >= static_cast<std::size_t>(steps()) && steps() > 0
          ? beta_[static_cast<std::size_t>(steps()) - 1]
          : 0.0;
  state.breakdown = breakdown_;
  state.breakdown_step = breakdown_step_;
  return state;
}

LanczosState lanczos_procedure(const OperatorHandle& op, const DenseTensor& v1,
                               const DenseTensor& w1, int max_steps,
                               double breakdown_tol) {
  LanczosProcess proc(op, v1, w1, breakdown_tol);
  for (int j = 0; j < max_steps; ++j) {
    if (!proc.step()) break;
  }
  return proc.snapshot();
}

std::pair<DenseTensor, DenseTensor> seed_pair(const OperatorHandle& op,
                                              const DenseTensor& r0,
                                              double breakdown_tol) {
  const double r0_norm = norm(r0);
  if (r0_norm == 0.0) {
    throw BreakdownError(BreakdownKind::DegenerateSeed, 0,
                         "seed_pair: residual is the zero tensor");
  }
  DenseTensor v1 = lincomb(1.0 / r0_norm, r0, 0.0, r0);
  DenseTensor lv1 = op.apply(v1);
  const double s = inner(lv1, lv1);
  if (s < breakdown_tol) {
    throw BreakdownError(BreakdownKind::DegenerateSeed, 0,
                         "seed_pair: operator annihilates the residual direction");
  }
  scale_inplace(1.0 / s, lv1);
  return {std::move(v1), std::move(lv1)};
}

double extended_relation_check(const LanczosState& state,
                               const OperatorHandle& op) {
  double dev = 0.0;
  for (std::size_t j = 0; j + 1 < state.v.size(); ++j) {
    // L(V_j) - (beta_j V_{j-1} + alpha_j V_j + delta_{j+1} V_{j+1})
    DenseTensor res_v = op.apply(state.v[j]);
    axpy_inplace(-state.t.alpha[j], state.v[j], res_v);
    if (j > 0) axpy_inplace(-state.t.beta[j - 1], state.v[j - 1], res_v);
    const double delta_next =
        j < state.t.delta.size() ? state.t.delta[j] : state.t.next_delta;
    axpy_inplace(-delta_next, state.v[j + 1], res_v);
    dev = std::max(dev, norm(res_v));

    // L^T(W_j) - (delta_j W_{j-1} + alpha_j W_j + beta_{j+1} W_{j+1})
    DenseTensor res_w = op.apply_transpose(state.w[j]);
    axpy_inplace(-state.t.alpha[j], state.w[j], res_w);
    if (j > 0) axpy_inplace(-state.t.delta[j - 1], state.w[j - 1], res_w);
    const double beta_next =
        j < state.t.beta.size() ? state.t.beta[j] : state.next_beta;
    axpy_inplace(-beta_next, state.w[j + 1], res_w);
    dev = std::max(dev, norm(res_w));
  }
  return dev;
}

BidiagonalPair lu_tridiagonal(const TridiagonalMatrix& t, double pivot_tol) {
  const int m = t.size();
  double tnorm = 0.0;
  for (double a : t.alpha) tnorm = std::max(tnorm, std::abs(a));
  for (double b : t.beta) tnorm = std::max(tnorm, std::abs(b));
  for (double d : t.delta) tnorm = std::max(tnorm, std::abs(d));

  BidiagonalPair lu;
  lu.upper_diag.resize(static_cast<std::size_t>(m));
  lu.lower.resize(static_cast<std::size_t>(m > 0 ? m - 1 : 0));
  lu.upper_super = t.beta;

  double u_prev = 0.0;
  for (int i = 0; i < m; ++i) {
    const std::size_t si = static_cast<std::size_t>(i);
    double u = t.alpha[si];
    if (i > 0) {
      const double l = t.delta[si - 1] / u_prev;
      lu.lower[si - 1] = l;
      u -= l * t.beta[si - 1];
    }
    if (std::abs(u) <= pivot_tol * (tnorm > 0.0 ? tnorm : 1.0)) {
      throw BreakdownError(BreakdownKind::TridiagonalPivot, i + 1,
                           "lu_tridiagonal: near-zero pivot u_" +
                               std::to_string(i + 1));
    }
    lu.upper_diag[si] = u;
    u_prev = u;
  }
  return lu;
}

std::vector<double> tridiagonal_solve(const TridiagonalMatrix& t,
                                      std::span<const double> rhs,
                                      double pivot_tol) {
  const int m = t.size();
  if (static_cast<int>(rhs.size()) != m) {
    throw ShapeError("tridiagonal_solve: rhs length " +
                     std::to_string(rhs.size()) + " but matrix is " +
                     std::to_string(m) + "x" + std::to_string(m));
  }
  const BidiagonalPair lu = lu_tridiagonal(t, pivot_tol);

  std::vector<double> y(rhs.begin(), rhs.end());
  for (int i = 1; i < m; ++i) {
    y[static_cast<std::size_t>(i)] -=
        lu.lower[static_cast<std::size_t>(i - 1)] * y[static_cast<std::size_t>(i - 1)];
  }
  for (int i = m - 1; i >= 0; --i) {
    const std::size_t si = static_cast<std::size_t>(i);
    double x = y[si];
    if (i + 1 < m) x -= lu.upper_super[si] * y[si + 1];
    y[si] = x / lu.upper_diag[si];
  }
  return y;
}

}  // namespace sylten
