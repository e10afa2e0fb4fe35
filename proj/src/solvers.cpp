#include "sylten/solvers.hpp"

#include <chrono>
#include <cmath>
#include <limits>
#include <string>
#include <tuple>

namespace sylten {

namespace {

constexpr double kNan = std::numeric_limits<double>::quiet_NaN();

class Stopwatch {
 public:
  Stopwatch() : start_(std::chrono::steady_clock::now()) {}
  double elapsed_ms() const {
    return std::chrono::duration<double, std::milli>(
               std::chrono::steady_clock::now() - start_)
        .count();
  }

 private:
  std::chrono::steady_clock::time_point start_;
};

// Relative near-zero test for breakdown pivots: triggers on inner products
// that are tiny against the magnitudes of their operands, not on the
// overall shrinkage that accompanies convergence.
bool near_zero(double value, double scale, double tol) {
  return std::abs(value) <= tol * scale + 1e-300;
}

void require_operand_shapes(const OperatorHandle& op, const DenseTensor& d,
                            const DenseTensor& x0, const SolveConfig& cfg) {
  if (d.shape() != op.shape() || x0.shape() != op.shape()) {
    throw ShapeError("solve: operator shape " + op.shape().to_string() +
                     ", rhs " + d.shape().to_string() + ", x0 " +
                     x0.shape().to_string() + " must all agree");
  }
  if (cfg.tol <= 0.0) throw ConfigError("solve: tol must be positive");
  if (cfg.rule == StoppingRule::RelErrorVsExact && cfg.exact &&
      cfg.exact->shape() != op.shape()) {
    throw ShapeError("solve: reference solution shape " +
                     cfg.exact->shape().to_string() +
                     " does not match operator shape " +
                     op.shape().to_string());
  }
}

// Evaluates both history metrics; denominators validated once.
class MetricEval {
 public:
  MetricEval(const SolveConfig& cfg, const DenseTensor& d) : cfg_(cfg) {
    norm_d_ = norm(d);
    if (cfg.rule == StoppingRule::RelErrorVsExact) {
      if (!cfg.exact) {
        throw ConfigError(
            "RelErrorVsExact stopping rule requires a reference solution");
      }
      norm_exact_ = norm(*cfg.exact);
      if (norm_exact_ == 0.0) {
        throw ConfigError("reference solution has zero norm");
      }
    } else if (norm_d_ == 0.0) {
      throw ConfigError("RelResidual stopping rule requires a nonzero rhs");
    }
  }

  double rel_error(const DenseTensor& xk) const {
    if (!cfg_.exact || norm_exact_ == 0.0) return kNan;
    return norm(lincomb(1.0, xk, -1.0, *cfg_.exact)) / norm_exact_;
  }

  double rel_residual(const DenseTensor& rk) const {
    if (norm_d_ == 0.0) return kNan;
    return norm(rk) / norm_d_;
  }

  /// The metric the stopping rule watches; also appends a history entry.
  double record(SolveReport& rep, const DenseTensor& xk, const DenseTensor& rk,
                const Stopwatch& watch) const {
    const double re = rel_error(xk);
    const double rr = rel_residual(rk);
    if (cfg_.record_history) {
      rep.history.push_back({re, rr, watch.elapsed_ms()});
    }
    return cfg_.rule == StoppingRule::RelErrorVsExact ? re : rr;
  }

 private:
  const SolveConfig& cfg_;
  double norm_exact_ = 0.0;
  double norm_d_ = 0.0;
};

}  // namespace

const char* to_string(SolveStatus status) {
  switch (status) {
    case SolveStatus::Converged:
      return "converged";
    case SolveStatus::MaxIters:
      return "max_iters";
    case SolveStatus::Breakdown:
      return "breakdown";
  }
  return "unknown";
}

const char* to_string(BreakdownKind kind) {
  switch (kind) {
    case BreakdownKind::None:
      return "none";
    case BreakdownKind::DegenerateSeed:
      return "degenerate_seed";
    case BreakdownKind::LanczosPivot:
      return "lanczos_pivot";
    case BreakdownKind::TridiagonalPivot:
      return "tridiagonal_pivot";
    case BreakdownKind::InnerProductZero:
      return "inner_product_zero";
    case BreakdownKind::RhoZero:
      return "rho_zero";
  }
  return "unknown";
}

int SolveConfig::resolve_max_iters(std::int64_t numel) const {
  if (max_iters > 0) return max_iters;
  const std::int64_t generous = 10 * numel;
  return static_cast<int>(std::min<std::int64_t>(generous, 1000000));
}

double SolveReport::final_metric(StoppingRule rule) const {
  if (history.empty()) return kNan;
  return rule == StoppingRule::RelErrorVsExact ? history.back().rel_error
                                               : history.back().rel_residual;
}

double stopping_metric(const SolveConfig& cfg, const DenseTensor& xk,
                       const DenseTensor& rk, const DenseTensor& d) {
  if (cfg.rule == StoppingRule::RelErrorVsExact) {
    if (!cfg.exact) {
      throw ConfigError(
          "stopping_metric: RelErrorVsExact requires a reference solution");
    }
    const double ns = norm(*cfg.exact);
    if (ns == 0.0) {
      throw ConfigError("stopping_metric: reference solution has zero norm");
    }
    return norm(lincomb(1.0, xk, -1.0, *cfg.exact)) / ns;
  }
  const double nd = norm(d);
  if (nd == 0.0) {
    throw ConfigError("stopping_metric: right-hand side has zero norm");
  }
  return norm(rk) / nd;
}

SolveReport solve_tlb(const OperatorHandle& op, const DenseTensor& d,
                      const DenseTensor& x0, const SolveConfig& cfg,
                      TlbTrace* trace) {
  require_operand_shapes(op, d, x0, cfg);
  const int max_iters = cfg.resolve_max_iters(d.numel());
  const Stopwatch watch;
  const MetricEval metric(cfg, d);

  SolveReport rep;
  rep.solution = x0;

  DenseTensor r0 = lincomb(1.0, d, -1.0, op.apply(x0));
  if (metric.record(rep, x0, r0, watch) < cfg.tol) {
    rep.status = SolveStatus::Converged;
    return rep;
  }
  const double r0_norm = norm(r0);

  DenseTensor v1, w1;
  try {
    std::tie(v1, w1) = seed_pair(op, r0, cfg.breakdown_tol);
  } catch (const BreakdownError& e) {
    rep.status = SolveStatus::Breakdown;
    rep.breakdown_kind = e.kind();
    rep.breakdown_step = e.step();
    return rep;
  }

  LanczosProcess proc(op, std::move(v1), std::move(w1), cfg.breakdown_tol);
  rep.status = SolveStatus::MaxIters;
  for (int m = 1; m <= max_iters; ++m) {
    const bool stepped = proc.step();
    // alpha_m exists even when the step broke down, so T_m is solvable.
    const TridiagonalMatrix tm = proc.tridiagonal(m);
    std::vector<double> rhs(static_cast<std::size_t>(m), 0.0);
    rhs[0] = r0_norm;
    std::vector<double> y;
    try {
      y = tridiagonal_solve(tm, rhs, cfg.breakdown_tol);
    } catch (const BreakdownError& e) {
      rep.status = SolveStatus::Breakdown;
      rep.breakdown_kind = e.kind();
      rep.breakdown_step = m;
      break;
    }

    DenseTensor xm = x0;
    for (int j = 0; j < m; ++j) {
      axpy_inplace(y[static_cast<std::size_t>(j)], proc.v(j), xm);
    }
    DenseTensor rm = lincomb(1.0, d, -1.0, op.apply(xm));

    rep.solution = xm;
    rep.iterations = m;
    const double value = metric.record(rep, xm, rm, watch);
    if (trace) {
      trace->iterates.push_back(std::move(xm));
      trace->residuals.push_back(std::move(rm));
    }
    if (value < cfg.tol) {
      rep.status = SolveStatus::Converged;
      break;
    }
    if (!stepped) {
      // Pivot vanished and the iterate is not yet accurate: the Krylov
      // space is exhausted for this seed.
      rep.status = SolveStatus::Breakdown;
      rep.breakdown_kind = BreakdownKind::LanczosPivot;
      rep.breakdown_step = proc.breakdown_step();
      break;
    }
  }
  if (trace) trace->lanczos = proc.snapshot();
  return rep;
}

SolveReport solve_tbicor(const OperatorHandle& op, const DenseTensor& d,
                         const DenseTensor& x0, const SolveConfig& cfg,
                         BicorTrace* trace) {
  require_operand_shapes(op, d, x0, cfg);
  const int max_iters = cfg.resolve_max_iters(d.numel());
  const Stopwatch watch;
  const MetricEval metric(cfg, d);

  SolveReport rep;
  rep.solution = x0;

  DenseTensor r = lincomb(1.0, d, -1.0, op.apply(x0));
  if (metric.record(rep, x0, r, watch) < cfg.tol) {
    rep.status = SolveStatus::Converged;
    return rep;
  }

  DenseTensor r_star = op.apply(r);  // R0* = L(R0)
  DenseTensor t = r_star;            // T0 = L(R0), same tensor by construction
  if (trace) {
    trace->r0 = r;
    trace->r0_star = r_star;
  }

  DenseTensor p, p_star;
  double beta_prev = 0.0;
  rep.status = SolveStatus::MaxIters;
  for (int n = 0; n < max_iters; ++n) {
    if (n == 0) {
      p = r;
      p_star = r_star;
    } else {
      p = lincomb(1.0, r, beta_prev, p);
      p_star = lincomb(1.0, r_star, beta_prev, p_star);
    }
    DenseTensor s = op.apply(p);
    DenseTensor s_star = op.apply_transpose(p_star);

    const double num = inner(r_star, t);
    const double den = inner(s_star, s);
    if (near_zero(den, norm(s_star) * norm(s), cfg.breakdown_tol) ||
        near_zero(num, norm(r_star) * norm(t), cfg.breakdown_tol)) {
      rep.status = SolveStatus::Breakdown;
      rep.breakdown_kind = BreakdownKind::InnerProductZero;
      rep.breakdown_step = n;
      break;
    }
    const double alpha = num / den;

    axpy_inplace(alpha, p, rep.solution);
    axpy_inplace(-alpha, s, r);
    axpy_inplace(-alpha, s_star, r_star);
    DenseTensor t_next = op.apply(r);
    const double beta = inner(r_star, t_next) / num;
    t = std::move(t_next);

    rep.iterations = n + 1;
    const double value = metric.record(rep, rep.solution, r, watch);
    if (trace) {
      trace->iterates.push_back(rep.solution);
      trace->states.push_back({r, r_star, p, p_star, std::move(s),
                               std::move(s_star), t, alpha, beta});
    }
    if (value < cfg.tol) {
      rep.status = SolveStatus::Converged;
      break;
    }
    beta_prev = beta;
  }
  return rep;
}

SolveReport solve_tcors(const OperatorHandle& op, const DenseTensor& d,
                        const DenseTensor& x0, const SolveConfig& cfg,
                        TcorsTrace* trace) {
  require_operand_shapes(op, d, x0, cfg);
  const int max_iters = cfg.resolve_max_iters(d.numel());
  const Stopwatch watch;
  const MetricEval metric(cfg, d);

  SolveReport rep;
  rep.solution = x0;

  DenseTensor r0 = lincomb(1.0, d, -1.0, op.apply(x0));
  if (metric.record(rep, x0, r0, watch) < cfg.tol) {
    rep.status = SolveStatus::Converged;
    return rep;
  }
  const DenseTensor r0_star = op.apply(r0);

  // U tracks D - L(X) through the squared recurrences (up to roundoff).
  DenseTensor u = std::move(r0);
  DenseTensor t_cap, d_cap, c, q, h, v_cap, f;
  double rho_prev = 0.0;
  rep.status = SolveStatus::MaxIters;
  for (int n = 1; n <= max_iters; ++n) {
    DenseTensor z_hat = op.apply(u);
    const double rho = inner(r0_star, z_hat);
    if (near_zero(rho, norm(r0_star) * norm(z_hat), cfg.breakdown_tol)) {
      // Prescribed remedy: restart from a different X0 (caller's policy).
      rep.status = SolveStatus::Breakdown;
      rep.breakdown_kind = BreakdownKind::RhoZero;
      rep.breakdown_step = n;
      break;
    }
    double beta = 0.0;
    if (n == 1) {
      t_cap = u;
      d_cap = u;
      c = z_hat;
      q = z_hat;
    } else {
      beta = rho / rho_prev;
      t_cap = lincomb(1.0, u, beta, h);
      d_cap = lincomb(1.0, u, beta, v_cap);
      c = lincomb(1.0, z_hat, beta, f);
      // Q_new = C + beta*F + beta^2*Q_old
      DenseTensor q_new = lincomb(beta, f, beta * beta, q);
      axpy_inplace(1.0, c, q_new);
      q = std::move(q_new);
    }
    DenseTensor q_hat = op.apply(q);
    const double sigma = inner(r0_star, q_hat);
    if (near_zero(sigma, norm(r0_star) * norm(q_hat), cfg.breakdown_tol)) {
      rep.status = SolveStatus::Breakdown;
      rep.breakdown_kind = BreakdownKind::InnerProductZero;
      rep.breakdown_step = n;
      break;
    }
    const double alpha = rho / sigma;

    h = lincomb(1.0, t_cap, -alpha, q);
    v_cap = lincomb(1.0, d_cap, -alpha, q);
    f = lincomb(1.0, c, -alpha, q_hat);

    axpy_inplace(2.0 * alpha, d_cap, rep.solution);
    axpy_inplace(-alpha * alpha, q, rep.solution);
    axpy_inplace(-2.0 * alpha, c, u);
    axpy_inplace(alpha * alpha, q_hat, u);

    rep.iterations = n;
    const double value = metric.record(rep, rep.solution, u, watch);
    if (trace) {
      trace->iterates.push_back(rep.solution);
      trace->states.push_back({u, std::move(z_hat), t_cap, d_cap, c, q,
                               std::move(q_hat), h, v_cap, f, rho_prev, rho,
                               alpha, beta});
    }
    rho_prev = rho;
    if (value < cfg.tol) {
      rep.status = SolveStatus::Converged;
      break;
    }
  }
  return rep;
}

}  // namespace sylten
