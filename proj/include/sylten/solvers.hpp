#pragma once

#include <optional>
#include <vector>

#include "sylten/lanczos.hpp"
#include "sylten/sylvester.hpp"

namespace sylten {

enum class StoppingRule {
  RelErrorVsExact,  // |X_k - X*| / |X*|, requires SolveConfig::exact
  RelResidual,      // |R_k| / |D|
};

enum class SolveStatus { Converged, MaxIters, Breakdown };

const char* to_string(SolveStatus status);

struct SolveConfig {
  double tol = 1e-10;
  /// 0 means 10 * numel(D), enough for the finite-termination bound plus
  /// rounding slack.
  int max_iters = 0;
  StoppingRule rule = StoppingRule::RelResidual;
  std::optional<DenseTensor> exact;  // X*, required by RelErrorVsExact
  /// Breakdown pivots are compared against this tolerance scaled by the
  /// magnitudes of the tensors entering the inner product. The default is
  /// machine-level: these methods routinely push through inner products as
  /// oblique as 1e-13 of their operand scale and still converge, so only a
  /// value indistinguishable from zero counts as a breakdown.
  double breakdown_tol = 1e-15;
  bool record_history = true;

  int resolve_max_iters(std::int64_t numel) const;
};

struct HistoryEntry {
  double rel_error;     // NaN when no reference solution is configured
  double rel_residual;
  double elapsed_ms;
};

struct SolveReport {
  DenseTensor solution;
  int iterations = 0;
  SolveStatus status = SolveStatus::MaxIters;
  BreakdownKind breakdown_kind = BreakdownKind::None;
  int breakdown_step = 0;
  /// Entry k is the metric after k iterations; entry 0 describes X0, so
  /// the length is iterations + 1 when history recording is on.
  std::vector<HistoryEntry> history;

  double final_metric(StoppingRule rule) const;
};

/// Stopping metric of the configured rule for iterate x_k with residual
/// r_k of the system with right-hand side d. Throws ConfigError on zero
/// denominators or a missing reference solution.
double stopping_metric(const SolveConfig& cfg, const DenseTensor& xk,
                       const DenseTensor& rk, const DenseTensor& d);

// --- Optional per-iteration traces (diagnostics and cross-checks) -------

/// Iteration state of the biconjugate residual loop.
struct BicorState {
  DenseTensor r, r_star;  // residual and dual residual
  DenseTensor p, p_star;  // search directions
  DenseTensor s, s_star;  // L(P), L^T(P*)
  DenseTensor t;          // L(R)
  double alpha = 0.0, beta = 0.0;
};

/// Iteration state of the residual-squared loop.
struct TcorsState {
  DenseTensor u;             // squared-polynomial residual, equals D - L(X)
  DenseTensor z_hat;         // L(U)
  DenseTensor t_cap, d_cap;  // direction recombinations
  DenseTensor c, q, q_hat;   // q_hat = L(Q)
  DenseTensor h, v_cap, f;
  double rho_prev = 0.0, rho = 0.0, alpha = 0.0, beta = 0.0;
};

struct TlbTrace {
  std::vector<DenseTensor> iterates;   // X_1, X_2, ...
  std::vector<DenseTensor> residuals;  // D - L(X_m), computed directly
  LanczosState lanczos;                // final basis snapshot
};

struct BicorTrace {
  DenseTensor r0, r0_star;  // initial residual and its image under L
  std::vector<DenseTensor> iterates;
  std::vector<BicorState> states;  // state after each iteration
};

struct TcorsTrace {
  std::vector<DenseTensor> iterates;
  std::vector<TcorsState> states;
};

// --- Solvers -------------------------------------------------------------
// All three run on any OperatorHandle, so the preconditioned variants are
// the same bodies applied to the transformed operator and right-hand side.

/// Projection solver: extends the biorthogonal basis one step per
/// iteration, solves T_m y = |R0| e1, and reconstructs X_m from scratch.
SolveReport solve_tlb(const OperatorHandle& op, const DenseTensor& d,
                      const DenseTensor& x0, const SolveConfig& cfg = {},
                      TlbTrace* trace = nullptr);

/// Biconjugate residual solver (progressive LU form of the projection).
SolveReport solve_tbicor(const OperatorHandle& op, const DenseTensor& d,
                         const DenseTensor& x0, const SolveConfig& cfg = {},
                         BicorTrace* trace = nullptr);

/// Residual-squared solver: transpose-free variant that applies the
/// residual polynomial twice per iteration.
SolveReport solve_tcors(const OperatorHandle& op, const DenseTensor& d,
                        const DenseTensor& x0, const SolveConfig& cfg = {},
                        TcorsTrace* trace = nullptr);

}  // namespace sylten
