#pragma once

#include <span>
#include <utility>
#include <vector>

#include "sylten/sylvester.hpp"

namespace sylten {

/// Tridiagonal projection matrix T_m produced by the biorthogonalization
/// procedure: diagonal alpha_1..alpha_m, superdiagonal beta_2..beta_m,
/// subdiagonal delta_2..delta_m. next_delta is delta_{m+1}, the coupling
/// coefficient of the extended matrix (0 when the procedure stopped at m).
struct TridiagonalMatrix {
  std::vector<double> alpha;
  std::vector<double> beta;
  std::vector<double> delta;
  double next_delta = 0.0;

  int size() const { return static_cast<int>(alpha.size()); }
  DenseMatrix to_dense() const;
};

/// LU split of a tridiagonal matrix: unit-lower-bidiagonal L (multipliers
/// l_2..l_m) and upper-bidiagonal U (diagonal u_1..u_m; the superdiagonal
/// of U equals the original beta and is copied for reconstruction).
struct BidiagonalPair {
  std::vector<double> lower;        // l_2..l_m
  std::vector<double> upper_diag;   // u_1..u_m
  std::vector<double> upper_super;  // beta_2..beta_m
};

/// Snapshot of a biorthogonalization run: <W_i, L(V_j)> = delta_ij over
/// the produced bases. After m clean steps the bases hold m+1 tensors and
/// t is T_m with next_delta = delta_{m+1}; on breakdown at step j the
/// bases end at j tensors and t is T_j with next_delta = 0.
struct LanczosState {
  std::vector<DenseTensor> v;
  std::vector<DenseTensor> w;
  TridiagonalMatrix t;
  /// beta_{m+1}: same magnitude as t.next_delta but carries the sign of
  /// the pivot <W_bar, L(V_bar)> at step m+1.
  double next_beta = 0.0;
  bool breakdown = false;
  int breakdown_step = 0;

  int steps() const { return t.size(); }
};

/// One-step-at-a-time driver for the biorthogonalization recurrence.
/// step() extends the bases by one vector and returns false once the
/// pivot <W_bar, L(V_bar)> vanishes; the breakdown step's alpha is still
/// recorded, so tridiagonal(steps()) remains solvable at that point.
class LanczosProcess {
 public:
  LanczosProcess(const OperatorHandle& op, DenseTensor v1, DenseTensor w1,
                 double breakdown_tol = 1e-13);

  bool step();

  bool broke_down() const { return breakdown_; }
  int breakdown_step() const { return breakdown_step_; }
  /// Steps attempted so far; equals the largest m for which tridiagonal(m)
  /// is available.
  int steps() const { return static_cast<int>(alpha_.size()); }
  int basis_size() const { return static_cast<int>(v_.size()); }
  const DenseTensor& v(int j) const { return v_[static_cast<std::size_t>(j)]; }
  const DenseTensor& w(int j) const { return w_[static_cast<std::size_t>(j)]; }

  TridiagonalMatrix tridiagonal(int m) const;
  LanczosState snapshot() const;

 private:
  const OperatorHandle& op_;
  std::vector<DenseTensor> v_, w_;
  std::vector<double> alpha_;          // alpha_1..
  std::vector<double> beta_, delta_;   // beta_2.., delta_2..
  bool breakdown_ = false;
  int breakdown_step_ = 0;
  double breakdown_tol_;
};

/// Runs the procedure for up to max_steps steps (fewer on breakdown).
/// Callers are responsible for <W1, L(V1)> = 1; see seed_pair.
LanczosState lanczos_procedure(const OperatorHandle& op, const DenseTensor& v1,
                               const DenseTensor& w1, int max_steps,
                               double breakdown_tol = 1e-13);

/// Normalized seed V1 = R0/|R0| and dual seed W1 = L(V1)/<L(V1),L(V1)>,
/// so that <L(V1), W1> = 1. Throws BreakdownError(DegenerateSeed) when L
/// annihilates the residual direction (or R0 is zero).
std::pair<DenseTensor, DenseTensor> seed_pair(const OperatorHandle& op,
                                              const DenseTensor& r0,
                                              double breakdown_tol = 1e-13);

/// Diagnostic: largest deviation in the three-term recurrences
/// L(V_j) = beta_j V_{j-1} + alpha_j V_j + delta_{j+1} V_{j+1} and the
/// dual relation for W, over all fully completed steps.
double extended_relation_check(const LanczosState& state,
                               const OperatorHandle& op);

/// LU without pivoting (pivoting would destroy the bidiagonal structure).
/// Throws BreakdownError(TridiagonalPivot) on a near-zero pivot.
BidiagonalPair lu_tridiagonal(const TridiagonalMatrix& t,
                              double pivot_tol = 1e-13);

/// Solves T y = rhs through the bidiagonal split (Thomas-style forward
/// and back substitution).
std::vector<double> tridiagonal_solve(const TridiagonalMatrix& t,
                                      std::span<const double> rhs,
                                      double pivot_tol = 1e-13);

}  // namespace sylten
