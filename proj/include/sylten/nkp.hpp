#pragma once

#include <array>
#include <functional>
#include <optional>
#include <span>
#include <vector>

#include "sylten/dense_lu.hpp"
#include "sylten/solvers.hpp"
#include "sylten/sylvester.hpp"

namespace sylten {

/// Shift coefficients of the Kronecker-product preconditioner:
/// row i builds Q_{i+1} = a[i][0] * A_{N-i} + a[i][1] * E, i.e. the first
/// row pairs with the last operator factor and vice versa.
struct NkpParams {
  std::vector<std::array<double, 2>> a;

  int factor_count() const { return static_cast<int>(a.size()); }
  std::vector<double> flatten() const;
  static NkpParams from_flat(std::span<const double> x);
  static NkpParams identity(int n_factors);  // every Q_i = E
};

/// Squared Frobenius distance |A - Q_1 x ... x Q_N|_F^2 between the
/// operator's Kronecker-form matrix and the single Kronecker product
/// built from params. Evaluated through factored Kronecker inner
/// products; never materializes A, so the cost is independent of numel.
double nkp_objective(const NkpParams& params, const SylvesterOperator& op);

struct NelderMeadConfig {
  double reflection = 1.0;
  double expansion = 2.0;
  double contraction = 0.5;
  double shrink = 0.5;
  double xtol = 1e-10;  // relative simplex diameter
  double ftol = 1e-10;  // relative spread of objective values
  int max_evals = 0;    // 0 means 2000 * dimension
};

struct NelderMeadResult {
  std::vector<double> x;
  double fx = 0.0;
  int evals = 0;
  bool converged = false;  // false when the evaluation budget ran out
};

/// Derivative-free simplex minimizer with the classic fminsearch-style
/// reflection/expansion/contraction/shrink moves.
NelderMeadResult nelder_mead(
    const std::function<double(std::span<const double>)>& f,
    std::span<const double> x0, const NelderMeadConfig& cfg = {});

struct NkpFitConfig {
  NelderMeadConfig optimizer;
  /// Initial guess; empty means the built-in heuristic a_i = (1, (N-1)/N *
  /// mean diagonal of the paired factor), rescaled so the Kronecker
  /// product starts at the objective-optimal global scale.
  std::optional<NkpParams> initial;
};

/// Fitted factors Q_1..Q_N with their pivoted triangular factorizations;
/// approximates the inverse of the Kronecker-form matrix by
/// Q_1^-1 x ... x Q_N^-1.
class NkpPreconditioner {
 public:
  /// Builds and factorizes the Q_i from explicit params. Throws
  /// SingularPreconditionerError naming the offending factor.
  static NkpPreconditioner from_params(const SylvesterOperator& op,
                                       NkpParams params);

  const NkpParams& params() const { return params_; }
  const DenseMatrix& q(int i) const { return q_[static_cast<std::size_t>(i)]; }
  int factor_count() const { return static_cast<int>(q_.size()); }
  double objective_value() const { return objective_; }
  bool fit_warning() const { return fit_warning_; }

  /// X x_1 Q_N^-1 x_2 ... x_N Q_1^-1 (every mode solved against its
  /// paired factor). This is the map M with vec(result) = M vec(X).
  DenseTensor apply_inverse(const DenseTensor& x) const;
  DenseTensor apply_inverse_transpose(const DenseTensor& x) const;

 private:
  NkpParams params_;
  std::vector<DenseMatrix> q_;
  std::vector<PivotedLu> lu_;
  double objective_ = 0.0;
  bool fit_warning_ = false;

  friend NkpPreconditioner fit_nkp(const SylvesterOperator&, const NkpFitConfig&);
};

/// Minimizes nkp_objective over the 2N shift coefficients and returns the
/// factorized preconditioner. A budget-exhausted fit is returned with the
/// warning flag set; singular fitted factors throw.
NkpPreconditioner fit_nkp(const SylvesterOperator& op,
                          const NkpFitConfig& cfg = {});

/// D_tilde = D x_1 Q_N^-1 x_2 ... x_N Q_1^-1.
DenseTensor precondition_rhs(const DenseTensor& d, const NkpPreconditioner& pre);

/// Left-preconditioned operator L~ = M . L with M the factorized inverse
/// Kronecker product; vec(L~(X)) = (Q_1 x ... x Q_N)^-1 A vec(X).
class PreconditionedOperator final : public OperatorHandle {
 public:
  PreconditionedOperator(SylvesterOperator base, NkpPreconditioner pre);

  const Shape& shape() const override { return base_.shape(); }
  const SylvesterOperator& base() const { return base_; }
  const NkpPreconditioner& preconditioner() const { return pre_; }

  DenseTensor apply(const DenseTensor& x) const override;
  DenseTensor apply_transpose(const DenseTensor& x) const override;

 private:
  SylvesterOperator base_;
  NkpPreconditioner pre_;
};

struct PrecondSolveOptions {
  NkpFitConfig fit;
  /// When set, skips the fit and uses this preconditioner as-is.
  std::optional<NkpPreconditioner> preconditioner;
};

// Preconditioned entry points: fit (or accept) the preconditioner, form
// the transformed system (L~, D~), and run the matching base solver body.
// The RelErrorVsExact rule still measures against the original problem's
// solution, which both systems share.
SolveReport solve_ptlb(const SylvesterOperator& op, const DenseTensor& d,
                       const DenseTensor& x0, const SolveConfig& cfg = {},
                       const PrecondSolveOptions& opts = {},
                       TlbTrace* trace = nullptr);
SolveReport solve_ptbicor(const SylvesterOperator& op, const DenseTensor& d,
                          const DenseTensor& x0, const SolveConfig& cfg = {},
                          const PrecondSolveOptions& opts = {},
                          BicorTrace* trace = nullptr);
SolveReport solve_ptcors(const SylvesterOperator& op, const DenseTensor& d,
                         const DenseTensor& x0, const SolveConfig& cfg = {},
                         const PrecondSolveOptions& opts = {},
                         TcorsTrace* trace = nullptr);

}  // namespace sylten
