#include "sylten/nkp.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>
#include <utility>

namespace sylten {

namespace {

double trace_of(const DenseMatrix& a) {
  double t = 0.0;
  for (std::int64_t i = 0; i < a.rows(); ++i) t += a(i, i);
  return t;
}

double fro2_of(const DenseMatrix& a) {
  double s = 0.0;
  for (double v : a.data()) s += v * v;
  return s;
}

struct FactorStats {
  double trace;
  double fro2;
  std::int64_t dim;
};

std::vector<FactorStats> factor_stats(const SylvesterOperator& op) {
  std::vector<FactorStats> st;
  st.reserve(static_cast<std::size_t>(op.order()));
  for (int n = 0; n < op.order(); ++n) {
    const DenseMatrix& a = op.factor(n);
    st.push_back({trace_of(a), fro2_of(a), a.rows()});
  }
  return st;
}

// Params row pairing: row i shifts operator factor N-1-i (zero-based).
std::size_t paired_row(int mode_zero_based, int order) {
  return static_cast<std::size_t>(order - 1 - mode_zero_based);
}

// <A_n, G_n>_F, tr(G_n), |G_n|_F^2 for G_n = a0*A_n + a1*E.
struct ShiftedStats {
  double dot_with_a;
  double trace;
  double fro2;
};

ShiftedStats shifted_stats(const FactorStats& s, const std::array<double, 2>& a) {
  return {
      a[0] * s.fro2 + a[1] * s.trace,
      a[0] * s.trace + a[1] * static_cast<double>(s.dim),
      a[0] * a[0] * s.fro2 + 2.0 * a[0] * a[1] * s.trace +
          a[1] * a[1] * static_cast<double>(s.dim),
  };
}

// Sum of <K_n, K_m> over all term pairs of the Kronecker-form matrix;
// independent of the params.
double kronecker_sum_fro2(const std::vector<FactorStats>& st) {
  const int n = static_cast<int>(st.size());
  double m_total = 1.0;
  for (const FactorStats& s : st) m_total *= static_cast<double>(s.dim);
  double acc = 0.0;
  for (int i = 0; i < n; ++i) {
    acc += st[static_cast<std::size_t>(i)].fro2 * m_total /
           static_cast<double>(st[static_cast<std::size_t>(i)].dim);
    for (int j = 0; j < n; ++j) {
      if (j == i) continue;
      acc += st[static_cast<std::size_t>(i)].trace *
             st[static_cast<std::size_t>(j)].trace * m_total /
             static_cast<double>(st[static_cast<std::size_t>(i)].dim *
                                 st[static_cast<std::size_t>(j)].dim);
    }
  }
  return acc;
}

// Applies Q^-1 (or Q^-T) along the given one-based mode, fiber by fiber.
void mode_solve_in_place(DenseTensor& x, const PivotedLu& lu, int mode,
                         bool transpose) {
  const Shape& shape = x.shape();
  std::int64_t left = 1, right = 1;
  const std::int64_t mid = shape.dim(mode - 1);
  for (int k = 0; k < mode - 1; ++k) left *= shape.dim(k);
  for (int k = mode; k < shape.order(); ++k) right *= shape.dim(k);

  std::vector<double> fiber(static_cast<std::size_t>(mid));
  double* xd = x.data().data();
  for (std::int64_t r = 0; r < right; ++r) {
    for (std::int64_t l = 0; l < left; ++l) {
      double* base = xd + l + r * left * mid;
      for (std::int64_t m = 0; m < mid; ++m) fiber[static_cast<std::size_t>(m)] = base[m * left];
      if (transpose) {
        lu.solve_transpose_in_place(fiber);
      } else {
        lu.solve_in_place(fiber);
      }
      for (std::int64_t m = 0; m < mid; ++m) base[m * left] = fiber[static_cast<std::size_t>(m)];
    }
  }
}

}  // namespace

std::vector<double> NkpParams::flatten() const {
  std::vector<double> x;
  x.reserve(a.size() * 2);
  for (const auto& row : a) {
    x.push_back(row[0]);
    x.push_back(row[1]);
  }
  return x;
}

NkpParams NkpParams::from_flat(std::span<const double> x) {
  if (x.size() % 2 != 0 || x.empty()) {
    throw ConfigError("NkpParams::from_flat: need an even, positive length");
  }
  NkpParams p;
  p.a.resize(x.size() / 2);
  for (std::size_t i = 0; i < p.a.size(); ++i) {
    p.a[i] = {x[2 * i], x[2 * i + 1]};
  }
  return p;
}

NkpParams NkpParams::identity(int n_factors) {
  NkpParams p;
  p.a.assign(static_cast<std::size_t>(n_factors), {0.0, 1.0});
  return p;
}

double nkp_objective(const NkpParams& params, const SylvesterOperator& op) {
  const int n = op.order();
  if (params.factor_count() != n) {
    throw ConfigError("nkp_objective: params have " +
                      std::to_string(params.factor_count()) +
                      " rows but the operator has " + std::to_string(n) +
                      " factors");
  }
  const std::vector<FactorStats> st = factor_stats(op);

  std::vector<ShiftedStats> gs(static_cast<std::size_t>(n));
  for (int k = 0; k < n; ++k) {
    gs[static_cast<std::size_t>(k)] =
        shifted_stats(st[static_cast<std::size_t>(k)], params.a[paired_row(k, n)]);
  }

  double cross = 0.0;
  for (int i = 0; i < n; ++i) {
    double term = gs[static_cast<std::size_t>(i)].dot_with_a;
    for (int k = 0; k < n; ++k) {
      if (k != i) term *= gs[static_cast<std::size_t>(k)].trace;
    }
    cross += term;
  }
  double bb = 1.0;
  for (int k = 0; k < n; ++k) bb *= gs[static_cast<std::size_t>(k)].fro2;

  return kronecker_sum_fro2(st) - 2.0 * cross + bb;
}

NelderMeadResult nelder_mead(
    const std::function<double(std::span<const double>)>& f,
    std::span<const double> x0, const NelderMeadConfig& cfg) {
  const std::size_t dim = x0.size();
  const int budget = cfg.max_evals > 0 ? cfg.max_evals
                                       : 2000 * static_cast<int>(dim);

  std::vector<std::vector<double>> xs(dim + 1, std::vector<double>(x0.begin(), x0.end()));
  for (std::size_t i = 0; i < dim; ++i) {
    double& c = xs[i + 1][i];
    c = c != 0.0 ? 1.05 * c : 0.00025;
  }
  std::vector<double> fs(dim + 1);
  int evals = 0;
  for (std::size_t i = 0; i <= dim; ++i) {
    fs[i] = f(xs[i]);
    ++evals;
  }

  std::vector<std::size_t> order(dim + 1);
  auto sort_order = [&] {
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::stable_sort(order.begin(), order.end(),
                     [&](std::size_t a, std::size_t b) { return fs[a] < fs[b]; });
  };

  NelderMeadResult result;
  while (true) {
    sort_order();
    const std::size_t best = order[0];
    const std::size_t second_worst = order[dim - 1];
    const std::size_t worst = order[dim];

    double xscale = 0.0, diam = 0.0;
    for (std::size_t c = 0; c < dim; ++c) {
      xscale = std::max(xscale, std::abs(xs[best][c]));
      for (std::size_t v = 0; v <= dim; ++v) {
        diam = std::max(diam, std::abs(xs[v][c] - xs[best][c]));
      }
    }
    const double fspread = fs[worst] - fs[best];
    if (fspread <= cfg.ftol * (1.0 + std::abs(fs[best])) &&
        diam <= cfg.xtol * (1.0 + xscale)) {
      result.converged = true;
      break;
    }
    if (evals >= budget) break;

    std::vector<double> centroid(dim, 0.0);
    for (std::size_t v = 0; v <= dim; ++v) {
      if (v == worst) continue;
      for (std::size_t c = 0; c < dim; ++c) centroid[c] += xs[v][c];
    }
    for (double& c : centroid) c /= static_cast<double>(dim);

    auto blend = [&](double t) {
      std::vector<double> p(dim);
      for (std::size_t c = 0; c < dim; ++c) {
        p[c] = centroid[c] + t * (centroid[c] - xs[worst][c]);
      }
      return p;
    };

    std::vector<double> xr = blend(cfg.reflection);
    const double fr = f(xr);
    ++evals;

    bool do_shrink = false;
    if (fr < fs[best]) {
      std::vector<double> xe = blend(cfg.reflection * cfg.expansion);
      const double fe = f(xe);
      ++evals;
      if (fe < fr) {
        xs[worst] = std::move(xe);
        fs[worst] = fe;
      } else {
        xs[worst] = std::move(xr);
        fs[worst] = fr;
      }
    } else if (fr < fs[second_worst]) {
      xs[worst] = std::move(xr);
      fs[worst] = fr;
    } else if (fr < fs[worst]) {
      std::vector<double> xc = blend(cfg.reflection * cfg.contraction);
      const double fc = f(xc);
      ++evals;
      if (fc <= fr) {
        xs[worst] = std::move(xc);
        fs[worst] = fc;
      } else {
        do_shrink = true;
      }
    } else {
      std::vector<double> xc = blend(-cfg.contraction);
      const double fc = f(xc);
      ++evals;
      if (fc < fs[worst]) {
        xs[worst] = std::move(xc);
        fs[worst] = fc;
      } else {
        do_shrink = true;
      }
    }

    if (do_shrink) {
      for (std::size_t v = 0; v <= dim; ++v) {
        if (v == order[0]) continue;
        for (std::size_t c = 0; c < dim; ++c) {
          xs[v][c] = xs[order[0]][c] + cfg.shrink * (xs[v][c] - xs[order[0]][c]);
        }
        fs[v] = f(xs[v]);
        ++evals;
      }
    }
  }

  sort_order();
  result.x = xs[order[0]];
  result.fx = fs[order[0]];
  result.evals = evals;
  return result;
}

NkpPreconditioner NkpPreconditioner::from_params(const SylvesterOperator& op,
                                                 NkpParams params) {
  const int n = op.order();
  if (params.factor_count() != n) {
    throw ConfigError("NkpPreconditioner: params have " +
                      std::to_string(params.factor_count()) +
                      " rows but the operator has " + std::to_string(n) +
                      " factors");
  }
  NkpPreconditioner pre;
  pre.params_ = std::move(params);
  pre.q_.reserve(static_cast<std::size_t>(n));
  pre.lu_.reserve(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i) {
    // Q_{i+1} = a_i1 * A_{N-i} + a_i2 * E
    const DenseMatrix& a = op.factor(n - 1 - i);
    const auto& coeff = pre.params_.a[static_cast<std::size_t>(i)];
    DenseMatrix q(a.rows(), a.cols());
    for (std::int64_t col = 0; col < a.cols(); ++col) {
      for (std::int64_t row = 0; row < a.rows(); ++row) {
        q(row, col) = coeff[0] * a(row, col);
      }
      q(col, col) += coeff[1];
    }
    pre.lu_.push_back(PivotedLu::factor(q, i));
    pre.q_.push_back(std::move(q));
  }
  pre.objective_ = nkp_objective(pre.params_, op);
  return pre;
}

DenseTensor NkpPreconditioner::apply_inverse(const DenseTensor& x) const {
  const int n = factor_count();
  DenseTensor out = x;
  for (int mode = 1; mode <= n; ++mode) {
    mode_solve_in_place(out, lu_[static_cast<std::size_t>(n - mode)], mode, false);
  }
  return out;
}

DenseTensor NkpPreconditioner::apply_inverse_transpose(const DenseTensor& x) const {
  const int n = factor_count();
  DenseTensor out = x;
  for (int mode = 1; mode <= n; ++mode) {
    mode_solve_in_place(out, lu_[static_cast<std::size_t>(n - mode)], mode, true);
  }
  return out;
}

NkpPreconditioner fit_nkp(const SylvesterOperator& op, const NkpFitConfig& cfg) {
  const int n = op.order();

  NkpParams start;
  if (cfg.initial) {
    start = *cfg.initial;
    if (start.factor_count() != n) {
      throw ConfigError("fit_nkp: initial params row count does not match");
    }
  } else {
    // Heuristic start: unit slope, identity shift spreading the mean
    // diagonal of the paired factor across the other N-1 positions.
    start.a.resize(static_cast<std::size_t>(n));
    for (int i = 0; i < n; ++i) {
      const DenseMatrix& a = op.factor(n - 1 - i);
      const double mean_diag = trace_of(a) / static_cast<double>(a.rows());
      start.a[static_cast<std::size_t>(i)] = {
          1.0, (static_cast<double>(n) - 1.0) / static_cast<double>(n) * mean_diag};
    }
    // Rescale to the objective-optimal global multiple of the Kronecker
    // product, which keeps the simplex in a sane region for large shifts.
    const std::vector<FactorStats> st = factor_stats(op);
    double cross = 0.0, bb = 1.0;
    std::vector<ShiftedStats> gs(static_cast<std::size_t>(n));
    for (int k = 0; k < n; ++k) {
      gs[static_cast<std::size_t>(k)] =
          shifted_stats(st[static_cast<std::size_t>(k)], start.a[paired_row(k, n)]);
    }
    for (int i = 0; i < n; ++i) {
      double term = gs[static_cast<std::size_t>(i)].dot_with_a;
      for (int k = 0; k < n; ++k) {
        if (k != i) term *= gs[static_cast<std::size_t>(k)].trace;
      }
      cross += term;
    }
    for (int k = 0; k < n; ++k) bb *= gs[static_cast<std::size_t>(k)].fro2;
    if (bb > 0.0 && cross != 0.0) {
      const double s = cross / bb;
      const double mag = std::pow(std::abs(s), 1.0 / static_cast<double>(n));
      for (auto& row : start.a) {
        row[0] *= mag;
        row[1] *= mag;
      }
      if (s < 0.0) {
        start.a[0][0] = -start.a[0][0];
        start.a[0][1] = -start.a[0][1];
      }
    }
  }

  const auto objective = [&op](std::span<const double> x) {
    return nkp_objective(NkpParams::from_flat(x), op);
  };
  const std::vector<double> x0 = start.flatten();
  const NelderMeadResult best = nelder_mead(objective, x0, cfg.optimizer);

  NkpPreconditioner pre =
      NkpPreconditioner::from_params(op, NkpParams::from_flat(best.x));
  pre.fit_warning_ = !best.converged;
  return pre;
}

DenseTensor precondition_rhs(const DenseTensor& d, const NkpPreconditioner& pre) {
  return pre.apply_inverse(d);
}

PreconditionedOperator::PreconditionedOperator(SylvesterOperator base,
                                               NkpPreconditioner pre)
    : base_(std::move(base)), pre_(std::move(pre)) {
  if (pre_.factor_count() != base_.order()) {
    throw ConfigError("PreconditionedOperator: factor counts do not match");
  }
  for (int i = 0; i < pre_.factor_count(); ++i) {
    const std::int64_t expect = base_.factor(base_.order() - 1 - i).rows();
    if (pre_.q(i).rows() != expect) {
      throw ShapeError("PreconditionedOperator: Q_" + std::to_string(i + 1) +
                       " has size " + std::to_string(pre_.q(i).rows()) +
                       " but pairs a factor of size " + std::to_string(expect));
    }
  }
}

DenseTensor PreconditionedOperator::apply(const DenseTensor& x) const {
  return pre_.apply_inverse(base_.apply(x));
}

DenseTensor PreconditionedOperator::apply_transpose(const DenseTensor& x) const {
  return base_.apply_transpose(pre_.apply_inverse_transpose(x));
}

namespace {

// Fits (or accepts) the preconditioner, transforms the system, and hands
// (L~, D~) to the matching base solver body.
template <typename Solver>
SolveReport run_preconditioned(const SylvesterOperator& op, const DenseTensor& d,
                               const PrecondSolveOptions& opts, Solver&& solver) {
  NkpPreconditioner pre =
      opts.preconditioner ? *opts.preconditioner : fit_nkp(op, opts.fit);
  PreconditionedOperator pop(op, std::move(pre));
  DenseTensor d_tilde = pop.preconditioner().apply_inverse(d);
  return solver(pop, d_tilde);
}

}  // namespace

SolveReport solve_ptlb(const SylvesterOperator& op, const DenseTensor& d,
                       const DenseTensor& x0, const SolveConfig& cfg,
                       const PrecondSolveOptions& opts, TlbTrace* trace) {
  return run_preconditioned(op, d, opts,
                            [&](const OperatorHandle& pop, const DenseTensor& dt) {
                              return solve_tlb(pop, dt, x0, cfg, trace);
                            });
}

SolveReport solve_ptbicor(const SylvesterOperator& op, const DenseTensor& d,
                          const DenseTensor& x0, const SolveConfig& cfg,
                          const PrecondSolveOptions& opts, BicorTrace* trace) {
  return run_preconditioned(op, d, opts,
                            [&](const OperatorHandle& pop, const DenseTensor& dt) {
                              return solve_tbicor(pop, dt, x0, cfg, trace);
                            });
}

SolveReport solve_ptcors(const SylvesterOperator& op, const DenseTensor& d,
                         const DenseTensor& x0, const SolveConfig& cfg,
                         const PrecondSolveOptions& opts, TcorsTrace* trace) {
  return run_preconditioned(op, d, opts,
                            [&](const OperatorHandle& pop, const DenseTensor& dt) {
                              return solve_tcors(pop, dt, x0, cfg, trace);
                            });
}

}  // namespace sylten
