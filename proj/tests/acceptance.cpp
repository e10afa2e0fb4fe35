// Acceptance suite: one pass/fail line per criterion, nonzero exit if any
// criterion fails. Tolerances and iteration bands are pinned here.

#include <cmath>
#include <cstdio>
#include <functional>
#include <string>
#include <vector>

#include "support/oracles.hpp"
#include "support/random.hpp"
#include "sylten/nkp.hpp"
#include "sylten/problems.hpp"
#include "sylten/solvers.hpp"

using namespace sylten;

namespace {

int failures = 0;
std::vector<std::string> notes;

void note(const std::string& s) { notes.push_back(s); }

std::string sci(double v) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.3e", v);
  return buf;
}

void report(int id, const char* title, bool ok) {
  std::printf("%s  criterion %d: %s\n", ok ? "PASS" : "FAIL", id, title);
  for (const std::string& n : notes) std::printf("      %s\n", n.c_str());
  notes.clear();
  if (!ok) ++failures;
}

SolveConfig exact_error_cfg(const ProblemInstance& inst, double tol = 1e-10) {
  SolveConfig cfg;
  cfg.tol = tol;
  cfg.rule = StoppingRule::RelErrorVsExact;
  cfg.exact = inst.exact;
  return cfg;
}

struct RunResult {
  int iters = -1;
  bool converged = false;
};

RunResult run_solver(const std::string& name, const ProblemInstance& inst,
                     const SolveConfig& cfg) {
  DenseTensor x0(inst.op.shape());
  SolveReport rep;
  if (name == "tlb") rep = solve_tlb(inst.op, inst.rhs, x0, cfg);
  else if (name == "tbicor") rep = solve_tbicor(inst.op, inst.rhs, x0, cfg);
  else if (name == "tcors") rep = solve_tcors(inst.op, inst.rhs, x0, cfg);
  else if (name == "ptlb") rep = solve_ptlb(inst.op, inst.rhs, x0, cfg);
  else if (name == "ptbicor") rep = solve_ptbicor(inst.op, inst.rhs, x0, cfg);
  else rep = solve_ptcors(inst.op, inst.rhs, x0, cfg);
  return {rep.iterations, rep.status == SolveStatus::Converged};
}

bool in_band(const std::string& name, const RunResult& r, int center, int half) {
  const bool ok = r.converged && r.iters >= center - half && r.iters <= center + half;
  note(name + ": " + (r.converged ? std::to_string(r.iters) + " iterations"
                                  : std::string("did not converge")) +
       " (band " + std::to_string(center - half) + ".." +
       std::to_string(center + half) + ")");
  return ok;
}

Shape corpus_shape(std::size_t i) {
  return i % 2 == 0 ? Shape{2, 2, 2} : Shape{3, 3, 3};
}

// --- criteria -------------------------------------------------------------

bool criterion1() {
  bool ok = true;
  {
    const ProblemInstance inst = make_convection_diffusion(1.0, {1, 1, 1});
    const SolveConfig cfg = exact_error_cfg(inst);
    ok &= in_band("v=1 tlb", run_solver("tlb", inst, cfg), 48, 10);
    ok &= in_band("v=1 tbicor", run_solver("tbicor", inst, cfg), 48, 10);
    ok &= in_band("v=1 tcors", run_solver("tcors", inst, cfg), 32, 8);
    ok &= in_band("v=1 ptlb", run_solver("ptlb", inst, cfg), 25, 8);
    ok &= in_band("v=1 ptbicor", run_solver("ptbicor", inst, cfg), 24, 8);
    ok &= in_band("v=1 ptcors", run_solver("ptcors", inst, cfg), 15, 6);
  }
  {
    const ProblemInstance inst = make_convection_diffusion(0.1, {1, 1, 1});
    const SolveConfig cfg = exact_error_cfg(inst);
    ok &= in_band("v=0.1 tcors", run_solver("tcors", inst, cfg), 30, 8);
    ok &= in_band("v=0.1 ptcors", run_solver("ptcors", inst, cfg), 13, 6);
  }
  return ok;
}

bool criterion2() {
  const ProblemInstance inst = make_poisson3d();
  SolveConfig cfg = exact_error_cfg(inst);
  cfg.max_iters = 150;

  const char* names[] = {"tlb", "tbicor", "tcors", "ptlb", "ptbicor", "ptcors"};
  RunResult res[6];
  bool ok = true;
  for (int i = 0; i < 6; ++i) {
    res[i] = run_solver(names[i], inst, cfg);
    note(std::string(names[i]) + ": " +
         (res[i].converged ? std::to_string(res[i].iters) + " iterations"
                           : std::string("did not converge within 150")));
    ok &= res[i].converged;
  }
  if (ok) {
    ok &= res[3].iters < res[0].iters;  // ptlb < tlb
    ok &= res[4].iters < res[1].iters;  // ptbicor < tbicor
    ok &= res[5].iters < res[2].iters;  // ptcors < tcors
    ok &= res[2].iters < res[1].iters;  // tcors < tbicor
    for (int i = 0; i < 5; ++i) ok &= res[5].iters <= res[i].iters;  // ptcors first
  }
  return ok;
}

bool criterion3() {
  const ProblemInstance inst = make_fdm2d();
  const SolveConfig cfg = exact_error_cfg(inst);

  const char* names[] = {"tlb", "tbicor", "tcors", "ptlb", "ptbicor", "ptcors"};
  RunResult res[6];
  bool ok = true;
  for (int i = 0; i < 6; ++i) {
    res[i] = run_solver(names[i], inst, cfg);
    note(std::string(names[i]) + ": " +
         (res[i].converged ? std::to_string(res[i].iters) + " iterations"
                           : std::string("did not converge")));
    ok &= res[i].converged;
  }
  if (ok) {
    // ptcors ranks first, ptbicor second.
    for (int i = 0; i < 5; ++i) ok &= res[5].iters <= res[i].iters;
    for (int i = 0; i < 6; ++i) {
      if (i == 4 || i == 5) continue;
      ok &= res[4].iters <= res[i].iters;
    }
  }
  return ok;
}

bool criterion4() {
  // The biorthogonality statement assumes the procedure has not broken
  // down. In floating point a weak pivot (the angle between W_bar and
  // L(V_bar) collapsing) inflates the basis norms by 1/sqrt(pivot) and the
  // absolute deviations with them, so the suite classifies pivots below
  // 5e-3 of their operand scale as breakdowns and certifies the vectors
  // produced up to that point. The independent scalar reference exceeds
  // the bound on such runs as well; continuing through them needs
  // look-ahead, which this library does not do.
  double worst = 0.0;
  int shortened = 0;
  long pairs = 0;
  for (std::size_t k = 0; k < 50; ++k) {
    const ProblemInstance inst = make_random(corpus_shape(k), 1000 + k);
    DenseTensor r0 = test_rng::random_tensor(inst.op.shape(), 5000 + k);
    DenseTensor v1, w1;
    try {
      std::tie(v1, w1) = seed_pair(inst.op, r0);
    } catch (const BreakdownError&) {
      continue;
    }
    const LanczosState state = lanczos_procedure(inst.op, v1, w1, 6, 5e-3);
    if (state.breakdown) ++shortened;
    for (std::size_t i = 0; i < state.v.size(); ++i) {
      for (std::size_t j = 0; j < state.v.size(); ++j) {
        const double val = inner(state.w[i], inst.op.apply(state.v[j]));
        worst = std::max(worst, std::abs(val - (i == j ? 1.0 : 0.0)));
        ++pairs;
      }
    }
  }
  note(std::to_string(pairs) + " pairs, " + std::to_string(shortened) +
       "/50 runs stopped at a near-breakdown pivot");
  note("max |<W_i, L(V_j)> - delta_ij| = " + sci(worst));
  return pairs > 1500 && worst <= 1e-8;
}

bool criterion5() {
  // Iterates past the convergence floor are cancellation noise with no
  // directional meaning; pairs are scanned above 1e-8 of the initial norm.
  // As in criterion 4, steps whose coefficient denominators collapse below
  // 1e-3 of their operand scale are breakdowns, not property violations.
  double worst = 0.0;
  long pairs = 0;
  int shortened = 0;
  for (std::size_t k = 0; k < 50; ++k) {
    const ProblemInstance inst = make_random(corpus_shape(k), 2000 + k);
    SolveConfig cfg = exact_error_cfg(inst, 1e-10);
    cfg.breakdown_tol = 1e-3;
    DenseTensor x0(inst.op.shape());
    BicorTrace trace;
    const SolveReport rep = solve_tbicor(inst.op, inst.rhs, x0, cfg, &trace);
    if (rep.status == SolveStatus::Breakdown) ++shortened;
    if (trace.states.empty()) continue;

    const double floor_r = 1e-8 * norm(trace.r0);
    const double floor_rs = 1e-8 * norm(trace.r0_star);
    std::vector<const DenseTensor*> r, lr, r_star;
    r.push_back(&trace.r0);
    lr.push_back(&trace.r0_star);
    r_star.push_back(&trace.r0_star);
    for (const BicorState& st : trace.states) {
      r.push_back(&st.r);
      lr.push_back(&st.t);
      r_star.push_back(&st.r_star);
    }
    for (std::size_t i = 0; i < lr.size(); ++i) {
      if (norm(*r[i]) < floor_r) continue;
      for (std::size_t j = 0; j < r_star.size(); ++j) {
        if (i == j || norm(*r_star[j]) < floor_rs) continue;
        const double denom = norm(*lr[i]) * norm(*r_star[j]);
        if (denom < 1e-280) continue;
        worst = std::max(worst, std::abs(inner(*lr[i], *r_star[j])) / denom);
        ++pairs;
      }
    }
    const double floor_s = 1e-8 * norm(trace.states.front().s);
    const double floor_ss = 1e-8 * norm(trace.states.front().s_star);
    for (std::size_t i = 0; i < trace.states.size(); ++i) {
      if (norm(trace.states[i].s) < floor_s) continue;
      for (std::size_t j = 0; j < trace.states.size(); ++j) {
        if (i == j || norm(trace.states[j].s_star) < floor_ss) continue;
        const double denom =
            norm(trace.states[i].s) * norm(trace.states[j].s_star);
        if (denom < 1e-280) continue;
        worst = std::max(
            worst, std::abs(inner(trace.states[i].s, trace.states[j].s_star)) / denom);
        ++pairs;
      }
    }
  }
  note(std::to_string(pairs) + " pairs above the noise floor, " +
       std::to_string(shortened) + "/50 runs stopped at a near-breakdown pivot");
  note("max normalized cross inner product = " + sci(worst));
  return pairs > 500 && worst <= 1e-7;
}

bool criterion6() {
  int failures_here = 0, usable = 0;
  for (std::size_t k = 0; k < 50; ++k) {
    const ProblemInstance inst = make_random(Shape{2, 2, 2}, 3000 + k);
    SolveConfig cfg = exact_error_cfg(inst, 1e-6);
    cfg.max_iters = 8;
    DenseTensor x0(inst.op.shape());

    const SolveReport rb = solve_tbicor(inst.op, inst.rhs, x0, cfg);
    const SolveReport rc = solve_tcors(inst.op, inst.rhs, x0, cfg);
    if (rb.status == SolveStatus::Breakdown || rc.status == SolveStatus::Breakdown) {
      continue;  // the finite-termination statement assumes no breakdown
    }
    ++usable;
    if (rb.status != SolveStatus::Converged || rb.iterations > 8) ++failures_here;
    if (rc.status != SolveStatus::Converged || rc.iterations > 8) ++failures_here;
  }
  note(std::to_string(usable) + "/50 systems breakdown-free, " +
       std::to_string(failures_here) + " term violations");
  return usable >= 45 && failures_here == 0;
}

bool criterion7() {
  bool ok = true;
  double worst_apply = 0.0, worst_iter = 0.0;
  const std::vector<Shape> shapes = {Shape{2, 2, 2}, Shape{4, 4, 4}, Shape{2, 3, 2},
                                     Shape{8}, Shape{3, 4}};
  for (std::size_t s = 0; s < shapes.size(); ++s) {
    const ProblemInstance inst = make_random(shapes[s], 4000 + s);
    const DenseMatrix a = oracle::kronecker_sum(inst.op.factors());

    // vec(apply) against the Kronecker-form matrix.
    DenseTensor x = test_rng::random_tensor(inst.op.shape(), 4100 + s);
    const std::vector<double> lhs = vectorize(inst.op.apply(x));
    const std::vector<double> rhs = oracle::matvec(a, vectorize(x));
    double num = 0.0, den = 0.0;
    for (std::size_t i = 0; i < lhs.size(); ++i) {
      num += (lhs[i] - rhs[i]) * (lhs[i] - rhs[i]);
      den += rhs[i] * rhs[i];
    }
    worst_apply = std::max(worst_apply, std::sqrt(num) / (1e-300 + std::sqrt(den)));

    SolveConfig cfg;
    cfg.rule = StoppingRule::RelResidual;
    cfg.tol = 1e-13;
    cfg.max_iters = 12;
    DenseTensor x0(inst.op.shape());
    const std::vector<double> b = vectorize(inst.rhs);
    const std::vector<double> z(b.size(), 0.0);

    auto step_diff = [&](const std::vector<DenseTensor>& got,
                         const std::vector<oracle::Vec>& want) {
      const std::size_t n = std::min(got.size(), want.size());
      double worst = 0.0;
      for (std::size_t kk = 0; kk < n; ++kk) {
        const std::vector<double> g = vectorize(got[kk]);
        double diff = 0.0, scale = 0.0;
        for (std::size_t i = 0; i < g.size(); ++i) {
          diff += (g[i] - want[kk][i]) * (g[i] - want[kk][i]);
          scale += want[kk][i] * want[kk][i];
        }
        worst = std::max(worst, std::sqrt(diff) / (1.0 + std::sqrt(scale)));
      }
      return worst;
    };

    TlbTrace tlb;
    solve_tlb(inst.op, inst.rhs, x0, cfg, &tlb);
    worst_iter = std::max(worst_iter,
                          step_diff(tlb.iterates, oracle::scalar_tlb_iterates(a, b, z, 12)));
    BicorTrace bicor;
    solve_tbicor(inst.op, inst.rhs, x0, cfg, &bicor);
    worst_iter = std::max(
        worst_iter, step_diff(bicor.iterates, oracle::scalar_bicor_iterates(a, b, z, 12)));
    TcorsTrace tcors;
    solve_tcors(inst.op, inst.rhs, x0, cfg, &tcors);
    worst_iter = std::max(
        worst_iter, step_diff(tcors.iterates, oracle::scalar_cors_iterates(a, b, z, 12)));
  }
  note("max vec(apply) deviation = " + sci(worst_apply));
  note("max per-step iterate deviation = " + sci(worst_iter));
  ok &= worst_apply <= 1e-12;
  ok &= worst_iter <= 1e-9;
  return ok;
}

bool criterion8() {
  bool ok = true;
  double worst = 0.0;
  for (std::size_t k = 0; k < 20; ++k) {
    const ProblemInstance inst =
        make_random(k % 2 == 0 ? Shape{2, 3, 2} : Shape{3, 3}, 6000 + k,
                    Conditioning::Raw);
    test_rng::SplitMix64 rng{7000 + k};
    NkpParams p;
    p.a.resize(static_cast<std::size_t>(inst.op.order()));
    for (auto& row : p.a) row = {rng.next(), rng.next()};

    // Dense Frobenius oracle.
    const int n = inst.op.order();
    DenseMatrix bmat(1, 1, 1.0);
    for (int i = 0; i < n; ++i) {
      const DenseMatrix& fac = inst.op.factor(n - 1 - i);
      DenseMatrix q(fac.rows(), fac.rows());
      for (std::int64_t col = 0; col < fac.rows(); ++col) {
        for (std::int64_t row = 0; row < fac.rows(); ++row) {
          q(row, col) = p.a[static_cast<std::size_t>(i)][0] * fac(row, col);
        }
        q(col, col) += p.a[static_cast<std::size_t>(i)][1];
      }
      bmat = oracle::kron(bmat, q);
    }
    const DenseMatrix afull = oracle::kronecker_sum(inst.op.factors());
    double dense = 0.0;
    for (std::int64_t j = 0; j < afull.cols(); ++j) {
      for (std::int64_t i = 0; i < afull.rows(); ++i) {
        const double d = afull(i, j) - bmat(i, j);
        dense += d * d;
      }
    }
    const double fast = nkp_objective(p, inst.op);
    worst = std::max(worst, std::abs(fast - dense) / (1.0 + std::abs(dense)));
  }
  note("max relative objective deviation = " + sci(worst));
  ok &= worst <= 1e-10;

  // Exact-Kronecker construction: first factor -E.
  DenseMatrix a1 = DenseMatrix::identity(3);
  for (std::int64_t i = 0; i < 3; ++i) a1(i, i) = -1.0;
  SylvesterOperator op({a1, test_rng::random_dominant_matrix(4, 61)});
  const NkpPreconditioner pre = fit_nkp(op);
  note("exact-case fitted objective = " + sci(pre.objective_value()));
  ok &= pre.objective_value() <= 1e-12;

  DenseTensor exact = test_rng::random_tensor(op.shape(), 62);
  DenseTensor rhs = op.apply(exact);
  SolveConfig cfg;
  cfg.rule = StoppingRule::RelErrorVsExact;
  cfg.exact = exact;
  cfg.tol = 1e-10;
  DenseTensor x0(op.shape());
  PrecondSolveOptions opts;
  opts.preconditioner = pre;
  const SolveReport rep = solve_ptbicor(op, rhs, x0, cfg, opts);
  note("exact-case ptbicor iterations = " + std::to_string(rep.iterations));
  ok &= rep.status == SolveStatus::Converged && rep.iterations <= 2;
  return ok;
}

bool criterion9() {
  // The residual is recomputed directly as D - L(X_m), so once |R_m| falls
  // to the 1e-10 |D| floor its direction is dominated by rounding noise in
  // the subtraction and carries no collinearity information.
  double worst = 0.0;
  int steps_checked = 0;
  for (std::size_t k = 0; k < 50; ++k) {
    const ProblemInstance inst = make_random(corpus_shape(k), 8000 + k);
    SolveConfig cfg = exact_error_cfg(inst, 1e-8);
    DenseTensor x0(inst.op.shape());
    TlbTrace trace;
    solve_tlb(inst.op, inst.rhs, x0, cfg, &trace);

    const double floor_r = 1e-10 * norm(inst.rhs);
    for (std::size_t m = 0; m < trace.residuals.size(); ++m) {
      if (m + 1 >= trace.lanczos.v.size()) break;
      if (norm(trace.residuals[m]) < floor_r) continue;
      const double denom = norm(trace.residuals[m]) * norm(trace.lanczos.v[m + 1]);
      const double cosine =
          std::abs(inner(trace.residuals[m], trace.lanczos.v[m + 1])) / denom;
      worst = std::max(worst, 1.0 - cosine);
      ++steps_checked;
    }
  }
  note(std::to_string(steps_checked) + " steps above the noise floor, max |1 - |cos|| = " +
       sci(worst));
  return steps_checked > 100 && worst <= 1e-8;
}

}  // namespace

int main() {
  report(1, "convection-diffusion iteration bands", criterion1());
  report(2, "Poisson convergence and ordering", criterion2());
  report(3, "variable-coefficient factors convergence and ranking", criterion3());
  report(4, "biorthogonality over the random corpus", criterion4());
  report(5, "residual and direction orthogonality", criterion5());
  report(6, "finite termination on tiny systems", criterion6());
  report(7, "scalar-oracle equivalence", criterion7());
  report(8, "preconditioner objective and exact case", criterion8());
  report(9, "projection residual collinearity", criterion9());

  if (failures > 0) {
    std::printf("%d criterion(s) failed\n", failures);
    return 1;
  }
  std::printf("all acceptance criteria passed\n");
  return 0;
}
