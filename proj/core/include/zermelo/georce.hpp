#pragma once

#include <vector>

#include "zermelo/metric.hpp"
#include "zermelo/trajectory.hpp"

namespace zermelo {

struct SolverConfig {
  double tol = 1e-4;       ///< stop when max_s |v_s change|_∞ < tol
  int T = 1000;            ///< number of control steps
  double rho = 0.5;        ///< backtracking factor
  int max_iter = 10000;
  int max_backtracks = 60;
};

struct GeorceDiagnostics {
  int iterations = 0;
  std::vector<double> energy_history;  ///< accepted energies, initial first
  std::vector<int> backtracks;         ///< per accepted iteration
  double final_step = 0.0;             ///< fixed-point residual at exit
  double stationarity = 0.0;           ///< max_s |2 G_s (v_s − v*_s)|_∞ at exit
  bool line_search_failed = false;
  bool converged = false;
};

/// Dual recursion π_{T−1} = 0, π_{s−1} = ξ_s + π_s L_s^(t) + π_s, using
/// each jet's contracted ξ_s = v_sᵀ (∂G/∂t)_s v_s.
std::vector<double> backward_duals(const std::vector<FinslerJet>& jets);

/// Closed-form control update: with suffix sums
/// S_s = Σ_{j>s} (ν_j + π_j L_j^(x)) and w_s = S_s + ζ_s + π_s L_s^(v),
///
///   μ = (Σ G_s⁻¹)⁻¹ (2(A − B) − Σ G_s⁻¹ w_s),
///   v*_s = −½ G_s⁻¹ (μ + w_s),
///
/// which satisfies Σ v*_s = B − A by construction.  Throws on an
/// ill-conditioned fundamental tensor (condition number > 1e12).
std::vector<Vec2> update_controls(const std::vector<FinslerJet>& jets,
                                  const std::vector<double>& pi, const Vec2& A, const Vec2& B,
                                  Vec2* mu_out = nullptr);

struct GeorceResult {
  DiscreteTrajectory trajectory;
  GeorceDiagnostics diag;
};

/// Pregeodesic boundary-value solver: fixed-point iteration of
/// backward_duals + update_controls with a monotone backtracking line
/// search on the energy Σ(Δt)².  Starts from the straight line unless
/// `warm_start` (T controls) is given.
GeorceResult georce_solve(const FinslerMetric& m, const Vec2& A, const Vec2& B, double t0,
                          const SolverConfig& cfg,
                          const std::vector<Vec2>* warm_start = nullptr);

}  // namespace zermelo
