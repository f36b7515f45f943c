#pragma once

#include <memory>
#include <string>
#include <vector>

#include "zermelo/georce.hpp"
#include "zermelo/metric.hpp"

namespace zermelo {

struct OptimizerConfig {
  double lr = 0.01;  ///< ADAM step size
  double beta1 = 0.9, beta2 = 0.999, eps = 1e-8;
  int outer_iters = 10000;
  double tol = 1e-4;   ///< stop when |Δ total time| per outer iteration < tol
  int sub_iters = 10;  ///< pregeodesic refinement iterations per outer iteration
  double fd_step = 1e-5;  ///< relative central-difference step for tack gradients
  bool constrain_to_segment = false;  ///< tacks parametrized by arc length on A→B

  /// Multi-start initializations (each entry: one tack configuration).
  /// Empty: a single uniform subdivision of the segment A→B.
  std::vector<std::vector<Vec2>> starts;       ///< free mode
  std::vector<std::vector<double>> starts_1d;  ///< constrained mode (arc lengths)
  int random_starts = 0;
  unsigned seed = 0;
  int threads = 1;
};

/// A tacking problem: metrics[i] governs the segment between waypoint i
/// and waypoint i+1 of A, z_1, ..., z_{n_tacks}, B.
struct TackProblem {
  std::vector<MetricPtr> metrics;  ///< size n_tacks + 1
  Vec2 A = Vec2::Zero(), B = Vec2::Zero();
  int n_tacks = 0;
  double t0 = 0.0;
  SolverConfig solver;
  OptimizerConfig opt;
};

struct TackSolution {
  std::vector<Vec2> tacks;
  std::vector<DiscreteTrajectory> segments;
  std::vector<std::string> metric_labels;
  double total_time = 0.0;
  int outer_iterations = 0;
  bool converged = false;
  bool solver_failure = false;        ///< any segment line search failed
  std::vector<double> best_history;   ///< best-so-far time per outer iteration
  std::vector<Vec2> snell;            ///< refraction residual at each tack
  double min_tack_separation = 0.0;   ///< over consecutive tack pairs (inf if < 2)
  double min_endpoint_distance = 0.0; ///< closest tack to A or B (inf if none)
  bool coalesced = false;             ///< a tack pair within 1e-4
  bool tack_at_endpoint = false;      ///< a tack within 1e-4 of A or B
  int start_index = 0;                ///< which multi-start produced the result
};

/// Total arrival time of the stitched chain A → tacks... → B, solving
/// each segment pregeodesic to the solver tolerance and starting each
/// segment at the previous arrival time.  Optionally returns the segment
/// trajectories.  Throws std::invalid_argument when consecutive
/// waypoints coincide.
double total_time(const TackProblem& problem, const std::vector<Vec2>& tacks,
                  std::vector<DiscreteTrajectory>* segments = nullptr);

/// Alternating optimization: per outer iteration the segment
/// pregeodesics are refined (sub_iters solver iterations, warm-started)
/// and one ADAM step is taken on the tack points, with the gradient of
/// the total arrival time by central differences (warm-started
/// re-solves).  Multi-starts run independently (in parallel up to
/// opt.threads) and the best observed solution is returned.
TackSolution optimize_tacks(const TackProblem& problem);

}  // namespace zermelo
