#include "zermelo/tacking.hpp"

#include <algorithm>
#include <cmath>
#include <future>
#include <limits>
#include <random>
#include <sstream>
#include <stdexcept>

namespace zermelo {

namespace {

struct Chain {
  std::vector<DiscreteTrajectory> segments;
  std::vector<GeorceDiagnostics> diags;
  double total = std::numeric_limits<double>::quiet_NaN();
  bool failed = false;
};

std::vector<Vec2> waypoints(const TackProblem& p, const std::vector<Vec2>& tacks) {
  std::vector<Vec2> pts;
  pts.reserve(tacks.size() + 2);
  pts.push_back(p.A);
  pts.insert(pts.end(), tacks.begin(), tacks.end());
  pts.push_back(p.B);
  return pts;
}

void check_problem(const TackProblem& p) {
  if (p.n_tacks < 0) throw std::invalid_argument("optimize_tacks: n_tacks must be >= 0");
  if (static_cast<int>(p.metrics.size()) != p.n_tacks + 1) {
    std::ostringstream os;
    os << "optimize_tacks: expected " << (p.n_tacks + 1) << " metrics for " << p.n_tacks
       << " tacks, got " << p.metrics.size();
    throw std::invalid_argument(os.str());
  }
  for (const auto& m : p.metrics)
    if (!m) throw std::invalid_argument("optimize_tacks: null metric");
}

/// Solve the stitched chain through the given waypoints.  Segments
/// before `first` are copied from `warm` (which must then be present and
/// complete); later segments warm-start from `warm` when shapes match.
/// `iter_cap` > 0 caps the solver iterations per segment.
Chain solve_chain(const TackProblem& p, const std::vector<Vec2>& pts, const Chain* warm,
                  std::size_t first, int iter_cap) {
  const std::size_t n_seg = pts.size() - 1;
  Chain out;
  out.segments.resize(n_seg);
  out.diags.resize(n_seg);
  double t = p.t0;
  for (std::size_t i = 0; i < n_seg; ++i) {
    if (i < first && warm) {
      out.segments[i] = warm->segments[i];
      out.diags[i] = warm->diags[i];
      t = out.segments[i].t.back();
      continue;
    }
    if ((pts[i + 1] - pts[i]).norm() == 0.0) {
      std::ostringstream os;
      os << "total_time: waypoints " << i << " and " << (i + 1) << " coincide at ("
         << pts[i].x() << ", " << pts[i].y() << "); segments must have distinct endpoints";
      throw std::invalid_argument(os.str());
    }
    SolverConfig cfg = p.solver;
    if (iter_cap > 0) cfg.max_iter = iter_cap;
    const std::vector<Vec2>* ws = nullptr;
    if (warm && i < warm->segments.size() &&
        warm->segments[i].v.size() == static_cast<std::size_t>(cfg.T))
      ws = &warm->segments[i].v;
    GeorceResult r;
    try {
      r = georce_solve(*p.metrics[i], pts[i], pts[i + 1], t, cfg, ws);
    } catch (const std::exception& e) {
      std::ostringstream os;
      os << "segment " << i << " (metric '" << p.metrics[i]->label() << "'): " << e.what();
      throw std::runtime_error(os.str());
    }
    out.segments[i] = std::move(r.trajectory);
    out.diags[i] = r.diag;
    if (r.diag.line_search_failed) out.failed = true;
    t = out.segments[i].t.back();
  }
  out.total = t - p.t0;
  return out;
}

std::vector<Vec2> tacks_from_params(const TackProblem& p, const std::vector<double>& q) {
  std::vector<Vec2> tacks(p.n_tacks);
  if (p.opt.constrain_to_segment) {
    const Vec2 u = (p.B - p.A).normalized();
    for (int k = 0; k < p.n_tacks; ++k) tacks[k] = p.A + q[k] * u;
  } else {
    for (int k = 0; k < p.n_tacks; ++k) tacks[k] = Vec2(q[2 * k], q[2 * k + 1]);
  }
  return tacks;
}

struct RunResult {
  std::vector<double> params;
  Chain chain;
  double best_total = std::numeric_limits<double>::infinity();
  std::vector<double> best_params;
  int outer_iterations = 0;
  bool converged = false;
  std::vector<double> best_history;
};

/// One multi-start run of the alternating scheme.
RunResult run_one(const TackProblem& p, std::vector<double> q) {
  const int dim = static_cast<int>(q.size());
  std::vector<double> m1(dim, 0.0), m2(dim, 0.0);
  RunResult run;
  const double scale = std::max(1.0, (p.B - p.A).norm());
  const double h = p.opt.fd_step * scale;

  Chain chain;  // current stitched solution, reused as warm start
  double prev_total = std::numeric_limits<double>::quiet_NaN();
  for (int it = 0; it < p.opt.outer_iters; ++it) {
    std::vector<Vec2> tacks = tacks_from_params(p, q);
    chain = solve_chain(p, waypoints(p, tacks), it == 0 ? nullptr : &chain, 0, p.opt.sub_iters);
    run.outer_iterations = it + 1;
    if (!chain.failed && chain.total < run.best_total) {
      run.best_total = chain.total;
      run.best_params = q;
    }
    run.best_history.push_back(run.best_total);
    if (it > 0 && std::abs(chain.total - prev_total) < p.opt.tol) {
      run.converged = true;
      break;
    }
    prev_total = chain.total;

    // Central-difference gradient of the arrival time; segments before
    // the perturbed tack are unaffected and reused verbatim.  Both
    // perturbed chains warm-start from the current chain under the same
    // iteration cap, so the truncation bias cancels in the difference.
    std::vector<double> grad(dim, 0.0);
    for (int j = 0; j < dim; ++j) {
      const int tack = p.opt.constrain_to_segment ? j : j / 2;
      auto eval = [&](double dq) {
        std::vector<double> qq = q;
        qq[j] += dq;
        Chain c = solve_chain(p, waypoints(p, tacks_from_params(p, qq)), &chain,
                              static_cast<std::size_t>(tack), p.opt.sub_iters);
        return c.total;
      };
      grad[j] = (eval(h) - eval(-h)) / (2.0 * h);
    }
    for (int j = 0; j < dim; ++j) {
      m1[j] = p.opt.beta1 * m1[j] + (1.0 - p.opt.beta1) * grad[j];
      m2[j] = p.opt.beta2 * m2[j] + (1.0 - p.opt.beta2) * grad[j] * grad[j];
      const double hat1 = m1[j] / (1.0 - std::pow(p.opt.beta1, it + 1));
      const double hat2 = m2[j] / (1.0 - std::pow(p.opt.beta2, it + 1));
      q[j] -= p.opt.lr * hat1 / (std::sqrt(hat2) + p.opt.eps);
    }
  }
  if (run.best_params.empty()) run.best_params = q;  // every solve failed
  run.params = std::move(q);
  run.chain = std::move(chain);
  return run;
}

std::vector<std::vector<double>> build_starts(const TackProblem& p) {
  const int n = p.n_tacks;
  std::vector<std::vector<double>> starts;
  if (p.opt.constrain_to_segment) {
    for (const auto& s : p.opt.starts_1d) {
      if (static_cast<int>(s.size()) != n)
        throw std::invalid_argument("optimize_tacks: a starts_1d entry has the wrong size");
      starts.push_back(s);
    }
  } else {
    for (const auto& s : p.opt.starts) {
      if (static_cast<int>(s.size()) != n)
        throw std::invalid_argument("optimize_tacks: a starts entry has the wrong size");
      std::vector<double> q(2 * n);
      for (int k = 0; k < n; ++k) {
        q[2 * k] = s[k].x();
        q[2 * k + 1] = s[k].y();
      }
      starts.push_back(std::move(q));
    }
  }
  const double L = (p.B - p.A).norm();
  if (starts.empty()) {
    // Uniform subdivision of the segment A -> B.
    std::vector<double> q;
    for (int k = 1; k <= n; ++k) {
      const double c = L * k / (n + 1);
      if (p.opt.constrain_to_segment) {
        q.push_back(c);
      } else {
        const Vec2 z = p.A + c * (p.B - p.A).normalized();
        q.push_back(z.x());
        q.push_back(z.y());
      }
    }
    starts.push_back(std::move(q));
  }
  std::mt19937_64 rng(p.opt.seed);
  std::uniform_real_distribution<double> along(0.05, 0.95), across(-0.25, 0.25);
  for (int r = 0; r < p.opt.random_starts; ++r) {
    std::vector<double> cs(n);
    for (double& c : cs) c = along(rng);
    std::sort(cs.begin(), cs.end());
    std::vector<double> q;
    const Vec2 u = (p.B - p.A).normalized();
    const Vec2 nrm(-u.y(), u.x());
    for (int k = 0; k < n; ++k) {
      if (p.opt.constrain_to_segment) {
        q.push_back(cs[k] * L);
      } else {
        const Vec2 z = p.A + cs[k] * L * u + across(rng) * L * nrm;
        q.push_back(z.x());
        q.push_back(z.y());
      }
    }
    starts.push_back(std::move(q));
  }
  return starts;
}

}  // namespace

double total_time(const TackProblem& problem, const std::vector<Vec2>& tacks,
                  std::vector<DiscreteTrajectory>* segments) {
  check_problem(problem);
  if (static_cast<int>(tacks.size()) != problem.n_tacks)
    throw std::invalid_argument("total_time: tack count does not match the problem");
  Chain chain = solve_chain(problem, waypoints(problem, tacks), nullptr, 0, 0);
  if (segments) *segments = chain.segments;
  return chain.total;
}

TackSolution optimize_tacks(const TackProblem& problem) {
  check_problem(problem);
  if ((problem.B - problem.A).norm() == 0.0)
    throw std::invalid_argument("optimize_tacks: A and B coincide");

  TackSolution sol;
  if (problem.n_tacks == 0) {
    Chain chain = solve_chain(problem, waypoints(problem, {}), nullptr, 0, 0);
    sol.segments = std::move(chain.segments);
    sol.total_time = chain.total;
    sol.outer_iterations = chain.diags[0].iterations;
    sol.converged = chain.diags[0].converged;
    sol.solver_failure = chain.failed;
    sol.best_history.push_back(sol.total_time);
    sol.metric_labels.push_back(problem.metrics[0]->label());
    sol.min_tack_separation = std::numeric_limits<double>::infinity();
    sol.min_endpoint_distance = std::numeric_limits<double>::infinity();
    return sol;
  }

  const std::vector<std::vector<double>> starts = build_starts(problem);
  std::vector<RunResult> runs(starts.size());
  const int threads = std::max(1, problem.opt.threads);
  if (threads == 1 || starts.size() == 1) {
    for (std::size_t i = 0; i < starts.size(); ++i) runs[i] = run_one(problem, starts[i]);
  } else {
    for (std::size_t base = 0; base < starts.size(); base += threads) {
      std::vector<std::future<RunResult>> batch;
      const std::size_t end = std::min(starts.size(), base + threads);
      for (std::size_t i = base; i < end; ++i)
        batch.push_back(std::async(std::launch::async,
                                   [&problem, &starts, i] { return run_one(problem, starts[i]); }));
      for (std::size_t i = base; i < end; ++i) runs[i] = batch[i - base].get();
    }
  }

  // Deterministic reduction: best time, ties to the earlier start.
  std::size_t win = 0;
  for (std::size_t i = 1; i < runs.size(); ++i)
    if (runs[i].best_total < runs[win].best_total) win = i;
  const RunResult& w = runs[win];

  // Fully converge the stitched chain at the best observed tacks.
  std::vector<Vec2> tacks = tacks_from_params(problem, w.best_params);
  Chain chain = solve_chain(problem, waypoints(problem, tacks), &w.chain, 0, 0);

  sol.tacks = std::move(tacks);
  sol.total_time = chain.total;
  sol.outer_iterations = w.outer_iterations;
  sol.converged = w.converged;
  sol.solver_failure = chain.failed;
  sol.best_history = w.best_history;
  sol.start_index = static_cast<int>(win);
  for (const auto& m : problem.metrics) sol.metric_labels.push_back(m->label());

  // Refraction residual at each tack: difference of the velocity
  // gradients of the incoming and outgoing slowness.
  sol.snell.resize(sol.tacks.size());
  for (std::size_t k = 0; k < sol.tacks.size(); ++k) {
    const DiscreteTrajectory& in = chain.segments[k];
    const DiscreteTrajectory& out = chain.segments[k + 1];
    const Vec2 v_in = in.v.back();
    const Vec2 v_out = out.v.front();
    const double tz = in.t.back();
    Vec2 g_in, g_out, dx;
    double dt;
    problem.metrics[k]->first_derivatives(tz, sol.tacks[k], v_in, dt, dx, g_in);
    problem.metrics[k + 1]->first_derivatives(tz, sol.tacks[k], v_out, dt, dx, g_out);
    sol.snell[k] = g_in - g_out;
  }

  sol.min_tack_separation = std::numeric_limits<double>::infinity();
  for (std::size_t k = 0; k + 1 < sol.tacks.size(); ++k)
    sol.min_tack_separation =
        std::min(sol.min_tack_separation, (sol.tacks[k + 1] - sol.tacks[k]).norm());
  sol.min_endpoint_distance = std::numeric_limits<double>::infinity();
  for (const Vec2& z : sol.tacks)
    sol.min_endpoint_distance = std::min(
        {sol.min_endpoint_distance, (z - problem.A).norm(), (z - problem.B).norm()});
  sol.coalesced = sol.min_tack_separation < 1e-4;
  sol.tack_at_endpoint = sol.min_endpoint_distance < 1e-4;
  sol.segments = std::move(chain.segments);
  return sol;
}

}  // namespace zermelo
