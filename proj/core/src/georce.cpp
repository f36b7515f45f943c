#include "zermelo/georce.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

namespace zermelo {

namespace {

Mat2 inverse_guarded(const Mat2& G, int s) {
  // Symmetric 2×2: eigenvalue ratio as the condition number.
  const double tr = G(0, 0) + G(1, 1);
  const double det = G(0, 0) * G(1, 1) - G(0, 1) * G(1, 0);
  const double disc = std::sqrt(std::max(0.0, tr * tr / 4.0 - det));
  const double lo = tr / 2.0 - disc, hi = tr / 2.0 + disc;
  if (!(lo > 0.0) || hi / lo > 1e12)
    throw std::runtime_error("georce: ill-conditioned fundamental tensor at s = " +
                             std::to_string(s) + " (eigenvalues " + std::to_string(lo) + ", " +
                             std::to_string(hi) + ")");
  Mat2 inv;
  inv << G(1, 1), -G(0, 1), -G(1, 0), G(0, 0);
  return inv / det;
}

std::vector<FinslerJet> eval_jets(const FinslerMetric& m, const DiscreteTrajectory& traj) {
  std::vector<FinslerJet> jets(traj.v.size());
  for (std::size_t s = 0; s < traj.v.size(); ++s)
    jets[s] = eval_jet(m, traj.t[s], traj.x[s], traj.v[s]);
  return jets;
}

}  // namespace

std::vector<double> backward_duals(const std::vector<FinslerJet>& jets) {
  const std::size_t T = jets.size();
  if (T == 0) throw std::invalid_argument("backward_duals: empty horizon");
  std::vector<double> pi(T, 0.0);
  for (std::size_t s = T - 1; s > 0; --s)
    pi[s - 1] = jets[s].xi + pi[s] * jets[s].dF_dt + pi[s];
  return pi;
}

std::vector<Vec2> update_controls(const std::vector<FinslerJet>& jets,
                                  const std::vector<double>& pi, const Vec2& A, const Vec2& B,
                                  Vec2* mu_out) {
  const std::size_t T = jets.size();
  if (pi.size() != T) throw std::invalid_argument("update_controls: |jets| != |pi|");
  if (T == 0) throw std::invalid_argument("update_controls: empty horizon");

  // Suffix sums S_s = Σ_{j>s} (ν_j + π_j L_j^(x)), computed once in reverse.
  std::vector<Vec2> w(T);
  Vec2 suffix = Vec2::Zero();
  for (std::size_t s = T; s-- > 0;) {
    w[s] = suffix + jets[s].zeta + pi[s] * jets[s].dF_dv;
    suffix += jets[s].nu + pi[s] * jets[s].dF_dx;
  }

  std::vector<Mat2> Ginv(T);
  Mat2 M = Mat2::Zero();
  Vec2 rhs = 2.0 * (A - B);
  for (std::size_t s = 0; s < T; ++s) {
    Ginv[s] = inverse_guarded(jets[s].G, static_cast<int>(s));
    M += Ginv[s];
    rhs -= Ginv[s] * w[s];
  }
  const Vec2 mu = M.ldlt().solve(rhs);
  if (mu_out) *mu_out = mu;

  std::vector<Vec2> vnew(T);
  for (std::size_t s = 0; s < T; ++s) vnew[s] = -0.5 * (Ginv[s] * (mu + w[s]));
  return vnew;
}

GeorceResult georce_solve(const FinslerMetric& m, const Vec2& A, const Vec2& B, double t0,
                          const SolverConfig& cfg, const std::vector<Vec2>* warm_start) {
  if (cfg.T < 2) throw std::invalid_argument("georce: T must be >= 2");
  if (!(cfg.tol > 0.0)) throw std::invalid_argument("georce: tol must be positive");
  if (!(cfg.rho > 0.0 && cfg.rho < 1.0))
    throw std::invalid_argument("georce: rho must lie in (0, 1)");
  if ((B - A).norm() == 0.0) throw std::invalid_argument("georce: A and B coincide");

  std::vector<Vec2> v;
  if (warm_start) {
    if (static_cast<int>(warm_start->size()) != cfg.T)
      throw std::invalid_argument("georce: warm start size mismatch");
    v = *warm_start;
    // Rebase controls whose sum does not match the requested endpoints
    // (warm starts carried across nearby boundary conditions), so every
    // iterate's rollout ends exactly at B.
    Vec2 sum = Vec2::Zero();
    for (const Vec2& vs : v) sum += vs;
    const Vec2 corr = (B - A - sum) / cfg.T;
    if (corr.cwiseAbs().maxCoeff() > 0.0)
      for (Vec2& vs : v) vs += corr;
  } else {
    v.assign(cfg.T, (B - A) / cfg.T);
  }

  GeorceResult res;
  DiscreteTrajectory traj = rollout(m, A, t0, v);
  double E = energy(traj);
  res.diag.energy_history.push_back(E);

  std::vector<FinslerJet> jets;
  for (int it = 1; it <= cfg.max_iter; ++it) {
    res.diag.iterations = it;
    jets = eval_jets(m, traj);
    const std::vector<double> pi = backward_duals(jets);
    const std::vector<Vec2> vnew = update_controls(jets, pi, A, B);

    double step = 0.0;
    for (int s = 0; s < cfg.T; ++s)
      step = std::max(step, (vnew[s] - v[s]).cwiseAbs().maxCoeff());
    res.diag.final_step = step;

    if (step < cfg.tol) {
      // The proposal is within tolerance of the current iterate: accept it
      // outright so the change between accepted iterates is the residual —
      // unless it would nudge the energy up, in which case the current
      // iterate is already the better of the pair.
      DiscreteTrajectory final_traj = rollout(m, A, t0, vnew);
      const double Efinal = energy(final_traj);
      if (Efinal <= E) {
        v = vnew;
        traj = std::move(final_traj);
        E = Efinal;
        res.diag.energy_history.push_back(E);
        res.diag.backtracks.push_back(0);
      }
      res.diag.converged = true;
      break;
    }

    // Backtracking line search on the blended controls; equality accepts.
    double alpha = 1.0;
    bool accepted = false;
    std::vector<Vec2> vtry(cfg.T);
    DiscreteTrajectory trial;
    double Etry = 0.0;
    int bt = 0;
    for (; bt <= cfg.max_backtracks; ++bt) {
      for (int s = 0; s < cfg.T; ++s) vtry[s] = alpha * vnew[s] + (1.0 - alpha) * v[s];
      trial = rollout(m, A, t0, vtry);
      Etry = energy(trial);
      if (Etry <= E) {  // NaN energies fail this test and keep backtracking
        accepted = true;
        break;
      }
      alpha *= cfg.rho;
    }
    if (!accepted) {
      res.diag.line_search_failed = true;
      break;  // keep the best (current) iterate
    }
    v = std::move(vtry);
    traj = std::move(trial);
    E = Etry;
    res.diag.energy_history.push_back(E);
    res.diag.backtracks.push_back(bt);
  }

  // Stationarity estimate: one more proposal from the final iterate.
  jets = eval_jets(m, traj);
  const std::vector<Vec2> vstar = update_controls(jets, backward_duals(jets), A, B);
  double r = 0.0;
  for (int s = 0; s < cfg.T; ++s)
    r = std::max(r, (2.0 * (jets[s].G * (v[s] - vstar[s]))).cwiseAbs().maxCoeff());
  res.diag.stationarity = r;

  res.trajectory = std::move(traj);
  return res;
}

}  // namespace zermelo
