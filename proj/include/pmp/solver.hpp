#pragma once

#include <Eigen/Sparse>
#include <Eigen/SparseCholesky>
#include <algorithm>
#include <chrono>
#include <cstdio>
#include <cmath>
#include <limits>
#include <string>
#include <unordered_map>
#include <vector>

#include "pmp/polynomial.hpp"

namespace pmp::nlp {

inline constexpr double kInf = std::numeric_limits<double>::infinity();

// g(x) == value
struct Equality {
  Poly g;
  double value = 0.0;
  std::string label;
};

// lo <= g(x) <= hi; either side may be infinite.
struct Inequality {
  Poly g;
  double lo = -kInf;
  double hi = kInf;
  std::string label;
};

struct Problem {
  std::vector<std::string> var_names;
  Poly objective;
  std::vector<Equality> equalities;
  std::vector<Inequality> inequalities;

  int num_vars() const { return static_cast<int>(var_names.size()); }
};

enum class SolveStatus { Converged, MaxIterations, Diverged, LineSearchFailed };

inline const char* to_string(SolveStatus s) {
  switch (s) {
    case SolveStatus::Converged: return "Converged";
    case SolveStatus::MaxIterations: return "MaxIterations";
    case SolveStatus::Diverged: return "SolverDiverged";
    case SolveStatus::LineSearchFailed: return "LineSearchFailed";
  }
  return "?";
}

struct SolverOptions {
  double tol_primal = 1e-9;
  double tol_dual = 1e-6;
  double tol_compl = 1e-6;
  int max_iterations = 200;
  // Starting barrier parameter. Warm starts near a solution use a smaller one.
  double mu_init = 0.1;
  double armijo = 1e-4;
  double backtrack = 0.5;
  bool trace = false;  // per-iteration log on stderr
};

struct SolveResult {
  SolveStatus status = SolveStatus::MaxIterations;
  std::vector<double> x;
  int iterations = 0;
  double wall_time = 0.0;
  double objective = 0.0;
  double primal_inf = 0.0;
  double dual_inf = 0.0;
  double compl_inf = 0.0;

  bool ok() const { return status == SolveStatus::Converged; }
};

// Largest equality residual or inequality violation at x.
inline double primal_violation(const Problem& prob, std::span<const double> x) {
  double worst = 0.0;
  for (const auto& e : prob.equalities) {
    worst = std::max(worst, std::abs(e.g(x) - e.value));
  }
  for (const auto& c : prob.inequalities) {
    const double v = c.g(x);
    worst = std::max({worst, c.lo - v, v - c.hi});
  }
  return worst;
}

namespace detail {

struct SparseRow {
  std::vector<int> cols;
  std::vector<double> vals;

  void fill(const Poly& p, std::span<const double> x) {
    std::fill(vals.begin(), vals.end(), 0.0);
    p.gradient(x, 1.0, [&](int var, double v) {
      const auto it = std::lower_bound(cols.begin(), cols.end(), var);
      vals[it - cols.begin()] += v;
    });
  }
  double dot(const Eigen::VectorXd& d) const {
    double sum = 0.0;
    for (size_t k = 0; k < cols.size(); ++k) sum += vals[k] * d[cols[k]];
    return sum;
  }
};

inline SparseRow make_row(const Poly& p) {
  SparseRow r;
  r.cols = p.support();
  r.vals.assign(r.cols.size(), 0.0);
  return r;
}

// Primal-dual interior-point method with a log barrier on slack variables.
// Inequalities h(x) + s = 0 with s >= 0; Newton steps come from the reduced
// KKT system factored by sparse LDL^T with inertia correction. Steps are
// globalized by a filter line search on (constraint violation, barrier
// objective) with a second-order correction and a feasibility fallback.
class InteriorPoint {
 public:
  InteriorPoint(const Problem& prob, const SolverOptions& opt)
      : prob_(prob), opt_(opt), n_(prob.num_vars()),
        me_(static_cast<int>(prob.equalities.size())) {
    for (size_t i = 0; i < prob.inequalities.size(); ++i) {
      const auto& c = prob.inequalities[i];
      if (std::isfinite(c.lo)) sides_.push_back({static_cast<int>(i), -1.0, c.lo});
      if (std::isfinite(c.hi)) sides_.push_back({static_cast<int>(i), 1.0, c.hi});
    }
    mi_ = static_cast<int>(sides_.size());
    for (const auto& e : prob.equalities) eq_rows_.push_back(make_row(e.g));
    for (const auto& c : prob.inequalities) in_rows_.push_back(make_row(c.g));
    grad_f_row_ = make_row(prob.objective);

    auto add_slot = [&](int r, int c) {
      const long long key = static_cast<long long>(r) * n_ + c;
      if (hess_index_.emplace(key, static_cast<int>(hess_r_.size())).second) {
        hess_r_.push_back(r);
        hess_c_.push_back(c);
      }
    };
    for (int i = 0; i < n_; ++i) add_slot(i, i);
    prob.objective.hessian_structure(add_slot);
    for (const auto& e : prob.equalities) e.g.hessian_structure(add_slot);
    for (const auto& c : prob.inequalities) c.g.hessian_structure(add_slot);
    hess_v_.assign(hess_r_.size(), 0.0);
  }

  SolveResult run(std::vector<double> x0) {
    const auto t0 = std::chrono::steady_clock::now();
    SolveResult res = iterate(std::move(x0));
    res.wall_time =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    return res;
  }

 private:
  struct Side {
    int con;
    double sign;  // h = sign * (g - bound) <= 0
    double bound;
  };

  struct Values {
    double f = 0.0;
    Eigen::VectorXd c;  // equality residuals
    Eigen::VectorXd h;  // one-sided inequality values, feasible when <= 0
  };

  bool eval_values(std::span<const double> x, Values& v) const {
    v.f = prob_.objective(x);
    v.c.resize(me_);
    for (int e = 0; e < me_; ++e) {
      v.c[e] = prob_.equalities[e].g(x) - prob_.equalities[e].value;
    }
    std::vector<double> g(prob_.inequalities.size());
    for (size_t i = 0; i < g.size(); ++i) g[i] = prob_.inequalities[i].g(x);
    v.h.resize(mi_);
    for (int i = 0; i < mi_; ++i) {
      v.h[i] = sides_[i].sign * (g[sides_[i].con] - sides_[i].bound);
    }
    return std::isfinite(v.f) && v.c.allFinite() && v.h.allFinite();
  }

  void eval_derivatives(std::span<const double> x) {
    grad_f_.setZero(n_);
    grad_f_row_.fill(prob_.objective, x);
    for (size_t k = 0; k < grad_f_row_.cols.size(); ++k) {
      grad_f_[grad_f_row_.cols[k]] = grad_f_row_.vals[k];
    }
    for (int e = 0; e < me_; ++e) eq_rows_[e].fill(prob_.equalities[e].g, x);
    for (size_t i = 0; i < in_rows_.size(); ++i) {
      in_rows_[i].fill(prob_.inequalities[i].g, x);
    }
  }

  void eval_hessian(std::span<const double> x, const Eigen::VectorXd& y,
                    const Eigen::VectorXd& z) {
    std::fill(hess_v_.begin(), hess_v_.end(), 0.0);
    auto acc = [&](int r, int c, double v) {
      hess_v_[hess_index_.at(static_cast<long long>(r) * n_ + c)] += v;
    };
    prob_.objective.hessian(x, 1.0, acc);
    for (int e = 0; e < me_; ++e) {
      if (y[e] != 0.0) prob_.equalities[e].g.hessian(x, y[e], acc);
    }
    std::vector<double> zcon(prob_.inequalities.size(), 0.0);
    for (int i = 0; i < mi_; ++i) zcon[sides_[i].con] += sides_[i].sign * z[i];
    for (size_t i = 0; i < zcon.size(); ++i) {
      if (zcon[i] != 0.0) prob_.inequalities[i].g.hessian(x, zcon[i], acc);
    }
  }

  // J_I^T w for one-sided rows.
  Eigen::VectorXd ineq_jt(const Eigen::VectorXd& w) const {
    Eigen::VectorXd out = Eigen::VectorXd::Zero(n_);
    for (int i = 0; i < mi_; ++i) {
      const auto& row = in_rows_[sides_[i].con];
      const double scale = sides_[i].sign * w[i];
      for (size_t k = 0; k < row.cols.size(); ++k) out[row.cols[k]] += scale * row.vals[k];
    }
    return out;
  }
  Eigen::VectorXd eq_jt(const Eigen::VectorXd& w) const {
    Eigen::VectorXd out = Eigen::VectorXd::Zero(n_);
    for (int e = 0; e < me_; ++e) {
      const auto& row = eq_rows_[e];
      for (size_t k = 0; k < row.cols.size(); ++k) out[row.cols[k]] += w[e] * row.vals[k];
    }
    return out;
  }
  double ineq_j_dot(int i, const Eigen::VectorXd& d) const {
    return sides_[i].sign * in_rows_[sides_[i].con].dot(d);
  }

  double hess_quad(const Eigen::VectorXd& d) const {
    double sum = 0.0;
    for (size_t k = 0; k < hess_v_.size(); ++k) {
      const double v = hess_v_[k] * d[hess_r_[k]] * d[hess_c_[k]];
      sum += hess_r_[k] == hess_c_[k] ? v : 2.0 * v;
    }
    return sum;
  }

  // Assembles and factors the reduced KKT matrix; true when the inertia is
  // (n, me, 0).
  bool factor(const Eigen::VectorXd& sigma, double delta_w) {
    const int dim = n_ + me_;
    std::vector<Eigen::Triplet<double>> trip;
    trip.reserve(hess_v_.size() + 8 * mi_ + 4 * me_ + dim);
    for (size_t k = 0; k < hess_v_.size(); ++k) {
      const double v = hess_v_[k] + (hess_r_[k] == hess_c_[k] ? delta_w : 0.0);
      trip.emplace_back(hess_r_[k], hess_c_[k], v);
    }
    for (int i = 0; i < mi_; ++i) {
      const auto& row = in_rows_[sides_[i].con];
      for (size_t a = 0; a < row.cols.size(); ++a) {
        for (size_t b = 0; b <= a; ++b) {
          trip.emplace_back(row.cols[a], row.cols[b],
                            sigma[i] * row.vals[a] * row.vals[b]);
        }
      }
    }
    for (int e = 0; e < me_; ++e) {
      const auto& row = eq_rows_[e];
      for (size_t k = 0; k < row.cols.size(); ++k) {
        trip.emplace_back(n_ + e, row.cols[k], row.vals[k]);
      }
      trip.emplace_back(n_ + e, n_ + e, -kDeltaC);
    }
    kkt_.resize(dim, dim);
    kkt_.setFromTriplets(trip.begin(), trip.end());
    if (!analyzed_) {
      ldlt_.analyzePattern(kkt_);
      analyzed_ = true;
    }
    ldlt_.factorize(kkt_);
    if (ldlt_.info() != Eigen::Success) return false;
    const auto& d = ldlt_.vectorD();
    int pos = 0;
    int neg = 0;
    for (int i = 0; i < d.size(); ++i) {
      if (!std::isfinite(d[i])) return false;
      if (d[i] > 0.0) ++pos;
      else if (d[i] < 0.0) ++neg;
    }
    return pos == n_ && neg == me_;
  }

  bool factor_with_correction(const Eigen::VectorXd& sigma) {
    if (factor(sigma, 0.0)) {
      delta_w_used_ = 0.0;
      return true;
    }
    double dw = last_delta_w_ == 0.0 ? 1e-4 : std::max(1e-20, last_delta_w_ / 3.0);
    for (int attempt = 0; attempt < 60; ++attempt) {
      if (factor(sigma, dw)) {
        last_delta_w_ = dw;
        delta_w_used_ = dw;
        return true;
      }
      dw *= last_delta_w_ == 0.0 ? 100.0 : 8.0;
      if (dw > 1e40) break;
    }
    return false;
  }

  Eigen::VectorXd kkt_solve(const Eigen::VectorXd& rhs) const {
    Eigen::VectorXd sol = ldlt_.solve(rhs);
    // One step of iterative refinement against the assembled matrix.
    Eigen::VectorXd full = kkt_.selfadjointView<Eigen::Lower>() * sol;
    sol += ldlt_.solve(rhs - full);
    return sol;
  }

  static double inf_norm(const Eigen::VectorXd& v) {
    return v.size() == 0 ? 0.0 : v.lpNorm<Eigen::Infinity>();
  }

  static double frac_to_boundary(const Eigen::VectorXd& v, const Eigen::VectorXd& dv,
                                 double tau) {
    double alpha = 1.0;
    for (int i = 0; i < v.size(); ++i) {
      if (dv[i] < 0.0) alpha = std::min(alpha, -tau * v[i] / dv[i]);
    }
    return alpha;
  }

  static double theta(const Values& v, const Eigen::VectorXd& s) {
    return v.c.lpNorm<1>() + (v.h + s).lpNorm<1>();
  }

  double barrier_value(const Values& v, const Eigen::VectorXd& s, double mu) const {
    double barrier = 0.0;
    for (int i = 0; i < mi_; ++i) barrier -= std::log(s[i]);
    return v.f + mu * barrier;
  }

  SolveResult iterate(std::vector<double> xv) {
    SolveResult res;
    Values val;
    if (!eval_values(xv, val)) {
      res.status = SolveStatus::Diverged;
      res.x = xv;
      return res;
    }
    double mu = opt_.mu_init;
    const double mu_min = std::min(opt_.tol_compl, opt_.tol_dual) / 10.0;
    Eigen::VectorXd s(mi_);
    Eigen::VectorXd z(mi_);
    for (int i = 0; i < mi_; ++i) {
      s[i] = std::max(-val.h[i], mu);
      z[i] = mu / s[i];
    }
    Eigen::VectorXd y = Eigen::VectorXd::Zero(me_);
    int ls_failures = 0;

    for (int iter = 0;; ++iter) {
      res.iterations = iter;
      eval_derivatives(xv);
      const Eigen::VectorXd rd = grad_f_ + eq_jt(y) + ineq_jt(z);
      const Eigen::VectorXd rI = val.h + s;

      constexpr double kSMax = 100.0;
      const double dual_scale =
          std::max(kSMax, (y.lpNorm<1>() + z.lpNorm<1>()) /
                              std::max(1, me_ + mi_)) / kSMax;
      const double compl_scale =
          std::max(kSMax, z.lpNorm<1>() / std::max(1, mi_)) / kSMax;
      const double dual_inf = inf_norm(rd) / dual_scale;
      double primal_inf = std::max(inf_norm(val.c), inf_norm(rI));
      for (int i = 0; i < mi_; ++i) primal_inf = std::max(primal_inf, val.h[i]);
      const double compl_inf = inf_norm(s.cwiseProduct(z)) / compl_scale;

      res.x = xv;
      res.objective = val.f;
      res.primal_inf = primal_inf;
      res.dual_inf = dual_inf;
      res.compl_inf = compl_inf;
      if (primal_inf <= opt_.tol_primal && dual_inf <= opt_.tol_dual &&
          compl_inf <= opt_.tol_compl) {
        res.status = SolveStatus::Converged;
        return res;
      }
      if (iter >= opt_.max_iterations) {
        res.status = SolveStatus::MaxIterations;
        return res;
      }

      // Barrier update once the current subproblem is solved well enough.
      for (;;) {
        const double e_mu = std::max(
            {dual_inf, primal_inf,
             inf_norm((s.cwiseProduct(z).array() - mu).matrix()) / compl_scale});
        if (e_mu > 10.0 * mu || mu <= mu_min) break;
        mu = std::max(mu_min, std::min(0.2 * mu, std::pow(mu, 1.5)));
      }

      eval_hessian(xv, y, z);
      const Eigen::VectorXd sigma = z.cwiseQuotient(s);
      if (!factor_with_correction(sigma)) {
        res.status = SolveStatus::Diverged;
        return res;
      }

      // Reduced Newton system.
      const Eigen::VectorXd sinv_rc = z - (mu * s.cwiseInverse());
      Eigen::VectorXd rhs(n_ + me_);
      rhs.head(n_) =
          -rd - ineq_jt(sigma.cwiseProduct(rI) - sinv_rc);
      rhs.tail(me_) = -val.c;
      const Eigen::VectorXd sol = kkt_solve(rhs);
      if (!sol.allFinite()) {
        res.status = SolveStatus::Diverged;
        return res;
      }
      const Eigen::VectorXd dx = sol.head(n_);
      const Eigen::VectorXd dy = sol.tail(me_);
      Eigen::VectorXd ds(mi_);
      Eigen::VectorXd dz(mi_);
      for (int i = 0; i < mi_; ++i) {
        ds[i] = -rI[i] - ineq_j_dot(i, dx);
        dz[i] = sigma[i] * (ineq_j_dot(i, dx) + rI[i]) - sinv_rc[i];
      }

      const double tau = std::max(0.99, 1.0 - mu);
      const double alpha_s_max = frac_to_boundary(s, ds, tau);
      const double alpha_z_max = frac_to_boundary(z, dz, tau);

      // Filter line search on (constraint violation, barrier objective).
      const double theta0 = theta(val, s);
      const double phi0 = barrier_value(val, s, mu);
      double slope = grad_f_.dot(dx);
      for (int i = 0; i < mi_; ++i) slope -= mu * ds[i] / s[i];
      if (mu != filter_mu_) {
        filter_.clear();
        filter_mu_ = mu;
      }
      if (theta_max_ < 0.0) {
        theta_max_ = 1e4 * std::max(1.0, theta0);
        theta_min_ = 1e-4 * std::max(1.0, theta0);
      }

      double alpha = alpha_s_max;
      bool accepted = false;
      bool f_type = false;
      Values trial;
      std::vector<double> xt(n_);
      Eigen::VectorXd st(mi_);
      // Returns 0 = reject, 1 = accept (objective step), 2 = accept (filter step).
      auto acceptable = [&](const Values& tv, const Eigen::VectorXd& ts, double a) {
        const double th = theta(tv, ts);
        const double ph = barrier_value(tv, ts, mu);
        if (!std::isfinite(ph) || th > theta_max_) return 0;
        for (const auto& [fth, fph] : filter_) {
          if (th >= fth && ph >= fph) return 0;
        }
        const bool switching =
            slope < 0.0 && a * std::pow(-slope, 2.3) > std::pow(theta0, 1.1);
        if (switching && theta0 <= theta_min_) {
          return ph <= phi0 + opt_.armijo * a * slope ? 1 : 0;
        }
        return th <= (1.0 - 1e-5) * theta0 || ph <= phi0 - 1e-8 * theta0 ? 2 : 0;
      };

      const bool tiny = [&] {
        for (int j = 0; j < n_; ++j) {
          if (std::abs(dx[j]) > 1e-14 * (1.0 + std::abs(xv[j]))) return false;
        }
        return true;
      }();

      for (int ls = 0; ls < 60; ++ls) {
        for (int j = 0; j < n_; ++j) xt[j] = xv[j] + alpha * dx[j];
        st = s + alpha * ds;
        const bool finite = eval_values(xt, trial);
        if (finite && tiny) {
          accepted = true;
          f_type = true;
          break;
        }
        const int verdict = finite ? acceptable(trial, st, alpha) : 0;
        if (verdict > 0) {
          accepted = true;
          f_type = verdict == 1;
          break;
        }
        if (ls == 0 && finite && theta(trial, st) >= theta0) {
          // Second-order correction against the constraint curvature.
          const Eigen::VectorXd rI_t = trial.h + st;
          Eigen::VectorXd rhs_c(n_ + me_);
          rhs_c.head(n_) = -ineq_jt(sigma.cwiseProduct(rI_t));
          rhs_c.tail(me_) = -trial.c;
          const Eigen::VectorXd corr = kkt_solve(rhs_c);
          const Eigen::VectorXd cx = corr.head(n_);
          Eigen::VectorXd ds_c(mi_);
          for (int i = 0; i < mi_; ++i) {
            ds_c[i] = alpha * ds[i] - rI_t[i] - ineq_j_dot(i, cx);
          }
          if (frac_to_boundary(s, ds_c, tau) >= 1.0) {
            std::vector<double> xc(n_);
            for (int j = 0; j < n_; ++j) xc[j] = xv[j] + alpha * dx[j] + cx[j];
            const Eigen::VectorXd sc = s + ds_c;
            Values tc;
            if (eval_values(xc, tc)) {
              const int v = acceptable(tc, sc, alpha);
              if (v > 0) {
                xt = xc;
                st = sc;
                trial = tc;
                accepted = true;
                f_type = v == 1;
                break;
              }
            }
          }
        }
        alpha *= opt_.backtrack;
        if (alpha < 1e-13) break;
      }
      bool restored = false;
      const bool stalling = accepted && alpha < 0.1 * alpha_s_max && short_steps_ >= 2;
      if (!accepted || alpha < 1e-4 * alpha_s_max || stalling) {
        // The filter blocks progress. Try a pure feasibility step on the
        // constraint residuals, reusing the factorization.
        Eigen::VectorXd rhs_r(n_ + me_);
        rhs_r.head(n_) = -ineq_jt(sigma.cwiseProduct(rI));
        rhs_r.tail(me_) = -val.c;
        const Eigen::VectorXd fr = kkt_solve(rhs_r);
        const Eigen::VectorXd fx = fr.head(n_);
        Eigen::VectorXd fs(mi_);
        for (int i = 0; i < mi_; ++i) fs[i] = -rI[i] - ineq_j_dot(i, fx);
        double a = frac_to_boundary(s, fs, tau);
        std::vector<double> xr(n_);
        Eigen::VectorXd sr(mi_);
        Values tr;
        for (int ls = 0; ls < 30 && theta0 > 0.0; ++ls, a *= 0.5) {
          for (int j = 0; j < n_; ++j) xr[j] = xv[j] + a * fx[j];
          sr = s + a * fs;
          if (eval_values(xr, tr) && theta(tr, sr) <= (1.0 - 1e-4 * a) * theta0) {
            restored = true;
            break;
          }
        }
        if (restored) {
          xt = xr;
          st = sr;
          trial = tr;
          alpha = a;
          accepted = true;
          f_type = true;
          filter_.clear();
          filter_.emplace_back(theta0, phi0);
        }
      }
      if (!accepted) {
        // No acceptable point along the direction: drop the filter history and
        // take the full step. Repeated failures end the solve.
        if (++ls_failures > 8) {
          res.status = SolveStatus::LineSearchFailed;
          return res;
        }
        filter_.clear();
        alpha = alpha_s_max;
        for (int j = 0; j < n_; ++j) xt[j] = xv[j] + alpha * dx[j];
        st = s + alpha * ds;
        if (!eval_values(xt, trial)) {
          res.status = SolveStatus::Diverged;
          return res;
        }
      } else {
        ls_failures = 0;
        if (!f_type) filter_.emplace_back((1.0 - 1e-5) * theta0, phi0 - 1e-8 * theta0);
      }

      if (opt_.trace) {
        std::fprintf(stderr,
                     "%3d f=%.9g pinf=%.2e dinf=%.2e cinf=%.2e mu=%.1e a=%.2e "
                     "dw=%.1e |dx|=%.1e |dz|=%.1e az=%.2f%s\n",
                     iter, val.f, primal_inf, dual_inf, compl_inf, mu, alpha,
                     delta_w_used_, inf_norm(dx), inf_norm(dz), alpha_z_max,
                     restored ? " r" : accepted ? (f_type ? " f" : " h") : " forced");
      }
      short_steps_ = accepted && !restored && alpha < 0.1 * alpha_s_max ? short_steps_ + 1 : 0;
      xv = xt;
      s = st;
      val = trial;
      y += alpha * dy;
      z += std::min(alpha_z_max, 1.0) * dz;
      constexpr double kSigmaMax = 1e10;
      for (int i = 0; i < mi_; ++i) {
        s[i] = std::max(s[i], 1e-300);
        z[i] = std::clamp(z[i], mu / (kSigmaMax * s[i]), kSigmaMax * mu / s[i]);
      }
      const bool x_ok = std::all_of(xv.begin(), xv.end(), [](double v) {
        return std::isfinite(v) && std::abs(v) < 1e20;
      });
      if (!x_ok || !y.allFinite() || !z.allFinite()) {
        res.status = SolveStatus::Diverged;
        res.x = xv;
        return res;
      }
    }
  }

  static constexpr double kDeltaC = 1e-10;

  const Problem& prob_;
  SolverOptions opt_;
  int n_;
  int me_;
  int mi_ = 0;
  std::vector<Side> sides_;
  std::vector<SparseRow> eq_rows_;
  std::vector<SparseRow> in_rows_;
  SparseRow grad_f_row_;
  Eigen::VectorXd grad_f_;
  std::unordered_map<long long, int> hess_index_;
  std::vector<int> hess_r_;
  std::vector<int> hess_c_;
  std::vector<double> hess_v_;
  Eigen::SparseMatrix<double> kkt_;
  Eigen::SimplicialLDLT<Eigen::SparseMatrix<double>, Eigen::Lower,
                        Eigen::AMDOrdering<int>>
      ldlt_;
  bool analyzed_ = false;
  double last_delta_w_ = 0.0;
  std::vector<std::pair<double, double>> filter_;
  double filter_mu_ = -1.0;
  double theta_max_ = -1.0;
  int short_steps_ = 0;
  double theta_min_ = 0.0;
  double delta_w_used_ = 0.0;
};

}  // namespace detail

// Dense Jacobian of all constraints at x: equality rows first, then one row
// per inequality, assembled by the same sparse rows the solver uses.
inline Eigen::MatrixXd constraint_jacobian(const Problem& prob, std::span<const double> x) {
  const auto rows = prob.equalities.size() + prob.inequalities.size();
  Eigen::MatrixXd J = Eigen::MatrixXd::Zero(static_cast<long>(rows), prob.num_vars());
  long r = 0;
  auto put = [&](const Poly& g) {
    auto row = detail::make_row(g);
    row.fill(g, x);
    for (size_t k = 0; k < row.cols.size(); ++k) J(r, row.cols[k]) = row.vals[k];
    ++r;
  };
  for (const auto& e : prob.equalities) put(e.g);
  for (const auto& c : prob.inequalities) put(c.g);
  return J;
}

inline SolveResult solve(const Problem& prob, std::vector<double> x0,
                         const SolverOptions& opt = {}) {
  detail::InteriorPoint ipm(prob, opt);
  return ipm.run(std::move(x0));
}

}  // namespace pmp::nlp
