#include "lineopt/lp.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include <Eigen/Sparse>
#include <Eigen/SparseLU>

#include "lineopt/milp.hpp"

namespace lineopt {

const char* to_string(LpStatus s) {
  switch (s) {
    case LpStatus::optimal: return "optimal";
    case LpStatus::infeasible: return "infeasible";
    case LpStatus::unbounded: return "unbounded";
    case LpStatus::iteration_limit: return "iteration_limit";
  }
  return "?";
}

int LpProblem::add_col(double lb, double ub, double obj) {
  lower.push_back(lb);
  upper.push_back(ub);
  objective.push_back(obj);
  return num_cols++;
}

int LpProblem::add_row(std::vector<std::pair<int, double>> coef, char sense, double rhs) {
  rows.push_back(LpRow{std::move(coef), sense, rhs});
  return static_cast<int>(rows.size()) - 1;
}

namespace {

// Revised simplex over the computational form
//   min c^T x   s.t.  A x + s = b,  l <= (x, s) <= u,
// with one logical (slack) per row; variables are indexed structural first,
// then logicals. The basis inverse is a sparse LU factorization plus a
// product-form eta file, refactorized periodically. Phase 1 is the composite
// kind: infeasible basics get cost +-1 and block at the bound they violate.
class Simplex {
 public:
  Simplex(const LpProblem& lp, const LpOptions& opts) : lp_(lp), opts_(opts) {
    n_ = lp.num_cols;
    m_ = static_cast<int>(lp.rows.size());
    total_ = n_ + m_;
    build_columns();
    build_bounds();
  }

  LpOutcome run(const LpBasis* hint) {
    LpOutcome out;
    if (!install_basis(hint)) install_slack_basis();
    refactorize();
    compute_values();

    for (int round = 0; round < 4; ++round) {
      iterate(/*phase1=*/true);
      if (status_ == LoopStatus::iteration_limit) return finish_limit(out);
      if (max_infeasibility() > opts_.feas_tol) {
        if (finish_infeasible(out)) return out;
        continue;  // certificate did not verify; resume with a fresh factorization
      }

      iterate(/*phase1=*/false);
      if (status_ == LoopStatus::iteration_limit) return finish_limit(out);
      if (status_ == LoopStatus::unbounded_direction) {
        out.status = LpStatus::unbounded;
        out.iterations = iterations_;
        fill_primal(out);
        return out;
      }

      // Optimality candidate: confirm on a fresh factorization.
      refactorize();
      compute_values();
      if (max_infeasibility() <= 10 * opts_.feas_tol) return finish_optimal(out);
    }
    return finish_limit(out);
  }

 private:
  enum class LoopStatus { no_direction, unbounded_direction, iteration_limit };

  const LpProblem& lp_;
  LpOptions opts_;
  int n_ = 0, m_ = 0, total_ = 0;
  int iterations_ = 0;
  LoopStatus status_ = LoopStatus::no_direction;

  std::vector<int> colptr_, colrow_;
  std::vector<double> colval_;
  std::vector<double> b_;
  std::vector<double> lb_, ub_;  // size total_
  std::vector<double> cost_;    // internal min-sense cost, size total_

  std::vector<VarStatus> vstat_;
  std::vector<int> basic_;
  std::vector<double> value_;

  // adjoint() is a non-const view in Eigen's SparseLU; solving is logically const.
  mutable Eigen::SparseLU<Eigen::SparseMatrix<double>, Eigen::COLAMDOrdering<int>> lu_;
  struct Eta {
    int pos;
    double pivot;
    std::vector<std::pair<int, double>> col;  // alpha entries excluding pos
  };
  std::vector<Eta> etas_;

  std::vector<double> devex_;
  std::vector<double> yvec_;
  bool bland_ = false;
  int stall_ = 0;
  int drift_counter_ = 0;

  void build_columns() {
    colptr_.assign(static_cast<std::size_t>(n_) + 1, 0);
    for (const LpRow& r : lp_.rows)
      for (const auto& [j, v] : r.coef) {
        if (j < 0 || j >= n_) throw std::invalid_argument("lp row references unknown column");
        if (!std::isfinite(v)) throw std::invalid_argument("lp coefficient not finite");
        ++colptr_[static_cast<std::size_t>(j) + 1];
      }
    for (int j = 0; j < n_; ++j) colptr_[static_cast<std::size_t>(j) + 1] += colptr_[static_cast<std::size_t>(j)];
    colrow_.assign(static_cast<std::size_t>(colptr_[static_cast<std::size_t>(n_)]), 0);
    colval_.assign(colrow_.size(), 0.0);
    std::vector<int> fill(colptr_.begin(), colptr_.end() - 1);
    for (int i = 0; i < m_; ++i) {
      for (const auto& [j, v] : lp_.rows[static_cast<std::size_t>(i)].coef) {
        const int k = fill[static_cast<std::size_t>(j)]++;
        colrow_[static_cast<std::size_t>(k)] = i;
        colval_[static_cast<std::size_t>(k)] = v;
      }
    }
    b_.resize(static_cast<std::size_t>(m_));
    for (int i = 0; i < m_; ++i) {
      b_[static_cast<std::size_t>(i)] = lp_.rows[static_cast<std::size_t>(i)].rhs;
      if (!std::isfinite(b_[static_cast<std::size_t>(i)])) throw std::invalid_argument("lp rhs not finite");
    }
  }

  void build_bounds() {
    lb_.resize(static_cast<std::size_t>(total_));
    ub_.resize(static_cast<std::size_t>(total_));
    cost_.assign(static_cast<std::size_t>(total_), 0.0);
    for (int j = 0; j < n_; ++j) {
      lb_[static_cast<std::size_t>(j)] = lp_.lower[static_cast<std::size_t>(j)];
      ub_[static_cast<std::size_t>(j)] = lp_.upper[static_cast<std::size_t>(j)];
      if (lb_[static_cast<std::size_t>(j)] > ub_[static_cast<std::size_t>(j)])
        throw std::invalid_argument("lp column bounds crossed");
      cost_[static_cast<std::size_t>(j)] =
          lp_.maximize ? -lp_.objective[static_cast<std::size_t>(j)] : lp_.objective[static_cast<std::size_t>(j)];
    }
    for (int i = 0; i < m_; ++i) {
      const char s = lp_.rows[static_cast<std::size_t>(i)].sense;
      double lo, hi;
      if (s == '<') { lo = 0; hi = kInf; }
      else if (s == '>') { lo = -kInf; hi = 0; }
      else if (s == '=') { lo = 0; hi = 0; }
      else throw std::invalid_argument("lp row sense must be one of < = >");
      lb_[static_cast<std::size_t>(n_ + i)] = lo;
      ub_[static_cast<std::size_t>(n_ + i)] = hi;
    }
  }

  template <typename Fn>
  void for_col(int j, Fn&& fn) const {
    if (j < n_) {
      for (int k = colptr_[static_cast<std::size_t>(j)]; k < colptr_[static_cast<std::size_t>(j) + 1]; ++k)
        fn(colrow_[static_cast<std::size_t>(k)], colval_[static_cast<std::size_t>(k)]);
    } else {
      fn(j - n_, 1.0);
    }
  }

  double dot_col(int j, const std::vector<double>& y) const {
    double acc = 0;
    for_col(j, [&](int i, double v) { acc += y[static_cast<std::size_t>(i)] * v; });
    return acc;
  }

  void install_slack_basis() {
    vstat_.assign(static_cast<std::size_t>(total_), VarStatus::nonbasic_lower);
    basic_.resize(static_cast<std::size_t>(m_));
    for (int j = 0; j < n_; ++j) vstat_[static_cast<std::size_t>(j)] = default_nonbasic_status(j);
    for (int i = 0; i < m_; ++i) {
      basic_[static_cast<std::size_t>(i)] = n_ + i;
      vstat_[static_cast<std::size_t>(n_ + i)] = VarStatus::basic;
    }
    devex_.assign(static_cast<std::size_t>(total_), 1.0);
  }

  VarStatus default_nonbasic_status(int j) const {
    if (std::isfinite(lb_[static_cast<std::size_t>(j)])) return VarStatus::nonbasic_lower;
    if (std::isfinite(ub_[static_cast<std::size_t>(j)])) return VarStatus::nonbasic_upper;
    return VarStatus::nonbasic_free;
  }

  bool install_basis(const LpBasis* hint) {
    if (hint == nullptr || hint->empty()) return false;
    if (static_cast<int>(hint->status.size()) != total_ || static_cast<int>(hint->basic.size()) != m_)
      return false;
    int nb = 0;
    for (int j = 0; j < total_; ++j)
      if (hint->status[static_cast<std::size_t>(j)] == VarStatus::basic) ++nb;
    if (nb != m_) return false;
    for (int i = 0; i < m_; ++i) {
      const int j = hint->basic[static_cast<std::size_t>(i)];
      if (j < 0 || j >= total_ || hint->status[static_cast<std::size_t>(j)] != VarStatus::basic) return false;
    }
    vstat_ = hint->status;
    basic_ = hint->basic;
    for (int j = 0; j < total_; ++j) {
      VarStatus& s = vstat_[static_cast<std::size_t>(j)];
      if (s == VarStatus::basic) continue;
      if (s == VarStatus::nonbasic_lower && !std::isfinite(lb_[static_cast<std::size_t>(j)]))
        s = default_nonbasic_status(j);
      else if (s == VarStatus::nonbasic_upper && !std::isfinite(ub_[static_cast<std::size_t>(j)]))
        s = default_nonbasic_status(j);
    }
    devex_.assign(static_cast<std::size_t>(total_), 1.0);
    return true;
  }

  void refactorize() {
    std::vector<Eigen::Triplet<double>> trip;
    for (int i = 0; i < m_; ++i) {
      const int j = basic_[static_cast<std::size_t>(i)];
      for_col(j, [&](int r, double v) { trip.emplace_back(r, i, v); });
    }
    Eigen::SparseMatrix<double> B(m_, m_);
    B.setFromTriplets(trip.begin(), trip.end());
    lu_.compute(B);
    if (lu_.info() != Eigen::Success) {
      install_slack_basis();
      trip.clear();
      for (int i = 0; i < m_; ++i) trip.emplace_back(i, i, 1.0);
      Eigen::SparseMatrix<double> I(m_, m_);
      I.setFromTriplets(trip.begin(), trip.end());
      lu_.compute(I);
      if (lu_.info() != Eigen::Success) throw std::runtime_error("slack basis factorization failed");
    }
    etas_.clear();
  }

  Eigen::VectorXd ftran(Eigen::VectorXd v) const {
    Eigen::VectorXd x = lu_.solve(v);
    for (const Eta& e : etas_) {
      const double xp = x[e.pos] / e.pivot;
      if (xp != 0.0)
        for (const auto& [i, a] : e.col) x[i] -= a * xp;
      x[e.pos] = xp;
    }
    return x;
  }

  Eigen::VectorXd btran(Eigen::VectorXd v) const {
    for (auto it = etas_.rbegin(); it != etas_.rend(); ++it) {
      double acc = v[it->pos];
      for (const auto& [i, a] : it->col) acc -= a * v[i];
      v[it->pos] = acc / it->pivot;
    }
    return lu_.adjoint().solve(v);
  }

  void compute_values() {
    value_.assign(static_cast<std::size_t>(total_), 0.0);
    for (int j = 0; j < total_; ++j) {
      switch (vstat_[static_cast<std::size_t>(j)]) {
        case VarStatus::nonbasic_lower: value_[static_cast<std::size_t>(j)] = lb_[static_cast<std::size_t>(j)]; break;
        case VarStatus::nonbasic_upper: value_[static_cast<std::size_t>(j)] = ub_[static_cast<std::size_t>(j)]; break;
        case VarStatus::nonbasic_free:
        case VarStatus::basic: break;
      }
    }
    Eigen::VectorXd rhs(m_);
    for (int i = 0; i < m_; ++i) rhs[i] = b_[static_cast<std::size_t>(i)];
    for (int j = 0; j < total_; ++j) {
      if (vstat_[static_cast<std::size_t>(j)] == VarStatus::basic) continue;
      const double xv = value_[static_cast<std::size_t>(j)];
      if (xv == 0.0) continue;
      for_col(j, [&](int i, double v) { rhs[i] -= v * xv; });
    }
    const Eigen::VectorXd xb = ftran(rhs);
    for (int i = 0; i < m_; ++i) value_[static_cast<std::size_t>(basic_[static_cast<std::size_t>(i)])] = xb[i];
  }

  double infeas_of(int j) const {
    const double x = value_[static_cast<std::size_t>(j)];
    if (x > ub_[static_cast<std::size_t>(j)]) return x - ub_[static_cast<std::size_t>(j)];
    if (x < lb_[static_cast<std::size_t>(j)]) return lb_[static_cast<std::size_t>(j)] - x;
    return 0.0;
  }

  double max_infeasibility() const {
    double t = 0;
    for (int i = 0; i < m_; ++i) t = std::max(t, infeas_of(basic_[static_cast<std::size_t>(i)]));
    return t;
  }

  double total_infeasibility() const {
    double t = 0;
    for (int i = 0; i < m_; ++i) t += infeas_of(basic_[static_cast<std::size_t>(i)]);
    return t;
  }

  double phase1_cost(int j) const {
    const double x = value_[static_cast<std::size_t>(j)];
    if (x > ub_[static_cast<std::size_t>(j)] + opts_.feas_tol) return 1.0;
    if (x < lb_[static_cast<std::size_t>(j)] - opts_.feas_tol) return -1.0;
    return 0.0;
  }

  double current_objective_internal() const {
    double o = 0;
    for (int j = 0; j < n_; ++j) o += cost_[static_cast<std::size_t>(j)] * value_[static_cast<std::size_t>(j)];
    return o;
  }

  void iterate(bool phase1) {
    bland_ = false;
    stall_ = 0;

    while (true) {
      if (iterations_ >= opts_.max_iterations) {
        status_ = LoopStatus::iteration_limit;
        return;
      }
      if (phase1 && max_infeasibility() <= opts_.feas_tol) {
        status_ = LoopStatus::no_direction;
        return;
      }

      Eigen::VectorXd cb = Eigen::VectorXd::Zero(m_);
      for (int i = 0; i < m_; ++i) {
        const int j = basic_[static_cast<std::size_t>(i)];
        cb[i] = phase1 ? phase1_cost(j) : cost_[static_cast<std::size_t>(j)];
      }
      const Eigen::VectorXd y = btran(cb);
      yvec_.assign(y.data(), y.data() + m_);

      // Pricing.
      int q = -1, dir = 0;
      double best_score = 0.0;
      for (int j = 0; j < total_; ++j) {
        const VarStatus s = vstat_[static_cast<std::size_t>(j)];
        if (s == VarStatus::basic) continue;
        if (ub_[static_cast<std::size_t>(j)] - lb_[static_cast<std::size_t>(j)] <= 0.0) continue;
        const double cj = phase1 ? 0.0 : cost_[static_cast<std::size_t>(j)];
        const double rc = cj - dot_col(j, yvec_);
        int d = 0;
        if (s == VarStatus::nonbasic_lower) {
          if (rc < -opts_.opt_tol) d = +1;
        } else if (s == VarStatus::nonbasic_upper) {
          if (rc > opts_.opt_tol) d = -1;
        } else {
          if (rc < -opts_.opt_tol) d = +1;
          else if (rc > opts_.opt_tol) d = -1;
        }
        if (d == 0) continue;
        if (bland_) { q = j; dir = d; break; }
        const double score = rc * rc / devex_[static_cast<std::size_t>(j)];
        if (score > best_score) {  // ascending scan: ties keep the lowest index
          best_score = score;
          q = j;
          dir = d;
        }
      }
      if (q < 0) {
        status_ = LoopStatus::no_direction;
        return;
      }

      Eigen::VectorXd aq = Eigen::VectorXd::Zero(m_);
      for_col(q, [&](int i, double v) { aq[i] += v; });
      const Eigen::VectorXd alpha = ftran(aq);

      // Ratio test. Basic at position i moves at rate -dir*alpha_i.
      const double own_range =
          vstat_[static_cast<std::size_t>(q)] == VarStatus::nonbasic_free
              ? kInf
              : ub_[static_cast<std::size_t>(q)] - lb_[static_cast<std::size_t>(q)];
      double t_block = kInf;
      int block_pos = -1;
      double block_to = 0.0;
      for (int i = 0; i < m_; ++i) {
        const double a = alpha[i];
        if (std::abs(a) <= opts_.pivot_tol) continue;
        const int j = basic_[static_cast<std::size_t>(i)];
        const double rate = -static_cast<double>(dir) * a;
        const double x = value_[static_cast<std::size_t>(j)];
        const double lo = lb_[static_cast<std::size_t>(j)];
        const double hi = ub_[static_cast<std::size_t>(j)];
        double t_i = kInf, to = 0.0;
        if (phase1 && x > hi + opts_.feas_tol) {
          if (rate < 0) { t_i = (x - hi) / -rate; to = hi; }
        } else if (phase1 && x < lo - opts_.feas_tol) {
          if (rate > 0) { t_i = (lo - x) / rate; to = lo; }
        } else {
          if (rate > 0 && std::isfinite(hi)) { t_i = (hi - x) / rate; to = hi; }
          else if (rate < 0 && std::isfinite(lo)) { t_i = (x - lo) / -rate; to = lo; }
        }
        if (t_i == kInf) continue;
        if (t_i < 0.0) t_i = 0.0;
        if (t_i < t_block - 1e-12) {
          t_block = t_i;
          block_pos = i;
          block_to = to;
        } else if (t_i <= t_block + 1e-12 && block_pos >= 0 &&
                   j < basic_[static_cast<std::size_t>(block_pos)]) {
          block_pos = i;  // tie on the ratio: lowest variable index
          block_to = to;
        }
      }

      double t_star;
      bool flip;
      if (own_range <= t_block) {
        t_star = own_range;
        flip = true;
      } else {
        t_star = t_block;
        flip = false;
      }
      if (!std::isfinite(t_star)) {
        if (phase1) throw std::runtime_error("unbounded phase-1 direction (internal)");
        status_ = LoopStatus::unbounded_direction;
        return;
      }

      const double obj_before = phase1 ? total_infeasibility() : current_objective_internal();

      for (int i = 0; i < m_; ++i) {
        const double a = alpha[i];
        if (a == 0.0) continue;
        value_[static_cast<std::size_t>(basic_[static_cast<std::size_t>(i)])] -= dir * t_star * a;
      }

      if (flip) {
        value_[static_cast<std::size_t>(q)] =
            dir > 0 ? ub_[static_cast<std::size_t>(q)] : lb_[static_cast<std::size_t>(q)];
        vstat_[static_cast<std::size_t>(q)] =
            dir > 0 ? VarStatus::nonbasic_upper : VarStatus::nonbasic_lower;
      } else {
        const int leaving = basic_[static_cast<std::size_t>(block_pos)];
        const double pivot = alpha[block_pos];
        if (!bland_) update_devex(q, block_pos, alpha);

        const VarStatus qs = vstat_[static_cast<std::size_t>(q)];
        const double q_from = qs == VarStatus::nonbasic_upper  ? ub_[static_cast<std::size_t>(q)]
                              : qs == VarStatus::nonbasic_lower ? lb_[static_cast<std::size_t>(q)]
                                                                : 0.0;
        value_[static_cast<std::size_t>(q)] = q_from + dir * t_star;
        value_[static_cast<std::size_t>(leaving)] = block_to;
        vstat_[static_cast<std::size_t>(leaving)] =
            (std::isfinite(ub_[static_cast<std::size_t>(leaving)]) &&
             block_to == ub_[static_cast<std::size_t>(leaving)])
                ? VarStatus::nonbasic_upper
                : VarStatus::nonbasic_lower;
        vstat_[static_cast<std::size_t>(q)] = VarStatus::basic;
        basic_[static_cast<std::size_t>(block_pos)] = q;

        Eta e;
        e.pos = block_pos;
        e.pivot = pivot;
        for (int i = 0; i < m_; ++i)
          if (i != block_pos && alpha[i] != 0.0) e.col.emplace_back(i, alpha[i]);
        etas_.push_back(std::move(e));

        if (static_cast<int>(etas_.size()) >= opts_.refactor_interval || std::abs(pivot) < 1e-7) {
          refactorize();
          compute_values();
        }
      }

      ++iterations_;
      maybe_drift_check();

      const double obj_after = phase1 ? total_infeasibility() : current_objective_internal();
      if (obj_after < obj_before - 1e-12 * (1.0 + std::abs(obj_before))) {
        bland_ = false;
        stall_ = 0;
      } else if (++stall_ >= opts_.stall_limit) {
        bland_ = true;
      }
    }
  }

  void update_devex(int q, int block_pos, const Eigen::VectorXd& alpha) {
    const double ap = alpha[block_pos];
    if (std::abs(ap) < opts_.pivot_tol) return;
    Eigen::VectorXd ep = Eigen::VectorXd::Zero(m_);
    ep[block_pos] = 1.0;
    const Eigen::VectorXd rho = btran(ep);
    const double wq = devex_[static_cast<std::size_t>(q)];
    double wmax = 1.0;
    for (int j = 0; j < total_; ++j) {
      if (vstat_[static_cast<std::size_t>(j)] == VarStatus::basic || j == q) continue;
      double arj = 0;
      for_col(j, [&](int i, double v) { arj += rho[i] * v; });
      if (arj == 0.0) continue;
      const double cand = (arj / ap) * (arj / ap) * wq;
      if (cand > devex_[static_cast<std::size_t>(j)]) devex_[static_cast<std::size_t>(j)] = cand;
      wmax = std::max(wmax, devex_[static_cast<std::size_t>(j)]);
    }
    const int leaving = basic_[static_cast<std::size_t>(block_pos)];
    devex_[static_cast<std::size_t>(leaving)] = std::max(wq / (ap * ap), 1.0);
    if (wmax > 1e8) devex_.assign(static_cast<std::size_t>(total_), 1.0);
  }

  void maybe_drift_check() {
    if (++drift_counter_ % 50 != 0) return;
    double scale = 1.0;
    for (int i = 0; i < m_; ++i) scale = std::max(scale, std::abs(b_[static_cast<std::size_t>(i)]));
    std::vector<double> res(b_);
    for (int j = 0; j < total_; ++j) {
      const double xv = value_[static_cast<std::size_t>(j)];
      if (xv == 0.0) continue;
      for_col(j, [&](int i, double v) { res[static_cast<std::size_t>(i)] -= v * xv; });
    }
    double worst = 0;
    for (double r : res) worst = std::max(worst, std::abs(r));
    if (worst > opts_.refactor_drift * scale * 1e3) {
      refactorize();
      compute_values();
    }
  }

  void fill_primal(LpOutcome& out) const {
    out.primal.resize(static_cast<std::size_t>(n_));
    for (int j = 0; j < n_; ++j) out.primal[static_cast<std::size_t>(j)] = value_[static_cast<std::size_t>(j)];
  }

  void fill_basis(LpOutcome& out) const {
    out.basis.status = vstat_;
    out.basis.basic = basic_;
  }

  LpOutcome finish_limit(LpOutcome& out) {
    out.status = LpStatus::iteration_limit;
    out.iterations = iterations_;
    fill_primal(out);
    fill_basis(out);
    return out;
  }

  LpOutcome finish_optimal(LpOutcome& out) {
    out.status = LpStatus::optimal;
    out.iterations = iterations_;
    fill_primal(out);
    fill_basis(out);
    Eigen::VectorXd cb(m_);
    for (int i = 0; i < m_; ++i) cb[i] = cost_[static_cast<std::size_t>(basic_[static_cast<std::size_t>(i)])];
    const Eigen::VectorXd y = btran(cb);
    const double sense = lp_.maximize ? -1.0 : 1.0;
    out.duals.resize(static_cast<std::size_t>(m_));
    std::vector<double> yv(static_cast<std::size_t>(m_));
    for (int i = 0; i < m_; ++i) {
      out.duals[static_cast<std::size_t>(i)] = sense * y[i];
      yv[static_cast<std::size_t>(i)] = y[i];
    }
    out.reduced_costs.resize(static_cast<std::size_t>(n_));
    for (int j = 0; j < n_; ++j)
      out.reduced_costs[static_cast<std::size_t>(j)] =
          sense * (cost_[static_cast<std::size_t>(j)] - dot_col(j, yv));
    double obj = 0;
    for (int j = 0; j < n_; ++j)
      obj += lp_.objective[static_cast<std::size_t>(j)] * value_[static_cast<std::size_t>(j)];
    out.objective = obj;
    return out;
  }

  // Returns true when a verified certificate was produced.
  bool finish_infeasible(LpOutcome& out) {
    Eigen::VectorXd db = Eigen::VectorXd::Zero(m_);
    for (int i = 0; i < m_; ++i) db[i] = phase1_cost(basic_[static_cast<std::size_t>(i)]);
    const Eigen::VectorXd y = btran(db);
    std::vector<double> ray(static_cast<std::size_t>(m_));
    for (int i = 0; i < m_; ++i) ray[static_cast<std::size_t>(i)] = y[i];
    if (!check_farkas_ray(lp_, ray, opts_.feas_tol * 10)) {
      refactorize();
      compute_values();
      return false;
    }
    out.status = LpStatus::infeasible;
    out.iterations = iterations_;
    out.farkas = std::move(ray);
    fill_primal(out);
    fill_basis(out);
    return true;
  }
};

}  // namespace

LpOutcome solve_lp(const LpProblem& lp, const LpBasis* hint, const LpOptions& opts) {
  if (lp.rows.empty()) {
    LpOutcome out;
    out.status = LpStatus::optimal;
    out.primal.resize(static_cast<std::size_t>(lp.num_cols));
    double obj = 0;
    for (int j = 0; j < lp.num_cols; ++j) {
      const double c = lp.objective[static_cast<std::size_t>(j)];
      const bool want_hi = lp.maximize ? c > 0 : c < 0;
      double v = want_hi ? lp.upper[static_cast<std::size_t>(j)] : lp.lower[static_cast<std::size_t>(j)];
      if (!std::isfinite(v)) {
        if (c != 0.0) {
          out.status = LpStatus::unbounded;
          v = 0;
        } else {
          v = std::isfinite(lp.lower[static_cast<std::size_t>(j)]) ? lp.lower[static_cast<std::size_t>(j)]
              : std::isfinite(lp.upper[static_cast<std::size_t>(j)]) ? lp.upper[static_cast<std::size_t>(j)]
                                                                     : 0.0;
        }
      }
      out.primal[static_cast<std::size_t>(j)] = v;
      obj += c * v;
    }
    out.objective = obj;
    return out;
  }
  Simplex s(lp, opts);
  return s.run(hint);
}

LpProblem lp_from_milp(const MilpModel& model) {
  LpProblem lp;
  lp.num_cols = model.num_cols();
  lp.lower = model.lower;
  lp.upper = model.upper;
  lp.objective = model.objective;
  lp.maximize = model.maximize;
  lp.rows = model.rows;
  return lp;
}

LpOutcome solve_lp_relaxation(const MilpModel& model, const LpBasis* hint, const LpOptions& opts) {
  const LpProblem lp = lp_from_milp(model);
  return solve_lp(lp, hint, opts);
}

double lp_dual_objective(const LpProblem& lp, const LpOutcome& out) {
  double dual = 0;
  for (std::size_t i = 0; i < lp.rows.size(); ++i) dual += out.duals[i] * lp.rows[i].rhs;
  for (int j = 0; j < lp.num_cols; ++j) {
    const VarStatus s = out.basis.status[static_cast<std::size_t>(j)];
    if (s == VarStatus::basic || s == VarStatus::nonbasic_free) continue;
    dual += out.reduced_costs[static_cast<std::size_t>(j)] * out.primal[static_cast<std::size_t>(j)];
  }
  return dual;
}

double lp_primal_infeasibility(const LpProblem& lp, const std::vector<double>& x) {
  double worst = 0;
  for (int j = 0; j < lp.num_cols; ++j) {
    worst = std::max(worst, lp.lower[static_cast<std::size_t>(j)] - x[static_cast<std::size_t>(j)]);
    worst = std::max(worst, x[static_cast<std::size_t>(j)] - lp.upper[static_cast<std::size_t>(j)]);
  }
  for (const LpRow& r : lp.rows) {
    double lhs = 0;
    for (const auto& [j, v] : r.coef) lhs += v * x[static_cast<std::size_t>(j)];
    if (r.sense == '<') worst = std::max(worst, lhs - r.rhs);
    else if (r.sense == '>') worst = std::max(worst, r.rhs - lhs);
    else worst = std::max(worst, std::abs(lhs - r.rhs));
  }
  return worst;
}

double lp_complementarity(const LpProblem& lp, const LpOutcome& out) {
  double worst = 0;
  for (std::size_t i = 0; i < lp.rows.size(); ++i) {
    const LpRow& r = lp.rows[i];
    if (r.sense == '=') continue;
    double lhs = 0;
    for (const auto& [j, v] : r.coef) lhs += v * out.primal[static_cast<std::size_t>(j)];
    worst = std::max(worst, std::abs(out.duals[i] * (lhs - r.rhs)));
  }
  return worst;
}

bool check_farkas_ray(const LpProblem& lp, const std::vector<double>& ray, double tol,
                      std::string* why) {
  if (ray.size() != lp.rows.size()) {
    if (why) *why = "ray size mismatch";
    return false;
  }
  double rnorm = 0;
  for (double r : ray) rnorm = std::max(rnorm, std::abs(r));
  if (rnorm <= 0) {
    if (why) *why = "zero ray";
    return false;
  }
  const double clamp = tol * rnorm;
  double rb = 0;
  for (std::size_t i = 0; i < lp.rows.size(); ++i) {
    const double r = ray[i];
    const char s = lp.rows[i].sense;
    if (s == '<' && r > clamp) {
      if (why) *why = "positive multiplier on a <= row";
      return false;
    }
    if (s == '>' && r < -clamp) {
      if (why) *why = "negative multiplier on a >= row";
      return false;
    }
    rb += r * lp.rows[i].rhs;
  }
  std::vector<double> t(static_cast<std::size_t>(lp.num_cols), 0.0);
  for (std::size_t i = 0; i < lp.rows.size(); ++i)
    for (const auto& [j, v] : lp.rows[i].coef) t[static_cast<std::size_t>(j)] += ray[i] * v;
  double box_sup = 0;
  for (int j = 0; j < lp.num_cols; ++j) {
    const double tj = t[static_cast<std::size_t>(j)];
    if (std::abs(tj) <= clamp) continue;
    const double bound = tj > 0 ? lp.upper[static_cast<std::size_t>(j)] : lp.lower[static_cast<std::size_t>(j)];
    if (!std::isfinite(bound)) {
      if (why) *why = "ray direction escapes through an unbounded column";
      return false;
    }
    box_sup += tj * bound;
  }
  // Any feasible x satisfies (ray^T A) x <= ray^T b; the box supremum falling
  // strictly short of ray^T b certifies that no feasible x exists.
  if (rb - box_sup <= tol * (1.0 + std::abs(rb))) {
    if (why) *why = "certificate margin not positive";
    return false;
  }
  return true;
}

}  // namespace lineopt
