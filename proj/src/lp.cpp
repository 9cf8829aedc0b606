#include "lccp/lp.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

namespace lccp {

LpProblem make_master_lp(int nrows, RowSense sense) {
  LpProblem p;
  p.nrows = nrows;
  p.row_sense.assign(nrows, sense);
  p.rhs.assign(nrows, 1.0);
  return p;
}

namespace {

// Variable ids: structural [0, k), surplus [k, k + m), artificial [k + m, k + 2m).
class RevisedSimplex {
 public:
  RevisedSimplex(const LpProblem& p, const LpTolerances& tol)
      : p_(p), tol_(tol), m_(p.nrows), k_(p.ncols()), b_(m_) {
    for (int i = 0; i < m_; ++i) b_(i) = p.rhs[i];
  }

  LpOutcome solve(const std::optional<LpBasis>& warm) {
    LpOutcome out;
    if (warm && try_warm_start(*warm)) {
      out.warm_started = true;
    } else {
      basis_.resize(m_);
      for (int i = 0; i < m_; ++i) basis_[i] = artificial(i);
      if (!factor()) throw LpNumericalError("initial basis is singular");
      if (!iterate(/*phase=*/1)) throw LpNumericalError("phase 1 reported unbounded");
      double infeasibility = 0.0;
      for (int i = 0; i < m_; ++i)
        if (is_artificial(basis_[i])) infeasibility += std::max(0.0, x_basic_(i));
      if (infeasibility > tol_.feasibility) {
        out.status = LpStatus::infeasible;
        out.farkas_ray.resize(m_);
        for (int i = 0; i < m_; ++i) {
          double y = duals_(i);
          if (p_.row_sense[i] == RowSense::greater_equal) y = std::max(0.0, y);
          out.farkas_ray[i] = y;
        }
        out.iterations = iterations_;
        out.basis = export_basis();
        return out;
      }
    }
    if (!iterate(/*phase=*/2)) throw LpNumericalError("phase 2 reported unbounded");

    out.status = LpStatus::optimal;
    out.primal.assign(k_, 0.0);
    for (int i = 0; i < m_; ++i) {
      const int var = basis_[i];
      if (var < k_) out.primal[var] = std::max(0.0, x_basic_(i));
    }
    out.objective = 0.0;
    for (int j = 0; j < k_; ++j) out.objective += p_.cost[j] * out.primal[j];
    out.duals.resize(m_);
    for (int i = 0; i < m_; ++i) {
      double y = duals_(i);
      if (p_.row_sense[i] == RowSense::greater_equal && y < 0.0 && y > -tol_.feasibility) y = 0.0;
      out.duals[i] = y;
    }
    out.iterations = iterations_;
    out.basis = export_basis();
    return out;
  }

 private:
  int surplus(int row) const { return k_ + row; }
  int artificial(int row) const { return k_ + m_ + row; }
  bool is_artificial(int var) const { return var >= k_ + m_; }

  bool eligible(int var) const {
    if (var < k_) return true;
    if (var < k_ + m_) return p_.row_sense[var - k_] == RowSense::greater_equal;
    return false;
  }

  double cost(int var, int phase) const {
    if (phase == 1) return is_artificial(var) ? 1.0 : 0.0;
    return var < k_ ? p_.cost[var] : 0.0;
  }

  double column_dot(const Eigen::VectorXd& y, int var) const {
    if (var < k_) {
      double s = 0.0;
      for (int r : p_.columns[var]) s += y(r);
      return s;
    }
    if (var < k_ + m_) return -y(var - k_);
    return y(var - k_ - m_);
  }

  void fill_column(int var, Eigen::Ref<Eigen::VectorXd> col) const {
    col.setZero();
    if (var < k_) {
      for (int r : p_.columns[var]) col(r) = 1.0;
    } else if (var < k_ + m_) {
      col(var - k_) = -1.0;
    } else {
      col(var - k_ - m_) = 1.0;
    }
  }

  bool factor() {
    Eigen::MatrixXd basis_matrix(m_, m_);
    for (int i = 0; i < m_; ++i) fill_column(basis_[i], basis_matrix.col(i));
    lu_.compute(basis_matrix);
    const double min_pivot = lu_.matrixLU().diagonal().cwiseAbs().minCoeff();
    if (!(min_pivot > 1e-11)) return false;
    x_basic_ = lu_.solve(b_);
    return true;
  }

  bool try_warm_start(const LpBasis& warm) {
    if (static_cast<int>(warm.size()) != m_) return false;
    std::vector<char> used(k_ + 2 * m_, 0);
    basis_.clear();
    for (const auto& e : warm) {
      int var = -1;
      switch (e.kind) {
        case BasicKind::structural:
          if (e.index < 0 || e.index >= k_) return false;
          var = e.index;
          break;
        case BasicKind::surplus:
          if (e.index < 0 || e.index >= m_) return false;
          var = surplus(e.index);
          if (!eligible(var)) return false;
          break;
        case BasicKind::artificial:
          if (e.index < 0 || e.index >= m_) return false;
          var = artificial(e.index);
          break;
      }
      if (used[var]) return false;
      used[var] = 1;
      basis_.push_back(var);
    }
    if (!factor()) return false;
    for (int i = 0; i < m_; ++i) {
      if (x_basic_(i) < -tol_.feasibility) return false;
      if (is_artificial(basis_[i]) && x_basic_(i) > tol_.feasibility) return false;
    }
    return true;
  }

  LpBasis export_basis() const {
    LpBasis out;
    out.reserve(m_);
    for (int var : basis_) {
      if (var < k_) {
        out.push_back({BasicKind::structural, var});
      } else if (var < k_ + m_) {
        out.push_back({BasicKind::surplus, var - k_});
      } else {
        out.push_back({BasicKind::artificial, var - k_ - m_});
      }
    }
    return out;
  }

  // Returns false if the phase is unbounded.
  bool iterate(int phase) {
    const int nvars = k_ + 2 * m_;
    std::vector<char> in_basis(nvars, 0);
    for (int var : basis_) in_basis[var] = 1;
    bool bland = false;
    int stall = 0;
    Eigen::VectorXd cost_basic(m_), column(m_), direction(m_);

    while (true) {
      for (int i = 0; i < m_; ++i) {
        if (x_basic_(i) < 0.0 && x_basic_(i) > -tol_.feasibility) x_basic_(i) = 0.0;
      }
      for (int i = 0; i < m_; ++i) cost_basic(i) = cost(basis_[i], phase);
      duals_ = lu_.transpose().solve(cost_basic);

      int entering = -1;
      double best = -tol_.optimality;
      for (int var = 0; var < nvars; ++var) {
        if (in_basis[var] || !eligible(var)) continue;
        const double d = cost(var, phase) - column_dot(duals_, var);
        if (d < best) {
          best = d;
          entering = var;
          if (bland) break;
        }
      }
      if (entering == -1) return true;

      if (++iterations_ > tol_.max_iterations) {
        throw LpNumericalError("simplex iteration limit of " +
                               std::to_string(tol_.max_iterations) + " reached");
      }

      fill_column(entering, column);
      direction = lu_.solve(column);

      int leaving = -1;
      double best_ratio = std::numeric_limits<double>::infinity();
      double best_pivot = 0.0;
      for (int i = 0; i < m_; ++i) {
        const double d = direction(i);
        double ratio;
        if (phase == 2 && is_artificial(basis_[i])) {
          if (std::abs(d) <= tol_.pivot) continue;
          ratio = 0.0;
        } else {
          if (d <= tol_.pivot) continue;
          ratio = std::max(0.0, x_basic_(i)) / d;
        }
        bool take = false;
        if (leaving == -1 || ratio < best_ratio - 1e-12) {
          take = true;
        } else if (ratio <= best_ratio + 1e-12) {
          take = bland ? basis_[i] < basis_[leaving] : std::abs(d) > best_pivot;
        }
        if (take) {
          leaving = i;
          best_ratio = ratio;
          best_pivot = std::abs(d);
        }
      }
      if (leaving == -1) return false;

      stall = best_ratio <= tol_.feasibility ? stall + 1 : 0;
      if (stall > tol_.degenerate_stall) bland = true;

      in_basis[basis_[leaving]] = 0;
      in_basis[entering] = 1;
      basis_[leaving] = entering;
      if (!factor()) throw LpNumericalError("basis became singular after pivot");
    }
  }

  const LpProblem& p_;
  const LpTolerances& tol_;
  int m_;
  int k_;
  Eigen::VectorXd b_;
  std::vector<int> basis_;
  Eigen::PartialPivLU<Eigen::MatrixXd> lu_;
  Eigen::VectorXd x_basic_;
  Eigen::VectorXd duals_;
  int iterations_ = 0;
};

}  // namespace

LpOutcome solve_lp(const LpProblem& p, const std::optional<LpBasis>& warm_start,
                   const LpTolerances& tol) {
  if (p.nrows < 1) throw std::invalid_argument("LP needs at least one row");
  if (static_cast<int>(p.row_sense.size()) != p.nrows ||
      static_cast<int>(p.rhs.size()) != p.nrows || p.cost.size() != p.columns.size()) {
    throw std::invalid_argument("LP dimensions are inconsistent");
  }
  for (const auto& col : p.columns) {
    for (int r : col) {
      if (r < 0 || r >= p.nrows) throw std::invalid_argument("LP column references unknown row");
    }
  }
  for (double r : p.rhs) {
    if (r < 0.0) throw std::invalid_argument("LP right-hand sides must be nonnegative");
  }
  return RevisedSimplex(p, tol).solve(warm_start);
}

}  // namespace lccp
