#pragma once

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <vector>

namespace lccp {

enum class RowSense { equal, greater_equal };

/// min cost^T x  s.t.  A x (= | >=) rhs,  x >= 0, with a 0/1 matrix stored
/// column-wise as lists of row indices.
struct LpProblem {
  int nrows = 0;
  std::vector<std::vector<int>> columns;
  std::vector<double> cost;
  std::vector<RowSense> row_sense;
  std::vector<double> rhs;

  int ncols() const { return static_cast<int>(columns.size()); }
  void add_column(std::vector<int> rows, double c = 1.0) {
    columns.push_back(std::move(rows));
    cost.push_back(c);
  }
};

/// Unit-cost set partitioning (`equal`) or covering (`greater_equal`) rows.
LpProblem make_master_lp(int nrows, RowSense sense);

struct LpTolerances {
  double feasibility = 1e-7;
  double optimality = 1e-9;
  double pivot = 1e-10;
  int degenerate_stall = 50;
  int max_iterations = 100000;
};

enum class BasicKind : std::uint8_t { structural, surplus, artificial };

struct BasisEntry {
  BasicKind kind;
  int index;
  bool operator==(const BasisEntry&) const = default;
};

using LpBasis = std::vector<BasisEntry>;

enum class LpStatus { optimal, infeasible };

struct LpOutcome {
  LpStatus status = LpStatus::optimal;
  std::vector<double> primal;
  std::vector<double> duals;
  std::vector<double> farkas_ray;
  double objective = 0.0;
  LpBasis basis;
  int iterations = 0;
  bool warm_started = false;
};

/// Pivot breakdown or iteration limit; distinct from infeasibility.
class LpNumericalError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Two-phase dense revised simplex. Returns an optimal primal/dual pair or a
/// Farkas ray y with y^T A_j <= tol for every column and y^T rhs > 0.
LpOutcome solve_lp(const LpProblem& p, const std::optional<LpBasis>& warm_start = std::nullopt,
                   const LpTolerances& tol = {});

}  // namespace lccp
