#pragma once

#include <limits>
#include <utility>
#include <vector>

namespace gridarb::lp {

enum class Sense { kLessEqual, kGreaterEqual, kEqual };

struct Constraint {
  std::vector<std::pair<int, double>> terms;  ///< (variable index, coefficient)
  Sense sense = Sense::kLessEqual;
  double rhs = 0.0;
};

/// maximize c'x subject to the constraints and 0 <= x_j <= upper_j.
struct LinearProgram {
  std::vector<double> objective;
  std::vector<double> upper;  ///< empty, or one bound per variable (infinity allowed)
  std::vector<Constraint> constraints;

  int add_variable(double cost, double upper_bound = std::numeric_limits<double>::infinity());
  void add_constraint(std::vector<std::pair<int, double>> terms, Sense sense, double rhs);
  int num_variables() const { return static_cast<int>(objective.size()); }
};

struct Solution {
  std::vector<double> x;
  double objective = 0.0;
  int iterations = 0;
};

/// Dense two-phase primal simplex (Dantzig pricing, Bland's rule after a run
/// of degenerate pivots). Throws InfeasibleError if no feasible point exists or
/// the objective is unbounded.
Solution solve(const LinearProgram& program);

}  // namespace gridarb::lp
