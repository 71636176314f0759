#include "gridarb/lp.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "gridarb/common/errors.hpp"

namespace gridarb::lp {

int LinearProgram::add_variable(double cost, double upper_bound) {
  objective.push_back(cost);
  upper.resize(objective.size(), std::numeric_limits<double>::infinity());
  upper.back() = upper_bound;
  return static_cast<int>(objective.size()) - 1;
}

void LinearProgram::add_constraint(std::vector<std::pair<int, double>> terms, Sense sense,
                                   double rhs) {
  constraints.push_back(Constraint{std::move(terms), sense, rhs});
}

namespace {

constexpr double kPivotTol = 1e-11;
constexpr double kCostTol = 1e-10;
constexpr double kFeasTol = 1e-9;
constexpr int kDegenerateBeforeBland = 50;

class Tableau {
 public:
  Tableau(int rows, int cols) : m_(rows), n_(cols), a_((rows + 1) * (cols + 1), 0.0), basis_(rows) {}

  double& at(int r, int c) { return a_[static_cast<std::size_t>(r) * (n_ + 1) + c]; }
  double at(int r, int c) const { return a_[static_cast<std::size_t>(r) * (n_ + 1) + c]; }
  double& rhs(int r) { return at(r, n_); }
  double& cost(int c) { return at(m_, c); }
  int rows() const { return m_; }
  int cols() const { return n_; }
  std::vector<int>& basis() { return basis_; }

  void pivot(int r, int c) {
    const double inv = 1.0 / at(r, c);
    double* prow = &at(r, 0);
    for (int j = 0; j <= n_; ++j) prow[j] *= inv;
    prow[c] = 1.0;
    for (int i = 0; i <= m_; ++i) {
      if (i == r) continue;
      double* row = &at(i, 0);
      const double f = row[c];
      if (f == 0.0) continue;
      for (int j = 0; j <= n_; ++j) row[j] -= f * prow[j];
      row[c] = 0.0;
    }
    basis_[r] = c;
  }

  /// Optimizes the cost row over the columns allowed by `usable`. Returns false
  /// if the objective is unbounded.
  bool optimize(const std::vector<char>& usable, int& iterations) {
    int degenerate = 0;
    for (;;) {
      const bool bland = degenerate >= kDegenerateBeforeBland;
      int enter = -1;
      double best = -kCostTol;
      for (int j = 0; j < n_; ++j) {
        if (!usable[j]) continue;
        const double r = at(m_, j);
        if (r < best) {
          enter = j;
          if (bland) break;
          best = r;
        }
      }
      if (enter < 0) return true;

      int leave = -1;
      double ratio = 0.0;
      for (int i = 0; i < m_; ++i) {
        const double e = at(i, enter);
        if (e <= kPivotTol) continue;
        const double q = at(i, n_) / e;
        if (leave < 0 || q < ratio - 1e-12 ||
            (q <= ratio + 1e-12 && basis_[i] < basis_[leave])) {
          leave = i;
          ratio = q;
        }
      }
      if (leave < 0) return false;
      degenerate = ratio <= 1e-12 ? degenerate + 1 : 0;
      pivot(leave, enter);
      ++iterations;
    }
  }

 private:
  int m_, n_;
  std::vector<double> a_;
  std::vector<int> basis_;
};

struct Row {
  std::vector<std::pair<int, double>> terms;
  Sense sense;
  double rhs;
};

}  // namespace

Solution solve(const LinearProgram& program) {
  const int nx = program.num_variables();
  if (nx == 0) throw std::invalid_argument("lp::solve: no variables");
  std::vector<Row> rows;
  rows.reserve(program.constraints.size() + static_cast<std::size_t>(nx));
  for (const auto& c : program.constraints) {
    for (const auto& [j, v] : c.terms) {
      if (j < 0 || j >= nx) throw std::invalid_argument("lp::solve: variable index out of range");
      if (!std::isfinite(v)) throw std::invalid_argument("lp::solve: non-finite coefficient");
    }
    rows.push_back(Row{c.terms, c.sense, c.rhs});
  }
  for (int j = 0; j < nx && !program.upper.empty(); ++j) {
    const double u = program.upper[static_cast<std::size_t>(j)];
    if (u < 0) throw InfeasibleError("lp::solve: negative upper bound");
    if (std::isfinite(u)) rows.push_back(Row{{{j, 1.0}}, Sense::kLessEqual, u});
  }
  // Right-hand sides must be nonnegative.
  for (auto& r : rows) {
    if (r.rhs < 0) {
      r.rhs = -r.rhs;
      for (auto& t : r.terms) t.second = -t.second;
      if (r.sense == Sense::kLessEqual) {
        r.sense = Sense::kGreaterEqual;
      } else if (r.sense == Sense::kGreaterEqual) {
        r.sense = Sense::kLessEqual;
      }
    }
  }

  const int m = static_cast<int>(rows.size());
  int slacks = 0, artificials = 0;
  for (const auto& r : rows) {
    if (r.sense != Sense::kEqual) ++slacks;
    if (r.sense != Sense::kLessEqual) ++artificials;
  }
  const int n = nx + slacks + artificials;
  const int first_artificial = nx + slacks;
  Tableau t(m, n);

  int slack = nx, art = first_artificial;
  for (int i = 0; i < m; ++i) {
    const auto& r = rows[static_cast<std::size_t>(i)];
    for (const auto& [j, v] : r.terms) t.at(i, j) += v;
    t.rhs(i) = r.rhs;
    if (r.sense == Sense::kLessEqual) {
      t.at(i, slack) = 1.0;
      t.basis()[i] = slack++;
    } else if (r.sense == Sense::kGreaterEqual) {
      t.at(i, slack++) = -1.0;
      t.at(i, art) = 1.0;
      t.basis()[i] = art++;
    } else {
      t.at(i, art) = 1.0;
      t.basis()[i] = art++;
    }
  }

  Solution sol;
  std::vector<char> usable(static_cast<std::size_t>(n), 1);

  if (artificials > 0) {
    // Phase 1: maximize -sum(artificials), expressed in the current basis.
    for (int j = 0; j <= n; ++j) t.at(m, j) = 0.0;
    for (int i = 0; i < m; ++i) {
      if (t.basis()[i] < first_artificial) continue;
      for (int j = 0; j <= n; ++j) {
        if (j >= first_artificial && j < n) continue;
        t.at(m, j) -= t.at(i, j);
      }
    }
    if (!t.optimize(usable, sol.iterations)) throw InfeasibleError("lp::solve: phase 1 unbounded");
    double infeas = 0.0;
    for (int i = 0; i < m; ++i) {
      if (t.basis()[i] >= first_artificial) infeas += t.rhs(i);
    }
    if (infeas > kFeasTol) throw InfeasibleError("lp::solve: constraints are infeasible");
    // Drive remaining (zero-valued) artificials out of the basis.
    for (int i = 0; i < m; ++i) {
      if (t.basis()[i] < first_artificial) continue;
      int col = -1;
      for (int j = 0; j < first_artificial; ++j) {
        if (std::abs(t.at(i, j)) > 1e-9) {
          col = j;
          break;
        }
      }
      if (col >= 0) t.pivot(i, col);
      // Otherwise the row is redundant; its artificial stays basic at zero and
      // is never allowed to re-enter.
    }
    for (int j = first_artificial; j < n; ++j) usable[static_cast<std::size_t>(j)] = 0;
  }

  // Phase 2 with the objective scaled to unit magnitude.
  double scale = 0.0;
  for (double c : program.objective) scale = std::max(scale, std::abs(c));
  if (scale == 0.0) scale = 1.0;
  for (int j = 0; j <= n; ++j) t.at(m, j) = 0.0;
  for (int j = 0; j < nx; ++j) t.at(m, j) = -program.objective[static_cast<std::size_t>(j)] / scale;
  for (int i = 0; i < m; ++i) {
    const int b = t.basis()[i];
    const double f = t.at(m, b);
    if (f == 0.0) continue;
    for (int j = 0; j <= n; ++j) t.at(m, j) -= f * t.at(i, j);
  }
  if (!t.optimize(usable, sol.iterations)) throw InfeasibleError("lp::solve: objective unbounded");

  sol.x.assign(static_cast<std::size_t>(nx), 0.0);
  for (int i = 0; i < m; ++i) {
    const int b = t.basis()[i];
    if (b < nx) sol.x[static_cast<std::size_t>(b)] = std::max(0.0, t.rhs(i));
  }
  sol.objective = 0.0;
  for (int j = 0; j < nx; ++j) sol.objective += program.objective[static_cast<std::size_t>(j)] * sol.x[static_cast<std::size_t>(j)];
  return sol;
}

}  // namespace gridarb::lp
