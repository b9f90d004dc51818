// Copyright 2026 The rxreturn Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

// Bounded-variable primal simplex for
//
//   minimize    c'x
//   subject to  a_r x  {<=, >=, =}  b_r      for every row r
//               l <= x <= u                  (bounds may be infinite)
//
// Every row r gets a logical column s_r with a_r x + s_r = b_r, where
// s_r >= 0 for <= rows, s_r <= 0 for >= rows and s_r = 0 for = rows. The
// basis inverse is kept dense and is rebuilt from scratch periodically.
//
// Dual values y follow the usual minimization convention: y_r >= 0 on >=
// rows, y_r <= 0 on <= rows, free on = rows, and the reduced cost of
// column j is c_j - y'A_j.

#ifndef RXRETURN_SIMPLEX_HPP_
#define RXRETURN_SIMPLEX_HPP_

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstddef>
#include <istream>
#include <limits>
#include <ostream>
#include <span>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "rxreturn/error.hpp"

namespace rxreturn::lp {

inline constexpr double kInf = std::numeric_limits<double>::infinity();

enum class Relation { LessEqual, GreaterEqual, Equal };

struct Term {
  std::size_t var;
  double coeff;
};

struct Constraint {
  std::vector<Term> terms;
  Relation relation = Relation::LessEqual;
  double rhs = 0.0;
  std::string name;
};

class LinearProgram {
 public:
  std::size_t add_variable(double lower, double upper, double cost,
                           std::string name = {}) {
    check_bounds(lower, upper);
    if (!std::isfinite(cost)) {
      throw Error(ErrorCode::MalformedModel, "objective coefficient not finite");
    }
    lower_.push_back(lower);
    upper_.push_back(upper);
    cost_.push_back(cost);
    var_names_.push_back(std::move(name));
    return lower_.size() - 1;
  }

  // Duplicate references to the same variable are summed.
  std::size_t add_constraint(std::vector<Term> terms, Relation relation,
                             double rhs, std::string name = {}) {
    if (!std::isfinite(rhs)) {
      throw Error(ErrorCode::MalformedModel, "right-hand side not finite");
    }
    std::sort(terms.begin(), terms.end(),
              [](const Term& a, const Term& b) { return a.var < b.var; });
    std::vector<Term> merged;
    for (const auto& t : terms) {
      if (t.var >= num_variables()) {
        throw Error(ErrorCode::MalformedModel,
                    "constraint references unknown variable " +
                        std::to_string(t.var));
      }
      if (!std::isfinite(t.coeff)) {
        throw Error(ErrorCode::MalformedModel, "constraint coefficient not finite");
      }
      if (!merged.empty() && merged.back().var == t.var) {
        merged.back().coeff += t.coeff;
      } else {
        merged.push_back(t);
      }
    }
    std::erase_if(merged, [](const Term& t) { return t.coeff == 0.0; });
    rows_.push_back({std::move(merged), relation, rhs, std::move(name)});
    return rows_.size() - 1;
  }

  void set_bounds(std::size_t var, double lower, double upper) {
    check_bounds(lower, upper);
    lower_.at(var) = lower;
    upper_.at(var) = upper;
  }

  std::size_t num_variables() const noexcept { return lower_.size(); }
  std::size_t num_constraints() const noexcept { return rows_.size(); }

  double lower(std::size_t j) const { return lower_[j]; }
  double upper(std::size_t j) const { return upper_[j]; }
  double cost(std::size_t j) const { return cost_[j]; }
  const std::string& variable_name(std::size_t j) const { return var_names_[j]; }
  const Constraint& constraint(std::size_t r) const { return rows_[r]; }
  const std::vector<Constraint>& constraints() const noexcept { return rows_; }

 private:
  static void check_bounds(double lower, double upper) {
    if (std::isnan(lower) || std::isnan(upper) || lower == kInf ||
        upper == -kInf || lower > upper) {
      throw Error(ErrorCode::MalformedModel, "invalid variable bounds");
    }
  }

  std::vector<double> lower_;
  std::vector<double> upper_;
  std::vector<double> cost_;
  std::vector<std::string> var_names_;
  std::vector<Constraint> rows_;
};

enum class LpStatus { Optimal, Infeasible, Unbounded };

inline const char* to_string(LpStatus s) {
  switch (s) {
    case LpStatus::Optimal: return "optimal";
    case LpStatus::Infeasible: return "infeasible";
    case LpStatus::Unbounded: return "unbounded";
  }
  return "?";
}

struct LpSolution {
  LpStatus status = LpStatus::Infeasible;
  std::vector<double> primal;          // per variable
  std::vector<double> duals;           // per constraint
  std::vector<double> reduced_costs;   // per variable
  double objective = 0.0;
  double dual_objective = 0.0;
  // Unbounded: a primal direction along which the objective decreases
  // without limit. Infeasible: phase-one row multipliers (Farkas-style).
  std::vector<double> ray;
  std::vector<double> farkas;
  std::size_t iterations = 0;
};

struct SimplexOptions {
  double feasibility_tol = 1e-9;
  double optimality_tol = 1e-9;
  double pivot_tol = 1e-9;
  std::size_t refactor_interval = 64;
  // Consecutive degenerate pivots tolerated before switching to Bland's rule.
  std::size_t degenerate_limit = 30;
  std::size_t max_iterations = 0;  // 0 = automatic
};

namespace detail {

class RevisedSimplex {
 public:
  RevisedSimplex(const LinearProgram& lp, const SimplexOptions& opt)
      : lp_(lp), opt_(opt), m_(lp.num_constraints()), n_(lp.num_variables()) {
    build_columns();
  }

  LpSolution run() {
    LpSolution sol;
    initial_basis();
    const std::size_t cap =
        opt_.max_iterations ? opt_.max_iterations : 50 * (m_ + n_) + 1000;

    if (num_artificial_ > 0) {
      std::vector<double> phase1(ncols(), 0.0);
      for (std::size_t c = n_ + m_; c < ncols(); ++c) phase1[c] = 1.0;
      auto outcome = iterate(phase1, cap);
      (void)outcome;  // phase one is bounded below by zero
      double infeas = 0.0;
      for (std::size_t c = n_ + m_; c < ncols(); ++c) infeas += x_[c];
      double scale = 1.0;
      for (const auto& row : lp_.constraints()) scale = std::max(scale, std::abs(row.rhs));
      if (infeas > opt_.feasibility_tol * scale) {
        sol.status = LpStatus::Infeasible;
        sol.farkas = duals(phase1);
        sol.iterations = iterations_;
        sol.primal.assign(x_.begin(), x_.begin() + n_);
        return sol;
      }
      for (std::size_t c = n_ + m_; c < ncols(); ++c) {
        upper_[c] = 0.0;
        if (state_[c] != State::Basic) {
          x_[c] = 0.0;
          state_[c] = State::AtLower;
        }
      }
      drive_out_artificials();
    }

    std::vector<double> cost(ncols(), 0.0);
    for (std::size_t j = 0; j < n_; ++j) cost[j] = lp_.cost(j);
    auto outcome = iterate(cost, cap);
    sol.iterations = iterations_;
    if (outcome.unbounded) {
      sol.status = LpStatus::Unbounded;
      sol.ray = std::move(outcome.ray);
      sol.primal.assign(x_.begin(), x_.begin() + n_);
      return sol;
    }

    sol.status = LpStatus::Optimal;
    sol.primal.assign(x_.begin(), x_.begin() + n_);
    sol.duals = duals(cost);
    sol.reduced_costs.resize(n_);
    sol.objective = 0.0;
    for (std::size_t j = 0; j < n_; ++j) {
      sol.reduced_costs[j] = reduced_cost(cost, sol.duals, j);
      sol.objective += lp_.cost(j) * x_[j];
    }
    double dual_obj = 0.0;
    for (std::size_t r = 0; r < m_; ++r) dual_obj += sol.duals[r] * lp_.constraint(r).rhs;
    for (std::size_t j = 0; j < n_; ++j) {
      if (state_[j] != State::Basic && x_[j] != 0.0) {
        dual_obj += sol.reduced_costs[j] * x_[j];
      }
    }
    sol.dual_objective = dual_obj;
    return sol;
  }

 private:
  enum class State { Basic, AtLower, AtUpper, Free };

  struct Outcome {
    bool unbounded = false;
    std::vector<double> ray;
  };

  std::size_t ncols() const { return n_ + m_ + num_artificial_; }

  void build_columns() {
    start_.assign(n_ + 1, 0);
    for (const auto& row : lp_.constraints()) {
      for (const auto& t : row.terms) ++start_[t.var + 1];
    }
    for (std::size_t j = 0; j < n_; ++j) start_[j + 1] += start_[j];
    index_.resize(start_[n_]);
    value_.resize(start_[n_]);
    std::vector<std::size_t> fill(start_.begin(), start_.end() - 1);
    for (std::size_t r = 0; r < m_; ++r) {
      for (const auto& t : lp_.constraint(r).terms) {
        index_[fill[t.var]] = r;
        value_[fill[t.var]] = t.coeff;
        ++fill[t.var];
      }
    }
  }

  template <typename F>
  void for_each_entry(std::size_t col, F&& f) const {
    if (col < n_) {
      for (std::size_t k = start_[col]; k < start_[col + 1]; ++k) f(index_[k], value_[k]);
    } else if (col < n_ + m_) {
      f(col - n_, 1.0);
    } else {
      const std::size_t a = col - n_ - m_;
      f(art_row_[a], art_sign_[a]);
    }
  }

  void initial_basis() {
    lower_.assign(n_ + m_, 0.0);
    upper_.assign(n_ + m_, 0.0);
    x_.assign(n_ + m_, 0.0);
    state_.assign(n_ + m_, State::AtLower);
    for (std::size_t j = 0; j < n_; ++j) {
      lower_[j] = lp_.lower(j);
      upper_[j] = lp_.upper(j);
      if (std::isfinite(lower_[j])) {
        x_[j] = lower_[j];
        state_[j] = State::AtLower;
      } else if (std::isfinite(upper_[j])) {
        x_[j] = upper_[j];
        state_[j] = State::AtUpper;
      } else {
        x_[j] = 0.0;
        state_[j] = State::Free;
      }
    }
    std::vector<double> activity(m_, 0.0);
    for (std::size_t j = 0; j < n_; ++j) {
      if (x_[j] == 0.0) continue;
      for_each_entry(j, [&](std::size_t r, double v) { activity[r] += v * x_[j]; });
    }

    head_.assign(m_, 0);
    binv_.assign(m_ * m_, 0.0);
    num_artificial_ = 0;
    art_row_.clear();
    art_sign_.clear();
    for (std::size_t r = 0; r < m_; ++r) {
      const auto& row = lp_.constraint(r);
      const std::size_t s = n_ + r;
      switch (row.relation) {
        case Relation::LessEqual: lower_[s] = 0.0; upper_[s] = kInf; break;
        case Relation::GreaterEqual: lower_[s] = -kInf; upper_[s] = 0.0; break;
        case Relation::Equal: lower_[s] = 0.0; upper_[s] = 0.0; break;
      }
      const double residual = row.rhs - activity[r];
      if (residual >= lower_[s] && residual <= upper_[s]) {
        x_[s] = residual;
        state_[s] = State::Basic;
        head_[r] = s;
        binv_[r * m_ + r] = 1.0;
      } else {
        x_[s] = 0.0;
        state_[s] = row.relation == Relation::GreaterEqual ? State::AtUpper : State::AtLower;
        const double sign = residual > 0.0 ? 1.0 : -1.0;
        art_row_.push_back(r);
        art_sign_.push_back(sign);
        lower_.push_back(0.0);
        upper_.push_back(kInf);
        x_.push_back(std::abs(residual));
        state_.push_back(State::Basic);
        head_[r] = n_ + m_ + num_artificial_;
        binv_[r * m_ + r] = sign;
        ++num_artificial_;
      }
    }
  }

  std::vector<double> duals(const std::vector<double>& cost) const {
    std::vector<double> y(m_, 0.0);
    for (std::size_t k = 0; k < m_; ++k) {
      const double cb = cost[head_[k]];
      if (cb == 0.0) continue;
      const double* row = &binv_[k * m_];
      for (std::size_t r = 0; r < m_; ++r) y[r] += cb * row[r];
    }
    return y;
  }

  double reduced_cost(const std::vector<double>& cost, const std::vector<double>& y,
                      std::size_t col) const {
    double d = cost[col];
    for_each_entry(col, [&](std::size_t r, double v) { d -= y[r] * v; });
    return d;
  }

  // Gauss-Jordan inversion of the current basis with partial pivoting.
  void refactor() {
    std::vector<double> a(m_ * m_, 0.0);
    for (std::size_t k = 0; k < m_; ++k) {
      for_each_entry(head_[k], [&](std::size_t r, double v) { a[r * m_ + k] = v; });
    }
    std::vector<double> inv(m_ * m_, 0.0);
    for (std::size_t r = 0; r < m_; ++r) inv[r * m_ + r] = 1.0;
    for (std::size_t c = 0; c < m_; ++c) {
      std::size_t piv = c;
      double best = std::abs(a[c * m_ + c]);
      for (std::size_t r = c + 1; r < m_; ++r) {
        if (std::abs(a[r * m_ + c]) > best) {
          best = std::abs(a[r * m_ + c]);
          piv = r;
        }
      }
      if (best < 1e-12) {
        throw Error(ErrorCode::NumericalBreakdown, "singular basis during refactorization");
      }
      if (piv != c) {
        for (std::size_t k = 0; k < m_; ++k) {
          std::swap(a[c * m_ + k], a[piv * m_ + k]);
          std::swap(inv[c * m_ + k], inv[piv * m_ + k]);
        }
      }
      const double d = a[c * m_ + c];
      for (std::size_t k = 0; k < m_; ++k) {
        a[c * m_ + k] /= d;
        inv[c * m_ + k] /= d;
      }
      for (std::size_t r = 0; r < m_; ++r) {
        if (r == c) continue;
        const double f = a[r * m_ + c];
        if (f == 0.0) continue;
        for (std::size_t k = 0; k < m_; ++k) {
          a[r * m_ + k] -= f * a[c * m_ + k];
          inv[r * m_ + k] -= f * inv[c * m_ + k];
        }
      }
    }
    // `a` has become the identity with rows of B^{-1} in basis-position order.
    binv_ = std::move(inv);
    recompute_basic_values();
    since_refactor_ = 0;
  }

  void recompute_basic_values() {
    std::vector<double> rhs(m_);
    for (std::size_t r = 0; r < m_; ++r) rhs[r] = lp_.constraint(r).rhs;
    for (std::size_t c = 0; c < ncols(); ++c) {
      if (state_[c] == State::Basic || x_[c] == 0.0) continue;
      for_each_entry(c, [&](std::size_t r, double v) { rhs[r] -= v * x_[c]; });
    }
    for (std::size_t k = 0; k < m_; ++k) {
      double v = 0.0;
      const double* row = &binv_[k * m_];
      for (std::size_t r = 0; r < m_; ++r) v += row[r] * rhs[r];
      x_[head_[k]] = v;
    }
  }

  std::vector<double> ftran(std::size_t col) const {
    std::vector<double> alpha(m_, 0.0);
    for_each_entry(col, [&](std::size_t r, double v) {
      for (std::size_t k = 0; k < m_; ++k) alpha[k] += binv_[k * m_ + r] * v;
    });
    return alpha;
  }

  void pivot(std::size_t leave_pos, std::size_t enter, const std::vector<double>& alpha) {
    const double p = alpha[leave_pos];
    double* prow = &binv_[leave_pos * m_];
    for (std::size_t r = 0; r < m_; ++r) prow[r] /= p;
    for (std::size_t k = 0; k < m_; ++k) {
      if (k == leave_pos || alpha[k] == 0.0) continue;
      const double f = alpha[k];
      double* row = &binv_[k * m_];
      for (std::size_t r = 0; r < m_; ++r) row[r] -= f * prow[r];
    }
    head_[leave_pos] = enter;
    state_[enter] = State::Basic;
    ++since_refactor_;
  }

  bool fixed(std::size_t c) const { return lower_[c] == upper_[c]; }

  Outcome iterate(const std::vector<double>& cost, std::size_t cap) {
    bool bland = false;
    std::size_t degenerate_run = 0;
    bool fresh = false;
    while (true) {
      if (since_refactor_ >= opt_.refactor_interval) refactor();
      if (iterations_ >= cap) {
        throw Error(ErrorCode::NumericalBreakdown, "simplex iteration limit reached");
      }
      const auto y = duals(cost);

      std::size_t enter = ncols();
      double best = 0.0;
      double enter_d = 0.0;
      for (std::size_t c = 0; c < ncols(); ++c) {
        if (state_[c] == State::Basic || fixed(c)) continue;
        const double d = reduced_cost(cost, y, c);
        bool eligible = false;
        switch (state_[c]) {
          case State::AtLower: eligible = d < -opt_.optimality_tol; break;
          case State::AtUpper: eligible = d > opt_.optimality_tol; break;
          case State::Free: eligible = std::abs(d) > opt_.optimality_tol; break;
          case State::Basic: break;
        }
        if (!eligible) continue;
        if (bland) {
          enter = c;
          enter_d = d;
          break;
        }
        if (std::abs(d) > best) {
          best = std::abs(d);
          enter = c;
          enter_d = d;
        }
      }
      if (enter == ncols()) {
        // Confirm optimality on a freshly factored basis.
        if (since_refactor_ > 0 && !fresh) {
          refactor();
          fresh = true;
          continue;
        }
        return {};
      }
      fresh = false;

      const double dir = enter_d < 0.0 ? 1.0 : -1.0;
      const auto alpha = ftran(enter);

      // Ratio test. Basic k moves at rate -dir * alpha[k] per unit step.
      double step = kInf;
      std::size_t leave = m_;
      double leave_abs = 0.0;
      double alpha_max = 0.0;
      for (double a : alpha) alpha_max = std::max(alpha_max, std::abs(a));
      const double pivot_floor = opt_.pivot_tol * std::max(1.0, alpha_max);
      for (std::size_t k = 0; k < m_; ++k) {
        if (std::abs(alpha[k]) <= pivot_floor) continue;
        const std::size_t c = head_[k];
        const double rate = -dir * alpha[k];
        double limit = kInf;
        if (rate < 0.0 && std::isfinite(lower_[c])) {
          limit = std::max(0.0, (x_[c] - lower_[c]) / -rate);
        } else if (rate > 0.0 && std::isfinite(upper_[c])) {
          limit = std::max(0.0, (upper_[c] - x_[c]) / rate);
        }
        if (!std::isfinite(limit)) continue;
        const double tie = leave < m_ ? 1e-12 * std::max(1.0, step) : 0.0;
        bool take = false;
        if (leave == m_ || limit < step - tie) {
          take = true;
        } else if (limit <= step + tie && leave < m_) {
          take = bland ? head_[k] < head_[leave] : std::abs(alpha[k]) > leave_abs;
        }
        if (take) {
          step = std::min(step, limit);
          leave = k;
          leave_abs = std::abs(alpha[k]);
        }
      }
      const double own_range = upper_[enter] - lower_[enter];
      const bool flip = std::isfinite(own_range) && own_range <= step;
      if (flip) step = own_range;

      if (!std::isfinite(step)) {
        Outcome out;
        out.unbounded = true;
        out.ray.assign(n_, 0.0);
        if (enter < n_) out.ray[enter] = dir;
        for (std::size_t k = 0; k < m_; ++k) {
          if (head_[k] < n_) out.ray[head_[k]] = -dir * alpha[k];
        }
        return out;
      }

      ++iterations_;
      if (step <= opt_.feasibility_tol) {
        if (++degenerate_run > opt_.degenerate_limit) bland = true;
      } else {
        degenerate_run = 0;
        bland = false;
      }

      x_[enter] += dir * step;
      for (std::size_t k = 0; k < m_; ++k) {
        if (alpha[k] != 0.0) x_[head_[k]] -= dir * step * alpha[k];
      }

      if (flip) {
        state_[enter] = dir > 0.0 ? State::AtUpper : State::AtLower;
        x_[enter] = dir > 0.0 ? upper_[enter] : lower_[enter];
        continue;
      }

      const std::size_t out_col = head_[leave];
      const double rate = -dir * alpha[leave];
      if (rate < 0.0) {
        x_[out_col] = lower_[out_col];
        state_[out_col] = State::AtLower;
      } else {
        x_[out_col] = upper_[out_col];
        state_[out_col] = State::AtUpper;
      }
      pivot(leave, enter, alpha);
    }
  }

  // Replaces basic artificials (all at zero after phase one) by structural
  // or logical columns where a nonzero pivot exists.
  void drive_out_artificials() {
    for (std::size_t k = 0; k < m_; ++k) {
      if (head_[k] < n_ + m_) continue;
      std::size_t best_col = ncols();
      double best = opt_.pivot_tol * 1e3;
      for (std::size_t c = 0; c < n_ + m_; ++c) {
        if (state_[c] == State::Basic) continue;
        double v = 0.0;
        for_each_entry(c, [&](std::size_t r, double a) { v += binv_[k * m_ + r] * a; });
        if (std::abs(v) > best) {
          best = std::abs(v);
          best_col = c;
        }
      }
      if (best_col == ncols()) continue;  // redundant row
      const auto alpha = ftran(best_col);
      const std::size_t out_col = head_[k];
      x_[out_col] = 0.0;
      state_[out_col] = State::AtLower;
      pivot(k, best_col, alpha);
    }
    refactor();
  }

  const LinearProgram& lp_;
  SimplexOptions opt_;
  std::size_t m_;
  std::size_t n_;
  std::vector<std::size_t> start_;
  std::vector<std::size_t> index_;
  std::vector<double> value_;

  std::size_t num_artificial_ = 0;
  std::vector<std::size_t> art_row_;
  std::vector<double> art_sign_;

  std::vector<double> lower_;
  std::vector<double> upper_;
  std::vector<double> x_;
  std::vector<State> state_;
  std::vector<std::size_t> head_;
  std::vector<double> binv_;
  std::size_t since_refactor_ = 0;
  std::size_t iterations_ = 0;
};

}  // namespace detail

inline LpSolution solve_lp(const LinearProgram& lp, const SimplexOptions& options = {}) {
  detail::RevisedSimplex solver(lp, options);
  return solver.run();
}

// Independent checks of a candidate primal or dual vector against `lp`.

struct PrimalCheck {
  double objective = 0.0;
  double max_bound_violation = 0.0;
  double max_row_violation = 0.0;
};

inline double row_activity(const Constraint& row, std::span<const double> x) {
  double a = 0.0;
  for (const auto& t : row.terms) a += t.coeff * x[t.var];
  return a;
}

inline PrimalCheck check_primal(const LinearProgram& lp, std::span<const double> x) {
  PrimalCheck out;
  for (std::size_t j = 0; j < lp.num_variables(); ++j) {
    out.objective += lp.cost(j) * x[j];
    out.max_bound_violation = std::max(
        {out.max_bound_violation, lp.lower(j) - x[j], x[j] - lp.upper(j)});
  }
  for (const auto& row : lp.constraints()) {
    const double a = row_activity(row, x);
    double v = 0.0;
    switch (row.relation) {
      case Relation::LessEqual: v = a - row.rhs; break;
      case Relation::GreaterEqual: v = row.rhs - a; break;
      case Relation::Equal: v = std::abs(a - row.rhs); break;
    }
    out.max_row_violation = std::max(out.max_row_violation, v);
  }
  return out;
}

struct DualCheck {
  // Lagrangian dual value: y'b + sum_j min_{l_j <= x_j <= u_j} d_j x_j.
  double objective = 0.0;
  // Largest violation of the row sign convention.
  double max_sign_violation = 0.0;
  // Largest |d_j| pushing toward an infinite bound (dual infeasibility).
  double max_unbounded_reduced_cost = 0.0;
  std::vector<double> reduced_costs;
};

inline DualCheck check_dual(const LinearProgram& lp, std::span<const double> y) {
  DualCheck out;
  out.reduced_costs.resize(lp.num_variables());
  for (std::size_t j = 0; j < lp.num_variables(); ++j) out.reduced_costs[j] = lp.cost(j);
  for (std::size_t r = 0; r < lp.num_constraints(); ++r) {
    const auto& row = lp.constraint(r);
    out.objective += y[r] * row.rhs;
    for (const auto& t : row.terms) out.reduced_costs[t.var] -= y[r] * t.coeff;
    if (row.relation == Relation::GreaterEqual) {
      out.max_sign_violation = std::max(out.max_sign_violation, -y[r]);
    } else if (row.relation == Relation::LessEqual) {
      out.max_sign_violation = std::max(out.max_sign_violation, y[r]);
    }
  }
  for (std::size_t j = 0; j < lp.num_variables(); ++j) {
    const double d = out.reduced_costs[j];
    if (d > 0.0) {
      if (std::isfinite(lp.lower(j))) {
        out.objective += d * lp.lower(j);
      } else {
        out.max_unbounded_reduced_cost = std::max(out.max_unbounded_reduced_cost, d);
      }
    } else if (d < 0.0) {
      if (std::isfinite(lp.upper(j))) {
        out.objective += d * lp.upper(j);
      } else {
        out.max_unbounded_reduced_cost = std::max(out.max_unbounded_reduced_cost, -d);
      }
    }
  }
  return out;
}

// max_r |y_r * slack_r| for an optimal pair.
inline double complementarity_residual(const LinearProgram& lp,
                                       std::span<const double> x,
                                       std::span<const double> y) {
  double worst = 0.0;
  for (std::size_t r = 0; r < lp.num_constraints(); ++r) {
    const auto& row = lp.constraint(r);
    worst = std::max(worst, std::abs(y[r] * (row.rhs - row_activity(row, x))));
  }
  return worst;
}

// Plain-text model dump, one record per line:
//
//   rxreturn-lp 1
//   variables <n>
//   v <index> <lower> <upper> <cost> <name>
//   constraints <m>
//   c <index> <L|G|E> <rhs> <nnz> [<var> <coeff>]... <name>
//   end
//
// Numbers use the shortest decimal text that reads back to the same double
// ("inf" / "-inf" for infinite bounds); whitespace in names becomes '_' and an
// empty name is written as '-'.
namespace detail {

inline std::string lp_number(double v) {
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buf[64];
  auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, ptr);
}

inline double lp_parse_number(const std::string& s) {
  if (s == "inf") return kInf;
  if (s == "-inf") return -kInf;
  double v = 0.0;
  auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc() || ptr != s.data() + s.size()) {
    throw Error(ErrorCode::MalformedModel, "bad number '" + s + "' in model dump");
  }
  return v;
}

inline std::string lp_name(const std::string& name) {
  if (name.empty()) return "-";
  std::string out = name;
  for (char& ch : out) {
    if (ch == ' ' || ch == '\t' || ch == '\n' || ch == '\r') ch = '_';
  }
  return out;
}

}  // namespace detail

inline void write_lp_text(std::ostream& out, const LinearProgram& lp) {
  using detail::lp_number;
  out << "rxreturn-lp 1\n";
  out << "variables " << lp.num_variables() << '\n';
  for (std::size_t j = 0; j < lp.num_variables(); ++j) {
    out << "v " << j << ' ' << lp_number(lp.lower(j)) << ' ' << lp_number(lp.upper(j))
        << ' ' << lp_number(lp.cost(j)) << ' ' << detail::lp_name(lp.variable_name(j))
        << '\n';
  }
  out << "constraints " << lp.num_constraints() << '\n';
  for (std::size_t r = 0; r < lp.num_constraints(); ++r) {
    const auto& row = lp.constraint(r);
    const char rel = row.relation == Relation::LessEqual      ? 'L'
                     : row.relation == Relation::GreaterEqual ? 'G'
                                                              : 'E';
    out << "c " << r << ' ' << rel << ' ' << lp_number(row.rhs) << ' ' << row.terms.size();
    for (const auto& t : row.terms) out << ' ' << t.var << ' ' << lp_number(t.coeff);
    out << ' ' << detail::lp_name(row.name) << '\n';
  }
  out << "end\n";
}

inline LinearProgram read_lp_text(std::istream& in) {
  auto fail = [](const std::string& what) {
    return Error(ErrorCode::MalformedModel, "model dump: " + what);
  };
  std::string tag;
  int version = 0;
  if (!(in >> tag >> version) || tag != "rxreturn-lp" || version != 1) {
    throw fail("missing header");
  }
  LinearProgram lp;
  std::size_t n = 0;
  if (!(in >> tag >> n) || tag != "variables") throw fail("expected 'variables'");
  for (std::size_t j = 0; j < n; ++j) {
    std::string lo, up, cost, name;
    std::size_t idx = 0;
    if (!(in >> tag >> idx >> lo >> up >> cost >> name) || tag != "v" || idx != j) {
      throw fail("bad variable record " + std::to_string(j));
    }
    lp.add_variable(detail::lp_parse_number(lo), detail::lp_parse_number(up),
                    detail::lp_parse_number(cost), name == "-" ? "" : name);
  }
  std::size_t m = 0;
  if (!(in >> tag >> m) || tag != "constraints") throw fail("expected 'constraints'");
  for (std::size_t r = 0; r < m; ++r) {
    std::string rel, rhs, name;
    std::size_t idx = 0, nnz = 0;
    if (!(in >> tag >> idx >> rel >> rhs >> nnz) || tag != "c" || idx != r) {
      throw fail("bad constraint record " + std::to_string(r));
    }
    std::vector<Term> terms(nnz);
    for (auto& t : terms) {
      std::string coeff;
      if (!(in >> t.var >> coeff)) throw fail("truncated constraint " + std::to_string(r));
      t.coeff = detail::lp_parse_number(coeff);
    }
    if (!(in >> name)) throw fail("missing constraint name");
    const Relation relation = rel == "L"   ? Relation::LessEqual
                              : rel == "G" ? Relation::GreaterEqual
                              : rel == "E" ? Relation::Equal
                                           : throw fail("bad relation '" + rel + "'");
    lp.add_constraint(std::move(terms), relation, detail::lp_parse_number(rhs),
                      name == "-" ? "" : name);
  }
  if (!(in >> tag) || tag != "end") throw fail("missing 'end'");
  return lp;
}

}  // namespace rxreturn::lp

#endif  // RXRETURN_SIMPLEX_HPP_
