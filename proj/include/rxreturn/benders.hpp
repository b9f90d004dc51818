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

// Benders decomposition of the kiosk-location / incentive model.
//
// First stage (master):   open kiosks Y_i and incentives R_ijp.
// Second stage (sub):     assignment w_ijp, returned pills x_ijp and
//                         unreturned pills b_jp for fixed (Y, R):
//
//   min  sum x_ijp R_ijp / s + sum m b_jp
//   s.t. w_ijp               <= Y_i A_ijp        (alpha_ijp <= 0)
//        x_ijp - k_i w_ijp   <= 0                (beta_ijp  <= 0)
//        sum_jp x_ijp        <= k_i Y_i          (gamma_i   <= 0)
//        sum_i x_ijp + b_jp  >= theta Q_jp       (delta_jp  >= 0)
//        (c_ij + a_p) w_ijp  <= R_ijp            (phi_ijp   <= 0)
//        w, x, b >= 0
//
// where s = pills per prescription and m = per-pill penalty. The binary w is
// relaxed; the first row keeps it at most 1. Incentives are held at
// R_ijp = c_ij + a_p on reachable triples, the smallest value any returning
// user accepts, which makes the last row slack whenever w <= 1.
//
// The optimality cut is the subproblem's dual objective as an affine
// function of Y:
//
//   u >= sum_i (sum_jp alpha_ijp A_ijp + gamma_i k_i) Y_i
//        + sum_jp delta_jp theta Q_jp + sum_ijp phi_ijp R_ijp
//
// (x_ijp - k_i w_ijp <= 0 has a zero right-hand side, so beta contributes
// nothing; phi R equals phi w (c + a) at optimality by complementarity.)

#ifndef RXRETURN_BENDERS_HPP_
#define RXRETURN_BENDERS_HPP_

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstddef>
#include <span>
#include <vector>

#include "rxreturn/error.hpp"
#include "rxreturn/grid.hpp"
#include "rxreturn/mip.hpp"
#include "rxreturn/model.hpp"
#include "rxreturn/simplex.hpp"

namespace rxreturn {

struct FirstStageDecision {
  std::vector<unsigned char> open;  // Y_i
  Grid3<double> incentive;          // R_ijp, currency per prescription
  double u_value = 0.0;

  std::size_t opened_count() const {
    return static_cast<std::size_t>(std::count(open.begin(), open.end(), 1));
  }
};

inline double fixed_cost(const Instance& inst, std::span<const unsigned char> open) {
  double total = 0.0;
  for (std::size_t i = 0; i < open.size(); ++i) {
    if (open[i]) total += inst.sites[i].fixed_cost;
  }
  return total;
}

// Step 1: every kiosk open, incentives at c_ij + a_p where reachable.
inline FirstStageDecision initial_decision(const Instance& inst, const DerivedParams& dp) {
  const std::size_t ni = inst.num_sites(), nj = inst.num_zones(), np = inst.num_profiles();
  FirstStageDecision dec;
  dec.open.assign(ni, 1);
  dec.incentive = Grid3<double>(ni, nj, np, 0.0);
  for (std::size_t i = 0; i < ni; ++i) {
    for (std::size_t j = 0; j < nj; ++j) {
      for (std::size_t p = 0; p < np; ++p) {
        if (dp.is_reachable(i, j, p)) dec.incentive(i, j, p) = dp.min_incentive(i, j, p);
      }
    }
  }
  return dec;
}

enum class SubproblemForm {
  // w eliminated: x_ijp <= k_i Y_i A_ijp as a bound, duals mapped back.
  Transportation,
  // Every row of the subproblem built literally.
  Full,
};

struct SubproblemDuals {
  Grid3<double> alpha;  // w <= Y A
  Grid3<double> beta;   // x - k w <= 0
  std::vector<double> gamma;  // capacity
  Grid2<double> delta;  // target
  Grid3<double> phi;    // incentive acceptance
};

struct SubproblemSolution {
  Grid3<double> assigned;    // w_ijp in [0, 1]
  Grid3<double> returned;    // x_ijp, pills
  Grid2<double> unreturned;  // b_jp, pills
  double objective = 0.0;
  // Value of the duals below on the full subproblem (their Lagrangian bound).
  double dual_objective = 0.0;
  SubproblemDuals duals;
  bool optimal = false;
  SubproblemForm form = SubproblemForm::Transportation;
  std::size_t lp_iterations = 0;
};

// The subproblem LP with every row spelled out, plus index maps.
struct SubproblemModel {
  lp::LinearProgram lp;
  Grid3<std::size_t> w_var, x_var;
  Grid2<std::size_t> b_var;
  Grid3<std::size_t> assign_row, link_row, accept_row;  // alpha, beta, phi
  std::vector<std::size_t> capacity_row;               // gamma
  Grid2<std::size_t> target_row;                       // delta
};

inline SubproblemModel build_subproblem_lp(const Instance& inst, const DerivedParams& dp,
                                           const FirstStageDecision& dec) {
  using lp::Relation;
  const std::size_t ni = inst.num_sites(), nj = inst.num_zones(), np = inst.num_profiles();
  const double s = dp.pills_per_prescription;
  SubproblemModel m;
  m.w_var = Grid3<std::size_t>(ni, nj, np);
  m.x_var = Grid3<std::size_t>(ni, nj, np);
  m.b_var = Grid2<std::size_t>(nj, np);
  m.assign_row = Grid3<std::size_t>(ni, nj, np);
  m.link_row = Grid3<std::size_t>(ni, nj, np);
  m.accept_row = Grid3<std::size_t>(ni, nj, np);
  m.capacity_row.resize(ni);
  m.target_row = Grid2<std::size_t>(nj, np);

  for (std::size_t i = 0; i < ni; ++i) {
    for (std::size_t j = 0; j < nj; ++j) {
      for (std::size_t p = 0; p < np; ++p) {
        m.w_var(i, j, p) = m.lp.add_variable(0.0, lp::kInf, 0.0);
        m.x_var(i, j, p) = m.lp.add_variable(0.0, lp::kInf, dec.incentive(i, j, p) / s);
      }
    }
  }
  for (std::size_t j = 0; j < nj; ++j) {
    for (std::size_t p = 0; p < np; ++p) {
      m.b_var(j, p) = m.lp.add_variable(0.0, lp::kInf, dp.per_pill_penalty);
    }
  }

  for (std::size_t i = 0; i < ni; ++i) {
    const double k = inst.sites[i].capacity;
    const double y = dec.open[i] ? 1.0 : 0.0;
    for (std::size_t j = 0; j < nj; ++j) {
      for (std::size_t p = 0; p < np; ++p) {
        const double a = dp.is_reachable(i, j, p) ? 1.0 : 0.0;
        m.assign_row(i, j, p) =
            m.lp.add_constraint({{m.w_var(i, j, p), 1.0}}, Relation::LessEqual, y * a);
        m.link_row(i, j, p) = m.lp.add_constraint(
            {{m.x_var(i, j, p), 1.0}, {m.w_var(i, j, p), -k}}, Relation::LessEqual, 0.0);
        m.accept_row(i, j, p) = m.lp.add_constraint(
            {{m.w_var(i, j, p), dp.min_incentive(i, j, p)}}, Relation::LessEqual,
            dec.incentive(i, j, p));
      }
    }
    std::vector<lp::Term> load;
    for (std::size_t j = 0; j < nj; ++j) {
      for (std::size_t p = 0; p < np; ++p) load.push_back({m.x_var(i, j, p), 1.0});
    }
    m.capacity_row[i] = m.lp.add_constraint(std::move(load), Relation::LessEqual, k * y);
  }
  for (std::size_t j = 0; j < nj; ++j) {
    for (std::size_t p = 0; p < np; ++p) {
      std::vector<lp::Term> supply;
      for (std::size_t i = 0; i < ni; ++i) supply.push_back({m.x_var(i, j, p), 1.0});
      supply.push_back({m.b_var(j, p), 1.0});
      m.target_row(j, p) =
          m.lp.add_constraint(std::move(supply), Relation::GreaterEqual, dp.target(j, p));
    }
  }
  return m;
}

namespace detail {

inline SubproblemSolution empty_subproblem_solution(std::size_t ni, std::size_t nj,
                                                    std::size_t np) {
  SubproblemSolution sol;
  sol.assigned = Grid3<double>(ni, nj, np, 0.0);
  sol.returned = Grid3<double>(ni, nj, np, 0.0);
  sol.unreturned = Grid2<double>(nj, np, 0.0);
  sol.duals.alpha = Grid3<double>(ni, nj, np, 0.0);
  sol.duals.beta = Grid3<double>(ni, nj, np, 0.0);
  sol.duals.phi = Grid3<double>(ni, nj, np, 0.0);
  sol.duals.gamma.assign(ni, 0.0);
  sol.duals.delta = Grid2<double>(nj, np, 0.0);
  return sol;
}

inline double subproblem_dual_value(const Instance& inst, const DerivedParams& dp,
                                    const FirstStageDecision& dec, const SubproblemDuals& d) {
  const std::size_t ni = inst.num_sites(), nj = inst.num_zones(), np = inst.num_profiles();
  double v = 0.0;
  for (std::size_t i = 0; i < ni; ++i) {
    const double y = dec.open[i] ? 1.0 : 0.0;
    v += d.gamma[i] * inst.sites[i].capacity * y;
    for (std::size_t j = 0; j < nj; ++j) {
      for (std::size_t p = 0; p < np; ++p) {
        if (dp.is_reachable(i, j, p)) v += d.alpha(i, j, p) * y;
        v += d.phi(i, j, p) * dec.incentive(i, j, p);
      }
    }
  }
  for (std::size_t j = 0; j < nj; ++j) {
    for (std::size_t p = 0; p < np; ++p) v += d.delta(j, p) * dp.target(j, p);
  }
  return v;
}

inline SubproblemSolution solve_full_subproblem(const Instance& inst, const DerivedParams& dp,
                                                const FirstStageDecision& dec,
                                                const lp::SimplexOptions& opt) {
  const std::size_t ni = inst.num_sites(), nj = inst.num_zones(), np = inst.num_profiles();
  auto model = build_subproblem_lp(inst, dp, dec);
  const auto lps = lp::solve_lp(model.lp, opt);
  auto sol = empty_subproblem_solution(ni, nj, np);
  sol.form = SubproblemForm::Full;
  sol.lp_iterations = lps.iterations;
  if (lps.status != lp::LpStatus::Optimal) return sol;
  sol.optimal = true;
  sol.objective = lps.objective;
  for (std::size_t i = 0; i < ni; ++i) {
    sol.duals.gamma[i] = lps.duals[model.capacity_row[i]];
    for (std::size_t j = 0; j < nj; ++j) {
      for (std::size_t p = 0; p < np; ++p) {
        sol.assigned(i, j, p) = lps.primal[model.w_var(i, j, p)];
        sol.returned(i, j, p) = lps.primal[model.x_var(i, j, p)];
        sol.duals.alpha(i, j, p) = lps.duals[model.assign_row(i, j, p)];
        sol.duals.beta(i, j, p) = lps.duals[model.link_row(i, j, p)];
        sol.duals.phi(i, j, p) = lps.duals[model.accept_row(i, j, p)];
      }
    }
  }
  for (std::size_t j = 0; j < nj; ++j) {
    for (std::size_t p = 0; p < np; ++p) {
      sol.unreturned(j, p) = lps.primal[model.b_var(j, p)];
      sol.duals.delta(j, p) = lps.duals[model.target_row(j, p)];
    }
  }
  sol.dual_objective = subproblem_dual_value(inst, dp, dec, sol.duals);
  return sol;
}

// Requires R_ijp >= c_ij + a_p on reachable triples, so that the acceptance
// row never binds below w = 1.
inline SubproblemSolution solve_transportation_subproblem(const Instance& inst,
                                                          const DerivedParams& dp,
                                                          const FirstStageDecision& dec,
                                                          const lp::SimplexOptions& opt) {
  using lp::Relation;
  const std::size_t ni = inst.num_sites(), nj = inst.num_zones(), np = inst.num_profiles();
  const double s = dp.pills_per_prescription;
  const std::size_t none = static_cast<std::size_t>(-1);

  lp::LinearProgram prog;
  Grid3<std::size_t> x_var(ni, nj, np, none);
  for (std::size_t i = 0; i < ni; ++i) {
    const double ub = dec.open[i] ? inst.sites[i].capacity : 0.0;
    for (std::size_t j = 0; j < nj; ++j) {
      for (std::size_t p = 0; p < np; ++p) {
        if (!dp.is_reachable(i, j, p)) continue;
        x_var(i, j, p) = prog.add_variable(0.0, ub, dec.incentive(i, j, p) / s);
      }
    }
  }
  Grid2<std::size_t> b_var(nj, np);
  for (std::size_t j = 0; j < nj; ++j) {
    for (std::size_t p = 0; p < np; ++p) {
      b_var(j, p) = prog.add_variable(0.0, lp::kInf, dp.per_pill_penalty);
    }
  }
  std::vector<std::size_t> cap_row(ni);
  for (std::size_t i = 0; i < ni; ++i) {
    std::vector<lp::Term> load;
    for (std::size_t j = 0; j < nj; ++j) {
      for (std::size_t p = 0; p < np; ++p) {
        if (x_var(i, j, p) != none) load.push_back({x_var(i, j, p), 1.0});
      }
    }
    cap_row[i] = prog.add_constraint(std::move(load), Relation::LessEqual,
                                     dec.open[i] ? inst.sites[i].capacity : 0.0);
  }
  Grid2<std::size_t> target_row(nj, np);
  for (std::size_t j = 0; j < nj; ++j) {
    for (std::size_t p = 0; p < np; ++p) {
      std::vector<lp::Term> supply;
      for (std::size_t i = 0; i < ni; ++i) {
        if (x_var(i, j, p) != none) supply.push_back({x_var(i, j, p), 1.0});
      }
      supply.push_back({b_var(j, p), 1.0});
      target_row(j, p) =
          prog.add_constraint(std::move(supply), Relation::GreaterEqual, dp.target(j, p));
    }
  }

  const auto lps = lp::solve_lp(prog, opt);
  auto sol = empty_subproblem_solution(ni, nj, np);
  sol.form = SubproblemForm::Transportation;
  sol.lp_iterations = lps.iterations;
  if (lps.status != lp::LpStatus::Optimal) return sol;
  sol.optimal = true;
  sol.objective = lps.objective;

  for (std::size_t i = 0; i < ni; ++i) sol.duals.gamma[i] = lps.duals[cap_row[i]];
  for (std::size_t j = 0; j < nj; ++j) {
    for (std::size_t p = 0; p < np; ++p) {
      sol.unreturned(j, p) = lps.primal[b_var(j, p)];
      sol.duals.delta(j, p) = lps.duals[target_row(j, p)];
    }
  }

  // Map back to the full subproblem: w = 1 wherever pills flow; the bound
  // x <= k Y A carries dual eta = min(0, reduced cost) when x sits at it,
  // which splits as beta = eta and alpha = k eta (phi = 0). Triples left
  // out of the reduced LP sit at their bound 0 and get the same treatment.
  for (std::size_t i = 0; i < ni; ++i) {
    const double k = inst.sites[i].capacity;
    const double ub = dec.open[i] ? k : 0.0;
    for (std::size_t j = 0; j < nj; ++j) {
      for (std::size_t p = 0; p < np; ++p) {
        const double d = dec.incentive(i, j, p) / s - sol.duals.gamma[i] - sol.duals.delta(j, p);
        double x = 0.0;
        bool at_upper = true;
        if (x_var(i, j, p) != none) {
          x = lps.primal[x_var(i, j, p)];
          at_upper = x >= ub - opt.feasibility_tol * (1.0 + ub);
        }
        sol.returned(i, j, p) = x;
        sol.assigned(i, j, p) = x > 0.0 ? 1.0 : 0.0;
        const double eta = at_upper ? std::min(0.0, d) : 0.0;
        sol.duals.beta(i, j, p) = eta;
        sol.duals.alpha(i, j, p) = k * eta;
      }
    }
  }
  sol.dual_objective = subproblem_dual_value(inst, dp, dec, sol.duals);
  return sol;
}

inline bool incentives_cover_minimum(const Instance& inst, const DerivedParams& dp,
                                     const FirstStageDecision& dec) {
  for (std::size_t i = 0; i < inst.num_sites(); ++i) {
    for (std::size_t j = 0; j < inst.num_zones(); ++j) {
      for (std::size_t p = 0; p < inst.num_profiles(); ++p) {
        if (dp.is_reachable(i, j, p) && dec.incentive(i, j, p) < dp.min_incentive(i, j, p)) {
          return false;
        }
      }
    }
  }
  return true;
}

// Rows of a closed kiosk (Y_i = 0) have zero right-hand sides, so their
// duals can be changed freely within dual feasibility without moving the
// dual objective. The cut coefficient of Y_i is then
//   k_i (gamma_i + sum_jp min(0, R_ijp / s - gamma_i - delta_jp)),
// which is largest at gamma_i = -max(0, max_jp (delta_jp - R_ijp / s)):
// opening the kiosk is credited with at most k_i pills at the best saving.
inline void tighten_closed_site_duals(const Instance& inst, const DerivedParams& dp,
                                      const FirstStageDecision& dec, SubproblemSolution& sol) {
  const std::size_t ni = inst.num_sites(), nj = inst.num_zones(), np = inst.num_profiles();
  const double s = dp.pills_per_prescription;
  for (std::size_t i = 0; i < ni; ++i) {
    if (dec.open[i]) continue;
    double best_saving = 0.0;
    for (std::size_t j = 0; j < nj; ++j) {
      for (std::size_t p = 0; p < np; ++p) {
        if (!dp.is_reachable(i, j, p)) continue;
        best_saving =
            std::max(best_saving, sol.duals.delta(j, p) - dec.incentive(i, j, p) / s);
      }
    }
    const double k = inst.sites[i].capacity;
    sol.duals.gamma[i] = -best_saving;
    for (std::size_t j = 0; j < nj; ++j) {
      for (std::size_t p = 0; p < np; ++p) {
        const double d = dec.incentive(i, j, p) / s - sol.duals.gamma[i] - sol.duals.delta(j, p);
        const double eta = std::min(0.0, d);
        sol.duals.beta(i, j, p) = eta;
        sol.duals.alpha(i, j, p) = k * eta;
        sol.duals.phi(i, j, p) = 0.0;
      }
    }
  }
  sol.dual_objective = subproblem_dual_value(inst, dp, dec, sol.duals);
}

}  // namespace detail

// Always feasible: b absorbs any shortfall. The transportation form falls
// back to the full form when some incentive is below c_ij + a_p.
inline SubproblemSolution solve_subproblem(const Instance& inst, const DerivedParams& dp,
                                           const FirstStageDecision& dec,
                                           SubproblemForm form = SubproblemForm::Transportation,
                                           const lp::SimplexOptions& opt = {}) {
  auto sol = form == SubproblemForm::Transportation && detail::incentives_cover_minimum(inst, dp, dec)
                 ? detail::solve_transportation_subproblem(inst, dp, dec, opt)
                 : detail::solve_full_subproblem(inst, dp, dec, opt);
  if (sol.optimal) detail::tighten_closed_site_duals(inst, dp, dec, sol);
  return sol;
}

// u >= constant + sum_i coeff_y[i] * Y_i
struct OptimalityCut {
  double constant = 0.0;
  std::vector<double> coeff_y;

  double evaluate(std::span<const unsigned char> open) const {
    double v = constant;
    for (std::size_t i = 0; i < coeff_y.size(); ++i) {
      if (open[i]) v += coeff_y[i];
    }
    return v;
  }
};

inline OptimalityCut build_cut(const Instance& inst, const DerivedParams& dp,
                               const FirstStageDecision& dec, const SubproblemSolution& sub) {
  if (!sub.optimal) {
    throw Error(ErrorCode::DualUnavailable, "subproblem was not solved to optimality");
  }
  const std::size_t ni = inst.num_sites(), nj = inst.num_zones(), np = inst.num_profiles();
  OptimalityCut cut;
  cut.coeff_y.assign(ni, 0.0);
  for (std::size_t i = 0; i < ni; ++i) {
    double c = sub.duals.gamma[i] * inst.sites[i].capacity;
    for (std::size_t j = 0; j < nj; ++j) {
      for (std::size_t p = 0; p < np; ++p) {
        if (dp.is_reachable(i, j, p)) c += sub.duals.alpha(i, j, p);
        cut.constant += sub.duals.phi(i, j, p) * dec.incentive(i, j, p);
      }
    }
    cut.coeff_y[i] = c;
  }
  for (std::size_t j = 0; j < nj; ++j) {
    for (std::size_t p = 0; p < np; ++p) {
      cut.constant += sub.duals.delta(j, p) * dp.target(j, p);
    }
  }
  return cut;
}

struct MasterResult {
  FirstStageDecision decision;
  // R_ijp from the master, at their lower bounds w_bar (c + a).
  Grid3<double> master_incentive;
  double objective = 0.0;
  double best_bound = 0.0;
  std::size_t nodes = 0;
  double max_duality_residual = 0.0;
};

// min u + sum f_i Y_i  s.t. cuts, R_ijp >= w_bar_ijp (c_ij + a_p), u >= 0,
// Y binary. The returned decision keeps incentives at c_ij + a_p on
// reachable triples for the next subproblem.
inline MasterResult solve_master(const Instance& inst, const DerivedParams& dp,
                                 std::span<const OptimalityCut> cuts,
                                 const Grid3<double>& w_bar,
                                 const mip::MipOptions& opt = {}) {
  using lp::Relation;
  const std::size_t ni = inst.num_sites(), nj = inst.num_zones(), np = inst.num_profiles();
  mip::MixedProgram mp;
  const std::size_t u = mp.lp.add_variable(0.0, lp::kInf, 1.0, "u");
  std::vector<std::size_t> y_var(ni);
  for (std::size_t i = 0; i < ni; ++i) {
    y_var[i] = mp.lp.add_variable(0.0, 1.0, inst.sites[i].fixed_cost, "Y_" + inst.sites[i].id);
    mp.binaries.push_back(y_var[i]);
  }
  for (const auto& cut : cuts) {
    std::vector<lp::Term> terms{{u, 1.0}};
    for (std::size_t i = 0; i < ni; ++i) terms.push_back({y_var[i], -cut.coeff_y[i]});
    mp.lp.add_constraint(std::move(terms), Relation::GreaterEqual, cut.constant);
  }

  const auto sol = mip::solve_mip(mp, opt);
  if (sol.status == mip::MipStatus::NodeLimitExceeded) {
    throw Error(ErrorCode::NodeLimitExceeded, "master problem exceeded the node limit");
  }
  if (sol.status != mip::MipStatus::Optimal) {
    throw Error(ErrorCode::Infeasible,
                std::string("master problem is ") + mip::to_string(sol.status));
  }

  MasterResult out;
  out.objective = sol.objective;
  out.best_bound = sol.best_bound;
  out.nodes = sol.nodes;
  out.max_duality_residual = sol.max_duality_residual;
  out.decision = initial_decision(inst, dp);
  out.decision.u_value = sol.primal[u];
  // R_ijp carries no cost and appears in no cut, so its optimal value is its
  // lower bound; it is set here rather than carried as LP columns.
  out.master_incentive = Grid3<double>(ni, nj, np, 0.0);
  for (std::size_t i = 0; i < ni; ++i) {
    out.decision.open[i] = sol.primal[y_var[i]] > 0.5 ? 1 : 0;
    for (std::size_t j = 0; j < nj; ++j) {
      for (std::size_t p = 0; p < np; ++p) {
        if (!dp.is_reachable(i, j, p)) continue;
        const double w = w_bar.size() ? std::max(0.0, w_bar(i, j, p)) : 0.0;
        out.master_incentive(i, j, p) = w * dp.min_incentive(i, j, p);
      }
    }
  }
  return out;
}

struct BendersOptions {
  double eps = 1e-6;  // stop when UB - LB <= eps (1 + |UB|)
  std::size_t max_iter = 500;
  SubproblemForm form = SubproblemForm::Transportation;
  mip::MipOptions master;
  lp::SimplexOptions simplex;
};

enum class Termination { GapClosed, DecisionRepeated, IterationLimit };

inline const char* to_string(Termination t) {
  switch (t) {
    case Termination::GapClosed: return "gap_closed";
    case Termination::DecisionRepeated: return "decision_repeated";
    case Termination::IterationLimit: return "iteration_limit";
  }
  return "?";
}

struct BendersIteration {
  std::size_t iter = 0;
  std::vector<unsigned char> open;  // decision evaluated by the subproblem
  double fixed_cost = 0.0;
  double sub_objective = 0.0;
  double sub_dual_objective = 0.0;
  double upper_bound = 0.0;       // best fixed + sub seen so far
  double master_objective = 0.0;  // after adding this iteration's cut
  double lower_bound = 0.0;       // running best master bound
  double gap = 0.0;
  std::size_t opened_count = 0;
  std::size_t cut_index = 0;
  double cut_constant = 0.0;
  double cut_tightness = 0.0;  // cut(Y) - sub objective at the generating Y
  std::size_t master_nodes = 0;
  double master_duality_residual = 0.0;
};

struct BendersResult {
  Termination termination = Termination::IterationLimit;
  FirstStageDecision incumbent;
  SubproblemSolution incumbent_sub;
  double upper_bound = lp::kInf;
  double lower_bound = 0.0;
  double gap = lp::kInf;
  std::vector<OptimalityCut> cuts;
  std::vector<BendersIteration> trace;
  double wall_seconds = 0.0;

  bool converged() const { return termination != Termination::IterationLimit; }
};

inline double relative_gap(double upper, double lower) {
  return std::max(0.0, upper - lower) / (1.0 + std::abs(upper));
}

inline BendersResult benders_solve(const Instance& inst, const DerivedParams& dp,
                                   const BendersOptions& opt = {}) {
  if (!(opt.eps > 0.0)) throw Error(ErrorCode::InvalidValue, "eps must be positive");
  const auto start = std::chrono::steady_clock::now();

  BendersResult res;
  FirstStageDecision dec = initial_decision(inst, dp);
  for (std::size_t iter = 1; iter <= opt.max_iter; ++iter) {
    BendersIteration rec;
    rec.iter = iter;
    rec.open = dec.open;
    rec.opened_count = dec.opened_count();
    rec.fixed_cost = fixed_cost(inst, dec.open);

    auto sub = solve_subproblem(inst, dp, dec, opt.form, opt.simplex);
    auto cut = build_cut(inst, dp, dec, sub);  // throws if sub is not optimal
    rec.sub_objective = sub.objective;
    rec.sub_dual_objective = sub.dual_objective;
    rec.cut_constant = cut.constant;
    rec.cut_tightness = cut.evaluate(dec.open) - sub.objective;

    const double candidate = rec.fixed_cost + sub.objective;
    if (candidate < res.upper_bound) {
      res.upper_bound = candidate;
      res.incumbent = dec;
      res.incumbent_sub = sub;
    }
    res.cuts.push_back(std::move(cut));
    rec.cut_index = res.cuts.size() - 1;

    auto master = solve_master(inst, dp, res.cuts, sub.assigned, opt.master);
    rec.master_objective = master.objective;
    rec.master_nodes = master.nodes;
    rec.master_duality_residual = master.max_duality_residual;
    res.lower_bound = std::max(res.lower_bound, master.best_bound);
    rec.upper_bound = res.upper_bound;
    rec.lower_bound = res.lower_bound;
    res.gap = rec.gap = relative_gap(res.upper_bound, res.lower_bound);
    res.trace.push_back(rec);

    if (res.upper_bound - res.lower_bound <= opt.eps * (1.0 + std::abs(res.upper_bound))) {
      res.termination = Termination::GapClosed;
      break;
    }
    if (master.decision.open == dec.open) {
      res.termination = Termination::DecisionRepeated;
      break;
    }
    dec = std::move(master.decision);
  }
  res.wall_seconds =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  return res;
}

}  // namespace rxreturn

#endif  // RXRETURN_BENDERS_HPP_
