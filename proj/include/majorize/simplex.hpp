#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <limits>
#include <vector>

#include "majorize/errors.hpp"

namespace majorize {

/// min objective . x  subject to  eq x = eq_rhs,  le x <= le_rhs,  x >= 0.
/// An empty objective means a pure feasibility problem.
struct LpProblem {
    std::size_t num_vars = 0;
    std::vector<std::vector<double>> eq;
    std::vector<double> eq_rhs;
    std::vector<std::vector<double>> le;
    std::vector<double> le_rhs;
    std::vector<double> objective;
};

enum class LpStatus { optimal, infeasible, unbounded, iteration_limit };

struct LpSolution {
    LpStatus status = LpStatus::infeasible;
    std::vector<double> x;
    double objective = 0.0;
};

/// Dense two-phase primal simplex with Bland's rule.  Problems here are tiny
/// (tens of variables), so the exact-pivot tableau keeps the whole certificate
/// pipeline auditable without an external solver.
class SimplexSolver {
public:
    explicit SimplexSolver(const LpProblem& p, double pivot_tol = 1e-11, int max_pivots = 50000)
        : pivot_tol_(pivot_tol), max_pivots_(max_pivots) {
        num_structural_ = p.num_vars + p.le.size();  // slacks appended
        rows_ = p.eq.size() + p.le.size();
        total_cols_ = num_structural_ + rows_;  // + artificials
        const std::size_t total = total_cols_;
        tableau_.assign(rows_, std::vector<double>(total + 1, 0.0));
        basis_.assign(rows_, 0);

        double bscale = 0.0;
        std::size_t r = 0;
        for (std::size_t i = 0; i < p.eq.size(); ++i, ++r) {
            require(p.eq[i].size() == p.num_vars, Errc::InvalidArgument, "eq row width");
            for (std::size_t j = 0; j < p.num_vars; ++j) tableau_[r][j] = p.eq[i][j];
            tableau_[r][total] = p.eq_rhs[i];
        }
        for (std::size_t i = 0; i < p.le.size(); ++i, ++r) {
            require(p.le[i].size() == p.num_vars, Errc::InvalidArgument, "le row width");
            for (std::size_t j = 0; j < p.num_vars; ++j) tableau_[r][j] = p.le[i][j];
            tableau_[r][p.num_vars + i] = 1.0;  // slack
            tableau_[r][total] = p.le_rhs[i];
        }
        for (r = 0; r < rows_; ++r) {
            if (tableau_[r][total] < 0.0)
                for (auto& v : tableau_[r]) v = -v;
            bscale = std::max(bscale, tableau_[r][total]);
            tableau_[r][num_structural_ + r] = 1.0;  // artificial
            basis_[r] = num_structural_ + r;
        }
        feas_tol_ = 1e-10 * (1.0 + bscale);

        objective_.assign(total, 0.0);
        for (std::size_t j = 0; j < p.objective.size() && j < p.num_vars; ++j)
            objective_[j] = p.objective[j];
        num_vars_ = p.num_vars;
    }

    LpSolution solve() {
        // Phase 1: minimize the sum of artificials.
        std::vector<double> phase1(total_cols_, 0.0);
        for (std::size_t j = num_structural_; j < phase1.size(); ++j) phase1[j] = 1.0;
        if (!iterate(phase1, /*allow_artificial=*/true))
            return LpSolution{LpStatus::iteration_limit, {}, 0.0};
        if (cost_of_basis(phase1) > feas_tol_) return LpSolution{LpStatus::infeasible, {}, 0.0};
        expel_artificials();

        if (!iterate(objective_, /*allow_artificial=*/false)) {
            if (unbounded_) return LpSolution{LpStatus::unbounded, {}, 0.0};
            return LpSolution{LpStatus::iteration_limit, {}, 0.0};
        }

        LpSolution sol;
        sol.status = LpStatus::optimal;
        sol.x.assign(num_vars_, 0.0);
        for (std::size_t r = 0; r < rows_; ++r)
            if (basis_[r] < num_vars_) sol.x[basis_[r]] = tableau_[r][total_cols_];
        sol.objective = cost_of_basis(objective_);
        return sol;
    }

private:
    double cost_of_basis(const std::vector<double>& cost) const {
        double v = 0.0;
        for (std::size_t r = 0; r < rows_; ++r) v += cost[basis_[r]] * tableau_[r][total_cols_];
        return v;
    }

    // Reduced cost of column j under `cost`.
    double reduced_cost(const std::vector<double>& cost, std::size_t j) const {
        double v = cost[j];
        for (std::size_t r = 0; r < rows_; ++r) v -= cost[basis_[r]] * tableau_[r][j];
        return v;
    }

    void pivot(std::size_t prow, std::size_t pcol) {
        const double inv = 1.0 / tableau_[prow][pcol];
        for (auto& v : tableau_[prow]) v *= inv;
        tableau_[prow][pcol] = 1.0;
        for (std::size_t r = 0; r < rows_; ++r) {
            if (r == prow) continue;
            const double f = tableau_[r][pcol];
            if (f == 0.0) continue;
            for (std::size_t j = 0; j < tableau_[r].size(); ++j)
                tableau_[r][j] -= f * tableau_[prow][j];
            tableau_[r][pcol] = 0.0;
        }
        basis_[prow] = pcol;
    }

    // Bland's rule loop; returns false on pivot budget (or sets unbounded_).
    bool iterate(const std::vector<double>& cost, bool allow_artificial) {
        const std::size_t ncols = total_cols_;
        const std::size_t rhs = total_cols_;
        for (int it = 0; it < max_pivots_; ++it) {
            std::size_t enter = ncols;
            for (std::size_t j = 0; j < ncols; ++j) {
                if (!allow_artificial && j >= num_structural_) break;
                if (reduced_cost(cost, j) < -pivot_tol_) {
                    enter = j;
                    break;
                }
            }
            if (enter == ncols) return true;  // optimal

            std::size_t leave = rows_;
            double best = std::numeric_limits<double>::infinity();
            for (std::size_t r = 0; r < rows_; ++r) {
                const double a = tableau_[r][enter];
                if (a <= pivot_tol_) continue;
                const double ratio = tableau_[r][rhs] / a;
                if (ratio < best - 1e-15 ||
                    (std::abs(ratio - best) <= 1e-15 &&
                     (leave == rows_ || basis_[r] < basis_[leave]))) {
                    best = ratio;
                    leave = r;
                }
            }
            if (leave == rows_) {
                unbounded_ = true;
                return false;
            }
            pivot(leave, enter);
        }
        return false;
    }

    // Pivot basic artificials onto structural columns; drop redundant rows.
    void expel_artificials() {
        for (std::size_t r = 0; r < rows_;) {
            if (basis_[r] < num_structural_) {
                ++r;
                continue;
            }
            std::size_t col = num_structural_;
            for (std::size_t j = 0; j < num_structural_; ++j) {
                if (std::abs(tableau_[r][j]) > 1e3 * pivot_tol_) {
                    col = j;
                    break;
                }
            }
            if (col < num_structural_) {
                pivot(r, col);
                ++r;
            } else {
                tableau_.erase(tableau_.begin() + static_cast<std::ptrdiff_t>(r));
                basis_.erase(basis_.begin() + static_cast<std::ptrdiff_t>(r));
                --rows_;
            }
        }
    }

    std::vector<std::vector<double>> tableau_;
    std::vector<std::size_t> basis_;
    std::vector<double> objective_;
    std::size_t rows_ = 0;
    std::size_t num_vars_ = 0;
    std::size_t num_structural_ = 0;
    std::size_t total_cols_ = 0;
    double pivot_tol_;
    double feas_tol_;
    int max_pivots_;
    bool unbounded_ = false;
};

inline LpSolution solve_lp(const LpProblem& p, double pivot_tol = 1e-11, int max_pivots = 50000) {
    return SimplexSolver(p, pivot_tol, max_pivots).solve();
}

}  // namespace majorize
