#include "sct/lp.hpp"

#include <algorithm>
#include <cmath>

namespace sct::lp {

const char* to_string(LpStatus s) {
    switch (s) {
        case LpStatus::Optimal: return "optimal";
        case LpStatus::Infeasible: return "infeasible";
        case LpStatus::Unbounded: return "unbounded";
    }
    return "?";
}

LinearProgram LinearProgram::standard(Eigen::VectorXd c, Eigen::MatrixXd A, Eigen::VectorXd b) {
    LinearProgram lp;
    lp.objective = std::move(c);
    lp.equality_matrix = std::move(A);
    lp.equality_rhs = std::move(b);
    lp.lower_bounds = Eigen::VectorXd::Zero(lp.objective.size());
    lp.upper_bounds = Eigen::VectorXd::Constant(lp.objective.size(), kInf);
    return lp;
}

void LinearProgram::validate() const {
    const int n = n_vars();
    if (equality_matrix.cols() != n || lower_bounds.size() != n || upper_bounds.size() != n)
        throw DimensionMismatch("lp: column/bound sizes disagree with objective");
    if (equality_matrix.rows() != equality_rhs.size())
        throw DimensionMismatch("lp: row count disagrees with rhs");
    if (!objective.allFinite() || !equality_matrix.allFinite() || !equality_rhs.allFinite())
        throw DimensionMismatch("lp: non-finite entries in objective/matrix/rhs");
    for (int j = 0; j < n; ++j) {
        const double lo = lower_bounds[j], hi = upper_bounds[j];
        if (!(lo == 0.0 || lo == -kInf))
            throw DimensionMismatch("lp: lower bound must be 0 or -inf");
        if (!(hi == kInf || std::isfinite(hi)))
            throw DimensionMismatch("lp: upper bound must be finite or +inf");
        if (lo > hi) throw DimensionMismatch("lp: lower bound exceeds upper bound");
    }
}

namespace {

// Column of the standard-form expansion: original variable index and the
// sign it enters with (free variables split as x = x+ - x-).
struct StdCol {
    int var;
    double sign;
};

struct Tableau {
    // Layout: [structural columns | artificial columns | rhs].
    Eigen::MatrixXd T;
    std::vector<int> basis;          // basic column per row
    int n_struct = 0;                // structural column count
    int m = 0;                       // row count
    std::vector<double> row_sign;    // original row scaling (+1/-1)
    std::vector<bool> row_dropped;   // redundant rows neutralized after phase 1

    int n_total() const { return n_struct + m; }
    double rhs(int r) const { return T(r, n_struct + m); }
};

void pivot(Tableau& tb, int row, int col) {
    const double p = tb.T(row, col);
    tb.T.row(row) /= p;
    for (int r = 0; r < tb.m; ++r) {
        if (r == row) continue;
        const double f = tb.T(r, col);
        if (f != 0.0) tb.T.row(r) -= f * tb.T.row(row);
    }
    tb.basis[static_cast<size_t>(row)] = col;
}

// One simplex phase over the given cost vector (sized n_struct + m).
// Returns true on optimality, false on unboundedness (entering column
// recorded in *unbounded_col). Artificial columns never enter.
bool run_phase(Tableau& tb, const Eigen::VectorXd& cost, const LpOptions& opt,
               int* unbounded_col, long* pivots_left) {
    const int n = tb.n_struct;
    const double cost_scale = 1.0 + cost.cwiseAbs().maxCoeff();
    const double enter_tol = 1e-11 * cost_scale;
    const long bland_after = 20L * (tb.m + n) + 50;
    long iter = 0;

    while (true) {
        if (--(*pivots_left) < 0)
            throw NumericalBreakdown("lp: pivot budget exhausted");
        ++iter;

        // Reduced costs d_j = c_j - c_B · T_col(j), recomputed each
        // iteration; problems here are tiny.
        Eigen::VectorXd cb(tb.m);
        for (int r = 0; r < tb.m; ++r) cb[r] = cost[tb.basis[static_cast<size_t>(r)]];

        int enter = -1;
        double best = -enter_tol;
        const bool bland = iter > bland_after;
        for (int j = 0; j < n; ++j) {
            const double dj = cost[j] - cb.dot(tb.T.col(j));
            if (dj < -enter_tol) {
                if (bland) {
                    enter = j;
                    break;
                }
                if (dj < best) {
                    best = dj;
                    enter = j;
                }
            }
        }
        if (enter < 0) return true;

        // Ratio test; Bland ties resolved by smallest basic index.
        int leave = -1;
        double best_ratio = kInf;
        double best_pivot = 0.0;
        for (int r = 0; r < tb.m; ++r) {
            if (tb.row_dropped[static_cast<size_t>(r)]) continue;
            const double a = tb.T(r, enter);
            if (a > opt.pivot_tol) {
                const double ratio = tb.rhs(r) / a;
                const bool better =
                    ratio < best_ratio - 1e-12 ||
                    (ratio < best_ratio + 1e-12 &&
                     (leave < 0 ||
                      (bland ? tb.basis[static_cast<size_t>(r)] < tb.basis[static_cast<size_t>(leave)]
                             : a > best_pivot)));
            if (better) {
                    best_ratio = ratio;
                    leave = r;
                    best_pivot = a;
                }
            }
        }
        if (leave < 0) {
            // Nothing blocks the entering column. Distinguish a genuine
            // ray from a numerically collapsed pivot column.
            double max_pos = 0.0;
            for (int r = 0; r < tb.m; ++r)
                if (!tb.row_dropped[static_cast<size_t>(r)])
                    max_pos = std::max(max_pos, tb.T(r, enter));
            if (max_pos > 0.0 && max_pos <= opt.pivot_tol)
                throw NumericalBreakdown("lp: pivot below pivot_tol in unbounded column");
            *unbounded_col = enter;
            return false;
        }
        pivot(tb, leave, enter);
    }
}

}  // namespace

LpOutcome solve_lp(const LinearProgram& lp, const LpOptions& opt) {
    lp.validate();
    const int n = lp.n_vars();
    const int m0 = lp.n_rows();

    // Standard-form expansion: split free variables, add a slack row per
    // finite upper bound.
    std::vector<StdCol> cols;
    std::vector<std::vector<int>> var_cols(static_cast<size_t>(n));
    for (int j = 0; j < n; ++j) {
        var_cols[static_cast<size_t>(j)].push_back(static_cast<int>(cols.size()));
        cols.push_back({j, 1.0});
        if (lp.lower_bounds[j] == -kInf) {
            var_cols[static_cast<size_t>(j)].push_back(static_cast<int>(cols.size()));
            cols.push_back({j, -1.0});
        }
    }
    std::vector<int> ub_vars;
    for (int j = 0; j < n; ++j)
        if (lp.upper_bounds[j] != kInf) ub_vars.push_back(j);

    const int n_slack = static_cast<int>(ub_vars.size());
    const int n_core = static_cast<int>(cols.size());
    const int n_struct = n_core + n_slack;
    const int m = m0 + n_slack;

    Tableau tb;
    tb.n_struct = n_struct;
    tb.m = m;
    tb.row_sign.assign(static_cast<size_t>(m), 1.0);
    tb.row_dropped.assign(static_cast<size_t>(m), false);
    tb.T.setZero(m, n_struct + m + 1);

    for (int r = 0; r < m0; ++r) {
        for (int k = 0; k < n_core; ++k)
            tb.T(r, k) = lp.equality_matrix(r, cols[static_cast<size_t>(k)].var) *
                         cols[static_cast<size_t>(k)].sign;
        tb.T(r, n_struct + m) = lp.equality_rhs[r];
    }
    for (int s = 0; s < n_slack; ++s) {
        const int r = m0 + s;
        const int j = ub_vars[static_cast<size_t>(s)];
        for (int k : var_cols[static_cast<size_t>(j)])
            tb.T(r, k) = cols[static_cast<size_t>(k)].sign;
        tb.T(r, n_core + s) = 1.0;
        tb.T(r, n_struct + m) = lp.upper_bounds[j];
    }

    // Nonnegative rhs, then the artificial identity block.
    for (int r = 0; r < m; ++r) {
        if (tb.T(r, n_struct + m) < 0.0) {
            tb.T.row(r) = -tb.T.row(r);
            tb.row_sign[static_cast<size_t>(r)] = -1.0;
        }
        tb.T(r, n_struct + r) = 1.0;
        tb.basis.push_back(n_struct + r);
    }

    LpOptions o = opt;
    long pivots_left = o.max_pivots > 0 ? o.max_pivots : 2000L + 200L * (m + n_struct);

    // Phase 1.
    Eigen::VectorXd phase1 = Eigen::VectorXd::Zero(n_struct + m);
    phase1.tail(m).setOnes();
    int unb_col = -1;
    run_phase(tb, phase1, o, &unb_col, &pivots_left);  // bounded below by 0

    double art_sum = 0.0;
    for (int r = 0; r < m; ++r)
        if (tb.basis[static_cast<size_t>(r)] >= n_struct) art_sum += tb.rhs(r);
    const double b_scale = 1.0 + lp.equality_rhs.cwiseAbs().maxCoeff();
    if (art_sum > o.feas_tol * b_scale) {
        LpOutcome out;
        out.status = LpStatus::Infeasible;
        return out;
    }

    // Drive remaining artificials out of the basis; rows that admit no
    // structural pivot are redundant and get neutralized.
    for (int r = 0; r < m; ++r) {
        if (tb.basis[static_cast<size_t>(r)] < n_struct) continue;
        int piv = -1;
        double best = o.pivot_tol;
        for (int j = 0; j < n_struct; ++j) {
            if (std::abs(tb.T(r, j)) > best) {
                best = std::abs(tb.T(r, j));
                piv = j;
            }
        }
        if (piv >= 0) {
            pivot(tb, r, piv);
        } else {
            tb.row_dropped[static_cast<size_t>(r)] = true;
        }
    }

    // Phase 2.
    Eigen::VectorXd phase2 = Eigen::VectorXd::Zero(n_struct + m);
    for (int k = 0; k < n_core; ++k)
        phase2[k] = lp.objective[cols[static_cast<size_t>(k)].var] * cols[static_cast<size_t>(k)].sign;

    unb_col = -1;
    const bool optimal = run_phase(tb, phase2, o, &unb_col, &pivots_left);

    LpOutcome out;
    if (!optimal) {
        out.status = LpStatus::Unbounded;
        Eigen::VectorXd ray_std = Eigen::VectorXd::Zero(n_struct);
        ray_std[unb_col] = 1.0;
        for (int r = 0; r < m; ++r) {
            const int b = tb.basis[static_cast<size_t>(r)];
            if (b < n_struct && !tb.row_dropped[static_cast<size_t>(r)])
                ray_std[b] = -tb.T(r, unb_col);
        }
        Eigen::VectorXd ray = Eigen::VectorXd::Zero(n);
        for (int k = 0; k < n_core; ++k)
            ray[cols[static_cast<size_t>(k)].var] += cols[static_cast<size_t>(k)].sign * ray_std[k];
        const double scale = ray.cwiseAbs().maxCoeff();
        if (scale > 0.0) ray /= scale;
        out.ray = ray;
        return out;
    }

    Eigen::VectorXd x_std = Eigen::VectorXd::Zero(n_struct);
    for (int r = 0; r < m; ++r) {
        const int b = tb.basis[static_cast<size_t>(r)];
        if (b < n_struct) x_std[b] = tb.rhs(r);
    }
    Eigen::VectorXd x = Eigen::VectorXd::Zero(n);
    for (int k = 0; k < n_core; ++k)
        x[cols[static_cast<size_t>(k)].var] += cols[static_cast<size_t>(k)].sign * x_std[k];

    // Duals from the artificial block, which carries B^{-1} of the
    // sign-scaled rows.
    Eigen::VectorXd cb(m);
    for (int r = 0; r < m; ++r) cb[r] = phase2[tb.basis[static_cast<size_t>(r)]];
    Eigen::VectorXd y_scaled(m);
    for (int r = 0; r < m; ++r) y_scaled[r] = cb.dot(tb.T.col(n_struct + r));
    Eigen::VectorXd y(m);
    for (int r = 0; r < m; ++r) y[r] = tb.row_sign[static_cast<size_t>(r)] * y_scaled[r];

    out.status = LpStatus::Optimal;
    out.primal = x;
    out.value = lp.objective.dot(x);
    out.dual = y.head(m0);
    out.bound_dual = Eigen::VectorXd::Zero(n);
    for (int s = 0; s < n_slack; ++s)
        out.bound_dual[ub_vars[static_cast<size_t>(s)]] = std::max(0.0, -y[m0 + s]);
    return out;
}

Eigen::MatrixXd nullspace_basis(const Eigen::MatrixXd& A, double rank_tol) {
    const int ncols = static_cast<int>(A.cols());
    if (A.rows() == 0 || A.size() == 0)
        return Eigen::MatrixXd::Identity(ncols, ncols);
    Eigen::JacobiSVD<Eigen::MatrixXd> svd(A, Eigen::ComputeFullV);
    const double smax = svd.singularValues().size() > 0 ? svd.singularValues()[0] : 0.0;
    const double tol = rank_tol * (1.0 + smax);
    int rank = 0;
    for (int i = 0; i < svd.singularValues().size(); ++i)
        if (svd.singularValues()[i] > tol) ++rank;
    return svd.matrixV().rightCols(ncols - rank);
}

int numerical_rank(const Eigen::MatrixXd& A, double rank_tol) {
    if (A.rows() == 0 || A.size() == 0) return 0;
    Eigen::JacobiSVD<Eigen::MatrixXd> svd(A);
    const double smax = svd.singularValues().size() > 0 ? svd.singularValues()[0] : 0.0;
    const double tol = rank_tol * (1.0 + smax);
    int rank = 0;
    for (int i = 0; i < svd.singularValues().size(); ++i)
        if (svd.singularValues()[i] > tol) ++rank;
    return rank;
}

Eigen::VectorXd min_norm_solve(const Eigen::MatrixXd& A, const Eigen::VectorXd& b,
                               double rank_tol) {
    if (A.rows() != b.size()) throw DimensionMismatch("min_norm_solve: row mismatch");
    Eigen::CompleteOrthogonalDecomposition<Eigen::MatrixXd> cod(A);
    cod.setThreshold(rank_tol);
    Eigen::VectorXd x = cod.solve(b);
    const double resid = (A * x - b).cwiseAbs().maxCoeff();
    const double scale = 1.0 + b.cwiseAbs().maxCoeff();
    if (resid > 1e-10 * scale)
        throw Inconsistent("min_norm_solve: residual " + std::to_string(resid) +
                           " exceeds tolerance");
    return x;
}

int LpBuilder::add_variable(double cost, double lb, double ub) {
    cost_.push_back(cost);
    lb_.push_back(lb);
    ub_.push_back(ub);
    return n_user_++;
}

void LpBuilder::add_eq(const std::vector<std::pair<int, double>>& terms, double rhs) {
    rows_.push_back({terms, rhs, 0});
}
void LpBuilder::add_le(const std::vector<std::pair<int, double>>& terms, double rhs) {
    rows_.push_back({terms, rhs, +1});
}
void LpBuilder::add_ge(const std::vector<std::pair<int, double>>& terms, double rhs) {
    rows_.push_back({terms, rhs, -1});
}

LinearProgram LpBuilder::build() const {
    int n_slack = 0;
    for (const Row& r : rows_)
        if (r.slack_sign != 0) ++n_slack;
    const int n = n_user_ + n_slack;
    const int m = static_cast<int>(rows_.size());

    LinearProgram lp;
    lp.objective = Eigen::VectorXd::Zero(n);
    for (int j = 0; j < n_user_; ++j) lp.objective[j] = cost_[static_cast<size_t>(j)];
    lp.equality_matrix = Eigen::MatrixXd::Zero(m, n);
    lp.equality_rhs = Eigen::VectorXd::Zero(m);
    lp.lower_bounds = Eigen::VectorXd::Zero(n);
    lp.upper_bounds = Eigen::VectorXd::Constant(n, kInf);
    for (int j = 0; j < n_user_; ++j) {
        lp.lower_bounds[j] = lb_[static_cast<size_t>(j)];
        lp.upper_bounds[j] = ub_[static_cast<size_t>(j)];
    }

    int slack = n_user_;
    for (int r = 0; r < m; ++r) {
        const Row& row = rows_[static_cast<size_t>(r)];
        for (auto [j, a] : row.terms) lp.equality_matrix(r, j) += a;
        lp.equality_rhs[r] = row.rhs;
        if (row.slack_sign != 0) lp.equality_matrix(r, slack++) = row.slack_sign;
    }
    return lp;
}

LpOutcome LpBuilder::solve(const LpOptions& opt) const {
    LpOutcome out = solve_lp(build(), opt);
    if (out.status == LpStatus::Optimal) {
        out.primal.conservativeResize(n_user_);
        out.bound_dual.conservativeResize(n_user_);
    } else if (out.status == LpStatus::Unbounded) {
        out.ray.conservativeResize(n_user_);
    }
    return out;
}

}  // namespace sct::lp
