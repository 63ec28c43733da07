#pragma once

#include <Eigen/Dense>

#include <limits>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace sct::lp {

inline constexpr double kInf = std::numeric_limits<double>::infinity();

struct Error : std::runtime_error {
    using std::runtime_error::runtime_error;
};
struct DimensionMismatch : Error {
    using Error::Error;
};
struct NumericalBreakdown : Error {
    using Error::Error;
};
struct Inconsistent : Error {
    using Error::Error;
};

/// minimize objective·x  subject to  equality_matrix·x = equality_rhs,
/// lower_bounds[j] <= x[j] <= upper_bounds[j].
///
/// Lower bounds are restricted to {0, -inf} and upper bounds to
/// {finite, +inf}; general boxes are expressed by shifting at the call
/// site.
struct LinearProgram {
    Eigen::VectorXd objective;
    Eigen::MatrixXd equality_matrix;
    Eigen::VectorXd equality_rhs;
    Eigen::VectorXd lower_bounds;  // entries 0 or -inf
    Eigen::VectorXd upper_bounds;  // entries finite or +inf

    /// Standard form: x >= 0, no upper bounds.
    static LinearProgram standard(Eigen::VectorXd c, Eigen::MatrixXd A, Eigen::VectorXd b);

    int n_vars() const { return static_cast<int>(objective.size()); }
    int n_rows() const { return static_cast<int>(equality_rhs.size()); }
    void validate() const;  // throws DimensionMismatch
};

enum class LpStatus { Optimal, Infeasible, Unbounded };

const char* to_string(LpStatus s);

struct LpOutcome {
    LpStatus status = LpStatus::Infeasible;
    double value = 0.0;          // valid iff Optimal
    Eigen::VectorXd primal;      // valid iff Optimal
    Eigen::VectorXd dual;        // valid iff Optimal; one entry per equality row
    Eigen::VectorXd bound_dual;  // valid iff Optimal; multiplier (>=0) per finite upper bound
    Eigen::VectorXd ray;         // valid iff Unbounded; direction of unbounded descent
};

struct LpOptions {
    double feas_tol = 1e-9;
    double gap_tol = 1e-8;
    double pivot_tol = 1e-9;
    long max_pivots = 0;  // 0 = automatic
};

/// Dense two-phase simplex. Dantzig pricing with a permanent switch to
/// Bland's rule after a pivot budget, so termination is guaranteed.
LpOutcome solve_lp(const LinearProgram& lp, const LpOptions& opt = {});

/// Orthonormal basis of ker(A). Columns satisfy |A·B|_max <= rank_tol·(1+|A|).
/// A matrix with no rows has the whole space as kernel.
Eigen::MatrixXd nullspace_basis(const Eigen::MatrixXd& A, double rank_tol = 1e-10);

/// Numerical rank matching the threshold used by nullspace_basis.
int numerical_rank(const Eigen::MatrixXd& A, double rank_tol = 1e-10);

/// Minimum-Euclidean-norm solution of the consistent system A·x = b.
/// Throws Inconsistent when the residual exceeds 1e-10·(1+|b|_inf).
Eigen::VectorXd min_norm_solve(const Eigen::MatrixXd& A, const Eigen::VectorXd& b,
                               double rank_tol = 1e-10);

/// Incremental construction of small LPs: named variables with bounds,
/// equality and inequality rows (slacks added internally). Inequality
/// slacks are appended after user variables, so outcomes are reported
/// on the user variables only.
class LpBuilder {
public:
    int add_variable(double cost, double lb = 0.0, double ub = kInf);
    void add_eq(const std::vector<std::pair<int, double>>& terms, double rhs);
    void add_le(const std::vector<std::pair<int, double>>& terms, double rhs);
    void add_ge(const std::vector<std::pair<int, double>>& terms, double rhs);

    LinearProgram build() const;
    /// Solves and truncates primal/ray to the user variables.
    LpOutcome solve(const LpOptions& opt = {}) const;

    int n_user_vars() const { return n_user_; }

private:
    struct Row {
        std::vector<std::pair<int, double>> terms;
        double rhs;
        int slack_sign;  // 0 equality, +1 for <=, -1 for >=
    };
    int n_user_ = 0;
    std::vector<double> cost_, lb_, ub_;
    std::vector<Row> rows_;
};

}  // namespace sct::lp
