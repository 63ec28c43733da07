#pragma once

#include "sct/lp.hpp"

#include <Eigen/Dense>

#include <optional>
#include <stdexcept>
#include <vector>

namespace sct::cone {

struct ConeError : std::runtime_error {
    using std::runtime_error::runtime_error;
};
struct NotControllable : ConeError {
    using ConeError::ConeError;
};
struct HamiltonianInfinite : ConeError {
    using ConeError::ConeError;
};
struct DimensionTooLarge : ConeError {
    using ConeError::ConeError;
};
struct EmptyCone : ConeError {
    using ConeError::ConeError;
};

/// Finitely generated closed convex cone in R^p, stored as unit-norm
/// generator columns.
struct ControlCone {
    Eigen::MatrixXd generators;  // p x J, unit columns

    static ControlCone from_columns(const Eigen::MatrixXd& raw);
    int ambient_dim() const { return static_cast<int>(generators.rows()); }
    int n_generators() const { return static_cast<int>(generators.cols()); }
};

struct ConditionTolerances {
    double ray_tol = 1e-9;     // |G r_j| below this counts as a zero displacement
    double strict_tol = 1e-7;  // separates delta* > 0 from delta* = 0
    double arb_tol = 1e-9;
    double delta_cap = 1e6;
};

/// The control data (cone, displacement matrix, per-unit control cost,
/// discount). Steering selections for each coordinate direction are
/// cached eagerly when the system is controllable; all members are
/// immutable afterwards, so concurrent reads are safe.
class ControlSystem {
public:
    ControlSystem(ControlCone cone, Eigen::MatrixXd displacement_matrix,
                  Eigen::VectorXd control_cost, double discount,
                  ConditionTolerances tol = {});

    const ControlCone& cone() const { return cone_; }
    const Eigen::MatrixXd& displacement_matrix() const { return G_; }
    const Eigen::VectorXd& control_cost() const { return kappa_; }
    double discount() const { return alpha_; }
    const ConditionTolerances& tolerances() const { return tol_; }

    int state_dim() const { return static_cast<int>(G_.rows()); }
    int control_dim() const { return static_cast<int>(G_.cols()); }

    bool controllable() const { return controllable_; }
    /// Growth constant of the steering selection (d·max_i |f_i^+| v |f_i^-|).
    double steering_growth() const;
    const Eigen::VectorXd& steering_pos(int axis) const;
    const Eigen::VectorXd& steering_neg(int axis) const;

    Eigen::MatrixXd displaced_generators() const { return G_ * cone_.generators; }

private:
    ControlCone cone_;
    Eigen::MatrixXd G_;
    Eigen::VectorXd kappa_;
    double alpha_;
    ConditionTolerances tol_;

    bool controllable_ = false;
    std::vector<Eigen::VectorXd> f_pos_, f_neg_;
    double growth_ = 0.0;
};

/// Minimal control cost of an instantaneous state displacement x:
/// inf { kappa·u : u in cone, G u = x }. Returns +inf when x is not
/// reachable and -inf when the cost is unbounded below.
double displacement_cost(const ControlSystem& sys, const Eigen::VectorXd& x);

/// A cost-minimizing control u attaining displacement_cost(sys, x).
/// Requires the cost to be finite.
Eigen::VectorXd displacement_argmin(const ControlSystem& sys, const Eigen::VectorXd& x);

/// Unit direction set used to discretize suprema over displacements:
/// exactly {+1,-1} for d = 1, n_dirs equispaced angles for d = 2.
std::vector<Eigen::VectorXd> unit_directions(int d, int n_dirs);

/// sup over unit displacement directions e of (-e·q - c(e)). Exact for
/// d = 1; under-approximates by O(1/n_dirs) for d = 2. Throws
/// HamiltonianInfinite when some direction has cost -inf.
double hamiltonian(const ControlSystem& sys, const Eigen::VectorXd& q, int n_dirs = 64);

struct ConditionReport {
    bool controllable = false;            // G·cone spans the whole state space
    bool hamiltonian_finite = false;      // sup finite somewhere (hence everywhere)
    bool strict_subsolution_exists = false;  // inf over q is strictly negative
    bool no_arbitrage = false;            // no nonzero u with Gu = 0, kappa·u <= 0
    bool weak_no_arbitrage = false;       // epsilon-form; equals hamiltonian_finite
    bool u1_condition = false;            // a unit vector makes an acute angle with the cone

    bool weak_no_arbitrage_sweep = false;  // independent epsilon-sweep verdict (cross-check)

    std::optional<Eigen::VectorXd> witness_q;   // linear strict subsolution slope
    std::optional<double> witness_delta;        // margin achieved by witness_q
    std::optional<Eigen::VectorXd> arbitrage_direction;
};

/// Decides all solvability/uniqueness conditions by LP on the generator
/// representation.
ConditionReport check_conditions(const ControlSystem& sys);

/// Epsilon-sweep form of the weak no-arbitrage condition, decided by a
/// descending sequence of feasibility LPs (infinity-norm relaxation).
bool weak_no_arbitrage_sweep(const ControlSystem& sys);

/// Steering selection: a cone element u with G u = x and
/// |u| <= steering_growth()·|x|, assembled from the cached per-axis
/// selections. Throws NotControllable.
Eigen::VectorXd control_for_displacement(const ControlSystem& sys, const Eigen::VectorXd& x);

/// Generators of range(K) ∩ R+^p, found by enumerating coordinate
/// zero-sets whose trace on the subspace is one-dimensional and
/// sign-definite. Throws DimensionTooLarge for p > 14 and EmptyCone when
/// the intersection is {0}.
ControlCone cone_from_subspace_intersection(const Eigen::MatrixXd& K);

}  // namespace sct::cone
