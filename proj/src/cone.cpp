#include "sct/cone.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

namespace sct::cone {

using Eigen::MatrixXd;
using Eigen::VectorXd;
using lp::LpBuilder;
using lp::LpOutcome;
using lp::LpStatus;

ControlCone ControlCone::from_columns(const MatrixXd& raw) {
    if (raw.cols() < 1) throw ConeError("cone: at least one generator required");
    ControlCone c;
    c.generators = raw;
    for (int j = 0; j < raw.cols(); ++j) {
        const double n = raw.col(j).norm();
        if (n < 1e-14) throw ConeError("cone: zero generator column");
        c.generators.col(j) /= n;
    }
    return c;
}

namespace {

// min (kappa'R) λ  s.t. (G R) λ = x, λ >= 0.
LpOutcome displacement_lp(const ControlSystem& sys, const VectorXd& x) {
    const MatrixXd GR = sys.displaced_generators();
    const VectorXd cost = sys.cone().generators.transpose() * sys.control_cost();
    lp::LinearProgram prog = lp::LinearProgram::standard(cost, GR, x);
    return lp::solve_lp(prog);
}

}  // namespace

ControlSystem::ControlSystem(ControlCone cone, MatrixXd displacement_matrix,
                             VectorXd control_cost, double discount, ConditionTolerances tol)
    : cone_(std::move(cone)),
      G_(std::move(displacement_matrix)),
      kappa_(std::move(control_cost)),
      alpha_(discount),
      tol_(tol) {
    const int p = cone_.ambient_dim();
    const int d = static_cast<int>(G_.rows());
    if (G_.cols() != p || kappa_.size() != p)
        throw ConeError("control system: dimension mismatch between cone, G and kappa");
    if (d > p) throw ConeError("control system: requires state dim <= control dim");
    if (!(alpha_ > 0)) throw ConeError("control system: discount must be positive");

    // Per-axis steering selections f_i^± = R·argmin 1·λ s.t. (G R)λ = ±e_i.
    const MatrixXd GR = G_ * cone_.generators;
    const VectorXd ones = VectorXd::Ones(cone_.n_generators());
    controllable_ = true;
    for (int i = 0; i < d && controllable_; ++i) {
        for (int s : {+1, -1}) {
            VectorXd e = VectorXd::Zero(d);
            e[i] = s;
            LpOutcome out = lp::solve_lp(lp::LinearProgram::standard(ones, GR, e));
            if (out.status != LpStatus::Optimal) {
                controllable_ = false;
                break;
            }
            (s > 0 ? f_pos_ : f_neg_).push_back(cone_.generators * out.primal);
        }
    }
    if (!controllable_) {
        f_pos_.clear();
        f_neg_.clear();
    } else {
        for (int i = 0; i < d; ++i)
            growth_ = std::max(growth_, std::max(f_pos_[i].norm(), f_neg_[i].norm()));
        growth_ *= d;
    }
}

double ControlSystem::steering_growth() const {
    if (!controllable_) throw NotControllable("steering: system is not controllable");
    return growth_;
}

const VectorXd& ControlSystem::steering_pos(int axis) const {
    if (!controllable_) throw NotControllable("steering: system is not controllable");
    return f_pos_[static_cast<size_t>(axis)];
}

const VectorXd& ControlSystem::steering_neg(int axis) const {
    if (!controllable_) throw NotControllable("steering: system is not controllable");
    return f_neg_[static_cast<size_t>(axis)];
}

double displacement_cost(const ControlSystem& sys, const VectorXd& x) {
    if (x.size() != sys.state_dim()) throw ConeError("displacement_cost: dimension mismatch");
    const LpOutcome out = displacement_lp(sys, x);
    switch (out.status) {
        case LpStatus::Optimal: return out.value;
        case LpStatus::Infeasible: return lp::kInf;
        case LpStatus::Unbounded: return -lp::kInf;
    }
    return 0;
}

VectorXd displacement_argmin(const ControlSystem& sys, const VectorXd& x) {
    const LpOutcome out = displacement_lp(sys, x);
    if (out.status != LpStatus::Optimal)
        throw ConeError(std::string("displacement_argmin: cost is not finite (") +
                        lp::to_string(out.status) + ")");
    return sys.cone().generators * out.primal;
}

std::vector<VectorXd> unit_directions(int d, int n_dirs) {
    std::vector<VectorXd> dirs;
    if (d == 1) {
        VectorXd plus(1), minus(1);
        plus << 1.0;
        minus << -1.0;
        dirs = {plus, minus};
    } else if (d == 2) {
        if (n_dirs < 2) throw ConeError("unit_directions: n_dirs must be >= 2");
        dirs.reserve(static_cast<size_t>(n_dirs));
        for (int k = 0; k < n_dirs; ++k) {
            const double a = 2.0 * std::numbers::pi * k / n_dirs;
            VectorXd e(2);
            e << std::cos(a), std::sin(a);
            dirs.push_back(e);
        }
    } else if (d == 3) {
        // Fibonacci sphere; untested territory beyond the 2-d solver but
        // kept usable for condition experiments.
        if (n_dirs < 2) throw ConeError("unit_directions: n_dirs must be >= 2");
        const double golden = (1.0 + std::sqrt(5.0)) / 2.0;
        for (int k = 0; k < n_dirs; ++k) {
            const double z = 1.0 - 2.0 * (k + 0.5) / n_dirs;
            const double r = std::sqrt(std::max(0.0, 1.0 - z * z));
            const double a = 2.0 * std::numbers::pi * k / golden;
            VectorXd e(3);
            e << r * std::cos(a), r * std::sin(a), z;
            dirs.push_back(e);
        }
    } else {
        throw ConeError("unit_directions: state dimension above 3 is not supported");
    }
    return dirs;
}

double hamiltonian(const ControlSystem& sys, const VectorXd& q, int n_dirs) {
    if (q.size() != sys.state_dim()) throw ConeError("hamiltonian: dimension mismatch");
    double best = -lp::kInf;
    for (const VectorXd& e : unit_directions(sys.state_dim(), n_dirs)) {
        const double c = displacement_cost(sys, e);
        if (c == -lp::kInf) {
            throw HamiltonianInfinite("hamiltonian: displacement cost unbounded below along a direction");
        }
        if (c == lp::kInf) continue;  // direction not reachable
        best = std::max(best, -e.dot(q) - c);
    }
    return best;
}

namespace {

// Feasibility of {λ >= 0 : (G R)λ = target}.
bool cone_preimage_feasible(const MatrixXd& GR, const VectorXd& target) {
    lp::LinearProgram prog =
        lp::LinearProgram::standard(VectorXd::Zero(GR.cols()), GR, target);
    return lp::solve_lp(prog).status == LpStatus::Optimal;
}

struct SubsolutionLp {
    bool feasible = false;
    double delta = -lp::kInf;
    VectorXd q;
};

// One LP over (q, delta): maximize delta subject to
//   kappa·r_j - q·(G r_j) >= delta·|G r_j|   for every generator j with
//   |G r_j| above the zero-ray tolerance. Generators whose displacement
//   vanishes constrain the data only: kappa·r_j must be nonnegative.
SubsolutionLp subsolution_lp(const ControlSystem& sys) {
    const auto& tol = sys.tolerances();
    const MatrixXd GR = sys.displaced_generators();
    const VectorXd gen_cost = sys.cone().generators.transpose() * sys.control_cost();
    const int d = sys.state_dim();
    const int J = sys.cone().n_generators();

    SubsolutionLp res;
    for (int j = 0; j < J; ++j)
        if (GR.col(j).norm() <= tol.ray_tol && gen_cost[j] < -tol.arb_tol) return res;

    LpBuilder b;
    std::vector<int> qv(static_cast<size_t>(d));
    for (int i = 0; i < d; ++i) qv[static_cast<size_t>(i)] = b.add_variable(0.0, -lp::kInf);
    const int dv = b.add_variable(-1.0, -lp::kInf, tol.delta_cap);  // maximize delta

    for (int j = 0; j < J; ++j) {
        const double gn = GR.col(j).norm();
        if (gn <= tol.ray_tol) continue;
        std::vector<std::pair<int, double>> terms;
        for (int i = 0; i < d; ++i) terms.push_back({qv[static_cast<size_t>(i)], GR(i, j)});
        terms.push_back({dv, gn});
        b.add_le(terms, gen_cost[j]);
    }

    const LpOutcome out = b.solve();
    if (out.status != LpStatus::Optimal) return res;
    res.feasible = true;
    res.delta = out.primal[dv];
    res.q = out.primal.head(d);
    return res;
}

// Exact scan of {u in cone : G u = 0, kappa·u <= 0}: maximizes every
// signed coordinate of u = Rλ over the normalized slice. Any optimum
// above the ray tolerance is a genuine arbitrage direction.
std::optional<VectorXd> arbitrage_scan(const ControlSystem& sys) {
    const MatrixXd& R = sys.cone().generators;
    const MatrixXd GR = sys.displaced_generators();
    const VectorXd gen_cost = R.transpose() * sys.control_cost();
    const int p = sys.cone().ambient_dim();
    const int J = sys.cone().n_generators();
    const int d = sys.state_dim();
    const auto& tol = sys.tolerances();

    for (int coord = 0; coord < p; ++coord) {
        for (int sign : {+1, -1}) {
            LpBuilder b;
            std::vector<int> lv(static_cast<size_t>(J));
            for (int j = 0; j < J; ++j)
                lv[static_cast<size_t>(j)] = b.add_variable(-sign * R(coord, j));
            for (int i = 0; i < d; ++i) {
                std::vector<std::pair<int, double>> terms;
                for (int j = 0; j < J; ++j) terms.push_back({lv[static_cast<size_t>(j)], GR(i, j)});
                b.add_eq(terms, 0.0);
            }
            std::vector<std::pair<int, double>> cost_terms, sum_terms;
            for (int j = 0; j < J; ++j) {
                cost_terms.push_back({lv[static_cast<size_t>(j)], gen_cost[j]});
                sum_terms.push_back({lv[static_cast<size_t>(j)], 1.0});
            }
            b.add_le(cost_terms, 0.0);
            b.add_le(sum_terms, 1.0);

            const LpOutcome out = b.solve();
            if (out.status == LpStatus::Optimal && -out.value > tol.ray_tol) {
                VectorXd u = R * out.primal;
                return u / u.norm();
            }
        }
    }
    return std::nullopt;
}

}  // namespace

bool weak_no_arbitrage_sweep(const ControlSystem& sys) {
    const MatrixXd& R = sys.cone().generators;
    const MatrixXd GR = sys.displaced_generators();
    const VectorXd gen_cost = R.transpose() * sys.control_cost();
    const int J = sys.cone().n_generators();
    const int d = sys.state_dim();

    double eps = 1.0;
    for (int step = 0; step < 42; ++step, eps *= 0.5) {
        LpBuilder b;
        std::vector<int> lv(static_cast<size_t>(J));
        for (int j = 0; j < J; ++j) lv[static_cast<size_t>(j)] = b.add_variable(0.0);
        std::vector<std::pair<int, double>> cost_terms;
        for (int j = 0; j < J; ++j) cost_terms.push_back({lv[static_cast<size_t>(j)], gen_cost[j]});
        b.add_le(cost_terms, -1.0);
        for (int i = 0; i < d; ++i) {
            std::vector<std::pair<int, double>> terms;
            for (int j = 0; j < J; ++j) terms.push_back({lv[static_cast<size_t>(j)], GR(i, j)});
            b.add_le(terms, eps);
            b.add_ge(terms, -eps);
        }
        if (b.solve().status == LpStatus::Infeasible) return true;
    }
    return false;
}

ConditionReport check_conditions(const ControlSystem& sys) {
    const auto& tol = sys.tolerances();
    const MatrixXd GR = sys.displaced_generators();
    const VectorXd gen_cost = sys.cone().generators.transpose() * sys.control_cost();
    const int d = sys.state_dim();
    const int p = sys.cone().ambient_dim();
    const int J = sys.cone().n_generators();

    ConditionReport rep;
    rep.controllable = sys.controllable();

    // (1.5) and (1.7) share one LP; delta* >= 0 gives finiteness,
    // delta* > strict_tol a linear strict subsolution slope.
    const SubsolutionLp sub = subsolution_lp(sys);
    rep.hamiltonian_finite = sub.feasible && sub.delta >= -tol.strict_tol;
    rep.strict_subsolution_exists = sub.feasible && sub.delta > tol.strict_tol;
    if (rep.strict_subsolution_exists) {
        rep.witness_q = sub.q;
        rep.witness_delta = sub.delta;
    }

    // No arbitrage. Fast path: minimize the cost over the normalized
    // kernel slice; an exact coordinate scan settles values near zero,
    // which also covers cones with lineality (generator cancellation).
    {
        LpBuilder b;
        std::vector<int> lv(static_cast<size_t>(J));
        for (int j = 0; j < J; ++j) lv[static_cast<size_t>(j)] = b.add_variable(gen_cost[j]);
        for (int i = 0; i < d; ++i) {
            std::vector<std::pair<int, double>> terms;
            for (int j = 0; j < J; ++j) terms.push_back({lv[static_cast<size_t>(j)], GR(i, j)});
            b.add_eq(terms, 0.0);
        }
        std::vector<std::pair<int, double>> sum_terms;
        for (int j = 0; j < J; ++j) sum_terms.push_back({lv[static_cast<size_t>(j)], 1.0});
        b.add_eq(sum_terms, 1.0);

        const LpOutcome out = b.solve();
        if (out.status == LpStatus::Infeasible) {
            rep.no_arbitrage = true;
        } else if (out.status == LpStatus::Optimal && out.value > tol.arb_tol) {
            rep.no_arbitrage = true;
        } else if (out.status == LpStatus::Optimal && out.value < -tol.arb_tol) {
            rep.no_arbitrage = false;
            VectorXd u = sys.cone().generators * out.primal;
            rep.arbitrage_direction = u / u.norm();
        } else {
            const auto witness = arbitrage_scan(sys);
            rep.no_arbitrage = !witness.has_value();
            if (witness) rep.arbitrage_direction = *witness;
        }
    }

    rep.weak_no_arbitrage = rep.hamiltonian_finite;
    rep.weak_no_arbitrage_sweep = weak_no_arbitrage_sweep(sys);

    // (2.15): maximize the margin of a separating vector against all
    // generators; exact for unit generators by conic combination.
    {
        LpBuilder b;
        std::vector<int> uv(static_cast<size_t>(p));
        for (int i = 0; i < p; ++i) uv[static_cast<size_t>(i)] = b.add_variable(0.0, -lp::kInf);
        const int dv = b.add_variable(-1.0, -lp::kInf, lp::kInf);
        for (int i = 0; i < p; ++i) {
            b.add_le({{uv[static_cast<size_t>(i)], 1.0}}, 1.0);
            b.add_ge({{uv[static_cast<size_t>(i)], 1.0}}, -1.0);
        }
        for (int j = 0; j < J; ++j) {
            std::vector<std::pair<int, double>> terms;
            for (int i = 0; i < p; ++i)
                terms.push_back({uv[static_cast<size_t>(i)], sys.cone().generators(i, j)});
            terms.push_back({dv, -1.0});
            b.add_ge(terms, 0.0);
        }
        const LpOutcome out = b.solve();
        rep.u1_condition = out.status == LpStatus::Optimal && -out.value > tol.strict_tol;
    }

    return rep;
}

VectorXd control_for_displacement(const ControlSystem& sys, const VectorXd& x) {
    if (!sys.controllable()) throw NotControllable("steering: system is not controllable");
    if (x.size() != sys.state_dim()) throw ConeError("steering: dimension mismatch");
    VectorXd u = VectorXd::Zero(sys.control_dim());
    for (int i = 0; i < sys.state_dim(); ++i) {
        const double xi = x[i];
        u += std::abs(xi) * (xi > 0 ? sys.steering_pos(i) : sys.steering_neg(i));
    }
    return u;
}

ControlCone cone_from_subspace_intersection(const MatrixXd& K) {
    const int p = static_cast<int>(K.rows());
    if (p > 14) throw DimensionTooLarge("cone_from_subspace_intersection: p > 14");

    // Orthonormal basis of range(K).
    Eigen::ColPivHouseholderQR<MatrixXd> qr(K);
    qr.setThreshold(1e-10);
    const int s = static_cast<int>(qr.rank());
    if (s == 0) throw EmptyCone("cone_from_subspace_intersection: range is {0}");
    const MatrixXd Q =
        qr.householderQ() * MatrixXd::Identity(p, s);

    std::vector<VectorXd> rays;
    auto add_ray = [&](VectorXd v) {
        v /= v.norm();
        for (const VectorXd& r : rays)
            if (r.dot(v) > 1.0 - 1e-9) return;
        rays.push_back(std::move(v));
    };

    // For each coordinate zero-set T, the trace {y : (Q y)_T = 0} that is
    // one-dimensional and sign-definite in R^p yields an extreme ray.
    for (unsigned mask = 0; mask < (1u << p); ++mask) {
        std::vector<int> zeroed;
        for (int i = 0; i < p; ++i)
            if (mask & (1u << i)) zeroed.push_back(i);
        MatrixXd rows(static_cast<int>(zeroed.size()), s);
        for (size_t k = 0; k < zeroed.size(); ++k) rows.row(static_cast<int>(k)) = Q.row(zeroed[k]);
        const MatrixXd kernel = lp::nullspace_basis(rows);
        if (kernel.cols() != 1) continue;
        VectorXd v = Q * kernel.col(0);
        const double vmax = v.cwiseAbs().maxCoeff();
        if (vmax < 1e-12) continue;
        if (v.minCoeff() >= -1e-10 * vmax) {
            add_ray(v);
        } else if (v.maxCoeff() <= 1e-10 * vmax) {
            add_ray(-v);
        }
    }

    if (rays.empty())
        throw EmptyCone("cone_from_subspace_intersection: subspace meets the orthant only at 0");
    MatrixXd gens(p, static_cast<int>(rays.size()));
    for (size_t j = 0; j < rays.size(); ++j) gens.col(static_cast<int>(j)) = rays[j];
    return ControlCone::from_columns(gens);
}

}  // namespace sct::cone
