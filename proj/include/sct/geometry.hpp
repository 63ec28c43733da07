#pragma once

#include <Eigen/Dense>

#include <stdexcept>
#include <variant>
#include <vector>

namespace sct::geom {

struct GeometryError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct Interval {
    double lo = 0.0;
    double hi = 1.0;
};

/// Convex polygon, counter-clockwise vertex order, no repeated vertices.
struct Polygon {
    std::vector<Eigen::Vector2d> vertices;
};

/// Compact convex state space in dimension 1 or 2.
class Domain {
public:
    Domain() : shape_(Interval{}) {}
    explicit Domain(Interval iv);
    explicit Domain(Polygon poly);

    int dim() const { return std::holds_alternative<Interval>(shape_) ? 1 : 2; }
    const Interval& interval() const;
    const Polygon& polygon() const;

    bool contains(const Eigen::VectorXd& x, double tol = 1e-12) const;
    /// Euclidean projection onto the set.
    Eigen::VectorXd project(const Eigen::VectorXd& x) const;
    /// Distance from an interior point to the boundary (0 outside).
    double boundary_distance(const Eigen::VectorXd& x) const;
    /// Axis-aligned bounding box (lower, upper).
    std::pair<Eigen::VectorXd, Eigen::VectorXd> bounding_box() const;
    bool has_interior() const;
    double max_norm() const;  // sup |w| over the set

private:
    std::variant<Interval, Polygon> shape_;
};

/// Convex hull of a 2-d point cloud, counter-clockwise, collinear points
/// pruned. Throws on degenerate (zero-area) input.
Polygon convex_hull(std::vector<Eigen::Vector2d> points);

}  // namespace sct::geom
