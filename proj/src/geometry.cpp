#include "sct/geometry.hpp"

#include <algorithm>
#include <cmath>

namespace sct::geom {

namespace {

double cross(const Eigen::Vector2d& o, const Eigen::Vector2d& a, const Eigen::Vector2d& b) {
    return (a.x() - o.x()) * (b.y() - o.y()) - (a.y() - o.y()) * (b.x() - o.x());
}

Eigen::Vector2d project_segment(const Eigen::Vector2d& p, const Eigen::Vector2d& a,
                                const Eigen::Vector2d& b) {
    const Eigen::Vector2d d = b - a;
    const double len2 = d.squaredNorm();
    if (len2 == 0.0) return a;
    const double t = std::clamp((p - a).dot(d) / len2, 0.0, 1.0);
    return a + t * d;
}

}  // namespace

Domain::Domain(Interval iv) : shape_(iv) {
    if (!(iv.lo < iv.hi)) throw GeometryError("interval: requires lo < hi");
}

Domain::Domain(Polygon poly) : shape_(std::move(poly)) {
    const auto& v = std::get<Polygon>(shape_).vertices;
    if (v.size() < 3) throw GeometryError("polygon: needs at least 3 vertices");
    double area2 = 0.0;
    for (size_t i = 0; i < v.size(); ++i) {
        const auto& a = v[i];
        const auto& b = v[(i + 1) % v.size()];
        area2 += a.x() * b.y() - b.x() * a.y();
    }
    if (area2 <= 0.0) throw GeometryError("polygon: vertices must be counter-clockwise with positive area");
    // Convexity: every turn left (or straight).
    for (size_t i = 0; i < v.size(); ++i) {
        const auto& a = v[i];
        const auto& b = v[(i + 1) % v.size()];
        const auto& c = v[(i + 2) % v.size()];
        if (cross(a, b, c) < -1e-12 * (b - a).norm() * (c - b).norm())
            throw GeometryError("polygon: not convex");
    }
}

const Interval& Domain::interval() const {
    if (dim() != 1) throw GeometryError("domain: not an interval");
    return std::get<Interval>(shape_);
}

const Polygon& Domain::polygon() const {
    if (dim() != 2) throw GeometryError("domain: not a polygon");
    return std::get<Polygon>(shape_);
}

bool Domain::contains(const Eigen::VectorXd& x, double tol) const {
    if (dim() == 1) {
        if (x.size() != 1) throw GeometryError("domain: dimension mismatch");
        const auto& iv = std::get<Interval>(shape_);
        return x[0] >= iv.lo - tol && x[0] <= iv.hi + tol;
    }
    if (x.size() != 2) throw GeometryError("domain: dimension mismatch");
    const auto& v = std::get<Polygon>(shape_).vertices;
    const Eigen::Vector2d p(x[0], x[1]);
    for (size_t i = 0; i < v.size(); ++i) {
        const auto& a = v[i];
        const auto& b = v[(i + 1) % v.size()];
        const double len = (b - a).norm();
        if (cross(a, b, p) < -tol * (len > 0 ? len : 1.0)) return false;
    }
    return true;
}

Eigen::VectorXd Domain::project(const Eigen::VectorXd& x) const {
    if (dim() == 1) {
        const auto& iv = std::get<Interval>(shape_);
        Eigen::VectorXd r(1);
        r[0] = std::clamp(x[0], iv.lo, iv.hi);
        return r;
    }
    if (contains(x, 0.0)) return x;
    const auto& v = std::get<Polygon>(shape_).vertices;
    const Eigen::Vector2d p(x[0], x[1]);
    Eigen::Vector2d best = v[0];
    double best_d = (p - best).squaredNorm();
    for (size_t i = 0; i < v.size(); ++i) {
        const Eigen::Vector2d q = project_segment(p, v[i], v[(i + 1) % v.size()]);
        const double d = (p - q).squaredNorm();
        if (d < best_d) {
            best_d = d;
            best = q;
        }
    }
    Eigen::VectorXd r(2);
    r << best.x(), best.y();
    return r;
}

double Domain::boundary_distance(const Eigen::VectorXd& x) const {
    if (!contains(x, 0.0)) return 0.0;
    if (dim() == 1) {
        const auto& iv = std::get<Interval>(shape_);
        return std::min(x[0] - iv.lo, iv.hi - x[0]);
    }
    const auto& v = std::get<Polygon>(shape_).vertices;
    const Eigen::Vector2d p(x[0], x[1]);
    double d = std::numeric_limits<double>::infinity();
    for (size_t i = 0; i < v.size(); ++i) {
        const auto& a = v[i];
        const auto& b = v[(i + 1) % v.size()];
        const double len = (b - a).norm();
        if (len > 0) d = std::min(d, cross(a, b, p) / len);
    }
    return std::max(0.0, d);
}

std::pair<Eigen::VectorXd, Eigen::VectorXd> Domain::bounding_box() const {
    if (dim() == 1) {
        const auto& iv = std::get<Interval>(shape_);
        Eigen::VectorXd lo(1), hi(1);
        lo[0] = iv.lo;
        hi[0] = iv.hi;
        return {lo, hi};
    }
    const auto& v = std::get<Polygon>(shape_).vertices;
    Eigen::VectorXd lo(2), hi(2);
    lo << v[0].x(), v[0].y();
    hi = lo;
    for (const auto& p : v) {
        lo[0] = std::min(lo[0], p.x());
        lo[1] = std::min(lo[1], p.y());
        hi[0] = std::max(hi[0], p.x());
        hi[1] = std::max(hi[1], p.y());
    }
    return {lo, hi};
}

bool Domain::has_interior() const {
    if (dim() == 1) {
        const auto& iv = std::get<Interval>(shape_);
        return iv.hi - iv.lo > 0.0;
    }
    return true;  // polygon constructor enforces positive area
}

double Domain::max_norm() const {
    if (dim() == 1) {
        const auto& iv = std::get<Interval>(shape_);
        return std::max(std::abs(iv.lo), std::abs(iv.hi));
    }
    double m = 0.0;
    for (const auto& p : std::get<Polygon>(shape_).vertices) m = std::max(m, p.norm());
    return m;
}

Polygon convex_hull(std::vector<Eigen::Vector2d> pts) {
    std::sort(pts.begin(), pts.end(), [](const auto& a, const auto& b) {
        return a.x() < b.x() || (a.x() == b.x() && a.y() < b.y());
    });
    pts.erase(std::unique(pts.begin(), pts.end(),
                          [](const auto& a, const auto& b) { return (a - b).norm() < 1e-12; }),
              pts.end());
    const size_t n = pts.size();
    if (n < 3) throw GeometryError("convex_hull: degenerate point set");

    // Andrew's monotone chain; strict turns only, so collinear points drop.
    std::vector<Eigen::Vector2d> hull(2 * n);
    size_t k = 0;
    for (size_t i = 0; i < n; ++i) {
        while (k >= 2 && cross(hull[k - 2], hull[k - 1], pts[i]) <= 1e-14) --k;
        hull[k++] = pts[i];
    }
    const size_t lower = k + 1;
    for (size_t i = n - 1; i-- > 0;) {
        while (k >= lower && cross(hull[k - 2], hull[k - 1], pts[i]) <= 1e-14) --k;
        hull[k++] = pts[i];
    }
    hull.resize(k - 1);
    if (hull.size() < 3) throw GeometryError("convex_hull: degenerate (collinear) point set");
    return Polygon{hull};
}

}  // namespace sct::geom
