#pragma once

#include <cmath>
#include <cstddef>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace nfsage {

// Error kinds used across the library. Geometry raises the first three;
// parsers and file readers use parse_error / data_error.
class invalid_geometry_error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};
class degenerate_ellipsoid_error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};
class grazing_incidence_error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};
class no_intersection_error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};
class parse_error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};
class data_error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Cartesian point/vector in meters. 2-D scenarios keep z = 0.
struct Point3 {
    double x = 0.0;
    double y = 0.0;
    double z = 0.0;

    constexpr Point3() = default;
    constexpr Point3(double px, double py, double pz) : x(px), y(py), z(pz) {}

    constexpr Point3 operator+(const Point3& r) const { return {x + r.x, y + r.y, z + r.z}; }
    constexpr Point3 operator-(const Point3& r) const { return {x - r.x, y - r.y, z - r.z}; }
    constexpr Point3 operator*(double s) const { return {x * s, y * s, z * s}; }
    friend constexpr Point3 operator*(double s, const Point3& v) { return v * s; }
    Point3& operator+=(const Point3& r) {
        x += r.x;
        y += r.y;
        z += r.z;
        return *this;
    }

    constexpr double dot(const Point3& r) const { return x * r.x + y * r.y + z * r.z; }
    constexpr Point3 cross(const Point3& r) const {
        return {y * r.z - z * r.y, z * r.x - x * r.z, x * r.y - y * r.x};
    }
    double norm() const { return std::sqrt(dot(*this)); }
    bool finite() const { return std::isfinite(x) && std::isfinite(y) && std::isfinite(z); }

    constexpr bool operator==(const Point3& r) const { return x == r.x && y == r.y && z == r.z; }

    /// Strict lexicographic order (x, then y, then z); used for candidate
    /// ordering and argmin tie-breaks.
    constexpr bool lex_less(const Point3& r) const {
        if (x != r.x) return x < r.x;
        if (y != r.y) return y < r.y;
        return z < r.z;
    }
};

inline double distance(const Point3& a, const Point3& b) { return (a - b).norm(); }

/// Direction with unit Euclidean norm (kept within 1e-12 by construction).
struct UnitVec3 {
    double x = 1.0;
    double y = 0.0;
    double z = 0.0;

    UnitVec3() = default;
    /// Normalizes the given components; throws invalid_geometry_error on a
    /// near-zero vector.
    UnitVec3(double vx, double vy, double vz) {
        const double n = std::sqrt(vx * vx + vy * vy + vz * vz);
        if (!(n > 1e-300) || !std::isfinite(n))
            throw invalid_geometry_error("cannot normalize near-zero or non-finite vector");
        x = vx / n;
        y = vy / n;
        z = vz / n;
    }
    explicit UnitVec3(const Point3& v) : UnitVec3(v.x, v.y, v.z) {}

    Point3 as_point() const { return {x, y, z}; }
    double dot(const Point3& r) const { return x * r.x + y * r.y + z * r.z; }
    double dot(const UnitVec3& r) const { return x * r.x + y * r.y + z * r.z; }
};

/// Infinite plane through `anchor` with unit `normal`.
struct Plane {
    Point3 anchor;
    UnitVec3 normal;

    /// Signed distance of p from the plane (positive on the normal side).
    double signed_distance(const Point3& p) const { return normal.dot(p - anchor); }
};

/// Axis-aligned box of candidate points with uniform spacing.
/// A degenerate axis (min == max) contributes a single layer, which is how
/// 2-D scenarios are represented (z fixed at 0).
struct SearchGrid {
    Point3 min;
    Point3 max;
    double spacing = 0.1;
    /// Membership tolerance for the ellipsoid constraint. Defaults to half
    /// the grid-cell diagonal so that no continuous ellipsoid point is
    /// farther than the tolerance from its nearest grid representative.
    double tolerance = 0.0;

    double effective_tolerance() const {
        return tolerance > 0.0 ? tolerance : 0.5 * std::sqrt(3.0) * spacing;
    }

    std::size_t count_along(double lo, double hi) const {
        if (hi < lo) return 0;
        return static_cast<std::size_t>(std::floor((hi - lo) / spacing + 1e-9)) + 1;
    }
    std::size_t nx() const { return count_along(min.x, max.x); }
    std::size_t ny() const { return count_along(min.y, max.y); }
    std::size_t nz() const { return count_along(min.z, max.z); }
    std::size_t size() const { return nx() * ny() * nz(); }

    Point3 point_at(std::size_t ix, std::size_t iy, std::size_t iz) const {
        return {min.x + static_cast<double>(ix) * spacing,
                min.y + static_cast<double>(iy) * spacing,
                min.z + static_cast<double>(iz) * spacing};
    }

    bool contains(const Point3& p, double slack = 0.0) const {
        return p.x >= min.x - slack && p.x <= max.x + slack && p.y >= min.y - slack &&
               p.y <= max.y + slack && p.z >= min.z - slack && p.z <= max.z + slack;
    }

    void validate() const {
        if (!(spacing > 0.0)) throw invalid_geometry_error("grid spacing must be positive");
        if (!(effective_tolerance() > 0.0))
            throw invalid_geometry_error("grid tolerance must be positive");
        if (max.x < min.x || max.y < min.y || max.z < min.z)
            throw invalid_geometry_error("grid bounds are inverted");
        if (size() == 0) throw invalid_geometry_error("grid contains no points");
    }
};

/// Total length of the polyline Tx element -> interaction points -> Rx
/// element. Two entries give the direct distance.
double path_distance(const std::vector<Point3>& hops);

/// Grid points r with | (|r-a| + |r-b|) - total_distance | <= tolerance,
/// in lexicographic order. Throws degenerate_ellipsoid_error when the
/// distance does not exceed the focal separation.
std::vector<Point3> ellipsoid_candidates(const SearchGrid& grid, const Point3& focus_a,
                                         const Point3& focus_b, double total_distance);

/// Second-hop candidate set for a two-bounce track Tx -> first_hop -> r -> Rx:
/// grid points r with |r - first_hop| + |r - rx_ref| equal (within tolerance)
/// to the remaining budget total_distance - |tx_ref - first_hop|.
std::vector<Point3> second_hop_candidates(const SearchGrid& grid, const Point3& first_hop,
                                          const Point3& rx_ref, const Point3& tx_ref,
                                          double total_distance);

/// Surface normal of a specular bounce at `point` between `prev` and `next`:
/// the normalized sum of the unit vectors from prev to point and next to
/// point. Throws grazing_incidence_error when the sum vanishes.
UnitVec3 reflection_normal(const Point3& point, const Point3& prev, const Point3& next);

/// Mirror image of `source` across `plane`.
Point3 mirror_point(const Point3& source, const Plane& plane);

struct LinePlaneHit {
    Point3 point;
    double t = 0.0; // parameter along a->b; within [0,1] means inside the segment
    bool within_segment = false;
};

/// Intersection of the line through a and b with the plane. Throws
/// no_intersection_error when the line is parallel to the plane.
LinePlaneHit line_plane_intersection(const Point3& a, const Point3& b, const Plane& plane);

struct ReflectionPoint {
    Point3 point;
    bool visible = false;
};

/// Per-element specular reflection points for the plane through ref_point
/// with the given normal, via the image method: intersection of
/// mirror(tx_m) -> rx_n with the plane, for every element pair. A cell is
/// visible when the intersection parameter lies within the segment and the
/// point falls inside `bounds`. Cells whose Tx or Rx element lies on the
/// plane are flagged invisible rather than raising.
std::vector<ReflectionPoint> per_element_reflection_points(const Point3& ref_point,
                                                           const UnitVec3& normal,
                                                           const std::vector<Point3>& tx_elements,
                                                           const std::vector<Point3>& rx_elements,
                                                           const SearchGrid& bounds);

/// Finite convex planar polygon (3 or 4 vertices) used for blockage tests
/// and facet containment.
struct ConvexFacet {
    std::vector<Point3> vertices;

    Plane plane() const;
    /// True when p (assumed on the plane) lies inside the polygon.
    bool contains(const Point3& p, double tol = 1e-9) const;
    void validate(double coplanar_tol = 1e-9) const;
};

/// True iff the open segment a->b crosses the interior of any facet.
bool segment_blocked(const Point3& a, const Point3& b, const std::vector<ConvexFacet>& blockers);

constexpr double kSpeedOfLight = 299792458.0; // m/s

} // namespace nfsage
