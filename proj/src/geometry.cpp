#include "nfsage/geometry.hpp"

#include <algorithm>

namespace nfsage {

double path_distance(const std::vector<Point3>& hops) {
    if (hops.size() < 2) throw invalid_geometry_error("path needs at least two points");
    double d = 0.0;
    for (std::size_t i = 0; i + 1 < hops.size(); ++i) {
        if (!hops[i].finite() || !hops[i + 1].finite())
            throw invalid_geometry_error("non-finite point in path");
        d += distance(hops[i], hops[i + 1]);
    }
    return d;
}

namespace {

// Shared scan for both ellipsoid variants: keeps grid points whose
// distance sum to the two foci matches `target` within the grid tolerance.
// Loop order (x, then y, then z) yields lexicographic output.
std::vector<Point3> scan_ellipsoid(const SearchGrid& grid, const Point3& fa, const Point3& fb,
                                   double target) {
    grid.validate();
    const double tol = grid.effective_tolerance();
    std::vector<Point3> out;
    const std::size_t nx = grid.nx(), ny = grid.ny(), nz = grid.nz();
    for (std::size_t ix = 0; ix < nx; ++ix)
        for (std::size_t iy = 0; iy < ny; ++iy)
            for (std::size_t iz = 0; iz < nz; ++iz) {
                const Point3 p = grid.point_at(ix, iy, iz);
                const double s = distance(p, fa) + distance(p, fb);
                if (std::abs(s - target) <= tol) out.push_back(p);
            }
    return out;
}

} // namespace

std::vector<Point3> ellipsoid_candidates(const SearchGrid& grid, const Point3& focus_a,
                                         const Point3& focus_b, double total_distance) {
    if (!focus_a.finite() || !focus_b.finite() || !std::isfinite(total_distance))
        throw invalid_geometry_error("non-finite ellipsoid input");
    const double focal = distance(focus_a, focus_b);
    if (!(total_distance > focal))
        throw degenerate_ellipsoid_error("total distance does not exceed focal separation");
    return scan_ellipsoid(grid, focus_a, focus_b, total_distance);
}

std::vector<Point3> second_hop_candidates(const SearchGrid& grid, const Point3& first_hop,
                                          const Point3& rx_ref, const Point3& tx_ref,
                                          double total_distance) {
    const double budget = total_distance - distance(tx_ref, first_hop);
    if (!(budget > distance(first_hop, rx_ref)))
        throw degenerate_ellipsoid_error("remaining two-bounce budget is not positive");
    return scan_ellipsoid(grid, first_hop, rx_ref, budget);
}

UnitVec3 reflection_normal(const Point3& point, const Point3& prev, const Point3& next) {
    const double dp = distance(point, prev);
    const double dn = distance(point, next);
    if (!(dp > 0.0) || !(dn > 0.0))
        throw invalid_geometry_error("reflection point coincides with a neighbor");
    const Point3 sum = (point - prev) * (1.0 / dp) + (point - next) * (1.0 / dn);
    if (sum.norm() < 1e-12)
        throw grazing_incidence_error("incidence and departure directions cancel");
    return UnitVec3(sum);
}

Point3 mirror_point(const Point3& source, const Plane& plane) {
    const double d = plane.signed_distance(source);
    return source - plane.normal.as_point() * (2.0 * d);
}

LinePlaneHit line_plane_intersection(const Point3& a, const Point3& b, const Plane& plane) {
    const Point3 dir = b - a;
    const double denom = plane.normal.dot(dir);
    const double len = dir.norm();
    if (std::abs(denom) <= 1e-12 * len)
        throw no_intersection_error("line is parallel to the plane");
    const double t = -plane.signed_distance(a) / denom;
    LinePlaneHit hit;
    hit.point = a + dir * t;
    hit.t = t;
    hit.within_segment = (t >= 0.0 && t <= 1.0);
    return hit;
}

std::vector<ReflectionPoint> per_element_reflection_points(const Point3& ref_point,
                                                           const UnitVec3& normal,
                                                           const std::vector<Point3>& tx_elements,
                                                           const std::vector<Point3>& rx_elements,
                                                           const SearchGrid& bounds) {
    const Plane plane{ref_point, normal};
    std::vector<ReflectionPoint> out(tx_elements.size() * rx_elements.size());
    for (std::size_t m = 0; m < tx_elements.size(); ++m) {
        const double d_tx = plane.signed_distance(tx_elements[m]);
        const Point3 image = mirror_point(tx_elements[m], plane);
        for (std::size_t n = 0; n < rx_elements.size(); ++n) {
            ReflectionPoint& cell = out[m * rx_elements.size() + n];
            const double d_rx = plane.signed_distance(rx_elements[n]);
            // An element on the plane (or Tx/Rx on opposite sides) has no
            // specular point; mark the cell invisible.
            if (std::abs(d_tx) < 1e-12 || std::abs(d_rx) < 1e-12 || d_tx * d_rx < 0.0) {
                cell.visible = false;
                cell.point = ref_point;
                continue;
            }
            const LinePlaneHit hit = line_plane_intersection(image, rx_elements[n], plane);
            cell.point = hit.point;
            cell.visible = hit.within_segment && bounds.contains(hit.point, bounds.spacing);
        }
    }
    return out;
}

Plane ConvexFacet::plane() const {
    if (vertices.size() < 3) throw invalid_geometry_error("facet needs at least 3 vertices");
    const Point3 n = (vertices[1] - vertices[0]).cross(vertices[2] - vertices[0]);
    return Plane{vertices[0], UnitVec3(n)};
}

void ConvexFacet::validate(double coplanar_tol) const {
    if (vertices.size() < 3 || vertices.size() > 4)
        throw invalid_geometry_error("facet must have 3 or 4 vertices");
    const Plane pl = plane();
    for (const Point3& v : vertices) {
        if (!v.finite()) throw invalid_geometry_error("non-finite facet vertex");
        if (std::abs(pl.signed_distance(v)) > coplanar_tol)
            throw invalid_geometry_error("facet vertices are not coplanar");
    }
    // Convexity: consecutive edge cross products must all align with the normal.
    const std::size_t k = vertices.size();
    for (std::size_t i = 0; i < k; ++i) {
        const Point3 e0 = vertices[(i + 1) % k] - vertices[i];
        const Point3 e1 = vertices[(i + 2) % k] - vertices[(i + 1) % k];
        if (e0.cross(e1).dot(pl.normal.as_point()) < 0.0)
            throw invalid_geometry_error("facet is not convex");
    }
}

bool ConvexFacet::contains(const Point3& p, double tol) const {
    const Plane pl = plane();
    if (std::abs(pl.signed_distance(p)) > std::max(tol, 1e-9)) return false;
    const std::size_t k = vertices.size();
    for (std::size_t i = 0; i < k; ++i) {
        const Point3 edge = vertices[(i + 1) % k] - vertices[i];
        const Point3 inward = pl.normal.as_point().cross(edge);
        if (inward.dot(p - vertices[i]) < -tol) return false;
    }
    return true;
}

bool segment_blocked(const Point3& a, const Point3& b, const std::vector<ConvexFacet>& blockers) {
    const double len = distance(a, b);
    if (!(len > 0.0)) return false;
    for (const ConvexFacet& f : blockers) {
        const Plane pl = f.plane();
        const Point3 dir = b - a;
        const double denom = pl.normal.dot(dir);
        if (std::abs(denom) <= 1e-12 * len) continue; // parallel: grazing does not block
        const double t = -pl.signed_distance(a) / denom;
        // Open-segment convention: endpoints touching the facet do not count.
        if (t <= 1e-12 || t >= 1.0 - 1e-12) continue;
        const Point3 hit = a + dir * t;
        // Interior only: points on the facet boundary do not block.
        const std::size_t k = f.vertices.size();
        bool interior = true;
        for (std::size_t i = 0; i < k && interior; ++i) {
            const Point3 edge = f.vertices[(i + 1) % k] - f.vertices[i];
            const Point3 inward = pl.normal.as_point().cross(edge);
            const double margin = inward.norm() * 1e-12;
            if (inward.dot(hit - f.vertices[i]) <= margin) interior = false;
        }
        if (interior) return true;
    }
    return false;
}

} // namespace nfsage
