#include "nfsage/scenario.hpp"

#include "ini_detail.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <sstream>

namespace nfsage {

std::vector<ConvexFacet> Environment::blocker_shapes() const {
    std::vector<ConvexFacet> out;
    for (const Facet& f : facets)
        if (f.mechanism == FacetMechanism::blocker) out.push_back(f.shape);
    return out;
}

namespace {

bool on_segment(const Point3& p, const Point3& a, const Point3& b, double tol) {
    const double d = distance(a, p) + distance(p, b) - distance(a, b);
    return std::abs(d) <= tol;
}

} // namespace

void Environment::validate() const {
    room.validate();
    for (const Facet& f : facets) {
        f.shape.validate();
        if (f.reflectivity < 0.0 || f.reflectivity > 1.0)
            throw invalid_geometry_error("facet reflectivity must be in [0, 1]");
    }
    for (const PointScatterer& s : point_scatterers)
        if (!s.position.finite()) throw invalid_geometry_error("non-finite scatterer position");
    // Each diffraction edge must coincide with an edge of some blocker facet.
    for (const DiffractionEdge& e : diffraction_edges) {
        bool matched = false;
        for (const Facet& f : facets) {
            if (f.mechanism != FacetMechanism::blocker) continue;
            const std::size_t k = f.shape.vertices.size();
            for (std::size_t i = 0; i < k && !matched; ++i) {
                const Point3& va = f.shape.vertices[i];
                const Point3& vb = f.shape.vertices[(i + 1) % k];
                if (on_segment(e.a, va, vb, 1e-9) && on_segment(e.b, va, vb, 1e-9)) matched = true;
            }
            if (matched) break;
        }
        if (!matched)
            throw invalid_geometry_error("diffraction edge does not lie on a blocker facet edge");
    }
}

void ArrayLayout::validate() const {
    if (tx_elements.empty() || rx_elements.empty())
        throw invalid_geometry_error("arrays must have at least one element each");
    if (ref_tx >= tx_elements.size() || ref_rx >= rx_elements.size())
        throw invalid_geometry_error("reference element index out of range");
    for (const Point3& p : tx_elements)
        if (!p.finite()) throw invalid_geometry_error("non-finite Tx element");
    for (const Point3& p : rx_elements)
        if (!p.finite()) throw invalid_geometry_error("non-finite Rx element");
}

std::vector<Point3> PathTruth::track_points(std::size_t m, std::size_t n, std::size_t n_rx) const {
    if (bounce == 0) return {};
    if (per_element_points.empty()) return points;
    std::vector<Point3> out(static_cast<std::size_t>(bounce));
    const std::size_t base = (m * n_rx + n) * static_cast<std::size_t>(bounce);
    for (int k = 0; k < bounce; ++k) out[static_cast<std::size_t>(k)] = per_element_points[base + k];
    return out;
}

double PathTruth::element_distance(const ArrayLayout& arrays, std::size_t m, std::size_t n) const {
    std::vector<Point3> hops;
    hops.reserve(static_cast<std::size_t>(bounce) + 2);
    hops.push_back(arrays.tx_elements[m]);
    for (const Point3& p : track_points(m, n, arrays.n())) hops.push_back(p);
    hops.push_back(arrays.rx_elements[n]);
    return path_distance(hops);
}

double PathTruth::reference_distance(const ArrayLayout& arrays) const {
    return element_distance(arrays, arrays.ref_tx, arrays.ref_rx);
}

namespace {

// A two-bounce participant: either a specular facet or a point scatterer.
struct Interactor {
    bool is_facet = false;
    int facet_index = -1;
    Point3 point;     // scatterer position
    double factor = 1.0;
    std::string name;
};

struct SpecularHit {
    Point3 point;
    bool valid = false;
};

// Image-method specular point on `plane` for the leg prev -> facet -> next.
// Valid when both endpoints sit strictly on the same side and the
// intersection parameter falls inside the image segment.
SpecularHit specular_point(const Plane& plane, const Point3& prev, const Point3& next) {
    SpecularHit hit;
    const double dp = plane.signed_distance(prev);
    const double dn = plane.signed_distance(next);
    if (std::abs(dp) < 1e-12 || std::abs(dn) < 1e-12 || dp * dn < 0.0) return hit;
    const Point3 image = mirror_point(prev, plane);
    LinePlaneHit lp;
    try {
        lp = line_plane_intersection(image, next, plane);
    } catch (const no_intersection_error&) {
        return hit;
    }
    hit.point = lp.point;
    hit.valid = lp.within_segment;
    return hit;
}

} // namespace

std::vector<std::uint8_t> visibility_mask(const PathTruth& path, const Environment& env,
                                          const ArrayLayout& arrays) {
    const std::size_t M = arrays.m(), N = arrays.n();
    const std::vector<ConvexFacet> blockers = env.blocker_shapes();
    std::vector<std::uint8_t> mask(M * N, 1);
    for (std::size_t m = 0; m < M; ++m)
        for (std::size_t n = 0; n < N; ++n) {
            bool ok = true;
            const std::vector<Point3> track = path.track_points(m, n, N);
            // Specular per-element points must stay inside their facet.
            for (std::size_t k = 0; k < track.size() && ok; ++k) {
                if (path.mechanisms[k] != HopMechanism::specular) continue;
                if (k < path.hop_facets.size() && path.hop_facets[k] >= 0) {
                    const Facet& f = env.facets[static_cast<std::size_t>(path.hop_facets[k])];
                    if (!f.shape.contains(track[k], 1e-6)) ok = false;
                    const Point3& prev = (k == 0) ? arrays.tx_elements[m] : track[k - 1];
                    const Point3& next = (k + 1 == track.size()) ? arrays.rx_elements[n] : track[k + 1];
                    const Plane pl = f.shape.plane();
                    if (pl.signed_distance(prev) * pl.signed_distance(next) <= 0.0) ok = false;
                }
            }
            if (ok && !blockers.empty()) {
                std::vector<Point3> hops;
                hops.push_back(arrays.tx_elements[m]);
                for (const Point3& p : track) hops.push_back(p);
                hops.push_back(arrays.rx_elements[n]);
                for (std::size_t i = 0; i + 1 < hops.size() && ok; ++i)
                    if (segment_blocked(hops[i], hops[i + 1], blockers)) ok = false;
            }
            mask[m * N + n] = ok ? 1 : 0;
        }
    return mask;
}

std::vector<PathTruth> enumerate_paths(const Environment& env, const ArrayLayout& arrays,
                                       int max_bounce) {
    if (max_bounce < 1 || max_bounce > 2)
        throw invalid_geometry_error("max_bounce must be 1 or 2");
    env.validate();
    arrays.validate();

    const std::size_t M = arrays.m(), N = arrays.n();
    const Point3 tx0 = arrays.tx_ref();
    const Point3 rx0 = arrays.rx_ref();
    std::vector<PathTruth> out;

    auto finish = [&](PathTruth& p) {
        const double d_ref = p.reference_distance(arrays);
        p.gain *= 1.0 / d_ref;
        p.visibility = visibility_mask(p, env, arrays);
        out.push_back(std::move(p));
    };

    // LoS
    {
        PathTruth los;
        los.label = "los";
        los.bounce = 0;
        los.gain = 1.0;
        finish(los);
    }

    // One-bounce: specular facets via the image method, rough facets as an
    // equivalent coherent point source at the reference specular point,
    // plus the explicit point scatterers.
    for (std::size_t fi = 0; fi < env.facets.size(); ++fi) {
        const Facet& f = env.facets[fi];
        if (f.mechanism == FacetMechanism::blocker) continue;
        const Plane plane = f.shape.plane();
        const SpecularHit hit = specular_point(plane, tx0, rx0);
        if (!hit.valid || !f.shape.contains(hit.point, 1e-6)) continue;

        PathTruth p;
        p.label = f.name.empty() ? ("facet" + std::to_string(fi)) : f.name;
        p.bounce = 1;
        p.points = {hit.point};
        p.hop_facets = {static_cast<int>(fi)};
        p.gain = f.reflectivity;
        if (f.mechanism == FacetMechanism::specular) {
            p.mechanisms = {HopMechanism::specular};
            p.hop_planes = {plane};
            p.per_element_points.resize(M * N);
            for (std::size_t m = 0; m < M; ++m)
                for (std::size_t n = 0; n < N; ++n) {
                    const SpecularHit h =
                        specular_point(plane, arrays.tx_elements[m], arrays.rx_elements[n]);
                    // Invalid cells keep the reference point; the visibility
                    // mask switches them off.
                    p.per_element_points[m * N + n] = h.valid ? h.point : hit.point;
                }
        } else {
            p.mechanisms = {HopMechanism::scatter};
        }
        finish(p);
    }
    for (std::size_t si = 0; si < env.point_scatterers.size(); ++si) {
        const PointScatterer& s = env.point_scatterers[si];
        PathTruth p;
        p.label = "scatterer" + std::to_string(si);
        p.bounce = 1;
        p.points = {s.position};
        p.mechanisms = {HopMechanism::scatter};
        p.hop_facets = {-1};
        p.gain = s.amplitude;
        finish(p);
    }

    if (max_bounce < 2) return out;

    // Two-bounce: ordered pairs over specular facets and point scatterers.
    std::vector<Interactor> inter;
    for (std::size_t fi = 0; fi < env.facets.size(); ++fi) {
        const Facet& f = env.facets[fi];
        if (f.mechanism != FacetMechanism::specular) continue;
        Interactor it;
        it.is_facet = true;
        it.facet_index = static_cast<int>(fi);
        it.factor = f.reflectivity;
        it.name = f.name.empty() ? ("facet" + std::to_string(fi)) : f.name;
        inter.push_back(it);
    }
    for (std::size_t si = 0; si < env.point_scatterers.size(); ++si) {
        Interactor it;
        it.point = env.point_scatterers[si].position;
        it.factor = env.point_scatterers[si].amplitude;
        it.name = "scatterer" + std::to_string(si);
        inter.push_back(it);
    }

    for (std::size_t ia = 0; ia < inter.size(); ++ia)
        for (std::size_t ib = 0; ib < inter.size(); ++ib) {
            if (ia == ib) continue;
            const Interactor& A = inter[ia];
            const Interactor& B = inter[ib];

            // Reference-channel track construction for each hop-type pair.
            auto pair_points = [&](const Point3& tx, const Point3& rx,
                                   Point3& p1, Point3& p2) -> bool {
                if (A.is_facet && B.is_facet) {
                    const Plane pa = env.facets[static_cast<std::size_t>(A.facet_index)].shape.plane();
                    const Plane pb = env.facets[static_cast<std::size_t>(B.facet_index)].shape.plane();
                    const Point3 img1 = mirror_point(tx, pa);
                    const SpecularHit h2 = specular_point(pb, img1, rx);
                    if (!h2.valid) return false;
                    const SpecularHit h1 = specular_point(pa, tx, h2.point);
                    if (!h1.valid) return false;
                    p1 = h1.point;
                    p2 = h2.point;
                    return true;
                }
                if (A.is_facet) { // facet then scatterer
                    const Plane pa = env.facets[static_cast<std::size_t>(A.facet_index)].shape.plane();
                    const SpecularHit h1 = specular_point(pa, tx, B.point);
                    if (!h1.valid) return false;
                    p1 = h1.point;
                    p2 = B.point;
                    return true;
                }
                if (B.is_facet) { // scatterer then facet
                    const Plane pb = env.facets[static_cast<std::size_t>(B.facet_index)].shape.plane();
                    const SpecularHit h2 = specular_point(pb, A.point, rx);
                    if (!h2.valid) return false;
                    p1 = A.point;
                    p2 = h2.point;
                    return true;
                }
                p1 = A.point;
                p2 = B.point;
                return true;
            };

            Point3 r1, r2;
            if (!pair_points(tx0, rx0, r1, r2)) continue;
            const bool in1 = !A.is_facet ||
                             env.facets[static_cast<std::size_t>(A.facet_index)].shape.contains(r1, 1e-6);
            const bool in2 = !B.is_facet ||
                             env.facets[static_cast<std::size_t>(B.facet_index)].shape.contains(r2, 1e-6);
            if (!in1 || !in2) continue;

            PathTruth p;
            p.label = A.name + "+" + B.name;
            p.bounce = 2;
            p.points = {r1, r2};
            p.mechanisms = {A.is_facet ? HopMechanism::specular : HopMechanism::scatter,
                            B.is_facet ? HopMechanism::specular : HopMechanism::scatter};
            p.hop_facets = {A.facet_index, B.facet_index};
            if (A.is_facet)
                p.hop_planes.push_back(env.facets[static_cast<std::size_t>(A.facet_index)].shape.plane());
            else
                p.hop_planes.emplace_back();
            if (B.is_facet)
                p.hop_planes.push_back(env.facets[static_cast<std::size_t>(B.facet_index)].shape.plane());
            else
                p.hop_planes.emplace_back();
            p.gain = A.factor * B.factor;
            if (A.is_facet || B.is_facet) {
                p.per_element_points.resize(M * N * 2);
                for (std::size_t m = 0; m < M; ++m)
                    for (std::size_t n = 0; n < N; ++n) {
                        Point3 q1 = r1, q2 = r2;
                        if (!pair_points(arrays.tx_elements[m], arrays.rx_elements[n], q1, q2)) {
                            q1 = r1; // invalid cell; masked off by visibility
                            q2 = r2;
                        }
                        p.per_element_points[(m * N + n) * 2] = q1;
                        p.per_element_points[(m * N + n) * 2 + 1] = q2;
                    }
            }
            finish(p);
        }

    return out;
}

std::vector<PathTruth> diffraction_sources(const Environment& env, const ArrayLayout& arrays,
                                           double taper_db_per_m) {
    if (taper_db_per_m < 0.0) throw invalid_geometry_error("diffraction taper must be >= 0");
    env.validate();
    arrays.validate();
    const std::size_t M = arrays.m(), N = arrays.n();
    std::vector<PathTruth> out;

    for (std::size_t ei = 0; ei < env.diffraction_edges.size(); ++ei) {
        const DiffractionEdge& e = env.diffraction_edges[ei];
        // Owning blocker facet (validated to exist).
        const Facet* owner = nullptr;
        for (const Facet& f : env.facets) {
            if (f.mechanism != FacetMechanism::blocker) continue;
            const std::size_t k = f.shape.vertices.size();
            for (std::size_t i = 0; i < k; ++i) {
                const Point3& va = f.shape.vertices[i];
                const Point3& vb = f.shape.vertices[(i + 1) % k];
                if (on_segment(e.a, va, vb, 1e-9) && on_segment(e.b, va, vb, 1e-9)) {
                    owner = &f;
                    break;
                }
            }
            if (owner) break;
        }

        PathTruth p;
        p.label = "edge" + std::to_string(ei);
        p.bounce = 1;
        p.points = {(e.a + e.b) * 0.5};
        p.mechanisms = {HopMechanism::diffraction_edge};
        p.hop_facets = {-1};
        p.gain = e.amplitude / p.reference_distance(arrays);
        p.visibility.assign(M * N, 1); // shadowing is carried by the amplitude taper
        p.amp_profile.resize(M * N, 1.0);
        for (std::size_t m = 0; m < M; ++m)
            for (std::size_t n = 0; n < N; ++n) {
                double depth = 0.0;
                if (owner &&
                    segment_blocked(arrays.tx_elements[m], arrays.rx_elements[n], {owner->shape})) {
                    const Plane pl = owner->shape.plane();
                    const LinePlaneHit hit =
                        line_plane_intersection(arrays.tx_elements[m], arrays.rx_elements[n], pl);
                    // Distance from the shadow-boundary edge to the blocked
                    // crossing point.
                    const Point3 ab = e.b - e.a;
                    const double len2 = ab.dot(ab);
                    double t = len2 > 0.0 ? (hit.point - e.a).dot(ab) / len2 : 0.0;
                    t = std::clamp(t, 0.0, 1.0);
                    depth = distance(hit.point, e.a + ab * t);
                }
                p.amp_profile[m * N + n] = std::pow(10.0, -taper_db_per_m * depth / 20.0);
            }
        out.push_back(std::move(p));
    }
    return out;
}

// ---------------------------------------------------------------------------
// Scenario file parsing

namespace detail {

ArraySpec parse_array_section(const std::string& origin, const Section& sec) {
    ArraySpec a;
    a.line = sec.line;
    for (const KeyValue& kv : sec.entries) {
        if (kv.key == "layout")
            a.layout = kv.value;
        else if (kv.key == "count")
            a.count = parse_int(origin, kv);
        else if (kv.key == "count2")
            a.count2 = parse_int(origin, kv);
        else if (kv.key == "spacing_wl")
            a.spacing_wl = parse_double(origin, kv);
        else if (kv.key == "origin")
            a.origin = parse_point(origin, kv);
        else if (kv.key == "axis")
            a.axis = parse_point(origin, kv);
        else if (kv.key == "axis2")
            a.axis2 = parse_point(origin, kv);
        else if (kv.key == "normal")
            a.plane_normal = parse_point(origin, kv);
        else if (kv.key == "reference")
            a.reference = parse_int(origin, kv);
        else if (kv.key == "element")
            a.explicit_elements.push_back(parse_point(origin, kv));
        else
            fail(origin, kv.line, "unknown key '" + kv.key + "' in [" + sec.name + "]");
    }
    return a;
}

std::vector<Point3> generate_elements(const std::string& origin, const ArraySpec& a,
                                      double wavelength) {
    const double step = a.spacing_wl * wavelength;
    std::vector<Point3> out;
    if (a.layout == "explicit") {
        if (a.explicit_elements.empty())
            fail(origin, a.line, "explicit layout requires 'element' entries");
        return a.explicit_elements;
    }
    if (!(step > 0.0)) fail(origin, a.line, "element spacing must be positive");
    if (a.count < 1) fail(origin, a.line, "element count must be >= 1");
    constexpr double pi = 3.14159265358979323846;
    if (a.layout == "linear") {
        const UnitVec3 u(a.axis);
        for (long k = 0; k < a.count; ++k)
            out.push_back(a.origin + u.as_point() * (step * static_cast<double>(k)));
    } else if (a.layout == "planar") {
        const UnitVec3 u(a.axis), v(a.axis2);
        for (long j = 0; j < a.count2; ++j)
            for (long k = 0; k < a.count; ++k)
                out.push_back(a.origin + u.as_point() * (step * static_cast<double>(k)) +
                              v.as_point() * (step * static_cast<double>(j)));
    } else if (a.layout == "circular") {
        // Elements spaced `spacing_wl` wavelengths along the circumference,
        // centered at origin in the plane orthogonal to `normal`.
        const UnitVec3 nrm(a.plane_normal);
        const double radius = step * static_cast<double>(a.count) / (2.0 * pi);
        Point3 ref = std::abs(nrm.z) < 0.9 ? Point3{0, 0, 1} : Point3{1, 0, 0};
        const UnitVec3 u(ref.cross(nrm.as_point()));
        const UnitVec3 v(nrm.as_point().cross(u.as_point()));
        for (long k = 0; k < a.count; ++k) {
            const double ang = 2.0 * pi * static_cast<double>(k) / static_cast<double>(a.count);
            out.push_back(a.origin + u.as_point() * (radius * std::cos(ang)) +
                          v.as_point() * (radius * std::sin(ang)));
        }
    } else {
        fail(origin, a.line, "unknown array layout '" + a.layout + "'");
    }
    return out;
}

} // namespace detail

using detail::ArraySpec;
using detail::KeyValue;
using detail::Section;
using detail::fail;
using detail::parse_double;
using detail::parse_int;
using detail::parse_point;

Scenario parse_scenario(std::istream& in, const std::string& origin) {
    const std::vector<Section> sections = tokenize(in, origin);

    Scenario sc;
    bool have_room = false, have_tx = false, have_rx = false;
    ArraySpec tx_spec, rx_spec;
    int tx_line = 0, rx_line = 0;

    // Waveform first; array spacing is given in wavelengths.
    for (const Section& sec : sections) {
        if (sec.name != "waveform") continue;
        for (const KeyValue& kv : sec.entries) {
            if (kv.key == "center_ghz")
                sc.waveform.center_hz = parse_double(origin, kv) * 1e9;
            else if (kv.key == "subband_mhz")
                sc.waveform.subband_hz = parse_double(origin, kv) * 1e6;
            else if (kv.key == "subbands") {
                const long p = parse_int(origin, kv);
                if (p < 1) fail(origin, kv.line, "subbands must be >= 1");
                sc.waveform.subbands = static_cast<std::size_t>(p);
            } else
                fail(origin, kv.line, "unknown key '" + kv.key + "' in [waveform]");
        }
    }

    for (const Section& sec : sections) {
        if (sec.name == "waveform") continue;
        if (sec.name == "room") {
            have_room = true;
            for (const KeyValue& kv : sec.entries) {
                if (kv.key == "min")
                    sc.env.room.min = parse_point(origin, kv);
                else if (kv.key == "max")
                    sc.env.room.max = parse_point(origin, kv);
                else
                    fail(origin, kv.line, "unknown key '" + kv.key + "' in [room]");
            }
        } else if (sec.name == "tx") {
            have_tx = true;
            tx_spec = parse_array_section(origin, sec);
            tx_line = sec.line;
        } else if (sec.name == "rx") {
            have_rx = true;
            rx_spec = parse_array_section(origin, sec);
            rx_line = sec.line;
        } else if (sec.name == "facet" || sec.name == "blocker") {
            Facet f;
            f.mechanism =
                sec.name == "blocker" ? FacetMechanism::blocker : FacetMechanism::specular;
            std::vector<std::pair<long, long>> edge_flags;
            double edge_amplitude = 0.1;
            for (const KeyValue& kv : sec.entries) {
                if (kv.key == "name")
                    f.name = kv.value;
                else if (kv.key == "vertex")
                    f.shape.vertices.push_back(parse_point(origin, kv));
                else if (kv.key == "mechanism" && sec.name == "facet") {
                    if (kv.value == "specular")
                        f.mechanism = FacetMechanism::specular;
                    else if (kv.value == "rough")
                        f.mechanism = FacetMechanism::rough_scatter;
                    else
                        fail(origin, kv.line, "facet mechanism must be 'specular' or 'rough'");
                } else if (kv.key == "reflectivity" && sec.name == "facet")
                    f.reflectivity = parse_double(origin, kv);
                else if (kv.key == "edge" && sec.name == "blocker") {
                    std::istringstream ss(kv.value);
                    long i = 0, j = 0;
                    if (!(ss >> i >> j)) fail(origin, kv.line, "edge expects two vertex indices");
                    edge_flags.emplace_back(i, j);
                } else if (kv.key == "edge_amplitude" && sec.name == "blocker")
                    edge_amplitude = parse_double(origin, kv);
                else
                    fail(origin, kv.line, "unknown key '" + kv.key + "' in [" + sec.name + "]");
            }
            if (f.shape.vertices.size() < 3 || f.shape.vertices.size() > 4)
                fail(origin, sec.line, "[" + sec.name + "] needs 3 or 4 'vertex' entries");
            for (const auto& [i, j] : edge_flags) {
                const long k = static_cast<long>(f.shape.vertices.size());
                if (i < 1 || i > k || j < 1 || j > k)
                    fail(origin, sec.line, "edge vertex index out of range");
                sc.env.diffraction_edges.push_back({f.shape.vertices[static_cast<std::size_t>(i - 1)],
                                                    f.shape.vertices[static_cast<std::size_t>(j - 1)],
                                                    edge_amplitude});
            }
            sc.env.facets.push_back(std::move(f));
        } else if (sec.name == "scatterer") {
            PointScatterer s;
            bool have_pos = false;
            for (const KeyValue& kv : sec.entries) {
                if (kv.key == "position") {
                    s.position = parse_point(origin, kv);
                    have_pos = true;
                } else if (kv.key == "amplitude")
                    s.amplitude = parse_double(origin, kv);
                else
                    fail(origin, kv.line, "unknown key '" + kv.key + "' in [scatterer]");
            }
            if (!have_pos) fail(origin, sec.line, "[scatterer] needs a 'position'");
            sc.env.point_scatterers.push_back(s);
        } else if (sec.name == "diffraction") {
            for (const KeyValue& kv : sec.entries) {
                if (kv.key == "taper_db_per_m")
                    sc.diffraction_taper_db_per_m = parse_double(origin, kv);
                else
                    fail(origin, kv.line, "unknown key '" + kv.key + "' in [diffraction]");
            }
        } else {
            fail(origin, sec.line, "unknown section [" + sec.name + "]");
        }
    }

    if (!have_room) throw parse_error(origin + ": missing [room] section");
    if (!have_tx || !have_rx) throw parse_error(origin + ": missing [tx] or [rx] section");

    const double wl = sc.waveform.wavelength();
    sc.arrays.tx_elements = generate_elements(origin, {"tx", tx_line, {}}, tx_spec, wl);
    sc.arrays.rx_elements = generate_elements(origin, {"rx", rx_line, {}}, rx_spec, wl);
    if (tx_spec.reference < 1 || tx_spec.reference > static_cast<long>(sc.arrays.tx_elements.size()))
        fail(origin, tx_line, "tx reference index out of range");
    if (rx_spec.reference < 1 || rx_spec.reference > static_cast<long>(sc.arrays.rx_elements.size()))
        fail(origin, rx_line, "rx reference index out of range");
    sc.arrays.ref_tx = static_cast<std::size_t>(tx_spec.reference - 1);
    sc.arrays.ref_rx = static_cast<std::size_t>(rx_spec.reference - 1);

    sc.env.validate();
    sc.arrays.validate();
    return sc;
}

Scenario load_scenario(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw parse_error("cannot open scenario file: " + path);
    return parse_scenario(in, path);
}

} // namespace nfsage
