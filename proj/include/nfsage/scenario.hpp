#pragma once

#include "nfsage/geometry.hpp"

#include <complex>
#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

namespace nfsage {

enum class FacetMechanism { specular, rough_scatter, blocker };

/// Planar environment element: a wall, an obstacle face, or a rough patch.
struct Facet {
    std::string name;
    ConvexFacet shape;
    FacetMechanism mechanism = FacetMechanism::specular;
    double reflectivity = 1.0; // linear amplitude factor, [0, 1]
};

struct PointScatterer {
    Point3 position;
    double amplitude = 1.0; // linear
};

struct DiffractionEdge {
    Point3 a;
    Point3 b;
    double amplitude = 0.1; // linear base amplitude of the edge source
};

struct Environment {
    std::vector<Facet> facets;
    std::vector<PointScatterer> point_scatterers;
    std::vector<DiffractionEdge> diffraction_edges;
    SearchGrid room; // bounded sensing region; doubles as the default search space

    std::vector<ConvexFacet> blocker_shapes() const;
    void validate() const;
};

/// Tx/Rx aperture element coordinates plus the reference-element indices
/// (0-based internally; scenario files use 1-based).
struct ArrayLayout {
    std::vector<Point3> tx_elements;
    std::vector<Point3> rx_elements;
    std::size_t ref_tx = 0;
    std::size_t ref_rx = 0;

    std::size_t m() const { return tx_elements.size(); }
    std::size_t n() const { return rx_elements.size(); }
    const Point3& tx_ref() const { return tx_elements[ref_tx]; }
    const Point3& rx_ref() const { return rx_elements[ref_rx]; }
    void validate() const;
};

enum class HopMechanism { specular, scatter, diffraction_edge };

/// Ground-truth multipath: mechanism and interaction points for the
/// reference channel, per-element specular points when applicable, the
/// composed base gain, and the per-element visibility mask.
struct PathTruth {
    std::string label;
    int bounce = 0;                       // 0 = LoS
    std::vector<Point3> points;           // reference-channel interaction points, size = bounce
    std::vector<HopMechanism> mechanisms; // size = bounce
    std::vector<Plane> hop_planes;        // planes of specular hops (empty entries for others)
    std::vector<int> hop_facets;          // environment facet index per hop, -1 for scatter hops
    std::complex<double> gain{1.0, 0.0};
    std::vector<std::uint8_t> visibility;   // M*N mask, row-major (m, n)
    std::vector<Point3> per_element_points; // M*N*bounce when any hop is specular, else empty
    std::vector<double> amp_profile;        // optional M*N per-element amplitude factor

    bool visible(std::size_t m, std::size_t n, std::size_t n_rx) const {
        return visibility.empty() || visibility[m * n_rx + n] != 0;
    }
    /// Interaction points of the (m, n)-specific track.
    std::vector<Point3> track_points(std::size_t m, std::size_t n, std::size_t n_rx) const;
    /// Propagation distance Tx_m -> hops -> Rx_n in meters.
    double element_distance(const ArrayLayout& arrays, std::size_t m, std::size_t n) const;
    double reference_distance(const ArrayLayout& arrays) const;
};

/// Enumerates ground-truth paths: LoS, one-bounce per specular facet (image
/// method) / rough facet / point scatterer, and the geometrically valid
/// two-bounce combinations when max_bounce is 2. Gains compose per-hop
/// reflectivity or amplitude with 1/d free-space spreading at the
/// reference-channel distance. Visibility masks are filled in.
std::vector<PathTruth> enumerate_paths(const Environment& env, const ArrayLayout& arrays,
                                       int max_bounce);

/// Recomputes the visibility mask of one path against the environment's
/// blockers and facet extents.
std::vector<std::uint8_t> visibility_mask(const PathTruth& path, const Environment& env,
                                          const ArrayLayout& arrays);

/// One coherent edge source per diffraction edge, with an amplitude taper
/// (dB per meter of shadow depth) instead of hard blockage.
std::vector<PathTruth> diffraction_sources(const Environment& env, const ArrayLayout& arrays,
                                           double taper_db_per_m);

/// Waveform description parsed from the scenario file.
struct Waveform {
    double center_hz = 30e9;
    double subband_hz = 10e6;
    std::size_t subbands = 101;

    double wavelength() const { return kSpeedOfLight / center_hz; }
    double start_hz() const {
        return center_hz - 0.5 * static_cast<double>(subbands - 1) * subband_hz;
    }
};

struct Scenario {
    Environment env;
    ArrayLayout arrays;
    Waveform waveform;
    double diffraction_taper_db_per_m = 30.0;
};

/// Parses the scenario file format documented in the README ([room], [tx],
/// [rx], [waveform], [facet], [scatterer], [blocker] sections). Rejects
/// unknown keys; error messages carry line numbers.
Scenario parse_scenario(std::istream& in, const std::string& origin = "<scenario>");
Scenario load_scenario(const std::string& path);

} // namespace nfsage
