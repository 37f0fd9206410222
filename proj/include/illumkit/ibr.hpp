// Ground-truth illumination maps from registered HDR RGB-D observations.
#pragma once

#include "illumkit/geometry.hpp"
#include "illumkit/panorama.hpp"

#include <cmath>
#include <span>
#include <string>
#include <vector>

namespace illumkit {

enum class SurfaceLabel { Floor, Furniture, Other };

std::string to_string(SurfaceLabel label);
SurfaceLabel parse_surface_label(const std::string& name);

/// Oriented, labelled scene samples in world coordinates (z up).
struct LabeledPointSet {
    std::vector<Eigen::Vector3d> points;
    std::vector<Eigen::Vector3d> normals;
    std::vector<SurfaceLabel> labels;

    std::size_t size() const { return points.size(); }
    void add(const Eigen::Vector3d& p, const Eigen::Vector3d& n, SurfaceLabel label);
    /// Throws InvalidInput on ragged arrays, non-finite coordinates or non-unit normals.
    void validate() const;
};

struct LocaleSamplingParams {
    double min_support_cos = std::cos(3.14159265358979323846 / 8.0);
    double height = 0.10;
    double clearance_radius = 0.10;
    double contact_tolerance = 0.01;
    double min_separation = 0.50;
};

/// Greedy locale placement in input order. A point yields the locale
/// p + height * n when its normal has n_z > min_support_cos, its label is
/// floor or furniture, no scene point lies closer than
/// clearance_radius - contact_tolerance to the locale, and no earlier
/// locale is within min_separation. Locales are oriented along n.
std::vector<Locale> sample_locales(const LabeledPointSet& scene, const LocaleSamplingParams& params = {});

/// One registered observation.
struct View {
    Camera camera;
    Image hdr; // linear radiance, same size as the camera
    DepthImage depth;
};

struct DistanceMap {
    PanoramaImage distance;          // hole-free after filling
    Mask observed;                   // pixels that received a warped sample
    FillStats fill;
    std::vector<std::size_t> views;  // indices of the visible views used
};

/// Per-direction minimum of every visible view's forward-warped distance;
/// holes are filled by masked diffusion. A view sees the locale when
/// visibility_check accepts it or its camera centre coincides with the locale.
/// Throws InvalidInput when no view can see the locale.
DistanceMap build_distance_map(std::span<const View> views, const Locale& locale, int width = kDefaultPanoWidth,
                               int height = kDefaultPanoHeight, const FillOptions& fill = {});

/// Normalised 1/d^4 weights.
std::vector<double> blend_weights(std::span<const double> distances);

struct RenderedIllumination {
    PanoramaImage radiance; // 0 where no view contributed
    Mask covered;
};

/// Reverse-maps every panorama pixel through the distance map into each
/// visible view, samples HDR colour bilinearly where the point is in front of
/// the camera, inside the image and not occluded, and blends the samples with
/// weights proportional to 1 / |camera - locale|^4.
RenderedIllumination render_illumination(std::span<const View> views, const Locale& locale,
                                         const PanoramaImage& distance);

/// The two-step pipeline: build_distance_map then render_illumination.
RenderedIllumination generate_illumination(std::span<const View> views, const Locale& locale,
                                           int width = kDefaultPanoWidth, int height = kDefaultPanoHeight);

} // namespace illumkit
