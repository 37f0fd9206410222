// Geometry-aware warping of a perspective observation onto the sphere of
// directions around a locale.
#pragma once

#include "illumkit/geometry.hpp"
#include "illumkit/panorama.hpp"

#include <Eigen/Core>

#include <algorithm>
#include <optional>
#include <stdexcept>

namespace illumkit {

/// Raised where the spherical parameterisation has no derivative.
class SingularityError : public std::domain_error {
public:
    using std::domain_error::domain_error;
};

/// Height of a locale above its supporting surface, metres.
inline constexpr double kLocaleHeight = 0.10;

struct WarpRequest {
    const Image* image = nullptr;          // perspective colour, same size as the camera
    const GeometryMap* geometry = nullptr; // camera-frame points + validity
    Camera camera;
    Locale locale;
    PixelKind color_kind = PixelKind::LdrColor;
    int pano_width = kDefaultPanoWidth;
    int pano_height = kDefaultPanoHeight;
};

struct WarpedPanorama {
    PanoramaImage color;    // unobserved pixels hold kUnobserved in every channel
    PanoramaImage distance; // metres from the locale; 0 where unobserved
    Mask mask;              // true where some source pixel landed

    std::size_t observed() const { return mask.count(); }
};

/// Locale 10 cm above the surface seen at `pixel`, oriented along the
/// world-frame surface normal. Throws InvalidInput when the pixel has no
/// valid geometry or normal.
Locale locale_from_pixel(const GeometryMap& geometry, const Camera& camera, int x, int y);

/// Splats every valid source pixel into the panorama pixel containing its
/// direction from the locale, keeping the nearest (ties: lowest source index).
/// Colours are copied, not resampled.
WarpedPanorama forward_warp(const WarpRequest& request);

/// d(phi, theta) / dX for the locale-frame spherical coordinates of X - locale.
/// Row 0 is dphi, row 1 is dtheta. Throws SingularityError at the poles or
/// when X coincides with the locale.
Eigen::Matrix<double, 2, 3> warp_jacobian(const Eigen::Vector3d& world_point, const Locale& locale);

/// Depth-test slack: max(2 cm, 2 % of the stored depth).
inline double depth_tolerance(double depth) { return std::max(0.02, 0.02 * depth); }

/// True iff the locale projects inside the image in front of the camera and
/// is not behind the recorded surface. Pixels without depth never occlude.
bool visibility_check(const Locale& locale, const Camera& camera, const DepthImage& depth);

} // namespace illumkit
