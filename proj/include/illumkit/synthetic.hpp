// Analytic scenes with exact ray casting, used to build fixtures and
// ground-truth panoramas.
#pragma once

#include "illumkit/completion.hpp"
#include "illumkit/geometry.hpp"
#include "illumkit/ibr.hpp"
#include "illumkit/panorama.hpp"

#include <Eigen/Core>

#include <array>
#include <optional>
#include <vector>

namespace illumkit::synthetic {

struct SurfaceHit {
    double t = 0.0;           // ray parameter for a unit direction
    Eigen::Vector3d radiance; // constant per surface
    bool has_depth = true;    // depth sensors return nothing for emitters
    int surface = -1;
};

class AnalyticScene {
public:
    virtual ~AnalyticScene() = default;
    virtual std::optional<SurfaceHit> intersect(const Eigen::Vector3d& origin, const Eigen::Vector3d& dir) const = 0;
};

/// Axis-aligned room seen from inside. Faces: 0 -x, 1 +x, 2 -y, 3 +y,
/// 4 floor (-z), 5 ceiling (+z). An optional rectangular emitter on the
/// ceiling has its own radiance and no depth.
class BoxRoom : public AnalyticScene {
public:
    Eigen::Vector3d min_corner{-2.0, -2.0, 0.0};
    Eigen::Vector3d max_corner{2.0, 2.0, 2.6};
    std::array<Eigen::Vector3d, 6> face_radiance{
        Eigen::Vector3d(0.050, 0.020, 0.010), Eigen::Vector3d(0.010, 0.040, 0.015),
        Eigen::Vector3d(0.020, 0.020, 0.060), Eigen::Vector3d(0.045, 0.045, 0.010),
        Eigen::Vector3d(0.015, 0.010, 0.005), Eigen::Vector3d(0.080, 0.080, 0.080)};
    bool emitter = true;
    Eigen::Vector2d emitter_min{-0.4, -0.3};
    Eigen::Vector2d emitter_max{0.4, 0.3};
    Eigen::Vector3d emitter_radiance{40.0, 38.0, 34.0};

    static constexpr int kEmitter = 6;

    std::optional<SurfaceHit> intersect(const Eigen::Vector3d& origin, const Eigen::Vector3d& dir) const override;
    Eigen::Vector3d center() const { return 0.5 * (min_corner + max_corner); }
};

/// Sphere of constant radiance seen from inside.
class SphereShell : public AnalyticScene {
public:
    Eigen::Vector3d center = Eigen::Vector3d::Zero();
    double radius = 3.0;
    Eigen::Vector3d radiance{0.2, 0.3, 0.4};

    std::optional<SurfaceHit> intersect(const Eigen::Vector3d& origin, const Eigen::Vector3d& dir) const override;
};

/// Ray-casts one registered HDR RGB-D view. Misses and depthless surfaces get
/// depth 0.
View render_view(const AnalyticScene& scene, const Camera& camera);

struct CastPanorama {
    PanoramaImage radiance;
    PanoramaImage distance;
    std::vector<int> surface; // hit surface per pixel, -1 on a miss
};

/// Radiance and distance through every panorama pixel centre.
CastPanorama raycast_panorama(const AnalyticScene& scene, const Locale& locale, int width = kDefaultPanoWidth,
                              int height = kDefaultPanoHeight);

/// Four inward-looking cameras near the room corners, alternately pitched
/// down and up so floor and ceiling are covered.
std::vector<Camera> room_cameras(const BoxRoom& room, int width = kDefaultImageWidth,
                                 int height = kDefaultImageHeight);

/// Labelled samples of the room: floor (floor), walls and ceiling (other), a
/// low board 5 cm above the floor and a table top (furniture).
struct RoomLayout {
    LabeledPointSet points;
    Eigen::Vector3d shelf_covered_floor_point; // floor point under the low board
};
RoomLayout room_points(const BoxRoom& room, double spacing = 0.1);

/// Complete LDR panoramas of the room (h_to_j of the ray-cast radiance) at
/// several positions, plus one of a recoloured room.
PanoLibrary room_library(const BoxRoom& room, int width = kDefaultPanoWidth, int height = kDefaultPanoHeight);

} // namespace illumkit::synthetic
