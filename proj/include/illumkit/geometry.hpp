// Per-pixel scene geometry for perspective observations.
//
// Surfaces are stored as a plane per pixel, n . X + p = 0 in the camera
// frame, with n facing the camera so p >= 0 for visible surfaces.
#pragma once

#include "illumkit/image.hpp"

#include <Eigen/Core>
#include <Eigen/Geometry>

#include <vector>

namespace illumkit {

inline constexpr int kDefaultImageHeight = 256;
inline constexpr int kDefaultImageWidth = 320;

/// Pinhole camera. Camera frame: +x right, +y down, +z forward.
/// Pixel (x, y) refers to integer pixel indices; the ray through it is
/// ((x - cx) / fx, (y - cy) / fy, 1).
struct Camera {
    double fx = 1.0;
    double fy = 1.0;
    double cx = 0.0;
    double cy = 0.0;
    int width = 0;
    int height = 0;
    Eigen::Matrix4d cam_to_world = Eigen::Matrix4d::Identity();

    /// Throws InvalidInput unless fx, fy > 0 and the pose is rigid
    /// (orthonormal rotation within 1e-6, det +1).
    void validate() const;

    Eigen::Matrix3d rotation() const { return cam_to_world.topLeftCorner<3, 3>(); }
    Eigen::Vector3d center() const { return cam_to_world.topRightCorner<3, 1>(); }

    Eigen::Vector3d ray(double x, double y) const { return {(x - cx) / fx, (y - cy) / fy, 1.0}; }

    Eigen::Vector3d to_world(const Eigen::Vector3d& p_cam) const { return rotation() * p_cam + center(); }
    Eigen::Vector3d to_camera(const Eigen::Vector3d& p_world) const
    {
        return rotation().transpose() * (p_world - center());
    }

    /// Continuous pixel position of a camera-frame point with z > 0.
    Eigen::Vector2d project(const Eigen::Vector3d& p_cam) const
    {
        return {fx * p_cam.x() / p_cam.z() + cx, fy * p_cam.y() / p_cam.z() + cy};
    }

    /// Builds a camera at `eye` looking at `target` with image-up roughly `up`.
    static Camera look_at(int width, int height, double focal, const Eigen::Vector3d& eye,
                          const Eigen::Vector3d& target, const Eigen::Vector3d& up = Eigen::Vector3d::UnitZ());
};

/// Depth along camera +z in metres; 0 marks missing depth.
struct DepthImage {
    int width = 0;
    int height = 0;
    std::vector<double> depth;

    DepthImage() = default;
    DepthImage(int w, int h, double fill = 0.0) : width(w), height(h), depth(static_cast<std::size_t>(w) * h, fill) {}

    double& at(int x, int y) { return depth[static_cast<std::size_t>(y) * width + x]; }
    double at(int x, int y) const { return depth[static_cast<std::size_t>(y) * width + x]; }
    bool valid(int x, int y) const { return at(x, y) > 0.0; }
};

/// Per-pixel normals, plane offsets and the points they imply, camera frame.
struct GeometryMap {
    int width = 0;
    int height = 0;
    std::vector<Eigen::Vector3d> normals;
    std::vector<double> offsets;
    std::vector<Eigen::Vector3d> points;
    Mask valid;

    GeometryMap() = default;
    GeometryMap(int w, int h);

    std::size_t index(int x, int y) const { return static_cast<std::size_t>(y) * width + x; }
    const Eigen::Vector3d& normal(int x, int y) const { return normals[index(x, y)]; }
    double offset(int x, int y) const { return offsets[index(x, y)]; }
    const Eigen::Vector3d& point(int x, int y) const { return points[index(x, y)]; }
};

/// Smallest |v . n| the PN-layer accepts before masking a pixel.
inline constexpr double kGrazingEpsilon = 1e-4;

/// P = -p / (v . n) * v for each pixel whose input is valid. Pixels with
/// |v . n| < kGrazingEpsilon, or whose plane lies behind the camera (P.z <= 0),
/// are masked. Normals and offsets are copied through.
GeometryMap pn_layer(const GeometryMap& planes, const Camera& camera);

/// Dense pixel rays v(x, y) of `camera`.
std::vector<Eigen::Vector3d> pixel_rays(const Camera& camera);

/// P = z * v(x, y); invalid where depth is 0 or non-finite. Normals and offsets are left zero.
GeometryMap depth_to_points(const DepthImage& depth, const Camera& camera);

/// Least-squares plane through each full 3x3 neighbourhood of valid points;
/// the normal is oriented so that n . P < 0 and the offset is p = -n . P at the
/// centre pixel. Pixels without a complete neighbourhood are masked.
/// Points are copied through for valid output pixels.
GeometryMap points_to_normals_offsets(const GeometryMap& points);

/// Largest |n . P + p| over valid pixels.
double max_plane_residual(const GeometryMap& geometry);

} // namespace illumkit
