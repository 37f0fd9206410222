#include "illumkit/geometry.hpp"

#include <Eigen/Eigenvalues>
#include <Eigen/Geometry>

#include <algorithm>
#include <cmath>

namespace illumkit {

void Camera::validate() const
{
    if (!(fx > 0.0) || !(fy > 0.0))
        throw InvalidInput("camera focal lengths must be positive");
    if (width <= 0 || height <= 0)
        throw InvalidInput("camera image size must be positive");
    if (!cam_to_world.allFinite())
        throw InvalidInput("camera pose must be finite");
    Eigen::Matrix3d r = rotation();
    if ((r.transpose() * r - Eigen::Matrix3d::Identity()).cwiseAbs().maxCoeff() > 1e-6)
        throw InvalidInput("camera rotation is not orthonormal");
    if (std::abs(r.determinant() - 1.0) > 1e-6)
        throw InvalidInput("camera rotation must have determinant +1");
    Eigen::RowVector4d last = cam_to_world.row(3);
    if ((last - Eigen::RowVector4d(0, 0, 0, 1)).cwiseAbs().maxCoeff() > 1e-12)
        throw InvalidInput("camera pose bottom row must be (0, 0, 0, 1)");
}

Camera Camera::look_at(int width, int height, double focal, const Eigen::Vector3d& eye, const Eigen::Vector3d& target,
                       const Eigen::Vector3d& up)
{
    Camera cam;
    cam.width = width;
    cam.height = height;
    cam.fx = cam.fy = focal;
    cam.cx = (width - 1) / 2.0;
    cam.cy = (height - 1) / 2.0;

    Eigen::Vector3d forward = (target - eye).normalized();
    Eigen::Vector3d right = forward.cross(up);
    if (right.norm() < 1e-9)
        right = forward.cross(Eigen::Vector3d::UnitX());
    right.normalize();
    Eigen::Vector3d down = forward.cross(right);

    cam.cam_to_world.setIdentity();
    cam.cam_to_world.block<3, 1>(0, 0) = right;
    cam.cam_to_world.block<3, 1>(0, 1) = down;
    cam.cam_to_world.block<3, 1>(0, 2) = forward;
    cam.cam_to_world.block<3, 1>(0, 3) = eye;
    return cam;
}

GeometryMap::GeometryMap(int w, int h)
    : width(w), height(h), normals(static_cast<std::size_t>(w) * h, Eigen::Vector3d::Zero()),
      offsets(static_cast<std::size_t>(w) * h, 0.0), points(static_cast<std::size_t>(w) * h, Eigen::Vector3d::Zero()),
      valid(w, h, false)
{
}

std::vector<Eigen::Vector3d> pixel_rays(const Camera& camera)
{
    std::vector<Eigen::Vector3d> rays(static_cast<std::size_t>(camera.width) * camera.height);
    for (int y = 0; y < camera.height; ++y)
        for (int x = 0; x < camera.width; ++x)
            rays[static_cast<std::size_t>(y) * camera.width + x] = camera.ray(x, y);
    return rays;
}

GeometryMap pn_layer(const GeometryMap& planes, const Camera& camera)
{
    if (planes.width != camera.width || planes.height != camera.height)
        throw DimensionMismatch("pn_layer: geometry and camera sizes differ");
    GeometryMap out = planes;
    for (int y = 0; y < planes.height; ++y) {
        for (int x = 0; x < planes.width; ++x) {
            std::size_t i = planes.index(x, y);
            out.points[i].setZero();
            if (!planes.valid(x, y)) {
                out.valid.set(x, y, false);
                continue;
            }
            Eigen::Vector3d v = camera.ray(x, y);
            double vn = v.dot(planes.normals[i]);
            if (std::abs(vn) < kGrazingEpsilon || !std::isfinite(planes.offsets[i])) {
                out.valid.set(x, y, false);
                continue;
            }
            Eigen::Vector3d p = (-planes.offsets[i] / vn) * v;
            if (!(p.z() > 0.0)) {
                out.valid.set(x, y, false);
                continue;
            }
            out.points[i] = p;
            out.valid.set(x, y, true);
        }
    }
    return out;
}

GeometryMap depth_to_points(const DepthImage& depth, const Camera& camera)
{
    if (depth.width != camera.width || depth.height != camera.height)
        throw DimensionMismatch("depth_to_points: depth and camera sizes differ");
    GeometryMap out(depth.width, depth.height);
    for (int y = 0; y < depth.height; ++y)
        for (int x = 0; x < depth.width; ++x) {
            double z = depth.at(x, y);
            if (!(z > 0.0) || !std::isfinite(z))
                continue;
            out.points[out.index(x, y)] = z * camera.ray(x, y);
            out.valid.set(x, y, true);
        }
    return out;
}

GeometryMap points_to_normals_offsets(const GeometryMap& points)
{
    GeometryMap out(points.width, points.height);
    for (int y = 1; y + 1 < points.height; ++y) {
        for (int x = 1; x + 1 < points.width; ++x) {
            bool complete = true;
            Eigen::Vector3d centroid = Eigen::Vector3d::Zero();
            for (int dy = -1; dy <= 1 && complete; ++dy)
                for (int dx = -1; dx <= 1; ++dx) {
                    if (!points.valid(x + dx, y + dy)) {
                        complete = false;
                        break;
                    }
                    centroid += points.point(x + dx, y + dy);
                }
            if (!complete)
                continue;
            centroid /= 9.0;

            Eigen::Matrix3d cov = Eigen::Matrix3d::Zero();
            for (int dy = -1; dy <= 1; ++dy)
                for (int dx = -1; dx <= 1; ++dx) {
                    Eigen::Vector3d d = points.point(x + dx, y + dy) - centroid;
                    cov += d * d.transpose();
                }
            Eigen::SelfAdjointEigenSolver<Eigen::Matrix3d> solver(cov);
            if (solver.info() != Eigen::Success)
                continue;
            // eigenvalues ascend; a rank-deficient spread (collinear points) has no plane
            Eigen::Vector3d ev = solver.eigenvalues();
            if (!(ev(1) > 1e-12 * std::max(1.0, ev(2))))
                continue;
            Eigen::Vector3d n = solver.eigenvectors().col(0).normalized();

            const Eigen::Vector3d& p = points.point(x, y);
            if (n.dot(p) > 0.0)
                n = -n;
            std::size_t i = out.index(x, y);
            out.normals[i] = n;
            out.offsets[i] = -n.dot(p);
            out.points[i] = p;
            out.valid.set(x, y, true);
        }
    }
    return out;
}

double max_plane_residual(const GeometryMap& geometry)
{
    double worst = 0.0;
    for (int y = 0; y < geometry.height; ++y)
        for (int x = 0; x < geometry.width; ++x)
            if (geometry.valid(x, y))
                worst = std::max(worst, std::abs(geometry.normal(x, y).dot(geometry.point(x, y)) + geometry.offset(x, y)));
    return worst;
}

} // namespace illumkit
