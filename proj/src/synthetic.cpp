#include "illumkit/synthetic.hpp"

#include "illumkit/hdr.hpp"

#include <cmath>
#include <limits>

namespace illumkit::synthetic {

std::optional<SurfaceHit> BoxRoom::intersect(const Eigen::Vector3d& o, const Eigen::Vector3d& d) const
{
    if ((o.array() <= min_corner.array()).any() || (o.array() >= max_corner.array()).any())
        return std::nullopt;
    double best = std::numeric_limits<double>::infinity();
    int face = -1;
    for (int axis = 0; axis < 3; ++axis) {
        if (d[axis] == 0.0)
            continue;
        double bound = d[axis] > 0.0 ? max_corner[axis] : min_corner[axis];
        double t = (bound - o[axis]) / d[axis];
        if (t > 0.0 && t < best) {
            best = t;
            face = 2 * axis + (d[axis] > 0.0 ? 1 : 0);
        }
    }
    if (face < 0)
        return std::nullopt;
    SurfaceHit hit{best, face_radiance[static_cast<std::size_t>(face)], true, face};
    if (emitter && face == 5) {
        Eigen::Vector3d p = o + best * d;
        if (p.x() >= emitter_min.x() && p.x() <= emitter_max.x() && p.y() >= emitter_min.y() &&
            p.y() <= emitter_max.y()) {
            hit.radiance = emitter_radiance;
            hit.has_depth = false;
            hit.surface = kEmitter;
        }
    }
    return hit;
}

std::optional<SurfaceHit> SphereShell::intersect(const Eigen::Vector3d& o, const Eigen::Vector3d& d) const
{
    Eigen::Vector3d oc = o - center;
    double b = oc.dot(d);
    double c = oc.squaredNorm() - radius * radius;
    if (c >= 0.0)
        return std::nullopt;
    double t = -b + std::sqrt(b * b - c);
    return SurfaceHit{t, radiance, true, 0};
}

View render_view(const AnalyticScene& scene, const Camera& camera)
{
    View v{camera, Image(camera.width, camera.height, 3), DepthImage(camera.width, camera.height)};
    for (int y = 0; y < camera.height; ++y)
        for (int x = 0; x < camera.width; ++x) {
            Eigen::Vector3d ray_cam = camera.ray(x, y);
            Eigen::Vector3d dir = (camera.rotation() * ray_cam).normalized();
            auto hit = scene.intersect(camera.center(), dir);
            if (!hit)
                continue;
            for (int c = 0; c < 3; ++c)
                v.hdr.at(x, y, c) = hit->radiance[c];
            if (hit->has_depth)
                v.depth.at(x, y) = hit->t / ray_cam.norm(); // z = t * cos(angle to the optical axis)
        }
    return v;
}

CastPanorama raycast_panorama(const AnalyticScene& scene, const Locale& locale, int width, int height)
{
    CastPanorama out{PanoramaImage(width, height, 3, PixelKind::HdrRadiance, locale),
                     PanoramaImage(width, height, 1, PixelKind::Distance, locale),
                     std::vector<int>(static_cast<std::size_t>(width) * height, -1)};
    EquirectGrid grid(width, height, locale);
    for (int v = 0; v < height; ++v)
        for (int u = 0; u < width; ++u) {
            auto hit = scene.intersect(locale.position, grid.pixel_to_direction(u, v));
            if (!hit)
                continue;
            for (int c = 0; c < 3; ++c)
                out.radiance.at(u, v, c) = hit->radiance[c];
            out.distance.at(u, v) = hit->t;
            out.surface[static_cast<std::size_t>(v) * width + u] = hit->surface;
        }
    return out;
}

std::vector<Camera> room_cameras(const BoxRoom& room, int width, int height)
{
    const Eigen::Vector3d c = room.center();
    const Eigen::Vector3d half = 0.5 * (room.max_corner - room.min_corner);
    const double focal = 0.5 * width; // 90 degree horizontal field of view
    std::vector<Camera> cams;
    const double corners[4][2] = {{1, 1}, {-1, -1}, {1, -1}, {-1, 1}};
    for (int i = 0; i < 4; ++i) {
        Eigen::Vector3d eye(c.x() + 0.6 * half.x() * corners[i][0], c.y() + 0.6 * half.y() * corners[i][1],
                            c.z() + 0.1 * (i % 2 == 0 ? 1.0 : -1.0));
        Eigen::Vector3d horizontal = Eigen::Vector3d(c.x() - eye.x(), c.y() - eye.y(), 0.0).normalized();
        double pitch = (i % 2 == 0 ? -30.0 : 30.0) * kPi / 180.0;
        Eigen::Vector3d forward = std::cos(pitch) * horizontal + std::sin(pitch) * Eigen::Vector3d::UnitZ();
        cams.push_back(Camera::look_at(width, height, focal, eye, eye + forward));
    }
    return cams;
}

RoomLayout room_points(const BoxRoom& room, double spacing)
{
    RoomLayout layout;
    LabeledPointSet& pts = layout.points;
    const Eigen::Vector3d lo = room.min_corner, hi = room.max_corner;
    auto steps = [&](double a, double b) { return static_cast<int>(std::floor((b - a) / spacing + 1e-9)); };

    // low board 5 cm above the floor, and a table top
    const Eigen::Vector2d board_lo(-1.5, -1.5), board_hi(-0.9, -0.9);
    const double board_z = lo.z() + 0.05;
    const Eigen::Vector2d table_lo(0.6, -1.6), table_hi(1.6, -0.6);
    const double table_z = lo.z() + 0.72;

    for (int i = 1; i < steps(lo.x(), hi.x()); ++i)
        for (int j = 1; j < steps(lo.y(), hi.y()); ++j) {
            Eigen::Vector3d p(lo.x() + i * spacing, lo.y() + j * spacing, lo.z());
            pts.add(p, Eigen::Vector3d::UnitZ(), SurfaceLabel::Floor);
            pts.add({p.x(), p.y(), hi.z()}, -Eigen::Vector3d::UnitZ(), SurfaceLabel::Other);
        }
    for (int i = 0; i <= steps(lo.x(), hi.x()); ++i)
        for (int k = 0; k <= steps(lo.z(), hi.z()); ++k) {
            double x = lo.x() + i * spacing, z = lo.z() + k * spacing;
            pts.add({x, lo.y(), z}, Eigen::Vector3d::UnitY(), SurfaceLabel::Other);
            pts.add({x, hi.y(), z}, -Eigen::Vector3d::UnitY(), SurfaceLabel::Other);
        }
    for (int j = 0; j <= steps(lo.y(), hi.y()); ++j)
        for (int k = 0; k <= steps(lo.z(), hi.z()); ++k) {
            double y = lo.y() + j * spacing, z = lo.z() + k * spacing;
            pts.add({lo.x(), y, z}, Eigen::Vector3d::UnitX(), SurfaceLabel::Other);
            pts.add({hi.x(), y, z}, -Eigen::Vector3d::UnitX(), SurfaceLabel::Other);
        }
    const double fine = spacing / 2.0;
    for (double x = board_lo.x(); x <= board_hi.x() + 1e-9; x += fine)
        for (double y = board_lo.y(); y <= board_hi.y() + 1e-9; y += fine)
            pts.add({x, y, board_z}, Eigen::Vector3d::UnitZ(), SurfaceLabel::Furniture);
    for (double x = table_lo.x(); x <= table_hi.x() + 1e-9; x += spacing)
        for (double y = table_lo.y(); y <= table_hi.y() + 1e-9; y += spacing)
            pts.add({x, y, table_z}, Eigen::Vector3d::UnitZ(), SurfaceLabel::Furniture);

    layout.shelf_covered_floor_point = Eigen::Vector3d(-1.2, -1.2, lo.z());
    return layout;
}

PanoLibrary room_library(const BoxRoom& room, int width, int height)
{
    PanoLibrary lib;
    auto to_ldr = [](PanoramaImage radiance) {
        for (double& v : radiance.image().data())
            v = h_to_j(v).value;
        return PanoramaImage(radiance.image(), PixelKind::LdrColor, radiance.frame());
    };
    const Eigen::Vector3d c = room.center();
    const Eigen::Vector3d offsets[] = {{0.0, 0.0, 0.0}, {1.0, 0.5, -0.8}, {-1.2, 0.9, -1.0}};
    int i = 0;
    for (const auto& off : offsets) {
        Locale l = Locale::make(c + off);
        lib.entries.push_back({"room_" + std::to_string(i++), to_ldr(raycast_panorama(room, l, width, height).radiance)});
    }
    BoxRoom other = room;
    for (auto& f : other.face_radiance)
        f = Eigen::Vector3d(f.z(), f.x(), f.y()) * 2.0;
    other.emitter = false;
    lib.entries.push_back({"recoloured", to_ldr(raycast_panorama(other, Locale::make(c), width, height).radiance)});
    return lib;
}

} // namespace illumkit::synthetic
