#include "illumkit/warp.hpp"

#include "illumkit/parallel.hpp"

#include <atomic>
#include <bit>
#include <cmath>
#include <cstdint>
#include <limits>
#include <vector>

namespace illumkit {

Locale locale_from_pixel(const GeometryMap& geometry, const Camera& camera, int x, int y)
{
    if (x < 0 || x >= geometry.width || y < 0 || y >= geometry.height)
        throw InvalidInput("selected pixel (" + std::to_string(x) + ", " + std::to_string(y) + ") is outside the image");
    if (!geometry.valid(x, y))
        throw InvalidInput("selected pixel (" + std::to_string(x) + ", " + std::to_string(y) +
                           ") has no valid geometry");
    Eigen::Vector3d n_cam = geometry.normal(x, y);
    if (!(n_cam.norm() > 0.5))
        throw InvalidInput("selected pixel has no surface normal");
    Eigen::Vector3d n = (camera.rotation() * n_cam).normalized();
    Eigen::Vector3d p = camera.to_world(geometry.point(x, y));
    return Locale::make(p + kLocaleHeight * n, n);
}

namespace {

// Positive doubles order like their bit patterns.
std::uint64_t key(double r) { return std::bit_cast<std::uint64_t>(r); }

void atomic_min(std::atomic<std::uint64_t>& slot, std::uint64_t value)
{
    std::uint64_t current = slot.load(std::memory_order_relaxed);
    while (value < current && !slot.compare_exchange_weak(current, value, std::memory_order_relaxed)) {
    }
}

} // namespace

WarpedPanorama forward_warp(const WarpRequest& req)
{
    if (!req.geometry)
        throw InvalidInput("forward_warp needs geometry");
    const GeometryMap& geo = *req.geometry;
    if (geo.width != req.camera.width || geo.height != req.camera.height)
        throw DimensionMismatch("forward_warp: geometry and camera sizes differ");
    int channels = 1;
    if (req.image) {
        if (req.image->width() != geo.width || req.image->height() != geo.height)
            throw DimensionMismatch("forward_warp: image and geometry sizes differ");
        channels = req.image->channels();
    }

    const EquirectGrid grid(req.pano_width, req.pano_height, req.locale);
    const std::size_t n_src = static_cast<std::size_t>(geo.width) * geo.height;
    const std::size_t n_pano = static_cast<std::size_t>(grid.width()) * grid.height();
    constexpr std::uint64_t kEmpty = std::numeric_limits<std::uint64_t>::max();

    std::vector<std::int64_t> target(n_src, -1);
    std::vector<double> radius(n_src, 0.0);
    std::vector<std::atomic<std::uint64_t>> best_r(n_pano);
    std::vector<std::atomic<std::uint64_t>> best_src(n_pano);
    for (std::size_t i = 0; i < n_pano; ++i) {
        best_r[i].store(kEmpty, std::memory_order_relaxed);
        best_src[i].store(kEmpty, std::memory_order_relaxed);
    }

    // pass 1: nearest distance per panorama pixel
    parallel_for(n_src, [&](std::size_t begin, std::size_t end) {
        for (std::size_t s = begin; s < end; ++s) {
            int x = static_cast<int>(s % geo.width);
            int y = static_cast<int>(s / geo.width);
            if (!geo.valid(x, y))
                continue;
            Eigen::Vector3d offset = req.camera.to_world(geo.point(x, y)) - req.locale.position;
            double r = offset.norm();
            if (!(r > 1e-6) || !std::isfinite(r))
                continue;
            auto [u, v] = grid.direction_to_index(offset / r);
            std::size_t t = static_cast<std::size_t>(v) * grid.width() + u;
            target[s] = static_cast<std::int64_t>(t);
            radius[s] = r;
            atomic_min(best_r[t], key(r));
        }
    });
    // pass 2: lowest source index among those at the nearest distance
    parallel_for(n_src, [&](std::size_t begin, std::size_t end) {
        for (std::size_t s = begin; s < end; ++s) {
            if (target[s] < 0)
                continue;
            std::size_t t = static_cast<std::size_t>(target[s]);
            if (key(radius[s]) == best_r[t].load(std::memory_order_relaxed))
                atomic_min(best_src[t], s);
        }
    });

    WarpedPanorama out{PanoramaImage(grid.width(), grid.height(), channels, req.color_kind, req.locale, kUnobserved),
                       PanoramaImage(grid.width(), grid.height(), 1, PixelKind::Distance, req.locale, 0.0),
                       Mask(grid.width(), grid.height(), false)};
    for (std::size_t t = 0; t < n_pano; ++t) {
        std::uint64_t s = best_src[t].load(std::memory_order_relaxed);
        if (s == kEmpty)
            continue;
        int u = static_cast<int>(t % grid.width());
        int v = static_cast<int>(t / grid.width());
        int x = static_cast<int>(s % geo.width);
        int y = static_cast<int>(s / geo.width);
        out.mask.set(u, v, true);
        out.distance.at(u, v) = radius[s];
        for (int c = 0; c < channels; ++c)
            out.color.at(u, v, c) = req.image ? req.image->at(x, y, c) : radius[s];
    }
    return out;
}

Eigen::Matrix<double, 2, 3> warp_jacobian(const Eigen::Vector3d& world_point, const Locale& locale)
{
    Eigen::Vector3d q = world_point - locale.position;
    double r2 = q.squaredNorm();
    if (!(r2 > 1e-24))
        throw SingularityError("warp_jacobian: point coincides with the locale");
    Eigen::Vector3d e1 = locale.azimuth_ref;
    Eigen::Vector3d e2 = locale.lateral();
    Eigen::Vector3d e3 = locale.up;
    double a = q.dot(e1), b = q.dot(e2), c = q.dot(e3);
    double rho2 = a * a + b * b;
    double rho = std::sqrt(rho2);
    if (rho <= 1e-9 * std::sqrt(r2))
        throw SingularityError("warp_jacobian: direction lies on a pole");

    Eigen::Matrix<double, 2, 3> j;
    j.row(0) = ((-b / rho2) * e1 + (a / rho2) * e2).transpose();
    j.row(1) = ((c / (r2 * rho)) * (a * e1 + b * e2) - (rho / r2) * e3).transpose();
    return j;
}

bool visibility_check(const Locale& locale, const Camera& camera, const DepthImage& depth)
{
    if (depth.width != camera.width || depth.height != camera.height)
        throw DimensionMismatch("visibility_check: depth and camera sizes differ");
    Eigen::Vector3d p = camera.to_camera(locale.position);
    if (!(p.z() > 0.0))
        return false;
    Eigen::Vector2d px = camera.project(p);
    int x = static_cast<int>(std::lround(px.x()));
    int y = static_cast<int>(std::lround(px.y()));
    if (px.x() < -0.5 || px.y() < -0.5 || x < 0 || y < 0 || x >= camera.width || y >= camera.height)
        return false;
    double stored = depth.at(x, y);
    if (!(stored > 0.0))
        return true;
    return p.z() <= stored + depth_tolerance(stored);
}

} // namespace illumkit
