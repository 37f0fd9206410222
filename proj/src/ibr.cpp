#include "illumkit/ibr.hpp"

#include "illumkit/parallel.hpp"
#include "illumkit/warp.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <unordered_map>

namespace illumkit {

std::string to_string(SurfaceLabel label)
{
    switch (label) {
    case SurfaceLabel::Floor: return "floor";
    case SurfaceLabel::Furniture: return "furniture";
    case SurfaceLabel::Other: return "other";
    }
    return "other";
}

SurfaceLabel parse_surface_label(const std::string& name)
{
    if (name == "floor")
        return SurfaceLabel::Floor;
    if (name == "furniture")
        return SurfaceLabel::Furniture;
    if (name == "other")
        return SurfaceLabel::Other;
    throw InvalidInput("unknown surface label '" + name + "'");
}

void LabeledPointSet::add(const Eigen::Vector3d& p, const Eigen::Vector3d& n, SurfaceLabel label)
{
    points.push_back(p);
    normals.push_back(n);
    labels.push_back(label);
}

void LabeledPointSet::validate() const
{
    if (normals.size() != points.size() || labels.size() != points.size())
        throw InvalidInput("labelled point set arrays have different lengths");
    for (std::size_t i = 0; i < points.size(); ++i) {
        if (!points[i].allFinite())
            throw InvalidInput("labelled point " + std::to_string(i) + " is not finite");
        if (std::abs(normals[i].norm() - 1.0) > 1e-6)
            throw InvalidInput("labelled point " + std::to_string(i) + " has a non-unit normal");
    }
}

namespace {

/// Uniform hash grid over points for radius queries.
class SpatialHash {
public:
    explicit SpatialHash(double cell) : cell_(cell) {}

    void insert(const Eigen::Vector3d& p, std::size_t id)
    {
        cells_[key(cell_of(p))].push_back(id);
    }

    /// True if any inserted point q satisfies |q - center| < radius.
    bool any_within(const Eigen::Vector3d& center, double radius, const std::vector<Eigen::Vector3d>& pts) const
    {
        Eigen::Vector3i lo = cell_of(center - Eigen::Vector3d::Constant(radius));
        Eigen::Vector3i hi = cell_of(center + Eigen::Vector3d::Constant(radius));
        const double r2 = radius * radius;
        for (int x = lo.x(); x <= hi.x(); ++x)
            for (int y = lo.y(); y <= hi.y(); ++y)
                for (int z = lo.z(); z <= hi.z(); ++z) {
                    auto it = cells_.find(key({x, y, z}));
                    if (it == cells_.end())
                        continue;
                    for (std::size_t id : it->second)
                        if ((pts[id] - center).squaredNorm() < r2)
                            return true;
                }
        return false;
    }

private:
    Eigen::Vector3i cell_of(const Eigen::Vector3d& p) const
    {
        return {static_cast<int>(std::floor(p.x() / cell_)), static_cast<int>(std::floor(p.y() / cell_)),
                static_cast<int>(std::floor(p.z() / cell_))};
    }

    static std::uint64_t key(const Eigen::Vector3i& c)
    {
        auto part = [](int v) { return static_cast<std::uint64_t>(static_cast<std::uint32_t>(v) & 0x1FFFFFu); };
        return part(c.x()) | (part(c.y()) << 21) | (part(c.z()) << 42);
    }

    double cell_;
    std::unordered_map<std::uint64_t, std::vector<std::size_t>> cells_;
};

} // namespace

std::vector<Locale> sample_locales(const LabeledPointSet& scene, const LocaleSamplingParams& params)
{
    scene.validate();
    std::vector<Locale> accepted;
    if (scene.size() == 0)
        return accepted;

    const double clearance = params.clearance_radius - params.contact_tolerance;
    SpatialHash points(std::max(clearance, 1e-3));
    for (std::size_t i = 0; i < scene.size(); ++i)
        points.insert(scene.points[i], i);

    std::vector<Eigen::Vector3d> centres;
    SpatialHash placed(params.min_separation);

    for (std::size_t i = 0; i < scene.size(); ++i) {
        const Eigen::Vector3d& n = scene.normals[i];
        if (!(n.z() > params.min_support_cos))
            continue;
        if (scene.labels[i] != SurfaceLabel::Floor && scene.labels[i] != SurfaceLabel::Furniture)
            continue;
        Eigen::Vector3d centre = scene.points[i] + params.height * n.normalized();
        if (points.any_within(centre, clearance, scene.points))
            continue;
        if (placed.any_within(centre, params.min_separation, centres))
            continue;
        placed.insert(centre, centres.size());
        centres.push_back(centre);
        accepted.push_back(Locale::make(centre, n));
    }
    return accepted;
}

namespace {

constexpr double kCoincidentCamera = 1e-6;

bool sees_locale(const Locale& locale, const View& view)
{
    if ((view.camera.center() - locale.position).norm() < kCoincidentCamera)
        return true;
    return visibility_check(locale, view.camera, view.depth);
}

} // namespace

DistanceMap build_distance_map(std::span<const View> views, const Locale& locale, int width, int height,
                               const FillOptions& fill)
{
    DistanceMap out{PanoramaImage(width, height, 1, PixelKind::Distance, locale, 0.0), Mask(width, height, false), {}, {}};
    for (std::size_t k = 0; k < views.size(); ++k) {
        const View& view = views[k];
        if (!sees_locale(locale, view))
            continue;
        out.views.push_back(k);
        GeometryMap points = depth_to_points(view.depth, view.camera);
        WarpRequest req;
        req.geometry = &points;
        req.camera = view.camera;
        req.locale = locale;
        req.pano_width = width;
        req.pano_height = height;
        WarpedPanorama warped = forward_warp(req);
        for (int v = 0; v < height; ++v)
            for (int u = 0; u < width; ++u) {
                if (!warped.mask(u, v))
                    continue;
                double r = warped.distance.at(u, v);
                if (!out.observed(u, v) || r < out.distance.at(u, v)) {
                    out.distance.at(u, v) = r;
                    out.observed.set(u, v, true);
                }
            }
    }
    if (out.views.empty())
        throw InvalidInput("build_distance_map: no view can see the locale");
    out.fill = diffuse_fill(out.distance.image(), out.observed, fill);
    return out;
}

std::vector<double> blend_weights(std::span<const double> distances)
{
    std::vector<double> w(distances.size(), 0.0);
    if (distances.empty())
        return w;
    double nearest = std::max(*std::min_element(distances.begin(), distances.end()), 1e-6);
    double total = 0.0;
    for (std::size_t k = 0; k < distances.size(); ++k) {
        double ratio = nearest / std::max(distances[k], 1e-6);
        double r2 = ratio * ratio;
        w[k] = r2 * r2;
        total += w[k];
    }
    for (double& x : w)
        x /= total;
    return w;
}

RenderedIllumination render_illumination(std::span<const View> views, const Locale& locale,
                                         const PanoramaImage& distance)
{
    const EquirectGrid grid(distance.width(), distance.height(), locale);
    int channels = 0;
    std::vector<std::size_t> usable;
    std::vector<double> camera_distance;
    for (std::size_t k = 0; k < views.size(); ++k) {
        const View& view = views[k];
        if (view.hdr.width() != view.camera.width || view.hdr.height() != view.camera.height)
            throw DimensionMismatch("render_illumination: HDR image and camera sizes differ");
        if (channels == 0)
            channels = view.hdr.channels();
        else if (channels != view.hdr.channels())
            throw DimensionMismatch("render_illumination: views have different channel counts");
        if (!sees_locale(locale, view))
            continue;
        usable.push_back(k);
        camera_distance.push_back((view.camera.center() - locale.position).norm());
    }
    if (channels == 0)
        channels = 3;
    std::vector<double> base = blend_weights(camera_distance);

    RenderedIllumination out{PanoramaImage(grid.width(), grid.height(), channels, PixelKind::HdrRadiance, locale, 0.0),
                             Mask(grid.width(), grid.height(), false)};
    const std::size_t n = static_cast<std::size_t>(grid.width()) * grid.height();
    parallel_for(n, [&](std::size_t begin, std::size_t end) {
        std::vector<double> sample(static_cast<std::size_t>(channels));
        std::vector<double> acc(static_cast<std::size_t>(channels));
        for (std::size_t i = begin; i < end; ++i) {
            int u = static_cast<int>(i % grid.width());
            int v = static_cast<int>(i / grid.width());
            double r = distance.at(u, v);
            if (!(r > 0.0))
                continue;
            Eigen::Vector3d x = locale.position + r * grid.pixel_to_direction(u, v);
            std::fill(acc.begin(), acc.end(), 0.0);
            double weight = 0.0;
            for (std::size_t m = 0; m < usable.size(); ++m) {
                const View& view = views[usable[m]];
                Eigen::Vector3d p = view.camera.to_camera(x);
                if (!(p.z() > 0.0))
                    continue;
                Eigen::Vector2d px = view.camera.project(p);
                if (!(px.x() >= -0.5 && px.y() >= -0.5 && px.x() <= view.camera.width - 0.5 &&
                      px.y() <= view.camera.height - 0.5))
                    continue;
                int nx = std::clamp(static_cast<int>(std::lround(px.x())), 0, view.camera.width - 1);
                int ny = std::clamp(static_cast<int>(std::lround(px.y())), 0, view.camera.height - 1);
                double stored = view.depth.at(nx, ny);
                if (stored > 0.0 && p.z() > stored + depth_tolerance(stored))
                    continue;
                sample_bilinear_clamp(view.hdr, px.x(), px.y(), sample);
                for (int c = 0; c < channels; ++c)
                    acc[static_cast<std::size_t>(c)] += base[m] * sample[static_cast<std::size_t>(c)];
                weight += base[m];
            }
            if (weight <= 0.0)
                continue;
            for (int c = 0; c < channels; ++c)
                out.radiance.at(u, v, c) = acc[static_cast<std::size_t>(c)] / weight;
            out.covered.set(u, v, true);
        }
    });
    return out;
}

RenderedIllumination generate_illumination(std::span<const View> views, const Locale& locale, int width, int height)
{
    DistanceMap dist = build_distance_map(views, locale, width, height);
    return render_illumination(views, locale, dist.distance);
}

} // namespace illumkit
