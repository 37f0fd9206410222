#include "illumkit/panorama.hpp"

#include <Eigen/Geometry>

#include <algorithm>
#include <cmath>

namespace illumkit {

Locale Locale::make(const Eigen::Vector3d& position, const Eigen::Vector3d& up, std::optional<Eigen::Vector3d> azimuth_ref)
{
    double n = up.norm();
    if (!(n > 0.0) || !up.allFinite())
        throw InvalidInput("locale up axis must be a finite non-zero vector");
    Locale l;
    l.position = position;
    l.up = up / n;

    auto orthogonalise = [&](const Eigen::Vector3d& r) -> std::optional<Eigen::Vector3d> {
        Eigen::Vector3d t = r - r.dot(l.up) * l.up;
        double tn = t.norm();
        if (tn < 1e-6)
            return std::nullopt;
        t /= tn;
        // second pass removes residual rounding
        t -= t.dot(l.up) * l.up;
        return t.normalized();
    };

    if (azimuth_ref) {
        auto r = orthogonalise(*azimuth_ref);
        if (!r)
            throw InvalidInput("azimuth reference is parallel to the up axis");
        l.azimuth_ref = *r;
    } else if (auto r = orthogonalise(Eigen::Vector3d::UnitX())) {
        l.azimuth_ref = *r;
    } else {
        l.azimuth_ref = *orthogonalise(Eigen::Vector3d::UnitY());
    }
    return l;
}

Eigen::Vector3d Locale::to_world(const Eigen::Vector3d& local) const
{
    return local.x() * azimuth_ref + local.y() * lateral() + local.z() * up;
}

Eigen::Vector3d Locale::to_local(const Eigen::Vector3d& world) const
{
    return {world.dot(azimuth_ref), world.dot(lateral()), world.dot(up)};
}

void Locale::validate() const
{
    if (!position.allFinite())
        throw InvalidInput("locale position must be finite");
    if (std::abs(up.norm() - 1.0) > 1e-9)
        throw InvalidInput("locale up axis must be unit length");
    if (std::abs(azimuth_ref.norm() - 1.0) > 1e-9 || std::abs(azimuth_ref.dot(up)) > 1e-9)
        throw InvalidInput("locale azimuth reference must be a unit vector orthogonal to up");
}

std::string to_string(PixelKind kind)
{
    switch (kind) {
    case PixelKind::HdrRadiance: return "hdr-radiance";
    case PixelKind::LdrColor: return "ldr-color";
    case PixelKind::Distance: return "distance-meters";
    case PixelKind::Mask: return "mask";
    }
    return "unknown";
}

PixelKind parse_pixel_kind(const std::string& name)
{
    if (name == "hdr-radiance")
        return PixelKind::HdrRadiance;
    if (name == "ldr-color")
        return PixelKind::LdrColor;
    if (name == "distance-meters")
        return PixelKind::Distance;
    if (name == "mask")
        return PixelKind::Mask;
    throw InvalidInput("unknown panorama kind '" + name + "'");
}

EquirectGrid::EquirectGrid(int width, int height, Locale frame) : width_(width), height_(height), frame_(std::move(frame))
{
    if (height < 1 || width != 2 * height)
        throw InvalidInput("equirectangular panoramas need width = 2 * height, got " + std::to_string(width) + "x" +
                           std::to_string(height));
}

Eigen::Vector3d EquirectGrid::pixel_to_direction(int u, int v) const
{
    if (u < 0 || u >= width_ || v < 0 || v >= height_)
        throw IndexError("panorama pixel (" + std::to_string(u) + ", " + std::to_string(v) + ") out of range");
    return direction_at(u + 0.5, v + 0.5);
}

Eigen::Vector3d EquirectGrid::direction_at(double u, double v) const
{
    double phi = u * 2.0 * kPi / width_;
    double theta = v * kPi / height_;
    double st = std::sin(theta);
    Eigen::Vector3d local(st * std::cos(phi), st * std::sin(phi), std::cos(theta));
    return frame_.to_world(local).normalized();
}

SphericalCoord EquirectGrid::to_spherical(const Eigen::Vector3d& d) const
{
    double n = d.norm();
    if (!(n > 0.0) || !std::isfinite(n))
        throw InvalidInput("direction must be a finite non-zero vector");
    Eigen::Vector3d local = frame_.to_local(d / n);
    double phi = std::atan2(local.y(), local.x());
    if (phi < 0.0)
        phi += 2.0 * kPi;
    if (phi >= 2.0 * kPi)
        phi = 0.0;
    double theta = std::atan2(std::hypot(local.x(), local.y()), local.z());
    return {phi, theta};
}

PixelCoord EquirectGrid::direction_to_pixel(const Eigen::Vector3d& d) const
{
    SphericalCoord s = to_spherical(d);
    double u = s.phi * width_ / (2.0 * kPi);
    if (u >= width_)
        u -= width_;
    return {u, s.theta * height_ / kPi};
}

std::pair<int, int> EquirectGrid::direction_to_index(const Eigen::Vector3d& d) const
{
    PixelCoord p = direction_to_pixel(d);
    int u = static_cast<int>(std::floor(p.u));
    int v = static_cast<int>(std::floor(p.v));
    u = ((u % width_) + width_) % width_;
    v = std::clamp(v, 0, height_ - 1);
    return {u, v};
}

double EquirectGrid::solid_angle(int v) const
{
    if (v < 0 || v >= height_)
        throw IndexError("panorama row " + std::to_string(v) + " out of range");
    return (2.0 * kPi / width_) * (kPi / height_) * std::sin(row_theta(v));
}

PanoramaImage::PanoramaImage(int width, int height, int channels, PixelKind kind, Locale frame, double fill)
    : PanoramaImage(Image(width, height, channels, fill), kind, std::move(frame))
{
}

PanoramaImage::PanoramaImage(Image image, PixelKind kind, Locale frame)
    : image_(std::move(image)), kind_(kind), frame_(std::move(frame))
{
    if (image_.height() < 1 || image_.width() != 2 * image_.height())
        throw InvalidInput("equirectangular panoramas need width = 2 * height, got " +
                           std::to_string(image_.width()) + "x" + std::to_string(image_.height()));
}

Eigen::Vector3d pixel_to_direction(int u, int v, const PanoramaImage& pano)
{
    return pano.grid().pixel_to_direction(u, v);
}

PixelCoord direction_to_pixel(const Eigen::Vector3d& d, const PanoramaImage& pano)
{
    return pano.grid().direction_to_pixel(d);
}

double solid_angle(int v, const PanoramaImage& pano)
{
    return pano.grid().solid_angle(v);
}

DistortionGrid::DistortionGrid(int width, int height, int half_width) : width_(width), height_(height), k_(half_width)
{
    if (half_width < 1)
        throw InvalidInput("distortion grid half-width must be at least 1");
    if (height < 2 * half_width + 1)
        throw InvalidInput("distortion grid needs H >= 2k+1");
    EquirectGrid grid(width, height);
    const double delta = kPi / height;
    const int taps = (2 * k_ + 1) * (2 * k_ + 1);
    coords_.resize(static_cast<std::size_t>(width) * height * taps);

    for (int v = 0; v < height; ++v) {
        double theta = grid.row_theta(v);
        for (int u = 0; u < width; ++u) {
            double phi = grid.column_phi(u);
            Eigen::Vector3d d(std::sin(theta) * std::cos(phi), std::sin(theta) * std::sin(phi), std::cos(theta));
            Eigen::Vector3d east(-std::sin(phi), std::cos(phi), 0.0);
            Eigen::Vector3d south(std::cos(theta) * std::cos(phi), std::cos(theta) * std::sin(phi), -std::sin(theta));
            PixelCoord* out = &coords_[(static_cast<std::size_t>(v) * width + u) * taps];
            for (int j = -k_; j <= k_; ++j) {
                for (int i = -k_; i <= k_; ++i, ++out) {
                    if (i == 0 && j == 0) {
                        *out = {static_cast<double>(u), static_cast<double>(v)};
                        continue;
                    }
                    Eigen::Vector3d s = d + (i * delta) * east + (j * delta) * south;
                    PixelCoord p = grid.direction_to_pixel(s);
                    double x = p.u - 0.5;
                    double y = p.v - 0.5;
                    // keep u continuous around the centre column
                    x -= std::round((x - u) / width) * width;
                    *out = {x, y};
                }
            }
        }
    }
}

std::span<const PixelCoord> DistortionGrid::samples(int u, int v) const
{
    if (u < 0 || u >= width_ || v < 0 || v >= height_)
        throw IndexError("distortion grid pixel out of range");
    return {coords_.data() + (static_cast<std::size_t>(v) * width_ + u) * taps(), static_cast<std::size_t>(taps())};
}

PixelCoord DistortionGrid::sample(int u, int v, int i, int j) const
{
    if (std::abs(i) > k_ || std::abs(j) > k_)
        throw IndexError("distortion grid offset out of range");
    return samples(u, v)[static_cast<std::size_t>((j + k_) * (2 * k_ + 1) + (i + k_))];
}

DistortionGrid distortion_grid(int width, int height, int half_width)
{
    return DistortionGrid(width, height, half_width);
}

Image roll_columns(const Image& in, int shift)
{
    Image out(in.width(), in.height(), in.channels());
    const int w = in.width();
    if (w == 0)
        return out;
    int s = ((shift % w) + w) % w;
    for (int y = 0; y < in.height(); ++y)
        for (int x = 0; x < w; ++x) {
            auto src = in.pixel((x - s + w) % w, y);
            std::copy(src.begin(), src.end(), out.pixel(x, y).begin());
        }
    return out;
}

namespace {

void bilinear(const Image& img, int x0, int x1, int y0, int y1, double fx, double fy, std::span<double> out)
{
    for (int c = 0; c < img.channels(); ++c) {
        double top = (1.0 - fx) * img.at(x0, y0, c) + fx * img.at(x1, y0, c);
        double bottom = (1.0 - fx) * img.at(x0, y1, c) + fx * img.at(x1, y1, c);
        out[c] = (1.0 - fy) * top + fy * bottom;
    }
}

} // namespace

void sample_bilinear_wrap(const Image& img, double x, double y, std::span<double> out)
{
    const int w = img.width();
    const int h = img.height();
    double xf = std::floor(x);
    double fx = x - xf;
    int x0 = static_cast<int>(xf) % w;
    if (x0 < 0)
        x0 += w;
    int x1 = (x0 + 1) % w;

    y = std::clamp(y, 0.0, static_cast<double>(h - 1));
    int y0 = std::min(static_cast<int>(std::floor(y)), h - 1);
    int y1 = std::min(y0 + 1, h - 1);
    bilinear(img, x0, x1, y0, y1, fx, y - y0, out);
}

void sample_bilinear_clamp(const Image& img, double x, double y, std::span<double> out)
{
    x = std::clamp(x, 0.0, static_cast<double>(img.width() - 1));
    y = std::clamp(y, 0.0, static_cast<double>(img.height() - 1));
    int x0 = std::min(static_cast<int>(std::floor(x)), img.width() - 1);
    int y0 = std::min(static_cast<int>(std::floor(y)), img.height() - 1);
    int x1 = std::min(x0 + 1, img.width() - 1);
    int y1 = std::min(y0 + 1, img.height() - 1);
    bilinear(img, x0, x1, y0, y1, x - x0, y - y0, out);
}

namespace {

struct Level {
    Image values;
    Mask known;
};

// Push-pull: average known values down a pyramid, then pull coarse values up
// into unknown pixels.
void pyramid_initialise(Image& img, const Mask& known)
{
    std::vector<Level> levels;
    levels.push_back({img, known});
    while (true) {
        const Level& fine = levels.back();
        if (fine.known.count() == fine.known.width() * static_cast<std::size_t>(fine.known.height()))
            break;
        if (fine.values.width() == 1 && fine.values.height() == 1)
            break;
        int w = std::max(1, (fine.values.width() + 1) / 2);
        int h = std::max(1, (fine.values.height() + 1) / 2);
        Level coarse{Image(w, h, img.channels()), Mask(w, h)};
        for (int y = 0; y < h; ++y) {
            for (int x = 0; x < w; ++x) {
                int n = 0;
                for (int dy = 0; dy < 2; ++dy)
                    for (int dx = 0; dx < 2; ++dx) {
                        int fx = 2 * x + dx, fy = 2 * y + dy;
                        if (fx >= fine.values.width() || fy >= fine.values.height() || !fine.known(fx, fy))
                            continue;
                        for (int c = 0; c < img.channels(); ++c)
                            coarse.values.at(x, y, c) += fine.values.at(fx, fy, c);
                        ++n;
                    }
                if (n > 0) {
                    for (int c = 0; c < img.channels(); ++c)
                        coarse.values.at(x, y, c) /= n;
                    coarse.known.set(x, y, true);
                }
            }
        }
        levels.push_back(std::move(coarse));
    }

    for (std::size_t l = levels.size() - 1; l-- > 0;) {
        Level& fine = levels[l];
        const Level& coarse = levels[l + 1];
        for (int y = 0; y < fine.values.height(); ++y)
            for (int x = 0; x < fine.values.width(); ++x) {
                if (fine.known(x, y))
                    continue;
                int cx = std::min(x / 2, coarse.values.width() - 1);
                int cy = std::min(y / 2, coarse.values.height() - 1);
                for (int c = 0; c < img.channels(); ++c)
                    fine.values.at(x, y, c) = coarse.values.at(cx, cy, c);
                fine.known.set(x, y, true);
            }
    }
    img = std::move(levels.front().values);
}

} // namespace

FillStats diffuse_fill(Image& img, const Mask& known, const FillOptions& options)
{
    if (known.width() != img.width() || known.height() != img.height())
        throw DimensionMismatch("diffuse_fill: mask and image dimensions differ");
    FillStats stats;
    const int w = img.width();
    const int h = img.height();
    const int ch = img.channels();

    std::vector<std::pair<int, int>> holes;
    for (int y = 0; y < h; ++y)
        for (int x = 0; x < w; ++x)
            if (!known(x, y))
                holes.emplace_back(x, y);
    stats.filled = holes.size();
    if (holes.empty())
        return stats;
    if (known.count() == 0) {
        for (auto [x, y] : holes)
            for (int c = 0; c < ch; ++c)
                img.at(x, y, c) = 0.0;
        return stats;
    }

    // keep known pixels bit-exact: only hole pixels are written below
    Image original = img;
    pyramid_initialise(img, known);
    for (int y = 0; y < h; ++y)
        for (int x = 0; x < w; ++x)
            if (known(x, y))
                for (int c = 0; c < ch; ++c)
                    img.at(x, y, c) = original.at(x, y, c);

    std::vector<double> next(holes.size() * ch);
    for (int it = 0; it < options.max_iterations; ++it) {
        double max_delta = 0.0;
        for (std::size_t k = 0; k < holes.size(); ++k) {
            auto [x, y] = holes[k];
            int xs[4], ys[4];
            int n = 0;
            auto add = [&](int nx, int ny) {
                if (ny < 0 || ny >= h)
                    return;
                if (nx < 0 || nx >= w) {
                    if (!options.wrap_columns)
                        return;
                    nx = (nx + w) % w;
                }
                xs[n] = nx;
                ys[n] = ny;
                ++n;
            };
            add(x - 1, y);
            add(x + 1, y);
            add(x, y - 1);
            add(x, y + 1);
            for (int c = 0; c < ch; ++c) {
                double s = 0.0;
                for (int i = 0; i < n; ++i)
                    s += img.at(xs[i], ys[i], c);
                double value = n > 0 ? s / n : img.at(x, y, c);
                next[k * ch + c] = value;
                max_delta = std::max(max_delta, std::abs(value - img.at(x, y, c)));
            }
        }
        for (std::size_t k = 0; k < holes.size(); ++k)
            for (int c = 0; c < ch; ++c)
                img.at(holes[k].first, holes[k].second, c) = next[k * ch + c];
        stats.iterations = it + 1;
        stats.last_delta = max_delta;
        if (max_delta < options.tolerance)
            break;
    }
    return stats;
}

} // namespace illumkit
