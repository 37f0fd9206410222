// Equirectangular panoramas centred at a locale.
//
// A panorama of width W and height H covers the full sphere: column u spans
// azimuth phi in [u, u+1) * 2pi/W and row v spans polar angle theta in
// [v, v+1) * pi/H, with theta = 0 along the locale's up axis and phi = 0 along
// its azimuth reference. Pixel centres sit at half-integer offsets.
//
// Two continuous coordinate systems appear below:
//  * edge coordinates (PixelCoord from direction_to_pixel): pixel (u, v)
//    covers [u, u+1) x [v, v+1);
//  * centre coordinates (bilinear sampling, distortion grids): pixel (u, v)
//    has its centre at exactly (u, v).
#pragma once

#include "illumkit/image.hpp"

#include <Eigen/Core>
#include <Eigen/Geometry>

#include <optional>
#include <span>
#include <string>
#include <vector>

namespace illumkit {

inline constexpr double kPi = 3.14159265358979323846;

inline constexpr int kDefaultPanoHeight = 160;
inline constexpr int kDefaultPanoWidth = 320;

/// The point an illumination map is centred on, with its upright frame.
struct Locale {
    Eigen::Vector3d position = Eigen::Vector3d::Zero();
    Eigen::Vector3d up = Eigen::Vector3d::UnitZ();
    Eigen::Vector3d azimuth_ref = Eigen::Vector3d::UnitX();

    /// Builds a locale with `up` normalised and `azimuth_ref` orthogonalised
    /// against it. Without an explicit reference, world +x projected onto the
    /// plane normal to `up` is used (world +y when up is parallel to x).
    static Locale make(const Eigen::Vector3d& position, const Eigen::Vector3d& up = Eigen::Vector3d::UnitZ(),
                       std::optional<Eigen::Vector3d> azimuth_ref = std::nullopt);

    /// up x azimuth_ref; the phi = pi/2 direction.
    Eigen::Vector3d lateral() const { return up.cross(azimuth_ref); }

    Eigen::Vector3d to_world(const Eigen::Vector3d& local) const;
    Eigen::Vector3d to_local(const Eigen::Vector3d& world) const;

    /// Throws InvalidInput unless |up| = 1 and azimuth_ref is a unit vector
    /// orthogonal to up, both within 1e-9.
    void validate() const;
};

struct SphericalCoord {
    double phi = 0.0;   // [0, 2pi)
    double theta = 0.0; // [0, pi]
};

struct PixelCoord {
    double u = 0.0;
    double v = 0.0;
};

enum class PixelKind { HdrRadiance, LdrColor, Distance, Mask };

std::string to_string(PixelKind kind);
PixelKind parse_pixel_kind(const std::string& name);

/// Sentinel stored in colour channels of unobserved panorama pixels.
inline constexpr double kUnobserved = -1.0;

/// Pixel <-> direction geometry of a W x H equirectangular grid.
class EquirectGrid {
public:
    EquirectGrid(int width, int height, Locale frame = {});

    int width() const { return width_; }
    int height() const { return height_; }
    const Locale& frame() const { return frame_; }

    /// Unit world direction through the centre of pixel (u, v). Throws IndexError.
    Eigen::Vector3d pixel_to_direction(int u, int v) const;
    /// Unit world direction at continuous edge coordinates.
    Eigen::Vector3d direction_at(double u, double v) const;

    /// Continuous edge coordinates of `d`; u in [0, W), v in [0, H].
    /// Non-unit input is normalised; zero or non-finite input throws InvalidInput.
    PixelCoord direction_to_pixel(const Eigen::Vector3d& d) const;
    /// Integer pixel containing `d`.
    std::pair<int, int> direction_to_index(const Eigen::Vector3d& d) const;

    SphericalCoord to_spherical(const Eigen::Vector3d& d) const;

    /// Steradians covered by any pixel of row v. Throws IndexError.
    double solid_angle(int v) const;

    double row_theta(int v) const { return (v + 0.5) * kPi / height_; }
    double column_phi(int u) const { return (u + 0.5) * 2.0 * kPi / width_; }

private:
    int width_;
    int height_;
    Locale frame_;
};

/// An equirectangular image plus what its values mean and where it is centred.
class PanoramaImage {
public:
    PanoramaImage() = default;
    PanoramaImage(int width, int height, int channels, PixelKind kind, Locale frame = {}, double fill = 0.0);
    PanoramaImage(Image image, PixelKind kind, Locale frame = {});

    int width() const { return image_.width(); }
    int height() const { return image_.height(); }
    int channels() const { return image_.channels(); }
    PixelKind kind() const { return kind_; }
    const Locale& frame() const { return frame_; }
    void set_frame(const Locale& frame) { frame_ = frame; }

    EquirectGrid grid() const { return EquirectGrid(width(), height(), frame_); }

    Image& image() { return image_; }
    const Image& image() const { return image_; }

    double& at(int u, int v, int c = 0) { return image_.at(u, v, c); }
    double at(int u, int v, int c = 0) const { return image_.at(u, v, c); }

private:
    Image image_;
    PixelKind kind_ = PixelKind::HdrRadiance;
    Locale frame_;
};

Eigen::Vector3d pixel_to_direction(int u, int v, const PanoramaImage& pano);
PixelCoord direction_to_pixel(const Eigen::Vector3d& d, const PanoramaImage& pano);
double solid_angle(int v, const PanoramaImage& pano);

/// Per-pixel gnomonic sampling neighbourhoods. For pixel (u, v) the
/// (2k+1)^2 samples are the tangent-plane offsets (i*delta, j*delta),
/// delta = pi/H, i along increasing phi and j along increasing theta,
/// projected back onto the sphere. Coordinates are centre coordinates;
/// u is left unwrapped (nearest to the centre column) and samplers wrap it.
class DistortionGrid {
public:
    DistortionGrid(int width, int height, int half_width);

    int width() const { return width_; }
    int height() const { return height_; }
    int half_width() const { return k_; }
    int taps() const { return (2 * k_ + 1) * (2 * k_ + 1); }

    /// Samples of pixel (u, v), ordered row-major over j then i in [-k, k].
    std::span<const PixelCoord> samples(int u, int v) const;
    /// The sample at offset (i, j).
    PixelCoord sample(int u, int v, int i, int j) const;

private:
    int width_;
    int height_;
    int k_;
    std::vector<PixelCoord> coords_;
};

DistortionGrid distortion_grid(int width, int height, int half_width);

/// out(u, v) = in((u - shift) mod W, v).
Image roll_columns(const Image& in, int shift);

/// Bilinear sample at centre coordinates, wrapping columns and clamping rows.
void sample_bilinear_wrap(const Image& img, double x, double y, std::span<double> out);
/// Bilinear sample at centre coordinates, clamping both axes.
void sample_bilinear_clamp(const Image& img, double x, double y, std::span<double> out);

struct FillOptions {
    double tolerance = 1e-4;
    int max_iterations = 500;
    bool wrap_columns = true;
};

struct FillStats {
    int iterations = 0;
    double last_delta = 0.0;
    std::size_t filled = 0;
};

/// Fills pixels outside `known` by masked diffusion: a push-pull pyramid
/// provides the initial guess, then Jacobi sweeps of the 4-neighbour average
/// run until the largest update drops below `tolerance`. Known pixels are not
/// touched. With no known pixels the holes are set to zero.
FillStats diffuse_fill(Image& img, const Mask& known, const FillOptions& options = {});

} // namespace illumkit
