// Diffuse convolution of illumination maps and sphere relighting previews.
#pragma once

#include "illumkit/hdr.hpp"
#include "illumkit/panorama.hpp"

#include <vector>

namespace illumkit {

inline constexpr int kDefaultWorkHeight = 40;
inline constexpr int kDefaultWorkWidth = 80;

/// Box average over integer blocks. Throws InvalidInput unless the input
/// dimensions are whole multiples of the output dimensions.
Image average_pool(const Image& in, int out_width, int out_height);
/// Transpose of average_pool: spreads each output gradient evenly over its block.
Image average_pool_adjoint(const Image& grad, int in_width, int in_height);

/// Cosine-weighted hemispherical averaging on a fixed equirectangular grid:
///
///   D(i) = sum_{w in hemisphere(n_i)} H(w) s(w) (w . n_i) / K_i,
///   K_i  = sum_{w in hemisphere(n_i)} s(w),
///
/// where the hemisphere keeps directions with w . n_i > 0 strictly. A uniform
/// map c therefore yields c / 2, not c.
///
/// Weights depend only on (row_i, row_j, column offset) and every sum runs
/// over column offsets in the same order, so shifting the input by whole
/// columns shifts the output bit-exactly.
class DiffuseConvolver {
public:
    DiffuseConvolver(int width, int height);

    int width() const { return width_; }
    int height() const { return height_; }

    /// Input must already be at the convolver's resolution.
    Image apply(const Image& radiance) const;
    /// Transpose of apply.
    Image adjoint(const Image& grad) const;

    double normaliser(int row) const { return k_[static_cast<std::size_t>(row)]; }

private:
    double weight(int vi, int vj, int du) const
    {
        return weights_[(static_cast<std::size_t>(vi) * height_ + vj) * width_ + du];
    }

    int width_;
    int height_;
    std::vector<double> weights_; // s_j (w_j . n_i) / K_i, or 0 outside the hemisphere
    std::vector<double> k_;
};

/// Average-pools an HDR panorama to the work resolution and convolves it.
PanoramaImage diffuse_convolve(const PanoramaImage& radiance, int work_width = kDefaultWorkWidth,
                               int work_height = kDefaultWorkHeight);

enum class Material { Mirror, Diffuse };

Material parse_material(const std::string& name);

struct RelightOptions {
    Material material = Material::Mirror;
    int size = 256;
    double exposure = 1.0;
    double gamma = kGamma;
    int work_width = kDefaultWorkWidth;
    int work_height = kDefaultWorkHeight;
};

/// Orthographic view of a unit sphere lit by `radiance`, as RGBA in [0, 1].
/// The view frame has x right, y up and z toward the viewer; rays travel
/// along -z. It maps onto the locale frame with y -> up and z -> azimuth_ref,
/// so the viewer stands on the phi = 0 side looking horizontally. Pixels
/// outside the sphere have alpha 0.
Image relight_sphere(const PanoramaImage& radiance, const RelightOptions& options = {});

} // namespace illumkit
