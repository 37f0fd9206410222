// LDR <-> HDR intensity curve.
//
// Normalised values J in [0, 1] correspond to raw 16-bit counts J * 65536.
// Below the knee (3000 counts) radiance is linear in counts; above it it grows
// exponentially. Both branches equal 2.4e-4 at the knee.
#pragma once

#include "illumkit/panorama.hpp"

#include <cstddef>

namespace illumkit {

struct HdrCurveParams {
    double knee_raw = 3000.0;
    double lin_scale = 8e-8;
    double exp_base = 1.0002;
    double exp_scale = 2.4e-4;
    double full_scale = 65536.0;
};

inline constexpr double kGamma = 3.3;

struct CurveResult {
    double value = 0.0;
    bool clamped = false; // input was outside the curve's domain or range
};

/// Radiance for normalised value J. J outside [0, 1] is clamped and flagged.
CurveResult j_to_h(double j, const HdrCurveParams& params = {});

/// Exact inverse of j_to_h. Radiance above j_to_h(1) saturates to 1 and is
/// flagged. Negative or non-finite radiance throws InvalidInput.
CurveResult h_to_j(double h, const HdrCurveParams& params = {});

/// Largest radiance the curve can represent, j_to_h(1).
double max_radiance(const HdrCurveParams& params = {});

struct MapConversion {
    PanoramaImage image;
    std::size_t clamped = 0;
};

/// Elementwise j_to_h on an LDR panorama. Negative sentinels are rejected.
MapConversion ldr_to_hdr(const PanoramaImage& ldr, const HdrCurveParams& params = {});
/// Elementwise h_to_j on an HDR panorama.
MapConversion hdr_to_ldr(const PanoramaImage& hdr, const HdrCurveParams& params = {});

/// ln(1 + H) elementwise.
Image log_scale(const Image& radiance);

/// clamp(exposure * H, 0, 1)^(1/gamma).
double gamma_view(double radiance, double exposure = 1.0, double gamma = kGamma);
Image gamma_view(const Image& radiance, double exposure = 1.0, double gamma = kGamma);

/// Exposure that maps the given percentile (0-100) of all channel values to
/// 1.0; returns 1 for an all-zero image.
double auto_exposure(const Image& radiance, double percentile = 99.0);

} // namespace illumkit
