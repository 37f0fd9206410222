#include "illumkit/hdr.hpp"

#include <algorithm>
#include <cmath>
#include <vector>

namespace illumkit {

CurveResult j_to_h(double j, const HdrCurveParams& p)
{
    CurveResult r;
    if (std::isnan(j))
        throw InvalidInput("j_to_h: NaN input");
    if (j < 0.0 || j > 1.0) {
        j = std::clamp(j, 0.0, 1.0);
        r.clamped = true;
    }
    double raw = j * p.full_scale;
    if (raw <= p.knee_raw)
        r.value = raw * p.lin_scale;
    else
        r.value = p.exp_scale * std::pow(p.exp_base, raw - p.knee_raw);
    return r;
}

CurveResult h_to_j(double h, const HdrCurveParams& p)
{
    if (!(h >= 0.0) || !std::isfinite(h))
        throw InvalidInput("h_to_j: radiance must be finite and non-negative");
    CurveResult r;
    double knee_value = p.knee_raw * p.lin_scale;
    double raw;
    if (h <= knee_value)
        raw = h / p.lin_scale;
    else
        raw = p.knee_raw + std::log(h / p.exp_scale) / std::log(p.exp_base);
    r.value = raw / p.full_scale;
    if (r.value > 1.0) {
        r.value = 1.0;
        r.clamped = true;
    }
    return r;
}

double max_radiance(const HdrCurveParams& params) { return j_to_h(1.0, params).value; }

MapConversion ldr_to_hdr(const PanoramaImage& ldr, const HdrCurveParams& params)
{
    MapConversion out{PanoramaImage(ldr.image(), PixelKind::HdrRadiance, ldr.frame()), 0};
    for (double& v : out.image.image().data()) {
        if (v == kUnobserved)
            throw InvalidInput("ldr_to_hdr: input contains unobserved pixels; complete it first");
        CurveResult r = j_to_h(v, params);
        v = r.value;
        out.clamped += r.clamped ? 1 : 0;
    }
    return out;
}

MapConversion hdr_to_ldr(const PanoramaImage& hdr, const HdrCurveParams& params)
{
    MapConversion out{PanoramaImage(hdr.image(), PixelKind::LdrColor, hdr.frame()), 0};
    for (double& v : out.image.image().data()) {
        CurveResult r = h_to_j(v, params);
        v = r.value;
        out.clamped += r.clamped ? 1 : 0;
    }
    return out;
}

Image log_scale(const Image& radiance)
{
    Image out = radiance;
    for (double& v : out.data())
        v = std::log1p(v);
    return out;
}

double gamma_view(double radiance, double exposure, double gamma)
{
    double x = std::clamp(exposure * radiance, 0.0, 1.0);
    return std::pow(x, 1.0 / gamma);
}

Image gamma_view(const Image& radiance, double exposure, double gamma)
{
    Image out = radiance;
    for (double& v : out.data())
        v = gamma_view(v, exposure, gamma);
    return out;
}

double auto_exposure(const Image& radiance, double percentile)
{
    std::vector<double> values = radiance.data();
    if (values.empty())
        return 1.0;
    percentile = std::clamp(percentile, 0.0, 100.0);
    auto k = static_cast<std::size_t>(std::ceil(percentile / 100.0 * static_cast<double>(values.size() - 1)));
    std::nth_element(values.begin(), values.begin() + static_cast<std::ptrdiff_t>(k), values.end());
    double level = values[k];
    if (!(level > 0.0)) {
        double peak = *std::max_element(values.begin(), values.end());
        return peak > 0.0 ? 1.0 / peak : 1.0;
    }
    return 1.0 / level;
}

} // namespace illumkit
