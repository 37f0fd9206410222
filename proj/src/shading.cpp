#include "illumkit/shading.hpp"

#include "illumkit/parallel.hpp"

#include <cmath>

namespace illumkit {

Image average_pool(const Image& in, int out_width, int out_height)
{
    if (out_width < 1 || out_height < 1 || in.width() % out_width != 0 || in.height() % out_height != 0)
        throw InvalidInput("average_pool: " + std::to_string(in.width()) + "x" + std::to_string(in.height()) +
                           " is not a whole multiple of " + std::to_string(out_width) + "x" +
                           std::to_string(out_height));
    const int bx = in.width() / out_width;
    const int by = in.height() / out_height;
    const double inv = 1.0 / (bx * by);
    Image out(out_width, out_height, in.channels());
    for (int y = 0; y < out_height; ++y)
        for (int x = 0; x < out_width; ++x)
            for (int c = 0; c < in.channels(); ++c) {
                double s = 0.0;
                for (int dy = 0; dy < by; ++dy)
                    for (int dx = 0; dx < bx; ++dx)
                        s += in.at(x * bx + dx, y * by + dy, c);
                out.at(x, y, c) = s * inv;
            }
    return out;
}

Image average_pool_adjoint(const Image& grad, int in_width, int in_height)
{
    if (grad.width() < 1 || grad.height() < 1 || in_width % grad.width() != 0 || in_height % grad.height() != 0)
        throw InvalidInput("average_pool_adjoint: incompatible dimensions");
    const int bx = in_width / grad.width();
    const int by = in_height / grad.height();
    const double inv = 1.0 / (bx * by);
    Image out(in_width, in_height, grad.channels());
    for (int y = 0; y < in_height; ++y)
        for (int x = 0; x < in_width; ++x)
            for (int c = 0; c < grad.channels(); ++c)
                out.at(x, y, c) = grad.at(x / bx, y / by, c) * inv;
    return out;
}

namespace {

// Pairs exactly 90 degrees apart evaluate to +-1e-17; they belong to neither hemisphere.
constexpr double kHemisphereEpsilon = 1e-12;

} // namespace

DiffuseConvolver::DiffuseConvolver(int width, int height) : width_(width), height_(height)
{
    EquirectGrid grid(width, height);
    weights_.assign(static_cast<std::size_t>(height) * height * width, 0.0);
    k_.assign(static_cast<std::size_t>(height), 0.0);

    std::vector<double> cos_dphi(static_cast<std::size_t>(width));
    for (int du = 0; du < width; ++du)
        cos_dphi[static_cast<std::size_t>(du)] = std::cos(2.0 * kPi * du / width);

    for (int vi = 0; vi < height; ++vi) {
        double ti = grid.row_theta(vi);
        double si = std::sin(ti), ci = std::cos(ti);
        double k = 0.0;
        for (int vj = 0; vj < height; ++vj) {
            double tj = grid.row_theta(vj);
            double sj = std::sin(tj), cj = std::cos(tj);
            double omega = grid.solid_angle(vj);
            for (int du = 0; du < width; ++du) {
                double cosine = si * sj * cos_dphi[static_cast<std::size_t>(du)] + ci * cj;
                if (cosine > kHemisphereEpsilon) {
                    weights_[(static_cast<std::size_t>(vi) * height + vj) * width + du] = omega * cosine;
                    k += omega;
                }
            }
        }
        k_[static_cast<std::size_t>(vi)] = k;
        for (std::size_t t = 0; t < static_cast<std::size_t>(height) * width; ++t)
            weights_[static_cast<std::size_t>(vi) * height * width + t] /= k;
    }
}

Image DiffuseConvolver::apply(const Image& h) const
{
    if (h.width() != width_ || h.height() != height_)
        throw DimensionMismatch("DiffuseConvolver::apply: expected " + std::to_string(width_) + "x" +
                                std::to_string(height_) + " input");
    const int ch = h.channels();
    Image out(width_, height_, ch);
    parallel_for(static_cast<std::size_t>(width_) * height_, [&](std::size_t begin, std::size_t end) {
        std::vector<double> acc(static_cast<std::size_t>(ch));
        for (std::size_t i = begin; i < end; ++i) {
            int ui = static_cast<int>(i % width_);
            int vi = static_cast<int>(i / width_);
            std::fill(acc.begin(), acc.end(), 0.0);
            for (int vj = 0; vj < height_; ++vj)
                for (int du = 0; du < width_; ++du) {
                    double w = weight(vi, vj, du);
                    if (w == 0.0)
                        continue;
                    int uj = ui + du;
                    if (uj >= width_)
                        uj -= width_;
                    for (int c = 0; c < ch; ++c)
                        acc[static_cast<std::size_t>(c)] += w * h.at(uj, vj, c);
                }
            for (int c = 0; c < ch; ++c)
                out.at(ui, vi, c) = acc[static_cast<std::size_t>(c)];
        }
    });
    return out;
}

Image DiffuseConvolver::adjoint(const Image& g) const
{
    if (g.width() != width_ || g.height() != height_)
        throw DimensionMismatch("DiffuseConvolver::adjoint: wrong gradient size");
    const int ch = g.channels();
    Image out(width_, height_, ch);
    // out_j = sum_i A_ij g_i, evaluated as a gather over i so chunks stay disjoint
    parallel_for(static_cast<std::size_t>(width_) * height_, [&](std::size_t begin, std::size_t end) {
        std::vector<double> acc(static_cast<std::size_t>(ch));
        for (std::size_t j = begin; j < end; ++j) {
            int uj = static_cast<int>(j % width_);
            int vj = static_cast<int>(j / width_);
            std::fill(acc.begin(), acc.end(), 0.0);
            for (int vi = 0; vi < height_; ++vi)
                for (int ui = 0; ui < width_; ++ui) {
                    int du = uj - ui;
                    if (du < 0)
                        du += width_;
                    double w = weight(vi, vj, du);
                    if (w == 0.0)
                        continue;
                    for (int c = 0; c < ch; ++c)
                        acc[static_cast<std::size_t>(c)] += w * g.at(ui, vi, c);
                }
            for (int c = 0; c < ch; ++c)
                out.at(uj, vj, c) = acc[static_cast<std::size_t>(c)];
        }
    });
    return out;
}

PanoramaImage diffuse_convolve(const PanoramaImage& radiance, int work_width, int work_height)
{
    if (work_width > radiance.width() || work_height > radiance.height())
        throw InvalidInput("diffuse_convolve: work resolution exceeds the input");
    Image pooled = (work_width == radiance.width() && work_height == radiance.height())
                       ? radiance.image()
                       : average_pool(radiance.image(), work_width, work_height);
    DiffuseConvolver conv(work_width, work_height);
    return PanoramaImage(conv.apply(pooled), PixelKind::HdrRadiance, radiance.frame());
}

Material parse_material(const std::string& name)
{
    if (name == "mirror")
        return Material::Mirror;
    if (name == "diffuse")
        return Material::Diffuse;
    throw InvalidInput("unknown material '" + name + "' (expected mirror or diffuse)");
}

Image relight_sphere(const PanoramaImage& radiance, const RelightOptions& opt)
{
    if (opt.size < 1)
        throw InvalidInput("relight_sphere: output size must be positive");
    const Locale& frame = radiance.frame();
    PanoramaImage source = opt.material == Material::Diffuse
                               ? diffuse_convolve(radiance, opt.work_width, opt.work_height)
                               : radiance;
    const EquirectGrid grid = source.grid();
    const int ch = source.channels();

    // view x -> lateral, y -> up, z -> azimuth_ref
    auto view_to_world = [&](const Eigen::Vector3d& v) {
        return (v.x() * frame.lateral() + v.y() * frame.up + v.z() * frame.azimuth_ref).eval();
    };

    Image out(opt.size, opt.size, 4);
    std::vector<double> sample(static_cast<std::size_t>(ch));
    for (int py = 0; py < opt.size; ++py) {
        for (int px = 0; px < opt.size; ++px) {
            double x = 2.0 * (px + 0.5) / opt.size - 1.0;
            double y = 1.0 - 2.0 * (py + 0.5) / opt.size;
            double r2 = x * x + y * y;
            if (r2 > 1.0)
                continue;
            Eigen::Vector3d normal(x, y, std::sqrt(1.0 - r2));
            Eigen::Vector3d lookup;
            if (opt.material == Material::Mirror) {
                Eigen::Vector3d incoming(0.0, 0.0, -1.0);
                lookup = incoming - 2.0 * incoming.dot(normal) * normal;
            } else {
                lookup = normal;
            }
            PixelCoord p = grid.direction_to_pixel(view_to_world(lookup));
            sample_bilinear_wrap(source.image(), p.u - 0.5, p.v - 0.5, sample);
            for (int c = 0; c < 3; ++c)
                out.at(px, py, c) = gamma_view(sample[static_cast<std::size_t>(std::min(c, ch - 1))], opt.exposure, opt.gamma);
            out.at(px, py, 3) = 1.0;
        }
    }
    return out;
}

} // namespace illumkit
