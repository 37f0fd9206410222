#include "illumkit/metrics.hpp"

#include "illumkit/parallel.hpp"
#include "illumkit/warp.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>

namespace illumkit {

std::pair<int, int> resolve_work_dims(int width, int height, int work_width, int work_height)
{
    if (work_height >= height || work_width >= width)
        return {width, height};
    if (width % work_width != 0 || height % work_height != 0)
        throw InvalidInput("work resolution " + std::to_string(work_width) + "x" + std::to_string(work_height) +
                           " does not divide " + std::to_string(width) + "x" + std::to_string(height));
    return {work_width, work_height};
}

double weighted_l2(const Image& a, const Image& b)
{
    require_same_shape(a, b, "weighted_l2");
    EquirectGrid grid(a.width(), a.height());
    CompensatedSum num, den;
    for (int y = 0; y < a.height(); ++y) {
        double s = grid.solid_angle(y);
        CompensatedSum row;
        for (int x = 0; x < a.width(); ++x) {
            double d2 = 0.0;
            for (int c = 0; c < a.channels(); ++c) {
                double d = a.at(x, y, c) - b.at(x, y, c);
                d2 += d * d;
            }
            row.add(std::sqrt(d2));
        }
        num.add(s * row.value());
        den.add(s * a.width());
    }
    return num.value() / den.value();
}

EvalReport eval_illum(const PanoramaImage& pred, const PanoramaImage& gt, const EvalOptions& options)
{
    require_same_shape(pred.image(), gt.image(), "eval_illum");
    EvalReport report;
    Image aligned = pred.image();
    if (options.align) {
        const int w = pred.width();
        std::vector<double> scores(static_cast<std::size_t>(w));
        parallel_for(scores.size(), [&](std::size_t begin, std::size_t end) {
            for (std::size_t s = begin; s < end; ++s)
                scores[s] = weighted_l2(roll_columns(pred.image(), -static_cast<int>(s)), gt.image());
        });
        int best = static_cast<int>(std::min_element(scores.begin(), scores.end()) - scores.begin());
        aligned = roll_columns(pred.image(), -best);
        report.aligned = true;
        report.rotation_offset = best;
    }

    report.pixels = gt.image().pixel_count();
    report.l2 = weighted_l2(aligned, gt.image());
    report.l2_log = weighted_l2(log_scale(aligned), log_scale(gt.image()));

    auto [ww, wh] = resolve_work_dims(gt.width(), gt.height(), options.work_width, options.work_height);
    PanoramaImage aligned_pano(aligned, PixelKind::HdrRadiance, gt.frame());
    PanoramaImage dp = diffuse_convolve(aligned_pano, ww, wh);
    PanoramaImage dg = diffuse_convolve(gt, ww, wh);
    report.diffuse = weighted_l2(dp.image(), dg.image());
    report.diffuse_pixels = dg.image().pixel_count();
    report.work_width = ww;
    report.work_height = wh;
    return report;
}

double loss_l2_log(const Image& pred, const Image& gt)
{
    require_same_shape(pred, gt, "loss_l2_log");
    CompensatedSum s;
    for (std::size_t i = 0; i < pred.size(); ++i) {
        double d = std::log1p(pred.data()[i]) - std::log1p(gt.data()[i]);
        s.add(d * d);
    }
    return s.value() / static_cast<double>(pred.size());
}

Image loss_l2_log_grad(const Image& pred, const Image& gt)
{
    require_same_shape(pred, gt, "loss_l2_log_grad");
    Image g(pred.width(), pred.height(), pred.channels());
    const double scale = 2.0 / static_cast<double>(pred.size());
    for (std::size_t i = 0; i < pred.size(); ++i) {
        double h = pred.data()[i];
        g.data()[i] = scale * (std::log1p(h) - std::log1p(gt.data()[i])) / (1.0 + h);
    }
    return g;
}

double loss_l2_log_signed(const Image& pred, const Image& gt)
{
    require_same_shape(pred, gt, "loss_l2_log_signed");
    CompensatedSum s;
    for (std::size_t i = 0; i < pred.size(); ++i)
        s.add(std::log1p(pred.data()[i]) - std::log1p(gt.data()[i]));
    return s.value() / static_cast<double>(pred.size());
}

DiffuseLoss::DiffuseLoss(int input_width, int input_height, int work_width, int work_height)
    : in_w_(input_width), in_h_(input_height),
      conv_(resolve_work_dims(input_width, input_height, work_width, work_height).first,
            resolve_work_dims(input_width, input_height, work_width, work_height).second)
{
}

Image DiffuseLoss::convolve(const Image& h) const
{
    if (h.width() != in_w_ || h.height() != in_h_)
        throw DimensionMismatch("DiffuseLoss: input size differs from the configured size");
    if (conv_.width() == in_w_)
        return conv_.apply(h);
    return conv_.apply(average_pool(h, conv_.width(), conv_.height()));
}

double DiffuseLoss::value(const Image& pred, const Image& gt) const
{
    require_same_shape(pred, gt, "loss_diffuse");
    Image dp = convolve(pred);
    Image dg = convolve(gt);
    CompensatedSum s;
    for (std::size_t i = 0; i < dp.size(); ++i) {
        double d = dp.data()[i] - dg.data()[i];
        s.add(d * d);
    }
    return s.value() / static_cast<double>(dp.size());
}

Image DiffuseLoss::gradient(const Image& pred, const Image& gt) const
{
    require_same_shape(pred, gt, "loss_diffuse");
    Image dp = convolve(pred);
    Image dg = convolve(gt);
    const double scale = 2.0 / static_cast<double>(dp.size());
    for (std::size_t i = 0; i < dp.size(); ++i)
        dp.data()[i] = scale * (dp.data()[i] - dg.data()[i]);
    Image back = conv_.adjoint(dp);
    if (conv_.width() == in_w_)
        return back;
    return average_pool_adjoint(back, in_w_, in_h_);
}

double loss_diffuse(const Image& pred, const Image& gt, int work_width, int work_height)
{
    return DiffuseLoss(pred.width(), pred.height(), work_width, work_height).value(pred, gt);
}

double loss_total(double l2_log, double diffuse) { return kLambdaL2 * l2_log + kLambdaDiffuse * diffuse; }

double loss_total(const Image& pred, const Image& gt, int work_width, int work_height)
{
    return loss_total(loss_l2_log(pred, gt), loss_diffuse(pred, gt, work_width, work_height));
}

namespace {

void check_valid_extent(std::size_t a, std::size_t b, const Mask& valid, const char* what)
{
    std::size_t n = static_cast<std::size_t>(valid.width()) * valid.height();
    if (a != n || b != n)
        throw DimensionMismatch(std::string(what) + ": arrays do not match the validity mask");
    if (valid.count() == 0)
        throw InvalidInput(std::string(what) + ": no valid pixels");
}

template <typename F>
void for_valid(const Mask& valid, F&& f)
{
    for (int y = 0; y < valid.height(); ++y)
        for (int x = 0; x < valid.width(); ++x)
            if (valid(x, y))
                f(static_cast<std::size_t>(y) * valid.width() + x);
}

} // namespace

double loss_normals_cosine(std::span<const Eigen::Vector3d> pred, std::span<const Eigen::Vector3d> gt, const Mask& valid)
{
    check_valid_extent(pred.size(), gt.size(), valid, "loss_normals_cosine");
    CompensatedSum s;
    for_valid(valid, [&](std::size_t i) { s.add(1.0 - pred[i].dot(gt[i]) / (pred[i].norm() * gt[i].norm())); });
    return s.value() / static_cast<double>(valid.count());
}

std::vector<Eigen::Vector3d> loss_normals_cosine_grad(std::span<const Eigen::Vector3d> pred,
                                                      std::span<const Eigen::Vector3d> gt, const Mask& valid)
{
    check_valid_extent(pred.size(), gt.size(), valid, "loss_normals_cosine_grad");
    std::vector<Eigen::Vector3d> g(pred.size(), Eigen::Vector3d::Zero());
    const double inv_n = 1.0 / static_cast<double>(valid.count());
    for_valid(valid, [&](std::size_t i) {
        double na = pred[i].norm();
        double nb = gt[i].norm();
        double cosine = pred[i].dot(gt[i]) / (na * nb);
        g[i] = -inv_n * (gt[i] / (na * nb) - cosine * pred[i] / (na * na));
    });
    return g;
}

double loss_offsets_l1(std::span<const double> pred, std::span<const double> gt, const Mask& valid)
{
    check_valid_extent(pred.size(), gt.size(), valid, "loss_offsets_l1");
    CompensatedSum s;
    for_valid(valid, [&](std::size_t i) { s.add(std::abs(pred[i] - gt[i])); });
    return s.value() / static_cast<double>(valid.count());
}

double loss_points_l1(std::span<const Eigen::Vector3d> pred, std::span<const Eigen::Vector3d> gt, const Mask& valid)
{
    check_valid_extent(pred.size(), gt.size(), valid, "loss_points_l1");
    CompensatedSum s;
    for_valid(valid, [&](std::size_t i) { s.add((pred[i] - gt[i]).cwiseAbs().sum()); });
    return s.value() / static_cast<double>(valid.count());
}

GradCheckResult grad_check(const ScalarFn& f, const GradientFn& gradient, std::span<const double> x,
                           const GradCheckOptions& options)
{
    if (!(options.step >= 1e-7 && options.step <= 1e-3))
        throw InvalidInput("grad_check: step must lie in [1e-7, 1e-3]");
    if (x.empty())
        throw InvalidInput("grad_check: empty input");
    std::vector<double> g = gradient(x);
    if (g.size() != x.size())
        throw DimensionMismatch("grad_check: gradient size differs from input size");
    for (double v : g)
        if (!std::isfinite(v))
            throw InvalidInput("grad_check: analytic gradient is not finite");

    std::vector<std::size_t> order(x.size());
    std::iota(order.begin(), order.end(), std::size_t{0});
    if (order.size() > options.samples) {
        std::mt19937_64 rng(options.seed);
        std::shuffle(order.begin(), order.end(), rng);
        order.resize(options.samples);
    }

    GradCheckResult result;
    std::vector<double> probe(x.begin(), x.end());
    for (std::size_t i : order) {
        const double orig = probe[i];
        probe[i] = orig + options.step;
        double fp = f(probe);
        probe[i] = orig - options.step;
        double fm = f(probe);
        probe[i] = orig;
        if (!std::isfinite(fp) || !std::isfinite(fm))
            throw InvalidInput("grad_check: function value is not finite");
        double fd = (fp - fm) / (2.0 * options.step);
        double err = std::abs(g[i] - fd) / std::max(1.0, std::abs(fd));
        if (result.checked == 0 || err > result.max_error) {
            result.max_error = err;
            result.worst_index = i;
        }
        ++result.checked;
    }
    return result;
}

namespace {

Image random_image(int w, int h, int c, double lo, double hi, std::mt19937_64& rng)
{
    std::uniform_real_distribution<double> dist(lo, hi);
    Image img(w, h, c);
    for (double& v : img.data())
        v = dist(rng);
    return img;
}

Image wrap_span(std::span<const double> x, const Image& shape)
{
    Image img(shape.width(), shape.height(), shape.channels());
    std::copy(x.begin(), x.end(), img.data().begin());
    return img;
}

} // namespace

std::vector<NamedGradCheck> run_gradcheck_suite(std::uint64_t seed, double step)
{
    std::mt19937_64 rng(seed);
    GradCheckOptions opts;
    opts.step = step;
    opts.seed = seed;
    std::vector<NamedGradCheck> out;

    {
        Image pred = random_image(40, 20, 3, 0.0, 5.0, rng);
        Image gt = random_image(40, 20, 3, 0.0, 5.0, rng);
        auto f = [&](std::span<const double> x) { return loss_l2_log(wrap_span(x, pred), gt); };
        auto g = [&](std::span<const double> x) { return loss_l2_log_grad(wrap_span(x, pred), gt).data(); };
        out.push_back({"loss_l2_log", grad_check(f, g, pred.data(), opts)});
    }
    {
        Image pred = random_image(80, 40, 3, 0.0, 5.0, rng);
        Image gt = random_image(80, 40, 3, 0.0, 5.0, rng);
        DiffuseLoss loss(80, 40, 20, 10);
        auto f = [&](std::span<const double> x) { return loss.value(wrap_span(x, pred), gt); };
        auto g = [&](std::span<const double> x) { return loss.gradient(wrap_span(x, pred), gt).data(); };
        out.push_back({"loss_diffuse", grad_check(f, g, pred.data(), opts)});
    }
    {
        const int w = 24, h = 16;
        std::normal_distribution<double> nd(0.0, 1.0);
        std::vector<Eigen::Vector3d> pred(w * h), gt(w * h);
        for (auto& n : pred)
            n = Eigen::Vector3d(nd(rng), nd(rng), nd(rng)).normalized();
        for (auto& n : gt)
            n = Eigen::Vector3d(nd(rng), nd(rng), nd(rng)).normalized();
        Mask valid(w, h, true);
        auto unpack = [&](std::span<const double> x) {
            std::vector<Eigen::Vector3d> v(pred.size());
            for (std::size_t i = 0; i < v.size(); ++i)
                v[i] = {x[3 * i], x[3 * i + 1], x[3 * i + 2]};
            return v;
        };
        std::vector<double> x0;
        for (const auto& n : pred)
            x0.insert(x0.end(), {n.x(), n.y(), n.z()});
        auto f = [&](std::span<const double> x) { return loss_normals_cosine(unpack(x), gt, valid); };
        auto g = [&](std::span<const double> x) {
            std::vector<double> flat;
            for (const auto& v : loss_normals_cosine_grad(unpack(x), gt, valid))
                flat.insert(flat.end(), {v.x(), v.y(), v.z()});
            return flat;
        };
        out.push_back({"loss_normals_cosine", grad_check(f, g, x0, opts)});
    }
    {
        std::uniform_real_distribution<double> ud(-1.0, 1.0);
        std::uniform_real_distribution<double> radius(0.5, 3.0);
        GradCheckResult worst;
        for (int trial = 0; trial < 1000; ++trial) {
            Locale loc = Locale::make({ud(rng), ud(rng), ud(rng)},
                                      Eigen::Vector3d(0.2 * ud(rng), 0.2 * ud(rng), 1.0));
            Eigen::Vector3d dir;
            do {
                dir = Eigen::Vector3d(ud(rng), ud(rng), ud(rng));
            } while (dir.norm() < 0.2 || dir.norm() > 1.0 || std::abs(dir.normalized().dot(loc.up)) > 0.95);
            Eigen::Vector3d x0 = loc.position + radius(rng) * dir.normalized();
            auto jac = warp_jacobian(x0, loc);
            SphericalCoord ref = EquirectGrid(2, 1, loc).to_spherical(x0 - loc.position);
            for (int row = 0; row < 2; ++row) {
                auto f = [&](std::span<const double> x) {
                    Eigen::Vector3d p(x[0], x[1], x[2]);
                    SphericalCoord s = EquirectGrid(2, 1, loc).to_spherical(p - loc.position);
                    if (row == 1)
                        return s.theta;
                    // phi relative to the base point, continuous across the 0/2pi seam
                    return std::remainder(s.phi - ref.phi, 2.0 * kPi);
                };
                auto g = [&](std::span<const double>) {
                    return std::vector<double>{jac(row, 0), jac(row, 1), jac(row, 2)};
                };
                std::vector<double> xv{x0.x(), x0.y(), x0.z()};
                GradCheckResult r = grad_check(f, g, xv, opts);
                worst.checked += r.checked;
                if (r.max_error >= worst.max_error) {
                    worst.max_error = r.max_error;
                    worst.worst_index = static_cast<std::size_t>(trial * 6 + row * 3) + r.worst_index;
                }
            }
        }
        out.push_back({"warp_jacobian", worst});
    }
    return out;
}

} // namespace illumkit
