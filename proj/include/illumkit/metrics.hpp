// Evaluation metrics, training losses with analytic gradients, and a
// finite-difference gradient checker.
#pragma once

#include "illumkit/panorama.hpp"
#include "illumkit/shading.hpp"

#include <Eigen/Core>

#include <cstdint>
#include <functional>
#include <span>
#include <string>
#include <vector>

namespace illumkit {

inline constexpr double kLambdaL2 = 0.1;
inline constexpr double kLambdaDiffuse = 0.05;

struct EvalOptions {
    bool align = false;
    int work_width = kDefaultWorkWidth;
    int work_height = kDefaultWorkHeight;
};

/// Solid-angle weighted means of per-pixel Euclidean colour distances.
struct EvalReport {
    double l2_log = 0.0;  // on ln(1 + H)
    double l2 = 0.0;      // on H
    double diffuse = 0.0; // on D(H) at the work resolution
    std::size_t pixels = 0;
    std::size_t diffuse_pixels = 0;
    int work_width = 0;
    int work_height = 0;
    bool aligned = false;
    int rotation_offset = 0; // columns the prediction was rolled relative to the ground truth
};

/// Work resolution for diffuse metrics: the requested one when it divides the
/// input, the input itself when the request is not smaller. Throws otherwise.
std::pair<int, int> resolve_work_dims(int width, int height, int work_width, int work_height);

/// sum_i s_i |a_i - b_i| / sum_i s_i over an equirectangular grid.
double weighted_l2(const Image& a, const Image& b);

/// With options.align, the prediction is first un-rolled by the column shift
/// minimising weighted_l2 on linear radiance (ties: smallest shift).
EvalReport eval_illum(const PanoramaImage& pred, const PanoramaImage& gt, const EvalOptions& options = {});

/// Mean over all values of (ln(1+H) - ln(1+H*))^2.
double loss_l2_log(const Image& pred, const Image& gt);
Image loss_l2_log_grad(const Image& pred, const Image& gt);
/// The signed mean of ln(1+H) - ln(1+H*), as literally written; not a norm.
double loss_l2_log_signed(const Image& pred, const Image& gt);

/// Mean squared difference of diffuse-convolved maps at a work resolution,
/// with its gradient with respect to the prediction.
class DiffuseLoss {
public:
    DiffuseLoss(int input_width, int input_height, int work_width = kDefaultWorkWidth,
                int work_height = kDefaultWorkHeight);

    double value(const Image& pred, const Image& gt) const;
    Image gradient(const Image& pred, const Image& gt) const;

private:
    Image convolve(const Image& h) const;

    int in_w_, in_h_;
    DiffuseConvolver conv_;
};

double loss_diffuse(const Image& pred, const Image& gt, int work_width = kDefaultWorkWidth,
                    int work_height = kDefaultWorkHeight);

double loss_total(double l2_log, double diffuse);
double loss_total(const Image& pred, const Image& gt, int work_width = kDefaultWorkWidth,
                  int work_height = kDefaultWorkHeight);

/// mean(1 - cos(n_pred, n_gt)) over valid pixels. Throws InvalidInput when
/// no pixel is valid.
double loss_normals_cosine(std::span<const Eigen::Vector3d> pred, std::span<const Eigen::Vector3d> gt,
                           const Mask& valid);
std::vector<Eigen::Vector3d> loss_normals_cosine_grad(std::span<const Eigen::Vector3d> pred,
                                                      std::span<const Eigen::Vector3d> gt, const Mask& valid);

double loss_offsets_l1(std::span<const double> pred, std::span<const double> gt, const Mask& valid);
double loss_points_l1(std::span<const Eigen::Vector3d> pred, std::span<const Eigen::Vector3d> gt, const Mask& valid);

using ScalarFn = std::function<double(std::span<const double>)>;
using GradientFn = std::function<std::vector<double>(std::span<const double>)>;

struct GradCheckOptions {
    double step = 1e-5;
    std::size_t samples = 256;
    std::uint64_t seed = 1;
};

struct GradCheckResult {
    double max_error = 0.0; // max |g - g_fd| / max(1, |g_fd|)
    std::size_t checked = 0;
    std::size_t worst_index = 0;
};

/// Central differences at a random subset of entries (all of them when x has
/// fewer than options.samples). Throws InvalidInput for steps outside
/// [1e-7, 1e-3] and for non-finite values or gradients.
GradCheckResult grad_check(const ScalarFn& f, const GradientFn& gradient, std::span<const double> x,
                           const GradCheckOptions& options = {});

struct NamedGradCheck {
    std::string name;
    GradCheckResult result;
    double tolerance = 1e-4;
    bool passed() const { return result.max_error < tolerance; }
};

/// Gradient checks of loss_l2_log, loss_diffuse, loss_normals_cosine and
/// warp_jacobian on seeded random inputs.
std::vector<NamedGradCheck> run_gradcheck_suite(std::uint64_t seed = 7, double step = 1e-5);

} // namespace illumkit
