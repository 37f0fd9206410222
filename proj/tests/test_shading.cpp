#include "illumkit/shading.hpp"

#include "doctest.h"
#include "oracles.hpp"

#include <algorithm>
#include <cmath>
#include <random>

using namespace illumkit;

namespace {

Image random_image(int w, int h, int c, std::uint64_t seed)
{
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> ud(0.0, 2.0);
    Image img(w, h, c);
    for (double& v : img.data())
        v = ud(rng);
    return img;
}

} // namespace

TEST_CASE("constant environment maps to half its value")
{
    PanoramaImage c(320, 160, 3, PixelKind::HdrRadiance, {}, 0.8);
    PanoramaImage d = diffuse_convolve(c);
    CHECK(d.width() == 80);
    CHECK(d.height() == 40);
    for (double v : d.image().data())
        CHECK(std::abs(v - 0.4) / 0.4 < 0.005);
}

TEST_CASE("matches a brute-force sum at 10x20")
{
    Image h = random_image(20, 10, 3, 1);
    Image d = DiffuseConvolver(20, 10).apply(h);
    auto ref = oracle::brute_force_diffuse(h.data(), 20, 10, 3);
    double worst = 0.0;
    for (std::size_t i = 0; i < ref.size(); ++i)
        worst = std::max(worst, std::abs(ref[i] - d.data()[i]));
    CHECK(worst < 1e-12);
}

TEST_CASE("linearity and positivity")
{
    DiffuseConvolver conv(40, 20);
    Image a = random_image(40, 20, 3, 2), b = random_image(40, 20, 3, 3);
    Image mix(40, 20, 3);
    for (std::size_t i = 0; i < mix.size(); ++i)
        mix.data()[i] = 0.3 * a.data()[i] + 2.5 * b.data()[i];
    Image da = conv.apply(a), db = conv.apply(b), dm = conv.apply(mix);
    for (std::size_t i = 0; i < mix.size(); ++i) {
        double expect = 0.3 * da.data()[i] + 2.5 * db.data()[i];
        CHECK(std::abs(dm.data()[i] - expect) <= 1e-6 * std::abs(expect));
        CHECK(da.data()[i] >= 0.0);
    }
}

TEST_CASE("column shifts commute exactly")
{
    DiffuseConvolver conv(40, 20);
    Image h = random_image(40, 20, 3, 4);
    Image d = conv.apply(h);
    for (int k = 0; k < 40; ++k)
        CHECK(conv.apply(roll_columns(h, k)) == roll_columns(d, k));
}

TEST_CASE("single bright pixel")
{
    const int w = 40, hgt = 20, u0 = 13, v0 = 6;
    Image h(w, hgt, 1, 0.0);
    h.at(u0, v0) = 100.0;
    Image d = DiffuseConvolver(w, hgt).apply(h);
    double best = -1.0;
    int bu = -1, bv = -1;
    Eigen::Vector3d light = oracle::pano_direction(u0, v0, w, hgt);
    for (int v = 0; v < hgt; ++v)
        for (int u = 0; u < w; ++u) {
            if (d.at(u, v) > best) {
                best = d.at(u, v);
                bu = u;
                bv = v;
            }
            if (oracle::pano_direction(u, v, w, hgt).dot(light) <= 0.0)
                CHECK(d.at(u, v) == 0.0);
        }
    CHECK(bu == u0);
    CHECK(bv == v0);
}

TEST_CASE("adjoint is the transpose")
{
    DiffuseConvolver conv(24, 12);
    Image x = random_image(24, 12, 2, 5), y = random_image(24, 12, 2, 6);
    Image ax = conv.apply(x), aty = conv.adjoint(y);
    double lhs = 0.0, rhs = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        lhs += ax.data()[i] * y.data()[i];
        rhs += x.data()[i] * aty.data()[i];
    }
    CHECK(lhs == doctest::Approx(rhs).epsilon(1e-12));

    Image big = random_image(48, 24, 2, 7), small = random_image(12, 6, 2, 8);
    Image pooled = average_pool(big, 12, 6), spread = average_pool_adjoint(small, 48, 24);
    lhs = rhs = 0.0;
    for (std::size_t i = 0; i < pooled.size(); ++i)
        lhs += pooled.data()[i] * small.data()[i];
    for (std::size_t i = 0; i < big.size(); ++i)
        rhs += big.data()[i] * spread.data()[i];
    CHECK(lhs == doctest::Approx(rhs).epsilon(1e-12));
}

TEST_CASE("average_pool")
{
    Image img(4, 2, 1);
    for (int x = 0; x < 4; ++x) {
        img.at(x, 0) = x;
        img.at(x, 1) = x + 4;
    }
    Image p = average_pool(img, 2, 1);
    CHECK(p.at(0, 0) == 2.5);
    CHECK(p.at(1, 0) == 4.5);
    CHECK_THROWS_AS(average_pool(img, 3, 1), InvalidInput);
    CHECK_THROWS_AS(diffuse_convolve(PanoramaImage(40, 20, 3, PixelKind::HdrRadiance), 80, 40), InvalidInput);
}

TEST_CASE("sphere relighting")
{
    RelightOptions opt;
    opt.size = 64;
    PanoramaImage env(160, 80, 3, PixelKind::HdrRadiance, {}, 0.3);

    SUBCASE("constant mirror")
    {
        Image s = relight_sphere(env, opt);
        CHECK(s.channels() == 4);
        double expect = gamma_view(0.3);
        int inside = 0;
        for (int y = 0; y < 64; ++y)
            for (int x = 0; x < 64; ++x) {
                if (s.at(x, y, 3) == 0.0)
                    continue;
                ++inside;
                for (int c = 0; c < 3; ++c)
                    CHECK(s.at(x, y, c) == doctest::Approx(expect).epsilon(1e-12));
            }
        CHECK(inside > 3000); // pi/4 of 4096
        CHECK(s.at(0, 0, 3) == 0.0);
    }
    SUBCASE("constant diffuse")
    {
        opt.material = Material::Diffuse;
        Image s = relight_sphere(env, opt);
        double expect = gamma_view(0.15);
        for (int y = 0; y < 64; ++y)
            for (int x = 0; x < 64; ++x)
                if (s.at(x, y, 3) > 0.0)
                    CHECK(std::abs(s.at(x, y, 0) - expect) < 0.005 * expect);
    }
    SUBCASE("top light peaks at the top of the sphere")
    {
        PanoramaImage light(160, 80, 3, PixelKind::HdrRadiance, {}, 0.0);
        for (int v = 0; v < 4; ++v)
            for (int u = 0; u < 160; ++u)
                for (int c = 0; c < 3; ++c)
                    light.at(u, v, c) = 50.0;
        opt.material = Material::Diffuse;
        opt.exposure = 0.01;
        Image s = relight_sphere(light, opt);
        double best = -1.0;
        int by = -1;
        for (int y = 0; y < 64; ++y)
            for (int x = 0; x < 64; ++x)
                if (s.at(x, y, 3) > 0.0 && s.at(x, y, 0) > best) {
                    best = s.at(x, y, 0);
                    by = y;
                }
        CHECK(by <= 2);
        CHECK(s.at(32, 62, 0) < best);
    }
    CHECK(parse_material("mirror") == Material::Mirror);
    CHECK_THROWS_AS(parse_material("glossy"), InvalidInput);
}
