#include "illumkit/panorama.hpp"

#include "doctest.h"

#include <cmath>
#include <random>

using namespace illumkit;

namespace {

double angle_between(const Eigen::Vector3d& a, const Eigen::Vector3d& b)
{
    return std::atan2(a.cross(b).norm(), a.dot(b));
}

} // namespace

TEST_CASE("pixel_to_direction follows the locale frame")
{
    PanoramaImage pano(320, 160, 3, PixelKind::HdrRadiance, Locale::make({0, 0, 0}, {0, 0, 1}, Eigen::Vector3d(1, 0, 0)));
    const EquirectGrid grid = pano.grid();

    SUBCASE("top row sits half a pixel from the up axis")
    {
        for (int u : {0, 17, 319}) {
            Eigen::Vector3d d = pixel_to_direction(u, 0, pano);
            CHECK(angle_between(d, Eigen::Vector3d::UnitZ()) == doctest::Approx(0.5 * kPi / 160).epsilon(1e-12));
        }
    }
    SUBCASE("phi = 0 on the equator is the azimuth reference")
    {
        Eigen::Vector3d d = grid.direction_at(0.0, 80.0);
        CHECK((d - Eigen::Vector3d(1, 0, 0)).norm() < 1e-12);
    }
    SUBCASE("phi = pi/2 is up x azimuth_ref")
    {
        Eigen::Vector3d d = grid.direction_at(80.0, 80.0);
        CHECK((d - Eigen::Vector3d(0, 1, 0)).norm() < 1e-12);
    }
    SUBCASE("outputs are unit length")
    {
        for (int v = 0; v < 160; v += 7)
            for (int u = 0; u < 320; u += 11)
                CHECK(std::abs(pixel_to_direction(u, v, pano).norm() - 1.0) < 1e-15);
    }
    SUBCASE("out-of-range indices throw")
    {
        CHECK_THROWS_AS(pixel_to_direction(320, 0, pano), IndexError);
        CHECK_THROWS_AS(pixel_to_direction(0, -1, pano), IndexError);
        CHECK_THROWS_AS(solid_angle(160, pano), IndexError);
    }
}

TEST_CASE("pixel -> direction -> pixel is the identity on a 16x32 grid")
{
    Locale tilted = Locale::make({1, 2, 3}, Eigen::Vector3d(0.3, -0.2, 1.0));
    EquirectGrid grid(32, 16, tilted);
    for (int v = 0; v < 16; ++v)
        for (int u = 0; u < 32; ++u) {
            Eigen::Vector3d d = grid.pixel_to_direction(u, v);
            auto [uu, vv] = grid.direction_to_index(d);
            CHECK(uu == u);
            CHECK(vv == v);
            PixelCoord p = grid.direction_to_pixel(d);
            CHECK(std::abs(p.u - (u + 0.5)) < 1e-9);
            CHECK(std::abs(p.v - (v + 0.5)) < 1e-9);
        }
}

TEST_CASE("direction_to_pixel boundaries and errors")
{
    Locale frame = Locale::make({0, 0, 0}, Eigen::Vector3d(0, 1, 1));
    EquirectGrid grid(320, 160, frame);
    PixelCoord top = grid.direction_to_pixel(frame.up);
    CHECK(top.v >= 0.0);
    CHECK(top.v <= 0.5);
    PixelCoord bottom = grid.direction_to_pixel(-frame.up);
    CHECK(bottom.v >= 160 - 0.5);
    CHECK(bottom.v <= 160.0);
    CHECK_THROWS_AS(grid.direction_to_pixel(Eigen::Vector3d::Zero()), InvalidInput);
    CHECK_THROWS_AS(grid.direction_to_pixel(Eigen::Vector3d(NAN, 0, 0)), InvalidInput);

    // phi wraps: a direction just below phi = 2pi maps near the right edge
    Eigen::Vector3d d = frame.to_world({std::cos(-1e-6), std::sin(-1e-6), 0.0});
    PixelCoord p = grid.direction_to_pixel(d);
    CHECK(p.u < 320.0);
    CHECK(p.u > 319.9);
}

TEST_CASE("random directions round-trip within one pixel")
{
    std::mt19937_64 rng(11);
    std::normal_distribution<double> nd;
    const int h = 160;
    EquirectGrid grid(2 * h, h, Locale::make({0, 0, 0}, Eigen::Vector3d(0.1, 0.2, 0.9)));
    double worst = 0.0;
    for (int i = 0; i < 1000; ++i) {
        Eigen::Vector3d d = Eigen::Vector3d(nd(rng), nd(rng), nd(rng)).normalized();
        auto [u, v] = grid.direction_to_index(d);
        worst = std::max(worst, angle_between(d, grid.pixel_to_direction(u, v)));
    }
    CHECK(worst < kPi / h);
}

TEST_CASE("solid angles")
{
    const int h = 160, w = 320;
    EquirectGrid grid(w, h);
    double total = 0.0;
    for (int v = 0; v < h; ++v)
        total += w * grid.solid_angle(v);
    CHECK(std::abs(total - 4.0 * kPi) / (4.0 * kPi) < 1e-4);

    // with an even H the two middle rows straddle the equator; an odd H has a row on it
    EquirectGrid odd(2 * 81, 81);
    CHECK(odd.solid_angle(40) == doctest::Approx(2.0 * kPi * kPi / (162.0 * 81.0)).epsilon(1e-14));
    CHECK(grid.solid_angle(0) < grid.solid_angle(79));
    CHECK(grid.solid_angle(0) == doctest::Approx(grid.solid_angle(h - 1)).epsilon(1e-14));

    // error shrinks like 1/H^2
    auto rel_error = [](int hh) {
        EquirectGrid g(2 * hh, hh);
        double s = 0.0;
        for (int v = 0; v < hh; ++v)
            s += 2 * hh * g.solid_angle(v);
        return std::abs(s - 4.0 * kPi) / (4.0 * kPi);
    };
    CHECK(rel_error(40) / rel_error(80) == doctest::Approx(4.0).epsilon(0.01));
}

TEST_CASE("locale construction")
{
    Locale l = Locale::make({0, 0, 1}, Eigen::Vector3d(0, 0, 5));
    CHECK_NOTHROW(l.validate());
    CHECK((l.azimuth_ref - Eigen::Vector3d::UnitX()).norm() < 1e-15);

    Locale along_x = Locale::make({0, 0, 0}, Eigen::Vector3d(2, 0, 0));
    CHECK_NOTHROW(along_x.validate());
    CHECK((along_x.azimuth_ref - Eigen::Vector3d::UnitY()).norm() < 1e-15);

    std::mt19937_64 rng(3);
    std::normal_distribution<double> nd;
    for (int i = 0; i < 200; ++i) {
        Locale r = Locale::make({nd(rng), nd(rng), nd(rng)}, Eigen::Vector3d(nd(rng), nd(rng), nd(rng)),
                                Eigen::Vector3d(nd(rng), nd(rng), nd(rng)));
        CHECK_NOTHROW(r.validate());
    }
    CHECK_THROWS_AS(Locale::make({0, 0, 0}, Eigen::Vector3d::Zero()), InvalidInput);
    CHECK_THROWS_AS(Locale::make({0, 0, 0}, Eigen::Vector3d::UnitZ(), Eigen::Vector3d::UnitZ()), InvalidInput);
    CHECK_THROWS_AS(PanoramaImage(100, 40, 3, PixelKind::HdrRadiance), InvalidInput);
}

TEST_CASE("distortion grid geometry")
{
    const int h = 160, w = 320, k = 2;
    DistortionGrid grid = distortion_grid(w, h, k);
    EquirectGrid eq(w, h);
    const double delta = kPi / h;

    SUBCASE("centre sample is the pixel itself")
    {
        for (int v : {0, 1, 80, 159})
            for (int u : {0, 100, 319}) {
                PixelCoord c = grid.sample(u, v, 0, 0);
                CHECK(c.u == u);
                CHECK(c.v == v);
            }
    }
    SUBCASE("near the equator the grid is the identity stencil")
    {
        // rows 79/80 straddle the equator; the gnomonic deviation there is O(delta^2)
        for (int i : {-1, 1}) {
            PixelCoord p = grid.sample(40, 80, i, 0);
            CHECK(std::abs(p.u - (40 + i)) < 0.01);
            CHECK(std::abs(p.v - 80) < 0.01);
            PixelCoord q = grid.sample(40, 80, 0, i);
            CHECK(std::abs(q.u - 40) < 0.01);
            CHECK(std::abs(q.v - (80 + i)) < 0.01);
        }
    }
    SUBCASE("near the pole horizontal neighbours spread over several columns")
    {
        PixelCoord left = grid.sample(100, 1, -1, 0);
        PixelCoord right = grid.sample(100, 1, 1, 0);
        CHECK(right.u - 100 > 2.0);
        CHECK(100 - left.u > 2.0);
        // a tangent step delta along the horizontal east axis turns the azimuth by atan(delta / sin(theta))
        double expected = std::atan(delta / std::sin(1.5 * delta)) * w / (2.0 * kPi);
        CHECK(right.u - 100 == doctest::Approx(expected).epsilon(1e-6));
        CHECK(100 - left.u == doctest::Approx(expected).epsilon(1e-6));
    }
    SUBCASE("samples lie sqrt(i^2+j^2) * delta from the centre within 1%")
    {
        double worst = 0.0;
        for (int v = 0; v < h; v += 3)
            for (int u = 0; u < w; u += 37) {
                Eigen::Vector3d centre = eq.pixel_to_direction(u, v);
                for (int j = -k; j <= k; ++j)
                    for (int i = -k; i <= k; ++i) {
                        if (i == 0 && j == 0)
                            continue;
                        PixelCoord p = grid.sample(u, v, i, j);
                        Eigen::Vector3d d = eq.direction_at(p.u + 0.5, p.v + 0.5);
                        double expected = std::sqrt(double(i * i + j * j)) * delta;
                        worst = std::max(worst, std::abs(angle_between(centre, d) - expected) / expected);
                    }
            }
        CHECK(worst < 0.01);
    }
    CHECK_THROWS_AS(distortion_grid(w, h, 0), InvalidInput);
    CHECK_THROWS_AS(distortion_grid(8, 4, 2), InvalidInput);
}

TEST_CASE("roll and bilinear sampling")
{
    Image img(4, 2, 1);
    for (int x = 0; x < 4; ++x) {
        img.at(x, 0) = x;
        img.at(x, 1) = 10 + x;
    }
    Image r = roll_columns(img, 1);
    CHECK(r.at(0, 0) == 3);
    CHECK(r.at(1, 0) == 0);
    CHECK(roll_columns(r, -1) == img);
    CHECK(roll_columns(img, 5) == r);

    double out[1];
    sample_bilinear_wrap(img, 3.5, 0.0, out);
    CHECK(out[0] == doctest::Approx(1.5)); // halfway between column 3 and wrapped column 0
    sample_bilinear_wrap(img, 1.25, 0.5, out);
    CHECK(out[0] == doctest::Approx(6.25));
    sample_bilinear_clamp(img, 3.5, 2.0, out);
    CHECK(out[0] == doctest::Approx(13.0));
}

TEST_CASE("diffuse_fill")
{
    SUBCASE("a hole bounded by a constant fills to that constant")
    {
        Image img(40, 20, 1, 0.0);
        Mask known(40, 20, false);
        for (int y = 0; y < 20; ++y)
            for (int x = 0; x < 40; ++x)
                if (x < 5 || x >= 35 || y < 3 || y >= 17) {
                    img.at(x, y) = 2.0;
                    known.set(x, y, true);
                }
        FillStats stats = diffuse_fill(img, known);
        CHECK(stats.filled == 30u * 14u);
        for (double v : img.data())
            CHECK(std::abs(v - 2.0) < 1e-3);
    }
    SUBCASE("known pixels are untouched and linear data is reproduced")
    {
        Image img(16, 8, 1);
        Mask known(16, 8, false);
        for (int y = 0; y < 8; ++y) {
            img.at(0, y) = 1.0;
            img.at(15, y) = 2.5;
            known.set(0, y, true);
            known.set(15, y, true);
        }
        Image before = img;
        diffuse_fill(img, known, {1e-10, 20000, false});
        for (int y = 0; y < 8; ++y) {
            CHECK(img.at(0, y) == before.at(0, y));
            CHECK(img.at(15, y) == before.at(15, y));
            for (int x = 1; x < 15; ++x)
                CHECK(img.at(x, y) == doctest::Approx(1.0 + 0.1 * x).epsilon(1e-6));
        }
    }
    SUBCASE("no known pixels gives zeros")
    {
        Image img(8, 4, 2, 5.0);
        diffuse_fill(img, Mask(8, 4, false));
        for (double v : img.data())
            CHECK(v == 0.0);
    }
}
