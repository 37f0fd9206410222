#include "illumkit/geometry.hpp"

#include "doctest.h"
#include "oracles.hpp"

#include <algorithm>
#include <cmath>
#include <random>

using namespace illumkit;

namespace {

Camera simple_camera(int w, int h, double f)
{
    Camera c;
    c.width = w;
    c.height = h;
    c.fx = c.fy = f;
    c.cx = w / 2.0;
    c.cy = h / 2.0;
    return c;
}

GeometryMap single_plane(const Camera& cam, const Eigen::Vector3d& n, double p)
{
    GeometryMap g(cam.width, cam.height);
    for (int y = 0; y < cam.height; ++y)
        for (int x = 0; x < cam.width; ++x) {
            g.normals[g.index(x, y)] = n;
            g.offsets[g.index(x, y)] = p;
            g.valid.set(x, y, true);
        }
    return g;
}

DepthImage to_depth(const std::vector<double>& d, int w, int h)
{
    DepthImage out(w, h);
    out.depth = d;
    return out;
}

} // namespace

TEST_CASE("pn_layer closed forms")
{
    Camera cam = simple_camera(4, 4, 2.0); // cx = cy = 2
    GeometryMap g = single_plane(cam, {0, 0, -1}, 2.0);
    GeometryMap out = pn_layer(g, cam);

    CHECK(out.valid(2, 2));
    CHECK((out.point(2, 2) - Eigen::Vector3d(0, 0, 2)).norm() < 1e-15);
    // x = 3 gives v = (0.5, 0, 1)
    CHECK((out.point(3, 2) - Eigen::Vector3d(1, 0, 2)).norm() < 1e-15);
    CHECK(max_plane_residual(out) < 1e-12);

    SUBCASE("grazing rays are masked")
    {
        GeometryMap graze = single_plane(cam, {1, 0, 0}, 1.0); // v . n = 0 at x = cx
        GeometryMap r = pn_layer(graze, cam);
        CHECK_FALSE(r.valid(2, 2));
        CHECK(r.valid(0, 2));
    }
    SUBCASE("planes behind the camera are masked")
    {
        GeometryMap behind = single_plane(cam, {0, 0, -1}, -2.0);
        CHECK(pn_layer(behind, cam).valid.count() == 0);
    }
    SUBCASE("homogeneous in the offset")
    {
        GeometryMap scaled = single_plane(cam, Eigen::Vector3d(0.2, -0.3, -1).normalized(), 2.0 * 3.5);
        GeometryMap base = single_plane(cam, Eigen::Vector3d(0.2, -0.3, -1).normalized(), 2.0);
        GeometryMap a = pn_layer(scaled, cam), b = pn_layer(base, cam);
        for (int y = 0; y < 4; ++y)
            for (int x = 0; x < 4; ++x)
                CHECK((a.point(x, y) - 3.5 * b.point(x, y)).norm() < 1e-12);
    }
    CHECK_THROWS_AS(pn_layer(GeometryMap(3, 3), cam), DimensionMismatch);
}

TEST_CASE("depth_to_points")
{
    Camera cam = simple_camera(8, 8, 3.0);
    DepthImage d(8, 8);
    d.at(4, 4) = 1.0;
    d.at(7, 4) = 2.0; // offset fx from the principal point
    GeometryMap g = depth_to_points(d, cam);
    CHECK(g.valid.count() == 2);
    CHECK((g.point(4, 4) - Eigen::Vector3d(0, 0, 1)).norm() < 1e-15);
    CHECK((g.point(7, 4) - Eigen::Vector3d(2, 0, 2)).norm() < 1e-15);
    // reprojection returns the pixel
    Eigen::Vector2d px = cam.project(g.point(7, 4));
    CHECK(px.x() == doctest::Approx(7.0));
    CHECK(px.y() == doctest::Approx(4.0));
}

TEST_CASE("normals and offsets from analytic planes")
{
    Camera cam = simple_camera(32, 24, 20.0);

    SUBCASE("frontal plane")
    {
        auto depth = oracle::plane_scene_depth({{{0, 0, -1}, 2.0}}, 32, 24, cam.fx, cam.fy, cam.cx, cam.cy);
        GeometryMap g = points_to_normals_offsets(depth_to_points(to_depth(depth, 32, 24), cam));
        CHECK(g.valid.count() == 30u * 22u);
        for (int y = 1; y < 23; ++y)
            for (int x = 1; x < 31; ++x) {
                CHECK((g.normal(x, y) - Eigen::Vector3d(0, 0, -1)).norm() < 1e-6);
                CHECK(g.offset(x, y) == doctest::Approx(2.0).epsilon(1e-6));
            }
        CHECK_FALSE(g.valid(0, 5)); // border lacks a full window
    }
    SUBCASE("45 degree ramp")
    {
        // y + z = 3 in camera coordinates, facing the camera
        Eigen::Vector3d n = Eigen::Vector3d(0, -1, -1).normalized();
        double p = 3.0 / std::sqrt(2.0);
        auto depth = oracle::plane_scene_depth({{n, p}}, 32, 24, cam.fx, cam.fy, cam.cx, cam.cy);
        GeometryMap g = points_to_normals_offsets(depth_to_points(to_depth(depth, 32, 24), cam));
        REQUIRE(g.valid.count() > 0);
        for (int y = 1; y < 23; ++y)
            for (int x = 1; x < 31; ++x) {
                CHECK((g.normal(x, y) - n).norm() < 1e-3);
                CHECK(g.offset(x, y) == doctest::Approx(p).epsilon(1e-6));
            }
        CHECK(max_plane_residual(g) < 1e-6);
    }
}

TEST_CASE("noisy plane normals stay within a degree")
{
    Camera cam = simple_camera(80, 60, 40.0);
    Eigen::Vector3d n = Eigen::Vector3d(0.1, -0.2, -1.0).normalized();
    auto depth = oracle::plane_scene_depth({{n, 1.5}}, 80, 60, cam.fx, cam.fy, cam.cx, cam.cy);
    std::mt19937_64 rng(5);
    std::normal_distribution<double> noise(0.0, 0.001);
    for (double& z : depth)
        z += noise(rng);
    GeometryMap g = points_to_normals_offsets(depth_to_points(to_depth(depth, 80, 60), cam));
    std::vector<double> errors;
    for (int y = 0; y < 60; ++y)
        for (int x = 0; x < 80; ++x)
            if (g.valid(x, y))
                errors.push_back(std::acos(std::clamp(g.normal(x, y).dot(n), -1.0, 1.0)) * 180.0 / oracle::pi);
    REQUIRE(errors.size() > 1000);
    std::nth_element(errors.begin(), errors.begin() + errors.size() / 2, errors.end());
    CHECK(errors[errors.size() / 2] < 1.0);
}

TEST_CASE("three-plane round trip through the PN-layer")
{
    Camera cam = simple_camera(96, 72, 60.0);
    std::vector<oracle::Plane> planes = {
        {Eigen::Vector3d(0, 0, -1), 4.0},                      // back wall
        {Eigen::Vector3d(0, -1, -0.3).normalized(), 1.2},      // floor
        {Eigen::Vector3d(0.8, 0, -0.6).normalized(), 1.5},     // side wall
    };
    auto depth = oracle::plane_scene_depth(planes, 96, 72, cam.fx, cam.fy, cam.cx, cam.cy);
    GeometryMap pts = depth_to_points(to_depth(depth, 96, 72), cam);
    GeometryMap planes_est = points_to_normals_offsets(pts);
    GeometryMap back = pn_layer(planes_est, cam);
    CHECK(max_plane_residual(back) < 1e-6);

    std::size_t good = 0, total = 0;
    for (int y = 0; y < 72; ++y)
        for (int x = 0; x < 96; ++x) {
            if (!pts.valid(x, y))
                continue;
            ++total;
            if (back.valid(x, y) && (back.point(x, y) - pts.point(x, y)).norm() < 1e-4)
                ++good;
        }
    CHECK(total > 0);
    CHECK(double(good) / total >= 0.95); // borders lose their full window
}

TEST_CASE("camera pose validation and look_at")
{
    Camera cam = Camera::look_at(64, 48, 32, {0, 0, 1}, {1, 0, 1});
    CHECK_NOTHROW(cam.validate());
    // forward is +z in camera, image down is world -z
    CHECK((cam.rotation() * Eigen::Vector3d::UnitZ() - Eigen::Vector3d::UnitX()).norm() < 1e-12);
    CHECK((cam.rotation() * Eigen::Vector3d::UnitY() + Eigen::Vector3d::UnitZ()).norm() < 1e-12);
    Eigen::Vector3d w(3, 0.5, 0.2);
    CHECK((cam.to_world(cam.to_camera(w)) - w).norm() < 1e-12);

    Camera bad = cam;
    bad.cam_to_world(0, 0) = 2.0;
    CHECK_THROWS_AS(bad.validate(), InvalidInput);
    bad = cam;
    bad.fx = 0.0;
    CHECK_THROWS_AS(bad.validate(), InvalidInput);
    bad = cam;
    bad.cam_to_world.block<3, 1>(0, 0) *= -1.0; // reflection
    CHECK_THROWS_AS(bad.validate(), InvalidInput);
}
