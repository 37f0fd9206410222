#include "illumkit/completion.hpp"

#include "doctest.h"

#include <cmath>
#include <random>

using namespace illumkit;

namespace {

PanoramaImage random_ldr(int w, int h, std::uint64_t seed)
{
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> ud(0.0, 1.0);
    PanoramaImage p(w, h, 3, PixelKind::LdrColor);
    for (double& v : p.image().data())
        v = ud(rng);
    return p;
}

// Keeps the pixels where keep(u, v) holds and marks the rest unobserved.
template <class Keep>
WarpedPanorama punch(const PanoramaImage& full, Keep keep)
{
    PanoramaImage c = full;
    for (int v = 0; v < c.height(); ++v)
        for (int u = 0; u < c.width(); ++u)
            if (!keep(u, v))
                for (int ch = 0; ch < c.channels(); ++ch)
                    c.at(u, v, ch) = kUnobserved;
    return partial_from_color(c);
}

std::size_t sentinels(const PanoramaImage& p)
{
    std::size_t n = 0;
    for (double v : p.image().data())
        n += v == kUnobserved;
    return n;
}

} // namespace

TEST_CASE("observed mask")
{
    PanoramaImage p(4, 2, 3, PixelKind::LdrColor, {}, kUnobserved);
    p.at(1, 1, 2) = 0.0; // one live channel is enough
    Mask m = observed_mask(p.image());
    CHECK(m.count() == 1);
    CHECK(m(1, 1));
}

TEST_CASE("nearest-neighbour completion")
{
    PanoramaImage src = random_ldr(64, 32, 1);
    PanoLibrary lib{{{"other", random_ldr(64, 32, 2)}, {"source", src}}};

    SUBCASE("exact match")
    {
        auto partial = punch(src, [](int u, int v) { return u < 20 && v > 10; });
        NnMatch m = complete_nn(partial, lib);
        CHECK(m.id == "source");
        CHECK(m.index == 1);
        CHECK(m.shift == 0);
        CHECK(m.score == 0.0);
        CHECK(m.completed.image() == src.image());
        CHECK(m.completed.kind() == PixelKind::LdrColor);
    }
    SUBCASE("planted rotation of 37 columns")
    {
        PanoramaImage rotated(roll_columns(src.image(), 37), PixelKind::LdrColor);
        auto partial = punch(rotated, [](int u, int v) { return (u + v) % 3 == 0; });
        NnMatch m = complete_nn(partial, lib);
        CHECK(m.shift == 37);
        CHECK(m.score == 0.0);
        CHECK(m.completed.image() == rotated.image());
        CHECK(sentinels(m.completed) == 0);
    }
    SUBCASE("score is invariant to rolling the partial")
    {
        PanoramaImage noisy = src;
        for (double& v : noisy.image().data())
            v = std::clamp(v + 0.05 * std::sin(v * 40.0), 0.0, 1.0);
        auto a = punch(noisy, [](int u, int) { return u < 30; });
        PanoramaImage rolled(roll_columns(noisy.image(), 11), PixelKind::LdrColor);
        auto b = punch(rolled, [](int u, int) { return u >= 11 && u < 41; });
        NnMatch ma = complete_nn(a, lib), mb = complete_nn(b, lib);
        CHECK(std::abs(ma.score - mb.score) < 1e-12);
        CHECK((mb.shift - ma.shift + 64) % 64 == 11);
    }
    SUBCASE("the closer colour wins")
    {
        PanoramaImage dark(64, 32, 3, PixelKind::LdrColor, {}, 0.2);
        PanoramaImage light(64, 32, 3, PixelKind::LdrColor, {}, 0.7);
        PanoramaImage obs(64, 32, 3, PixelKind::LdrColor, {}, 0.6);
        PanoLibrary two{{{"dark", dark}, {"light", light}}};
        NnMatch m = complete_nn(punch(obs, [](int u, int) { return u == 3; }), two);
        CHECK(m.id == "light");
        CHECK(m.shift == 0); // every shift ties; the smallest is kept
        CHECK(m.completed.at(10, 10, 0) == 0.7);
        CHECK(m.completed.at(3, 10, 0) == 0.6);
    }
    CHECK_THROWS_AS(complete_nn(partial_from_color(src), PanoLibrary{}), InvalidInput);
    CHECK_THROWS_AS(complete_nn(punch(src, [](int, int) { return false; }), lib), InvalidInput);
    PanoLibrary bad{{{"x", PanoramaImage(32, 16, 3, PixelKind::LdrColor)}}};
    CHECK_THROWS(complete_nn(partial_from_color(src), bad));
}

TEST_CASE("mirror completion")
{
    PanoramaImage src = random_ldr(64, 32, 3);

    SUBCASE("left half observed")
    {
        PanoramaImage out = complete_mirror(punch(src, [](int u, int) { return u < 32; }));
        for (int v = 0; v < 32; ++v)
            for (int u = 0; u < 64; ++u)
                for (int c = 0; c < 3; ++c)
                    CHECK(out.at(u, v, c) == src.at(u < 32 ? u : 63 - u, v, c));
    }
    SUBCASE("identity on complete input")
    {
        CHECK(complete_mirror(partial_from_color(src)).image() == src.image());
    }
    SUBCASE("single observed column")
    {
        const int u0 = 9;
        PanoramaImage out = complete_mirror(punch(src, [](int u, int) { return u == u0; }));
        CHECK(sentinels(out) == 0);
        for (int v = 0; v < 32; ++v) {
            for (int c = 0; c < 3; ++c) {
                CHECK(out.at(u0, v, c) == src.at(u0, v, c));
                CHECK(out.at(63 - u0, v, c) == src.at(u0, v, c));
            }
            // filled values stay inside the observed column's range on their row
            for (int u = 0; u < 64; ++u) {
                double x = out.at(u, v, 0);
                CHECK(x >= -1e-12);
                CHECK(x <= 1.0 + 1e-12);
            }
        }
        // smooth: the interior column halfway between the two sources is near their row value
        for (int v = 0; v < 32; ++v)
            CHECK(std::abs(out.at(31, v, 1) - out.at(32, v, 1)) < 0.1);
    }
    SUBCASE("observed pixels survive bit-exactly")
    {
        auto partial = punch(src, [](int u, int v) { return (u * 7 + v * 3) % 5 == 0; });
        PanoramaImage out = complete_mirror(partial);
        CHECK(sentinels(out) == 0);
        for (int v = 0; v < 32; ++v)
            for (int u = 0; u < 64; ++u)
                if (partial.mask(u, v))
                    CHECK(out.at(u, v, 2) == src.at(u, v, 2));
    }
}
