// Command-line front end: observation -> warp -> completion -> HDR -> evaluation.
#include "illumkit/completion.hpp"
#include "illumkit/geometry.hpp"
#include "illumkit/hdr.hpp"
#include "illumkit/ibr.hpp"
#include "illumkit/io.hpp"
#include "illumkit/metrics.hpp"
#include "illumkit/shading.hpp"
#include "illumkit/synthetic.hpp"
#include "illumkit/warp.hpp"

#include "CLI11.hpp"

#include <chrono>
#include <cstdio>
#include <functional>
#include <iostream>
#include <optional>
#include <string>

namespace {

using namespace illumkit;
namespace io = illumkit::io;
namespace fs = std::filesystem;
using nlohmann::json;

struct Resolution {
    int width = kDefaultPanoWidth;
    int height = kDefaultPanoHeight;
};

// "WxH" -> (W, H)
std::pair<int, int> parse_dims(const std::string& text)
{
    auto x = text.find('x');
    if (x == std::string::npos)
        throw InvalidInput("expected WxH, got '" + text + "'");
    try {
        std::size_t a = 0, b = 0;
        int w = std::stoi(text.substr(0, x), &a);
        int h = std::stoi(text.substr(x + 1), &b);
        if (a != x || b != text.size() - x - 1 || w < 1 || h < 1)
            throw InvalidInput("");
        return {w, h};
    } catch (const std::exception&) {
        throw InvalidInput("expected WxH, got '" + text + "'");
    }
}

std::pair<int, int> parse_pixel(const std::string& text)
{
    auto comma = text.find(',');
    if (comma == std::string::npos)
        throw InvalidInput("expected X,Y, got '" + text + "'");
    try {
        return {std::stoi(text.substr(0, comma)), std::stoi(text.substr(comma + 1))};
    } catch (const std::exception&) {
        throw InvalidInput("expected X,Y, got '" + text + "'");
    }
}

Resolution pano_resolution(const std::string& text)
{
    auto [w, h] = parse_dims(text);
    if (w != 2 * h)
        throw InvalidInput("panorama width must be twice its height, got " + text);
    return {w, h};
}

LabeledPointSet manifest_points(const io::SceneManifest& m)
{
    if (!m.points)
        throw InvalidInput("the manifest lists no labelled point set");
    return io::read_points(m.resolve(*m.points));
}

json locale_summary(const Locale& l) { return io::to_json(l); }

// --- subcommands ------------------------------------------------------------

struct GenLocales {
    std::string manifest, out;
    json run() const
    {
        auto m = io::read_manifest(manifest);
        auto locales = sample_locales(manifest_points(m));
        io::write_atomic(out, io::to_json(locales).dump(2) + "\n");
        return {{"locales", locales.size()}, {"output", out}};
    }
};

struct GenIllum {
    std::string manifest, out, locales_file, like, res = "320x160", distance_out;
    std::optional<int> locale_index;
    json run() const
    {
        auto m = io::read_manifest(manifest);
        Locale locale;
        if (!like.empty()) {
            if (locale_index)
                throw InvalidInput("use either --locale or --like, not both");
            locale = io::read_panorama(like).frame();
        } else {
            if (!locale_index)
                throw InvalidInput("gen-illum needs --locale or --like");
            std::vector<Locale> all =
                locales_file.empty() ? sample_locales(manifest_points(m)) : io::read_locales(locales_file);
            if (*locale_index < 0 || static_cast<std::size_t>(*locale_index) >= all.size())
                throw IndexError("locale index " + std::to_string(*locale_index) + " out of range (" +
                                 std::to_string(all.size()) + " locales)");
            locale = all[static_cast<std::size_t>(*locale_index)];
        }
        Resolution r = pano_resolution(res);
        auto views = io::load_views(m);
        DistanceMap dist = build_distance_map(views, locale, r.width, r.height);
        RenderedIllumination lit = render_illumination(views, locale, dist.distance);
        io::write_panorama(out, lit.radiance);
        if (!distance_out.empty())
            io::write_panorama(distance_out, dist.distance);
        return {{"output", out},
                {"locale", locale_summary(locale)},
                {"views_used", dist.views},
                {"observed_directions", dist.observed.count()},
                {"covered_pixels", lit.covered.count()},
                {"fill_iterations", dist.fill.iterations}};
    }
};

struct Warp {
    std::string manifest, pixel, out, res = "320x160";
    int image = 0;
    bool hdr = false;
    json run() const
    {
        auto m = io::read_manifest(manifest);
        if (image < 0 || static_cast<std::size_t>(image) >= m.images.size())
            throw IndexError("image index " + std::to_string(image) + " out of range");
        const io::ManifestImage& entry = m.images[static_cast<std::size_t>(image)];
        Camera cam = entry.camera;
        DepthImage depth = io::read_depth(m.resolve(entry.depth));
        if (depth.width != cam.width || depth.height != cam.height)
            throw DimensionMismatch("depth size differs from its camera");
        Image color = hdr ? io::read_pfm(m.resolve(entry.hdr)) : io::load_ldr(m, static_cast<std::size_t>(image));

        GeometryMap points = depth_to_points(depth, cam);
        GeometryMap planes = points_to_normals_offsets(points);
        auto [x, y] = parse_pixel(pixel);
        Locale locale = locale_from_pixel(planes, cam, x, y);

        Resolution r = pano_resolution(res);
        WarpRequest req;
        req.image = &color;
        req.geometry = &points;
        req.camera = cam;
        req.locale = locale;
        req.color_kind = hdr ? PixelKind::HdrRadiance : PixelKind::LdrColor;
        req.pano_width = r.width;
        req.pano_height = r.height;
        WarpedPanorama w = forward_warp(req);
        io::write_panorama(out, w.color);
        return {{"output", out}, {"locale", locale_summary(locale)}, {"observed_pixels", w.observed()}};
    }
};

struct Complete {
    std::string input, out, method = "mirror", library;
    json run() const
    {
        PanoramaImage color = io::read_panorama(input);
        WarpedPanorama partial = partial_from_color(color);
        json result = {{"output", out}, {"method", method}, {"observed_pixels", partial.observed()}};
        if (method == "mirror") {
            io::write_panorama(out, complete_mirror(partial));
        } else if (method == "nn") {
            if (library.empty())
                throw InvalidInput("--method nn needs --library");
            NnMatch match = complete_nn(partial, io::load_library(library));
            io::write_panorama(out, match.completed);
            result["match"] = {{"id", match.id}, {"shift", match.shift}, {"score", match.score}};
        } else {
            throw InvalidInput("unknown completion method '" + method + "' (expected nn or mirror)");
        }
        return result;
    }
};

struct Convert {
    std::string input, out;
    bool to_hdr = true;
    json run() const
    {
        PanoramaImage in = io::read_panorama_any(input, to_hdr ? PixelKind::LdrColor : PixelKind::HdrRadiance);
        MapConversion c = to_hdr ? ldr_to_hdr(in) : hdr_to_ldr(in);
        io::write_panorama(out, c.image);
        return {{"output", out}, {"clamped_values", c.clamped}};
    }
};

struct Diffuse {
    std::string input, out, work = "80x40";
    json run() const
    {
        PanoramaImage in = io::read_panorama(input);
        auto [w, h] = parse_dims(work);
        auto [ww, wh] = resolve_work_dims(in.width(), in.height(), w, h);
        io::write_panorama(out, diffuse_convolve(in, ww, wh));
        return {{"output", out}, {"work_resolution", {wh, ww}}};
    }
};

struct Relight {
    std::string input, out, material = "mirror";
    int size = 256;
    std::optional<double> exposure;
    json run() const
    {
        PanoramaImage in = io::read_panorama(input);
        RelightOptions opt;
        opt.material = parse_material(material);
        opt.size = size;
        opt.exposure = exposure ? *exposure : auto_exposure(in.image());
        io::write_png_rgba8(out, relight_sphere(in, opt));
        return {{"output", out}, {"exposure", opt.exposure}};
    }
};

struct Eval {
    std::string pred, gt, out, work = "80x40";
    bool align = false, signed_log = false;
    json run() const
    {
        PanoramaImage p = io::read_panorama_any(pred, PixelKind::HdrRadiance);
        PanoramaImage g = io::read_panorama_any(gt, PixelKind::HdrRadiance);
        EvalOptions opt;
        opt.align = align;
        std::tie(opt.work_width, opt.work_height) = parse_dims(work);
        EvalReport report = eval_illum(p, g, opt);
        json j = io::to_json(report);

        auto [ww, wh] = resolve_work_dims(g.width(), g.height(), opt.work_width, opt.work_height);
        Image aligned = report.aligned ? roll_columns(p.image(), -report.rotation_offset) : p.image();
        double l2_log = signed_log ? loss_l2_log_signed(aligned, g.image()) : loss_l2_log(aligned, g.image());
        double diffuse = loss_diffuse(aligned, g.image(), ww, wh);
        j["loss"] = {{"l2_log", l2_log},
                     {"l2_log_form", signed_log ? "signed mean of log differences" : "mean squared log difference"},
                     {"diffuse", diffuse},
                     {"total", loss_total(l2_log, diffuse)}};
        if (!out.empty())
            io::write_atomic(out, j.dump(2) + "\n");
        return j;
    }
};

struct Constant {
    std::string like, out;
    double value = 0.0;
    json run() const
    {
        PanoramaImage ref = io::read_panorama(like);
        PanoramaImage c(ref.width(), ref.height(), ref.channels(), ref.kind(), ref.frame(), value);
        io::write_panorama(out, c);
        return {{"output", out}, {"value", value}};
    }
};

struct GradCheck {
    std::uint64_t seed = 7;
    double step = 1e-5;
    json run() const
    {
        auto t0 = std::chrono::steady_clock::now();
        auto suite = run_gradcheck_suite(seed, step);
        double seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
        json checks = json::array();
        bool ok = true;
        for (const auto& c : suite) {
            checks.push_back({{"name", c.name},
                              {"max_error", c.result.max_error},
                              {"checked", c.result.checked},
                              {"tolerance", c.tolerance},
                              {"passed", c.passed()}});
            ok = ok && c.passed();
        }
        json j = {{"checks", checks}, {"passed", ok}, {"seconds", seconds}};
        if (!ok)
            throw std::runtime_error("gradient check failed: " + checks.dump());
        return j;
    }
};

struct SynthRoom {
    std::string dir, image_res = "320x256", pano_res = "320x160";
    json run() const
    {
        fs::path root(dir);
        auto [iw, ih] = parse_dims(image_res);
        Resolution pr = pano_resolution(pano_res);
        synthetic::BoxRoom room;
        auto cams = synthetic::room_cameras(room, iw, ih);

        io::SceneManifest m;
        m.scene_id = "synthetic-room";
        m.base_dir = root;
        for (std::size_t k = 0; k < cams.size(); ++k) {
            View v = synthetic::render_view(room, cams[k]);
            std::string stem = "view" + std::to_string(k);
            Image ldr = v.hdr;
            for (double& x : ldr.data())
                x = h_to_j(x).value;
            io::write_pfm(root / (stem + "_hdr.pfm"), v.hdr);
            io::write_png16(root / (stem + "_ldr.png"), ldr);
            io::write_depth(root / (stem + "_depth.pfm"), v.depth);
            m.images.push_back({stem + "_hdr.pfm", stem + "_ldr.png", stem + "_depth.pfm", cams[k]});
        }
        synthetic::RoomLayout layout = synthetic::room_points(room);
        io::write_points(root / "points.txt", layout.points);
        m.points = "points.txt";
        io::write_manifest(root / "scene.json", m);
        io::write_library(root / "library", synthetic::room_library(room, pr.width, pr.height));
        return {{"manifest", (root / "scene.json").string()},
                {"images", m.images.size()},
                {"points", layout.points.size()},
                {"library", (root / "library").string()}};
    }
};

void print_human(const json& j, const std::string& indent = "")
{
    for (auto it = j.begin(); it != j.end(); ++it) {
        if (it->is_object()) {
            std::cout << indent << it.key() << ":\n";
            print_human(*it, indent + "  ");
        } else {
            std::cout << indent << it.key() << ": " << (it->is_string() ? it->get<std::string>() : it->dump()) << "\n";
        }
    }
}

} // namespace

int main(int argc, char** argv)
{
    CLI::App app{"illumkit: locale-centred illumination maps from RGB-D observations"};
    app.require_subcommand(1);
    bool as_json = false;
    app.add_flag("--json", as_json, "Print a machine-readable JSON summary on stdout");

    std::function<json()> action;
    auto bind = [&](CLI::App* sub, auto& cmd) { sub->callback([&] { action = [&] { return cmd.run(); }; }); };

    GenLocales gen_locales;
    auto* s = app.add_subcommand("gen-locales", "Sample locales over the labelled points of a scene");
    s->add_option("manifest", gen_locales.manifest)->required();
    s->add_option("-o,--output", gen_locales.out)->required();
    bind(s, gen_locales);

    GenIllum gen_illum;
    s = app.add_subcommand("gen-illum", "Ground-truth illumination map by two-step image-based rendering");
    s->add_option("manifest", gen_illum.manifest)->required();
    s->add_option("--locale", gen_illum.locale_index, "Index into the locale list");
    s->add_option("--locales", gen_illum.locales_file, "Locale list (default: sampled from the scene points)");
    s->add_option("--like", gen_illum.like, "Use the locale stored with this panorama");
    s->add_option("--resolution", gen_illum.res, "Panorama size WxH")->capture_default_str();
    s->add_option("--distance-output", gen_illum.distance_out, "Also write the filled distance map");
    s->add_option("-o,--output", gen_illum.out)->required();
    bind(s, gen_illum);

    Warp warp;
    s = app.add_subcommand("warp", "Warp one observation onto the sphere around a selected pixel's locale");
    s->add_option("manifest", warp.manifest)->required();
    s->add_option("--image", warp.image)->capture_default_str();
    s->add_option("--pixel", warp.pixel, "Selected pixel X,Y")->required();
    s->add_option("--resolution", warp.res)->capture_default_str();
    s->add_flag("--hdr", warp.hdr, "Warp the HDR image instead of the LDR one");
    s->add_option("-o,--output", warp.out)->required();
    bind(s, warp);

    Complete complete;
    s = app.add_subcommand("complete", "Fill the unobserved part of a warped panorama");
    s->add_option("partial", complete.input)->required();
    s->add_option("--method", complete.method)->check(CLI::IsMember({"nn", "mirror"}))->capture_default_str();
    s->add_option("--library", complete.library, "Panorama library directory (nn)");
    s->add_option("-o,--output", complete.out)->required();
    bind(s, complete);

    Convert ldr2hdr;
    s = app.add_subcommand("ldr2hdr", "Map LDR values to radiance");
    s->add_option("input", ldr2hdr.input)->required();
    s->add_option("-o,--output", ldr2hdr.out)->required();
    bind(s, ldr2hdr);

    Convert hdr2ldr;
    hdr2ldr.to_hdr = false;
    s = app.add_subcommand("hdr2ldr", "Map radiance to LDR values");
    s->add_option("input", hdr2ldr.input)->required();
    s->add_option("-o,--output", hdr2ldr.out)->required();
    bind(s, hdr2ldr);

    Diffuse diffuse;
    s = app.add_subcommand("diffuse", "Diffuse convolution of an HDR panorama");
    s->add_option("input", diffuse.input)->required();
    s->add_option("--work", diffuse.work, "Work resolution WxH")->capture_default_str();
    s->add_option("-o,--output", diffuse.out)->required();
    bind(s, diffuse);

    Relight relight;
    s = app.add_subcommand("relight", "Render a mirror or diffuse sphere lit by an HDR panorama");
    s->add_option("input", relight.input)->required();
    s->add_option("--material", relight.material)->check(CLI::IsMember({"mirror", "diffuse"}))->capture_default_str();
    s->add_option("--size", relight.size)->capture_default_str();
    s->add_option("--exposure", relight.exposure, "Fixed exposure (default: 99th percentile maps to 1)");
    s->add_option("-o,--output", relight.out)->required();
    bind(s, relight);

    Eval eval;
    s = app.add_subcommand("eval", "Compare a predicted illumination map with the ground truth");
    s->add_option("prediction", eval.pred)->required();
    s->add_option("ground_truth", eval.gt)->required();
    s->add_flag("--align", eval.align, "Search the column rotation that best matches first");
    s->add_flag("--signed-log", eval.signed_log, "Report the log loss as a signed mean");
    s->add_option("--work", eval.work, "Diffuse work resolution WxH")->capture_default_str();
    s->add_option("-o,--output", eval.out, "Write the report JSON here");
    bind(s, eval);

    Constant constant;
    s = app.add_subcommand("constant", "Write a constant panorama shaped like another");
    s->add_option("like", constant.like)->required();
    s->add_option("--value", constant.value)->capture_default_str();
    s->add_option("-o,--output", constant.out)->required();
    bind(s, constant);

    GradCheck gradcheck;
    s = app.add_subcommand("gradcheck", "Finite-difference checks of every analytic gradient");
    s->add_option("--seed", gradcheck.seed)->capture_default_str();
    s->add_option("--step", gradcheck.step)->capture_default_str();
    bind(s, gradcheck);

    SynthRoom synth;
    s = app.add_subcommand("synth-room", "Write the synthetic room fixture (views, depth, points, library)");
    s->add_option("directory", synth.dir)->required();
    s->add_option("--image-resolution", synth.image_res)->capture_default_str();
    s->add_option("--panorama-resolution", synth.pano_res)->capture_default_str();
    bind(s, synth);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        return app.exit(e);
    }

    try {
        json result = action();
        if (as_json)
            std::cout << result.dump() << "\n";
        else
            print_human(result);
    } catch (const std::exception& e) {
        if (as_json)
            std::cout << json{{"error", e.what()}}.dump() << "\n";
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 0;
}
