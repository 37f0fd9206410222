#include "illumkit/io.hpp"

#include "illumkit/hdr.hpp"

#include <png.h>

#include <algorithm>
#include <bit>
#include <cerrno>
#include <cmath>
#include <cstdint>
#include <cstring>
#include <fstream>
#include <random>
#include <sstream>
#include <unistd.h>

namespace illumkit::io {

ParseError::ParseError(const std::string& source, std::size_t offset, const std::string& message)
    : std::runtime_error(source + ": byte " + std::to_string(offset) + ": " + message), offset_(offset)
{
}

void write_atomic(const fs::path& path, std::string_view bytes)
{
    fs::path dir = path.parent_path();
    if (!dir.empty())
        fs::create_directories(dir);
    std::random_device rd;
    fs::path tmp = path;
    tmp += ".tmp." + std::to_string(::getpid()) + "." + std::to_string(rd());
    {
        std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
        if (!out)
            throw std::runtime_error("cannot open " + tmp.string() + " for writing");
        out.write(bytes.data(), static_cast<std::streamsize>(bytes.size()));
        out.flush();
        if (!out) {
            out.close();
            fs::remove(tmp);
            throw std::runtime_error("failed writing " + tmp.string());
        }
    }
    std::error_code ec;
    fs::rename(tmp, path, ec);
    if (ec) {
        fs::remove(tmp);
        throw std::runtime_error("cannot move " + tmp.string() + " to " + path.string() + ": " + ec.message());
    }
}

std::string read_file(const fs::path& path)
{
    std::ifstream in(path, std::ios::binary);
    if (!in)
        throw std::runtime_error("cannot open " + path.string());
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

// --- PFM -------------------------------------------------------------------

std::string encode_pfm(const Image& image)
{
    if (image.channels() != 1 && image.channels() != 3)
        throw InvalidInput("PFM stores 1 or 3 channels, got " + std::to_string(image.channels()));
    std::string header = std::string(image.channels() == 3 ? "PF" : "Pf") + "\n" + std::to_string(image.width()) +
                         " " + std::to_string(image.height()) + "\n-1.0\n";
    std::string out = header;
    out.resize(header.size() + image.size() * 4);
    char* dst = out.data() + header.size();
    for (int y = image.height() - 1; y >= 0; --y)
        for (int x = 0; x < image.width(); ++x)
            for (int c = 0; c < image.channels(); ++c) {
                double v = image.at(x, y, c);
                if (std::isnan(v))
                    throw InvalidInput("PFM cannot store NaN (pixel " + std::to_string(x) + ", " + std::to_string(y) +
                                       ")");
                auto bits = std::bit_cast<std::uint32_t>(static_cast<float>(v));
                for (int b = 0; b < 4; ++b)
                    *dst++ = static_cast<char>((bits >> (8 * b)) & 0xFFu);
            }
    return out;
}

namespace {

class HeaderReader {
public:
    HeaderReader(std::string_view bytes, const std::string& source) : bytes_(bytes), source_(source) {}

    std::string token()
    {
        while (pos_ < bytes_.size() && std::isspace(static_cast<unsigned char>(bytes_[pos_])))
            ++pos_;
        std::size_t start = pos_;
        while (pos_ < bytes_.size() && !std::isspace(static_cast<unsigned char>(bytes_[pos_])))
            ++pos_;
        if (start == pos_)
            throw ParseError(source_, start, "unexpected end of header");
        last_ = start;
        return std::string(bytes_.substr(start, pos_ - start));
    }

    long integer()
    {
        std::string t = token();
        char* end = nullptr;
        long v = std::strtol(t.c_str(), &end, 10);
        if (*end != '\0' || v <= 0)
            throw ParseError(source_, last_, "expected a positive integer, got '" + t + "'");
        return v;
    }

    double real()
    {
        std::string t = token();
        char* end = nullptr;
        double v = std::strtod(t.c_str(), &end);
        if (*end != '\0' || v == 0.0 || !std::isfinite(v))
            throw ParseError(source_, last_, "expected a non-zero scale, got '" + t + "'");
        return v;
    }

    // exactly one whitespace byte separates the header from the raster
    std::size_t body_start()
    {
        if (pos_ >= bytes_.size() || !std::isspace(static_cast<unsigned char>(bytes_[pos_])))
            throw ParseError(source_, pos_, "missing whitespace after scale");
        return pos_ + 1;
    }

private:
    std::string_view bytes_;
    const std::string& source_;
    std::size_t pos_ = 0;
    std::size_t last_ = 0;
};

} // namespace

Image decode_pfm(std::string_view bytes, const std::string& source)
{
    HeaderReader header(bytes, source);
    std::string magic = header.token();
    int channels;
    if (magic == "PF")
        channels = 3;
    else if (magic == "Pf")
        channels = 1;
    else
        throw ParseError(source, 0, "bad magic '" + magic + "' (expected PF or Pf)");
    long w = header.integer();
    long h = header.integer();
    double scale = header.real();
    std::size_t start = header.body_start();
    const bool little = scale < 0.0;
    const std::size_t expected = static_cast<std::size_t>(w) * static_cast<std::size_t>(h) * channels * 4;
    if (bytes.size() - std::min(bytes.size(), start) < expected)
        throw ParseError(source, bytes.size(),
                         "truncated raster: need " + std::to_string(expected) + " bytes after offset " +
                             std::to_string(start));
    if (bytes.size() - start > expected)
        throw ParseError(source, start + expected, "trailing bytes after raster");

    Image img(static_cast<int>(w), static_cast<int>(h), channels);
    std::size_t pos = start;
    for (long y = h - 1; y >= 0; --y)
        for (long x = 0; x < w; ++x)
            for (int c = 0; c < channels; ++c, pos += 4) {
                std::uint32_t bits = 0;
                for (int b = 0; b < 4; ++b) {
                    auto byte = static_cast<std::uint32_t>(static_cast<unsigned char>(bytes[pos + b]));
                    bits |= little ? byte << (8 * b) : byte << (8 * (3 - b));
                }
                float v = std::bit_cast<float>(bits);
                if (std::isnan(v))
                    throw ParseError(source, pos, "NaN value in raster");
                img.at(static_cast<int>(x), static_cast<int>(y), c) = v;
            }
    return img;
}

void write_pfm(const fs::path& path, const Image& image) { write_atomic(path, encode_pfm(image)); }

Image read_pfm(const fs::path& path) { return decode_pfm(read_file(path), path.string()); }

// --- JSON helpers ----------------------------------------------------------

namespace {

json vec_json(const Eigen::Vector3d& v) { return json::array({v.x(), v.y(), v.z()}); }

Eigen::Vector3d json_vec(const json& j, const char* what)
{
    if (!j.is_array() || j.size() != 3)
        throw InvalidInput(std::string(what) + " must be an array of 3 numbers");
    return {j.at(0).get<double>(), j.at(1).get<double>(), j.at(2).get<double>()};
}

} // namespace

json to_json(const Locale& l)
{
    return {{"position", vec_json(l.position)}, {"up", vec_json(l.up)}, {"azimuth_ref", vec_json(l.azimuth_ref)}};
}

Locale locale_from_json(const json& j)
{
    Eigen::Vector3d pos = json_vec(j.at("position"), "locale.position");
    Eigen::Vector3d up = j.contains("up") ? json_vec(j.at("up"), "locale.up") : Eigen::Vector3d::UnitZ();
    std::optional<Eigen::Vector3d> ref;
    if (j.contains("azimuth_ref"))
        ref = json_vec(j.at("azimuth_ref"), "locale.azimuth_ref");
    return Locale::make(pos, up, ref);
}

json to_json(const Camera& c)
{
    json m = json::array();
    for (int r = 0; r < 4; ++r)
        for (int k = 0; k < 4; ++k)
            m.push_back(c.cam_to_world(r, k));
    return {{"fx", c.fx}, {"fy", c.fy}, {"cx", c.cx}, {"cy", c.cy}, {"width", c.width}, {"height", c.height},
            {"cam_to_world", m}};
}

Camera camera_from_json(const json& j)
{
    Camera c;
    c.fx = j.at("fx").get<double>();
    c.fy = j.at("fy").get<double>();
    c.cx = j.at("cx").get<double>();
    c.cy = j.at("cy").get<double>();
    c.width = j.at("width").get<int>();
    c.height = j.at("height").get<int>();
    const json& m = j.at("cam_to_world");
    if (!m.is_array() || m.size() != 16)
        throw InvalidInput("camera.cam_to_world must hold 16 numbers");
    for (int r = 0; r < 4; ++r)
        for (int k = 0; k < 4; ++k)
            c.cam_to_world(r, k) = m.at(static_cast<std::size_t>(4 * r + k)).get<double>();
    c.validate();
    return c;
}

json to_json(const std::vector<Locale>& locales)
{
    json arr = json::array();
    for (const auto& l : locales)
        arr.push_back(to_json(l));
    return {{"locales", arr}};
}

std::vector<Locale> read_locales(const fs::path& path)
{
    json j = json::parse(read_file(path));
    std::vector<Locale> out;
    for (const auto& l : j.at("locales"))
        out.push_back(locale_from_json(l));
    return out;
}

json to_json(const EvalReport& r)
{
    return {{"l2_log", r.l2_log},
            {"l2", r.l2},
            {"diffuse", r.diffuse},
            {"pixels", r.pixels},
            {"diffuse_pixels", r.diffuse_pixels},
            {"work_resolution", {r.work_height, r.work_width}},
            {"aligned", r.aligned},
            {"rotation_offset", r.rotation_offset},
            {"weighting", "solid-angle weighted mean of per-pixel Euclidean RGB distance"}};
}

// --- panoramas --------------------------------------------------------------

fs::path sidecar_path(const fs::path& pfm)
{
    fs::path p = pfm;
    p += ".json";
    return p;
}

void write_panorama(const fs::path& path, const PanoramaImage& pano)
{
    write_pfm(path, pano.image());
    json side = {{"kind", to_string(pano.kind())},
                 {"locale", to_json(pano.frame())},
                 {"resolution", {pano.height(), pano.width()}}};
    write_atomic(sidecar_path(path), side.dump(2) + "\n");
}

PanoramaImage read_panorama(const fs::path& path)
{
    Image img = read_pfm(path);
    PixelKind kind = PixelKind::HdrRadiance;
    Locale frame;
    fs::path side = sidecar_path(path);
    if (fs::exists(side)) {
        json j = json::parse(read_file(side));
        if (j.contains("kind"))
            kind = parse_pixel_kind(j.at("kind").get<std::string>());
        if (j.contains("locale"))
            frame = locale_from_json(j.at("locale"));
        if (j.contains("resolution")) {
            auto res = j.at("resolution");
            if (res.at(0).get<int>() != img.height() || res.at(1).get<int>() != img.width())
                throw DimensionMismatch(side.string() + ": resolution does not match " + path.string());
        }
    }
    return PanoramaImage(std::move(img), kind, frame);
}

PanoramaImage read_panorama_any(const fs::path& path, PixelKind default_kind)
{
    std::string ext = path.extension().string();
    std::transform(ext.begin(), ext.end(), ext.begin(), [](unsigned char c) { return std::tolower(c); });
    if (ext == ".png")
        return PanoramaImage(read_png(path), default_kind);
    PanoramaImage p = read_panorama(path);
    if (!fs::exists(sidecar_path(path)))
        return PanoramaImage(p.image(), default_kind, p.frame());
    return p;
}

// --- PNG -------------------------------------------------------------------

namespace {

struct MemoryReader {
    const std::string* bytes;
    std::size_t pos;
};

void png_read_memory(png_structp png, png_bytep out, png_size_t n)
{
    auto* r = static_cast<MemoryReader*>(png_get_io_ptr(png));
    if (r->pos + n > r->bytes->size())
        png_error(png, "truncated PNG stream");
    std::memcpy(out, r->bytes->data() + r->pos, n);
    r->pos += n;
}

void png_write_memory(png_structp png, png_bytep data, png_size_t n)
{
    auto* out = static_cast<std::string*>(png_get_io_ptr(png));
    out->append(reinterpret_cast<const char*>(data), n);
}

void png_flush_noop(png_structp) {}

// libpng reports errors by longjmp; the C++ objects touched inside the
// protected region are owned by the caller and outlive it.
bool decode_png_raw(const std::string& bytes, std::vector<unsigned char>& pixels, png_uint_32& w, png_uint_32& h,
                    int& depth, std::string& error)
{
    png_structp png = png_create_read_struct(PNG_LIBPNG_VER_STRING, nullptr, nullptr, nullptr);
    if (!png) {
        error = "cannot allocate PNG reader";
        return false;
    }
    png_infop info = png_create_info_struct(png);
    MemoryReader reader{&bytes, 0};
    std::vector<png_bytep> rows;
    if (!info || setjmp(png_jmpbuf(png))) {
        png_destroy_read_struct(&png, info ? &info : nullptr, nullptr);
        error = "malformed PNG stream";
        return false;
    }
    png_set_read_fn(png, &reader, png_read_memory);
    png_read_info(png, info);
    int color = png_get_color_type(png, info);
    depth = png_get_bit_depth(png, info);
    if (color == PNG_COLOR_TYPE_PALETTE)
        png_set_palette_to_rgb(png);
    if (color == PNG_COLOR_TYPE_GRAY && depth < 8)
        png_set_expand_gray_1_2_4_to_8(png);
    if (color == PNG_COLOR_TYPE_GRAY || color == PNG_COLOR_TYPE_GRAY_ALPHA)
        png_set_gray_to_rgb(png);
    if (color & PNG_COLOR_MASK_ALPHA)
        png_set_strip_alpha(png);
    png_read_update_info(png, info);
    w = png_get_image_width(png, info);
    h = png_get_image_height(png, info);
    depth = png_get_bit_depth(png, info);
    std::size_t stride = png_get_rowbytes(png, info);
    pixels.assign(stride * h, 0);
    rows.resize(h);
    for (png_uint_32 y = 0; y < h; ++y)
        rows[y] = pixels.data() + y * stride;
    png_read_image(png, rows.data());
    png_read_end(png, nullptr);
    png_destroy_read_struct(&png, &info, nullptr);
    return true;
}

bool encode_png_raw(std::string& out, const std::vector<unsigned char>& pixels, png_uint_32 w, png_uint_32 h,
                    int depth, int color)
{
    png_structp png = png_create_write_struct(PNG_LIBPNG_VER_STRING, nullptr, nullptr, nullptr);
    if (!png)
        return false;
    png_infop info = png_create_info_struct(png);
    std::vector<png_bytep> rows;
    if (!info || setjmp(png_jmpbuf(png))) {
        png_destroy_write_struct(&png, info ? &info : nullptr);
        return false;
    }
    png_set_write_fn(png, &out, png_write_memory, png_flush_noop);
    png_set_IHDR(png, info, w, h, depth, color, PNG_INTERLACE_NONE, PNG_COMPRESSION_TYPE_DEFAULT,
                 PNG_FILTER_TYPE_DEFAULT);
    png_write_info(png, info);
    std::size_t channels = color == PNG_COLOR_TYPE_RGBA ? 4 : 3;
    std::size_t stride = static_cast<std::size_t>(w) * channels * (depth / 8);
    rows.resize(h);
    for (png_uint_32 y = 0; y < h; ++y)
        rows[y] = const_cast<png_bytep>(pixels.data() + y * stride);
    png_write_image(png, rows.data());
    png_write_end(png, nullptr);
    png_destroy_write_struct(&png, &info);
    return true;
}

} // namespace

Image read_png(const fs::path& path)
{
    std::string bytes = read_file(path);
    std::vector<unsigned char> pixels;
    png_uint_32 w = 0, h = 0;
    int depth = 0;
    std::string error;
    if (!decode_png_raw(bytes, pixels, w, h, depth, error))
        throw ParseError(path.string(), 0, error);
    Image img(static_cast<int>(w), static_cast<int>(h), 3);
    const double scale = depth == 16 ? 1.0 / 65535.0 : 1.0 / 255.0;
    std::size_t i = 0;
    for (int y = 0; y < img.height(); ++y)
        for (int x = 0; x < img.width(); ++x)
            for (int c = 0; c < 3; ++c) {
                unsigned v;
                if (depth == 16) {
                    v = (static_cast<unsigned>(pixels[i]) << 8) | pixels[i + 1];
                    i += 2;
                } else {
                    v = pixels[i++];
                }
                img.at(x, y, c) = v * scale;
            }
    return img;
}

void write_png16(const fs::path& path, const Image& rgb)
{
    if (rgb.channels() != 3 && rgb.channels() != 1)
        throw InvalidInput("write_png16 expects 1 or 3 channels");
    std::vector<unsigned char> pixels;
    pixels.reserve(rgb.pixel_count() * 6);
    for (int y = 0; y < rgb.height(); ++y)
        for (int x = 0; x < rgb.width(); ++x)
            for (int c = 0; c < 3; ++c) {
                double v = std::clamp(rgb.at(x, y, std::min(c, rgb.channels() - 1)), 0.0, 1.0);
                auto q = static_cast<unsigned>(std::lround(v * 65535.0));
                pixels.push_back(static_cast<unsigned char>(q >> 8));
                pixels.push_back(static_cast<unsigned char>(q & 0xFFu));
            }
    std::string out;
    if (!encode_png_raw(out, pixels, static_cast<png_uint_32>(rgb.width()), static_cast<png_uint_32>(rgb.height()), 16,
                        PNG_COLOR_TYPE_RGB))
        throw std::runtime_error("PNG encoding failed for " + path.string());
    write_atomic(path, out);
}

void write_png_rgba8(const fs::path& path, const Image& rgba)
{
    if (rgba.channels() != 4)
        throw InvalidInput("write_png_rgba8 expects 4 channels");
    std::vector<unsigned char> pixels;
    pixels.reserve(rgba.size());
    for (double v : rgba.data())
        pixels.push_back(static_cast<unsigned char>(std::lround(std::clamp(v, 0.0, 1.0) * 255.0)));
    std::string out;
    if (!encode_png_raw(out, pixels, static_cast<png_uint_32>(rgba.width()), static_cast<png_uint_32>(rgba.height()),
                        8, PNG_COLOR_TYPE_RGBA))
        throw std::runtime_error("PNG encoding failed for " + path.string());
    write_atomic(path, out);
}

// --- depth -----------------------------------------------------------------

DepthImage read_depth(const fs::path& path)
{
    Image img = read_pfm(path);
    if (img.channels() != 1)
        throw InvalidInput(path.string() + ": depth maps must be single-channel PFM");
    DepthImage d(img.width(), img.height());
    for (std::size_t i = 0; i < d.depth.size(); ++i) {
        double v = img.data()[i];
        if (!(v >= 0.0) || !std::isfinite(v))
            throw InvalidInput(path.string() + ": depth values must be finite and non-negative");
        d.depth[i] = v;
    }
    return d;
}

void write_depth(const fs::path& path, const DepthImage& depth)
{
    Image img(depth.width, depth.height, 1);
    std::copy(depth.depth.begin(), depth.depth.end(), img.data().begin());
    write_pfm(path, img);
}

// --- manifest --------------------------------------------------------------

SceneManifest read_manifest(const fs::path& path)
{
    json j;
    try {
        j = json::parse(read_file(path));
    } catch (const json::parse_error& e) {
        throw ParseError(path.string(), e.byte, e.what());
    }
    SceneManifest m;
    m.base_dir = path.parent_path();
    m.scene_id = j.value("scene_id", std::string{});
    for (const auto& entry : j.at("images")) {
        ManifestImage img;
        img.hdr = entry.at("hdr").get<std::string>();
        if (entry.contains("ldr") && !entry.at("ldr").is_null())
            img.ldr = entry.at("ldr").get<std::string>();
        img.depth = entry.at("depth").get<std::string>();
        img.camera = camera_from_json(entry.at("camera"));
        m.images.push_back(std::move(img));
    }
    if (j.contains("points") && !j.at("points").is_null())
        m.points = fs::path(j.at("points").get<std::string>());
    return m;
}

void write_manifest(const fs::path& path, const SceneManifest& m)
{
    json images = json::array();
    for (const auto& img : m.images) {
        json e = {{"hdr", img.hdr.generic_string()}, {"depth", img.depth.generic_string()}, {"camera", to_json(img.camera)}};
        if (!img.ldr.empty())
            e["ldr"] = img.ldr.generic_string();
        images.push_back(e);
    }
    json j = {{"scene_id", m.scene_id}, {"images", images}};
    if (m.points)
        j["points"] = m.points->generic_string();
    write_atomic(path, j.dump(2) + "\n");
}

std::vector<View> load_views(const SceneManifest& m)
{
    std::vector<View> views;
    views.reserve(m.images.size());
    for (const auto& img : m.images) {
        View v;
        v.camera = img.camera;
        v.hdr = read_pfm(m.resolve(img.hdr));
        v.depth = read_depth(m.resolve(img.depth));
        if (v.hdr.width() != v.camera.width || v.hdr.height() != v.camera.height)
            throw DimensionMismatch(img.hdr.string() + ": image size differs from its camera");
        if (v.depth.width != v.camera.width || v.depth.height != v.camera.height)
            throw DimensionMismatch(img.depth.string() + ": depth size differs from its camera");
        views.push_back(std::move(v));
    }
    return views;
}

Image load_ldr(const SceneManifest& m, std::size_t k)
{
    if (k >= m.images.size())
        throw IndexError("image index " + std::to_string(k) + " out of range");
    const ManifestImage& img = m.images[k];
    Image ldr;
    if (!img.ldr.empty()) {
        ldr = read_png(m.resolve(img.ldr));
    } else {
        ldr = read_pfm(m.resolve(img.hdr));
        for (double& v : ldr.data())
            v = h_to_j(std::max(v, 0.0)).value;
    }
    if (ldr.width() != img.camera.width || ldr.height() != img.camera.height)
        throw DimensionMismatch("LDR image " + std::to_string(k) + " size differs from its camera");
    return ldr;
}

// --- labelled points -------------------------------------------------------

LabeledPointSet read_points(const fs::path& path)
{
    std::string text = read_file(path);
    LabeledPointSet set;
    std::size_t pos = 0;
    while (pos < text.size()) {
        std::size_t eol = text.find('\n', pos);
        if (eol == std::string::npos)
            eol = text.size();
        std::string line = text.substr(pos, eol - pos);
        std::size_t hash = line.find('#');
        if (hash != std::string::npos)
            line.resize(hash);
        std::istringstream ss(line);
        double v[6];
        std::string label;
        if (ss >> v[0]) {
            for (int i = 1; i < 6; ++i)
                if (!(ss >> v[i]))
                    throw ParseError(path.string(), pos, "expected 'x y z nx ny nz label'");
            if (!(ss >> label))
                throw ParseError(path.string(), pos, "missing label");
            try {
                set.add({v[0], v[1], v[2]}, Eigen::Vector3d(v[3], v[4], v[5]).normalized(), parse_surface_label(label));
            } catch (const InvalidInput& e) {
                throw ParseError(path.string(), pos, e.what());
            }
        } else {
            ss.clear();
            std::string rest;
            if (ss >> rest)
                throw ParseError(path.string(), pos, "expected a number, got '" + rest + "'");
        }
        pos = eol + 1;
    }
    set.validate();
    return set;
}

void write_points(const fs::path& path, const LabeledPointSet& points)
{
    std::ostringstream ss;
    ss.precision(17);
    ss << "# x y z nx ny nz label\n";
    for (std::size_t i = 0; i < points.size(); ++i) {
        const auto& p = points.points[i];
        const auto& n = points.normals[i];
        ss << p.x() << ' ' << p.y() << ' ' << p.z() << ' ' << n.x() << ' ' << n.y() << ' ' << n.z() << ' '
           << to_string(points.labels[i]) << '\n';
    }
    write_atomic(path, ss.str());
}

// --- library ---------------------------------------------------------------

PanoLibrary load_library(const fs::path& dir)
{
    fs::path index = dir / "index.json";
    json j;
    try {
        j = json::parse(read_file(index));
    } catch (const json::parse_error& e) {
        throw ParseError(index.string(), e.byte, e.what());
    }
    PanoLibrary lib;
    for (const auto& e : j.at("entries")) {
        fs::path p = e.at("path").get<std::string>();
        if (!p.is_absolute())
            p = dir / p;
        PanoramaImage pano = read_panorama_any(p, PixelKind::LdrColor);
        lib.entries.push_back({e.at("id").get<std::string>(), std::move(pano)});
    }
    lib.validate();
    return lib;
}

void write_library(const fs::path& dir, const PanoLibrary& library)
{
    json entries = json::array();
    for (const auto& e : library.entries) {
        std::string file = e.id + ".pfm";
        write_panorama(dir / file, e.image);
        entries.push_back({{"id", e.id}, {"path", file}});
    }
    write_atomic(dir / "index.json", json{{"entries", entries}}.dump(2) + "\n");
}

} // namespace illumkit::io
