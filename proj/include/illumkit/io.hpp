// File formats: PFM panoramas with JSON sidecars, 16-bit PNG LDR images,
// scene manifests, labelled point sets and panorama libraries.
#pragma once

#include "illumkit/completion.hpp"
#include "illumkit/geometry.hpp"
#include "illumkit/ibr.hpp"
#include "illumkit/metrics.hpp"
#include "illumkit/panorama.hpp"

#include <nlohmann/json.hpp>

#include <cstddef>
#include <filesystem>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace illumkit::io {

namespace fs = std::filesystem;
using nlohmann::json;

/// Malformed file content, with the byte offset where parsing failed.
class ParseError : public std::runtime_error {
public:
    ParseError(const std::string& source, std::size_t offset, const std::string& message);
    std::size_t offset() const { return offset_; }

private:
    std::size_t offset_;
};

/// Writes `bytes` to a temporary sibling of `path` and renames it into place.
void write_atomic(const fs::path& path, std::string_view bytes);
std::string read_file(const fs::path& path);

/// "PF" (3 channels) or "Pf" (1 channel) header, scale -1.0 (little endian),
/// float32 rows stored bottom to top. NaN values are rejected both ways.
std::string encode_pfm(const Image& image);
Image decode_pfm(std::string_view bytes, const std::string& source = "<memory>");
void write_pfm(const fs::path& path, const Image& image);
Image read_pfm(const fs::path& path);

json to_json(const Locale& locale);
Locale locale_from_json(const json& j);
json to_json(const Camera& camera);
Camera camera_from_json(const json& j);

/// Sidecar path for a panorama file: "<path>.json".
fs::path sidecar_path(const fs::path& pfm);
/// PFM body plus a sidecar {kind, locale, resolution}.
void write_panorama(const fs::path& path, const PanoramaImage& pano);
/// Reads the PFM and, when present, its sidecar; without one the panorama is
/// hdr-radiance centred at the origin with the default frame.
PanoramaImage read_panorama(const fs::path& path);
/// PFM or PNG by extension.
PanoramaImage read_panorama_any(const fs::path& path, PixelKind default_kind);

/// 8- or 16-bit PNG as values in [0, 1] (65535 -> 1.0). Grey is expanded to RGB
/// and alpha dropped.
Image read_png(const fs::path& path);
/// 16-bit RGB PNG; values are clamped to [0, 1] and rounded to 1/65535.
void write_png16(const fs::path& path, const Image& rgb);
/// 8-bit RGBA PNG from a 4-channel image in [0, 1].
void write_png_rgba8(const fs::path& path, const Image& rgba);

/// Depth maps are single-channel PFM in metres, 0 = missing.
DepthImage read_depth(const fs::path& path);
void write_depth(const fs::path& path, const DepthImage& depth);

struct ManifestImage {
    fs::path hdr;
    fs::path ldr; // optional
    fs::path depth;
    Camera camera;
};

struct SceneManifest {
    std::string scene_id;
    fs::path base_dir; // relative paths resolve against this
    std::vector<ManifestImage> images;
    std::optional<fs::path> points;

    fs::path resolve(const fs::path& p) const { return p.is_absolute() ? p : base_dir / p; }
};

SceneManifest read_manifest(const fs::path& path);
void write_manifest(const fs::path& path, const SceneManifest& manifest);
/// Loads HDR colour, depth and camera of every manifest image, checking sizes.
std::vector<View> load_views(const SceneManifest& manifest);
/// LDR observation of image k: its PNG when listed, otherwise h_to_j of the HDR.
Image load_ldr(const SceneManifest& manifest, std::size_t k);

/// Text format, one point per line: "x y z nx ny nz label"; '#' starts a comment.
LabeledPointSet read_points(const fs::path& path);
void write_points(const fs::path& path, const LabeledPointSet& points);

json to_json(const std::vector<Locale>& locales);
std::vector<Locale> read_locales(const fs::path& path);

/// Directory holding index.json {"entries": [{"id", "path"}]} and PFM/PNG panoramas.
PanoLibrary load_library(const fs::path& dir);
void write_library(const fs::path& dir, const PanoLibrary& library);

json to_json(const EvalReport& report);

} // namespace illumkit::io
