// Non-learned completion of partially observed LDR panoramas.
#pragma once

#include "illumkit/panorama.hpp"
#include "illumkit/warp.hpp"

#include <string>
#include <vector>

namespace illumkit {

struct LibraryEntry {
    std::string id;
    PanoramaImage image;
};

/// Complete LDR panoramas sharing one resolution.
struct PanoLibrary {
    std::vector<LibraryEntry> entries;

    /// Throws InvalidInput on mixed sizes, incomplete pixels or values outside [0, 1].
    void validate() const;
};

/// Mask of pixels whose channels are not all kUnobserved.
Mask observed_mask(const Image& color);

/// Wraps a colour panorama that marks holes with kUnobserved.
WarpedPanorama partial_from_color(const PanoramaImage& color);

/// Mean over observed pixels of the squared colour distance between the
/// partial panorama and `entry` rolled right by `shift` columns.
double nn_score(const WarpedPanorama& partial, const Image& entry, int shift);

struct NnMatch {
    PanoramaImage completed;
    std::string id;
    std::size_t index = 0;
    int shift = 0; // columns the library entry was rolled to match
    double score = 0.0;
};

/// Best library entry over all entries and all column rotations (ties: lowest
/// entry index, then lowest shift). Holes are filled from the rotated match;
/// observed pixels are kept verbatim. Throws InvalidInput for an empty
/// library or a partial panorama with no observed pixel.
NnMatch complete_nn(const WarpedPanorama& partial, const PanoLibrary& library);

/// Fills each hole (u, v) from its mirror column (W-1-u, v) when that pixel was
/// observed, then diffuses into whatever remains.
PanoramaImage complete_mirror(const WarpedPanorama& partial, const FillOptions& fill = {});

} // namespace illumkit
