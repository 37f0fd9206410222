#include "illumkit/completion.hpp"

#include "illumkit/parallel.hpp"

#include <limits>

namespace illumkit {

void PanoLibrary::validate() const
{
    if (entries.empty())
        return;
    const Image& first = entries.front().image.image();
    for (const auto& e : entries) {
        if (!e.image.image().same_shape(first))
            throw InvalidInput("panorama library entry '" + e.id + "' has a different size");
        for (double v : e.image.image().data())
            if (!(v >= 0.0 && v <= 1.0))
                throw InvalidInput("panorama library entry '" + e.id + "' has values outside [0, 1]");
    }
}

Mask observed_mask(const Image& color)
{
    Mask m(color.width(), color.height(), false);
    for (int y = 0; y < color.height(); ++y)
        for (int x = 0; x < color.width(); ++x) {
            bool seen = false;
            for (double v : color.pixel(x, y))
                seen = seen || v != kUnobserved;
            m.set(x, y, seen);
        }
    return m;
}

WarpedPanorama partial_from_color(const PanoramaImage& color)
{
    Mask mask = observed_mask(color.image());
    PanoramaImage distance(color.width(), color.height(), 1, PixelKind::Distance, color.frame(), 0.0);
    return {color, std::move(distance), std::move(mask)};
}

double nn_score(const WarpedPanorama& partial, const Image& entry, int shift)
{
    const Image& p = partial.color.image();
    require_same_shape(p, entry, "nn_score");
    const int w = p.width();
    int s = ((shift % w) + w) % w;
    double total = 0.0;
    std::size_t n = 0;
    for (int y = 0; y < p.height(); ++y)
        for (int x = 0; x < w; ++x) {
            if (!partial.mask(x, y))
                continue;
            int ex = x - s;
            if (ex < 0)
                ex += w;
            double d2 = 0.0;
            for (int c = 0; c < p.channels(); ++c) {
                double d = p.at(x, y, c) - entry.at(ex, y, c);
                d2 += d * d;
            }
            total += d2;
            ++n;
        }
    if (n == 0)
        throw InvalidInput("nn_score: partial panorama has no observed pixels");
    return total / static_cast<double>(n);
}

NnMatch complete_nn(const WarpedPanorama& partial, const PanoLibrary& library)
{
    if (library.entries.empty())
        throw InvalidInput("complete_nn: empty panorama library");
    if (partial.observed() == 0)
        throw InvalidInput("complete_nn: partial panorama has no observed pixels");
    library.validate();
    const int w = partial.color.width();
    const std::size_t n_entries = library.entries.size();
    for (const auto& e : library.entries)
        require_same_shape(partial.color.image(), e.image.image(), "complete_nn");

    std::vector<double> scores(n_entries * static_cast<std::size_t>(w));
    parallel_for(scores.size(), [&](std::size_t begin, std::size_t end) {
        for (std::size_t k = begin; k < end; ++k)
            scores[k] = nn_score(partial, library.entries[k / w].image.image(), static_cast<int>(k % w));
    });

    std::size_t best = 0;
    for (std::size_t k = 1; k < scores.size(); ++k)
        if (scores[k] < scores[best])
            best = k;

    NnMatch match;
    match.index = best / w;
    match.shift = static_cast<int>(best % w);
    match.score = scores[best];
    match.id = library.entries[match.index].id;

    Image rolled = roll_columns(library.entries[match.index].image.image(), match.shift);
    Image filled = partial.color.image();
    for (int y = 0; y < filled.height(); ++y)
        for (int x = 0; x < filled.width(); ++x)
            if (!partial.mask(x, y))
                for (int c = 0; c < filled.channels(); ++c)
                    filled.at(x, y, c) = rolled.at(x, y, c);
    match.completed = PanoramaImage(std::move(filled), partial.color.kind(), partial.color.frame());
    return match;
}

PanoramaImage complete_mirror(const WarpedPanorama& partial, const FillOptions& fill)
{
    Image img = partial.color.image();
    const int w = img.width();
    Mask known = partial.mask;
    for (int y = 0; y < img.height(); ++y)
        for (int x = 0; x < w; ++x) {
            if (partial.mask(x, y) || !partial.mask(w - 1 - x, y))
                continue;
            for (int c = 0; c < img.channels(); ++c)
                img.at(x, y, c) = partial.color.at(w - 1 - x, y, c);
            known.set(x, y, true);
        }
    diffuse_fill(img, known, fill);
    return PanoramaImage(std::move(img), partial.color.kind(), partial.color.frame());
}

} // namespace illumkit
