#include "illumkit/image.hpp"

#include <algorithm>

namespace illumkit {

Image::Image(int width, int height, int channels, double fill)
    : width_(width), height_(height), channels_(channels)
{
    if (width < 0 || height < 0 || channels < 1)
        throw InvalidInput("image dimensions must be non-negative with at least one channel");
    data_.assign(static_cast<std::size_t>(width) * height * channels, fill);
}

double Image::checked(int x, int y, int c) const
{
    if (x < 0 || x >= width_ || y < 0 || y >= height_ || c < 0 || c >= channels_)
        throw IndexError("pixel (" + std::to_string(x) + ", " + std::to_string(y) + ", " +
                         std::to_string(c) + ") outside " + std::to_string(width_) + "x" +
                         std::to_string(height_) + "x" + std::to_string(channels_) + " image");
    return at(x, y, c);
}

std::size_t Mask::count() const
{
    return static_cast<std::size_t>(std::count(bits_.begin(), bits_.end(), std::uint8_t{1}));
}

void require_same_shape(const Image& a, const Image& b, const std::string& what)
{
    if (!a.same_shape(b))
        throw DimensionMismatch(what + ": " + std::to_string(a.width()) + "x" + std::to_string(a.height()) +
                                "x" + std::to_string(a.channels()) + " vs " + std::to_string(b.width()) + "x" +
                                std::to_string(b.height()) + "x" + std::to_string(b.channels()));
}

} // namespace illumkit
