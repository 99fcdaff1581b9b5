// PNG/JPEG loading and PNG writing. Channels are scaled to [0,1] with no
// gamma handling; alpha inputs are composited over a caller-supplied
// background.
#pragma once

#include <stdexcept>
#include <string>

#include "layervec/render.hpp"

namespace layervec {

class ImageIoError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Decodes a PNG or JPEG file (by magic bytes) into an RGB image; any alpha
/// channel is composited over `background`.
RasterImage load_image(const std::string& path, const FillColor& background);

/// Writes an 8-bit RGB PNG.
void write_png(const std::string& path, const RasterImage& image);

}  // namespace layervec
