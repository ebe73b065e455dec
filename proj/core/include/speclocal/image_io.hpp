#pragma once

#include <filesystem>
#include <string>

#include "speclocal/image.hpp"
#include "speclocal/saliency.hpp"

namespace speclocal {

/// Loads a PNG or JPEG image (detected by magic bytes). Grayscale files come
/// back single-channel, everything else as RGB. Values are scaled to [0,1].
/// Throws FormatError on unreadable or unsupported files.
Image load_image(const std::filesystem::path& path);

/// Loads an externally computed saliency map from an 8-bit single-channel
/// PNG or PGM file. Dimensions must match the image the map belongs to.
SaliencyMap load_saliency_map(const std::filesystem::path& path, int expected_width,
                              int expected_height);

/// Writes an Image (1 or 3 channels) as an 8-bit PNG.
void save_png(const std::filesystem::path& path, const Image& img);

/// Writes `content` to `path` via a temp file plus rename in the same
/// directory, so readers never observe partial files.
void write_file_atomic(const std::filesystem::path& path, const std::string& content);

} // namespace speclocal
