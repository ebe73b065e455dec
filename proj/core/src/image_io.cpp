#include "speclocal/image_io.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <csetjmp>
#include <cstdio>
#include <cstring>
#include <fstream>
#include <vector>

#include <jpeglib.h>
#include <png.h>

#include "speclocal/errors.hpp"

namespace speclocal {

namespace {

std::vector<unsigned char> read_all_bytes(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw FormatError("cannot open file: " + path.string());
    std::vector<unsigned char> bytes((std::istreambuf_iterator<char>(in)),
                                     std::istreambuf_iterator<char>());
    if (bytes.empty()) throw FormatError("empty file: " + path.string());
    return bytes;
}

bool looks_like_png(const std::vector<unsigned char>& b) {
    static const unsigned char sig[8] = {0x89, 'P', 'N', 'G', '\r', '\n', 0x1a, '\n'};
    return b.size() >= 8 && std::equal(sig, sig + 8, b.begin());
}

bool looks_like_jpeg(const std::vector<unsigned char>& b) {
    return b.size() >= 3 && b[0] == 0xFF && b[1] == 0xD8 && b[2] == 0xFF;
}

bool looks_like_pgm(const std::vector<unsigned char>& b) {
    return b.size() >= 2 && b[0] == 'P' && (b[1] == '2' || b[1] == '5');
}

Image decode_png(const std::filesystem::path& path, bool force_gray) {
    png_image png;
    std::memset(&png, 0, sizeof(png));
    png.version = PNG_IMAGE_VERSION;
    if (!png_image_begin_read_from_file(&png, path.string().c_str()))
        throw FormatError("PNG read failed: " + path.string() + ": " + png.message);

    const bool gray = force_gray || (png.format & PNG_FORMAT_FLAG_COLOR) == 0;
    png.format = gray ? PNG_FORMAT_GRAY : PNG_FORMAT_RGB;

    const int channels = gray ? 1 : 3;
    std::vector<unsigned char> buffer(PNG_IMAGE_SIZE(png));
    if (!png_image_finish_read(&png, nullptr, buffer.data(), 0, nullptr)) {
        png_image_free(&png);
        throw FormatError("PNG decode failed: " + path.string() + ": " + png.message);
    }

    Image img(int(png.width), int(png.height), channels);
    for (std::size_t i = 0; i < buffer.size(); ++i) img.data[i] = buffer[i] / 255.0f;
    return img;
}

struct JpegErrorMgr {
    jpeg_error_mgr base;
    std::jmp_buf jump;
    char message[JMSG_LENGTH_MAX];
};

void jpeg_error_exit(j_common_ptr cinfo) {
    auto* err = reinterpret_cast<JpegErrorMgr*>(cinfo->err);
    (*cinfo->err->format_message)(cinfo, err->message);
    std::longjmp(err->jump, 1);
}

Image decode_jpeg(const std::filesystem::path& path, const std::vector<unsigned char>& bytes) {
    jpeg_decompress_struct cinfo;
    JpegErrorMgr err;
    cinfo.err = jpeg_std_error(&err.base);
    err.base.error_exit = jpeg_error_exit;

    Image img;
    std::vector<unsigned char> row;
    if (setjmp(err.jump)) {
        jpeg_destroy_decompress(&cinfo);
        throw FormatError("JPEG decode failed: " + path.string() + ": " + err.message);
    }

    jpeg_create_decompress(&cinfo);
    jpeg_mem_src(&cinfo, bytes.data(), static_cast<unsigned long>(bytes.size()));
    jpeg_read_header(&cinfo, TRUE);
    cinfo.out_color_space = cinfo.num_components == 1 ? JCS_GRAYSCALE : JCS_RGB;
    jpeg_start_decompress(&cinfo);

    const int channels = cinfo.output_components == 1 ? 1 : 3;
    img = Image(int(cinfo.output_width), int(cinfo.output_height), channels);
    row.resize(std::size_t(cinfo.output_width) * cinfo.output_components);
    while (cinfo.output_scanline < cinfo.output_height) {
        unsigned char* rows[1] = {row.data()};
        jpeg_read_scanlines(&cinfo, rows, 1);
        const std::size_t y = cinfo.output_scanline - 1;
        for (std::size_t i = 0; i < row.size(); ++i)
            img.data[y * row.size() + i] = row[i] / 255.0f;
    }
    jpeg_finish_decompress(&cinfo);
    jpeg_destroy_decompress(&cinfo);
    return img;
}

Image decode_pgm(const std::filesystem::path& path, const std::vector<unsigned char>& bytes) {
    std::size_t pos = 2; // past the P5/P2 magic
    const bool binary = bytes[1] == '5';

    // PGM header tokens may be separated by whitespace or '#' comment lines.
    auto next_token = [&bytes, &pos, &path]() -> long {
        while (pos < bytes.size()) {
            if (std::isspace(bytes[pos])) {
                ++pos;
            } else if (bytes[pos] == '#') {
                while (pos < bytes.size() && bytes[pos] != '\n') ++pos;
            } else {
                break;
            }
        }
        long value = 0;
        bool any = false;
        while (pos < bytes.size() && std::isdigit(bytes[pos])) {
            value = value * 10 + (bytes[pos] - '0');
            ++pos;
            any = true;
        }
        if (!any) throw FormatError("truncated PGM header: " + path.string());
        return value;
    };

    const long w = next_token();
    const long h = next_token();
    const long maxval = next_token();
    if (w < 1 || h < 1 || maxval < 1 || maxval > 255)
        throw FormatError("unsupported PGM header (8-bit only): " + path.string());

    Image img(int(w), int(h), 1);
    if (binary) {
        ++pos; // exactly one whitespace byte between maxval and the raster
        if (bytes.size() < pos + img.pixel_count())
            throw FormatError("truncated PGM data: " + path.string());
        for (std::size_t i = 0; i < img.pixel_count(); ++i)
            img.data[i] = bytes[pos + i] / float(maxval);
    } else {
        for (std::size_t i = 0; i < img.pixel_count(); ++i) {
            const long v = next_token();
            if (v < 0 || v > maxval) throw FormatError("PGM value out of range: " + path.string());
            img.data[i] = v / float(maxval);
        }
    }
    return img;
}

} // namespace

Image load_image(const std::filesystem::path& path) {
    const auto bytes = read_all_bytes(path);
    if (looks_like_png(bytes)) return decode_png(path, /*force_gray=*/false);
    if (looks_like_jpeg(bytes)) return decode_jpeg(path, bytes);
    throw FormatError("unsupported image format (PNG or JPEG expected): " + path.string());
}

SaliencyMap load_saliency_map(const std::filesystem::path& path, int expected_width,
                              int expected_height) {
    const auto bytes = read_all_bytes(path);
    Image img;
    if (looks_like_png(bytes))
        img = decode_png(path, /*force_gray=*/true);
    else if (looks_like_pgm(bytes))
        img = decode_pgm(path, bytes);
    else
        throw FormatError("unsupported saliency map format (PNG or PGM expected): " +
                          path.string());

    if (img.width != expected_width || img.height != expected_height)
        throw FormatError("saliency map dimensions " + std::to_string(img.width) + "x" +
                          std::to_string(img.height) + " do not match image " +
                          std::to_string(expected_width) + "x" + std::to_string(expected_height) +
                          ": " + path.string());

    SaliencyMap map;
    map.width = img.width;
    map.height = img.height;
    map.values = std::move(img.data);
    const auto [mn, mx] = std::minmax_element(map.values.begin(), map.values.end());
    map.uninformative = (*mn == *mx);
    return map;
}

void save_png(const std::filesystem::path& path, const Image& img) {
    if (img.channels != 1 && img.channels != 3)
        throw std::invalid_argument("save_png: 1 or 3 channels required");

    png_image png;
    std::memset(&png, 0, sizeof(png));
    png.version = PNG_IMAGE_VERSION;
    png.width = png_uint_32(img.width);
    png.height = png_uint_32(img.height);
    png.format = img.channels == 1 ? PNG_FORMAT_GRAY : PNG_FORMAT_RGB;

    std::vector<unsigned char> buffer(img.data.size());
    for (std::size_t i = 0; i < buffer.size(); ++i) {
        const float v = std::clamp(img.data[i], 0.0f, 1.0f);
        buffer[i] = static_cast<unsigned char>(std::lround(v * 255.0f));
    }
    if (!png_image_write_to_file(&png, path.string().c_str(), 0, buffer.data(), 0, nullptr))
        throw FormatError("PNG write failed: " + path.string() + ": " + png.message);
}

void write_file_atomic(const std::filesystem::path& path, const std::string& content) {
    const auto dir = path.parent_path().empty() ? std::filesystem::path(".") : path.parent_path();
    const auto tmp = dir / (path.filename().string() + ".tmp");
    {
        std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
        if (!out) throw FormatError("cannot write file: " + tmp.string());
        out.write(content.data(), std::streamsize(content.size()));
        if (!out) throw FormatError("write failed: " + tmp.string());
    }
    std::filesystem::rename(tmp, path);
}

} // namespace speclocal
