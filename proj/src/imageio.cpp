#include "layervec/imageio.hpp"

#include <jpeglib.h>
#include <png.h>

#include <algorithm>
#include <cmath>
#include <csetjmp>
#include <cstdio>
#include <memory>
#include <vector>

namespace layervec {

namespace {

struct FileCloser {
    void operator()(std::FILE* f) const {
        if (f) std::fclose(f);
    }
};
using FilePtr = std::unique_ptr<std::FILE, FileCloser>;

RasterImage from_rgba8(const std::vector<unsigned char>& rgba, int w, int h,
                       const FillColor& background) {
    RasterImage img(w, h);
    const double bg[3] = {background.r, background.g, background.b};
    for (size_t i = 0; i < static_cast<size_t>(w) * h; ++i) {
        const double a = rgba[i * 4 + 3] / 255.0;
        for (int c = 0; c < 3; ++c) {
            const double v = rgba[i * 4 + c] / 255.0;
            img.data[i * 3 + c] = v * a + bg[c] * (1.0 - a);
        }
    }
    return img;
}

RasterImage load_png(std::FILE* fp, const std::string& path, const FillColor& background) {
    png_structp png = png_create_read_struct(PNG_LIBPNG_VER_STRING, nullptr, nullptr, nullptr);
    png_infop info = png ? png_create_info_struct(png) : nullptr;
    if (!png || !info) {
        png_destroy_read_struct(&png, &info, nullptr);
        throw ImageIoError("png: out of memory reading " + path);
    }
    std::vector<unsigned char> rgba;
    std::vector<png_bytep> rows;
    if (setjmp(png_jmpbuf(png))) {
        png_destroy_read_struct(&png, &info, nullptr);
        throw ImageIoError("png: failed to decode " + path);
    }
    png_init_io(png, fp);
    png_read_info(png, info);
    const int w = static_cast<int>(png_get_image_width(png, info));
    const int h = static_cast<int>(png_get_image_height(png, info));
    const png_byte color_type = png_get_color_type(png, info);
    const png_byte bit_depth = png_get_bit_depth(png, info);

    if (bit_depth == 16) png_set_strip_16(png);
    if (color_type == PNG_COLOR_TYPE_PALETTE) png_set_palette_to_rgb(png);
    if (color_type == PNG_COLOR_TYPE_GRAY && bit_depth < 8) png_set_expand_gray_1_2_4_to_8(png);
    if (png_get_valid(png, info, PNG_INFO_tRNS)) png_set_tRNS_to_alpha(png);
    if (color_type == PNG_COLOR_TYPE_RGB || color_type == PNG_COLOR_TYPE_GRAY ||
        color_type == PNG_COLOR_TYPE_PALETTE)
        png_set_filler(png, 0xFF, PNG_FILLER_AFTER);
    if (color_type == PNG_COLOR_TYPE_GRAY || color_type == PNG_COLOR_TYPE_GRAY_ALPHA)
        png_set_gray_to_rgb(png);
    png_read_update_info(png, info);

    rgba.resize(static_cast<size_t>(w) * h * 4);
    rows.resize(h);
    for (int y = 0; y < h; ++y) rows[y] = rgba.data() + static_cast<size_t>(y) * w * 4;
    png_read_image(png, rows.data());
    png_destroy_read_struct(&png, &info, nullptr);
    return from_rgba8(rgba, w, h, background);
}

struct JpegErrorMgr {
    jpeg_error_mgr pub;
    std::jmp_buf jump;
};

void jpeg_error_exit(j_common_ptr cinfo) {
    JpegErrorMgr* err = reinterpret_cast<JpegErrorMgr*>(cinfo->err);
    std::longjmp(err->jump, 1);
}

RasterImage load_jpeg(std::FILE* fp, const std::string& path, const FillColor& background) {
    jpeg_decompress_struct cinfo;
    JpegErrorMgr jerr;
    cinfo.err = jpeg_std_error(&jerr.pub);
    jerr.pub.error_exit = jpeg_error_exit;
    if (setjmp(jerr.jump)) {
        jpeg_destroy_decompress(&cinfo);
        throw ImageIoError("jpeg: failed to decode " + path);
    }
    jpeg_create_decompress(&cinfo);
    jpeg_stdio_src(&cinfo, fp);
    jpeg_read_header(&cinfo, TRUE);
    cinfo.out_color_space = JCS_RGB;
    jpeg_start_decompress(&cinfo);
    const int w = static_cast<int>(cinfo.output_width);
    const int h = static_cast<int>(cinfo.output_height);

    RasterImage img(w, h);
    std::vector<unsigned char> row(static_cast<size_t>(w) * 3);
    unsigned char* rowp = row.data();
    int y = 0;
    while (cinfo.output_scanline < cinfo.output_height) {
        jpeg_read_scanlines(&cinfo, &rowp, 1);
        for (int x = 0; x < w; ++x)
            for (int c = 0; c < 3; ++c) img.at(x, y, c) = row[static_cast<size_t>(x) * 3 + c] / 255.0;
        ++y;
    }
    jpeg_finish_decompress(&cinfo);
    jpeg_destroy_decompress(&cinfo);
    (void)background;  // JPEG has no alpha
    return img;
}

}  // namespace

RasterImage load_image(const std::string& path, const FillColor& background) {
    FilePtr fp(std::fopen(path.c_str(), "rb"));
    if (!fp) throw ImageIoError("cannot open " + path);
    unsigned char magic[4] = {0, 0, 0, 0};
    if (std::fread(magic, 1, 4, fp.get()) != 4) throw ImageIoError("file too short: " + path);
    std::rewind(fp.get());
    if (magic[0] == 0x89 && magic[1] == 'P' && magic[2] == 'N' && magic[3] == 'G')
        return load_png(fp.get(), path, background);
    if (magic[0] == 0xFF && magic[1] == 0xD8) return load_jpeg(fp.get(), path, background);
    throw ImageIoError("unsupported image format (expected PNG or JPEG): " + path);
}

void write_png(const std::string& path, const RasterImage& image) {
    if (image.width <= 0 || image.height <= 0)
        throw ImageIoError("write_png: empty image for " + path);
    FilePtr fp(std::fopen(path.c_str(), "wb"));
    if (!fp) throw ImageIoError("cannot open for writing: " + path);

    png_structp png = png_create_write_struct(PNG_LIBPNG_VER_STRING, nullptr, nullptr, nullptr);
    png_infop info = png ? png_create_info_struct(png) : nullptr;
    if (!png || !info) {
        png_destroy_write_struct(&png, &info);
        throw ImageIoError("png: out of memory writing " + path);
    }
    std::vector<unsigned char> bytes(static_cast<size_t>(image.width) * image.height * 3);
    std::vector<png_bytep> rows(image.height);
    if (setjmp(png_jmpbuf(png))) {
        png_destroy_write_struct(&png, &info);
        throw ImageIoError("png: failed to write " + path);
    }
    png_init_io(png, fp.get());
    png_set_IHDR(png, info, image.width, image.height, 8, PNG_COLOR_TYPE_RGB,
                 PNG_INTERLACE_NONE, PNG_COMPRESSION_TYPE_DEFAULT, PNG_FILTER_TYPE_DEFAULT);
    for (size_t i = 0; i < bytes.size(); ++i) {
        const double v = std::clamp(image.data[i], 0.0, 1.0);
        bytes[i] = static_cast<unsigned char>(std::lround(v * 255.0));
    }
    for (int y = 0; y < image.height; ++y)
        rows[y] = bytes.data() + static_cast<size_t>(y) * image.width * 3;
    png_set_rows(png, info, rows.data());
    png_write_png(png, info, PNG_TRANSFORM_IDENTITY, nullptr);
    png_destroy_write_struct(&png, &info);
}

}  // namespace layervec
