#include "sinir/image_io.hpp"

#include <png.h>

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <csetjmp>
#include <memory>
#include <vector>

#include "sinir/errors.hpp"

namespace sinir {

namespace {

struct FileCloser {
    void operator()(std::FILE* f) const {
        if (f) std::fclose(f);
    }
};
using FilePtr = std::unique_ptr<std::FILE, FileCloser>;

struct PngReader {
    png_structp png = nullptr;
    png_infop info = nullptr;
    ~PngReader() {
        if (png) png_destroy_read_struct(&png, info ? &info : nullptr, nullptr);
    }
};

struct PngWriter {
    png_structp png = nullptr;
    png_infop info = nullptr;
    ~PngWriter() {
        if (png) png_destroy_write_struct(&png, info ? &info : nullptr);
    }
};

// Decode into interleaved RGB samples (8 or 16 bit as delivered).
ImageTensor decode_rgb(const std::string& path) {
    FilePtr fp(std::fopen(path.c_str(), "rb"));
    if (!fp) {
        throw IoError("cannot open '" + path + "' for reading");
    }
    png_byte sig[8];
    if (std::fread(sig, 1, 8, fp.get()) != 8 || png_sig_cmp(sig, 0, 8) != 0) {
        throw FormatError("'" + path + "' is not a PNG file");
    }

    PngReader r;
    r.png = png_create_read_struct(PNG_LIBPNG_VER_STRING, nullptr, nullptr,
                                   nullptr);
    if (!r.png) throw IoError("libpng read setup failed");
    r.info = png_create_info_struct(r.png);
    if (!r.info) throw IoError("libpng info setup failed");

    // Buffers live above the setjmp point so an error unwind releases them.
    std::vector<png_byte> data;
    std::vector<png_bytep> rows;
    if (setjmp(png_jmpbuf(r.png))) {
        throw FormatError("failed to decode '" + path + "'");
    }
    png_init_io(r.png, fp.get());
    png_set_sig_bytes(r.png, 8);
    png_read_info(r.png, r.info);

    const png_byte color_type = png_get_color_type(r.png, r.info);
    const png_byte bit_depth = png_get_bit_depth(r.png, r.info);
    if (color_type == PNG_COLOR_TYPE_PALETTE) {
        png_set_palette_to_rgb(r.png);
    }
    if (color_type == PNG_COLOR_TYPE_GRAY && bit_depth < 8) {
        png_set_expand_gray_1_2_4_to_8(r.png);
    }
    bool had_alpha = (color_type & PNG_COLOR_MASK_ALPHA) != 0;
    if (png_get_valid(r.png, r.info, PNG_INFO_tRNS)) {
        png_set_tRNS_to_alpha(r.png);
        had_alpha = true;
    }
    if (had_alpha) {
        std::fprintf(stderr, "sinir: %s: alpha channel dropped\n",
                     path.c_str());
        png_set_strip_alpha(r.png);
    }
    if (color_type == PNG_COLOR_TYPE_GRAY ||
        color_type == PNG_COLOR_TYPE_GRAY_ALPHA) {
        png_set_gray_to_rgb(r.png);
    }
    png_read_update_info(r.png, r.info);

    const int h = static_cast<int>(png_get_image_height(r.png, r.info));
    const int w = static_cast<int>(png_get_image_width(r.png, r.info));
    const png_byte depth = png_get_bit_depth(r.png, r.info);
    const size_t rowbytes = png_get_rowbytes(r.png, r.info);
    if (png_get_channels(r.png, r.info) != 3 || (depth != 8 && depth != 16)) {
        throw FormatError("'" + path + "': unsupported sample layout");
    }

    data.resize(rowbytes * h);
    rows.resize(h);
    for (int y = 0; y < h; ++y) rows[y] = data.data() + y * rowbytes;
    png_read_image(r.png, rows.data());
    png_read_end(r.png, nullptr);

    ImageTensor out(3, h, w);
    if (depth == 8) {
        for (int y = 0; y < h; ++y) {
            const png_byte* row = rows[y];
            for (int x = 0; x < w; ++x) {
                for (int c = 0; c < 3; ++c) {
                    out.at(c, y, x) = row[3 * x + c] / 127.5 - 1.0;
                }
            }
        }
    } else {
        for (int y = 0; y < h; ++y) {
            const png_byte* row = rows[y];
            for (int x = 0; x < w; ++x) {
                for (int c = 0; c < 3; ++c) {
                    // 16-bit PNG samples are big-endian.
                    const unsigned v = (static_cast<unsigned>(row[6 * x + 2 * c])
                                        << 8) |
                                       row[6 * x + 2 * c + 1];
                    out.at(c, y, x) = v / 32767.5 - 1.0;
                }
            }
        }
    }
    return out;
}

}  // namespace

ImageTensor load_png(const std::string& path) { return decode_rgb(path); }

ImageTensor load_png_mask(const std::string& path) {
    const ImageTensor rgb = decode_rgb(path);
    ImageTensor mask(1, rgb.height(), rgb.width());
    for (int y = 0; y < rgb.height(); ++y) {
        for (int x = 0; x < rgb.width(); ++x) {
            const double luma = 0.299 * rgb.at(0, y, x) +
                                0.587 * rgb.at(1, y, x) +
                                0.114 * rgb.at(2, y, x);
            mask.at(0, y, x) = (luma + 1.0) / 2.0;
        }
    }
    return mask;
}

void save_png(const ImageTensor& img, const std::string& path) {
    if (img.channels() != 3) {
        throw ShapeError("save_png: need a 3-channel image, got " +
                         img.shape_string());
    }
    FilePtr fp(std::fopen(path.c_str(), "wb"));
    if (!fp) {
        throw IoError("cannot open '" + path + "' for writing");
    }
    PngWriter wtr;
    wtr.png = png_create_write_struct(PNG_LIBPNG_VER_STRING, nullptr, nullptr,
                                      nullptr);
    if (!wtr.png) throw IoError("libpng write setup failed");
    wtr.info = png_create_info_struct(wtr.png);
    if (!wtr.info) throw IoError("libpng info setup failed");

    std::vector<png_byte> row(static_cast<size_t>(img.width()) * 3);
    if (setjmp(png_jmpbuf(wtr.png))) {
        throw IoError("failed to write '" + path + "'");
    }
    png_init_io(wtr.png, fp.get());
    png_set_IHDR(wtr.png, wtr.info, img.width(), img.height(), 8,
                 PNG_COLOR_TYPE_RGB, PNG_INTERLACE_NONE,
                 PNG_COMPRESSION_TYPE_DEFAULT, PNG_FILTER_TYPE_DEFAULT);
    png_write_info(wtr.png, wtr.info);
    for (int y = 0; y < img.height(); ++y) {
        for (int x = 0; x < img.width(); ++x) {
            for (int c = 0; c < 3; ++c) {
                const double v = std::clamp(img.at(c, y, x), -1.0, 1.0);
                row[3 * x + c] = static_cast<png_byte>(
                    std::llround(v * 127.5 + 127.5));
            }
        }
        png_write_row(wtr.png, row.data());
    }
    png_write_end(wtr.png, wtr.info);
    if (std::fflush(fp.get()) != 0) {
        throw IoError("failed to flush '" + path + "'");
    }
}

}  // namespace sinir
