#pragma once

#include <cstdint>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <string>
#include <vector>

#include <png.h>

#include "se2diff/errors.hpp"
#include "se2diff/grid.hpp"
#include "se2diff/image.hpp"
#include "se2diff/lift.hpp"

namespace se2diff {

/// Intensity convention of values in memory. Paper: 0 is white, 1 is black
/// (files store the photographic positive, so ingest inverts). Standard:
/// values map straight to file intensities.
enum class IntensityConvention { Paper, Standard };

inline const char* to_string(IntensityConvention c) {
    return c == IntensityConvention::Paper ? "paper" : "standard";
}

namespace detail {

inline bool has_suffix(const std::string& s, const std::string& suffix) {
    return s.size() >= suffix.size() &&
           s.compare(s.size() - suffix.size(), suffix.size(), suffix) == 0;
}

// Raw grayscale buffer scaled to [0,1], before any convention handling.
struct RawGray {
    int rows = 0;
    int cols = 0;
    std::vector<double> values;
};

inline void skip_pgm_whitespace(std::istream& in) {
    for (;;) {
        int c = in.peek();
        if (c == '#') {
            std::string line;
            std::getline(in, line);
        } else if (std::isspace(c)) {
            in.get();
        } else {
            return;
        }
    }
}

inline RawGray read_pgm(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IoError("cannot open '" + path + "' for reading");

    char magic[2] = {0, 0};
    in.read(magic, 2);
    if (magic[0] != 'P' || magic[1] != '5') {
        std::string got(magic, 2);
        throw IoError("'" + path + "' is not a binary PGM (expected magic P5, got '" + got +
                      "')");
    }
    skip_pgm_whitespace(in);
    long cols = 0, rows = 0, maxval = 0;
    in >> cols;
    skip_pgm_whitespace(in);
    in >> rows;
    skip_pgm_whitespace(in);
    in >> maxval;
    if (!in || cols <= 0 || rows <= 0)
        throw IoError("'" + path + "': malformed PGM header");
    if (maxval != 255 && maxval != 65535)
        throw IoError("'" + path + "': unsupported PGM maxval " + std::to_string(maxval) +
                      " (expected 255 or 65535)");
    in.get();  // single whitespace after maxval

    RawGray img;
    img.rows = static_cast<int>(rows);
    img.cols = static_cast<int>(cols);
    img.values.resize(static_cast<size_t>(rows) * cols);
    const size_t n = img.values.size();
    if (maxval == 255) {
        std::vector<uint8_t> buf(n);
        in.read(reinterpret_cast<char*>(buf.data()), static_cast<std::streamsize>(n));
        if (static_cast<size_t>(in.gcount()) != n)
            throw IoError("'" + path + "': truncated PGM pixel data");
        for (size_t p = 0; p < n; ++p) img.values[p] = buf[p] / 255.0;
    } else {
        std::vector<uint8_t> buf(2 * n);
        in.read(reinterpret_cast<char*>(buf.data()), static_cast<std::streamsize>(2 * n));
        if (static_cast<size_t>(in.gcount()) != 2 * n)
            throw IoError("'" + path + "': truncated PGM pixel data");
        for (size_t p = 0; p < n; ++p) {
            const int v = (buf[2 * p] << 8) | buf[2 * p + 1];  // big-endian per spec
            img.values[p] = v / 65535.0;
        }
    }
    return img;
}

inline void write_pgm(const RawGray& img, const std::string& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw IoError("cannot open '" + path + "' for writing");
    out << "P5\n" << img.cols << " " << img.rows << "\n255\n";
    std::vector<uint8_t> buf(img.values.size());
    for (size_t p = 0; p < buf.size(); ++p) {
        const double v = std::clamp(img.values[p], 0.0, 1.0);
        buf[p] = static_cast<uint8_t>(std::lround(v * 255.0));
    }
    out.write(reinterpret_cast<const char*>(buf.data()),
              static_cast<std::streamsize>(buf.size()));
    if (!out) throw IoError("failed writing pixel data to '" + path + "'");
}

inline RawGray read_png(const std::string& path) {
    std::FILE* fp = std::fopen(path.c_str(), "rb");
    if (!fp) throw IoError("cannot open '" + path + "' for reading");

    png_byte header[8];
    if (std::fread(header, 1, 8, fp) != 8 || png_sig_cmp(header, 0, 8) != 0) {
        std::fclose(fp);
        throw IoError("'" + path + "' is not a PNG file (bad signature)");
    }

    png_structp png = png_create_read_struct(PNG_LIBPNG_VER_STRING, nullptr, nullptr, nullptr);
    png_infop info = png ? png_create_info_struct(png) : nullptr;
    if (!png || !info) {
        if (png) png_destroy_read_struct(&png, &info, nullptr);
        std::fclose(fp);
        throw IoError("libpng initialization failed");
    }
    if (setjmp(png_jmpbuf(png))) {
        png_destroy_read_struct(&png, &info, nullptr);
        std::fclose(fp);
        throw IoError("'" + path + "': libpng failed to decode");
    }

    png_init_io(png, fp);
    png_set_sig_bytes(png, 8);
    png_read_info(png, info);

    const png_byte color = png_get_color_type(png, info);
    const png_byte depth = png_get_bit_depth(png, info);
    if (color == PNG_COLOR_TYPE_PALETTE) png_set_palette_to_rgb(png);
    if (color == PNG_COLOR_TYPE_GRAY && depth < 8) png_set_expand_gray_1_2_4_to_8(png);
    if (color & PNG_COLOR_MASK_ALPHA) png_set_strip_alpha(png);
    if (color == PNG_COLOR_TYPE_RGB || color == PNG_COLOR_TYPE_RGB_ALPHA ||
        color == PNG_COLOR_TYPE_PALETTE)
        png_set_rgb_to_gray(png, 1, -1.0, -1.0);  // default luma weights
    if (depth == 16) png_set_strip_16(png);
    png_read_update_info(png, info);

    RawGray img;
    img.rows = static_cast<int>(png_get_image_height(png, info));
    img.cols = static_cast<int>(png_get_image_width(png, info));
    img.values.resize(static_cast<size_t>(img.rows) * img.cols);

    std::vector<uint8_t> row(png_get_rowbytes(png, info));
    for (int i = 0; i < img.rows; ++i) {
        png_read_row(png, row.data(), nullptr);
        for (int j = 0; j < img.cols; ++j)
            img.values[static_cast<size_t>(i) * img.cols + j] = row[j] / 255.0;
    }
    png_read_end(png, nullptr);
    png_destroy_read_struct(&png, &info, nullptr);
    std::fclose(fp);
    return img;
}

inline void write_png(const RawGray& img, const std::string& path) {
    std::FILE* fp = std::fopen(path.c_str(), "wb");
    if (!fp) throw IoError("cannot open '" + path + "' for writing");

    png_structp png = png_create_write_struct(PNG_LIBPNG_VER_STRING, nullptr, nullptr, nullptr);
    png_infop info = png ? png_create_info_struct(png) : nullptr;
    if (!png || !info) {
        if (png) png_destroy_write_struct(&png, &info);
        std::fclose(fp);
        throw IoError("libpng initialization failed");
    }
    if (setjmp(png_jmpbuf(png))) {
        png_destroy_write_struct(&png, &info);
        std::fclose(fp);
        throw IoError("'" + path + "': libpng failed to encode");
    }

    png_init_io(png, fp);
    png_set_IHDR(png, info, img.cols, img.rows, 8, PNG_COLOR_TYPE_GRAY, PNG_INTERLACE_NONE,
                 PNG_COMPRESSION_TYPE_DEFAULT, PNG_FILTER_TYPE_DEFAULT);
    png_write_info(png, info);

    std::vector<uint8_t> row(img.cols);
    for (int i = 0; i < img.rows; ++i) {
        for (int j = 0; j < img.cols; ++j) {
            const double v = std::clamp(img.values[static_cast<size_t>(i) * img.cols + j], 0.0, 1.0);
            row[j] = static_cast<uint8_t>(std::lround(v * 255.0));
        }
        png_write_row(png, row.data());
    }
    png_write_end(png, nullptr);
    png_destroy_write_struct(&png, &info);
    std::fclose(fp);
}

inline RawGray read_raw(const std::string& path) {
    if (has_suffix(path, ".pgm") || has_suffix(path, ".PGM")) return read_pgm(path);
    if (has_suffix(path, ".png") || has_suffix(path, ".PNG")) return read_png(path);
    throw IoError("'" + path + "': unsupported image format (expected .pgm or .png)");
}

inline void write_raw(const RawGray& img, const std::string& path) {
    if (has_suffix(path, ".pgm") || has_suffix(path, ".PGM")) {
        write_pgm(img, path);
    } else if (has_suffix(path, ".png") || has_suffix(path, ".PNG")) {
        write_png(img, path);
    } else {
        throw IoError("'" + path + "': unsupported image format (expected .pgm or .png)");
    }
}

}  // namespace detail

/// Reads an 8/16-bit grayscale PGM or a PNG (color converted to luma).
/// Under the paper convention file white maps to 0.
inline Image2D read_image(const std::string& path,
                          IntensityConvention convention = IntensityConvention::Paper) {
    const detail::RawGray raw = detail::read_raw(path);
    if (raw.rows < 3 || raw.cols < 3)
        throw IoError("'" + path + "': image too small (need at least 3x3)");
    Image2D img(raw.rows, raw.cols);
    const bool invert = convention == IntensityConvention::Paper;
    for (size_t p = 0; p < raw.values.size(); ++p)
        img.data()[p] = invert ? 1.0 - raw.values[p] : raw.values[p];
    return img;
}

inline void write_image(const Image2D& image, const std::string& path,
                        IntensityConvention convention = IntensityConvention::Paper) {
    detail::RawGray raw;
    raw.rows = image.rows();
    raw.cols = image.cols();
    raw.values.resize(image.size());
    const bool invert = convention == IntensityConvention::Paper;
    for (size_t p = 0; p < raw.values.size(); ++p)
        raw.values[p] = invert ? 1.0 - image.data()[p] : image.data()[p];
    detail::write_raw(raw, path);
}

/// Masks are stored without convention games: values >= 1/2 mark corruption.
inline Mask read_mask(const std::string& path) {
    const detail::RawGray raw = detail::read_raw(path);
    Mask mask(raw.rows, raw.cols);
    for (int i = 0; i < raw.rows; ++i)
        for (int j = 0; j < raw.cols; ++j)
            mask.set(i, j, raw.values[static_cast<size_t>(i) * raw.cols + j] >= 0.5);
    return mask;
}

inline void write_mask(const Mask& mask, const std::string& path) {
    detail::RawGray raw;
    raw.rows = mask.rows();
    raw.cols = mask.cols();
    raw.values.resize(mask.size());
    for (int i = 0; i < mask.rows(); ++i)
        for (int j = 0; j < mask.cols(); ++j)
            raw.values[static_cast<size_t>(i) * mask.cols() + j] = mask.at(i, j) ? 1.0 : 0.0;
    detail::write_raw(raw, path);
}

/// Writes one image per theta slice (slice_###.pgm) plus the fiber maximum
/// (max_projection.pgm) into dir, for figure reproduction.
inline void write_stack_slices(const OrientationStack& stack, const std::string& dir,
                               IntensityConvention convention = IntensityConvention::Paper) {
    std::error_code ec;
    std::filesystem::create_directories(dir, ec);
    if (ec) throw IoError("cannot create directory '" + dir + "': " + ec.message());

    for (int k = 0; k < stack.n_theta(); ++k) {
        Image2D slice(stack.rows(), stack.cols());
        for (int i = 0; i < stack.rows(); ++i)
            for (int j = 0; j < stack.cols(); ++j)
                slice.at(i, j) = std::clamp(stack.at(k, i, j), 0.0, 1.0);
        char name[32];
        std::snprintf(name, sizeof(name), "slice_%03d.pgm", k);
        write_image(slice, (std::filesystem::path(dir) / name).string(), convention);
    }
    write_image(project_max(stack), (std::filesystem::path(dir) / "max_projection.pgm").string(),
                convention);
}

}  // namespace se2diff
