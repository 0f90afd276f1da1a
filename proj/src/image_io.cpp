#include "sarkit/image_io.hpp"

#include <png.h>

#include <cstdio>
#include <fstream>
#include <memory>
#include <string>
#include <vector>

namespace sarkit {

namespace {

struct FileCloser {
    void operator()(std::FILE* f) const {
        if (f) std::fclose(f);
    }
};
using FilePtr = std::unique_ptr<std::FILE, FileCloser>;

GrayRaster load_png(const std::filesystem::path& path) {
    FilePtr fp(std::fopen(path.c_str(), "rb"));
    if (!fp) throw IoError("cannot open " + path.string());

    png_structp png = png_create_read_struct(PNG_LIBPNG_VER_STRING, nullptr, nullptr, nullptr);
    if (!png) throw IoError("png read init failed");
    png_infop info = png_create_info_struct(png);
    if (!info) {
        png_destroy_read_struct(&png, nullptr, nullptr);
        throw IoError("png info init failed");
    }
    if (setjmp(png_jmpbuf(png))) {
        png_destroy_read_struct(&png, &info, nullptr);
        throw ParseError("failed to decode " + path.string());
    }

    png_init_io(png, fp.get());
    png_read_info(png, info);

    const png_uint_32 width = png_get_image_width(png, info);
    const png_uint_32 height = png_get_image_height(png, info);
    const int color_type = png_get_color_type(png, info);
    const int bit_depth = png_get_bit_depth(png, info);

    if (color_type != PNG_COLOR_TYPE_GRAY || bit_depth > 8) {
        png_destroy_read_struct(&png, &info, nullptr);
        throw ParseError(path.string() + ": expected 8-bit grayscale PNG");
    }
    if (bit_depth < 8) png_set_expand_gray_1_2_4_to_8(png);
    png_read_update_info(png, info);

    GrayRaster img(static_cast<int>(width), static_cast<int>(height));
    std::vector<png_bytep> rows(height);
    for (png_uint_32 y = 0; y < height; ++y) {
        rows[y] = img.data.data() + static_cast<std::size_t>(y) * width;
    }
    png_read_image(png, rows.data());
    png_read_end(png, nullptr);
    png_destroy_read_struct(&png, &info, nullptr);
    return img;
}

void save_png(const GrayRaster& img, const std::filesystem::path& path) {
    FilePtr fp(std::fopen(path.c_str(), "wb"));
    if (!fp) throw IoError("cannot write " + path.string());

    png_structp png = png_create_write_struct(PNG_LIBPNG_VER_STRING, nullptr, nullptr, nullptr);
    if (!png) throw IoError("png write init failed");
    png_infop info = png_create_info_struct(png);
    if (!info) {
        png_destroy_write_struct(&png, nullptr);
        throw IoError("png info init failed");
    }
    if (setjmp(png_jmpbuf(png))) {
        png_destroy_write_struct(&png, &info);
        throw IoError("failed to encode " + path.string());
    }

    png_init_io(png, fp.get());
    png_set_IHDR(png, info, static_cast<png_uint_32>(img.width),
                 static_cast<png_uint_32>(img.height), 8, PNG_COLOR_TYPE_GRAY,
                 PNG_INTERLACE_NONE, PNG_COMPRESSION_TYPE_DEFAULT, PNG_FILTER_TYPE_DEFAULT);
    png_write_info(png, info);

    std::vector<png_bytep> rows(img.height);
    for (int y = 0; y < img.height; ++y) {
        rows[y] = const_cast<png_bytep>(img.data.data() + static_cast<std::size_t>(y) * img.width);
    }
    png_write_image(png, rows.data());
    png_write_end(png, nullptr);
    png_destroy_write_struct(&png, &info);
}

GrayRaster load_pgm(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IoError("cannot open " + path.string());

    std::string magic;
    in >> magic;
    if (magic != "P5") throw ParseError(path.string() + ": expected binary PGM (P5)");

    // header tokens may be separated by whitespace and '#' comments
    auto next_int = [&in, &path]() {
        for (;;) {
            int c = in.peek();
            if (c == '#') {
                std::string line;
                std::getline(in, line);
            } else if (std::isspace(c)) {
                in.get();
            } else {
                break;
            }
        }
        long v = -1;
        in >> v;
        if (!in || v < 0) throw ParseError(path.string() + ": malformed PGM header");
        return v;
    };

    const long width = next_int();
    const long height = next_int();
    const long maxval = next_int();
    if (maxval != 255) throw ParseError(path.string() + ": PGM maxval must be 255");
    in.get();  // single whitespace before pixel data

    GrayRaster img(static_cast<int>(width), static_cast<int>(height));
    in.read(reinterpret_cast<char*>(img.data.data()), static_cast<std::streamsize>(img.size()));
    if (in.gcount() != static_cast<std::streamsize>(img.size())) {
        throw ParseError(path.string() + ": truncated PGM data");
    }
    return img;
}

void save_pgm(const GrayRaster& img, const std::filesystem::path& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw IoError("cannot write " + path.string());
    out << "P5\n" << img.width << " " << img.height << "\n255\n";
    out.write(reinterpret_cast<const char*>(img.data.data()),
              static_cast<std::streamsize>(img.size()));
    if (!out) throw IoError("short write to " + path.string());
}

bool has_extension(const std::filesystem::path& path, const char* ext) {
    std::string e = path.extension().string();
    for (auto& c : e) c = static_cast<char>(std::tolower(c));
    return e == ext;
}

}  // namespace

GrayRaster load_image(const std::filesystem::path& path) {
    if (has_extension(path, ".png")) return load_png(path);
    if (has_extension(path, ".pgm")) return load_pgm(path);
    throw IoError(path.string() + ": unsupported image format (use .png or .pgm)");
}

void save_image(const GrayRaster& img, const std::filesystem::path& path) {
    if (has_extension(path, ".png")) return save_png(img, path);
    if (has_extension(path, ".pgm")) return save_pgm(img, path);
    throw IoError(path.string() + ": unsupported image format (use .png or .pgm)");
}

BinaryMask load_mask(const std::filesystem::path& path) {
    const GrayRaster img = load_image(path);
    for (std::uint8_t v : img.data) {
        if (v != 0 && v != 255) {
            throw ParseError(path.string() + ": mask pixels must be 0 or 255, found " +
                             std::to_string(v));
        }
    }
    return mask_from_raster(img);
}

void save_mask(const BinaryMask& mask, const std::filesystem::path& path) {
    save_image(mask_to_raster(mask), path);
}

}  // namespace sarkit
