#pragma once

// 8-bit RGB images with PNG read/write via libpng.

#include <cstdio>
#include <png.h>
#include <string>
#include <vector>

#include "fractile/common.hpp"
#include "fractile/raster.hpp"

namespace fractile {

struct Rgb {
    uint8_t r = 0, g = 0, b = 0;
    bool operator==(const Rgb& o) const { return r == o.r && g == o.g && b == o.b; }
};

struct ImageRGB8 {
    int width = 0, height = 0;
    std::vector<Rgb> pixels;   // row-major, top row first

    ImageRGB8() = default;
    ImageRGB8(int w, int h, Rgb fill = {0, 0, 0}) : width(w), height(h), pixels(std::size_t(w) * h, fill) {}

    Rgb& at(int x, int y) { return pixels[std::size_t(y) * width + x]; }
    const Rgb& at(int x, int y) const { return pixels[std::size_t(y) * width + x]; }
};

inline void write_png(const ImageRGB8& img, const std::string& path) {
    FILE* fp = std::fopen(path.c_str(), "wb");
    if (!fp) throw error("cannot open for writing: " + path);
    png_structp png = png_create_write_struct(PNG_LIBPNG_VER_STRING, nullptr, nullptr, nullptr);
    png_infop info = png_create_info_struct(png);
    if (setjmp(png_jmpbuf(png))) {
        png_destroy_write_struct(&png, &info);
        std::fclose(fp);
        throw error("png write failed: " + path);
    }
    png_init_io(png, fp);
    png_set_IHDR(png, info, img.width, img.height, 8, PNG_COLOR_TYPE_RGB, PNG_INTERLACE_NONE,
                 PNG_COMPRESSION_TYPE_DEFAULT, PNG_FILTER_TYPE_DEFAULT);
    png_write_info(png, info);
    std::vector<png_bytep> rows(img.height);
    for (int y = 0; y < img.height; ++y)
        rows[y] = const_cast<png_bytep>(reinterpret_cast<const png_byte*>(&img.at(0, y)));
    png_write_image(png, rows.data());
    png_write_end(png, nullptr);
    png_destroy_write_struct(&png, &info);
    std::fclose(fp);
}

inline ImageRGB8 read_png(const std::string& path) {
    FILE* fp = std::fopen(path.c_str(), "rb");
    if (!fp) throw error("cannot open for reading: " + path);
    png_structp png = png_create_read_struct(PNG_LIBPNG_VER_STRING, nullptr, nullptr, nullptr);
    png_infop info = png_create_info_struct(png);
    if (setjmp(png_jmpbuf(png))) {
        png_destroy_read_struct(&png, &info, nullptr);
        std::fclose(fp);
        throw error("png read failed: " + path);
    }
    png_init_io(png, fp);
    png_read_info(png, info);
    png_set_expand(png);
    png_set_strip_16(png);
    png_set_strip_alpha(png);
    png_set_gray_to_rgb(png);
    png_read_update_info(png, info);
    ImageRGB8 img(int(png_get_image_width(png, info)), int(png_get_image_height(png, info)));
    std::vector<png_bytep> rows(img.height);
    for (int y = 0; y < img.height; ++y)
        rows[y] = reinterpret_cast<png_byte*>(&img.at(0, y));
    png_read_image(png, rows.data());
    png_read_end(png, nullptr);
    png_destroy_read_struct(&png, &info, nullptr);
    std::fclose(fp);
    return img;
}

// occupancy raster as a black-on-white image (y axis up => top row is max y)
inline ImageRGB8 raster_to_image(const Raster& r, Rgb fg = {0, 0, 0}, Rgb bg = {255, 255, 255}) {
    ImageRGB8 img(int(r.nx()), int(r.ny()), bg);
    r.for_each_occupied([&](std::size_t i, std::size_t j) {
        img.at(int(i), int(r.ny() - 1 - j)) = fg;
    });
    return img;
}

} // namespace fractile
