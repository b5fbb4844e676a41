#ifndef PLASMO_PNG_IO_HPP
#define PLASMO_PNG_IO_HPP

#include <png.h>

#include <stdexcept>
#include <string>

#include "plasmo/image.hpp"

namespace plasmo {

inline RgbImage read_png(const std::string& path) {
    png_image pi{};
    pi.version = PNG_IMAGE_VERSION;
    if (!png_image_begin_read_from_file(&pi, path.c_str()))
        throw std::runtime_error("read_png: cannot open " + path + ": " + pi.message);
    pi.format = PNG_FORMAT_RGB;
    RgbImage img(static_cast<int>(pi.width), static_cast<int>(pi.height));
    if (!png_image_finish_read(&pi, nullptr, img.data.data(), 0, nullptr)) {
        png_image_free(&pi);
        throw std::runtime_error("read_png: decode failed for " + path + ": " + pi.message);
    }
    return img;
}

inline void write_png(const std::string& path, const RgbImage& img) {
    png_image pi{};
    pi.version = PNG_IMAGE_VERSION;
    pi.width = static_cast<png_uint_32>(img.width);
    pi.height = static_cast<png_uint_32>(img.height);
    pi.format = PNG_FORMAT_RGB;
    if (!png_image_write_to_file(&pi, path.c_str(), 0, img.data.data(), 0, nullptr))
        throw std::runtime_error("write_png: cannot write " + path + ": " + pi.message);
}

}  // namespace plasmo

#endif
