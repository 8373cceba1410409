#include "hide/image.hpp"

#include <png.h>

#include <algorithm>
#include <cstring>
#include <string>

#include "hide/error.hpp"

namespace hide {

Image::Image(int width, int height, Rgb fill) : width_(width), height_(height) {
  if (width < 0 || height < 0) throw ValidationError("image dimensions must be non-negative");
  pixels_.resize(static_cast<std::size_t>(width) * static_cast<std::size_t>(height) * 3);
  for (std::size_t i = 0; i < pixels_.size(); i += 3) {
    pixels_[i] = fill.r;
    pixels_[i + 1] = fill.g;
    pixels_[i + 2] = fill.b;
  }
}

void Image::paste(const Image& src, int sx, int sy, int w, int h, int dx, int dy) {
  if (w <= 0 || h <= 0) return;
  if (sx < 0 || sy < 0 || sx + w > src.width_ || sy + h > src.height_ || dx < 0 || dy < 0 ||
      dx + w > width_ || dy + h > height_) {
    throw ValidationError("paste rectangle outside image bounds");
  }
  const auto n = static_cast<std::size_t>(w) * 3;
  for (int y = 0; y < h; ++y) {
    std::memcpy(&pixels_[offset(dx, dy + y)], &src.pixels_[src.offset(sx, sy + y)], n);
  }
}

void Image::fill_rect(int x1, int y1, int x2, int y2, Rgb c) {
  x1 = std::max(x1, 0);
  y1 = std::max(y1, 0);
  x2 = std::min(x2, width_);
  y2 = std::min(y2, height_);
  for (int y = y1; y < y2; ++y) {
    for (int x = x1; x < x2; ++x) set(x, y, c);
  }
}

Image read_png(const std::filesystem::path& path) {
  png_image png;
  std::memset(&png, 0, sizeof(png));
  png.version = PNG_IMAGE_VERSION;
  if (!std::filesystem::exists(path)) throw IoError("cannot open image " + path.string());
  if (png_image_begin_read_from_file(&png, path.c_str()) == 0) {
    const std::string msg = png.message;
    png_image_free(&png);
    throw FormatError("cannot decode PNG " + path.string() + ": " + msg);
  }
  png.format = PNG_FORMAT_RGB;
  Image out(static_cast<int>(png.width), static_cast<int>(png.height));
  if (png_image_finish_read(&png, nullptr, out.bytes().data(), 0, nullptr) == 0) {
    const std::string msg = png.message;
    png_image_free(&png);
    throw FormatError("cannot decode PNG " + path.string() + ": " + msg);
  }
  return out;
}

void write_png(const Image& image, const std::filesystem::path& path) {
  if (image.empty()) throw ValidationError("cannot write an empty image");
  png_image png;
  std::memset(&png, 0, sizeof(png));
  png.version = PNG_IMAGE_VERSION;
  png.width = static_cast<png_uint_32>(image.width());
  png.height = static_cast<png_uint_32>(image.height());
  png.format = PNG_FORMAT_RGB;
  if (png_image_write_to_file(&png, path.c_str(), 0, image.bytes().data(), 0, nullptr) == 0) {
    const std::string msg = png.message;
    png_image_free(&png);
    throw IoError("cannot write PNG " + path.string() + ": " + msg);
  }
}

}  // namespace hide
