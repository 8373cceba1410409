#pragma once

#include <cstdint>
#include <filesystem>
#include <span>
#include <vector>

namespace hide {

struct Rgb {
  std::uint8_t r = 0;
  std::uint8_t g = 0;
  std::uint8_t b = 0;

  friend bool operator==(const Rgb&, const Rgb&) = default;
};

/// Fill used for blank cells of recomposed images.
inline constexpr Rgb kDefaultFill{128, 128, 128};

/// 8-bit interleaved RGB raster.
class Image {
 public:
  Image() = default;
  Image(int width, int height, Rgb fill = {});

  [[nodiscard]] int width() const { return width_; }
  [[nodiscard]] int height() const { return height_; }
  [[nodiscard]] bool empty() const { return width_ == 0 || height_ == 0; }

  [[nodiscard]] Rgb at(int x, int y) const {
    const auto* p = &pixels_[offset(x, y)];
    return {p[0], p[1], p[2]};
  }
  void set(int x, int y, Rgb c) {
    auto* p = &pixels_[offset(x, y)];
    p[0] = c.r;
    p[1] = c.g;
    p[2] = c.b;
  }

  /// One row of `width() * 3` bytes.
  [[nodiscard]] std::span<std::uint8_t> row(int y) {
    return {pixels_.data() + offset(0, y), static_cast<std::size_t>(width_) * 3};
  }
  [[nodiscard]] std::span<const std::uint8_t> row(int y) const {
    return {pixels_.data() + offset(0, y), static_cast<std::size_t>(width_) * 3};
  }

  [[nodiscard]] std::span<const std::uint8_t> bytes() const { return pixels_; }
  [[nodiscard]] std::span<std::uint8_t> bytes() { return pixels_; }

  /// Copy the rectangle [sx, sx+w) x [sy, sy+h) of `src` to (dx, dy).
  void paste(const Image& src, int sx, int sy, int w, int h, int dx, int dy);
  void fill_rect(int x1, int y1, int x2, int y2, Rgb c);

  friend bool operator==(const Image&, const Image&) = default;

 private:
  [[nodiscard]] std::size_t offset(int x, int y) const {
    return (static_cast<std::size_t>(y) * static_cast<std::size_t>(width_) +
            static_cast<std::size_t>(x)) * 3;
  }

  int width_ = 0;
  int height_ = 0;
  std::vector<std::uint8_t> pixels_;
};

/// Reads any PNG, converting to 8-bit RGB (alpha is dropped).
Image read_png(const std::filesystem::path& path);
void write_png(const Image& image, const std::filesystem::path& path);

}  // namespace hide
