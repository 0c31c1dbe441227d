#ifndef SHAPEPOSE_IMAGE_H_
#define SHAPEPOSE_IMAGE_H_

#include <cstdint>
#include <filesystem>
#include <stdexcept>
#include <vector>

namespace shapepose {

struct Pixel {
  int x = 0;
  int y = 0;
  friend bool operator==(const Pixel&, const Pixel&) = default;
};

// Row-major 8-bit raster.
template <typename Tag>
class Raster {
 public:
  Raster() = default;
  Raster(int width, int height) : width_(width), height_(height) {
    if (width <= 0 || height <= 0) {
      throw std::invalid_argument("raster dimensions must be positive");
    }
    data_.assign(static_cast<std::size_t>(width) * height, 0);
  }

  int width() const { return width_; }
  int height() const { return height_; }
  bool Contains(int x, int y) const {
    return x >= 0 && y >= 0 && x < width_ && y < height_;
  }

  std::uint8_t at(int x, int y) const { return data_[Index(x, y)]; }
  std::uint8_t& at(int x, int y) { return data_[Index(x, y)]; }

  const std::vector<std::uint8_t>& data() const { return data_; }
  std::vector<std::uint8_t>& data() { return data_; }

  friend bool operator==(const Raster&, const Raster&) = default;

 private:
  std::size_t Index(int x, int y) const {
    return static_cast<std::size_t>(y) * width_ + x;
  }
  int width_ = 0;
  int height_ = 0;
  std::vector<std::uint8_t> data_;
};

struct BinaryMaskTag {};
struct LabelMapTag {};

// Pixel values are 0 (background) or 1 (object).
using BinaryMask = Raster<BinaryMaskTag>;
// Pixel values are class ids, 0 = background.
using LabelMap = Raster<LabelMapTag>;

std::size_t CountForeground(const BinaryMask& mask);

// Throws std::invalid_argument if a label exceeds `num_classes`.
void ValidateLabels(const LabelMap& map, int num_classes);

// Masks are written as 0/255 8-bit binary PGM; label maps as raw class ids.
void WritePgm(const std::filesystem::path& path, const BinaryMask& mask);
void WritePgm(const std::filesystem::path& path, const LabelMap& map);
// Reads P5 (binary) or P2 (ASCII) PGM with maxval <= 255.
LabelMap ReadLabelMap(const std::filesystem::path& path);
// Any nonzero pixel is foreground.
BinaryMask ReadMask(const std::filesystem::path& path);

}  // namespace shapepose

#endif  // SHAPEPOSE_IMAGE_H_
