// Copyright 2026 The graspsim Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef GRASPSIM_IMAGE_HPP_
#define GRASPSIM_IMAGE_HPP_

#include <cstdint>
#include <filesystem>
#include <span>
#include <stdexcept>
#include <vector>

namespace graspsim {

/// Row-major 2-D grid; (x, y) = (column, row).
template <typename T>
class Grid {
 public:
  Grid() = default;
  Grid(int width, int height, T fill = T{})
      : width_(width), height_(height),
        data_(static_cast<std::size_t>(checked(width, height)), fill) {}

  int width() const { return width_; }
  int height() const { return height_; }
  bool empty() const { return data_.empty(); }
  bool same_shape(const auto& other) const {
    return width_ == other.width() && height_ == other.height();
  }
  bool contains(int x, int y) const { return x >= 0 && y >= 0 && x < width_ && y < height_; }

  T& at(int x, int y) { return data_[index(x, y)]; }
  const T& at(int x, int y) const { return data_[index(x, y)]; }

  std::span<T> row(int y) { return {data_.data() + index(0, y), static_cast<std::size_t>(width_)}; }
  std::span<const T> row(int y) const {
    return {data_.data() + index(0, y), static_cast<std::size_t>(width_)};
  }

  std::vector<T>& data() { return data_; }
  const std::vector<T>& data() const { return data_; }

  void fill(T value) { std::fill(data_.begin(), data_.end(), value); }

  bool operator==(const Grid&) const = default;

 private:
  static long checked(int w, int h) {
    if (w < 0 || h < 0) throw std::invalid_argument("Grid: negative size");
    return static_cast<long>(w) * h;
  }
  std::size_t index(int x, int y) const {
    return static_cast<std::size_t>(y) * static_cast<std::size_t>(width_) +
           static_cast<std::size_t>(x);
  }

  int width_ = 0;
  int height_ = 0;
  std::vector<T> data_;
};

using Gray8 = Grid<std::uint8_t>;
using Gray16 = Grid<std::uint16_t>;

class PgmError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Binary P5 writers. 16-bit samples are big-endian per the Netpbm format.
void write_pgm8(const std::filesystem::path& path, const Gray8& img);
void write_pgm16(const std::filesystem::path& path, const Gray16& img);

/// Reads P5 or P2 files with maxval up to 255.
Gray8 read_pgm8(const std::filesystem::path& path);
/// Reads P5 or P2 files of any maxval; 8-bit files widen losslessly.
Gray16 read_pgm16(const std::filesystem::path& path);

}  // namespace graspsim

#endif  // GRASPSIM_IMAGE_HPP_
