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

#include "graspsim/image.hpp"

#include <cctype>
#include <fstream>
#include <iterator>
#include <string>

namespace graspsim {

namespace {

struct PgmHeader {
  bool binary = true;
  int width = 0;
  int height = 0;
  int maxval = 0;
};

class ByteReader {
 public:
  explicit ByteReader(std::vector<char> bytes) : bytes_(std::move(bytes)) {}

  bool eof() const { return pos_ >= bytes_.size(); }
  int peek() const { return eof() ? -1 : static_cast<unsigned char>(bytes_[pos_]); }
  int get() { return eof() ? -1 : static_cast<unsigned char>(bytes_[pos_++]); }

  void skip_space_and_comments() {
    while (!eof()) {
      const int c = peek();
      if (c == '#') {
        while (!eof() && get() != '\n') {
        }
      } else if (std::isspace(c)) {
        ++pos_;
      } else {
        break;
      }
    }
  }

  int read_int(const char* what) {
    skip_space_and_comments();
    if (eof() || !std::isdigit(peek())) {
      throw PgmError(std::string("pgm: expected ") + what);
    }
    long value = 0;
    while (!eof() && std::isdigit(peek())) {
      value = value * 10 + (get() - '0');
      if (value > 1'000'000'000L) throw PgmError(std::string("pgm: ") + what + " too large");
    }
    return static_cast<int>(value);
  }

  std::size_t pos() const { return pos_; }
  std::size_t remaining() const { return bytes_.size() - pos_; }
  const char* data() const { return bytes_.data(); }
  void advance(std::size_t n) { pos_ += n; }

 private:
  std::vector<char> bytes_;
  std::size_t pos_ = 0;
};

ByteReader open_bytes(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw PgmError("pgm: cannot open " + path.string());
  std::vector<char> bytes((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
  return ByteReader(std::move(bytes));
}

PgmHeader read_header(ByteReader& r) {
  PgmHeader h;
  if (r.get() != 'P') throw PgmError("pgm: bad magic");
  const int kind = r.get();
  if (kind == '5') {
    h.binary = true;
  } else if (kind == '2') {
    h.binary = false;
  } else {
    throw PgmError("pgm: unsupported magic (expected P5 or P2)");
  }
  h.width = r.read_int("width");
  h.height = r.read_int("height");
  h.maxval = r.read_int("maxval");
  if (h.width <= 0 || h.height <= 0) throw PgmError("pgm: non-positive size");
  if (h.maxval <= 0 || h.maxval > 65535) throw PgmError("pgm: maxval out of range");
  if (h.binary) {
    // Exactly one whitespace byte separates the header from the raster.
    if (!std::isspace(r.get())) throw PgmError("pgm: missing raster separator");
  }
  return h;
}

Gray16 read_raster(ByteReader& r, const PgmHeader& h) {
  Gray16 img(h.width, h.height);
  auto& out = img.data();
  if (h.binary) {
    const std::size_t bps = h.maxval > 255 ? 2 : 1;
    if (r.remaining() < out.size() * bps) throw PgmError("pgm: truncated raster");
    const auto* p = reinterpret_cast<const unsigned char*>(r.data() + r.pos());
    for (std::size_t i = 0; i < out.size(); ++i) {
      out[i] = bps == 2 ? static_cast<std::uint16_t>((p[2 * i] << 8) | p[2 * i + 1]) : p[i];
    }
    r.advance(out.size() * bps);
  } else {
    for (auto& v : out) v = static_cast<std::uint16_t>(r.read_int("sample"));
  }
  for (auto v : out) {
    if (v > h.maxval) throw PgmError("pgm: sample exceeds maxval");
  }
  return img;
}

void write_bytes(const std::filesystem::path& path, const std::string& header,
                 const std::vector<unsigned char>& raster) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw PgmError("pgm: cannot write " + path.string());
  out << header;
  out.write(reinterpret_cast<const char*>(raster.data()),
            static_cast<std::streamsize>(raster.size()));
  if (!out) throw PgmError("pgm: write failed for " + path.string());
}

}  // namespace

void write_pgm8(const std::filesystem::path& path, const Gray8& img) {
  const std::string header = "P5\n" + std::to_string(img.width()) + " " +
                             std::to_string(img.height()) + "\n255\n";
  std::vector<unsigned char> raster(img.data().begin(), img.data().end());
  write_bytes(path, header, raster);
}

void write_pgm16(const std::filesystem::path& path, const Gray16& img) {
  const std::string header = "P5\n" + std::to_string(img.width()) + " " +
                             std::to_string(img.height()) + "\n65535\n";
  std::vector<unsigned char> raster;
  raster.reserve(img.data().size() * 2);
  for (auto v : img.data()) {
    raster.push_back(static_cast<unsigned char>(v >> 8));
    raster.push_back(static_cast<unsigned char>(v & 0xff));
  }
  write_bytes(path, header, raster);
}

Gray8 read_pgm8(const std::filesystem::path& path) {
  auto r = open_bytes(path);
  const PgmHeader h = read_header(r);
  if (h.maxval > 255) throw PgmError("pgm: expected 8-bit image, got maxval " + std::to_string(h.maxval));
  const Gray16 wide = read_raster(r, h);
  Gray8 img(h.width, h.height);
  for (std::size_t i = 0; i < wide.data().size(); ++i) {
    img.data()[i] = static_cast<std::uint8_t>(wide.data()[i]);
  }
  return img;
}

Gray16 read_pgm16(const std::filesystem::path& path) {
  auto r = open_bytes(path);
  const PgmHeader h = read_header(r);
  return read_raster(r, h);
}

}  // namespace graspsim
