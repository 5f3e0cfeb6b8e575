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

#include <cstdint>
#include <fstream>
#include <string>

#include "doctest.h"
#include "graspsim/image.hpp"
#include "graspsim/rng.hpp"
#include "support.hpp"

using namespace graspsim;

namespace {

void write_bytes(const std::filesystem::path& p, const std::string& bytes) {
  std::ofstream out(p, std::ios::binary);
  out << bytes;
}

}  // namespace

TEST_CASE("grid indexing is row-major with x as column") {
  Grid<int> g(3, 2, 7);
  CHECK(g.width() == 3);
  CHECK(g.height() == 2);
  g.at(2, 1) = 42;
  CHECK(g.data()[5] == 42);
  CHECK(g.row(1)[2] == 42);
  CHECK(g.contains(2, 1));
  CHECK_FALSE(g.contains(3, 0));
  CHECK_FALSE(g.contains(0, -1));
  CHECK_THROWS_AS(Grid<int>(-1, 2), std::invalid_argument);
  CHECK(Grid<int>().empty());
}

TEST_CASE("8-bit PGM round trip") {
  testing::TempDir dir("pgm8");
  Rng rng(1);
  Gray8 img(37, 19);
  for (auto& v : img.data()) v = static_cast<std::uint8_t>(rng.below(256));
  write_pgm8(dir.path() / "a.pgm", img);
  CHECK(read_pgm8(dir.path() / "a.pgm") == img);
  const Gray16 wide = read_pgm16(dir.path() / "a.pgm");
  REQUIRE(wide.same_shape(img));
  for (std::size_t i = 0; i < img.data().size(); ++i) CHECK(wide.data()[i] == img.data()[i]);
}

TEST_CASE("16-bit PGM round trip is big-endian") {
  testing::TempDir dir("pgm16");
  Gray16 img(2, 1);
  img.at(0, 0) = 0x1234;
  img.at(1, 0) = 65535;
  write_pgm16(dir.path() / "b.pgm", img);
  const std::string bytes = testing::slurp(dir.path() / "b.pgm");
  CHECK(bytes == std::string("P5\n2 1\n65535\n\x12\x34\xff\xff", 17));
  CHECK(read_pgm16(dir.path() / "b.pgm") == img);
  CHECK_THROWS_AS(read_pgm8(dir.path() / "b.pgm"), PgmError);
}

TEST_CASE("8-bit PGM golden bytes") {
  testing::TempDir dir("golden");
  Gray8 img(3, 2);
  img.data() = {0, 1, 2, 253, 254, 255};
  write_pgm8(dir.path() / "g.pgm", img);
  CHECK(testing::slurp(dir.path() / "g.pgm") == std::string("P5\n3 2\n255\n\x00\x01\x02\xfd\xfe\xff", 17));
}

TEST_CASE("ASCII PGM with comments") {
  testing::TempDir dir("p2");
  write_bytes(dir.path() / "c.pgm", "P2\n# a comment\n3 2 # trailing\n100\n0 50 100\n1 2 3\n");
  const Gray8 img = read_pgm8(dir.path() / "c.pgm");
  CHECK(img.width() == 3);
  CHECK(img.height() == 2);
  CHECK(img.at(2, 0) == 100);
  CHECK(img.at(0, 1) == 1);
}

TEST_CASE("malformed PGM files raise PgmError") {
  testing::TempDir dir("bad");
  const auto p = dir.path() / "x.pgm";
  write_bytes(p, "P6\n1 1\n255\n\x00");
  CHECK_THROWS_AS(read_pgm8(p), PgmError);
  write_bytes(p, "P5\n4 4\n255\n\x01\x02");
  CHECK_THROWS_AS(read_pgm8(p), PgmError);
  write_bytes(p, "P5\n0 4\n255\n");
  CHECK_THROWS_AS(read_pgm8(p), PgmError);
  write_bytes(p, "P2\n2 1\n10\n5 11\n");
  CHECK_THROWS_AS(read_pgm8(p), PgmError);
  write_bytes(p, "P5\n2 1\n70000\n");
  CHECK_THROWS_AS(read_pgm16(p), PgmError);
  write_bytes(p, "");
  CHECK_THROWS_AS(read_pgm8(p), PgmError);
  CHECK_THROWS_AS(read_pgm8(dir.path() / "missing.pgm"), PgmError);
}
