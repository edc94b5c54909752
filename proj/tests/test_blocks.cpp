#include <catch_amalgamated.hpp>

#include <algorithm>

#include <etcjpeg/blocks.hpp>

#include "support/fixtures.hpp"

using namespace etcjpeg;

TEST_CASE("split produces row-major tiles with the right contents") {
  Image img(6, 4, 1);
  for (int y = 0; y < 4; ++y)
    for (int x = 0; x < 6; ++x) img.at(x, y) = static_cast<std::uint8_t>(10 * y + x);

  BlockGrid grid = split_blocks(img, 3, 2);
  REQUIRE(grid.cols == 2);
  REQUIRE(grid.rows == 2);
  REQUIRE(grid.tiles.size() == 4u);
  CHECK(grid.right_margin.empty());
  CHECK(grid.bottom_margin.empty());

  // tile 1 is the top-right block; its (0,0) pixel is image (3,0)
  CHECK(grid.tiles[1].at(0, 0) == 3);
  // tile 2 is the bottom-left block; its (1,1) pixel is image (1,3)
  CHECK(grid.tiles[2].at(1, 1) == 31);
}

TEST_CASE("split/merge is byte exact without margins") {
  const Image img = testsupport::synthetic_image(64, 48, 9);
  BlockGrid grid = split_blocks(img, 16, 16);
  REQUIRE(grid.cols == 4);
  REQUIRE(grid.rows == 3);
  CHECK(merge_blocks(grid) == img);
}

TEST_CASE("split/merge is byte exact with right and bottom margins") {
  // 70x50 with 16x16 blocks leaves a 6-pixel right margin and 2-pixel bottom margin
  const Image img = testsupport::synthetic_image(70, 50, 11);
  BlockGrid grid = split_blocks(img, 16, 16);
  REQUIRE(grid.cols == 4);
  REQUIRE(grid.rows == 3);
  CHECK(grid.right_margin.size() == 6u * 48u * 3u);
  CHECK(grid.bottom_margin.size() == 70u * 2u * 3u);
  CHECK(merge_blocks(grid) == img);
}

TEST_CASE("merge restores images after tile shuffling is undone") {
  const Image img = testsupport::synthetic_image(40, 40, 3);
  BlockGrid grid = split_blocks(img, 8, 8);
  std::reverse(grid.tiles.begin(), grid.tiles.end());
  std::reverse(grid.tiles.begin(), grid.tiles.end());
  CHECK(merge_blocks(grid) == img);
}

TEST_CASE("rectangular blocks are supported by the grid layer") {
  const Image img = testsupport::synthetic_image(24, 24, 4);
  BlockGrid grid = split_blocks(img, 8, 4);
  REQUIRE(grid.cols == 3);
  REQUIRE(grid.rows == 6);
  CHECK(merge_blocks(grid) == img);
}

TEST_CASE("split validation") {
  const Image img = testsupport::synthetic_image(16, 16, 0);
  CHECK_THROWS_WITH(split_blocks(img, 0, 8), Catch::Matchers::StartsWith("E_CONFIG"));
  CHECK_THROWS_WITH(split_blocks(img, 8, -1), Catch::Matchers::StartsWith("E_CONFIG"));
  CHECK_THROWS_WITH(split_blocks(img, 17, 8),
                    Catch::Matchers::StartsWith("E_EMPTY_GRID"));
  CHECK_THROWS_WITH(split_blocks(img, 8, 17),
                    Catch::Matchers::StartsWith("E_EMPTY_GRID"));
  CHECK_NOTHROW(split_blocks(img, 16, 16));
}
