#pragma once

#include <cstdint>
#include <vector>

#include "etcjpeg/image.hpp"

namespace etcjpeg {

// One block of pixels, planar like Image: sample (x,y,c) lives at
// c*w*h + y*w + x.
struct Tile {
  int w = 0, h = 0, channels = 1;
  std::vector<std::uint8_t> px;

  Tile() = default;
  Tile(int w_, int h_, int c_) : w(w_), h(h_), channels(c_) {
    px.assign(static_cast<std::size_t>(w) * h * c_, 0);
  }
  std::uint8_t& at(int x, int y, int c = 0) {
    return px[(static_cast<std::size_t>(c) * h + y) * w + x];
  }
  std::uint8_t at(int x, int y, int c = 0) const {
    return px[(static_cast<std::size_t>(c) * h + y) * w + x];
  }
  bool operator==(const Tile&) const = default;
};

// Image partitioned into cols x rows full blocks, row-major block order.
// Pixels right of the grid (partial columns) and below it (partial rows)
// are carried verbatim so merge_blocks can restore the image exactly.
struct BlockGrid {
  int block_w = 0, block_h = 0;
  int cols = 0, rows = 0;
  int channels = 1;
  int image_w = 0, image_h = 0;
  std::vector<Tile> tiles;
  std::vector<std::uint8_t> right_margin;   // x in [cols*Bx, image_w), y in [0, rows*By)
  std::vector<std::uint8_t> bottom_margin;  // full width, y in [rows*By, image_h)

  std::size_t size() const { return tiles.size(); }
};

inline BlockGrid split_blocks(const Image& img, int block_w, int block_h) {
  if (block_w < 1 || block_h < 1)
    throw Error(ErrorCode::config, "block dimensions must be positive");
  if (block_w > img.width || block_h > img.height)
    throw Error(ErrorCode::empty_grid, "block size exceeds image size");

  BlockGrid grid;
  grid.block_w = block_w;
  grid.block_h = block_h;
  grid.cols = img.width / block_w;
  grid.rows = img.height / block_h;
  grid.channels = img.channels;
  grid.image_w = img.width;
  grid.image_h = img.height;
  grid.tiles.reserve(static_cast<std::size_t>(grid.cols) * grid.rows);

  for (int by = 0; by < grid.rows; ++by)
    for (int bx = 0; bx < grid.cols; ++bx) {
      Tile t(block_w, block_h, img.channels);
      for (int c = 0; c < img.channels; ++c)
        for (int y = 0; y < block_h; ++y)
          for (int x = 0; x < block_w; ++x)
            t.at(x, y, c) = img.at(bx * block_w + x, by * block_h + y, c);
      grid.tiles.push_back(std::move(t));
    }

  const int grid_w = grid.cols * block_w;
  const int grid_h = grid.rows * block_h;
  for (int c = 0; c < img.channels; ++c)
    for (int y = 0; y < grid_h; ++y)
      for (int x = grid_w; x < img.width; ++x)
        grid.right_margin.push_back(img.at(x, y, c));
  for (int c = 0; c < img.channels; ++c)
    for (int y = grid_h; y < img.height; ++y)
      for (int x = 0; x < img.width; ++x)
        grid.bottom_margin.push_back(img.at(x, y, c));
  return grid;
}

inline Image merge_blocks(const BlockGrid& grid) {
  Image img(grid.image_w, grid.image_h, grid.channels);
  for (int by = 0; by < grid.rows; ++by)
    for (int bx = 0; bx < grid.cols; ++bx) {
      const Tile& t = grid.tiles[static_cast<std::size_t>(by) * grid.cols + bx];
      for (int c = 0; c < grid.channels; ++c)
        for (int y = 0; y < grid.block_h; ++y)
          for (int x = 0; x < grid.block_w; ++x)
            img.at(bx * grid.block_w + x, by * grid.block_h + y, c) = t.at(x, y, c);
    }

  const int grid_w = grid.cols * grid.block_w;
  const int grid_h = grid.rows * grid.block_h;
  std::size_t i = 0;
  for (int c = 0; c < grid.channels; ++c)
    for (int y = 0; y < grid_h; ++y)
      for (int x = grid_w; x < grid.image_w; ++x)
        img.at(x, y, c) = grid.right_margin[i++];
  i = 0;
  for (int c = 0; c < grid.channels; ++c)
    for (int y = grid_h; y < grid.image_h; ++y)
      for (int x = 0; x < grid.image_w; ++x)
        img.at(x, y, c) = grid.bottom_margin[i++];
  return img;
}

}  // namespace etcjpeg
