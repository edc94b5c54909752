#pragma once

#include <cstdint>
#include <fstream>
#include <string>
#include <vector>

#include "etcjpeg/errors.hpp"

namespace etcjpeg {

// 8-bit raster with planar storage: samples of channel c occupy
// [c*w*h, (c+1)*w*h), row-major within the plane.
struct Image {
  int width = 0;
  int height = 0;
  int channels = 1;
  std::vector<std::uint8_t> samples;

  Image() = default;
  Image(int w, int h, int c) : width(w), height(h), channels(c) {
    if (w < 0 || h < 0 || (c != 1 && c != 3))
      throw Error(ErrorCode::channel, "images must have 1 or 3 channels");
    samples.assign(static_cast<std::size_t>(w) * h * c, 0);
  }

  std::size_t plane_size() const { return static_cast<std::size_t>(width) * height; }

  std::uint8_t& at(int x, int y, int c = 0) {
    return samples[static_cast<std::size_t>(c) * plane_size() + static_cast<std::size_t>(y) * width + x];
  }
  std::uint8_t at(int x, int y, int c = 0) const {
    return samples[static_cast<std::size_t>(c) * plane_size() + static_cast<std::size_t>(y) * width + x];
  }

  const std::uint8_t* plane(int c) const { return samples.data() + static_cast<std::size_t>(c) * plane_size(); }
  std::uint8_t* plane(int c) { return samples.data() + static_cast<std::size_t>(c) * plane_size(); }

  bool same_shape(const Image& o) const {
    return width == o.width && height == o.height && channels == o.channels;
  }
  bool operator==(const Image& o) const {
    return same_shape(o) && samples == o.samples;
  }
};

namespace detail {

inline int pnm_token(std::istream& in) {
  // Skips whitespace and '#' comments between header fields.
  int c;
  while ((c = in.get()) != EOF) {
    if (c == '#') {
      while ((c = in.get()) != EOF && c != '\n') {}
    } else if (!std::isspace(c)) {
      int v = 0;
      bool any = false;
      while (c != EOF && std::isdigit(c)) {
        v = v * 10 + (c - '0');
        any = true;
        c = in.get();
      }
      if (!any) throw Error(ErrorCode::io, "malformed PNM header");
      return v;
    }
  }
  throw Error(ErrorCode::io, "truncated PNM header");
}

}  // namespace detail

// Binary PPM (P6, 3 channels) and PGM (P5, 1 channel), maxval 255.
inline Image read_pnm(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::io, "cannot open " + path);
  char magic[2];
  in.read(magic, 2);
  if (!in || magic[0] != 'P' || (magic[1] != '5' && magic[1] != '6'))
    throw Error(ErrorCode::io, path + " is not a binary PGM/PPM file");
  int channels = magic[1] == '6' ? 3 : 1;
  int w = detail::pnm_token(in);
  int h = detail::pnm_token(in);
  int maxval = detail::pnm_token(in);
  if (maxval != 255) throw Error(ErrorCode::io, "only maxval 255 is supported");

  Image img(w, h, channels);
  std::vector<std::uint8_t> row(static_cast<std::size_t>(w) * channels);
  for (int y = 0; y < h; ++y) {
    in.read(reinterpret_cast<char*>(row.data()), static_cast<std::streamsize>(row.size()));
    if (!in) throw Error(ErrorCode::io, "truncated pixel data in " + path);
    for (int x = 0; x < w; ++x)
      for (int c = 0; c < channels; ++c)
        img.at(x, y, c) = row[static_cast<std::size_t>(x) * channels + c];
  }
  return img;
}

inline void write_pnm(const std::string& path, const Image& img) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error(ErrorCode::io, "cannot write " + path);
  out << (img.channels == 3 ? "P6" : "P5") << "\n"
      << img.width << " " << img.height << "\n255\n";
  std::vector<std::uint8_t> row(static_cast<std::size_t>(img.width) * img.channels);
  for (int y = 0; y < img.height; ++y) {
    for (int x = 0; x < img.width; ++x)
      for (int c = 0; c < img.channels; ++c)
        row[static_cast<std::size_t>(x) * img.channels + c] = img.at(x, y, c);
    out.write(reinterpret_cast<const char*>(row.data()), static_cast<std::streamsize>(row.size()));
  }
  if (!out) throw Error(ErrorCode::io, "failed writing " + path);
}

}  // namespace etcjpeg
