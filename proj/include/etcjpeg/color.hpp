#pragma once

#include <string>

#include "etcjpeg/image.hpp"
#include "etcjpeg/util.hpp"

namespace etcjpeg {

// How the Y, Cb, Cr planes of an X x Y image are tiled into one
// single-channel image: side by side (3X x Y) or stacked (X x 3Y).
struct PlaneLayout {
  enum class Tag { horizontal, vertical };
  Tag tag = Tag::horizontal;
  int original_w = 0;
  int original_h = 0;
};

inline const char* layout_name(PlaneLayout::Tag t) {
  return t == PlaneLayout::Tag::horizontal ? "horizontal" : "vertical";
}

inline PlaneLayout::Tag layout_from_name(const std::string& s) {
  if (s == "horizontal" || s == "h") return PlaneLayout::Tag::horizontal;
  if (s == "vertical" || s == "v") return PlaneLayout::Tag::vertical;
  throw Error(ErrorCode::config, "unknown layout '" + s + "'");
}

struct YcbcrPlanes {
  Image y, cb, cr;
};

inline YcbcrPlanes rgb_to_ycbcr(const Image& img) {
  if (img.channels != 3)
    throw Error(ErrorCode::channel, "rgb_to_ycbcr needs a 3-channel image");
  YcbcrPlanes out{Image(img.width, img.height, 1), Image(img.width, img.height, 1),
                  Image(img.width, img.height, 1)};
  const std::size_t n = img.plane_size();
  const std::uint8_t* r = img.plane(0);
  const std::uint8_t* g = img.plane(1);
  const std::uint8_t* b = img.plane(2);
  for (std::size_t i = 0; i < n; ++i) {
    double rv = r[i], gv = g[i], bv = b[i];
    out.y.samples[i] = quantize_u8(0.299 * rv + 0.587 * gv + 0.114 * bv);
    out.cb.samples[i] = quantize_u8(-0.1687 * rv - 0.3313 * gv + 0.5 * bv + 128.0);
    out.cr.samples[i] = quantize_u8(0.5 * rv - 0.4187 * gv - 0.0813 * bv + 128.0);
  }
  return out;
}

inline Image ycbcr_to_rgb(const Image& y, const Image& cb, const Image& cr) {
  if (!y.same_shape(cb) || !y.same_shape(cr) || y.channels != 1)
    throw Error(ErrorCode::dimension, "YCbCr planes must be single-channel and share dimensions");
  Image out(y.width, y.height, 3);
  const std::size_t n = y.plane_size();
  std::uint8_t* r = out.plane(0);
  std::uint8_t* g = out.plane(1);
  std::uint8_t* b = out.plane(2);
  for (std::size_t i = 0; i < n; ++i) {
    double yv = y.samples[i];
    double cbv = cb.samples[i] - 128.0;
    double crv = cr.samples[i] - 128.0;
    r[i] = quantize_u8(yv + 1.402 * crv);
    g[i] = quantize_u8(yv - 0.3441 * cbv - 0.7141 * crv);
    b[i] = quantize_u8(yv + 1.772 * cbv);
  }
  return out;
}

inline Image pack_planes(const Image& y, const Image& cb, const Image& cr,
                         const PlaneLayout& layout) {
  if (!y.same_shape(cb) || !y.same_shape(cr) || y.channels != 1)
    throw Error(ErrorCode::dimension, "planes to pack must be single-channel and share dimensions");
  const int w = y.width, h = y.height;
  const Image* planes[3] = {&y, &cb, &cr};
  if (layout.tag == PlaneLayout::Tag::horizontal) {
    Image out(3 * w, h, 1);
    for (int p = 0; p < 3; ++p)
      for (int yy = 0; yy < h; ++yy)
        for (int xx = 0; xx < w; ++xx)
          out.at(p * w + xx, yy) = planes[p]->at(xx, yy);
    return out;
  }
  Image out(w, 3 * h, 1);
  for (int p = 0; p < 3; ++p)
    for (int yy = 0; yy < h; ++yy)
      for (int xx = 0; xx < w; ++xx)
        out.at(xx, p * h + yy) = planes[p]->at(xx, yy);
  return out;
}

inline YcbcrPlanes unpack_planes(const Image& img, const PlaneLayout& layout) {
  if (img.channels != 1)
    throw Error(ErrorCode::channel, "packed image must be single-channel");
  int w, h;
  if (layout.tag == PlaneLayout::Tag::horizontal) {
    if (img.width % 3 != 0)
      throw Error(ErrorCode::layout, "horizontal packed width must be divisible by 3");
    w = img.width / 3;
    h = img.height;
  } else {
    if (img.height % 3 != 0)
      throw Error(ErrorCode::layout, "vertical packed height must be divisible by 3");
    w = img.width;
    h = img.height / 3;
  }
  if (layout.original_w != 0 && (layout.original_w != w || layout.original_h != h))
    throw Error(ErrorCode::layout, "packed image does not match the declared original size");

  YcbcrPlanes out{Image(w, h, 1), Image(w, h, 1), Image(w, h, 1)};
  Image* planes[3] = {&out.y, &out.cb, &out.cr};
  for (int p = 0; p < 3; ++p)
    for (int yy = 0; yy < h; ++yy)
      for (int xx = 0; xx < w; ++xx) {
        if (layout.tag == PlaneLayout::Tag::horizontal)
          planes[p]->at(xx, yy) = img.at(p * w + xx, yy);
        else
          planes[p]->at(xx, yy) = img.at(xx, p * h + yy);
      }
  return out;
}

}  // namespace etcjpeg
