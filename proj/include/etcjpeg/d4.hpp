#pragma once

#include <utility>

#include "etcjpeg/blocks.hpp"
#include "etcjpeg/errors.hpp"

namespace etcjpeg {

// Orientation of a square block: `rot` quarter-turns clockwise (0..3),
// then a horizontal flip if `flip` is set. Encoded as index rot + 4*flip,
// covering all eight symmetries of the square.
struct D4Pose {
  int rot = 0;
  int flip = 0;

  static D4Pose from_index(int idx) {
    if (idx < 0 || idx > 7) throw Error(ErrorCode::config, "pose index out of range");
    return {idx % 4, idx / 4};
  }
  int index() const { return rot + 4 * flip; }

  // Pose that undoes this one. A lone rotation inverts to the opposite
  // rotation; rotate-then-flip is an involution, so it inverts to itself.
  D4Pose inverse() const {
    if (flip == 0) return {(4 - rot) % 4, 0};
    return {rot, 1};
  }

  bool operator==(const D4Pose&) const = default;
};

// Rotate a square tile 90 degrees clockwise: out(x, y) = in(y, N-1-x).
inline Tile rotate90_cw(const Tile& t) {
  if (t.w != t.h) throw Error(ErrorCode::shape, "rotation requires a square block");
  Tile out(t.w, t.h, t.channels);
  for (int c = 0; c < t.channels; ++c)
    for (int y = 0; y < t.h; ++y)
      for (int x = 0; x < t.w; ++x)
        out.at(x, y, c) = t.at(y, t.w - 1 - x, c);
  return out;
}

inline Tile flip_horizontal(const Tile& t) {
  Tile out(t.w, t.h, t.channels);
  for (int c = 0; c < t.channels; ++c)
    for (int y = 0; y < t.h; ++y)
      for (int x = 0; x < t.w; ++x)
        out.at(x, y, c) = t.at(t.w - 1 - x, y, c);
  return out;
}

inline Tile apply_pose(const Tile& t, const D4Pose& pose) {
  if (t.w != t.h) throw Error(ErrorCode::shape, "pose requires a square block");
  Tile out = t;
  for (int r = 0; r < pose.rot; ++r) out = rotate90_cw(out);
  if (pose.flip) out = flip_horizontal(out);
  return out;
}

// Index of g∘p, i.e. the single pose equal to "apply p, then apply g".
// With pose (r,f) acting as flip^f ∘ rot^r, the dihedral relation
// rot∘flip = flip∘rot⁻¹ gives the two cases below.
inline int compose_pose(int g_idx, int p_idx) {
  const D4Pose g = D4Pose::from_index(g_idx);
  const D4Pose p = D4Pose::from_index(p_idx);
  if (p.flip == 0) return D4Pose{(g.rot + p.rot) % 4, g.flip}.index();
  return D4Pose{(p.rot - g.rot + 4) % 4, g.flip ^ 1}.index();
}

// Where pixel (x, y) of a w x h canvas lands after the canvas itself is
// transformed by `pose`. Matches apply_pose on tiles, but also works on
// rectangular canvases (quarter turns swap the axes).
inline std::pair<int, int> pose_coord(int x, int y, int w, int h, const D4Pose& pose) {
  int cx = x, cy = y, cw = w, ch = h;
  for (int r = 0; r < pose.rot; ++r) {
    const int nx = ch - 1 - cy;
    const int ny = cx;
    cx = nx;
    cy = ny;
    std::swap(cw, ch);
  }
  if (pose.flip) cx = cw - 1 - cx;
  return {cx, cy};
}

}  // namespace etcjpeg
