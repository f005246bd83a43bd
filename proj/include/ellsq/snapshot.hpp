#pragma once

#include <string>

#include "ellsq/field.hpp"

namespace ellsq {

// Field snapshot file: a fixed 64-byte header followed by the row-major
// float64 little-endian site values.
//
//   offset  size  content
//        0     8  magic "FLDSNAP\0"
//        8     2  version (u16, = 1)
//       10     2  dtype   (u16, = 1: float64 little-endian)
//       12     2  ndims   (u16, <= 4)
//       14     2  n_x_axes (u16, 0 or 2)
//       16    16  dims[4]    (u32 each; unused slots 0)
//       32    32  extents[4] (f64 each; unused slots 0)
//
// The reader validates every header field and the exact payload length, and
// rejects non-finite values.
void write_snapshot(const std::string& path, const RealField& field);
RealField read_snapshot(const std::string& path);

}  // namespace ellsq
