#ifndef SHAPEPOSE_CLOUD_IO_H_
#define SHAPEPOSE_CLOUD_IO_H_

#include <filesystem>

#include "shapepose/geometry.h"

namespace shapepose {

// ASCII XYZ: one "x y z" triple per line; blank lines and '#' comments are
// skipped.
PointCloud ReadXyz(const std::filesystem::path& path);
void WriteXyz(const std::filesystem::path& path, const PointCloud& cloud);

// ASCII PLY with a vertex element; only x, y, z are read, any other vertex
// properties are skipped. Binary PLY is rejected.
PointCloud ReadPly(const std::filesystem::path& path);

// Dispatches on the extension (.ply, anything else is XYZ). NaN or other
// non-finite coordinates are rejected with FormatError.
PointCloud ReadPointCloud(const std::filesystem::path& path);

}  // namespace shapepose

#endif  // SHAPEPOSE_CLOUD_IO_H_
