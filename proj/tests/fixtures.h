#ifndef SHAPEPOSE_TESTS_FIXTURES_H_
#define SHAPEPOSE_TESTS_FIXTURES_H_

#include "shapepose/models.h"
#include "shapepose/shape_library.h"

namespace shapepose::testing {

// Models and small libraries shared by several tests, built once.
inline const PointCloud& Box() {
  static const PointCloud box = MakeBox(8000);
  return box;
}

inline const PointCloud& Cup() {
  static const PointCloud cup = MakeCup(8000);
  return cup;
}

inline const ShapeLibrary& BoxLibrary() {
  static const ShapeLibrary lib = [] {
    LibraryOptions opt;
    opt.n_views = 60;
    return BuildShapeLibrary(Box(), 1, opt);
  }();
  return lib;
}

inline const ShapeLibrary& CupLibrary() {
  static const ShapeLibrary lib = [] {
    LibraryOptions opt;
    opt.n_views = 200;
    return BuildShapeLibrary(Cup(), 3, opt);
  }();
  return lib;
}

}  // namespace shapepose::testing

#endif  // SHAPEPOSE_TESTS_FIXTURES_H_
