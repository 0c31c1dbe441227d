#ifndef SHAPEPOSE_MANIFEST_H_
#define SHAPEPOSE_MANIFEST_H_

#include <filesystem>
#include <map>
#include <string>

#include "shapepose/mask_analysis.h"
#include "shapepose/pose_matching.h"

namespace shapepose {

struct ManifestClass {
  int class_id = 0;
  std::string name;
  std::filesystem::path model;    // absolute after loading
  std::filesystem::path library;  // absolute after loading
};

struct ManifestDefaults {
  double splat_radius = 0.03;  // world units
  int min_area = kDefaultMinArea;
  int top_k = kDefaultTopK;
};

// JSON project file:
//   {"version": 1, "calibration": "calibration.json", "signature_length": 360,
//    "defaults": {"splat_radius": 0.03, "min_area": 50, "top_k": 20},
//    "classes": [{"id": 1, "name": "box", "model": "models/box.xyz",
//                 "library": "libraries/box.splb"}, ...]}
// Relative paths resolve against the manifest's directory.
struct Manifest {
  std::filesystem::path path;
  std::filesystem::path calibration;
  int signature_length = kDefaultSignatureLength;
  ManifestDefaults defaults;
  std::map<int, ManifestClass> classes;

  // Throws UnknownClassError.
  const ManifestClass& at(int class_id) const;
  std::map<int, std::string> Names() const;
};

// Checks that ids are unique and in 1..255, and that the calibration file
// and every model file exist. Library files are checked when first used,
// since build-shapelib creates them. Throws FormatError.
Manifest LoadManifest(const std::filesystem::path& path);

// Writes `manifest` with paths relative to the manifest's own directory
// where possible.
void SaveManifest(const std::filesystem::path& path, const Manifest& manifest);

}  // namespace shapepose

#endif  // SHAPEPOSE_MANIFEST_H_
