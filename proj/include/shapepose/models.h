#ifndef SHAPEPOSE_MODELS_H_
#define SHAPEPOSE_MODELS_H_

#include <string>
#include <vector>

#include "shapepose/geometry.h"

namespace shapepose {

// Procedural surface point clouds standing in for scanned desk objects.
// Each is centred on its point mean, has a diameter between 1.3 and 2 scene units
// and is fully determined by `n_points` and the fixed internal seed.
PointCloud MakeBox(int n_points = 20000);     // 1.6 × 1.0 × 0.6 cuboid
PointCloud MakeBottle(int n_points = 20000);  // cylinder, shoulder, neck
PointCloud MakeCup(int n_points = 20000);     // open cylinder with handle
PointCloud MakePlate(int n_points = 16000);   // shallow dish
PointCloud MakeSpoon(int n_points = 10000);   // bowl on a thin stem

struct ProceduralClass {
  int class_id;
  std::string name;
};

// box=1, bottle=2, cup=3, plate=4, spoon=5.
const std::vector<ProceduralClass>& ProceduralClasses();

// Throws std::invalid_argument for an unknown name.
PointCloud MakeProceduralModel(const std::string& name);

}  // namespace shapepose

#endif  // SHAPEPOSE_MODELS_H_
