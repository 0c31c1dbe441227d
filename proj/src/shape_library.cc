#include "shapepose/shape_library.h"

#include <bit>
#include <cmath>
#include <cstring>
#include <exception>
#include <fstream>
#include <stdexcept>
#include <string>

#include "shapepose/error.h"

namespace shapepose {

static_assert(std::endian::native == std::endian::little,
              "library files are written in host order, which must be little-endian");

void ShapeLibrary::Validate() const {
  if (entries.empty()) throw std::invalid_argument("shape library has no views");
  if (!(view_distance > 0.0)) {
    throw std::invalid_argument("library view distance must be positive");
  }
  intrinsics.Validate();
  const int n = entries.front().signature.size();
  for (const ShapeLibraryEntry& e : entries) {
    if (e.signature.size() == 0 || e.signature.size() != n) {
      throw std::invalid_argument("library signatures must share a nonzero length");
    }
    if (!(e.area > 0.0)) throw std::invalid_argument("library view with zero area");
    if (e.view.view_distance != view_distance) {
      throw std::invalid_argument("library views must share the view distance");
    }
  }
}

CameraIntrinsics LibraryIntrinsics(const PointCloud& model, double view_distance,
                                   int resolution, double framing) {
  const double radius = model.MaxRadius();
  if (!(view_distance > radius)) {
    throw std::invalid_argument("view distance must exceed the model radius");
  }
  CameraIntrinsics intr;
  intr.width = resolution;
  intr.height = resolution;
  intr.principal_point = Vec2(resolution / 2, resolution / 2);
  // A point at lateral distance <= radius and depth >= z_m - radius lands
  // within framing/2 of the image height from the centre.
  const double r = std::max(radius, 1e-12);
  intr.focal_length = framing * resolution * (view_distance - r) / (2.0 * r);
  return intr;
}

RigidTransform LibraryViewPose(const ViewSample& view) {
  return RigidTransform(SphereViewRotation(view.theta1, view.theta2),
                        Point3(0.0, 0.0, view.view_distance));
}

ShapeLibrary BuildShapeLibrary(const PointCloud& model, int class_id,
                               const LibraryOptions& options,
                               const CameraIntrinsics& intrinsics) {
  if (options.n_views < 1) throw std::invalid_argument("n_views must be >= 1");
  intrinsics.Validate();
  std::vector<ViewSample> views;
  if (options.n_views == 1) {
    views.push_back(ViewSample{0.0, 0.0, options.view_distance});
  } else {
    views = SampleViewSphere(options.n_views, options.view_distance);
  }
  const double radius_px = SplatRadiusPixels(intrinsics, options.splat_radius,
                                             options.view_distance);

  ShapeLibrary lib;
  lib.class_id = class_id;
  lib.view_distance = options.view_distance;
  lib.splat_radius = options.splat_radius;
  lib.intrinsics = intrinsics;
  lib.entries.resize(views.size());
  std::vector<std::exception_ptr> errors(views.size());
  const long n = static_cast<long>(views.size());
#pragma omp parallel for schedule(dynamic)
  for (long i = 0; i < n; ++i) {
    try {
      const BinaryMask mask = RenderSilhouette(model, LibraryViewPose(views[i]),
                                               intrinsics, radius_px);
      const Segment seg = AnalyzeMask(mask, intrinsics.principal_point,
                                      options.signature_length);
      lib.entries[i] = ShapeLibraryEntry{views[i], static_cast<double>(seg.area()),
                                         seg.centroid, seg.signature};
    } catch (...) {
      errors[i] = std::current_exception();
    }
  }
  for (long i = 0; i < n; ++i) {
    if (!errors[i]) continue;
    try {
      std::rethrow_exception(errors[i]);
    } catch (const std::exception& e) {
      throw Error("view " + std::to_string(i) + ": " + e.what());
    }
  }
  return lib;
}

ShapeLibrary BuildShapeLibrary(const PointCloud& model, int class_id,
                               const LibraryOptions& options) {
  return BuildShapeLibrary(model, class_id, options,
                           LibraryIntrinsics(model, options.view_distance));
}

namespace {

constexpr char kMagic[4] = {'S', 'P', 'L', 'B'};
constexpr std::uint32_t kVersion = 1;

class Writer {
 public:
  explicit Writer(std::ostream& out) : out_(out) {}
  template <typename T>
  void Put(T v) {
    out_.write(reinterpret_cast<const char*>(&v), sizeof(T));
  }

 private:
  std::ostream& out_;
};

class Reader {
 public:
  Reader(std::istream& in, std::string name) : in_(in), name_(std::move(name)) {}
  template <typename T>
  T Get() {
    T v;
    in_.read(reinterpret_cast<char*>(&v), sizeof(T));
    if (in_.gcount() != static_cast<std::streamsize>(sizeof(T))) {
      throw FormatError("truncated shape library " + name_);
    }
    return v;
  }

 private:
  std::istream& in_;
  std::string name_;
};

}  // namespace

void SaveShapeLibrary(const std::filesystem::path& path, const ShapeLibrary& lib) {
  lib.Validate();
  std::ofstream out(path, std::ios::binary);
  if (!out) throw FormatError("cannot write " + path.string());
  out.write(kMagic, 4);
  Writer w(out);
  w.Put<std::uint32_t>(kVersion);
  w.Put<std::int32_t>(lib.class_id);
  w.Put<std::uint32_t>(static_cast<std::uint32_t>(lib.entries.size()));
  w.Put<std::uint32_t>(static_cast<std::uint32_t>(lib.signature_length()));
  w.Put<double>(lib.view_distance);
  w.Put<double>(lib.splat_radius);
  w.Put<double>(lib.intrinsics.focal_length);
  w.Put<double>(lib.intrinsics.principal_point.x());
  w.Put<double>(lib.intrinsics.principal_point.y());
  w.Put<std::int32_t>(lib.intrinsics.width);
  w.Put<std::int32_t>(lib.intrinsics.height);
  for (const ShapeLibraryEntry& e : lib.entries) {
    w.Put<double>(e.view.theta1);
    w.Put<double>(e.view.theta2);
    w.Put<double>(e.area);
    w.Put<double>(e.centroid_offset.x());
    w.Put<double>(e.centroid_offset.y());
    for (double s : e.signature.samples) w.Put<double>(s);
  }
  if (!out) throw FormatError("failed writing " + path.string());
}

ShapeLibrary LoadShapeLibrary(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw FormatError("cannot read " + path.string());
  char magic[4];
  in.read(magic, 4);
  if (in.gcount() != 4 || std::memcmp(magic, kMagic, 4) != 0) {
    throw FormatError("not a shape library: " + path.string());
  }
  Reader r(in, path.string());
  if (r.Get<std::uint32_t>() != kVersion) {
    throw FormatError("unsupported shape library version in " + path.string());
  }
  ShapeLibrary lib;
  lib.class_id = r.Get<std::int32_t>();
  const std::uint32_t n_views = r.Get<std::uint32_t>();
  const std::uint32_t n_sig = r.Get<std::uint32_t>();
  if (n_views == 0 || n_sig == 0 || n_views > 1000000 || n_sig > 1000000) {
    throw FormatError("implausible shape library header in " + path.string());
  }
  lib.view_distance = r.Get<double>();
  lib.splat_radius = r.Get<double>();
  lib.intrinsics.focal_length = r.Get<double>();
  const double cx = r.Get<double>();
  const double cy = r.Get<double>();
  lib.intrinsics.principal_point = Vec2(cx, cy);
  lib.intrinsics.width = r.Get<std::int32_t>();
  lib.intrinsics.height = r.Get<std::int32_t>();
  lib.entries.resize(n_views);
  for (ShapeLibraryEntry& e : lib.entries) {
    e.view.theta1 = r.Get<double>();
    e.view.theta2 = r.Get<double>();
    e.view.view_distance = lib.view_distance;
    e.area = r.Get<double>();
    const double ox = r.Get<double>();
    const double oy = r.Get<double>();
    e.centroid_offset = Vec2(ox, oy);
    e.signature.samples.resize(n_sig);
    for (double& s : e.signature.samples) s = r.Get<double>();
  }
  if (in.peek() != std::char_traits<char>::eof()) {
    throw FormatError("trailing bytes in shape library " + path.string());
  }
  try {
    lib.Validate();
  } catch (const std::invalid_argument& e) {
    throw FormatError(std::string("invalid shape library: ") + e.what());
  }
  return lib;
}

}  // namespace shapepose
