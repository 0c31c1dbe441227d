#include "shapepose/manifest.h"

#include <fstream>

#include "json.hpp"
#include "shapepose/error.h"

namespace shapepose {

using nlohmann::json;
namespace fs = std::filesystem;

const ManifestClass& Manifest::at(int class_id) const {
  const auto it = classes.find(class_id);
  if (it == classes.end()) {
    throw UnknownClassError("class " + std::to_string(class_id) + " is not in the manifest");
  }
  return it->second;
}

std::map<int, std::string> Manifest::Names() const {
  std::map<int, std::string> names;
  for (const auto& [id, c] : classes) names[id] = c.name;
  return names;
}

namespace {

fs::path Resolve(const fs::path& base, const std::string& p) {
  const fs::path path(p);
  return path.is_absolute() ? path : (base / path).lexically_normal();
}

std::string Relative(const fs::path& base, const fs::path& p) {
  if (p.is_relative()) return p.generic_string();
  const fs::path rel = p.lexically_relative(base);
  return rel.empty() ? p.generic_string() : rel.generic_string();
}

}  // namespace

Manifest LoadManifest(const fs::path& path) {
  std::ifstream in(path);
  if (!in) throw FormatError("cannot read manifest " + path.string());
  const fs::path base = fs::absolute(path).parent_path();
  Manifest m;
  m.path = fs::absolute(path);
  try {
    const json doc = json::parse(in);
    if (doc.at("version").get<int>() != 1) throw FormatError("unsupported manifest version");
    m.calibration = Resolve(base, doc.at("calibration").get<std::string>());
    m.signature_length = doc.value("signature_length", kDefaultSignatureLength);
    if (doc.contains("defaults")) {
      const json& d = doc.at("defaults");
      m.defaults.splat_radius = d.value("splat_radius", m.defaults.splat_radius);
      m.defaults.min_area = d.value("min_area", m.defaults.min_area);
      m.defaults.top_k = d.value("top_k", m.defaults.top_k);
    }
    for (const json& c : doc.at("classes")) {
      ManifestClass mc;
      mc.class_id = c.at("id").get<int>();
      mc.name = c.at("name").get<std::string>();
      mc.model = Resolve(base, c.at("model").get<std::string>());
      mc.library = Resolve(base, c.at("library").get<std::string>());
      if (mc.class_id < 1 || mc.class_id > 255) {
        throw FormatError("class id " + std::to_string(mc.class_id) + " outside 1..255");
      }
      if (!m.classes.emplace(mc.class_id, mc).second) {
        throw FormatError("duplicate class id " + std::to_string(mc.class_id));
      }
    }
  } catch (const json::exception& e) {
    throw FormatError("malformed manifest " + path.string() + ": " + e.what());
  }
  if (m.signature_length < 8) throw FormatError("signature_length must be >= 8");
  if (m.defaults.splat_radius <= 0.0) throw FormatError("splat_radius must be positive");
  if (m.defaults.min_area < 1) throw FormatError("min_area must be >= 1");
  if (m.classes.empty()) throw FormatError("manifest lists no classes");
  if (!fs::exists(m.calibration)) {
    throw FormatError("calibration file not found: " + m.calibration.string());
  }
  for (const auto& [id, c] : m.classes) {
    if (!fs::exists(c.model)) throw FormatError("model file not found: " + c.model.string());
  }
  return m;
}

void SaveManifest(const fs::path& path, const Manifest& m) {
  const fs::path base = fs::absolute(path).parent_path();
  json classes = json::array();
  for (const auto& [id, c] : m.classes) {
    classes.push_back({{"id", id},
                       {"name", c.name},
                       {"model", Relative(base, c.model)},
                       {"library", Relative(base, c.library)}});
  }
  const json doc{{"version", 1},
                 {"calibration", Relative(base, m.calibration)},
                 {"signature_length", m.signature_length},
                 {"defaults",
                  {{"splat_radius", m.defaults.splat_radius},
                   {"min_area", m.defaults.min_area},
                   {"top_k", m.defaults.top_k}}},
                 {"classes", classes}};
  std::ofstream out(path, std::ios::binary);
  if (!out) throw FormatError("cannot write manifest " + path.string());
  out << doc.dump(2) << '\n';
  if (!out) throw FormatError("failed writing manifest " + path.string());
}

}  // namespace shapepose
