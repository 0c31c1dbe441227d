#include "shapepose/cloud_io.h"

#include <charconv>
#include <cmath>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "shapepose/error.h"

namespace shapepose {

namespace {

bool ParseDouble(const std::string& tok, double* out) {
  // strtod accepts "nan"/"inf"; those are rejected by the finiteness check.
  char* end = nullptr;
  *out = std::strtod(tok.c_str(), &end);
  return end != tok.c_str() && *end == '\0';
}

PointCloud Finish(std::vector<Point3> pts, const std::filesystem::path& path) {
  if (pts.empty()) throw FormatError("no points in " + path.string());
  return PointCloud(std::move(pts));
}

Point3 ParseTriple(const std::string& a, const std::string& b,
                   const std::string& c, const std::filesystem::path& path,
                   std::size_t line_no) {
  double v[3];
  const std::string* toks[3] = {&a, &b, &c};
  for (int i = 0; i < 3; ++i) {
    if (!ParseDouble(*toks[i], &v[i]) || !std::isfinite(v[i])) {
      throw FormatError(path.string() + ":" + std::to_string(line_no) +
                        ": invalid coordinate '" + *toks[i] + "'");
    }
  }
  return Point3(v[0], v[1], v[2]);
}

}  // namespace

PointCloud ReadXyz(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw FormatError("cannot read " + path.string());
  std::vector<Point3> pts;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    const auto hash = line.find('#');
    if (hash != std::string::npos) line.resize(hash);
    std::istringstream ls(line);
    std::string a, b, c, extra;
    if (!(ls >> a)) continue;
    if (!(ls >> b >> c) || (ls >> extra)) {
      throw FormatError(path.string() + ":" + std::to_string(line_no) +
                        ": expected 'x y z'");
    }
    pts.push_back(ParseTriple(a, b, c, path, line_no));
  }
  return Finish(std::move(pts), path);
}

void WriteXyz(const std::filesystem::path& path, const PointCloud& cloud) {
  std::ofstream out(path);
  if (!out) throw FormatError("cannot write " + path.string());
  char buf[32];
  for (const Point3& p : cloud.points()) {
    for (int i = 0; i < 3; ++i) {
      const auto res = std::to_chars(buf, buf + sizeof(buf), p[i]);
      out.write(buf, res.ptr - buf);
      out.put(i < 2 ? ' ' : '\n');
    }
  }
  if (!out) throw FormatError("failed writing " + path.string());
}

PointCloud ReadPly(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw FormatError("cannot read " + path.string());
  std::string line;
  if (!std::getline(in, line) || line.rfind("ply", 0) != 0) {
    throw FormatError("missing ply magic in " + path.string());
  }
  std::size_t n_vertices = 0;
  bool in_vertex = false;
  bool seen_vertex = false;
  std::vector<std::string> props;
  std::size_t line_no = 1;
  while (std::getline(in, line)) {
    ++line_no;
    std::istringstream ls(line);
    std::string kw;
    ls >> kw;
    if (kw == "format") {
      std::string fmt;
      ls >> fmt;
      if (fmt != "ascii") throw FormatError("only ascii PLY is supported");
    } else if (kw == "element") {
      std::string name;
      ls >> name;
      in_vertex = name == "vertex";
      if (!in_vertex && !seen_vertex) {
        throw FormatError("PLY vertex element must be declared first");
      }
      if (in_vertex) {
        if (seen_vertex) throw FormatError("duplicate vertex element");
        seen_vertex = true;
        ls >> n_vertices;
      }
    } else if (kw == "property" && in_vertex) {
      std::string type, name;
      ls >> type;
      if (type == "list") throw FormatError("list property on vertex element");
      ls >> name;
      props.push_back(name);
    } else if (kw == "end_header") {
      break;
    }
  }
  int ix = -1, iy = -1, iz = -1;
  for (std::size_t i = 0; i < props.size(); ++i) {
    if (props[i] == "x") ix = static_cast<int>(i);
    if (props[i] == "y") iy = static_cast<int>(i);
    if (props[i] == "z") iz = static_cast<int>(i);
  }
  if (!seen_vertex || ix < 0 || iy < 0 || iz < 0) {
    throw FormatError("PLY lacks vertex x/y/z in " + path.string());
  }
  std::vector<Point3> pts;
  pts.reserve(n_vertices);
  for (std::size_t v = 0; v < n_vertices; ++v) {
    if (!std::getline(in, line)) throw FormatError("truncated PLY " + path.string());
    ++line_no;
    std::istringstream ls(line);
    std::vector<std::string> toks;
    std::string t;
    while (ls >> t) toks.push_back(t);
    if (toks.size() < props.size()) {
      throw FormatError(path.string() + ":" + std::to_string(line_no) +
                        ": short vertex line");
    }
    pts.push_back(ParseTriple(toks[ix], toks[iy], toks[iz], path, line_no));
  }
  return Finish(std::move(pts), path);
}

PointCloud ReadPointCloud(const std::filesystem::path& path) {
  std::string ext = path.extension().string();
  for (char& c : ext) c = static_cast<char>(std::tolower(c));
  if (ext == ".ply") return ReadPly(path);
  return ReadXyz(path);
}

}  // namespace shapepose
