#include "shapepose/image.h"

#include <algorithm>
#include <fstream>
#include <string>

#include "shapepose/error.h"

namespace shapepose {

std::size_t CountForeground(const BinaryMask& mask) {
  return static_cast<std::size_t>(
      std::count_if(mask.data().begin(), mask.data().end(),
                    [](std::uint8_t v) { return v != 0; }));
}

void ValidateLabels(const LabelMap& map, int num_classes) {
  for (std::uint8_t v : map.data()) {
    if (v > num_classes) {
      throw std::invalid_argument("label " + std::to_string(v) +
                                  " exceeds class count " +
                                  std::to_string(num_classes));
    }
  }
}

namespace {

void WriteRawPgm(const std::filesystem::path& path, int w, int h,
                 const std::vector<std::uint8_t>& bytes) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw FormatError("cannot write " + path.string());
  out << "P5\n" << w << ' ' << h << "\n255\n";
  out.write(reinterpret_cast<const char*>(bytes.data()),
            static_cast<std::streamsize>(bytes.size()));
  if (!out) throw FormatError("failed writing " + path.string());
}

// Next header token, skipping whitespace and '#' comments.
std::string NextToken(std::istream& in) {
  std::string tok;
  int c;
  while ((c = in.get()) != EOF) {
    if (c == '#') {
      while ((c = in.get()) != EOF && c != '\n') {}
      continue;
    }
    if (std::isspace(c)) {
      if (!tok.empty()) break;
      continue;
    }
    tok.push_back(static_cast<char>(c));
  }
  return tok;
}

int ParseInt(const std::string& tok, const std::filesystem::path& path) {
  try {
    std::size_t used = 0;
    const int v = std::stoi(tok, &used);
    if (used != tok.size()) throw std::invalid_argument(tok);
    return v;
  } catch (const std::exception&) {
    throw FormatError("bad PGM header in " + path.string());
  }
}

}  // namespace

void WritePgm(const std::filesystem::path& path, const BinaryMask& mask) {
  std::vector<std::uint8_t> bytes(mask.data().size());
  std::transform(mask.data().begin(), mask.data().end(), bytes.begin(),
                 [](std::uint8_t v) -> std::uint8_t { return v ? 255 : 0; });
  WriteRawPgm(path, mask.width(), mask.height(), bytes);
}

void WritePgm(const std::filesystem::path& path, const LabelMap& map) {
  WriteRawPgm(path, map.width(), map.height(), map.data());
}

LabelMap ReadLabelMap(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw FormatError("cannot read " + path.string());
  const std::string magic = NextToken(in);
  if (magic != "P5" && magic != "P2") {
    throw FormatError("not a PGM file: " + path.string());
  }
  const int w = ParseInt(NextToken(in), path);
  const int h = ParseInt(NextToken(in), path);
  const int maxval = ParseInt(NextToken(in), path);
  if (w <= 0 || h <= 0 || maxval <= 0 || maxval > 255) {
    throw FormatError("unsupported PGM geometry in " + path.string());
  }
  LabelMap map(w, h);
  if (magic == "P5") {
    in.read(reinterpret_cast<char*>(map.data().data()),
            static_cast<std::streamsize>(map.data().size()));
    if (in.gcount() != static_cast<std::streamsize>(map.data().size())) {
      throw FormatError("truncated PGM " + path.string());
    }
  } else {
    for (std::uint8_t& v : map.data()) {
      const std::string tok = NextToken(in);
      if (tok.empty()) throw FormatError("truncated PGM " + path.string());
      const int value = ParseInt(tok, path);
      if (value < 0 || value > maxval) {
        throw FormatError("PGM value out of range in " + path.string());
      }
      v = static_cast<std::uint8_t>(value);
    }
  }
  return map;
}

BinaryMask ReadMask(const std::filesystem::path& path) {
  const LabelMap map = ReadLabelMap(path);
  BinaryMask mask(map.width(), map.height());
  std::transform(map.data().begin(), map.data().end(), mask.data().begin(),
                 [](std::uint8_t v) -> std::uint8_t { return v ? 1 : 0; });
  return mask;
}

}  // namespace shapepose
