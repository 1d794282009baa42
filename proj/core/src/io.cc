// Copyright 2026 The meshkit Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.


#include "meshkit/io.h"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>
#include <string_view>

namespace meshkit {

namespace fs = std::filesystem;

namespace {

/// Splits a stream into whitespace-separated tokens, one line at a time.
class LineReader {
 public:
  explicit LineReader(std::istream& in) : in_(in) {}

  /// Next line that is not blank and does not start with `comment`.
  bool next(std::vector<std::string_view>& tokens, char comment = '#') {
    while (std::getline(in_, line_)) {
      ++number_;
      if (!line_.empty() && line_.back() == '\r') line_.pop_back();
      tokens.clear();
      std::size_t i = 0;
      while (i < line_.size()) {
        while (i < line_.size() && std::isspace(static_cast<unsigned char>(line_[i]))) ++i;
        std::size_t j = i;
        while (j < line_.size() && !std::isspace(static_cast<unsigned char>(line_[j]))) ++j;
        if (j > i) tokens.emplace_back(line_.data() + i, j - i);
        i = j;
      }
      if (tokens.empty() || (comment != 0 && tokens[0][0] == comment)) continue;
      return true;
    }
    ++number_;
    return false;
  }

  int line() const { return number_; }

  [[noreturn]] void fail(const std::string& what) const {
    throw ParseError(what, number_);
  }

  double real(std::string_view token) const {
    double v = 0.0;
    const auto [p, ec] = std::from_chars(token.data(), token.data() + token.size(), v);
    if (ec != std::errc() || p != token.data() + token.size()) {
      fail("expected a number, got '" + std::string(token) + "'");
    }
    return v;
  }

  long integer(std::string_view token) const {
    long v = 0;
    const auto [p, ec] = std::from_chars(token.data(), token.data() + token.size(), v);
    if (ec != std::errc() || p != token.data() + token.size()) {
      fail("expected an integer, got '" + std::string(token) + "'");
    }
    return v;
  }

  long count(std::string_view token) const {
    const long v = integer(token);
    if (v < 0) fail("negative count");
    return v;
  }

 private:
  std::istream& in_;
  std::string line_;
  int number_ = 0;
};

void add_polygon(LoadedMesh& out, const std::vector<int>& corners,
                 const LineReader& reader) {
  if (corners.size() < 3) reader.fail("polygon with fewer than 3 corners");
  const int n = static_cast<int>(out.mesh.num_vertices());
  for (int c : corners) {
    if (c < 0 || c >= n) reader.fail("vertex index out of range");
  }
  for (std::size_t k = 1; k + 1 < corners.size(); ++k) {
    out.mesh.facets.push_back({corners[0], corners[k], corners[k + 1]});
  }
}

LoadedMesh parse_off(std::istream& in) {
  LineReader r(in);
  LoadedMesh out;
  std::vector<std::string_view> t;
  if (!r.next(t)) r.fail("empty file");
  std::string head(t[0]);
  bool colored = false;
  if (head == "COFF") {
    colored = true;
  } else if (head != "OFF") {
    r.fail("missing OFF header");
  }
  std::vector<std::string_view> counts(t.begin() + 1, t.end());
  if (counts.empty()) {
    if (!r.next(t)) r.fail("missing element counts");
    counts = t;
  }
  if (counts.size() < 2) r.fail("missing element counts");
  const long nv = r.count(counts[0]);
  const long nf = r.count(counts[1]);
  if (counts.size() > 2) r.count(counts[2]);
  out.mesh.vertices.reserve(static_cast<std::size_t>(nv));
  for (long i = 0; i < nv; ++i) {
    if (!r.next(t)) r.fail("truncated vertex list");
    if (t.size() < 3) r.fail("vertex needs 3 coordinates");
    out.mesh.vertices.emplace_back(r.real(t[0]), r.real(t[1]), r.real(t[2]));
    if (colored) {
      if (t.size() < 6) r.fail("COFF vertex needs a color");
      Vec3 c(r.real(t[3]), r.real(t[4]), r.real(t[5]));
      if (c.maxCoeff() > 1.0) c /= 255.0;
      out.colors.push_back(c);
    }
  }
  std::vector<int> corners;
  for (long f = 0; f < nf; ++f) {
    if (!r.next(t)) r.fail("truncated face list");
    const long k = r.count(t[0]);
    if (static_cast<long>(t.size()) < k + 1) r.fail("face has fewer indices than declared");
    corners.clear();
    for (long j = 1; j <= k; ++j) corners.push_back(static_cast<int>(r.integer(t[j])));
    add_polygon(out, corners, r);
  }
  return out;
}

LoadedMesh parse_obj(std::istream& in) {
  LineReader r(in);
  LoadedMesh out;
  std::vector<std::string_view> t;
  std::vector<int> corners;
  bool all_colored = true;
  while (r.next(t)) {
    if (t[0] == "v") {
      if (t.size() < 4) r.fail("vertex needs 3 coordinates");
      out.mesh.vertices.emplace_back(r.real(t[1]), r.real(t[2]), r.real(t[3]));
      if (t.size() >= 7) {
        out.colors.emplace_back(r.real(t[4]), r.real(t[5]), r.real(t[6]));
      } else {
        all_colored = false;
      }
    } else if (t[0] == "f") {
      corners.clear();
      const long n = static_cast<long>(out.mesh.num_vertices());
      for (std::size_t j = 1; j < t.size(); ++j) {
        const std::string_view id = t[j].substr(0, t[j].find('/'));
        const long v = r.integer(id);
        if (v == 0) r.fail("OBJ indices are 1-based");
        corners.push_back(static_cast<int>(v > 0 ? v - 1 : n + v));
      }
      add_polygon(out, corners, r);
    }
  }
  if (!all_colored) out.colors.clear();
  return out;
}

struct PlyProperty {
  std::string name;
  bool is_list = false;
};

struct PlyElement {
  std::string name;
  long count = 0;
  std::vector<PlyProperty> properties;
  bool uchar_color = false;
};

LoadedMesh parse_ply(std::istream& in) {
  LineReader r(in);
  std::vector<std::string_view> t;
  if (!r.next(t, 0) || t[0] != "ply") r.fail("missing ply magic");
  std::vector<PlyElement> elements;
  bool ascii = false;
  for (;;) {
    if (!r.next(t, 0)) r.fail("truncated header");
    if (t[0] == "end_header") break;
    if (t[0] == "comment" || t[0] == "obj_info") continue;
    if (t[0] == "format") {
      if (t.size() < 2 || t[1] != "ascii") r.fail("only ascii PLY is supported");
      ascii = true;
    } else if (t[0] == "element") {
      if (t.size() < 3) r.fail("malformed element line");
      elements.push_back({std::string(t[1]), r.count(t[2]), {}, false});
    } else if (t[0] == "property") {
      if (elements.empty()) r.fail("property before element");
      if (t.size() >= 5 && t[1] == "list") {
        elements.back().properties.push_back({std::string(t[4]), true});
      } else if (t.size() >= 3) {
        elements.back().properties.push_back({std::string(t[2]), false});
        if (t[2] == "red" && (t[1] == "uchar" || t[1] == "uint8")) {
          elements.back().uchar_color = true;
        }
      } else {
        r.fail("malformed property line");
      }
    } else {
      r.fail("unknown header keyword '" + std::string(t[0]) + "'");
    }
  }
  if (!ascii) r.fail("missing format line");
  LoadedMesh out;
  std::vector<int> corners;
  bool vertices_seen = false;
  for (const PlyElement& e : elements) {
    int ix = -1, iy = -1, iz = -1, ir = -1, ig = -1, ib = -1, ilist = -1;
    for (int p = 0; p < static_cast<int>(e.properties.size()); ++p) {
      const std::string& n = e.properties[static_cast<std::size_t>(p)].name;
      if (n == "x") ix = p;
      if (n == "y") iy = p;
      if (n == "z") iz = p;
      if (n == "red" || n == "r") ir = p;
      if (n == "green" || n == "g") ig = p;
      if (n == "blue" || n == "b") ib = p;
      if (n == "vertex_indices" || n == "vertex_index") ilist = p;
    }
    const bool is_vertex = e.name == "vertex";
    const bool is_face = e.name == "face";
    if (is_vertex && (ix < 0 || iy < 0 || iz < 0)) r.fail("vertex element lacks x y z");
    if (is_face && !vertices_seen) r.fail("face element before vertex element");
    for (long i = 0; i < e.count; ++i) {
      if (!r.next(t, 0)) r.fail("truncated " + e.name + " list");
      std::vector<double> scalars(e.properties.size(), 0.0);
      std::size_t pos = 0;
      corners.clear();
      for (std::size_t p = 0; p < e.properties.size(); ++p) {
        if (pos >= t.size()) r.fail("too few values in " + e.name + " row");
        if (e.properties[p].is_list) {
          const long k = r.count(t[pos++]);
          if (pos + static_cast<std::size_t>(k) > t.size()) r.fail("truncated list");
          for (long j = 0; j < k; ++j) {
            const long v = r.integer(t[pos++]);
            if (static_cast<int>(p) == ilist) corners.push_back(static_cast<int>(v));
          }
        } else {
          scalars[p] = r.real(t[pos++]);
        }
      }
      if (is_vertex) {
        out.mesh.vertices.emplace_back(scalars[static_cast<std::size_t>(ix)],
                                       scalars[static_cast<std::size_t>(iy)],
                                       scalars[static_cast<std::size_t>(iz)]);
        if (ir >= 0 && ig >= 0 && ib >= 0) {
          Vec3 c(scalars[static_cast<std::size_t>(ir)], scalars[static_cast<std::size_t>(ig)],
                 scalars[static_cast<std::size_t>(ib)]);
          if (e.uchar_color) c /= 255.0;
          out.colors.push_back(c);
        }
      } else if (is_face) {
        if (ilist < 0) r.fail("face element lacks vertex_indices");
        add_polygon(out, corners, r);
      }
    }
    if (is_vertex) vertices_seen = true;
  }
  return out;
}

std::string format_double(double v) {
  char buf[32];
  const auto res = std::to_chars(buf, buf + sizeof(buf), v);
  return std::string(buf, res.ptr);
}

}  // namespace

MeshFormat format_from_path(const fs::path& path) {
  std::string ext = path.extension().string();
  std::transform(ext.begin(), ext.end(), ext.begin(),
                 [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
  if (ext == ".off") return MeshFormat::kOff;
  if (ext == ".obj") return MeshFormat::kObj;
  if (ext == ".ply") return MeshFormat::kPly;
  throw ArgumentError("unknown mesh extension '" + ext + "'");
}

LoadedMesh parse_mesh(std::istream& in, MeshFormat format) {
  LoadedMesh out;
  switch (format) {
    case MeshFormat::kOff: out = parse_off(in); break;
    case MeshFormat::kObj: out = parse_obj(in); break;
    case MeshFormat::kPly: out = parse_ply(in); break;
  }
  out.report = validate_mesh(out.mesh);
  return out;
}

LoadedMesh load_mesh(const fs::path& path) {
  return load_mesh(path, format_from_path(path));
}

LoadedMesh load_mesh(const fs::path& path, MeshFormat format) {
  std::ifstream in(path);
  if (!in) throw ParseError("cannot open '" + path.string() + "'", 0);
  return parse_mesh(in, format);
}

void write_mesh(std::ostream& out, const TriMesh& mesh, MeshFormat format,
                const MeshWriteOptions& options) {
  const bool colored = !options.colors.empty();
  const bool labelled = !options.vertex_labels.empty();
  if (colored && options.colors.size() != mesh.num_vertices()) {
    throw ArgumentError("write_mesh: color rows must match vertices");
  }
  if (labelled && options.vertex_labels.size() != mesh.num_vertices()) {
    throw ArgumentError("write_mesh: label rows must match vertices");
  }
  auto coords = [&](std::size_t i) {
    const Vec3& v = mesh.vertices[i];
    return format_double(v.x()) + ' ' + format_double(v.y()) + ' ' +
           format_double(v.z());
  };
  auto color = [&](std::size_t i) {
    const Vec3& c = options.colors[i];
    return format_double(c.x()) + ' ' + format_double(c.y()) + ' ' +
           format_double(c.z());
  };
  switch (format) {
    case MeshFormat::kOff:
      out << (colored ? "COFF\n" : "OFF\n") << mesh.num_vertices() << ' '
          << mesh.num_facets() << " 0\n";
      for (std::size_t i = 0; i < mesh.num_vertices(); ++i) {
        out << coords(i);
        if (colored) out << ' ' << color(i);
        out << '\n';
      }
      for (const Facet& f : mesh.facets) {
        out << "3 " << f[0] << ' ' << f[1] << ' ' << f[2] << '\n';
      }
      break;
    case MeshFormat::kObj:
      for (std::size_t i = 0; i < mesh.num_vertices(); ++i) {
        out << "v " << coords(i);
        if (colored) out << ' ' << color(i);
        out << '\n';
      }
      for (const Facet& f : mesh.facets) {
        out << "f " << f[0] + 1 << ' ' << f[1] + 1 << ' ' << f[2] + 1 << '\n';
      }
      break;
    case MeshFormat::kPly:
      out << "ply\nformat ascii 1.0\nelement vertex " << mesh.num_vertices()
          << "\nproperty double x\nproperty double y\nproperty double z\n";
      if (colored) {
        out << "property double red\nproperty double green\nproperty double blue\n";
      }
      if (labelled) out << "property int label\n";
      out << "element face " << mesh.num_facets()
          << "\nproperty list uchar int vertex_indices\nend_header\n";
      for (std::size_t i = 0; i < mesh.num_vertices(); ++i) {
        out << coords(i);
        if (colored) out << ' ' << color(i);
        if (labelled) out << ' ' << options.vertex_labels[i];
        out << '\n';
      }
      for (const Facet& f : mesh.facets) {
        out << "3 " << f[0] << ' ' << f[1] << ' ' << f[2] << '\n';
      }
      break;
  }
}

void save_mesh(const fs::path& path, const TriMesh& mesh,
               const MeshWriteOptions& options) {
  std::ostringstream s;
  write_mesh(s, mesh, format_from_path(path), options);
  write_file_atomic(path, s.str());
}

void write_file_atomic(const fs::path& path, const std::string& contents) {
  fs::path tmp = path;
  tmp += ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw Error("cannot write '" + tmp.string() + "'");
    out << contents;
    out.flush();
    if (!out) throw Error("write failed for '" + tmp.string() + "'");
  }
  std::error_code ec;
  fs::rename(tmp, path, ec);
  if (ec) {
    fs::remove(tmp);
    throw Error("cannot rename onto '" + path.string() + "': " + ec.message());
  }
}

std::vector<ManifestEntry> read_manifest(const fs::path& path) {
  std::ifstream in(path);
  if (!in) throw ParseError("cannot open manifest '" + path.string() + "'", 0);
  const fs::path base = path.parent_path();
  std::vector<ManifestEntry> entries;
  std::string line;
  int number = 0;
  while (std::getline(in, line)) {
    ++number;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty() || line[0] == '#') continue;
    const std::size_t tab = line.rfind('\t');
    if (tab == std::string::npos || tab == 0) {
      throw ParseError("manifest row needs path<TAB>label", number);
    }
    const std::string label = line.substr(tab + 1);
    int value = 0;
    const auto [p, ec] = std::from_chars(label.data(), label.data() + label.size(), value);
    if (ec != std::errc() || p != label.data() + label.size() || value < 0) {
      throw ParseError("bad label '" + label + "'", number);
    }
    fs::path file = line.substr(0, tab);
    if (file.is_relative()) file = base / file;
    entries.push_back({file, value});
  }
  return entries;
}

void write_manifest(const fs::path& path, std::span<const ManifestEntry> entries) {
  std::ostringstream s;
  for (const ManifestEntry& e : entries) {
    s << e.path.generic_string() << '\t' << e.label << '\n';
  }
  write_file_atomic(path, s.str());
}

void write_cluster_map(std::ostream& out, const ClusterMap& map) {
  for (std::size_t i = 0; i < map.num_input(); ++i) {
    out << map.vcluster[i] << ' ' << map.iomap[i] << '\n';
  }
}

ClusterMap read_cluster_map(std::istream& in) {
  LineReader r(in);
  ClusterMap map;
  std::vector<std::string_view> t;
  int top = -1;
  while (r.next(t)) {
    if (t.size() != 2) r.fail("cluster row needs two integers");
    map.vcluster.push_back(static_cast<int>(r.count(t[0])));
    map.iomap.push_back(static_cast<int>(r.count(t[1])));
    top = std::max(top, map.iomap.back());
  }
  map.num_output = top + 1;
  check_cluster_map(map);
  return map;
}

}  // namespace meshkit
