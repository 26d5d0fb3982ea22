#include "larkit/io.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <map>
#include <set>
#include <sstream>
#include <stdexcept>

#include <json.hpp>

#include "larkit/geom.hpp"

namespace larkit {

namespace {

std::string fmt(double x) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", x);
  return buf;
}

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open " + path);
  std::ostringstream text;
  text << in.rdbuf();
  return text.str();
}

void write_file(const std::string& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot open " + path + " for writing");
  out << text;
  if (!out) throw std::runtime_error("write failed on " + path);
}

Vec3 vertex3(const Geometry& g, int v) {
  const auto& p = g.coords[static_cast<size_t>(v)];
  return {p[0], p[1], g.dim == 3 ? p[2] : 0.0};
}

// Vertex loops of one face: chained from the edge table when present,
// otherwise by angular order in the fitted plane (convex faces).
std::vector<std::vector<int>> face_loops(const Complex& complex,
                                         const std::vector<int>& face) {
  if (complex.has_table(1)) {
    const std::set<int> members(face.begin(), face.end());
    std::multimap<int, int> adj;
    std::set<std::pair<int, int>> face_edges;
    for (const auto& edge : complex.table(1).cells) {
      if (!members.count(edge[0]) || !members.count(edge[1])) continue;
      const auto key = std::minmax(edge[0], edge[1]);
      if (!face_edges.insert(key).second) continue;
      adj.emplace(edge[0], edge[1]);
      adj.emplace(edge[1], edge[0]);
    }
    std::set<std::pair<int, int>> used;
    std::vector<std::vector<int>> loops;
    for (const auto& start : face_edges) {
      if (used.count(start)) continue;
      used.insert(start);
      std::vector<int> loop{start.first};
      int cur = start.second;
      while (cur != loop.front()) {
        loop.push_back(cur);
        auto [lo, hi] = adj.equal_range(cur);
        int next = -1;
        for (auto it = lo; it != hi; ++it) {
          const auto key = std::minmax(cur, it->second);
          if (!used.count(key) && (next < 0 || it->second < next))
            next = it->second;
        }
        if (next < 0)
          throw std::runtime_error("face boundary does not close into loops");
        used.insert(std::minmax(cur, next));
        cur = next;
      }
      loops.push_back(std::move(loop));
    }
    if (!loops.empty()) return loops;
  }
  std::vector<Vec3> pts;
  for (int v : face) pts.push_back(vertex3(complex.geometry, v));
  const PlaneFrame frame = fit_plane(pts);
  std::vector<std::pair<double, int>> order;
  for (size_t i = 0; i < face.size(); ++i) {
    const Vec2 q = frame.to_plane(pts[i]);
    order.emplace_back(std::atan2(q[1], q[0]), face[i]);
  }
  std::sort(order.begin(), order.end());
  std::vector<int> loop;
  for (const auto& [angle, v] : order) loop.push_back(v);
  return {loop};
}

}  // namespace

// ---------------------------------------------------------------------
// LAR JSON

std::string serialize_lar(const Complex& complex) {
  std::string out = "{\"dim\":" + std::to_string(complex.geometry.dim);
  out += ",\"V\":[";
  for (size_t i = 0; i < complex.geometry.coords.size(); ++i) {
    if (i) out += ',';
    out += '[';
    const auto& p = complex.geometry.coords[i];
    for (size_t k = 0; k < p.size(); ++k) {
      if (k) out += ',';
      out += fmt(p[k]);
    }
    out += ']';
  }
  out += "],\"cells\":{";
  bool first_table = true;
  for (const auto& [p, table] : complex.tables) {
    if (!first_table) out += ',';
    first_table = false;
    out += '"' + std::to_string(p) + "\":[";
    for (size_t c = 0; c < table.cells.size(); ++c) {
      if (c) out += ',';
      out += '[';
      for (size_t k = 0; k < table.cells[c].size(); ++k) {
        if (k) out += ',';
        out += std::to_string(table.cells[c][k] + 1);  // 1-based on disk
      }
      out += ']';
    }
    out += ']';
  }
  out += "}}\n";
  return out;
}

Complex parse_lar(const std::string& text) {
  const nlohmann::json doc = nlohmann::json::parse(text);
  if (!doc.is_object() || !doc.contains("dim") || !doc.contains("V"))
    throw std::runtime_error("LAR document must contain dim and V");
  Complex complex;
  complex.geometry.dim = doc.at("dim").get<int>();
  if (complex.geometry.dim != 2 && complex.geometry.dim != 3)
    throw std::runtime_error("LAR dim must be 2 or 3");
  for (const auto& row : doc.at("V")) {
    std::vector<double> p = row.get<std::vector<double>>();
    if (static_cast<int>(p.size()) != complex.geometry.dim)
      throw std::runtime_error("LAR vertex arity does not match dim");
    complex.geometry.coords.push_back(std::move(p));
  }
  const int nverts = complex.geometry.size();
  if (doc.contains("cells")) {
    for (const auto& [key, rows] : doc.at("cells").items()) {
      const int p = std::stoi(key);
      if (p < 1 || p > complex.geometry.dim)
        throw std::runtime_error("LAR cell dimension out of range: " + key);
      CellTable table{p, {}};
      for (const auto& row : rows) {
        std::vector<int> cell = row.get<std::vector<int>>();
        for (int& v : cell) {
          if (v < 1 || v > nverts)
            throw std::runtime_error("LAR vertex index out of range");
          v -= 1;
        }
        table.cells.push_back(std::move(cell));
      }
      complex.tables[p] = std::move(table);
    }
  }
  return complex;
}

Complex load_lar(const std::string& path) { return parse_lar(read_file(path)); }

void save_lar(const Complex& complex, const std::string& path) {
  write_file(path, serialize_lar(complex));
}

// ---------------------------------------------------------------------
// OBJ

Complex import_obj(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open " + path);
  Complex complex;
  complex.geometry.dim = 3;
  CellTable faces{2, {}};
  std::set<std::pair<int, int>> edge_set;
  std::vector<std::vector<int>> loops;
  std::string line;
  int lineno = 0;
  static const std::set<std::string> unsupported = {
      "curv", "curv2", "surf", "cstype", "vp",   "bmat", "step",
      "parm", "trim",  "hole", "scrv",   "sp",   "con",  "end"};
  static const std::set<std::string> ignored = {
      "vn", "vt", "o", "g", "s", "usemtl", "mtllib", "l", "p"};
  while (std::getline(in, line)) {
    ++lineno;
    std::istringstream fields(line);
    std::string kind;
    if (!(fields >> kind) || kind[0] == '#') continue;
    if (kind == "v") {
      double x, y, z = 0;
      if (!(fields >> x >> y))
        throw std::runtime_error(path + ":" + std::to_string(lineno) +
                                 ": malformed vertex");
      fields >> z;
      complex.geometry.coords.push_back({x, y, z});
    } else if (kind == "f") {
      std::vector<int> loop;
      std::string token;
      while (fields >> token) {
        // v, v/vt, v//vn, v/vt/vn; negative indices count from the end.
        const int raw = std::stoi(token.substr(0, token.find('/')));
        const int nverts = complex.geometry.size();
        const int v = raw > 0 ? raw - 1 : nverts + raw;
        if (v < 0 || v >= nverts)
          throw std::runtime_error(path + ":" + std::to_string(lineno) +
                                   ": face index out of range");
        loop.push_back(v);
      }
      if (loop.size() < 3)
        throw std::runtime_error(path + ":" + std::to_string(lineno) +
                                 ": face with fewer than 3 vertices");
      for (size_t i = 0; i < loop.size(); ++i)
        edge_set.insert(std::minmax(loop[i], loop[(i + 1) % loop.size()]));
      std::vector<int> face = loop;
      std::sort(face.begin(), face.end());
      face.erase(std::unique(face.begin(), face.end()), face.end());
      faces.cells.push_back(std::move(face));
      loops.push_back(std::move(loop));
    } else if (unsupported.count(kind)) {
      throw std::runtime_error(path + ":" + std::to_string(lineno) +
                               ": unsupported OBJ statement '" + kind + "'");
    } else if (!ignored.count(kind)) {
      throw std::runtime_error(path + ":" + std::to_string(lineno) +
                               ": unknown OBJ statement '" + kind + "'");
    }
  }
  CellTable edges{1, {}};
  for (const auto& [a, b] : edge_set) edges.cells.push_back({a, b});
  complex.tables[1] = std::move(edges);
  complex.tables[2] = std::move(faces);
  return complex;
}

void export_obj(const Complex& complex, const std::string& path) {
  return export_obj(explode(complex, 1.0), path);
}

void export_obj(const std::vector<CellMesh>& cells, const std::string& path) {
  std::string out;
  int offset = 0;
  for (size_t c = 0; c < cells.size(); ++c) {
    out += "g cell_" + std::to_string(c) + "\n";
    for (const auto& p : cells[c].geometry.coords) {
      out += "v " + fmt(p[0]) + ' ' + fmt(p[1]) + ' ' +
             fmt(p.size() > 2 ? p[2] : 0.0) + "\n";
    }
    for (const auto& loop : cells[c].faces) {
      out += 'f';
      for (int v : loop) out += ' ' + std::to_string(v + offset + 1);
      out += '\n';
    }
    offset += cells[c].geometry.size();
  }
  write_file(path, out);
}

// ---------------------------------------------------------------------
// Exploded views

std::vector<CellMesh> explode(const Complex& complex, double scale) {
  if (scale < 1) throw std::invalid_argument("explode: scale must be >= 1");
  if (complex.tables.empty() || complex.geometry.size() == 0) return {};
  const int top = complex.tables.rbegin()->first;
  const CellTable& cells = complex.table(top);

  std::vector<double> center(static_cast<size_t>(complex.geometry.dim), 0.0);
  for (const auto& p : complex.geometry.coords)
    for (size_t k = 0; k < center.size(); ++k) center[k] += p[k];
  for (auto& x : center) x /= complex.geometry.coords.size();

  // Faces of each 3-cell: the 2-cells whose vertex set it contains.
  std::vector<std::vector<int>> cell_faces(
      static_cast<size_t>(cells.size()));
  if (top == 3) {
    if (!complex.has_table(2))
      throw std::invalid_argument("explode: 3D complex without face table");
    const CellTable& fv = complex.table(2);
    std::vector<std::vector<int>> sorted_cells = cells.cells;
    for (auto& cell : sorted_cells) std::sort(cell.begin(), cell.end());
    for (int f = 0; f < fv.size(); ++f) {
      std::vector<int> face = fv.cells[static_cast<size_t>(f)];
      std::sort(face.begin(), face.end());
      for (int c = 0; c < cells.size(); ++c)
        if (std::includes(sorted_cells[static_cast<size_t>(c)].begin(),
                          sorted_cells[static_cast<size_t>(c)].end(),
                          face.begin(), face.end()))
          cell_faces[static_cast<size_t>(c)].push_back(f);
    }
  }

  std::vector<CellMesh> meshes;
  for (int c = 0; c < cells.size(); ++c) {
    const auto& cell = cells.cells[static_cast<size_t>(c)];
    std::vector<double> centroid(center.size(), 0.0);
    for (int v : cell)
      for (size_t k = 0; k < center.size(); ++k)
        centroid[k] += complex.geometry.coords[static_cast<size_t>(v)][k];
    for (auto& x : centroid) x /= static_cast<double>(cell.size());

    CellMesh mesh;
    mesh.geometry.dim = complex.geometry.dim;
    std::map<int, int> local;
    const auto local_vertex = [&](int v) {
      const auto [it, inserted] = local.emplace(v, mesh.geometry.size());
      if (inserted) {
        auto p = complex.geometry.coords[static_cast<size_t>(v)];
        for (size_t k = 0; k < p.size(); ++k)
          p[k] += (scale - 1) * (centroid[k] - center[k]);
        mesh.geometry.coords.push_back(std::move(p));
      }
      return it->second;
    };
    std::vector<std::vector<std::vector<int>>> loops_per_face;
    if (top == 3) {
      for (int f : cell_faces[static_cast<size_t>(c)])
        loops_per_face.push_back(
            face_loops(complex, complex.table(2).cells[static_cast<size_t>(f)]));
    } else {
      loops_per_face.push_back(face_loops(complex, cell));
    }
    for (const auto& loops : loops_per_face)
      for (const auto& loop : loops) {
        std::vector<int> localized;
        for (int v : loop) localized.push_back(local_vertex(v));
        mesh.faces.push_back(std::move(localized));
      }
    meshes.push_back(std::move(mesh));
  }
  return meshes;
}

std::vector<CellMesh> explode(const ChainComplexResult& result, double scale) {
  Complex complex;
  complex.geometry = result.geometry;
  complex.tables = result.tables;
  if (!complex.tables.empty()) {
    // Exterior cells are reporting artifacts, not solids to display.
    const int top = complex.tables.rbegin()->first;
    std::vector<bool> drop(
        static_cast<size_t>(complex.tables[top].size()), false);
    for (int e : result.exterior_cells)
      if (e >= 0 && e < complex.tables[top].size())
        drop[static_cast<size_t>(e)] = true;
    CellTable kept{top, {}};
    for (int c = 0; c < complex.tables[top].size(); ++c)
      if (!drop[static_cast<size_t>(c)])
        kept.cells.push_back(complex.tables[top].cells[static_cast<size_t>(c)]);
    complex.tables[top] = std::move(kept);
  }
  return explode(complex, scale);
}

}  // namespace larkit
