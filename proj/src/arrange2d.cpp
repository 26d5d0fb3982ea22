#include "larkit/arrange2d.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <set>
#include <stdexcept>
#include <unordered_map>

#include "larkit/tgw.hpp"

namespace larkit {

bool PlanarArrangement::is_exterior(int face) const {
  return std::find(exterior_faces.begin(), exterior_faces.end(), face) !=
         exterior_faces.end();
}

int PlanarArrangement::interior_face_count() const {
  return faces.size() - static_cast<int>(exterior_faces.size());
}

namespace {

Vec2 vertex2(const Geometry& g, int v) {
  return {g.coords[static_cast<size_t>(v)][0],
          g.coords[static_cast<size_t>(v)][1]};
}

struct Split {
  double t;
  Vec2 point;
};

}  // namespace

SegmentSoup fragment_segments(const SegmentSoup& soup, double eps) {
  if (eps <= 0) throw std::invalid_argument("fragment_segments: eps <= 0");
  const int n = soup.edges.size();
  std::vector<Vec2> a(static_cast<size_t>(n)), b(static_cast<size_t>(n));
  for (int i = 0; i < n; ++i) {
    a[i] = vertex2(soup.geometry, soup.edges.cells[static_cast<size_t>(i)][0]);
    b[i] = vertex2(soup.geometry, soup.edges.cells[static_cast<size_t>(i)][1]);
  }
  std::vector<std::vector<Split>> splits(static_cast<size_t>(n));
  for (int i = 0; i < n; ++i) {
    splits[i].push_back({0.0, a[i]});
    splits[i].push_back({1.0, b[i]});
  }

  for (int i = 0; i < n; ++i) {
    const Vec2 r = b[i] - a[i];
    const double rlen = norm2d(r);
    if (rlen <= eps) continue;
    for (int j = i + 1; j < n; ++j) {
      const Vec2 s = b[j] - a[j];
      const double slen = norm2d(s);
      if (slen <= eps) continue;
      const Vec2 pq = a[j] - a[i];
      const double denom = cross2(r, s);
      if (std::abs(denom) <= 1e-12 * rlen * slen) {
        // Parallel; collinear overlap splits both at the other's endpoints.
        if (std::abs(cross2(pq, r)) / rlen > eps) continue;
        for (const Vec2& p : {a[j], b[j]}) {
          const double t = dot2(p - a[i], r) / (rlen * rlen);
          if (t > eps / rlen && t < 1.0 - eps / rlen)
            splits[i].push_back({t, p});
        }
        for (const Vec2& p : {a[i], b[i]}) {
          const double u = dot2(p - a[j], s) / (slen * slen);
          if (u > eps / slen && u < 1.0 - eps / slen)
            splits[j].push_back({u, p});
        }
        continue;
      }
      const double t = cross2(pq, s) / denom;
      const double u = cross2(pq, r) / denom;
      if (t < -eps / rlen || t > 1.0 + eps / rlen) continue;
      if (u < -eps / slen || u > 1.0 + eps / slen) continue;
      // One shared point for both segments, so the merge is exact.
      const Vec2 x{a[i][0] + t * r[0], a[i][1] + t * r[1]};
      splits[i].push_back({t, x});
      splits[j].push_back({u, x});
    }
  }

  SegmentSoup out;
  out.geometry.dim = 2;
  out.edges.dim = 1;
  for (int i = 0; i < n; ++i) {
    auto& sp = splits[i];
    std::sort(sp.begin(), sp.end(),
              [](const Split& x, const Split& y) { return x.t < y.t; });
    Vec2 prev = sp.front().point;
    for (size_t k = 1; k < sp.size(); ++k) {
      const Vec2 cur = sp[k].point;
      if (norm2d(cur - prev) <= eps) continue;  // zero-length fragment
      const int va = out.geometry.size();
      out.geometry.coords.push_back({prev[0], prev[1]});
      out.geometry.coords.push_back({cur[0], cur[1]});
      out.edges.cells.push_back({va, va + 1});
      prev = cur;
    }
  }
  return out;
}

MergeVerticesResult merge_vertices(const Geometry& geometry,
                                   const std::map<int, CellTable>& tables,
                                   double eps) {
  if (eps <= 0) throw std::invalid_argument("merge_vertices: eps <= 0");
  const int d = geometry.dim;
  MergeVerticesResult out;
  out.geometry.dim = d;
  out.vertex_map.resize(geometry.coords.size(), -1);

  // Spatial grid buckets of width eps; candidates live in the 3^d
  // neighborhood of a point's bucket.
  using Key = std::array<long long, 3>;
  std::map<Key, std::vector<int>> buckets;
  const auto key_of = [&](const std::vector<double>& p) {
    Key k{0, 0, 0};
    for (int i = 0; i < d; ++i)
      k[i] = static_cast<long long>(std::floor(p[i] / eps));
    return k;
  };
  for (size_t v = 0; v < geometry.coords.size(); ++v) {
    const auto& p = geometry.coords[v];
    const Key base = key_of(p);
    int rep = -1;
    Key nb = base;
    for (int dx = -1; dx <= 1 && rep < 0; ++dx)
      for (int dy = -1; dy <= 1 && rep < 0; ++dy)
        for (int dz = (d == 3 ? -1 : 0); dz <= (d == 3 ? 1 : 0) && rep < 0;
             ++dz) {
          nb = {base[0] + dx, base[1] + dy, base[2] + dz};
          const auto it = buckets.find(nb);
          if (it == buckets.end()) continue;
          for (int cand : it->second) {
            const auto& q = out.geometry.coords[static_cast<size_t>(cand)];
            bool close = true;
            for (int i = 0; i < d; ++i)
              if (std::abs(p[i] - q[i]) > eps) {
                close = false;
                break;
              }
            if (close) {
              rep = cand;
              break;
            }
          }
        }
    if (rep < 0) {
      rep = out.geometry.size();
      out.geometry.coords.push_back(p);
      buckets[base].push_back(rep);
    }
    out.vertex_map[v] = rep;
  }

  for (const auto& [p, table] : tables) {
    CellTable remapped{table.dim, {}};
    for (const auto& cell : table.cells) {
      std::vector<int> mapped;
      mapped.reserve(cell.size());
      for (int v : cell) mapped.push_back(out.vertex_map[static_cast<size_t>(v)]);
      std::set<int> distinct(mapped.begin(), mapped.end());
      if (static_cast<int>(distinct.size()) < table.dim + 1)
        continue;  // collapsed cell
      remapped.cells.push_back(std::move(mapped));
    }
    out.tables.emplace(p, std::move(remapped));
  }
  return out;
}

CellTable biconnected_filter(const Geometry& geometry,
                             const CellTable& edges) {
  const int nv = geometry.size();
  const int ne = edges.size();
  std::vector<std::vector<std::pair<int, int>>> adj(
      static_cast<size_t>(nv));  // (neighbor, edge id)
  for (int e = 0; e < ne; ++e) {
    const auto& ev = edges.cells[static_cast<size_t>(e)];
    adj[static_cast<size_t>(ev[0])].emplace_back(ev[1], e);
    adj[static_cast<size_t>(ev[1])].emplace_back(ev[0], e);
  }

  // Iterative Tarjan bridge detection; a bridge is a one-edge
  // biconnected component.
  std::vector<int> disc(static_cast<size_t>(nv), -1);
  std::vector<int> low(static_cast<size_t>(nv), 0);
  std::vector<bool> bridge(static_cast<size_t>(ne), false);
  int timer = 0;
  struct Frame {
    int v;
    int parent_edge;
    size_t next = 0;
  };
  for (int root = 0; root < nv; ++root) {
    if (disc[root] != -1 || adj[static_cast<size_t>(root)].empty()) continue;
    std::vector<Frame> stack{{root, -1}};
    disc[root] = low[root] = timer++;
    while (!stack.empty()) {
      Frame& f = stack.back();
      if (f.next < adj[static_cast<size_t>(f.v)].size()) {
        const auto [to, eid] = adj[static_cast<size_t>(f.v)][f.next++];
        if (eid == f.parent_edge) continue;
        if (disc[to] != -1) {
          low[f.v] = std::min(low[f.v], disc[to]);
        } else {
          disc[to] = low[to] = timer++;
          stack.push_back({to, eid});
        }
      } else {
        const int v = f.v;
        const int pe = f.parent_edge;
        stack.pop_back();
        if (!stack.empty()) {
          const int u = stack.back().v;
          low[u] = std::min(low[u], low[v]);
          if (low[v] > disc[u]) bridge[static_cast<size_t>(pe)] = true;
        }
      }
    }
  }

  CellTable out{1, {}};
  for (int e = 0; e < ne; ++e)
    if (!bridge[static_cast<size_t>(e)])
      out.cells.push_back(edges.cells[static_cast<size_t>(e)]);
  return out;
}

std::vector<SignedCell> column_cells(const SignedSparseMatrix& m, int col) {
  std::vector<SignedCell> out;
  for (int k = m.col_ptr[col]; k < m.col_ptr[static_cast<size_t>(col) + 1];
       ++k)
    out.push_back({m.row_idx[static_cast<size_t>(k)],
                   static_cast<int>(m.vals[static_cast<size_t>(k)])});
  return out;
}

std::vector<std::vector<int>> chain_edge_loops(
    const std::vector<SignedCell>& cycle, const CellTable& edges) {
  std::vector<std::pair<int, int>> directed;
  for (const auto& [e, sign] : cycle) {
    const auto& ev = edges.cells[static_cast<size_t>(e)];
    if (sign > 0)
      directed.emplace_back(ev[0], ev[1]);
    else
      directed.emplace_back(ev[1], ev[0]);
  }
  std::multimap<int, size_t> by_start;
  for (size_t k = 0; k < directed.size(); ++k)
    by_start.emplace(directed[k].first, k);
  std::vector<bool> used(directed.size(), false);
  std::vector<std::vector<int>> loops;
  for (size_t start = 0; start < directed.size(); ++start) {
    if (used[start]) continue;
    std::vector<int> loop;
    size_t k = start;
    while (!used[k]) {
      used[k] = true;
      loop.push_back(directed[k].first);
      auto [lo, hi] = by_start.equal_range(directed[k].second);
      size_t next = directed.size();
      for (auto it = lo; it != hi; ++it)
        if (!used[it->second] && it->second < next) next = it->second;
      if (next == directed.size()) break;
      k = next;
    }
    if (directed[k].second != loop.front())
      throw std::invalid_argument("chain_edge_loops: cycle does not close");
    loops.push_back(std::move(loop));
  }
  return loops;
}

namespace {

std::vector<std::vector<Vec2>> loops_as_points(
    const std::vector<std::vector<int>>& loops, const Geometry& g) {
  std::vector<std::vector<Vec2>> out;
  out.reserve(loops.size());
  for (const auto& loop : loops) {
    std::vector<Vec2> pts;
    pts.reserve(loop.size());
    for (int v : loop) pts.push_back(vertex2(g, v));
    out.push_back(std::move(pts));
  }
  return out;
}

double loops_area(const std::vector<std::vector<Vec2>>& loops) {
  double a = 0;
  for (const auto& loop : loops) a += polygon_area(loop);
  return a;
}

}  // namespace

Vec2 face_interior_point(const std::vector<std::vector<Vec2>>& loops) {
  // Scanline through the face: pick a horizontal line, collect crossings
  // with all loops, and take the midpoint of the first inside interval.
  double ymin = loops[0][0][1], ymax = ymin;
  for (const auto& loop : loops)
    for (const auto& p : loop) {
      ymin = std::min(ymin, p[1]);
      ymax = std::max(ymax, p[1]);
    }
  const double span = std::max(ymax - ymin, 1e-300);
  for (int attempt = 1; attempt <= 64; ++attempt) {
    // Irrational-ish fractions avoid hitting vertices exactly.
    const double frac = std::fmod(0.5 + attempt * 0.137187693258, 1.0);
    const double y = ymin + frac * span;
    std::vector<double> xs;
    bool degenerate = false;
    for (const auto& loop : loops) {
      const size_t m = loop.size();
      for (size_t i = 0; i < m; ++i) {
        const Vec2& a = loop[i];
        const Vec2& b = loop[(i + 1) % m];
        if (a[1] == y || b[1] == y) {
          degenerate = true;
          break;
        }
        if ((a[1] > y) != (b[1] > y))
          xs.push_back(a[0] + (y - a[1]) / (b[1] - a[1]) * (b[0] - a[0]));
      }
      if (degenerate) break;
    }
    if (degenerate || xs.size() < 2 || xs.size() % 2 != 0) continue;
    std::sort(xs.begin(), xs.end());
    // Widest interval is the most robust choice.
    size_t best = 0;
    for (size_t k = 2; k + 1 < xs.size(); k += 2)
      if (xs[k + 1] - xs[k] > xs[best + 1] - xs[best]) best = k;
    if (xs[best + 1] - xs[best] <= 0) continue;
    return {0.5 * (xs[best] + xs[best + 1]), y};
  }
  throw std::runtime_error("face_interior_point: no interior point found");
}

PointClass classify_point(const Vec2& point,
                          const std::vector<SignedCell>& cycle,
                          const CellTable& edges, const Geometry& geometry,
                          double eps) {
  const auto loops = chain_edge_loops(cycle, edges);
  return classify_point(point, loops_as_points(loops, geometry), eps);
}

PlanarArrangement planar_arrangement(const SegmentSoup& soup, double eps) {
  PlanarArrangement arr;
  arr.geometry.dim = 2;
  arr.edges.dim = 1;
  arr.faces.dim = 2;

  const SegmentSoup frag = fragment_segments(soup, eps);
  std::map<int, CellTable> tables{{1, frag.edges}};
  MergeVerticesResult merged = merge_vertices(frag.geometry, tables, eps);
  const CellTable dedup = canonicalize(merged.tables.at(1)).table;
  CellTable kept = biconnected_filter(merged.geometry, dedup);
  if (kept.cells.empty()) return arr;  // nothing survives filtering

  // Compact to referenced vertices.
  std::vector<int> vmap(merged.geometry.coords.size(), -1);
  Geometry compact;
  compact.dim = 2;
  for (auto& cell : kept.cells)
    for (int& v : cell) {
      if (vmap[static_cast<size_t>(v)] < 0) {
        vmap[static_cast<size_t>(v)] = compact.size();
        compact.coords.push_back(merged.geometry.coords[static_cast<size_t>(v)]);
      }
      v = vmap[static_cast<size_t>(v)];
    }

  const Skeleton skeleton = make_skeleton_2d(compact, kept);
  const TgwResult tgw = extract_all_cells(skeleton);

  // Fold each component exterior that lies inside a face of another
  // component: the face gains the cycle as a hole boundary.
  const int ncycles = tgw.boundary.ncols;
  std::vector<std::vector<SignedCell>> columns(
      static_cast<size_t>(ncycles));
  std::vector<std::vector<std::vector<Vec2>>> cycle_loops(
      static_cast<size_t>(ncycles));
  for (int c = 0; c < ncycles; ++c) {
    columns[c] = column_cells(tgw.boundary, c);
    cycle_loops[c] =
        loops_as_points(chain_edge_loops(columns[c], kept), compact);
  }
  std::vector<bool> folded(static_cast<size_t>(ncycles), false);
  std::vector<bool> is_ext(static_cast<size_t>(ncycles), false);
  for (int e : tgw.exterior_cycles) is_ext[static_cast<size_t>(e)] = true;
  for (int e : tgw.exterior_cycles) {
    const Vec2 probe = cycle_loops[e].front().front();
    int best = -1;
    double best_area = 0;
    for (int c = 0; c < ncycles; ++c) {
      if (is_ext[c] || tgw.component[c] == tgw.component[e]) continue;
      if (classify_point(probe, cycle_loops[c], 0.0) != PointClass::inside)
        continue;
      const double area = loops_area(cycle_loops[c]);
      if (best < 0 || area < best_area) {
        best = c;
        best_area = area;
      }
    }
    if (best >= 0) {
      columns[best].insert(columns[best].end(), columns[e].begin(),
                           columns[e].end());
      folded[static_cast<size_t>(e)] = true;
    }
  }

  std::vector<int> rows, cols, vals;
  std::vector<int> kept_cycles;
  for (int c = 0; c < ncycles; ++c) {
    if (folded[c]) continue;
    const int col = static_cast<int>(kept_cycles.size());
    kept_cycles.push_back(c);
    for (const auto& [e, sign] : columns[c]) {
      rows.push_back(e);
      cols.push_back(col);
      vals.push_back(sign);
    }
  }

  arr.geometry = std::move(compact);
  arr.edges = std::move(kept);
  arr.boundary_2 = SignedSparseMatrix::from_triplets(
      rows, cols, vals, arr.edges.size(),
      static_cast<int>(kept_cycles.size()));
  arr.faces = cells_from_boundary(arr.boundary_2, arr.edges);
  for (int col = 0; col < arr.boundary_2.ncols; ++col) {
    auto loops =
        chain_edge_loops(column_cells(arr.boundary_2, col), arr.edges);
    std::stable_sort(loops.begin(), loops.end(),
                     [&](const auto& a, const auto& b) {
                       const auto pa = loops_as_points({a}, arr.geometry);
                       const auto pb = loops_as_points({b}, arr.geometry);
                       return std::abs(loops_area(pa)) > std::abs(loops_area(pb));
                     });
    arr.face_loops.push_back(std::move(loops));
    const int cycle = kept_cycles[static_cast<size_t>(col)];
    arr.face_component.push_back(tgw.component[static_cast<size_t>(cycle)]);
    if (is_ext[static_cast<size_t>(cycle)]) arr.exterior_faces.push_back(col);
  }
  return arr;
}

PlanarArrangement restrict_to_face(const PlanarArrangement& arr,
                                   const std::vector<std::vector<Vec2>>& sigma,
                                   double eps) {
  if (sigma.empty() || sigma.front().size() < 3)
    throw std::invalid_argument("restrict_to_face: sigma is not closed");
  PlanarArrangement out;
  out.geometry.dim = 2;
  out.edges.dim = 1;
  out.faces.dim = 2;

  std::vector<int> kept_faces;
  for (int f = 0; f < arr.faces.size(); ++f) {
    if (arr.is_exterior(f)) continue;
    std::vector<std::vector<Vec2>> loops;
    for (const auto& loop : arr.face_loops[static_cast<size_t>(f)]) {
      std::vector<Vec2> pts;
      for (int v : loop) pts.push_back(vertex2(arr.geometry, v));
      loops.push_back(std::move(pts));
    }
    const Vec2 probe = face_interior_point(loops);
    // Closure semantics: on-boundary counts as inside sigma.
    if (classify_point(probe, sigma, eps) != PointClass::outside)
      kept_faces.push_back(f);
  }

  std::vector<int> emap(static_cast<size_t>(arr.edges.size()), -1);
  std::vector<int> vmap(static_cast<size_t>(arr.geometry.size()), -1);
  std::vector<int> rows, cols, vals;
  for (size_t fi = 0; fi < kept_faces.size(); ++fi) {
    for (const auto& [e, sign] : column_cells(arr.boundary_2, kept_faces[fi])) {
      if (emap[static_cast<size_t>(e)] < 0) {
        std::vector<int> ev = arr.edges.cells[static_cast<size_t>(e)];
        for (int& v : ev) {
          if (vmap[static_cast<size_t>(v)] < 0) {
            vmap[static_cast<size_t>(v)] = out.geometry.size();
            out.geometry.coords.push_back(
                arr.geometry.coords[static_cast<size_t>(v)]);
          }
          v = vmap[static_cast<size_t>(v)];
        }
        emap[static_cast<size_t>(e)] = out.edges.size();
        out.edges.cells.push_back(std::move(ev));
      }
      rows.push_back(emap[static_cast<size_t>(e)]);
      cols.push_back(static_cast<int>(fi));
      vals.push_back(sign);
    }
  }
  out.boundary_2 = SignedSparseMatrix::from_triplets(
      rows, cols, vals, out.edges.size(),
      static_cast<int>(kept_faces.size()));
  out.faces = cells_from_boundary(out.boundary_2, out.edges);
  for (size_t fi = 0; fi < kept_faces.size(); ++fi) {
    std::vector<std::vector<int>> loops;
    for (const auto& loop :
         arr.face_loops[static_cast<size_t>(kept_faces[fi])]) {
      std::vector<int> remapped;
      for (int v : loop) remapped.push_back(vmap[static_cast<size_t>(v)]);
      loops.push_back(std::move(remapped));
    }
    out.face_loops.push_back(std::move(loops));
    out.face_component.push_back(
        arr.face_component[static_cast<size_t>(kept_faces[fi])]);
  }
  return out;
}

}  // namespace larkit
