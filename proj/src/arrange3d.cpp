#include "larkit/arrange3d.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <map>
#include <mutex>
#include <set>
#include <stdexcept>
#include <thread>

#include "larkit/operators.hpp"

namespace larkit {

namespace {

Vec3 vertex3(const Geometry& g, int v) {
  return {g.coords[static_cast<size_t>(v)][0],
          g.coords[static_cast<size_t>(v)][1],
          g.coords[static_cast<size_t>(v)][2]};
}

// Chains the undirected edges of one face into vertex loops.
std::vector<std::vector<int>> chain_undirected(
    const std::vector<std::pair<int, int>>& face_edges) {
  std::multimap<int, std::pair<int, size_t>> adj;  // v -> (other, edge id)
  for (size_t k = 0; k < face_edges.size(); ++k) {
    adj.emplace(face_edges[k].first, std::make_pair(face_edges[k].second, k));
    adj.emplace(face_edges[k].second, std::make_pair(face_edges[k].first, k));
  }
  std::vector<bool> used(face_edges.size(), false);
  std::vector<std::vector<int>> loops;
  for (size_t start = 0; start < face_edges.size(); ++start) {
    if (used[start]) continue;
    std::vector<int> loop{face_edges[start].first};
    used[start] = true;
    int cur = face_edges[start].second;
    while (cur != loop.front()) {
      loop.push_back(cur);
      auto [lo, hi] = adj.equal_range(cur);
      size_t next = face_edges.size();
      int next_v = -1;
      for (auto it = lo; it != hi; ++it)
        if (!used[it->second.second] && it->second.second < next) {
          next = it->second.second;
          next_v = it->second.first;
        }
      if (next == face_edges.size())
        throw std::invalid_argument(
            "assemble: face boundary does not close into loops");
      used[next] = true;
      cur = next_v;
    }
    if (loop.size() < 3)
      throw std::invalid_argument("assemble: degenerate face loop");
    loops.push_back(std::move(loop));
  }
  return loops;
}

// Loops for a face given only by its vertex set: angular sort in the
// fitted plane (valid for convex faces, e.g. grid quads).
std::vector<int> convex_loop(const Geometry& g, const std::vector<int>& face) {
  std::vector<Vec3> pts;
  pts.reserve(face.size());
  for (int v : face) pts.push_back(vertex3(g, v));
  const PlaneFrame frame = fit_plane(pts);
  std::vector<std::pair<double, int>> order;
  for (size_t i = 0; i < face.size(); ++i) {
    const Vec2 q = frame.to_plane(pts[i]);
    order.emplace_back(std::atan2(q[1], q[0]), face[i]);
  }
  std::sort(order.begin(), order.end());
  std::vector<int> loop;
  loop.reserve(order.size());
  for (const auto& [angle, v] : order) loop.push_back(v);
  return loop;
}

}  // namespace

FacetSoup assemble(const std::vector<Complex>& inputs) {
  FacetSoup soup;
  soup.geometry.dim = 3;
  soup.edges.dim = 1;
  soup.faces.dim = 2;
  for (size_t id = 0; id < inputs.size(); ++id) {
    const Complex& input = inputs[id];
    if (input.geometry.dim != 3)
      throw std::invalid_argument("assemble: input complex is not 3D");
    const int offset = soup.geometry.size();
    for (const auto& p : input.geometry.coords)
      soup.geometry.coords.push_back(p);

    const bool has_edges = input.has_table(1);
    std::vector<std::set<int>> vertex_edges;
    if (has_edges) {
      vertex_edges.resize(input.geometry.coords.size());
      const auto& ev = input.table(1);
      for (int e = 0; e < ev.size(); ++e) {
        soup.edges.cells.push_back({ev.cells[static_cast<size_t>(e)][0] + offset,
                                    ev.cells[static_cast<size_t>(e)][1] + offset});
        for (int v : ev.cells[static_cast<size_t>(e)])
          vertex_edges[static_cast<size_t>(v)].insert(e);
      }
    }

    const auto& fv = input.table(2);
    for (int f = 0; f < fv.size(); ++f) {
      const auto& face = fv.cells[static_cast<size_t>(f)];
      std::vector<std::vector<int>> loops;
      if (has_edges) {
        const std::set<int> members(face.begin(), face.end());
        std::set<int> eids;
        for (int v : face)
          for (int e : vertex_edges[static_cast<size_t>(v)]) eids.insert(e);
        std::vector<std::pair<int, int>> face_edges;
        const auto& ev = input.table(1);
        for (int e : eids) {
          const auto& edge = ev.cells[static_cast<size_t>(e)];
          if (members.count(edge[0]) && members.count(edge[1]))
            face_edges.emplace_back(edge[0], edge[1]);
        }
        loops = chain_undirected(face_edges);
      } else {
        loops.push_back(convex_loop(input.geometry, face));
      }
      std::vector<int> offset_face;
      for (auto& loop : loops)
        for (int& v : loop) v += offset;
      for (int v : face) offset_face.push_back(v + offset);
      if (!has_edges) {
        for (const auto& loop : loops) {
          const size_t m = loop.size();
          for (size_t i = 0; i < m; ++i)
            soup.edges.cells.push_back({loop[i], loop[(i + 1) % m]});
        }
      }
      soup.faces.cells.push_back(std::move(offset_face));
      soup.face_loops.push_back(std::move(loops));
      soup.provenance.push_back(static_cast<int>(id));
    }
  }
  const auto canon = canonicalize(soup.edges);
  soup.edges = canon.table;
  return soup;
}

// ---------------------------------------------------------------------
// Interval trees

struct CandidateIndex::AxisTree {
  struct Node {
    double center = 0;
    std::vector<std::pair<double, int>> by_lo;  // ascending lo
    std::vector<std::pair<double, int>> by_hi;  // descending hi
    int left = -1, right = -1;
  };
  std::vector<Node> nodes;
  std::vector<std::pair<double, double>> boxes;  // (lo, hi) per face
  int root = -1;

  int build_node(std::vector<int> ids) {
    if (ids.empty()) return -1;
    std::vector<double> endpoints;
    endpoints.reserve(2 * ids.size());
    for (int id : ids) {
      endpoints.push_back(boxes[static_cast<size_t>(id)].first);
      endpoints.push_back(boxes[static_cast<size_t>(id)].second);
    }
    std::nth_element(endpoints.begin(),
                     endpoints.begin() + static_cast<long>(endpoints.size() / 2),
                     endpoints.end());
    const double center = endpoints[endpoints.size() / 2];
    Node node;
    node.center = center;
    std::vector<int> left_ids, right_ids;
    for (int id : ids) {
      const auto& [lo, hi] = boxes[static_cast<size_t>(id)];
      if (hi < center)
        left_ids.push_back(id);
      else if (lo > center)
        right_ids.push_back(id);
      else {
        node.by_lo.emplace_back(lo, id);
        node.by_hi.emplace_back(hi, id);
      }
    }
    std::sort(node.by_lo.begin(), node.by_lo.end());
    std::sort(node.by_hi.begin(), node.by_hi.end(), std::greater<>());
    const int index = static_cast<int>(nodes.size());
    nodes.push_back(std::move(node));
    // Guard against non-splitting degeneracy.
    if (left_ids.size() == ids.size() || right_ids.size() == ids.size()) {
      for (int id : left_ids.empty() ? right_ids : left_ids) {
        nodes[static_cast<size_t>(index)].by_lo.emplace_back(
            boxes[static_cast<size_t>(id)].first, id);
        nodes[static_cast<size_t>(index)].by_hi.emplace_back(
            boxes[static_cast<size_t>(id)].second, id);
      }
      std::sort(nodes[static_cast<size_t>(index)].by_lo.begin(),
                nodes[static_cast<size_t>(index)].by_lo.end());
      std::sort(nodes[static_cast<size_t>(index)].by_hi.begin(),
                nodes[static_cast<size_t>(index)].by_hi.end(),
                std::greater<>());
      return index;
    }
    const int left = build_node(std::move(left_ids));
    const int right = build_node(std::move(right_ids));
    nodes[static_cast<size_t>(index)].left = left;
    nodes[static_cast<size_t>(index)].right = right;
    return index;
  }

  void query(int node, double qlo, double qhi, std::vector<int>& out) const {
    if (node < 0) return;
    const Node& n = nodes[static_cast<size_t>(node)];
    if (qlo <= n.center && n.center <= qhi) {
      for (const auto& [lo, id] : n.by_lo) out.push_back(id);
    } else if (qhi < n.center) {
      for (const auto& [lo, id] : n.by_lo) {
        if (lo > qhi) break;
        out.push_back(id);
      }
    } else {
      for (const auto& [hi, id] : n.by_hi) {
        if (hi < qlo) break;
        out.push_back(id);
      }
    }
    if (qlo < n.center) query(n.left, qlo, qhi, out);
    if (qhi > n.center) query(n.right, qlo, qhi, out);
  }
};

CandidateIndex CandidateIndex::build(const FacetSoup& soup) {
  CandidateIndex index;
  index.nfaces_ = soup.faces.size();
  for (int axis = 0; axis < 3; ++axis) {
    auto tree = std::make_shared<AxisTree>();
    tree->boxes.resize(static_cast<size_t>(soup.faces.size()));
    std::vector<int> ids(static_cast<size_t>(soup.faces.size()));
    for (int f = 0; f < soup.faces.size(); ++f) {
      double lo = std::numeric_limits<double>::infinity();
      double hi = -lo;
      for (int v : soup.faces.cells[static_cast<size_t>(f)]) {
        const double x = soup.geometry.coords[static_cast<size_t>(v)]
                                             [static_cast<size_t>(axis)];
        lo = std::min(lo, x);
        hi = std::max(hi, x);
      }
      tree->boxes[static_cast<size_t>(f)] = {lo, hi};
      ids[static_cast<size_t>(f)] = f;
    }
    tree->root = tree->build_node(std::move(ids));
    index.axes_[axis] = std::move(tree);
  }
  return index;
}

std::vector<int> CandidateIndex::query(int face) const {
  if (face < 0 || face >= nfaces_)
    throw std::out_of_range("CandidateIndex::query: face out of range");
  std::vector<int> result;
  for (int axis = 0; axis < 3; ++axis) {
    const auto& tree = *axes_[axis];
    const auto& [lo, hi] = tree.boxes[static_cast<size_t>(face)];
    std::vector<int> hits;
    tree.query(tree.root, lo, hi, hits);
    std::sort(hits.begin(), hits.end());
    if (axis == 0) {
      result = std::move(hits);
    } else {
      std::vector<int> merged;
      std::set_intersection(result.begin(), result.end(), hits.begin(),
                            hits.end(), std::back_inserter(merged));
      result = std::move(merged);
    }
  }
  result.erase(std::remove(result.begin(), result.end(), face), result.end());
  return result;
}

PlaneFrame face_frame(const FacetSoup& soup, int face) {
  std::vector<Vec3> pts;
  for (int v : soup.faces.cells[static_cast<size_t>(face)])
    pts.push_back(vertex3(soup.geometry, v));
  return fit_plane(pts);
}

// ---------------------------------------------------------------------
// Per-facet fragmentation

namespace {

void add_segment(SegmentSoup& soup, const Vec2& a, const Vec2& b) {
  const int va = soup.geometry.size();
  soup.geometry.coords.push_back({a[0], a[1]});
  soup.geometry.coords.push_back({b[0], b[1]});
  soup.edges.cells.push_back({va, va + 1});
}

// Intersection of one face with the frame's plane: in-plane edges are
// emitted directly; strict crossings are paired by parity along the
// intersection line.
void plane_section(const FacetSoup& soup, int face, const PlaneFrame& frame,
                   double eps, SegmentSoup& out) {
  std::vector<Vec2> crossings;
  for (const auto& loop : soup.face_loops[static_cast<size_t>(face)]) {
    const size_t m = loop.size();
    std::vector<double> h(m);
    std::vector<Vec3> pts(m);
    for (size_t i = 0; i < m; ++i) {
      pts[i] = vertex3(soup.geometry, loop[i]);
      h[i] = frame.height(pts[i]);
      if (std::abs(h[i]) <= eps) h[i] = 0.0;
    }
    bool all_zero = true;
    for (double v : h) all_zero &= v == 0.0;
    if (all_zero) {
      // Coplanar face: its edges fragment the frame face directly.
      for (size_t i = 0; i < m; ++i)
        add_segment(out, frame.to_plane(pts[i]),
                    frame.to_plane(pts[(i + 1) % m]));
      continue;
    }
    // Walk the loop: strict sign changes cross on the edge interior;
    // on-plane vertex runs cross when the strict sides flanking the run
    // differ, and in-plane edges are emitted verbatim.
    for (size_t i = 0; i < m; ++i) {
      const size_t j = (i + 1) % m;
      if (h[i] != 0.0 && h[j] != 0.0 && (h[i] > 0) != (h[j] > 0)) {
        const double t = h[i] / (h[i] - h[j]);
        crossings.push_back(
            frame.to_plane(pts[i] + t * (pts[j] - pts[i])));
      } else if (h[i] == 0.0 && h[j] == 0.0) {
        add_segment(out, frame.to_plane(pts[i]), frame.to_plane(pts[j]));
      }
    }
    for (size_t i = 0; i < m; ++i) {
      if (h[i] != 0.0) continue;
      // Strict signs before and after the zero run through vertex i.
      size_t prev = (i + m - 1) % m;
      while (h[prev] == 0.0 && prev != i) prev = (prev + m - 1) % m;
      size_t next = (i + 1) % m;
      while (h[next] == 0.0 && next != i) next = (next + 1) % m;
      if (h[prev] == 0.0 || h[next] == 0.0) continue;
      // Count the run once, at its first vertex.
      if (h[(i + m - 1) % m] == 0.0) continue;
      if ((h[prev] > 0) != (h[next] > 0))
        crossings.push_back(frame.to_plane(pts[i]));
    }
  }
  if (crossings.size() < 2) return;
  // Sort along the section line and pair interior intervals.
  Vec2 lo = crossings[0], hi = crossings[0];
  for (const auto& p : crossings) {
    if (p[0] < lo[0] || (p[0] == lo[0] && p[1] < lo[1])) lo = p;
    if (p[0] > hi[0] || (p[0] == hi[0] && p[1] > hi[1])) hi = p;
  }
  const Vec2 dir = hi - lo;
  if (norm2d(dir) <= eps) return;
  std::sort(crossings.begin(), crossings.end(),
            [&](const Vec2& a, const Vec2& b) {
              return dot2(a - lo, dir) < dot2(b - lo, dir);
            });
  for (size_t k = 0; k + 1 < crossings.size(); k += 2) {
    if (norm2d(crossings[k + 1] - crossings[k]) > eps)
      add_segment(out, crossings[k], crossings[k + 1]);
  }
}

}  // namespace

Fragment fragment_face(const FacetSoup& soup,
                       const std::vector<int>& candidates, int face,
                       double eps) {
  const PlaneFrame frame = face_frame(soup, face);

  SegmentSoup segments;
  segments.geometry.dim = 2;
  segments.edges.dim = 1;
  std::vector<std::vector<Vec2>> sigma_loops;
  for (const auto& loop : soup.face_loops[static_cast<size_t>(face)]) {
    std::vector<Vec2> pts;
    const size_t m = loop.size();
    for (size_t i = 0; i < m; ++i)
      pts.push_back(frame.to_plane(vertex3(soup.geometry, loop[i])));
    for (size_t i = 0; i < m; ++i)
      add_segment(segments, pts[i], pts[(i + 1) % m]);
    sigma_loops.push_back(std::move(pts));
  }
  for (int other : candidates)
    plane_section(soup, other, frame, eps, segments);

  const PlanarArrangement arr = planar_arrangement(segments, eps);
  Fragment fragment;
  if (arr.faces.size() == 0) return fragment;
  const PlanarArrangement inside = restrict_to_face(arr, sigma_loops, eps);

  fragment.vertices.reserve(static_cast<size_t>(inside.geometry.size()));
  for (const auto& p : inside.geometry.coords)
    fragment.vertices.push_back(frame.from_plane({p[0], p[1]}));
  fragment.face_loops = inside.face_loops;
  return fragment;
}

// ---------------------------------------------------------------------
// Skeleton assembly

Skeleton skeleton_merge(const std::vector<Fragment>& fragments, double eps) {
  Geometry all;
  all.dim = 3;
  std::vector<std::vector<std::vector<int>>> faces;
  for (const auto& fragment : fragments) {
    const int offset = all.size();
    for (const auto& p : fragment.vertices)
      all.coords.push_back({p[0], p[1], p[2]});
    for (const auto& loops : fragment.face_loops) {
      std::vector<std::vector<int>> shifted = loops;
      for (auto& loop : shifted)
        for (int& v : loop) v += offset;
      faces.push_back(std::move(shifted));
    }
  }

  const MergeVerticesResult merged = merge_vertices(all, {}, eps);

  std::map<std::vector<int>, int> face_keys;
  CellTable fv{2, {}};
  std::map<std::pair<int, int>, int> edge_ids;
  CellTable ev{1, {}};
  std::vector<int> rows, cols, vals;

  for (auto& loops : faces) {
    std::vector<std::vector<int>> cleaned;
    for (auto& loop : loops) {
      for (int& v : loop) v = merged.vertex_map[static_cast<size_t>(v)];
      // Collapse duplicates and spikes produced by the vertex merge.
      bool changed = true;
      while (changed && loop.size() >= 3) {
        changed = false;
        for (size_t i = 0; i < loop.size(); ++i) {
          const size_t n = loop.size();
          if (loop[i] == loop[(i + 1) % n]) {
            loop.erase(loop.begin() + static_cast<long>(i));
            changed = true;
            break;
          }
          if (loop[(i + n - 1) % n] == loop[(i + 1) % n]) {
            const size_t a = std::max(i, (i + 1) % n);
            const size_t b = std::min(i, (i + 1) % n);
            loop.erase(loop.begin() + static_cast<long>(a));
            loop.erase(loop.begin() + static_cast<long>(b));
            changed = true;
            break;
          }
        }
      }
      if (loop.size() >= 3) cleaned.push_back(std::move(loop));
    }
    if (cleaned.empty()) continue;

    // Drop faces thinner than the merge tolerance.
    {
      std::vector<Vec3> pts;
      double perimeter = 0;
      for (size_t i = 0; i < cleaned[0].size(); ++i) {
        pts.push_back(vertex3(merged.geometry, cleaned[0][i]));
        if (i > 0) perimeter += norm(pts[i] - pts[i - 1]);
      }
      perimeter += norm(pts.front() - pts.back());
      if (norm(newell_normal(pts)) <= eps * perimeter) continue;
    }

    std::set<int> key_set;
    for (const auto& loop : cleaned) key_set.insert(loop.begin(), loop.end());
    std::vector<int> key(key_set.begin(), key_set.end());
    const auto [it, inserted] = face_keys.emplace(key, fv.size());
    if (!inserted) continue;  // congruent face already present

    const int fid = fv.size();
    fv.cells.push_back(key);
    for (const auto& loop : cleaned) {
      const size_t m = loop.size();
      for (size_t i = 0; i < m; ++i) {
        const int u = loop[i];
        const int v = loop[(i + 1) % m];
        const auto [eit, enew] = edge_ids.emplace(
            std::minmax(u, v), ev.size());
        if (enew) ev.cells.push_back({std::min(u, v), std::max(u, v)});
        rows.push_back(eit->second);
        cols.push_back(fid);
        vals.push_back(u < v ? +1 : -1);
      }
    }
  }

  // Compact to referenced vertices.
  std::vector<int> vmap(merged.geometry.coords.size(), -1);
  Geometry compact;
  compact.dim = 3;
  for (auto& edge : ev.cells)
    for (int& v : edge) {
      if (vmap[static_cast<size_t>(v)] < 0) {
        vmap[static_cast<size_t>(v)] = compact.size();
        compact.coords.push_back(
            merged.geometry.coords[static_cast<size_t>(v)]);
      }
      v = vmap[static_cast<size_t>(v)];
    }
  for (auto& face : fv.cells)
    for (int& v : face) v = vmap[static_cast<size_t>(v)];
  for (auto& face : fv.cells) std::sort(face.begin(), face.end());

  auto boundary_2 = SignedSparseMatrix::from_triplets(rows, cols, vals,
                                                      ev.size(), fv.size());
  Skeleton skeleton =
      make_skeleton_3d(std::move(compact), std::move(ev), std::move(fv),
                       std::move(boundary_2));
  return skeleton;
}

// ---------------------------------------------------------------------
// Shell containment and cell extraction

namespace {

// Signed ray-crossing count of one cycle's surface; |result| == 1 means
// inside. Degenerate hits raise and the caller retries another ray.
struct DegenerateRay {};

int ray_winding(const Vec3& origin, const Vec3& dir,
                const std::vector<SignedCell>& column,
                const Skeleton& skeleton) {
  int winding = 0;
  constexpr double tol = 1e-10;
  for (const auto& [f, coeff] : column) {
    for (const auto& loop : skeleton.facet_loops[static_cast<size_t>(f)]) {
      const Vec3 q0 = vertex3(skeleton.geometry, loop[0]);
      for (size_t i = 1; i + 1 < loop.size(); ++i) {
        const Vec3 a = q0;
        const Vec3 b = vertex3(skeleton.geometry, loop[i]);
        const Vec3 c = vertex3(skeleton.geometry, loop[i + 1]);
        const Vec3 e1 = b - a;
        const Vec3 e2 = c - a;
        const Vec3 h = cross(dir, e2);
        const double det = dot(e1, h);
        const double scale = norm(e1) * norm(e2);
        if (std::abs(det) <= tol * scale) {
          // Parallel or degenerate triangle: only risky when the ray
          // passes near it; a coarse box test decides.
          continue;
        }
        const Vec3 s = origin - a;
        const double u = dot(s, h) / det;
        const Vec3 q = cross(s, e1);
        const double v = dot(dir, q) / det;
        const double t = dot(e2, q) / det;
        if (u < -tol || v < -tol || u + v > 1 + tol || t < -tol) continue;
        if (u < tol || v < tol || u + v > 1 - tol || t < tol)
          throw DegenerateRay{};
        winding += coeff * (det > 0 ? 1 : -1);
      }
    }
  }
  return winding;
}

bool point_in_cycle(const Vec3& point, const std::vector<SignedCell>& column,
                    const Skeleton& skeleton) {
  static const Vec3 dirs[] = {
      {0.577350269189626, 0.577350269189626, 0.577350269189626},
      {0.274721127897378, 0.726103677192887, -0.630334478490561},
  };
  // A couple of fixed generic directions, then pseudo-random fallbacks.
  for (int attempt = 0; attempt < 32; ++attempt) {
    Vec3 dir;
    if (attempt == 0)
      dir = dirs[0];
    else if (attempt == 1)
      dir = dirs[1];
    else {
      const double a = 0.917 * attempt, b = 2.131 * attempt;
      dir = normalized(Vec3{std::cos(a) * std::sin(b),
                            std::sin(a) * std::sin(b), std::cos(b)});
    }
    try {
      return std::abs(ray_winding(point, dir, column, skeleton)) == 1;
    } catch (const DegenerateRay&) {
      continue;
    }
  }
  throw std::runtime_error("point_in_cycle: no generic ray found");
}

// A point strictly in the relative interior of one facet.
Vec3 facet_probe(const Skeleton& skeleton, int facet) {
  const auto& loops = skeleton.facet_loops[static_cast<size_t>(facet)];
  std::vector<Vec3> pts;
  for (int v : loops[0]) pts.push_back(vertex3(skeleton.geometry, v));
  const PlaneFrame frame = fit_plane(pts);
  std::vector<std::vector<Vec2>> loops2;
  for (const auto& loop : loops) {
    std::vector<Vec2> l2;
    for (int v : loop)
      l2.push_back(frame.to_plane(vertex3(skeleton.geometry, v)));
    loops2.push_back(std::move(l2));
  }
  return frame.from_plane(face_interior_point(loops2));
}

}  // namespace

ShellPoset shell_poset(const Skeleton& skeleton, const TgwResult& tgw) {
  ShellPoset poset;
  poset.shell_cycles = tgw.exterior_cycles;
  const size_t n = poset.shell_cycles.size();
  poset.parent.assign(n, -1);
  poset.parity.assign(n, 0);
  std::vector<std::vector<SignedCell>> shells(n);
  for (size_t s = 0; s < n; ++s)
    shells[s] = column_cells(tgw.boundary, poset.shell_cycles[s]);
  for (size_t s = 0; s < n; ++s) {
    const Vec3 probe = facet_probe(skeleton, shells[s].front().index);
    int best = -1;
    double best_vol = 0;
    for (size_t t = 0; t < n; ++t) {
      if (t == s || tgw.component[static_cast<size_t>(poset.shell_cycles[t])] ==
                        tgw.component[static_cast<size_t>(poset.shell_cycles[s])])
        continue;
      if (!point_in_cycle(probe, shells[t], skeleton)) continue;
      const double vol = std::abs(
          tgw.measures[static_cast<size_t>(poset.shell_cycles[t])]);
      if (best < 0 || vol < best_vol) {
        best = static_cast<int>(t);
        best_vol = vol;
      }
    }
    poset.parent[s] = best;
  }
  for (size_t s = 0; s < n; ++s) {
    int depth = 0;
    for (int p = poset.parent[s]; p >= 0; p = poset.parent[static_cast<size_t>(p)])
      ++depth;
    poset.parity[s] = depth % 2;
  }
  return poset;
}

ChainComplexResult space_arrangement(const Skeleton& skeleton) {
  const TgwResult tgw = extract_all_cells(skeleton);
  const int ncycles = tgw.boundary.ncols;

  std::vector<std::vector<SignedCell>> columns(static_cast<size_t>(ncycles));
  for (int c = 0; c < ncycles; ++c)
    columns[static_cast<size_t>(c)] = column_cells(tgw.boundary, c);

  // Fold each component shell contained in a cell of another component:
  // the enclosing cell acquires the shell as a cavity boundary.
  std::vector<bool> folded(static_cast<size_t>(ncycles), false);
  std::vector<bool> is_ext(static_cast<size_t>(ncycles), false);
  for (int e : tgw.exterior_cycles) is_ext[static_cast<size_t>(e)] = true;
  for (int e : tgw.exterior_cycles) {
    const Vec3 probe =
        facet_probe(skeleton, columns[static_cast<size_t>(e)].front().index);
    int best = -1;
    double best_vol = 0;
    for (int c = 0; c < ncycles; ++c) {
      if (is_ext[static_cast<size_t>(c)] ||
          tgw.component[static_cast<size_t>(c)] ==
              tgw.component[static_cast<size_t>(e)])
        continue;
      if (!point_in_cycle(probe, columns[static_cast<size_t>(c)], skeleton))
        continue;
      const double vol = tgw.measures[static_cast<size_t>(c)];
      if (best < 0 || vol < best_vol) {
        best = c;
        best_vol = vol;
      }
    }
    if (best >= 0) {
      auto& target = columns[static_cast<size_t>(best)];
      target.insert(target.end(), columns[static_cast<size_t>(e)].begin(),
                    columns[static_cast<size_t>(e)].end());
      folded[static_cast<size_t>(e)] = true;
    }
  }

  std::vector<int> rows, cols, vals;
  std::vector<int> kept;
  for (int c = 0; c < ncycles; ++c) {
    if (folded[static_cast<size_t>(c)]) continue;
    const int col = static_cast<int>(kept.size());
    kept.push_back(c);
    for (const auto& [f, sign] : columns[static_cast<size_t>(c)]) {
      rows.push_back(f);
      cols.push_back(col);
      vals.push_back(sign);
    }
  }

  ChainComplexResult result;
  result.geometry = skeleton.geometry;
  result.tables[1] = skeleton.hinges;
  result.tables[2] = skeleton.facets;
  result.operators.push_back(boundary_1(skeleton.hinges,
                                        skeleton.geometry.size()));
  result.operators.push_back(skeleton.boundary);
  result.operators.push_back(SignedSparseMatrix::from_triplets(
      rows, cols, vals, skeleton.facet_count(),
      static_cast<int>(kept.size())));
  result.tables[3] =
      cells_from_boundary(result.operators.back(), skeleton.facets);
  for (size_t col = 0; col < kept.size(); ++col)
    if (is_ext[static_cast<size_t>(kept[col])])
      result.exterior_cells.push_back(static_cast<int>(col));
  if (!result.exterior_cells.empty())
    result.exterior_cell = result.exterior_cells.front();
  return result;
}

ChainComplexResult space_arrangement(const std::vector<Complex>& inputs,
                                     double eps, int workers) {
  if (eps <= 0) throw std::invalid_argument("space_arrangement: eps <= 0");
  const FacetSoup soup = assemble(inputs);
  const CandidateIndex index = CandidateIndex::build(soup);
  const int nfaces = soup.faces.size();

  std::vector<Fragment> fragments(static_cast<size_t>(nfaces));
  std::atomic<int> cursor{0};
  std::exception_ptr failure;
  std::mutex failure_lock;
  const auto work = [&]() {
    while (true) {
      const int f = cursor.fetch_add(1);
      if (f >= nfaces) return;
      try {
        fragments[static_cast<size_t>(f)] =
            fragment_face(soup, index.query(f), f, eps);
      } catch (...) {
        const std::lock_guard<std::mutex> guard(failure_lock);
        if (!failure) failure = std::current_exception();
        return;
      }
    }
  };
  if (workers <= 1) {
    work();
  } else {
    std::vector<std::thread> pool;
    for (int w = 0; w < workers; ++w) pool.emplace_back(work);
    for (auto& t : pool) t.join();
  }
  if (failure) std::rethrow_exception(failure);

  const Skeleton skeleton = skeleton_merge(fragments, eps);
  return space_arrangement(skeleton);
}

}  // namespace larkit
