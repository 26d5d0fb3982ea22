#include "larkit/tgw.hpp"

#include <algorithm>
#include <map>
#include <numbers>
#include <numeric>
#include <optional>
#include <stdexcept>
#include <string>

namespace larkit {

namespace {

Vec3 vertex3(const Geometry& g, int v) {
  return {g.coords[static_cast<size_t>(v)][0],
          g.coords[static_cast<size_t>(v)][1],
          g.coords[static_cast<size_t>(v)][2]};
}

double wrap_angle(double a) {
  const double two_pi = 2.0 * std::numbers::pi;
  a = std::fmod(a, two_pi);
  if (a < 0) a += two_pi;
  return a;
}

std::vector<Vec3> loop_points(const Geometry& g, const std::vector<int>& loop) {
  std::vector<Vec3> pts;
  pts.reserve(loop.size());
  for (int v : loop) pts.push_back(vertex3(g, v));
  return pts;
}

// In-plane direction pointing from the hinge into facet f, exact for
// planar faces regardless of convexity. The face lies to the left of its
// oriented loop, seen from the outer-loop normal.
Vec3 petal_direction_3d(const Skeleton& s, int facet, int va, int vb) {
  const auto& loops = s.facet_loops[static_cast<size_t>(facet)];
  const Vec3 n = newell_normal(loop_points(s.geometry, loops.front()));
  for (const auto& loop : loops) {
    const size_t m = loop.size();
    for (size_t i = 0; i < m; ++i) {
      const int u = loop[i];
      const int v = loop[(i + 1) % m];
      if (u == va && v == vb)
        return cross(n, vertex3(s.geometry, vb) - vertex3(s.geometry, va));
      if (u == vb && v == va)
        return cross(n, vertex3(s.geometry, va) - vertex3(s.geometry, vb));
    }
  }
  throw std::logic_error("petal_direction_3d: hinge not on facet loop");
}

}  // namespace

Skeleton make_skeleton_2d(Geometry geometry, CellTable edges) {
  Skeleton s;
  s.dim = 2;
  s.boundary = boundary_1(edges, geometry.size());
  s.geometry = std::move(geometry);
  s.facets = std::move(edges);
  s.hinges.dim = 0;
  return s;
}

Skeleton make_skeleton_3d(Geometry geometry, CellTable edges,
                          CellTable faces, SignedSparseMatrix boundary_2) {
  if (boundary_2.nrows != edges.size() || boundary_2.ncols != faces.size())
    throw std::invalid_argument("make_skeleton_3d: operator shape mismatch");
  Skeleton s;
  s.dim = 3;
  s.facet_loops.resize(static_cast<size_t>(faces.size()));
  for (int f = 0; f < faces.size(); ++f) {
    // Chain the signed edges of the column into oriented vertex loops.
    std::vector<std::pair<int, int>> directed;  // (from, to)
    for (int k = boundary_2.col_ptr[f];
         k < boundary_2.col_ptr[static_cast<size_t>(f) + 1]; ++k) {
      const auto& ev = edges.cells[static_cast<size_t>(
          boundary_2.row_idx[static_cast<size_t>(k)])];
      if (boundary_2.vals[static_cast<size_t>(k)] > 0)
        directed.emplace_back(ev[0], ev[1]);
      else
        directed.emplace_back(ev[1], ev[0]);
    }
    std::multimap<int, size_t> by_start;
    for (size_t k = 0; k < directed.size(); ++k)
      by_start.emplace(directed[k].first, k);
    std::vector<bool> used(directed.size(), false);
    auto& loops = s.facet_loops[static_cast<size_t>(f)];
    for (size_t start = 0; start < directed.size(); ++start) {
      if (used[start]) continue;
      std::vector<int> loop;
      size_t k = start;
      while (!used[k]) {
        used[k] = true;
        loop.push_back(directed[k].first);
        const int head = directed[k].second;
        auto [lo, hi] = by_start.equal_range(head);
        size_t next = directed.size();
        for (auto it = lo; it != hi; ++it)
          if (!used[it->second] && it->second < next) next = it->second;
        if (next == directed.size()) break;
        k = next;
      }
      if (directed[k].second != loop.front() || loop.size() < 3)
        throw std::invalid_argument("make_skeleton_3d: face " +
                                    std::to_string(f) +
                                    " does not close into loops");
      loops.push_back(std::move(loop));
    }
    // Outer loop (largest area) first; the rest are holes.
    std::stable_sort(loops.begin(), loops.end(),
                     [&](const auto& a, const auto& b) {
                       return norm(newell_normal(loop_points(geometry, a))) >
                              norm(newell_normal(loop_points(geometry, b)));
                     });
  }
  s.boundary = std::move(boundary_2);
  s.geometry = std::move(geometry);
  s.facets = std::move(faces);
  s.hinges = std::move(edges);
  return s;
}

PetalFan petal_fan(const Skeleton& skeleton, int hinge) {
  if (hinge < 0 || hinge >= skeleton.hinge_count())
    throw std::out_of_range("petal_fan: hinge out of range");
  std::vector<int> petals;
  const auto cob = skeleton.boundary.transposed();  // hinge rows as columns
  for (int k = cob.col_ptr[hinge];
       k < cob.col_ptr[static_cast<size_t>(hinge) + 1]; ++k) {
    if (std::abs(static_cast<int>(cob.vals[static_cast<size_t>(k)])) != 1)
      throw std::invalid_argument(
          "petal_fan: facet touches hinge more than once");
    petals.push_back(cob.row_idx[static_cast<size_t>(k)]);
  }
  if (petals.size() < 2)
    throw std::invalid_argument("petal_fan: open skeleton, hinge " +
                                std::to_string(hinge) + " has " +
                                std::to_string(petals.size()) + " petal(s)");

  PetalFan fan;
  fan.hinge = hinge;
  std::vector<std::pair<double, int>> order;
  if (skeleton.dim == 2) {
    const auto& g = skeleton.geometry;
    const auto& h = g.coords[static_cast<size_t>(hinge)];
    for (int e : petals) {
      const auto& ev = skeleton.facets.cells[static_cast<size_t>(e)];
      const int other = ev[0] == hinge ? ev[1] : ev[0];
      const auto& o = g.coords[static_cast<size_t>(other)];
      order.emplace_back(wrap_angle(std::atan2(o[1] - h[1], o[0] - h[0])), e);
    }
  } else {
    const auto& hv = skeleton.hinges.cells[static_cast<size_t>(hinge)];
    const Vec3 pa = vertex3(skeleton.geometry, hv[0]);
    const Vec3 pb = vertex3(skeleton.geometry, hv[1]);
    const Vec3 u = normalized(pb - pa);
    int k = 0;
    if (std::abs(u[1]) < std::abs(u[k])) k = 1;
    if (std::abs(u[2]) < std::abs(u[k])) k = 2;
    Vec3 axis{0, 0, 0};
    axis[k] = 1.0;
    const Vec3 v = normalized(axis - dot(axis, u) * u);
    const Vec3 w = cross(u, v);
    for (int f : petals) {
      Vec3 r = petal_direction_3d(skeleton, f, hv[0], hv[1]);
      r = r - dot(r, u) * u;
      order.emplace_back(wrap_angle(std::atan2(dot(r, w), dot(r, v))), f);
    }
  }
  // Ties (coplanar overlapping petals) break by ascending facet index;
  // congruence should have removed them already.
  std::sort(order.begin(), order.end());
  for (const auto& [angle, facet] : order) {
    fan.angles.push_back(angle);
    fan.petals.push_back(facet);
  }
  return fan;
}

SignedCell next_petal(const Skeleton& skeleton, const PetalFan& fan,
                      SignedCell current) {
  const auto it =
      std::find(fan.petals.begin(), fan.petals.end(), current.index);
  if (it == fan.petals.end())
    throw std::invalid_argument("next_petal: facet not in fan");
  const int i = static_cast<int>(it - fan.petals.begin());
  const int m = static_cast<int>(fan.petals.size());
  const int incidence = skeleton.boundary.at(fan.hinge, current.index);
  const int b = current.sign * incidence;
  // Rotation direction chosen so bounded cells come out with positive
  // signed measure in both dimensions.
  const int step = -b;
  const int j = ((i + step) % m + m) % m;
  const int q = fan.petals[static_cast<size_t>(j)];
  const int bq = skeleton.boundary.at(fan.hinge, q);
  return SignedCell{q, -b * bq};
}

namespace {

class Extractor {
 public:
  explicit Extractor(const Skeleton& s)
      : s_(s), fans_(static_cast<size_t>(s.hinge_count())) {}

  const PetalFan& fan(int hinge) {
    auto& slot = fans_[static_cast<size_t>(hinge)];
    if (!slot) slot = petal_fan(s_, hinge);
    return *slot;
  }

  Chain extract(SignedCell seed) {
    std::map<int, int> signs;
    std::vector<SignedCell> stack{seed};
    signs[seed.index] = seed.sign;
    while (!stack.empty()) {
      const SignedCell cur = stack.back();
      stack.pop_back();
      const auto& b = s_.boundary;
      for (int k = b.col_ptr[cur.index];
           k < b.col_ptr[static_cast<size_t>(cur.index) + 1]; ++k) {
        const int hinge = b.row_idx[static_cast<size_t>(k)];
        const SignedCell nxt = next_petal(s_, fan(hinge), cur);
        const auto [it, inserted] = signs.emplace(nxt.index, nxt.sign);
        if (inserted)
          stack.push_back(nxt);
        else if (it->second != nxt.sign)
          throw std::runtime_error(
              "extract_cycle: defective skeleton, facet " +
              std::to_string(nxt.index) +
              " required with both orientations at hinge " +
              std::to_string(hinge));
      }
    }
    Chain c;
    c.dim = s_.dim - 1;
    c.length = s_.facet_count();
    c.entries.assign(signs.begin(), signs.end());
    return c;
  }

 private:
  const Skeleton& s_;
  std::vector<std::optional<PetalFan>> fans_;
};

struct UnionFind {
  std::vector<int> parent;
  explicit UnionFind(int n) : parent(static_cast<size_t>(n)) {
    std::iota(parent.begin(), parent.end(), 0);
  }
  int find(int x) {
    while (parent[static_cast<size_t>(x)] != x) {
      parent[static_cast<size_t>(x)] =
          parent[static_cast<size_t>(parent[static_cast<size_t>(x)])];
      x = parent[static_cast<size_t>(x)];
    }
    return x;
  }
  void unite(int a, int b) { parent[static_cast<size_t>(find(a))] = find(b); }
};

}  // namespace

Chain extract_cycle(const Skeleton& skeleton, SignedCell seed) {
  if (seed.index < 0 || seed.index >= skeleton.facet_count())
    throw std::out_of_range("extract_cycle: seed out of range");
  Extractor ex(skeleton);
  return ex.extract(seed);
}

double signed_measure(const Chain& cycle, const Skeleton& skeleton) {
  const Chain residual = apply(skeleton.boundary, cycle);
  if (!residual.is_zero())
    throw std::invalid_argument("signed_measure: chain is not closed");
  double measure = 0.0;
  if (skeleton.dim == 2) {
    for (const auto& [e, coeff] : cycle.entries) {
      const auto& ev = skeleton.facets.cells[static_cast<size_t>(e)];
      const auto& a = skeleton.geometry.coords[static_cast<size_t>(ev[0])];
      const auto& b = skeleton.geometry.coords[static_cast<size_t>(ev[1])];
      measure += coeff * 0.5 * (a[0] * b[1] - b[0] * a[1]);
    }
  } else {
    for (const auto& [f, coeff] : cycle.entries) {
      for (const auto& loop : skeleton.facet_loops[static_cast<size_t>(f)]) {
        const auto pts = loop_points(skeleton.geometry, loop);
        const Vec3& q0 = pts.front();
        double vol = 0.0;
        for (size_t i = 1; i + 1 < pts.size(); ++i)
          vol += det3(q0, pts[i], pts[i + 1]);
        measure += coeff * vol / 6.0;
      }
    }
  }
  return measure;
}

TgwResult extract_all_cells(const Skeleton& skeleton) {
  const int n = skeleton.facet_count();
  Extractor ex(skeleton);
  std::vector<std::array<bool, 2>> ledger(static_cast<size_t>(n),
                                          {false, false});
  std::vector<Chain> cycles;
  std::vector<int> rows, cols, vals;
  for (int seed = 0; seed < n; ++seed) {
    for (int sign : {+1, -1}) {
      if (ledger[static_cast<size_t>(seed)][sign > 0 ? 0 : 1]) continue;
      Chain c = ex.extract(SignedCell{seed, sign});
      for (const auto& [f, coeff] : c.entries) {
        auto& slot = ledger[static_cast<size_t>(f)][coeff > 0 ? 0 : 1];
        if (slot)
          throw std::runtime_error(
              "extract_all_cells: facet " + std::to_string(f) +
              " consumed twice with the same orientation");
        slot = true;
        rows.push_back(f);
        cols.push_back(static_cast<int>(cycles.size()));
        vals.push_back(coeff);
      }
      cycles.push_back(std::move(c));
    }
  }

  TgwResult result;
  result.boundary = SignedSparseMatrix::from_triplets(
      rows, cols, vals, n, static_cast<int>(cycles.size()));

  UnionFind uf(n);
  const auto cob = skeleton.boundary.transposed();
  for (int h = 0; h < cob.ncols; ++h)
    for (int k = cob.col_ptr[h] + 1;
         k < cob.col_ptr[static_cast<size_t>(h) + 1]; ++k)
      uf.unite(cob.row_idx[static_cast<size_t>(k - 1)],
               cob.row_idx[static_cast<size_t>(k)]);
  std::map<int, int> comp_id;
  for (size_t c = 0; c < cycles.size(); ++c) {
    result.measures.push_back(signed_measure(cycles[c], skeleton));
    const int root = uf.find(cycles[c].entries.front().first);
    const auto [it, inserted] =
        comp_id.emplace(root, static_cast<int>(comp_id.size()));
    result.component.push_back(it->second);
    if (result.measures.back() < 0)
      result.exterior_cycles.push_back(static_cast<int>(c));
  }
  result.component_count = static_cast<int>(comp_id.size());
  return result;
}

}  // namespace larkit
