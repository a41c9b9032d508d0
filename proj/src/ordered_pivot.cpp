#include "lat2d/ordered_pivot.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <set>

namespace lat2d {

namespace {

int volume(const std::vector<int>& extent) {
  return std::accumulate(extent.begin(), extent.end(), 1, std::multiplies<>());
}

// Coordinates of cell k, axis 0 fastest.
std::vector<int> coords(int k, const std::vector<int>& extent) {
  std::vector<int> c(extent.size());
  for (std::size_t a = 0; a < extent.size(); ++a) {
    c[a] = k % extent[a];
    k /= extent[a];
  }
  return c;
}

std::string describe(const NdWord& w) {
  std::string s = "[";
  for (std::size_t k = 0; k < w.cells.size(); ++k) s += (k ? " " : "") + w.cells[k];
  return s + "]";
}

}  // namespace

void NdSum::add(const std::vector<std::string>& cells, cplx c) {
  auto [it, inserted] = terms.try_emplace(cells, c);
  if (!inserted) it->second += c;
  if (std::abs(it->second) < kCanonEps) terms.erase(it);
}

double max_coeff_diff(const NdSum& a, const NdSum& b) {
  if (a.extent != b.extent) return std::numeric_limits<double>::infinity();
  double worst = 0.0;
  for (const auto& [cells, c] : a.terms) {
    auto it = b.terms.find(cells);
    worst = std::max(worst, std::abs(c - (it == b.terms.end() ? cplx(0.0) : it->second)));
  }
  for (const auto& [cells, c] : b.terms)
    if (!a.terms.count(cells)) worst = std::max(worst, std::abs(c));
  return worst;
}

OrderedPivot::OrderedPivot(int dims, AfterFn after, std::string a, std::string b, std::string v)
    : dims_(dims), after_(std::move(after)), a_(std::move(a)), b_(std::move(b)), v_(std::move(v)) {
  if (dims < 1) throw ConfigError("ordered pivot needs at least one dimension");
}

std::vector<std::string> OrderedPivot::shifted_pattern(const std::vector<int>& extent, const std::vector<int>& vpos,
                                                       const std::vector<int>& shift) const {
  const int vol = volume(extent);
  std::vector<std::string> cells(static_cast<std::size_t>(vol));
  std::vector<int> off(extent.size());
  for (int k = 0; k < vol; ++k) {
    auto c = coords(k, extent);
    bool zero = true;
    for (std::size_t a = 0; a < extent.size(); ++a) {
      off[a] = c[a] - vpos[a] + shift[a];
      zero = zero && off[a] == 0;
    }
    cells[static_cast<std::size_t>(k)] = zero ? v_ : (after_(off) ? b_ : a_);
  }
  return cells;
}

std::vector<std::string> OrderedPivot::pattern(const std::vector<int>& extent, const std::vector<int>& vpos) const {
  return shifted_pattern(extent, vpos, std::vector<int>(extent.size(), 0));
}

NdSum OrderedPivot::pattern_sum(const std::vector<int>& extent) const {
  NdSum s{extent, {}};
  for (int k = 0; k < volume(extent); ++k) s.add(pattern(extent, coords(k, extent)), 1.0);
  return s;
}

int OrderedPivot::window(const std::vector<int>& extent) const {
  // Beyond this distance along the split axis every slab of the pattern is
  // uniform for the rotated orders at multiples of pi/8 (slope at least
  // tan(pi/8) > 1/4), so larger shifts add no new candidates.
  return 4 * std::accumulate(extent.begin(), extent.end(), 0) + 4;
}

NdSum OrderedPivot::split(const NdWord& slab, int axis) const {
  if (static_cast<int>(slab.extent.size()) != dims_ || axis < 0 || axis >= dims_ || slab.extent[axis] != 1)
    throw ShapeError("split needs a slab of thickness one along the split axis");
  for (const auto& s : slab.cells)
    if (s != a_ && s != b_ && s != v_) throw DomainError("symbol '" + s + "' is not part of the pivot alphabet");

  std::vector<int> doubled = slab.extent;
  doubled[axis] = 2;
  std::vector<int> e(dims_, 0);
  e[axis] = 1;
  auto shift = [&](int k) {
    std::vector<int> s(dims_, 0);
    s[axis] = k;
    return s;
  };
  // Cells of the doubled box from its lower and upper slabs.
  auto join = [&](const std::vector<std::string>& lower, const std::vector<std::string>& upper) {
    NdWord lo{slab.extent, lower}, up{slab.extent, upper};
    std::vector<std::string> cells(static_cast<std::size_t>(volume(doubled)));
    for (int k = 0; k < volume(doubled); ++k) {
      auto c = coords(k, doubled);
      int layer = c[axis];
      c[axis] = 0;
      int idx = 0, stride = 1;
      for (int a = 0; a < dims_; ++a) {
        idx += c[a] * stride;
        stride *= slab.extent[a];
      }
      cells[static_cast<std::size_t>(k)] = (layer == 0 ? lo : up).cells[static_cast<std::size_t>(idx)];
    }
    return cells;
  };

  const int nv = static_cast<int>(std::count(slab.cells.begin(), slab.cells.end(), v_));
  NdSum out{doubled, {}};
  if (nv > 1) throw DomainError("slab " + describe(slab) + " carries more than one " + v_);
  if (nv == 1) {
    int k = static_cast<int>(std::find(slab.cells.begin(), slab.cells.end(), v_) - slab.cells.begin());
    auto p = coords(k, slab.extent);
    if (pattern(slab.extent, p) != slab.cells)
      throw DomainError("slab " + describe(slab) + " is not a pattern around its " + v_);
    // The marked site stays in this slab and the neighbour follows, or the
    // marked site moves on and the neighbour precedes.
    out.add(join(slab.cells, shifted_pattern(slab.extent, p, shift(1))), 1.0);
    out.add(join(shifted_pattern(slab.extent, p, shift(-1)), slab.cells), 1.0);
    return out;
  }

  std::set<std::pair<std::vector<std::string>, std::vector<std::string>>> candidates;
  bool uniform = std::all_of(slab.cells.begin(), slab.cells.end(), [&](const auto& s) { return s == slab.cells[0]; });
  if (uniform) candidates.insert({slab.cells, slab.cells});  // a, b are group-like
  const int w = window(slab.extent);
  for (int kv = 0; kv < volume(slab.extent); ++kv) {
    auto p = coords(kv, slab.extent);
    for (int k = -w; k <= w; ++k) {
      if (k == 0 || shifted_pattern(slab.extent, p, shift(k)) != slab.cells) continue;
      if (k > 0)
        candidates.insert({slab.cells, shifted_pattern(slab.extent, p, shift(k + 1))});
      else
        candidates.insert({shifted_pattern(slab.extent, p, shift(k - 1)), slab.cells});
    }
  }
  if (candidates.empty()) throw DomainError("slab " + describe(slab) + " does not occur in the pattern");
  if (candidates.size() > 1)
    throw DomainError("slab " + describe(slab) + " has " + std::to_string(candidates.size()) +
                      " inequivalent continuations in the pattern; no splitter reproduces it");
  out.add(join(candidates.begin()->first, candidates.begin()->second), 1.0);
  return out;
}

std::vector<NdWord> OrderedPivot::domain(const std::vector<int>& slab_extent, int axis) const {
  std::set<std::vector<std::string>> seen;
  const int vol = volume(slab_extent);
  seen.insert(std::vector<std::string>(static_cast<std::size_t>(vol), a_));
  seen.insert(std::vector<std::string>(static_cast<std::size_t>(vol), b_));
  const int w = window(slab_extent);
  std::vector<int> s(dims_, 0);
  for (int kv = 0; kv < vol; ++kv) {
    auto p = coords(kv, slab_extent);
    for (int k = -w; k <= w; ++k) {
      s[axis] = k;
      seen.insert(shifted_pattern(slab_extent, p, s));
    }
  }
  std::vector<NdWord> out;
  for (const auto& cells : seen) out.push_back({slab_extent, cells});
  return out;
}

cplx OrderedPivot::counit(const NdWord& w) const {
  return std::find(w.cells.begin(), w.cells.end(), v_) == w.cells.end() ? 1.0 : 0.0;
}

NdWord to_nd(const GridWord& w) { return {{w.shape.cols, w.shape.rows}, w.cells}; }

GridWord to_grid(const NdWord& w) {
  if (w.extent.size() != 2) throw ShapeError("only two-dimensional boxes convert to grid words");
  return GridWord({w.extent[1], w.extent[0]}, w.cells);
}

FormalSum to_formal_sum(const NdSum& s) {
  FormalSum out({s.extent.at(1), s.extent.at(0)});
  for (const auto& [cells, c] : s.terms) out.add_term(cells, c);
  return out;
}

OrderedPivot::AfterFn rotated_order(double theta) {
  const double ux = std::cos(theta), uy = std::sin(theta);
  const double nx = -std::sin(theta), ny = std::cos(theta);
  constexpr double eps = 1e-9;
  return [=](const std::vector<int>& o) {
    double along_n = o[0] * nx + o[1] * ny;
    if (along_n > eps) return true;
    if (along_n < -eps) return false;
    return o[0] * ux + o[1] * uy > eps;
  };
}

OrderedPivot::AfterFn lexicographic_order(int dims) {
  return [dims](const std::vector<int>& o) {
    for (int a = dims - 1; a >= 0; --a)
      if (o[a] != 0) return o[a] > 0;
    return false;
  };
}

}  // namespace lat2d
