#pragma once

// Pivot coproducts induced by a total order on the sites of a box lattice of
// any dimension.  For the marked site p every other site s carries b when it
// comes after p in the order and a when it comes before; the order is given as
// a translation-invariant predicate on the offset s - p.
//
// Splitters are derived from the pattern rather than written by hand: a slab
// (a box of thickness one along the split axis) is doubled into the two slabs
// that sit next to each other in some instance of the pattern.  When the
// pattern admits two different continuations of the same slab no splitter
// exists and a DomainError is raised.

#include <functional>
#include <map>
#include <string>
#include <vector>

#include "lat2d/symcore.hpp"

namespace lat2d {

// A word on a box lattice; axis 0 varies fastest in the cell order.
struct NdWord {
  std::vector<int> extent;
  std::vector<std::string> cells;

  auto operator<=>(const NdWord&) const = default;
};

struct NdSum {
  std::vector<int> extent;
  std::map<std::vector<std::string>, cplx> terms;

  void add(const std::vector<std::string>& cells, cplx c);
};

double max_coeff_diff(const NdSum& a, const NdSum& b);

class OrderedPivot {
 public:
  // after(offset) is true iff a site at this offset from the marked site
  // comes after it in the order.  It must be a strict total order: exactly one
  // of after(o), after(-o) holds for every nonzero o.
  using AfterFn = std::function<bool(const std::vector<int>& offset)>;

  OrderedPivot(int dims, AfterFn after, std::string a = "a", std::string b = "b", std::string v = "v");

  int dims() const { return dims_; }
  const std::string& a() const { return a_; }
  const std::string& b() const { return b_; }
  const std::string& v() const { return v_; }

  // The pattern with the marked site at vpos (0-based coordinates).  The
  // marked site itself is written as v.
  std::vector<std::string> pattern(const std::vector<int>& extent, const std::vector<int>& vpos) const;
  // Pattern without a marked site: the box sits at offset shift from a marked
  // site at vpos (vpos may lie outside the box).
  std::vector<std::string> shifted_pattern(const std::vector<int>& extent, const std::vector<int>& vpos,
                                           const std::vector<int>& shift) const;
  // Sum over all marked-site positions of the pattern: the closed form of
  // boxplus(v).
  NdSum pattern_sum(const std::vector<int>& extent) const;

  // Doubles a slab (extent 1 along axis) into extent 2 along axis.
  NdSum split(const NdWord& slab, int axis) const;
  // All slabs of the given extent that occur in some instance of the pattern,
  // plus the two uniform slabs.  Used as the declared splitter domain.
  std::vector<NdWord> domain(const std::vector<int>& slab_extent, int axis) const;

  // Counit: 0 on words containing v, 1 otherwise.
  cplx counit(const NdWord& w) const;

 private:
  int window(const std::vector<int>& extent) const;

  int dims_;
  AfterFn after_;
  std::string a_, b_, v_;
};

// Grid words are boxes with axis 0 = column index and axis 1 = row index.
NdWord to_nd(const GridWord& w);
GridWord to_grid(const NdWord& w);
FormalSum to_formal_sum(const NdSum& s);

// Order for the pivot rotated by angle theta: with u = (cos t, sin t) and
// n = (-sin t, cos t), a site comes after the marked one iff its offset o has
// o.n > 0, or o.n = 0 and o.u > 0.  theta = 0 is the row-by-row site order.
OrderedPivot::AfterFn rotated_order(double theta);
// Lexicographic order on (z, y, x): x fastest, then y, then z.
OrderedPivot::AfterFn lexicographic_order(int dims);

}  // namespace lat2d
