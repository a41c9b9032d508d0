#include "lat2d/coalg.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <limits>
#include <sstream>

#include "lat2d/ordered_pivot.hpp"

namespace lat2d {

std::string to_string(Dir d) { return d == Dir::X ? "x" : "y"; }

namespace {

Shape boundary_shape(Dir dir, int len) { return dir == Dir::X ? Shape{len, 1} : Shape{1, len}; }

void require_boundary(Dir dir, const GridWord& w) {
  bool ok = dir == Dir::X ? w.shape.cols == 1 : w.shape.rows == 1;
  if (!ok) throw ShapeError(std::string(dir == Dir::X ? "x" : "y") + " maps act on a single " +
                            (dir == Dir::X ? "column" : "row") + ", got " + to_string(w.shape));
}

// Left/right halves (x) or bottom/top halves (y) of a doubled word.
std::pair<GridWord, GridWord> halves(Dir dir, const GridWord& w) {
  if (dir == Dir::X) return {column_block(w, 1, 1), column_block(w, 2, 2)};
  return {row_block(w, 1, 1), row_block(w, 2, 2)};
}

template <class F>
double timed_ms(F&& f) {
  auto t0 = std::chrono::steady_clock::now();
  f();
  return std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - t0).count();
}

}  // namespace

FormalSum apply_splitter(const CoalgebraExample& ex, Dir dir, const GridWord& w) {
  require_boundary(dir, w);
  const auto& fn = dir == Dir::X ? ex.split_x : ex.split_y;
  if (!fn) throw ConfigError(ex.name + ": no " + to_string(dir) + " splitter");
  FormalSum out = fn(w);
  Shape want = dir == Dir::X ? Shape{w.shape.rows, 2} : Shape{2, w.shape.cols};
  if (out.shape() != want)
    throw ConfigError(ex.name + ": splitter returned " + to_string(out.shape()) + " for " + to_string(w.shape));
  return out;
}

cplx apply_counit(const CoalgebraExample& ex, Dir dir, const GridWord& w) {
  require_boundary(dir, w);
  const auto& fn = dir == Dir::X ? ex.counit_x : ex.counit_y;
  if (!fn) throw ConfigError(ex.name + ": no " + to_string(dir) + " counit");
  return fn(w);
}

FormalSum apply_antipode(const CoalgebraExample& ex, Dir dir, const GridWord& w) {
  require_boundary(dir, w);
  const auto& fn = dir == Dir::X ? ex.antipode_x : ex.antipode_y;
  if (!fn) throw ConfigError(ex.name + ": no " + to_string(dir) + " antipode");
  FormalSum out = fn(w);
  if (out.shape() != w.shape) throw ConfigError(ex.name + ": antipode changed the shape");
  return out;
}

std::vector<GridWord> domain_words(const CoalgebraExample& ex, Dir dir, int len) {
  const auto& fn = dir == Dir::X ? ex.domain_x : ex.domain_y;
  if (!fn) throw ConfigError(ex.name + ": no declared " + to_string(dir) + " domain");
  auto words = fn(len);
  for (const auto& w : words)
    if (w.shape != boundary_shape(dir, len)) throw ConfigError(ex.name + ": domain word of wrong shape");
  return words;
}

FormalSum split_column(const CoalgebraExample& ex, const FormalSum& s, int j) {
  const Shape sh = s.shape();
  if (j < 1 || j > sh.cols) throw RangeError("split_column: column out of range");
  FormalSum out({sh.rows, sh.cols + 1});
  for (const auto& [cells, c] : s.terms()) {
    GridWord w(sh, cells);
    FormalSum mid = apply_splitter(ex, Dir::X, w.column(j));
    FormalSum left = j > 1 ? FormalSum::of(column_block(w, 1, j - 1)) : FormalSum();
    FormalSum right = j < sh.cols ? FormalSum::of(column_block(w, j + 1, sh.cols)) : FormalSum();
    FormalSum piece = mid;
    if (j > 1) piece = concat_h(left, piece);
    if (j < sh.cols) piece = concat_h(piece, right);
    out += sum_scale(piece, c);
  }
  return out;
}

FormalSum split_row(const CoalgebraExample& ex, const FormalSum& s, int i) {
  const Shape sh = s.shape();
  if (i < 1 || i > sh.rows) throw RangeError("split_row: row out of range");
  FormalSum out({sh.rows + 1, sh.cols});
  for (const auto& [cells, c] : s.terms()) {
    GridWord w(sh, cells);
    FormalSum piece = apply_splitter(ex, Dir::Y, w.row(i));
    if (i > 1) piece = concat_v(FormalSum::of(row_block(w, 1, i - 1)), piece);
    if (i < sh.rows) piece = concat_v(piece, FormalSum::of(row_block(w, i + 1, sh.rows)));
    out += sum_scale(piece, c);
  }
  return out;
}

FormalSum grow(const CoalgebraExample& ex, const std::string& sym, const std::string& moves) {
  FormalSum s = FormalSum::of(GridWord({1, 1}, {sym}));
  for (char mv : moves) {
    switch (mv) {
      case 'x': s = split_column(ex, s, s.shape().cols); break;
      case 'X': s = split_column(ex, s, 1); break;
      case 'y': s = split_row(ex, s, s.shape().rows); break;
      case 'Y': s = split_row(ex, s, 1); break;
      default: throw ConfigError(std::string("unknown growth move '") + mv + "'");
    }
  }
  return s;
}

std::string canonical_moves(int n, int m) {
  if (n < 1 || m < 1) throw ShapeError("lattice sizes must be positive");
  return std::string(static_cast<std::size_t>(n - 1), 'y') + std::string(static_cast<std::size_t>(m - 1), 'x');
}

std::vector<std::string> growth_orders(int n, int m) {
  std::string moves = std::string(static_cast<std::size_t>(m - 1), 'x') + std::string(static_cast<std::size_t>(n - 1), 'y');
  std::vector<std::string> out;
  do {
    out.push_back(moves);
  } while (std::next_permutation(moves.begin(), moves.end()));
  return out;
}

FormalSum boxplus(const CoalgebraExample& ex, const std::string& sym, int n, int m) {
  return grow(ex, sym, canonical_moves(n, m));
}

// ---------------------------------------------------------------------------
// Reports

bool CheckReport::passed() const {
  return std::all_of(instances.begin(), instances.end(), [](const auto& r) { return r.pass; });
}

std::optional<double> CheckReport::max_residual() const {
  double worst = 0.0;
  for (const auto& r : instances) {
    if (!r.residual) return std::nullopt;
    worst = std::max(worst, *r.residual);
  }
  return worst;
}

void CheckReport::add(std::string input, std::optional<double> residual, double tol, std::string note) {
  bool pass = residual.has_value() && std::isfinite(*residual) && *residual <= tol;
  instances.push_back({std::move(input), pass, residual, std::move(note)});
}

void CheckReport::add_size(Shape s) {
  if (std::find(sizes.begin(), sizes.end(), s) == sizes.end()) sizes.push_back(s);
}

void CheckReport::merge(const CheckReport& other) {
  for (const auto& s : other.sizes) add_size(s);
  instances.insert(instances.end(), other.instances.begin(), other.instances.end());
  elapsed_ms += other.elapsed_ms;
}

nlohmann::json to_json(const CheckReport& r) {
  nlohmann::json sizes = nlohmann::json::array();
  for (const auto& s : r.sizes) sizes.push_back({s.rows, s.cols});
  nlohmann::json inst = nlohmann::json::array();
  for (const auto& i : r.instances) {
    nlohmann::json j = {{"input", i.input}, {"pass", i.pass}};
    j["residual"] = i.residual ? nlohmann::json(*i.residual) : nlohmann::json(nullptr);
    if (!i.note.empty()) j["note"] = i.note;
    inst.push_back(std::move(j));
  }
  nlohmann::json out = {{"check", r.check}, {"sizes", sizes}, {"instances", inst}, {"pass", r.passed()}};
  auto mr = r.max_residual();
  out["max_residual"] = mr ? nlohmann::json(*mr) : nlohmann::json(nullptr);
  return out;
}

// ---------------------------------------------------------------------------
// Axiom checks

CheckReport check_quasi_1d_assoc(const CoalgebraExample& ex, Dir dir, int len, std::vector<GridWord> words,
                                 double tol) {
  CheckReport rep;
  rep.check = "quasi_1d_assoc_" + to_string(dir);
  rep.add_size(boundary_shape(dir, len));
  rep.elapsed_ms = timed_ms([&] {
    if (words.empty()) words = domain_words(ex, dir, len);
    for (const auto& w : words) {
      try {
        FormalSum once = apply_splitter(ex, dir, w);
        FormalSum first = dir == Dir::X ? split_column(ex, once, 1) : split_row(ex, once, 1);
        FormalSum second = dir == Dir::X ? split_column(ex, once, 2) : split_row(ex, once, 2);
        rep.add(to_string(w), max_coeff_diff(first, second), tol);
      } catch (const DomainError& e) {
        rep.add(to_string(w), std::nullopt, tol, e.what());
      }
    }
  });
  return rep;
}

CheckReport check_counit(const CoalgebraExample& ex, Dir dir, int len, std::vector<GridWord> words, double tol) {
  CheckReport rep;
  rep.check = "counit_" + to_string(dir);
  rep.add_size(boundary_shape(dir, len));
  rep.elapsed_ms = timed_ms([&] {
    if (words.empty()) words = domain_words(ex, dir, len);
    for (const auto& w : words) {
      try {
        FormalSum left(w.shape), right(w.shape);
        for (const auto& [cells, c] : apply_splitter(ex, dir, w).terms()) {
          auto [lo, hi] = halves(dir, GridWord(dir == Dir::X ? Shape{len, 2} : Shape{2, len}, cells));
          left.add_term(hi, c * apply_counit(ex, dir, lo));
          right.add_term(lo, c * apply_counit(ex, dir, hi));
        }
        FormalSum id = FormalSum::of(w);
        rep.add(to_string(w), std::max(max_coeff_diff(left, id), max_coeff_diff(right, id)), tol);
      } catch (const DomainError& e) {
        rep.add(to_string(w), std::nullopt, tol, e.what());
      }
    }
  });
  return rep;
}

CheckReport check_xy_compat(const CoalgebraExample& ex, int n, int m, double tol) {
  CheckReport rep;
  rep.check = "xy_compat";
  rep.add_size({n, m});
  rep.elapsed_ms = timed_ms([&] {
    std::vector<std::string> orders = growth_orders(n, m);
    // Splitting the first instead of the last boundary is a further legal order.
    std::string flipped = canonical_moves(n, m);
    for (char& c : flipped) c = static_cast<char>(std::toupper(static_cast<unsigned char>(c)));
    if (flipped != canonical_moves(n, m)) orders.push_back(flipped);
    for (const auto& g : ex.generators) {
      std::optional<FormalSum> ref;
      try {
        ref = boxplus(ex, g, n, m);
      } catch (const DomainError& e) {
        rep.add(g + " " + to_string(Shape{n, m}) + " canonical", std::nullopt, tol, e.what());
        continue;
      }
      for (const auto& ord : orders) {
        if (ord == canonical_moves(n, m)) continue;
        std::string label = g + " " + to_string(Shape{n, m}) + " order '" + ord + "'";
        try {
          rep.add(label, max_coeff_diff(*ref, grow(ex, g, ord)), tol);
        } catch (const DomainError& e) {
          rep.add(label, std::nullopt, tol, e.what());
        }
      }
      if (orders.size() == 1) rep.add(g + " " + to_string(Shape{n, m}) + " single order", 0.0, tol);
    }
  });
  return rep;
}

CheckReport check_homomorphism(const CoalgebraExample& ex, const Representation& rep, int n, int m,
                               const std::vector<std::string>& relation_names, double tol) {
  CheckReport r;
  r.check = "homomorphism";
  r.add_size({n, m});
  r.elapsed_ms = timed_ms([&] {
    std::vector<const Relation*> rels;
    for (const auto& rel : ex.relations)
      if (relation_names.empty() ||
          std::find(relation_names.begin(), relation_names.end(), rel.name) != relation_names.end())
        rels.push_back(&rel);
    if (rels.empty()) throw ConfigError(ex.name + ": no multiplication data for the homomorphism check");
    std::map<std::string, SparseOperator> ops;
    auto op_of = [&](const std::string& s) -> const SparseOperator& {
      auto it = ops.find(s);
      if (it == ops.end()) it = ops.emplace(s, evaluate(boxplus(ex, s, n, m), rep)).first;
      return it->second;
    };
    const auto dim = static_cast<Eigen::Index>(std::llround(std::pow(rep.dim, n * m)));
    for (const auto* rel : rels) {
      try {
        SparseOperator total = SparseOperator::zero(dim);
        for (const auto& t : rel->terms) {
          SparseOperator prod = SparseOperator::identity(dim);
          for (const auto& f : t.factors) prod = prod * op_of(f);
          total = total + t.coeff * prod;
        }
        r.add(rel->name + " " + to_string(Shape{n, m}), max_abs(total), tol);
      } catch (const DomainError& e) {
        r.add(rel->name + " " + to_string(Shape{n, m}), std::nullopt, tol, e.what());
      }
    }
  });
  return r;
}

CheckReport check_antipode(const CoalgebraExample& ex, const Representation& rep, Dir dir, int len,
                           std::vector<GridWord> words, double tol) {
  if (!(dir == Dir::X ? ex.antipode_x : ex.antipode_y))
    throw ConfigError(ex.name + " has no antipode in direction " + to_string(dir));
  CheckReport r;
  r.check = "antipode_" + to_string(dir);
  r.add_size(boundary_shape(dir, len));
  r.elapsed_ms = timed_ms([&] {
    if (words.empty()) words = domain_words(ex, dir, len);
    const auto dim = static_cast<Eigen::Index>(std::llround(std::pow(rep.dim, len)));
    for (const auto& w : words) {
      try {
        SparseOperator left = SparseOperator::zero(dim), right = SparseOperator::zero(dim);
        for (const auto& [cells, c] : apply_splitter(ex, dir, w).terms()) {
          auto [lo, hi] = halves(dir, GridWord(dir == Dir::X ? Shape{len, 2} : Shape{2, len}, cells));
          left = left + c * (evaluate(apply_antipode(ex, dir, lo), rep) * evaluate(FormalSum::of(hi), rep));
          right = right + c * (evaluate(FormalSum::of(lo), rep) * evaluate(apply_antipode(ex, dir, hi), rep));
        }
        SparseOperator target = apply_counit(ex, dir, w) * SparseOperator::identity(dim);
        r.add(to_string(w), std::max(max_abs_diff(left, target), max_abs_diff(right, target)), tol);
      } catch (const DomainError& e) {
        r.add(to_string(w), std::nullopt, tol, e.what());
      }
    }
  });
  return r;
}

cplx dual_product(const std::vector<std::map<std::string, cplx>>& functionals, const CoalgebraExample& ex,
                  const std::string& v, int n, int m, Gathering gathering) {
  if (static_cast<int>(functionals.size()) != n * m)
    throw ShapeError("dual_product: need one functional per site (" + std::to_string(n * m) + "), got " +
                     std::to_string(functionals.size()));
  // Column gathering: the column functionals multiply along x, so the sum is
  // grown as columns first; row gathering grows the rows first.
  std::string moves = gathering == Gathering::Cols
                          ? canonical_moves(n, m)
                          : std::string(static_cast<std::size_t>(m - 1), 'x') + std::string(static_cast<std::size_t>(n - 1), 'y');
  FormalSum s = grow(ex, v, moves);
  cplx total = 0.0;
  for (const auto& [cells, c] : s.terms()) {
    cplx prod = c;
    for (std::size_t k = 0; k < cells.size() && prod != cplx(0.0); ++k) {
      auto it = functionals[k].find(cells[k]);
      prod *= it == functionals[k].end() ? cplx(0.0) : it->second;
    }
    total += prod;
  }
  return total;
}

// ---------------------------------------------------------------------------
// Proposition on one-site coproducts

namespace {

FormalSum site_coproduct_sum(const SiteCoproduct& d, const std::string& s, Dir dir) {
  FormalSum out(dir == Dir::X ? Shape{1, 2} : Shape{2, 1});
  for (const auto& t : d(s)) out.add_term({t.left, t.right}, t.coeff);
  return out;
}

}  // namespace

PropositionReport check_trivial_proposition(const SiteCoproduct& dx, const SiteCoproduct& dy,
                                            const std::vector<std::string>& instances, double tol) {
  PropositionReport out;
  out.premise.check = "trivial_proposition_premise";
  out.conclusion.check = "trivial_proposition_conclusion";
  out.premise.add_size({2, 2});
  out.conclusion.add_size({1, 2});
  for (const auto& s : instances) {
    // (Dy (x) Dy) o Dx: split horizontally, then each site vertically.
    FormalSum lhs({2, 2}), rhs({2, 2});
    for (const auto& t : dx(s))
      lhs += sum_scale(concat_h(site_coproduct_sum(dy, t.left, Dir::Y), site_coproduct_sum(dy, t.right, Dir::Y)),
                       t.coeff);
    // (Dx (x) Dx) o Dy: split vertically, then each site horizontally.
    for (const auto& t : dy(s))
      rhs += sum_scale(concat_v(site_coproduct_sum(dx, t.left, Dir::X), site_coproduct_sum(dx, t.right, Dir::X)),
                       t.coeff);
    double res = max_coeff_diff(lhs, rhs);
    out.premise.add(s, res, tol);
    if (res <= tol) {
      FormalSum ax = site_coproduct_sum(dx, s, Dir::X), ay({1, 2}), op({1, 2});
      for (const auto& t : dy(s)) ay.add_term({t.left, t.right}, t.coeff);
      for (const auto& t : dx(s)) op.add_term({t.right, t.left}, t.coeff);
      out.conclusion.add(s, std::max(max_coeff_diff(ax, ay), max_coeff_diff(ax, op)), tol);
    }
  }
  out.premise_holds = out.premise.passed();
  out.conclusion_holds = out.conclusion.passed();
  return out;
}

// ---------------------------------------------------------------------------
// Cube compatibility for the 3D pivot example

namespace {

NdSum split_nd(const OrderedPivot& piv, const NdSum& s, int axis) {
  // Splits the last layer along axis of every term.
  NdSum out{s.extent, {}};
  out.extent[axis] += 1;
  const int dims = static_cast<int>(s.extent.size());
  std::vector<int> slab_ext = s.extent;
  slab_ext[axis] = 1;
  for (const auto& [cells, c] : s.terms) {
    auto index = [&](const std::vector<int>& co, const std::vector<int>& ext) {
      int idx = 0, stride = 1;
      for (int a = 0; a < dims; ++a) {
        idx += co[a] * stride;
        stride *= ext[a];
      }
      return idx;
    };
    auto for_each = [&](const std::vector<int>& ext, auto&& fn) {
      int vol = 1;
      for (int e : ext) vol *= e;
      std::vector<int> co(dims);
      for (int k = 0; k < vol; ++k) {
        int r = k;
        for (int a = 0; a < dims; ++a) {
          co[a] = r % ext[a];
          r /= ext[a];
        }
        fn(co, k);
      }
    };
    NdWord slab{slab_ext, std::vector<std::string>()};
    slab.cells.resize(cells.size() / static_cast<std::size_t>(s.extent[axis]));
    for_each(slab_ext, [&](std::vector<int> co, int k) {
      co[axis] = s.extent[axis] - 1;
      slab.cells[static_cast<std::size_t>(k)] = cells[static_cast<std::size_t>(index(co, s.extent))];
    });
    NdSum piece = piv.split(slab, axis);
    for (const auto& [pc, pcoef] : piece.terms) {
      std::vector<std::string> nc(cells.size() + slab.cells.size());
      for_each(out.extent, [&](std::vector<int> co, int k) {
        if (co[axis] < s.extent[axis] - 1) {
          nc[static_cast<std::size_t>(k)] = cells[static_cast<std::size_t>(index(co, s.extent))];
        } else {
          co[axis] -= s.extent[axis] - 1;
          nc[static_cast<std::size_t>(k)] = pc[static_cast<std::size_t>(index(co, piece.extent))];
        }
      });
      out.add(nc, c * pcoef);
    }
  }
  return out;
}

}  // namespace

CheckReport cube_xyz_compat(const std::string& sym, double tol) {
  CheckReport rep;
  rep.check = "cube_xyz_compat";
  rep.add_size({2, 2});
  OrderedPivot piv(3, lexicographic_order(3));
  rep.elapsed_ms = timed_ms([&] {
    // Axes: 0 = x, 1 = y, 2 = z.  Orders are read right to left as compositions.
    const std::vector<std::pair<std::string, std::vector<int>>> orders = {
        {"z.y.x", {0, 1, 2}}, {"y.z.x", {0, 2, 1}}, {"x.y.z", {2, 1, 0}}};
    std::optional<NdSum> ref;
    for (const auto& [label, axes] : orders) {
      try {
        NdSum s{{1, 1, 1}, {}};
        s.add({sym}, 1.0);
        for (int axis : axes) s = split_nd(piv, s, axis);
        if (!ref) {
          ref = s;
          // The first order is compared with the closed form instead.
          NdSum closed{{2, 2, 2}, {}};
          if (sym == piv.v())
            closed = piv.pattern_sum({2, 2, 2});
          else
            closed.add(std::vector<std::string>(8, sym), 1.0);
          rep.add(sym + " " + label + " vs closed form", max_coeff_diff(s, closed), tol);
        } else {
          rep.add(sym + " " + label + " vs " + orders.front().first, max_coeff_diff(s, *ref), tol);
        }
      } catch (const DomainError& e) {
        rep.add(sym + " " + label, std::nullopt, tol, e.what());
      }
    }
  });
  return rep;
}

}  // namespace lat2d
