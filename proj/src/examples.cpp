#include "lat2d/examples.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <set>

#include "lat2d/ordered_pivot.hpp"

namespace lat2d {

namespace {

using SiteDelta = std::function<std::vector<SweedlerTerm>(const std::string&)>;

// All words of the given shape over an alphabet, in lexicographic order.
std::vector<GridWord> words_over(const std::vector<std::string>& alphabet, Shape shape) {
  std::vector<GridWord> out;
  const int sites = shape.sites();
  std::vector<std::size_t> idx(static_cast<std::size_t>(sites), 0);
  while (true) {
    std::vector<std::string> cells;
    for (auto k : idx) cells.push_back(alphabet[k]);
    out.emplace_back(shape, std::move(cells));
    int pos = sites - 1;
    while (pos >= 0 && ++idx[static_cast<std::size_t>(pos)] == alphabet.size()) idx[static_cast<std::size_t>(pos--)] = 0;
    if (pos < 0) break;
  }
  return out;
}

Shape boundary(Dir dir, int len) { return dir == Dir::X ? Shape{len, 1} : Shape{1, len}; }

// The tensor power of a one-site coproduct acting on a column (x) or row (y).
FormalSum sitewise_split(const SiteDelta& delta, Dir dir, const GridWord& w) {
  const int len = w.shape.sites();
  struct Partial {
    std::vector<std::string> lo, hi;
    cplx c;
  };
  std::vector<Partial> cur{{{}, {}, 1.0}}, next;
  for (const auto& s : w.cells) {
    next.clear();
    for (const auto& p : cur)
      for (const auto& t : delta(s)) {
        Partial q = p;
        q.lo.push_back(t.left);
        q.hi.push_back(t.right);
        q.c *= t.coeff;
        next.push_back(std::move(q));
      }
    std::swap(cur, next);
  }
  FormalSum out(dir == Dir::X ? Shape{len, 2} : Shape{2, len});
  for (const auto& p : cur) {
    GridWord lo(w.shape, p.lo), hi(w.shape, p.hi);
    out.add_term(dir == Dir::X ? concat_h(lo, hi) : concat_v(lo, hi), p.c);
  }
  return out;
}

CounitFn sitewise_counit(std::map<std::string, cplx> eps) {
  return [eps](const GridWord& w) {
    cplx c = 1.0;
    for (const auto& s : w.cells) {
      auto it = eps.find(s);
      if (it == eps.end()) throw DomainError("no counit value for '" + s + "'");
      c *= it->second;
    }
    return c;
  };
}

// Sitewise antipode from per-symbol images (each a combination of symbols).
AntipodeFn sitewise_antipode(std::map<std::string, std::vector<std::pair<cplx, std::string>>> images) {
  return [images](const GridWord& w) {
    std::vector<std::pair<cplx, std::vector<std::string>>> cur{{1.0, {}}}, next;
    for (const auto& s : w.cells) {
      auto it = images.find(s);
      if (it == images.end()) throw DomainError("no antipode for '" + s + "'");
      next.clear();
      for (const auto& [c, cells] : cur)
        for (const auto& [ci, si] : it->second) {
          auto nc = cells;
          nc.push_back(si);
          next.push_back({c * ci, std::move(nc)});
        }
      std::swap(cur, next);
    }
    FormalSum res(w.shape);
    for (const auto& [c, cells] : cur) res.add_term(cells, c);
    return res;
  };
}

std::vector<SweedlerTerm> group_like_delta(const std::string& s) { return {{1.0, s, s}}; }

bool is_uniform(const GridWord& w) {
  return std::all_of(w.cells.begin(), w.cells.end(), [&](const auto& s) { return s == w.cells.front(); });
}

// Pivot-type boundary map: a word a^k v b^{len-k-1} (in site order) goes to
// w (x) b^len + a^len (x) w; uniform words of group-like symbols are doubled.
struct PivotTriple {
  std::string a, v, b;
};

std::optional<PivotTriple> match_triple(const std::vector<PivotTriple>& triples, const GridWord& w) {
  for (const auto& t : triples) {
    if (w.count(t.v) != 1) continue;
    auto pos = std::find(w.cells.begin(), w.cells.end(), t.v) - w.cells.begin();
    bool ok = true;
    for (std::ptrdiff_t k = 0; k < static_cast<std::ptrdiff_t>(w.cells.size()) && ok; ++k)
      if (k != pos) ok = w.cells[static_cast<std::size_t>(k)] == (k < pos ? t.a : t.b);
    if (ok) return t;
  }
  return std::nullopt;
}

SplitFn pattern_splitter(std::vector<PivotTriple> triples, std::set<std::string> group_like, Dir dir) {
  return [=](const GridWord& w) {
    auto join = [&](const GridWord& lo, const GridWord& hi) { return dir == Dir::X ? concat_h(lo, hi) : concat_v(lo, hi); };
    FormalSum out(dir == Dir::X ? Shape{w.shape.rows, 2} : Shape{2, w.shape.cols});
    if (is_uniform(w) && group_like.count(w.cells.front())) {
      out.add_term(join(w, w), 1.0);
      return out;
    }
    auto t = match_triple(triples, w);
    if (!t) throw DomainError("boundary word " + to_string(w) + " is not of the form a..a v b..b");
    out.add_term(join(w, uniform_word(w.shape, t->b)), 1.0);
    out.add_term(join(uniform_word(w.shape, t->a), w), 1.0);
    return out;
  };
}

std::vector<GridWord> pattern_words(const std::vector<PivotTriple>& triples, const std::set<std::string>& group_like,
                                    Shape shape) {
  std::set<GridWord> out;
  for (const auto& g : group_like) out.insert(uniform_word(shape, g));
  const int len = shape.sites();
  for (const auto& t : triples)
    for (int k = 0; k < len; ++k) {
      std::vector<std::string> cells;
      for (int s = 0; s < len; ++s) cells.push_back(s < k ? t.a : (s == k ? t.v : t.b));
      out.insert(GridWord(shape, cells));
    }
  return {out.begin(), out.end()};
}

cplx principal_sqrt(cplx z) { return std::sqrt(z); }

}  // namespace

// ---------------------------------------------------------------------------
// Group-like and Lie-like

std::string GroupTable::inverse(const std::string& g) const {
  for (const auto& [key, val] : product)
    if (key.first == g && val == identity) return key.second;
  throw ConfigError("group element '" + g + "' has no inverse in the table");
}

GroupTable cyclic_group_table(int order) {
  if (order < 1) throw ConfigError("group order must be positive");
  auto name = [](int k) { return k == 0 ? std::string("1") : (k == 1 ? std::string("g") : "g" + std::to_string(k)); };
  GroupTable t;
  t.identity = "1";
  for (int i = 0; i < order; ++i)
    for (int j = 0; j < order; ++j) t.product[{name(i), name(j)}] = name((i + j) % order);
  return t;
}

std::vector<std::string> group_elements(const GroupTable& t) {
  std::set<std::string> s;
  for (const auto& [key, val] : t.product) s.insert(key.first);
  return {s.begin(), s.end()};
}

CoalgebraExample make_group_like(std::vector<std::string> alphabet, std::optional<GroupTable> table) {
  if (alphabet.empty()) throw ConfigError("group-like example needs a nonempty alphabet");
  CoalgebraExample ex;
  ex.name = "group-like";
  ex.alphabet = alphabet;
  ex.generators = alphabet;
  ex.split_x = [](const GridWord& w) { return sitewise_split(group_like_delta, Dir::X, w); };
  ex.split_y = [](const GridWord& w) { return sitewise_split(group_like_delta, Dir::Y, w); };
  std::map<std::string, cplx> eps;
  for (const auto& s : alphabet) eps[s] = 1.0;
  ex.counit_x = ex.counit_y = sitewise_counit(eps);
  ex.domain_x = [alphabet](int len) { return words_over(alphabet, boundary(Dir::X, len)); };
  ex.domain_y = [alphabet](int len) { return words_over(alphabet, boundary(Dir::Y, len)); };
  if (!table) return ex;

  for (const auto& s : alphabet)
    for (const auto& t : alphabet)
      if (!table->product.count({s, t})) throw ConfigError("group table misses product " + s + "*" + t);
  std::map<std::string, std::vector<std::pair<cplx, std::string>>> inv;
  for (const auto& s : alphabet) inv[s] = {{1.0, table->inverse(s)}};
  ex.antipode_x = ex.antipode_y = sitewise_antipode(inv);
  ex.unit = table->identity;
  GroupTable tab = *table;
  ex.multiply = [tab](const std::string& s, const std::string& t) {
    return FormalSum::of(GridWord({1, 1}, {tab.product.at({s, t})}));
  };
  for (const auto& s : alphabet)
    for (const auto& t : alphabet)
      ex.relations.push_back({s + "*" + t, {{1.0, {s, t}}, {-1.0, {tab.product.at({s, t})}}}});
  ex.representation = [alphabet, tab] {
    // Regular representation: g e_h = e_{gh}.
    Representation rep;
    rep.alphabet = alphabet;
    rep.dim = static_cast<int>(alphabet.size());
    for (std::size_t g = 0; g < alphabet.size(); ++g) {
      Eigen::MatrixXcd m = Eigen::MatrixXcd::Zero(rep.dim, rep.dim);
      for (std::size_t h = 0; h < alphabet.size(); ++h) {
        auto gh = std::find(alphabet.begin(), alphabet.end(), tab.product.at({alphabet[g], alphabet[h]})) -
                  alphabet.begin();
        m(gh, static_cast<Eigen::Index>(h)) = 1.0;
      }
      rep.matrices[alphabet[g]] = m;
    }
    return rep;
  };
  return ex;
}

CoalgebraExample make_lie_like(std::vector<std::string> alphabet, std::string unit) {
  if (std::find(alphabet.begin(), alphabet.end(), unit) == alphabet.end())
    throw ConfigError("Lie-like example: unit '" + unit + "' not in the alphabet");
  CoalgebraExample ex;
  ex.name = "lie-like";
  ex.alphabet = alphabet;
  ex.generators = alphabet;
  ex.unit = unit;
  SiteDelta delta = [unit](const std::string& s) -> std::vector<SweedlerTerm> {
    if (s == unit) return {{1.0, unit, unit}};
    return {{1.0, unit, s}, {1.0, s, unit}};
  };
  ex.split_x = [delta](const GridWord& w) { return sitewise_split(delta, Dir::X, w); };
  ex.split_y = [delta](const GridWord& w) { return sitewise_split(delta, Dir::Y, w); };
  std::map<std::string, cplx> eps;
  std::map<std::string, std::vector<std::pair<cplx, std::string>>> anti;
  for (const auto& s : alphabet) {
    eps[s] = s == unit ? 1.0 : 0.0;
    anti[s] = {{s == unit ? 1.0 : -1.0, s}};
  }
  ex.counit_x = ex.counit_y = sitewise_counit(eps);
  ex.antipode_x = ex.antipode_y = sitewise_antipode(anti);
  ex.domain_x = [alphabet](int len) { return words_over(alphabet, boundary(Dir::X, len)); };
  ex.domain_y = [alphabet](int len) { return words_over(alphabet, boundary(Dir::Y, len)); };
  ex.representation = [alphabet, unit] {
    Representation rep;
    rep.alphabet = alphabet;
    rep.dim = 2;
    Eigen::MatrixXcd sp = Eigen::MatrixXcd::Zero(2, 2), sm = Eigen::MatrixXcd::Zero(2, 2);
    sp(0, 1) = 1.0;
    sm(1, 0) = 1.0;
    int k = 0;
    for (const auto& s : alphabet) {
      if (s == unit)
        rep.matrices[s] = Eigen::MatrixXcd::Identity(2, 2);
      else
        rep.matrices[s] = (k++ % 2 == 0) ? sp : sm;
    }
    return rep;
  };
  return ex;
}

// ---------------------------------------------------------------------------
// One-directional constructions

const std::vector<SweedlerTerm>& InnerCoproduct::of(const std::string& s) const {
  auto it = delta.find(s);
  if (it == delta.end()) throw DomainError("inner coproduct undefined on '" + s + "'");
  return it->second;
}

InnerCoproduct pivot_inner_coproduct() {
  InnerCoproduct in;
  in.alphabet = {"1", "a", "b", "v"};
  in.delta["1"] = {{1.0, "1", "1"}};
  in.delta["a"] = {{1.0, "a", "a"}};
  in.delta["b"] = {{1.0, "b", "b"}};
  in.delta["v"] = {{1.0, "a", "v"}, {1.0, "v", "b"}};
  in.counit = {{"1", 1.0}, {"a", 1.0}, {"b", 1.0}, {"v", 0.0}};
  in.unit = "1";
  return in;
}

CoalgebraExample make_quasi1d_group(const InnerCoproduct& inner) {
  CoalgebraExample ex;
  ex.name = "quasi1d-group";
  ex.alphabet = inner.alphabet;
  for (const auto& s : inner.alphabet)
    if (!inner.unit || s != *inner.unit) ex.generators.push_back(s);
  ex.split_y = [](const GridWord& w) { return sitewise_split(group_like_delta, Dir::Y, w); };
  ex.split_x = [inner](const GridWord& w) {
    if (!is_uniform(w))
      throw DomainError("column " + to_string(w) + " is not constant; the x map is only defined on the image of y");
    FormalSum out({w.shape.rows, 2});
    for (const auto& t : inner.of(w.cells.front()))
      out.add_term(concat_h(uniform_word(w.shape, t.left), uniform_word(w.shape, t.right)), t.coeff);
    return out;
  };
  ex.counit_y = [](const GridWord&) { return cplx(1.0); };
  ex.counit_x = [inner](const GridWord& w) {
    if (!is_uniform(w)) throw DomainError("counit: column " + to_string(w) + " is not constant");
    auto it = inner.counit.find(w.cells.front());
    if (it == inner.counit.end()) throw DomainError("no counit value for '" + w.cells.front() + "'");
    return it->second;
  };
  ex.domain_x = [inner](int len) {
    std::vector<GridWord> out;
    for (const auto& s : inner.alphabet) out.push_back(uniform_word({len, 1}, s));
    return out;
  };
  ex.domain_y = [inner](int len) { return words_over(inner.alphabet, {1, len}); };
  return ex;
}

CoalgebraExample make_quasi1d_lie(const InnerCoproduct& inner) {
  if (!inner.unit) throw ConfigError("quasi1d-lie needs a unit symbol");
  const std::string one = *inner.unit;
  auto d1 = inner.delta.find(one);
  if (d1 == inner.delta.end() || d1->second.size() != 1 || d1->second[0].left != one || d1->second[0].right != one ||
      std::abs(d1->second[0].coeff - cplx(1.0)) > kCanonEps)
    throw ConfigError("quasi1d-lie requires Delta(" + one + ") = " + one + " (x) " + one);
  CoalgebraExample ex;
  ex.name = "quasi1d-lie";
  ex.alphabet = inner.alphabet;
  ex.unit = one;
  for (const auto& s : inner.alphabet)
    if (s != one) ex.generators.push_back(s);
  ex.split_x = [inner](const GridWord& w) {
    return sitewise_split([&](const std::string& s) { return inner.of(s); }, Dir::X, w);
  };
  ex.split_y = [one](const GridWord& w) {
    GridWord ones = uniform_word(w.shape, one);
    FormalSum out({2, w.shape.cols});
    out.add_term(concat_v(w, ones), 1.0);
    if (w != ones) out.add_term(concat_v(ones, w), 1.0);
    return out;
  };
  ex.counit_x = sitewise_counit(inner.counit);
  ex.counit_y = [one](const GridWord& w) { return w == uniform_word(w.shape, one) ? cplx(1.0) : cplx(0.0); };
  ex.domain_x = [inner](int len) { return words_over(inner.alphabet, {len, 1}); };
  ex.domain_y = [inner](int len) { return words_over(inner.alphabet, {1, len}); };
  return ex;
}

// ---------------------------------------------------------------------------
// Cross-like

CoalgebraExample make_cross() {
  CoalgebraExample ex;
  ex.name = "cross";
  ex.alphabet = {"1", "t", "b", "r", "l", "v"};
  ex.generators = ex.alphabet;
  const std::vector<std::string> plain = {"1", "t", "b", "r", "l"};
  // Column through v: b below, t above.  Splits into (col | r-marker) + (l-marker | col).
  ex.split_x = [](const GridWord& w) {
    FormalSum out({w.shape.rows, 2});
    int nv = w.count("v");
    if (nv == 0) {
      out.add_term(concat_h(w, w), 1.0);
      return out;
    }
    int k = static_cast<int>(std::find(w.cells.begin(), w.cells.end(), "v") - w.cells.begin());
    for (int s = 0; s < w.shape.rows; ++s)
      if (s != k && w.cells[static_cast<std::size_t>(s)] != (s < k ? "b" : "t"))
        throw DomainError("column " + to_string(w) + " is not of the form b..b v t..t");
    GridWord r = uniform_word(w.shape, "1"), l = uniform_word(w.shape, "1");
    r.cells[static_cast<std::size_t>(k)] = "r";
    l.cells[static_cast<std::size_t>(k)] = "l";
    out.add_term(concat_h(w, r), 1.0);
    out.add_term(concat_h(l, w), 1.0);
    return out;
  };
  // Row through v: l left, r right.  Splits into (row below t-marker) + (b-marker below row).
  ex.split_y = [](const GridWord& w) {
    FormalSum out({2, w.shape.cols});
    int nv = w.count("v");
    if (nv == 0) {
      out.add_term(concat_v(w, w), 1.0);
      return out;
    }
    int k = static_cast<int>(std::find(w.cells.begin(), w.cells.end(), "v") - w.cells.begin());
    for (int s = 0; s < w.shape.cols; ++s)
      if (s != k && w.cells[static_cast<std::size_t>(s)] != (s < k ? "l" : "r"))
        throw DomainError("row " + to_string(w) + " is not of the form l..l v r..r");
    GridWord t = uniform_word(w.shape, "1"), b = uniform_word(w.shape, "1");
    t.cells[static_cast<std::size_t>(k)] = "t";
    b.cells[static_cast<std::size_t>(k)] = "b";
    out.add_term(concat_v(w, t), 1.0);
    out.add_term(concat_v(b, w), 1.0);
    return out;
  };
  ex.counit_x = ex.counit_y = [](const GridWord& w) { return w.contains("v") ? cplx(0.0) : cplx(1.0); };
  auto domain = [plain](Shape shape, const std::string& below, const std::string& above) {
    auto out = words_over(plain, shape);
    const int len = shape.sites();
    for (int k = 0; k < len; ++k) {
      std::vector<std::string> cells;
      for (int s = 0; s < len; ++s) cells.push_back(s < k ? below : (s == k ? "v" : above));
      out.emplace_back(shape, cells);
    }
    return out;
  };
  ex.domain_x = [domain](int len) { return domain({len, 1}, "b", "t"); };
  ex.domain_y = [domain](int len) { return domain({1, len}, "l", "r"); };
  return ex;
}

FormalSum cross_pattern_sum(Shape s) {
  FormalSum out(s);
  for (int vi = 1; vi <= s.rows; ++vi)
    for (int vj = 1; vj <= s.cols; ++vj) {
      std::vector<std::string> cells;
      for (int i = 1; i <= s.rows; ++i)
        for (int j = 1; j <= s.cols; ++j) {
          if (i == vi && j == vj)
            cells.push_back("v");
          else if (i == vi)
            cells.push_back(j < vj ? "l" : "r");
          else if (j == vj)
            cells.push_back(i < vi ? "b" : "t");
          else
            cells.push_back("1");
        }
      out.add_term(cells, 1.0);
    }
  return out;
}

// ---------------------------------------------------------------------------
// Pivot

void validate(const PivotConfig& cfg) {
  double t = cfg.theta_over_pi;
  if (!std::isfinite(t) || t < 0.0 || t >= 2.0)
    throw ConfigError("theta/pi must lie in [0, 2), got " + std::to_string(t));
  if (std::abs(8.0 * t - std::round(8.0 * t)) > 1e-9)
    throw ConfigError("theta must be a multiple of pi/8, got theta/pi = " + std::to_string(t));
  if (cfg.a == cfg.b || cfg.a == cfg.v || cfg.b == cfg.v) throw ConfigError("pivot symbols must be distinct");
}

namespace {

OrderedPivot pivot_engine(const PivotConfig& cfg) {
  return OrderedPivot(2, rotated_order(std::round(8.0 * cfg.theta_over_pi) / 8.0 * std::numbers::pi), cfg.a, cfg.b,
                      cfg.v);
}

}  // namespace

CoalgebraExample make_pivot_derived(const PivotConfig& cfg) {
  validate(cfg);
  OrderedPivot piv = pivot_engine(cfg);
  CoalgebraExample ex;
  ex.name = "pivot(theta/pi=" + std::to_string(cfg.theta_over_pi) + ")";
  ex.alphabet = {cfg.a, cfg.b, cfg.v};
  ex.generators = ex.alphabet;
  ex.split_x = [piv](const GridWord& w) { return to_formal_sum(piv.split(to_nd(w), 0)); };
  ex.split_y = [piv](const GridWord& w) { return to_formal_sum(piv.split(to_nd(w), 1)); };
  ex.counit_x = ex.counit_y = [piv](const GridWord& w) { return piv.counit(to_nd(w)); };
  ex.domain_x = [piv](int len) {
    std::vector<GridWord> out;
    for (const auto& w : piv.domain({1, len}, 0)) out.push_back(to_grid(w));
    return out;
  };
  ex.domain_y = [piv](int len) {
    std::vector<GridWord> out;
    for (const auto& w : piv.domain({len, 1}, 1)) out.push_back(to_grid(w));
    return out;
  };
  return ex;
}

CoalgebraExample make_pivot(const PivotConfig& cfg) {
  validate(cfg);
  if (std::round(8.0 * cfg.theta_over_pi) != 0.0) return make_pivot_derived(cfg);
  CoalgebraExample ex;
  ex.name = "pivot";
  ex.alphabet = {cfg.a, cfg.b, cfg.v};
  ex.generators = ex.alphabet;
  const std::string a = cfg.a, b = cfg.b, v = cfg.v;
  SiteDelta delta = [a, b, v](const std::string& s) -> std::vector<SweedlerTerm> {
    if (s == v) return {{1.0, a, v}, {1.0, v, b}};
    if (s == a || s == b) return {{1.0, s, s}};
    throw DomainError("symbol '" + s + "' is not part of the pivot alphabet");
  };
  // Columns: the sitewise coproduct, defined on every column.
  ex.split_x = [delta](const GridWord& w) { return sitewise_split(delta, Dir::X, w); };
  // Rows: a^k v b^{m-k-1} -> w (x) b^m + a^m (x) w, and a^m, b^m doubled.
  ex.split_y = pattern_splitter({{a, v, b}}, {a, b}, Dir::Y);
  ex.counit_x = ex.counit_y = sitewise_counit({{a, 1.0}, {b, 1.0}, {v, 0.0}});
  std::vector<std::string> alpha = ex.alphabet;
  ex.domain_x = [alpha](int len) { return words_over(alpha, {len, 1}); };
  ex.domain_y = [a, b, v](int len) { return pattern_words({{a, v, b}}, {a, b}, {1, len}); };
  return ex;
}

GridWord pivot_pattern(const PivotConfig& cfg, Shape s, int i, int j) {
  validate(cfg);
  site_index(i, j, s);
  return to_grid({{s.cols, s.rows}, pivot_engine(cfg).pattern({s.cols, s.rows}, {j - 1, i - 1})});
}

FormalSum pivot_pattern_sum(const PivotConfig& cfg, Shape s) {
  validate(cfg);
  return to_formal_sum(pivot_engine(cfg).pattern_sum({s.cols, s.rows}));
}

std::vector<int> pivot_site_order(const PivotConfig& cfg, Shape s) {
  validate(cfg);
  auto after = rotated_order(std::round(8.0 * cfg.theta_over_pi) / 8.0 * std::numbers::pi);
  std::vector<int> sites(static_cast<std::size_t>(s.sites()));
  for (int k = 0; k < s.sites(); ++k) sites[static_cast<std::size_t>(k)] = k + 1;
  auto pos = [&](int k) { return std::vector<int>{(k - 1) % s.cols, (k - 1) / s.cols}; };
  std::sort(sites.begin(), sites.end(), [&](int p, int q) {
    auto pp = pos(p), pq = pos(q);
    return after({pq[0] - pp[0], pq[1] - pp[1]});
  });
  return sites;
}

GridWord rotated_quarter_reference_grid() {
  return grid_from_rows({{"b", "b", "b", "a"}, {"b", "v", "a", "a"}, {"a", "a", "a", "a"}, {"a", "a", "a", "a"}});
}

// ---------------------------------------------------------------------------
// Taft

void validate(const TaftConfig& cfg) {
  if (cfg.n < 2) throw ConfigError("Taft order n must be at least 2");
  if (std::abs(std::pow(cfg.omega, cfg.n) - cplx(1.0)) > 1e-12)
    throw ConfigError("omega is not an n-th root of unity");
  for (int k = 1; k < cfg.n; ++k)
    if (std::abs(std::pow(cfg.omega, k) - cplx(1.0)) < 1e-12) throw ConfigError("omega is not a primitive root");
}

TaftConfig taft_config(int n) {
  if (n < 2) throw ConfigError("Taft order n must be at least 2");
  TaftConfig cfg{n, std::polar(1.0, 2.0 * std::numbers::pi / n)};
  if (n == 2) cfg.omega = -1.0;  // exact value, avoids a 1e-16 imaginary part
  return cfg;
}

std::string taft_name(int i, int j) {
  if (i == 0 && j == 0) return "1";
  std::string s;
  if (i > 0) s += i == 1 ? "g" : "g" + std::to_string(i);
  if (j > 0) s += j == 1 ? "x" : "x" + std::to_string(j);
  return s;
}

std::pair<int, int> taft_exponents(const TaftConfig& cfg, const std::string& name) {
  for (int i = 0; i < cfg.n; ++i)
    for (int j = 0; j < cfg.n; ++j)
      if (taft_name(i, j) == name) return {i, j};
  throw DomainError("'" + name + "' is not a Taft basis element");
}

FormalSum taft_multiply(const TaftConfig& cfg, const std::string& s1, const std::string& s2) {
  auto [i, j] = taft_exponents(cfg, s1);
  auto [k, l] = taft_exponents(cfg, s2);
  FormalSum out({1, 1});
  // x^j g^k = omega^{jk} g^k x^j, from x g = omega g x.
  if (j + l < cfg.n) out.add_term({taft_name((i + k) % cfg.n, j + l)}, std::pow(cfg.omega, j * k));
  return out;
}

namespace {

std::vector<std::string> taft_basis(const TaftConfig& cfg) {
  std::vector<std::string> out;
  for (int i = 0; i < cfg.n; ++i)
    for (int j = 0; j < cfg.n; ++j) out.push_back(taft_name(i, j));
  return out;
}

// Product of combinations of basis elements.
using Combo = std::map<std::string, cplx>;
Combo taft_mul(const TaftConfig& cfg, const Combo& x, const Combo& y) {
  Combo out;
  for (const auto& [a, ca] : x)
    for (const auto& [b, cb] : y)
      for (const auto& [cells, c] : taft_multiply(cfg, a, b).terms()) out[cells[0]] += ca * cb * c;
  std::erase_if(out, [](const auto& kv) { return std::abs(kv.second) < kCanonEps; });
  return out;
}

// Coproduct of a basis element, multiplied out in A (x) A.
std::vector<SweedlerTerm> taft_delta(const TaftConfig& cfg, const std::string& s) {
  auto [i, j] = taft_exponents(cfg, s);
  using Pair = std::map<std::pair<std::string, std::string>, cplx>;
  auto mul = [&](const Pair& x, const Pair& y) {
    Pair out;
    for (const auto& [ab, c1] : x)
      for (const auto& [cd, c2] : y)
        for (const auto& [l, cl] : taft_multiply(cfg, ab.first, cd.first).terms())
          for (const auto& [r, cr] : taft_multiply(cfg, ab.second, cd.second).terms())
            out[{l[0], r[0]}] += c1 * c2 * cl * cr;
    std::erase_if(out, [](const auto& kv) { return std::abs(kv.second) < kCanonEps; });
    return out;
  };
  Pair acc{{{"1", "1"}, 1.0}};
  Pair dg{{{"g", "g"}, 1.0}};
  Pair dx{{{"1", "x"}, 1.0}, {{"x", "g"}, 1.0}};
  for (int k = 0; k < i; ++k) acc = mul(acc, dg);
  for (int k = 0; k < j; ++k) acc = mul(acc, dx);
  std::vector<SweedlerTerm> out;
  for (const auto& [lr, c] : acc) out.push_back({c, lr.first, lr.second});
  return out;
}

Combo taft_antipode_combo(const TaftConfig& cfg, const std::string& s) {
  auto [i, j] = taft_exponents(cfg, s);
  // S(g) = g^{n-1}; S(x) = -x g^{n-1}; S is an anti-homomorphism, so
  // S(g^i x^j) = S(x)^j S(g)^i.
  Combo sg{{taft_name(cfg.n - 1, 0), 1.0}};
  Combo sx = taft_mul(cfg, Combo{{"x", -1.0}}, sg);
  Combo out{{"1", 1.0}};
  for (int k = 0; k < j; ++k) out = taft_mul(cfg, out, sx);
  for (int k = 0; k < i; ++k) out = taft_mul(cfg, out, sg);
  return out;
}

}  // namespace

Representation taft_regular_rep(const TaftConfig& cfg) {
  validate(cfg);
  Representation rep;
  rep.alphabet = taft_basis(cfg);
  rep.dim = cfg.n * cfg.n;
  for (std::size_t a = 0; a < rep.alphabet.size(); ++a) {
    Eigen::MatrixXcd m = Eigen::MatrixXcd::Zero(rep.dim, rep.dim);
    for (std::size_t b = 0; b < rep.alphabet.size(); ++b)
      for (const auto& [cells, c] : taft_multiply(cfg, rep.alphabet[a], rep.alphabet[b]).terms()) {
        auto row = std::find(rep.alphabet.begin(), rep.alphabet.end(), cells[0]) - rep.alphabet.begin();
        m(row, static_cast<Eigen::Index>(b)) += c;
      }
    rep.matrices[rep.alphabet[a]] = m;
  }
  return rep;
}

CoalgebraExample make_taft(const TaftConfig& cfg) {
  validate(cfg);
  CoalgebraExample ex;
  ex.name = "taft(n=" + std::to_string(cfg.n) + ")";
  ex.alphabet = taft_basis(cfg);
  ex.unit = "1";
  std::vector<std::string> grouplike;
  for (int i = 0; i < cfg.n; ++i) grouplike.push_back(taft_name(i, 0));
  ex.generators = grouplike;
  ex.generators.push_back("x");

  SiteDelta delta = [cfg](const std::string& s) { return taft_delta(cfg, s); };
  ex.split_x = [delta](const GridWord& w) { return sitewise_split(delta, Dir::X, w); };
  // Pivot rows with (a, b, v) = (1, g, x); powers of g are group-like.
  ex.split_y = pattern_splitter({{"1", "x", "g"}}, {grouplike.begin(), grouplike.end()}, Dir::Y);
  std::map<std::string, cplx> eps;
  for (const auto& s : ex.alphabet) eps[s] = taft_exponents(cfg, s).second == 0 ? 1.0 : 0.0;
  ex.counit_x = ex.counit_y = sitewise_counit(eps);

  std::map<std::string, std::vector<std::pair<cplx, std::string>>> anti;
  for (const auto& s : ex.alphabet)
    for (const auto& [t, c] : taft_antipode_combo(cfg, s)) anti[s].push_back({c, t});
  ex.antipode_x = sitewise_antipode(anti);
  // On a pivot row S(w) = -(a^m)^{-1} w (b^m)^{-1} = -w g^{-1} sitewise; group-like rows invert.
  ex.antipode_y = [cfg, grouplike](const GridWord& w) {
    FormalSum out(w.shape);
    if (is_uniform(w) && std::count(grouplike.begin(), grouplike.end(), w.cells.front())) {
      auto [i, j] = taft_exponents(cfg, w.cells.front());
      out.add_term(uniform_word(w.shape, taft_name((cfg.n - i) % cfg.n, 0)).cells, 1.0);
      return out;
    }
    if (!match_triple({{"1", "x", "g"}}, w)) throw DomainError("antipode: row " + to_string(w) + " is not a pivot row");
    std::vector<std::pair<cplx, std::vector<std::string>>> cur{{-1.0, {}}}, next;
    for (const auto& s : w.cells) {
      next.clear();
      for (const auto& [c, cells] : cur)
        for (const auto& [t, ct] : taft_mul(cfg, Combo{{s, 1.0}}, Combo{{taft_name(cfg.n - 1, 0), 1.0}})) {
          auto nc = cells;
          nc.push_back(t);
          next.push_back({c * ct, std::move(nc)});
        }
      std::swap(cur, next);
    }
    for (const auto& [c, cells] : cur) out.add_term(cells, c);
    return out;
  };
  ex.multiply = [cfg](const std::string& a, const std::string& b) { return taft_multiply(cfg, a, b); };

  const std::string gn1 = taft_name(cfg.n - 1, 0);
  ex.relations.push_back({"x*g = omega g*x", {{1.0, {"x", "g"}}, {-cfg.omega, {"g", "x"}}}});
  ex.relations.push_back({"g^n = 1", {{1.0, std::vector<std::string>(static_cast<std::size_t>(cfg.n), "g")}, {-1.0, {"1"}}}});
  ex.relations.push_back({"x^n = 0", {{1.0, std::vector<std::string>(static_cast<std::size_t>(cfg.n), "x")}}});
  ex.relations.push_back({"g*g^{n-1} = 1", {{1.0, {"g", gn1}}, {-1.0, {"1"}}}});
  ex.representation = [cfg] { return taft_regular_rep(cfg); };

  std::vector<std::string> letters = grouplike;
  letters.push_back("x");
  ex.domain_x = [letters](int len) { return words_over(letters, {len, 1}); };
  ex.domain_y = [grouplike](int len) {
    return pattern_words({{"1", "x", "g"}}, {grouplike.begin(), grouplike.end()}, {1, len});
  };
  return ex;
}

// ---------------------------------------------------------------------------
// Symbolic U_q[su(2)]

namespace {

Representation uq_spin_half(cplx q) {
  if (q == cplx(0.0)) throw ParameterError("q must be nonzero");
  Representation rep;
  rep.alphabet = {"S+", "S-", "K+", "K-", "K+2", "K-2", "Sz", "1"};
  rep.dim = 2;
  const cplx h = principal_sqrt(q), hi = 1.0 / h;
  auto diag = [](cplx a, cplx b) {
    Eigen::MatrixXcd m = Eigen::MatrixXcd::Zero(2, 2);
    m(0, 0) = a;
    m(1, 1) = b;
    return m;
  };
  Eigen::MatrixXcd sp = Eigen::MatrixXcd::Zero(2, 2), sm = Eigen::MatrixXcd::Zero(2, 2);
  sp(0, 1) = 1.0;
  sm(1, 0) = 1.0;
  rep.matrices["S+"] = sp;
  rep.matrices["S-"] = sm;
  rep.matrices["K+"] = diag(h, hi);
  rep.matrices["K-"] = diag(hi, h);
  rep.matrices["K+2"] = diag(q, 1.0 / q);
  rep.matrices["K-2"] = diag(1.0 / q, q);
  rep.matrices["Sz"] = diag(0.5, -0.5);
  rep.matrices["1"] = Eigen::MatrixXcd::Identity(2, 2);
  return rep;
}

}  // namespace

CoalgebraExample make_uq_symbolic(cplx q) {
  if (q == cplx(0.0)) throw ParameterError("q must be nonzero");
  CoalgebraExample ex;
  ex.name = "uq";
  ex.alphabet = {"S+", "S-", "K+", "K-", "K+2", "K-2", "Sz", "1"};
  ex.generators = ex.alphabet;
  ex.unit = "1";
  SiteDelta delta = [](const std::string& s) -> std::vector<SweedlerTerm> {
    if (s == "S+" || s == "S-") return {{1.0, s, "K+"}, {1.0, "K-", s}};
    if (s == "Sz") return {{1.0, "Sz", "1"}, {1.0, "1", "Sz"}};
    if (s == "K+" || s == "K-" || s == "K+2" || s == "K-2" || s == "1") return {{1.0, s, s}};
    throw DomainError("symbol '" + s + "' is not part of the U_q alphabet");
  };
  const std::vector<PivotTriple> triples = {{"K-", "S+", "K+"}, {"K-", "S-", "K+"}, {"1", "Sz", "1"}};
  const std::set<std::string> grouplike = {"K+", "K-", "K+2", "K-2", "1"};
  ex.split_x = [delta](const GridWord& w) { return sitewise_split(delta, Dir::X, w); };
  ex.split_y = pattern_splitter(triples, grouplike, Dir::Y);
  std::map<std::string, cplx> eps = {{"S+", 0.0}, {"S-", 0.0}, {"Sz", 0.0}, {"K+", 1.0},
                                     {"K-", 1.0}, {"K+2", 1.0}, {"K-2", 1.0}, {"1", 1.0}};
  ex.counit_x = ex.counit_y = sitewise_counit(eps);
  std::map<std::string, std::vector<std::pair<cplx, std::string>>> anti = {
      {"S+", {{-q, "S+"}}},   {"S-", {{-1.0 / q, "S-"}}}, {"K+", {{1.0, "K-"}}},  {"K-", {{1.0, "K+"}}},
      {"K+2", {{1.0, "K-2"}}}, {"K-2", {{1.0, "K+2"}}},   {"Sz", {{-1.0, "Sz"}}}, {"1", {{1.0, "1"}}}};
  ex.antipode_x = sitewise_antipode(anti);
  // On a pivot row S(w) = -(a^m)^{-1} w (b^m)^{-1}.  For (K-, S+-, K+) this is
  // -(K+)^m w (K-)^m = -q^{+-1} w; for (1, Sz, 1) it is -w.
  ex.antipode_y = [q, triples, grouplike, anti](const GridWord& w) {
    FormalSum out(w.shape);
    if (is_uniform(w) && grouplike.count(w.cells.front())) {
      out.add_term(uniform_word(w.shape, anti.at(w.cells.front())[0].second).cells, 1.0);
      return out;
    }
    auto t = match_triple(triples, w);
    if (!t) throw DomainError("antipode: row " + to_string(w) + " is not a pivot row");
    cplx c = t->v == "S+" ? -q : (t->v == "S-" ? -1.0 / q : cplx(-1.0));
    out.add_term(w, c);
    return out;
  };

  // Defining relations, in the form sum coeff * product = 0.
  ex.relations.push_back({"K+ S+ = q S+ K+", {{1.0, {"K+", "S+"}}, {-q, {"S+", "K+"}}}});
  ex.relations.push_back({"K+ S- = q^-1 S- K+", {{1.0, {"K+", "S-"}}, {-1.0 / q, {"S-", "K+"}}}});
  ex.relations.push_back({"K- S+ = q^-1 S+ K-", {{1.0, {"K-", "S+"}}, {-1.0 / q, {"S+", "K-"}}}});
  ex.relations.push_back({"K- S- = q S- K-", {{1.0, {"K-", "S-"}}, {-q, {"S-", "K-"}}}});
  ex.relations.push_back({"K+ K- = 1", {{1.0, {"K+", "K-"}}, {-1.0, {"1"}}}});
  ex.relations.push_back({"K+ K+ = K+2", {{1.0, {"K+", "K+"}}, {-1.0, {"K+2"}}}});
  ex.relations.push_back({"K- K- = K-2", {{1.0, {"K-", "K-"}}, {-1.0, {"K-2"}}}});
  ex.relations.push_back({"[Sz, S+] = S+", {{1.0, {"Sz", "S+"}}, {-1.0, {"S+", "Sz"}}, {-1.0, {"S+"}}}});
  ex.relations.push_back({"[Sz, S-] = -S-", {{1.0, {"Sz", "S-"}}, {-1.0, {"S-", "Sz"}}, {1.0, {"S-"}}}});
  if (std::abs(q * q - cplx(1.0)) > 1e-12) {
    cplx inv = 1.0 / (q - 1.0 / q);
    ex.relations.push_back({"[S+, S-] = (K+2 - K-2)/(q - q^-1)",
                            {{1.0, {"S+", "S-"}}, {-1.0, {"S-", "S+"}}, {-inv, {"K+2"}}, {inv, {"K-2"}}}});
  }
  ex.representation = [q] { return uq_spin_half(q); };
  std::vector<std::string> alpha = ex.alphabet;
  ex.domain_x = [alpha](int len) { return words_over(alpha, {len, 1}); };
  ex.domain_y = [triples, grouplike](int len) { return pattern_words(triples, grouplike, {1, len}); };
  return ex;
}

// ---------------------------------------------------------------------------
// Selection

std::vector<std::string> example_names() {
  return {"group-like", "lie-like", "quasi1d-group", "quasi1d-lie", "cross", "pivot", "taft", "uq"};
}

CoalgebraExample make_example(const nlohmann::json& cfg) {
  if (!cfg.is_object() || !cfg.contains("example") || !cfg["example"].is_string())
    throw ConfigError("example configuration needs a string field 'example'");
  const std::string name = cfg["example"];
  try {
    if (name == "group-like") {
      int order = cfg.value("order", 3);
      auto table = cyclic_group_table(order);
      return make_group_like(group_elements(table), table);
    }
    if (name == "lie-like") return make_lie_like();
    if (name == "quasi1d-group") return make_quasi1d_group(pivot_inner_coproduct());
    if (name == "quasi1d-lie") return make_quasi1d_lie(pivot_inner_coproduct());
    if (name == "cross") return make_cross();
    if (name == "pivot") return make_pivot({"a", "b", "v", cfg.value("theta_over_pi", 0.0)});
    if (name == "taft") return make_taft(taft_config(cfg.value("n", 2)));
    if (name == "uq") return make_uq_symbolic({cfg.value("q_re", 2.0), cfg.value("q_im", 0.0)});
  } catch (const nlohmann::json::exception& e) {
    throw ConfigError(std::string("bad example parameter: ") + e.what());
  }
  throw ConfigError("unknown example '" + name + "'");
}

}  // namespace lat2d
