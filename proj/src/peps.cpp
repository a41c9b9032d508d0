#include "lat2d/peps.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <set>

namespace lat2d {

namespace {

constexpr double kRankThreshold = 1e-10;
constexpr double kCertificateFloor = 1e-12;

bool nonzero(const Eigen::MatrixXcd& m) { return m.size() > 0 && max_abs(m) > 0.0; }

// Leg selection on the boundary: allowed[side][bond].
using Allowed = std::array<std::vector<bool>, 4>;

// One complete bond assignment of the lattice.
struct Leaf {
  FormalSum::Cells cells;
  std::vector<const PepsComponent*> comps;  // per site, linear order
  cplx weight = 1.0;                        // product of component coefficients
};

// Enumerates every consistent assignment, site by site in linear order, with
// boundary legs restricted by `allowed`.
std::vector<Leaf> enumerate(const PepsTensor& t, int n, int m, const Allowed& allowed) {
  const int sites = n * m;
  std::vector<const PepsComponent*> chosen(static_cast<std::size_t>(sites), nullptr);
  std::vector<Leaf> out;
  std::function<void(int, cplx)> rec = [&](int k, cplx w) {
    if (k == sites) {
      Leaf leaf;
      leaf.comps = chosen;
      leaf.weight = w;
      for (const auto* c : chosen) leaf.cells.push_back(c->phys);
      out.push_back(std::move(leaf));
      return;
    }
    const int i = k / m, j = k % m;
    for (const auto& c : t.components) {
      if (j > 0 && c.l != chosen[static_cast<std::size_t>(k - 1)]->r) continue;
      if (i > 0 && c.b != chosen[static_cast<std::size_t>(k - m)]->t) continue;
      if (j == 0 && !allowed[0][static_cast<std::size_t>(c.l)]) continue;
      if (i == n - 1 && !allowed[1][static_cast<std::size_t>(c.t)]) continue;
      if (j == m - 1 && !allowed[2][static_cast<std::size_t>(c.r)]) continue;
      if (i == 0 && !allowed[3][static_cast<std::size_t>(c.b)]) continue;
      chosen[static_cast<std::size_t>(k)] = &c;
      rec(k + 1, w * c.coeff);
    }
  };
  rec(0, 1.0);
  return out;
}

// Boundary legs of a leaf in perimeter order: left column bottom to top, top
// row left to right, right column top to bottom, bottom row right to left.
std::vector<std::pair<Side, int>> perimeter(const Leaf& leaf, int n, int m) {
  auto at = [&](int i, int j) { return leaf.comps[static_cast<std::size_t>(i * m + j)]; };
  std::vector<std::pair<Side, int>> legs;
  for (int i = 0; i < n; ++i) legs.emplace_back(Side::Left, at(i, 0)->l);
  for (int j = 0; j < m; ++j) legs.emplace_back(Side::Top, at(n - 1, j)->t);
  for (int i = n - 1; i >= 0; --i) legs.emplace_back(Side::Right, at(i, m - 1)->r);
  for (int j = m - 1; j >= 0; --j) legs.emplace_back(Side::Bottom, at(0, j)->b);
  return legs;
}

void check_size(const PepsTensor& t, int n, int m) {
  if (n < 1 || m < 1) throw ShapeError("lattice sizes must be positive");
  if (n * m > kPepsMaxSites)
    throw ResourceError("exact contraction is limited to n*m <= " + std::to_string(kPepsMaxSites));
  if (std::pow(static_cast<double>(t.D), std::max(n, m)) > kPepsMaxBondStates)
    throw ResourceError("exact contraction is limited to D^max(n,m) <= 1e4");
}

Allowed allowed_from(const BoundarySpec& b, int D, bool free_left_right) {
  Allowed a;
  for (int s = 0; s < 4; ++s) {
    a[static_cast<std::size_t>(s)].assign(static_cast<std::size_t>(D), true);
    const bool lr = s == 0 || s == 2;
    if (lr && free_left_right) continue;
    for (int k = 0; k < D; ++k)
      a[static_cast<std::size_t>(s)][static_cast<std::size_t>(k)] = nonzero(b.at(static_cast<Side>(s), k));
  }
  return a;
}

// Scalar weight of a top/bottom leg that acts as a selector times identity.
cplx selector_weight(const BoundarySpec& b, Side s, int bond) {
  const auto& mat = b.at(s, bond);
  const cplx w = mat(0, 0);
  if (max_abs(Eigen::MatrixXcd(mat - w * Eigen::MatrixXcd::Identity(mat.rows(), mat.cols()))) > 0.0)
    throw ConfigError("solve_boundary needs the " + to_string(s) + " side to be a multiple of the identity per bond");
  return w;
}

// Normalizes -0.0 so that reports do not depend on the sign of zero.
double clean(double v) { return v == 0.0 ? 0.0 : v; }

nlohmann::json matrix_json(const Eigen::MatrixXcd& m) {
  nlohmann::json rows = nlohmann::json::array();
  for (int r = 0; r < m.rows(); ++r) {
    nlohmann::json row = nlohmann::json::array();
    for (int c = 0; c < m.cols(); ++c) row.push_back({clean(m(r, c).real()), clean(m(r, c).imag())});
    rows.push_back(row);
  }
  return rows;
}

Eigen::MatrixXcd matrix_from_json(const nlohmann::json& j) {
  const int rows = static_cast<int>(j.size());
  const int cols = rows == 0 ? 0 : static_cast<int>(j.at(0).size());
  Eigen::MatrixXcd m(rows, cols);
  for (int r = 0; r < rows; ++r) {
    if (static_cast<int>(j.at(static_cast<std::size_t>(r)).size()) != cols) throw ConfigError("ragged matrix in JSON");
    for (int c = 0; c < cols; ++c) {
      const auto& e = j.at(static_cast<std::size_t>(r)).at(static_cast<std::size_t>(c));
      m(r, c) = cplx(e.at(0).get<double>(), e.at(1).get<double>());
    }
  }
  return m;
}

const char* kSideNames[4] = {"left", "top", "right", "bottom"};

Eigen::MatrixXcd sigma_plus() {
  Eigen::MatrixXcd s = Eigen::MatrixXcd::Zero(2, 2);
  s(0, 1) = 1.0;
  return s;
}

Eigen::MatrixXcd sigma_minus() {
  Eigen::MatrixXcd s = Eigen::MatrixXcd::Zero(2, 2);
  s(1, 0) = 1.0;
  return s;
}

}  // namespace

std::string to_string(Side s) { return kSideNames[static_cast<int>(s)]; }

void PepsTensor::validate() const {
  if (D < 1) throw ConfigError("bond dimension must be positive");
  std::set<std::string> alpha(alphabet.begin(), alphabet.end());
  for (const auto& c : components) {
    if (!alpha.count(c.phys)) throw ConfigError("component symbol '" + c.phys + "' is not in the alphabet");
    for (int bond : {c.l, c.t, c.r, c.b})
      if (bond < 0 || bond >= D) throw ConfigError("bond index " + std::to_string(bond) + " outside [0, D)");
  }
}

const Eigen::MatrixXcd& BoundarySpec::at(Side s, int bond) const {
  const auto& side = sides[static_cast<std::size_t>(s)];
  if (bond < 0 || static_cast<std::size_t>(bond) >= side.size())
    throw ConfigError("boundary side " + to_string(s) + " has no entry for bond " + std::to_string(bond));
  return side[static_cast<std::size_t>(bond)];
}

void BoundarySpec::validate(int D) const {
  if (chi < 1) throw ConfigError("boundary dimension chi must be >= 1");
  for (int s = 0; s < 4; ++s) {
    const auto& side = sides[static_cast<std::size_t>(s)];
    if (side.empty() && !complete) continue;
    if (static_cast<int>(side.size()) != D)
      throw ConfigError("boundary side " + std::string(kSideNames[s]) + " needs one matrix per bond value");
    for (const auto& mat : side)
      if (mat.rows() != chi || mat.cols() != chi) throw ConfigError("boundary matrices must be chi x chi");
  }
  for (const auto& [sym, mat] : b)
    if (mat.rows() != chi || mat.cols() != chi) throw ConfigError("closing matrix for '" + sym + "' must be chi x chi");
}

std::vector<Eigen::MatrixXcd> selector(int D, const std::vector<int>& bonds) {
  std::vector<Eigen::MatrixXcd> side(static_cast<std::size_t>(D), Eigen::MatrixXcd::Zero(1, 1));
  for (int k : bonds) {
    if (k < 0 || k >= D) throw ConfigError("selector bond outside [0, D)");
    side[static_cast<std::size_t>(k)](0, 0) = 1.0;
  }
  return side;
}

FormalSum contract(const PepsInstance& inst, int n, int m, const std::string& sym, int rotation) {
  const auto& t = inst.tensor;
  const auto& bd = inst.boundary;
  check_size(t, n, m);
  if (!bd.complete) throw ConfigError("the boundary is incomplete; run solve_boundary first");
  bd.validate(t.D);
  auto bit = bd.b.find(sym);
  if (bit == bd.b.end()) throw ConfigError("no closing boundary matrix for symbol '" + sym + "'");

  FormalSum out({n, m});
  for (const auto& leaf : enumerate(t, n, m, allowed_from(bd, t.D, false))) {
    std::vector<const Eigen::MatrixXcd*> seq;
    for (auto [side, bond] : perimeter(leaf, n, m)) seq.push_back(&bd.at(side, bond));
    seq.push_back(&bit->second);
    const int len = static_cast<int>(seq.size());
    const int shift = ((rotation % len) + len) % len;
    std::rotate(seq.begin(), seq.begin() + shift, seq.end());
    Eigen::MatrixXcd prod = *seq.front();
    for (std::size_t k = 1; k < seq.size(); ++k) prod = prod * *seq[k];
    out.add_term(leaf.cells, leaf.weight * prod.trace());
  }
  return out;
}

PepsInstance d4_instance() {
  PepsInstance inst;
  inst.tensor.alphabet = {"a", "b", "v"};
  inst.tensor.D = 4;
  // (top / left PHYS right / bottom), in the order they are listed.
  auto comp = [](int t, int l, const char* p, int r, int b) { return PepsComponent{p, l, t, r, b, 1.0}; };
  inst.tensor.components = {comp(2, 1, "b", 1, 2), comp(3, 1, "b", 3, 3), comp(3, 3, "b", 3, 3),
                            comp(2, 0, "a", 0, 0), comp(3, 0, "v", 3, 0), comp(3, 3, "b", 3, 1),
                            comp(0, 0, "a", 0, 0), comp(0, 0, "a", 2, 0), comp(1, 2, "a", 2, 1)};
  auto& bd = inst.boundary;
  bd.chi = 1;
  bd.sides[static_cast<int>(Side::Left)] = selector(4, {0, 1});
  bd.sides[static_cast<int>(Side::Top)] = selector(4, {2, 3});
  bd.sides[static_cast<int>(Side::Right)] = selector(4, {2, 3});
  bd.sides[static_cast<int>(Side::Bottom)] = selector(4, {0, 1});
  bd.b["v"] = Eigen::MatrixXcd::Ones(1, 1);
  return inst;
}

PepsInstance d4_amended_instance() {
  PepsInstance inst = d4_instance();
  inst.tensor.components[kD4AmendedComponent] = PepsComponent{"a", 2, 0, 2, 0, 1.0};
  return inst;
}

PepsInstance d2_instance() {
  PepsInstance inst;
  inst.tensor.alphabet = {"a", "b", "v"};
  inst.tensor.D = 2;
  auto comp = [](int t, int l, const char* p, int r, int b) { return PepsComponent{p, l, t, r, b, 1.0}; };
  inst.tensor.components = {comp(1, 0, "v", 1, 0), comp(1, 1, "b", 1, 0), comp(1, 1, "b", 1, 1),
                            comp(0, 0, "a", 0, 0), comp(1, 0, "a", 0, 0)};
  auto& bd = inst.boundary;
  bd.chi = 2;
  const Eigen::MatrixXcd I = Eigen::MatrixXcd::Identity(2, 2), Z = Eigen::MatrixXcd::Zero(2, 2);
  bd.sides[static_cast<int>(Side::Top)] = {Z, I};
  bd.sides[static_cast<int>(Side::Bottom)] = {I, Z};
  bd.complete = false;
  return inst;
}

PepsInstance drop_component(const PepsInstance& inst, int k) {
  auto& comps = inst.tensor.components;
  if (k < 0 || k >= static_cast<int>(comps.size()))
    throw RangeError("component index " + std::to_string(k) + " out of range [0, " + std::to_string(comps.size()) + ")");
  PepsInstance out = inst;
  out.tensor.components.erase(out.tensor.components.begin() + k);
  return out;
}

CheckReport check_peps_vs_boxplus(const PepsInstance& inst, const CoalgebraExample& ex, const std::string& sym,
                                  const std::vector<Shape>& sizes, double tol) {
  CheckReport r;
  r.check = "peps_vs_boxplus";
  for (const auto& s : sizes) {
    r.add_size(s);
    try {
      FormalSum got = contract(inst, s.rows, s.cols, sym);
      FormalSum want = boxplus(ex, sym, s.rows, s.cols);
      FormalSum diff = got - want;
      std::string note;
      int extra = 0, missing = 0;
      for (const auto& [cells, c] : diff.terms()) {
        if (std::abs(c) <= tol) continue;
        (want.coeff(cells) == cplx(0.0) ? extra : missing) += 1;
        if (note.empty()) note = "e.g. " + to_string(GridWord{diff.shape(), cells});
      }
      if (extra + missing > 0)
        note = std::to_string(extra) + " spurious, " + std::to_string(missing) + " wrong or missing; " + note;
      r.add(to_string(s), max_coeff_diff(got, want), tol, note);
    } catch (const Error& e) {
      r.add(to_string(s), std::nullopt, tol, e.what());
    }
  }
  return r;
}

std::vector<MutationResult> mutation_scan(const PepsInstance& inst, const CoalgebraExample& ex, const std::string& sym,
                                          const std::vector<Shape>& sizes, double tol) {
  std::vector<MutationResult> out;
  for (int k = 0; k < static_cast<int>(inst.tensor.components.size()); ++k) {
    MutationResult res{k, std::nullopt};
    const PepsInstance mutated = drop_component(inst, k);
    for (const auto& s : sizes) {
      CheckReport r = check_peps_vs_boxplus(mutated, ex, sym, {s}, tol);
      if (!r.passed()) {
        res.first_detected = s;
        break;
      }
    }
    out.push_back(res);
  }
  return out;
}

std::vector<Shape> sizes_up_to(int n_max, int m_max) {
  std::vector<Shape> out;
  for (int n = 1; n <= n_max; ++n)
    for (int m = 1; m <= m_max; ++m) out.push_back({n, m});
  return out;
}

// ---------------------------------------------------------------------------

namespace {

struct SizeData {
  Shape size;
  // For each leaf: cells, left/right bonds (bottom to top) and the weight
  // including the top/bottom selectors.
  struct Entry {
    FormalSum::Cells cells;
    std::vector<int> left, right;
    cplx weight;
  };
  std::vector<Entry> entries;
};

SizeData collect(const PepsInstance& inst, Shape s) {
  const auto& t = inst.tensor;
  check_size(t, s.rows, s.cols);
  const int n = s.rows, m = s.cols;
  SizeData d;
  d.size = s;
  for (const auto& leaf : enumerate(t, n, m, allowed_from(inst.boundary, t.D, true))) {
    SizeData::Entry e;
    e.cells = leaf.cells;
    e.weight = leaf.weight;
    for (int j = 0; j < m; ++j) {
      e.weight *= selector_weight(inst.boundary, Side::Top, leaf.comps[static_cast<std::size_t>((n - 1) * m + j)]->t);
      e.weight *= selector_weight(inst.boundary, Side::Bottom, leaf.comps[static_cast<std::size_t>(j)]->b);
    }
    for (int i = 0; i < n; ++i) {
      e.left.push_back(leaf.comps[static_cast<std::size_t>(i * m)]->l);
      e.right.push_back(leaf.comps[static_cast<std::size_t>(i * m + m - 1)]->r);
    }
    if (e.weight != cplx(0.0)) d.entries.push_back(std::move(e));
  }
  return d;
}

struct LinearFit {
  Eigen::VectorXcd x, y;
  int rank = 0;
};

LinearFit least_squares(const Eigen::MatrixXcd& M, const Eigen::VectorXcd& t) {
  LinearFit f;
  if (M.cols() == 0) {
    f.x = Eigen::VectorXcd::Zero(0);
    f.y = t;
    return f;
  }
  Eigen::CompleteOrthogonalDecomposition<Eigen::MatrixXcd> cod(M);
  cod.setThreshold(kRankThreshold);
  f.rank = static_cast<int>(cod.rank());
  f.x = cod.solve(t);
  f.y = t - M * f.x;
  return f;
}

double vmax(const Eigen::VectorXcd& v) { return v.size() == 0 ? 0.0 : v.cwiseAbs().maxCoeff(); }

SizeAnalysis analyse_general(const SizeData& d, const FormalSum& target, double tol) {
  std::map<FormalSum::Cells, int> row_of;
  std::map<std::pair<std::vector<int>, std::vector<int>>, int> col_of;
  for (const auto& [cells, c] : target.terms()) row_of.emplace(cells, 0);
  for (const auto& e : d.entries) {
    row_of.emplace(e.cells, 0);
    col_of.emplace(std::make_pair(e.left, e.right), 0);
  }
  int k = 0;
  for (auto& [cells, idx] : row_of) idx = k++;
  k = 0;
  for (auto& [cfg, idx] : col_of) idx = k++;

  Eigen::MatrixXcd M = Eigen::MatrixXcd::Zero(static_cast<int>(row_of.size()), static_cast<int>(col_of.size()));
  Eigen::VectorXcd t = Eigen::VectorXcd::Zero(static_cast<int>(row_of.size()));
  for (const auto& e : d.entries) M(row_of[e.cells], col_of[{e.left, e.right}]) += e.weight;
  for (const auto& [cells, c] : target.terms()) t(row_of[cells]) = c;

  SizeAnalysis a;
  a.size = d.size;
  a.grids = static_cast<int>(M.rows());
  a.configs = static_cast<int>(M.cols());
  LinearFit f = least_squares(M, t);
  a.rank = f.rank;
  a.residual = vmax(f.y);
  a.feasible = a.residual <= tol;
  if (a.feasible) {
    a.solution_dim = a.configs - a.rank;
  } else {
    for (const auto& [cells, idx] : row_of)
      if (std::abs(f.y(idx)) > kCertificateFloor)
        a.certificate.emplace_back(to_string(GridWord(d.size, cells)), f.y(idx));
    a.certificate_orthogonality = M.cols() == 0 ? 0.0 : vmax(M.adjoint() * f.y);
    a.certificate_pairing = f.y.dot(t).real();
  }
  return a;
}

// Rows of the W-state system for one size: coefficients of
// x = (x_l(0), x_l(1), x_r(0), x_r(1)) per grid, for the 0/1 pattern g.
void ansatz_rows(const SizeData& d, const std::array<int, 4>& g, const FormalSum& target,
                 std::map<FormalSum::Cells, Eigen::VectorXcd>& rows, int D) {
  auto idx = [D](int side_offset, int bond) { return side_offset * D + bond; };
  for (const auto& [cells, c] : target.terms()) rows.emplace(cells, Eigen::VectorXcd::Zero(2 * D));
  for (const auto& e : d.entries) {
    std::vector<int> legs;  // unknown index per left/right leg
    for (int b : e.left) legs.push_back(idx(0, b));
    for (int b : e.right) legs.push_back(idx(1, b));
    auto [it, inserted] = rows.emplace(e.cells, Eigen::VectorXcd::Zero(2 * D));
    for (std::size_t k = 0; k < legs.size(); ++k) {
      cplx w = e.weight;
      for (std::size_t j = 0; j < legs.size() && w != cplx(0.0); ++j)
        if (j != k) w *= static_cast<double>(g[static_cast<std::size_t>(legs[j])]);
      it->second(legs[k]) += w;
    }
  }
}

}  // namespace

BoundarySolveReport solve_boundary(const PepsInstance& inst, const std::map<Shape, FormalSum>& targets, double tol) {
  const auto& t = inst.tensor;
  t.validate();
  if (t.D != 2) throw ConfigError("the W-state boundary ansatz is implemented for bond dimension 2");
  if (inst.boundary.sides[static_cast<int>(Side::Top)].size() != 2 ||
      inst.boundary.sides[static_cast<int>(Side::Bottom)].size() != 2)
    throw ConfigError("solve_boundary needs fixed top and bottom sides");
  if (targets.empty()) throw ConfigError("solve_boundary needs at least one target size");

  BoundarySolveReport rep;
  std::vector<SizeData> data;
  for (const auto& [s, target] : targets) {
    if (target.shape() != s) throw ShapeError("target shape does not match its size " + to_string(s));
    rep.sizes.push_back(s);
    data.push_back(collect(inst, s));
    rep.general.push_back(analyse_general(data.back(), target, tol));
  }

  // W-state ansatz over all sizes at once.
  const AnsatzTrial* best = nullptr;
  for (int pattern = 0; pattern < 16; ++pattern) {
    AnsatzTrial trial;
    for (int k = 0; k < 4; ++k) trial.g[static_cast<std::size_t>(k)] = (pattern >> (3 - k)) & 1;
    std::vector<Eigen::VectorXcd> rows;
    std::vector<cplx> rhs;
    std::size_t si = 0;
    for (const auto& [s, target] : targets) {
      std::map<FormalSum::Cells, Eigen::VectorXcd> by_grid;
      ansatz_rows(data[si++], trial.g, target, by_grid, t.D);
      for (const auto& [cells, row] : by_grid) {
        rows.push_back(row);
        rhs.push_back(target.coeff(cells));
      }
    }
    Eigen::MatrixXcd M(static_cast<int>(rows.size()), 4);
    Eigen::VectorXcd tv(static_cast<int>(rows.size()));
    for (std::size_t r = 0; r < rows.size(); ++r) {
      M.row(static_cast<int>(r)) = rows[r].transpose();
      tv(static_cast<int>(r)) = rhs[r];
    }
    LinearFit f = least_squares(M, tv);
    trial.rank = f.rank;
    trial.residual = vmax(f.y);
    for (int k = 0; k < 4; ++k) trial.x[static_cast<std::size_t>(k)] = std::abs(f.x(k)) < kCertificateFloor ? 0.0 : f.x(k);
    rep.ansatz.push_back(trial);
  }
  for (const auto& trial : rep.ansatz)
    if (!best || trial.residual < best->residual - 1e-15) best = &trial;

  if (best && best->residual <= tol) {
    BoundarySpec bd = inst.boundary;
    const Eigen::MatrixXcd I = Eigen::MatrixXcd::Identity(2, 2), sp = sigma_plus();
    for (int side : {0, 1}) {
      auto& v = bd.sides[static_cast<std::size_t>(side == 0 ? Side::Left : Side::Right)];
      v.clear();
      for (int bond = 0; bond < 2; ++bond) {
        const std::size_t k = static_cast<std::size_t>(side * 2 + bond);
        v.push_back(static_cast<double>(best->g[k]) * I + best->x[k] * sp);
      }
    }
    bd.b["v"] = sigma_minus();
    bd.complete = true;
    PepsInstance done{inst.tensor, bd};
    CheckReport check;
    check.check = "peps_boundary_completion";
    for (const auto& [s, target] : targets) {
      check.add_size(s);
      check.add(to_string(s), max_coeff_diff(contract(done, s.rows, s.cols, "v"), target), tol);
    }
    rep.feasible = check.passed();
    rep.completion = bd;
    rep.completion_check = check;
  }

  std::vector<std::string> blocked;
  for (const auto& a : rep.general)
    if (!a.feasible) blocked.push_back(to_string(a.size));
  if (rep.feasible) {
    rep.conclusion = "completion found: the W-state boundary reproduces every target size";
  } else if (!blocked.empty()) {
    std::string list;
    for (const auto& s : blocked) list += (list.empty() ? "" : ", ") + s;
    rep.conclusion = "infeasible: no boundary of any chi on the left/right legs reproduces the targets at " + list +
                     " (certificate y with M^H y = 0 and <y, t> > 0); the W-state ansatz is infeasible a fortiori";
  } else {
    rep.conclusion = "infeasible for the W-state ansatz (every 0/1 pattern leaves a residual), although a general "
                     "boundary weight exists for each size separately";
  }
  return rep;
}

BoundarySolveReport solve_boundary(const PepsInstance& inst, const CoalgebraExample& ex, const std::string& sym,
                                   std::vector<Shape> sizes, double tol) {
  if (sym != "v") throw ConfigError("boundary completion targets the closing symbol v");
  if (sizes.empty()) sizes = sizes_up_to(3, 3);
  std::map<Shape, FormalSum> targets;
  for (const auto& s : sizes) targets.emplace(s, boxplus(ex, sym, s.rows, s.cols));
  return solve_boundary(inst, targets, tol);
}

// ---------------------------------------------------------------------------

nlohmann::json to_json(const PepsTensor& t) {
  nlohmann::json comps = nlohmann::json::array();
  for (const auto& c : t.components) comps.push_back({c.phys, c.l, c.t, c.r, c.b, c.coeff.real(), c.coeff.imag()});
  return {{"alphabet", t.alphabet}, {"D", t.D}, {"components", comps}};
}

PepsTensor peps_tensor_from_json(const nlohmann::json& j) {
  try {
    PepsTensor t;
    t.alphabet = j.at("alphabet").get<std::vector<std::string>>();
    t.D = j.at("D").get<int>();
    for (const auto& c : j.at("components")) {
      if (c.size() != 7) throw ConfigError("components are [phys, l, t, r, b, re, im]");
      t.components.push_back({c.at(0).get<std::string>(), c.at(1).get<int>(), c.at(2).get<int>(), c.at(3).get<int>(),
                              c.at(4).get<int>(), cplx(c.at(5).get<double>(), c.at(6).get<double>())});
    }
    t.validate();
    return t;
  } catch (const nlohmann::json::exception& e) {
    throw ConfigError(std::string("malformed PEPS tensor JSON: ") + e.what());
  }
}

nlohmann::json to_json(const BoundarySpec& b) {
  nlohmann::json sides = nlohmann::json::object();
  for (int s = 0; s < 4; ++s) {
    nlohmann::json list = nlohmann::json::array();
    for (const auto& mat : b.sides[static_cast<std::size_t>(s)]) list.push_back(matrix_json(mat));
    sides[kSideNames[s]] = list;
  }
  nlohmann::json close = nlohmann::json::object();
  for (const auto& [sym, mat] : b.b) close[sym] = matrix_json(mat);
  return {{"chi", b.chi}, {"complete", b.complete}, {"sides", sides}, {"b", close}};
}

BoundarySpec boundary_from_json(const nlohmann::json& j) {
  try {
    BoundarySpec b;
    b.chi = j.at("chi").get<int>();
    b.complete = j.value("complete", true);
    for (int s = 0; s < 4; ++s)
      for (const auto& mat : j.at("sides").at(kSideNames[s]))
        b.sides[static_cast<std::size_t>(s)].push_back(matrix_from_json(mat));
    for (const auto& [sym, mat] : j.at("b").items()) b.b[sym] = matrix_from_json(mat);
    return b;
  } catch (const nlohmann::json::exception& e) {
    throw ConfigError(std::string("malformed boundary JSON: ") + e.what());
  }
}

nlohmann::json to_json(const BoundarySolveReport& r) {
  nlohmann::json sizes = nlohmann::json::array(), general = nlohmann::json::array(), ansatz = nlohmann::json::array();
  for (const auto& s : r.sizes) sizes.push_back(to_string(s));
  for (const auto& a : r.general) {
    nlohmann::json cert = nlohmann::json::array();
    for (const auto& [grid, y] : a.certificate) cert.push_back({grid, clean(y.real()), clean(y.imag())});
    general.push_back({{"size", to_string(a.size)},
                       {"grids", a.grids},
                       {"configs", a.configs},
                       {"rank", a.rank},
                       {"residual", a.residual},
                       {"feasible", a.feasible},
                       {"solution_dim", a.solution_dim},
                       {"certificate", cert},
                       {"certificate_orthogonality", a.certificate_orthogonality},
                       {"certificate_pairing", a.certificate_pairing}});
  }
  for (const auto& a : r.ansatz) {
    nlohmann::json x = nlohmann::json::array();
    for (cplx v : a.x) x.push_back({clean(v.real()), clean(v.imag())});
    ansatz.push_back({{"g", a.g}, {"x", x}, {"residual", a.residual}, {"rank", a.rank}});
  }
  nlohmann::json j = {{"sizes", sizes},     {"general", general},       {"ansatz", ansatz},
                      {"feasible", r.feasible}, {"conclusion", r.conclusion}};
  j["completion"] = r.completion ? to_json(*r.completion) : nlohmann::json(nullptr);
  j["completion_check"] = r.completion_check ? to_json(*r.completion_check) : nlohmann::json(nullptr);
  return j;
}

}  // namespace lat2d
