#include "lat2d/uqsu2.hpp"

#include <sstream>

#include <algorithm>
#include <cmath>

#include <Eigen/SVD>

#include "lat2d/examples.hpp"

namespace lat2d {

void require_nonzero(cplx q) {
  if (!std::isfinite(q.real()) || !std::isfinite(q.imag()) || std::abs(q) == 0.0)
    throw ParameterError("q must be finite and nonzero");
}

void require_nonsingular(cplx q) {
  require_nonzero(q);
  if (std::abs(q * q - cplx(1.0)) <= 1e-12)
    throw ParameterError("q^2 = 1 is singular here (division by q - 1/q)");
}

Representation SpinHalfRep::as_representation() const {
  Representation rep;
  rep.alphabet = {"S+", "S-", "K+", "K-", "K+2", "K-2", "Sz", "1"};
  rep.dim = 2;
  rep.matrices = {{"S+", sp}, {"S-", sm}, {"K+", kp}, {"K-", km}, {"K+2", kp2}, {"K-2", km2}, {"Sz", sz}, {"1", id}};
  return rep;
}

SpinHalfRep spin_half_rep(cplx q) {
  require_nonzero(q);
  SpinHalfRep r;
  r.q = q;
  const cplx h = std::sqrt(q);
  r.sp << 0, 1, 0, 0;
  r.sm << 0, 0, 1, 0;
  r.sz << 0.5, 0, 0, -0.5;
  r.kp << h, 0, 0, 1.0 / h;
  r.km << 1.0 / h, 0, 0, h;
  r.kp2 = r.kp * r.kp;
  r.km2 = r.km * r.km;
  r.id = Eigen::Matrix2cd::Identity();
  return r;
}

namespace {

double vec_max_abs(const StateVector& v) { return v.size() ? v.cwiseAbs().maxCoeff() : 0.0; }


long lattice_dim(int n, int m, long cap) {
  if (n < 1 || m < 1) throw ShapeError("lattice sizes must be positive");
  if (n * m > 30 || (1L << (n * m)) > cap)
    throw ResourceError("lattice " + std::to_string(n) + "x" + std::to_string(m) + " exceeds the dimension cap " +
                        std::to_string(cap));
  return 1L << (n * m);
}

}  // namespace

SparseOperator direct_boxplus_op(const std::string& gen, cplx q, int n, int m, long dim_cap) {
  const long dim = lattice_dim(n, m, dim_cap);
  const auto rep = spin_half_rep(q).as_representation();
  const Eigen::MatrixXcd& g = rep.matrix(gen);
  const int N = n * m;
  auto placed = [&](int site, const Eigen::MatrixXcd& before, const Eigen::MatrixXcd& after) {
    std::vector<Eigen::MatrixXcd> f;
    for (int k = 0; k < N; ++k) f.push_back(k < site ? before : (k == site ? g : after));
    return kron_sites(f);
  };
  if (gen == "S+" || gen == "S-") {
    SparseOperator out = SparseOperator::zero(dim);
    for (int s = 0; s < N; ++s) out = out + placed(s, rep.matrix("K-"), rep.matrix("K+"));
    return out;
  }
  if (gen == "Sz") {
    SparseOperator out = SparseOperator::zero(dim);
    for (int s = 0; s < N; ++s) out = out + placed(s, rep.matrix("1"), rep.matrix("1"));
    return out;
  }
  return placed(0, g, g);
}

SparseOperator boxplus_op(const std::string& gen, cplx q, int n, int m, long dim_cap) {
  lattice_dim(n, m, dim_cap);
  const auto ex = make_uq_symbolic(q);
  if (std::find(ex.alphabet.begin(), ex.alphabet.end(), gen) == ex.alphabet.end())
    throw RepresentationError("'" + gen + "' is not a U_q generator");
  SparseOperator op = evaluate(boxplus(ex, gen, n, m), spin_half_rep(q).as_representation(), dim_cap);
  SparseOperator direct = direct_boxplus_op(gen, q, n, m, dim_cap);
  const double scale = 1.0 + max_abs(direct);
  if (max_abs_diff(op, direct) > 1e-12 * scale)
    throw NumericalError("boxplus(" + gen + ") differs from the direct placement construction");
  return op;
}

CheckReport check_ks_relation(cplx q, int n, int m, double tol) {
  require_nonzero(q);
  CheckReport r;
  r.check = "ks_relation";
  r.add_size({n, m});
  const SparseOperator kp = boxplus_op("K+", q, n, m), km = boxplus_op("K-", q, n, m);
  const SparseOperator sp = boxplus_op("S+", q, n, m), sm = boxplus_op("S-", q, n, m);
  struct Case {
    std::string name;
    const SparseOperator& k;
    const SparseOperator& s;
    cplx factor;
  };
  const Case cases[] = {{"K+ S+ = q S+ K+", kp, sp, q},
                        {"K+ S- = q^-1 S- K+", kp, sm, 1.0 / q},
                        {"K- S+ = q^-1 S+ K-", km, sp, 1.0 / q},
                        {"K- S- = q S- K-", km, sm, q}};
  for (const auto& c : cases)
    r.add(c.name + " q=" + std::to_string(q.real()) + (q.imag() != 0.0 ? "+" + std::to_string(q.imag()) + "i" : ""),
          max_abs_diff(c.k * c.s, c.factor * (c.s * c.k)), tol);
  return r;
}

CheckReport check_commutator(cplx q, int n, int m, double tol) {
  require_nonsingular(q);
  CheckReport r;
  r.check = "commutator";
  r.add_size({n, m});
  const SparseOperator sp = boxplus_op("S+", q, n, m), sm = boxplus_op("S-", q, n, m);
  const SparseOperator kp2 = boxplus_op("K+2", q, n, m), km2 = boxplus_op("K-2", q, n, m);
  SparseOperator lhs = sp * sm - sm * sp;
  SparseOperator rhs = (1.0 / (q - 1.0 / q)) * (kp2 - km2);
  r.add("[S+,S-] q=" + std::to_string(q.real()) + (q.imag() != 0.0 ? "+" + std::to_string(q.imag()) + "i" : ""),
        max_abs_diff(lhs, rhs), tol);
  return r;
}

StateVector q_singlet(cplx q) {
  require_nonsingular(q);
  const cplx norm = 1.0 / std::sqrt(q - 1.0 / q), h = std::sqrt(q);
  StateVector s = StateVector::Zero(4);
  s(1) = norm * h;         // |01>
  s(2) = -norm / h;        // |10>
  return s;
}

CheckReport check_singlet_identities(cplx q, double tol) {
  require_nonsingular(q);
  const auto r = spin_half_rep(q);
  auto k2 = [](const Eigen::Matrix2cd& a, const Eigen::Matrix2cd& b) { return kron_sites({a, b}).dense(); };
  const StateVector s = q_singlet(q);
  CheckReport out;
  out.check = "singlet_identities";
  out.add_size({1, 2});
  std::ostringstream tag;
  tag << " q=" << q.real() << (q.imag() >= 0 ? "+" : "") << q.imag() << "i";
  for (const auto& [name, k] : {std::pair{"K+", r.kp}, std::pair{"K-", r.km}})
    out.add(std::string("Delta(") + name + ")|s> = |s>" + tag.str(), vec_max_abs(k2(k, k) * s - s), tol);
  for (const auto& [name, g] : {std::pair{"S+", r.sp}, std::pair{"S-", r.sm}})
    out.add(std::string("Delta(") + name + ")|s> = 0" + tag.str(), vec_max_abs(k2(g, r.kp) * s + k2(r.km, g) * s), tol);
  const cplx ratio = std::sqrt(1.0 / q - q) / std::sqrt(q - 1.0 / q);
  out.add("(K- x K+)|s>^q = ratio |s>^{1/q}" + tag.str(), vec_max_abs(k2(r.km, r.kp) * s - ratio * q_singlet(1.0 / q)),
          tol);
  return out;
}

StateVector singlet_product(cplx q, const std::vector<std::pair<int, int>>& linear_pairs, int total_sites) {
  if (total_sites < 2 || total_sites > 16) throw ShapeError("singlet_product: unsupported number of sites");
  std::vector<int> seen(static_cast<std::size_t>(total_sites), 0);
  for (auto [i, j] : linear_pairs) {
    if (i < 1 || j < 1 || i > total_sites || j > total_sites || i == j) throw RangeError("bad singlet site pair");
    ++seen[static_cast<std::size_t>(i - 1)];
    ++seen[static_cast<std::size_t>(j - 1)];
  }
  for (int c : seen)
    if (c != 1) throw ShapeError("singlet_product: every site must be in exactly one pair");
  const StateVector s = q_singlet(q);
  const long dim = 1L << total_sites;
  StateVector out = StateVector::Zero(dim);
  for (long idx = 0; idx < dim; ++idx) {
    // Site k (1-based) is bit (total_sites - k): site 1 is the leftmost factor.
    auto bit = [&](int site) { return static_cast<int>((idx >> (total_sites - site)) & 1); };
    cplx amp = 1.0;
    for (auto [i, j] : linear_pairs) {
      amp *= s(2 * bit(i) + bit(j));
      if (amp == cplx(0.0)) break;
    }
    out(idx) = amp;
  }
  return out;
}

StateVector plaquette_singlets(cplx q, const std::vector<std::pair<int, int>>& label_pairs) {
  std::vector<std::pair<int, int>> lin;
  for (auto [i, j] : label_pairs) {
    if (i < 1 || i > 4 || j < 1 || j > 4) throw RangeError("plaquette labels run from 1 to 4");
    lin.emplace_back(kLabelToLinear[static_cast<std::size_t>(i)], kLabelToLinear[static_cast<std::size_t>(j)]);
  }
  return singlet_product(q, lin, 4);
}

namespace {

Eigen::JacobiSVD<Eigen::MatrixXcd> stacked_svd(cplx q) {
  Eigen::MatrixXcd stacked(32, 16);
  stacked << boxplus_op("S+", q, 2, 2).dense(), boxplus_op("S-", q, 2, 2).dense();
  return Eigen::JacobiSVD<Eigen::MatrixXcd>(stacked, Eigen::ComputeFullV);
}

int null_dim(const Eigen::VectorXd& sv) {
  const double thresh = 1e-10 * (sv.size() ? sv(0) : 0.0);
  // A 32x16 matrix has 16 singular values; zero ones count as kernel directions.
  int rank = 0;
  for (Eigen::Index k = 0; k < sv.size(); ++k)
    if (sv(k) > thresh) ++rank;
  return 16 - rank;
}

// Linear-order index of a 2x2 basis state given by bits per plaquette label.
long label_index(const std::array<int, 5>& bits) {
  long idx = 0;
  for (int l = 1; l <= 4; ++l) idx |= static_cast<long>(bits[static_cast<std::size_t>(l)]) << (4 - kLabelToLinear[static_cast<std::size_t>(l)]);
  return idx;
}

}  // namespace

int joint_kernel_dim(cplx q) {
  require_nonzero(q);
  return null_dim(stacked_svd(q).singularValues());
}

KernelReport kernel_2x2(cplx q) {
  require_nonsingular(q);
  KernelReport r;
  r.q = q;
  auto svd = stacked_svd(q);
  const Eigen::VectorXd sv = svd.singularValues();
  r.singular_values.assign(sv.data(), sv.data() + sv.size());
  r.dim = null_dim(sv);
  r.basis = svd.matrixV().rightCols(r.dim);

  const Eigen::MatrixXcd sp = boxplus_op("S+", q, 2, 2).dense(), sm = boxplus_op("S-", q, 2, 2).dense();
  auto annihilation = [&](const StateVector& psi) { return std::max(vec_max_abs(sp * psi), vec_max_abs(sm * psi)); };
  const StateVector horiz = plaquette_singlets(q, {{1, 2}, {3, 4}});
  const StateVector cross = plaquette_singlets(q, {{3, 2}, {4, 1}});
  r.horizontal_residual = annihilation(horiz);
  r.crossed_residual = annihilation(cross);
  r.horizontal_reversed_residual = annihilation(plaquette_singlets(q, {{2, 1}, {4, 3}}));
  r.crossed_reversed_residual = annihilation(plaquette_singlets(q, {{2, 3}, {1, 4}}));
  for (auto [al, be] : {std::pair{1.0, 0.0}, std::pair{0.0, 1.0}, std::pair{1.0, 1.0}}) {
    StateVector psi = al * horiz + be * cross;
    r.family_residuals.push_back(annihilation(psi));
    StateVector proj = r.basis * (r.basis.adjoint() * psi);
    r.family_kernel_distance.push_back((psi - proj).norm() / psi.norm());
  }

  // Vertical singlets.
  const cplx norm = 1.0 / std::sqrt(q - 1.0 / q);
  r.vertical_expected = (std::sqrt(q) - 1.0 / std::sqrt(q)) * norm;
  r.vertical_printed_orientation_residual = vec_max_abs(sp * plaquette_singlets(q, {{1, 3}, {2, 4}}));
  const StateVector vert = plaquette_singlets(q, {{3, 1}, {4, 2}});
  bool ok = true;
  cplx coeff[2];
  for (int g = 0; g < 2; ++g) {
    const StateVector img = (g == 0 ? sp : sm) * vert;
    const int u = g == 0 ? 0 : 1;  // the pair left untouched ends up in |uu>
    // (|01>+|10>)_{1,3} |uu>_{2,4} and |uu>_{1,3} (|01>+|10>)_{2,4}.
    const long a1 = label_index({0, 0, u, 1, u}), a2 = label_index({0, 1, u, 0, u});
    const long b1 = label_index({0, u, 0, u, 1}), b2 = label_index({0, u, 1, u, 0});
    StateVector rest = img;
    for (long k : {a1, a2, b1, b2}) rest(k) = 0.0;
    const double mod = std::abs(img(a1));
    ok = ok && vec_max_abs(rest) < 1e-10 * (1.0 + mod) && std::abs(img(a1) - img(a2)) < 1e-10 * (1.0 + mod) &&
         std::abs(img(b1) - img(b2)) < 1e-10 * (1.0 + mod) && std::abs(std::abs(img(b1)) - mod) < 1e-10 * (1.0 + mod);
    // S+ leaves the (1,3) part with a plus sign; S- with the opposite one.
    coeff[g] = (g == 0 ? img(a1) : img(b1)) / norm;
    if (g == 0 && mod > 0.0) r.vertical_relative_sign = std::real(img(b1) / img(a1)) < 0 ? -1 : 1;
  }
  r.vertical_coefficient = coeff[0];
  r.vertical_support_ok = ok && std::abs(coeff[0] - coeff[1]) < 1e-10 * (1.0 + std::abs(coeff[0]));
  return r;
}

nlohmann::json to_json(const KernelReport& r) {
  auto c = [](cplx z) { return nlohmann::json::array({z.real(), z.imag()}); };
  nlohmann::json basis = nlohmann::json::array();
  for (Eigen::Index k = 0; k < r.basis.cols(); ++k) {
    nlohmann::json col = nlohmann::json::array();
    for (Eigen::Index i = 0; i < r.basis.rows(); ++i) col.push_back(c(r.basis(i, k)));
    basis.push_back(col);
  }
  return {{"q", c(r.q)},
          {"kernel_dim", r.dim},
          {"singular_values", r.singular_values},
          {"kernel_basis", basis},
          {"horizontal_residual", r.horizontal_residual},
          {"crossed_residual", r.crossed_residual},
          {"horizontal_reversed_residual", r.horizontal_reversed_residual},
          {"crossed_reversed_residual", r.crossed_reversed_residual},
          {"family_residuals", r.family_residuals},
          {"family_kernel_distance", r.family_kernel_distance},
          {"vertical_coefficient", c(r.vertical_coefficient)},
          {"vertical_expected", c(r.vertical_expected)},
          {"vertical_support_ok", r.vertical_support_ok},
          {"vertical_relative_sign", r.vertical_relative_sign},
          {"vertical_printed_orientation_residual", r.vertical_printed_orientation_residual}};
}

CheckReport check_counit_antipode_families(cplx q, int n, double tol) {
  if (n < 1 || n > 6) throw ShapeError("family checks support boundary lengths 1..6");
  require_nonzero(q);
  const auto ex = make_uq_symbolic(q);
  const auto rep = spin_half_rep(q).as_representation();
  CheckReport out;
  out.check = "counit_antipode_families";
  for (Dir d : {Dir::X, Dir::Y}) {
    const Shape shape = d == Dir::X ? Shape{n, 1} : Shape{1, n};
    std::vector<GridWord> words;
    for (const char* k : {"K+", "K-"}) words.push_back(uniform_word(shape, k));
    for (int p = 0; p < n; ++p)
      for (const std::string v : {"S+", "S-", "Sz"}) {
        const bool z = v == "Sz";
        std::vector<std::string> cells;
        for (int s = 0; s < n; ++s) cells.push_back(s < p ? (z ? "1" : "K-") : (s == p ? v : (z ? "1" : "K+")));
        words.emplace_back(shape, cells);
      }
    out.merge(check_counit(ex, d, n, words, tol));
    out.merge(check_antipode(ex, rep, d, n, words, tol));
  }
  return out;
}

}  // namespace lat2d
