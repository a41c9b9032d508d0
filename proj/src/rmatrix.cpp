#include "lat2d/rmatrix.hpp"

#include <cmath>
#include <numbers>
#include <random>
#include <sstream>

#include "lat2d/examples.hpp"

namespace lat2d {

namespace {

Eigen::Matrix4cd kron4(const Eigen::Matrix2cd& a, const Eigen::Matrix2cd& b) {
  Eigen::Matrix4cd out;
  for (int r = 0; r < 4; ++r)
    for (int c = 0; c < 4; ++c) out(r, c) = a(r / 2, c / 2) * b(r % 2, c % 2);
  return out;
}

const Eigen::Matrix2cd& generator(const SpinHalfRep& r, const std::string& gen) {
  if (gen == "S+") return r.sp;
  if (gen == "S-") return r.sm;
  throw RepresentationError("expected S+ or S-, got '" + gen + "'");
}

int linear_site(int label) {
  if (label < 1 || label > 4) throw RangeError("plaquette labels run from 1 to 4");
  return kLabelToLinear[static_cast<std::size_t>(label)];
}

std::string q_label(cplx q) {
  std::ostringstream os;
  os.precision(6);
  os << "q=" << q.real();
  if (q.imag() != 0.0) os << (q.imag() > 0 ? "+" : "") << q.imag() << "i";
  return os.str();
}

double dense_diff(const Eigen::MatrixXcd& a, const Eigen::MatrixXcd& b) { return max_abs(Eigen::MatrixXcd(a - b)); }

Eigen::MatrixXcd without_trace(const Eigen::MatrixXcd& m) {
  return m - (m.trace() / static_cast<double>(m.rows())) * Eigen::MatrixXcd::Identity(m.rows(), m.cols());
}

double fit_slope(const std::vector<double>& h, const std::vector<double>& e) {
  if (h.size() < 2 || h.size() != e.size()) throw NumericalError("slope fit needs at least two points");
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  const double n = static_cast<double>(h.size());
  for (std::size_t k = 0; k < h.size(); ++k) {
    if (!(h[k] > 0.0) || !(e[k] > 0.0)) throw NumericalError("slope fit needs positive h and errors");
    double x = std::log(h[k]), y = std::log(e[k]);
    sx += x;
    sy += y;
    sxx += x * x;
    sxy += x * y;
  }
  const double den = n * sxx - sx * sx;
  if (std::abs(den) < 1e-300) throw NumericalError("degenerate slope fit (all h equal)");
  return (n * sxy - sx * sy) / den;
}

}  // namespace

Eigen::Matrix4cd r_matrix(cplx q) {
  require_nonzero(q);
  Eigen::Matrix4cd r = Eigen::Matrix4cd::Zero();
  r(0, 0) = q;
  r(1, 1) = 1.0;
  r(1, 2) = q - 1.0 / q;
  r(2, 2) = 1.0;
  r(3, 3) = q;
  return r;
}

Eigen::Matrix4cd r_matrix_factorized(cplx q) {
  const auto s = spin_half_rep(q);
  // q^{2 Sz Sz} is diagonal with exponents 2 * (+-1/2)(+-1/2) = +-1/2.
  Eigen::Matrix4cd zz = Eigen::Matrix4cd::Zero();
  const double sz[2] = {0.5, -0.5};
  for (int k = 0; k < 4; ++k) zz(k, k) = std::pow(q, 2.0 * sz[k / 2] * sz[k % 2]);
  return zz * std::sqrt(q) * (Eigen::Matrix4cd::Identity() + (q - 1.0 / q) * kron4(s.sp, s.sm));
}

Eigen::Matrix4cd delta_op(const std::string& gen, cplx q) {
  const auto s = spin_half_rep(q);
  if (gen == "K+") return kron4(s.kp, s.kp);
  if (gen == "K-") return kron4(s.km, s.km);
  const auto& g = generator(s, gen);
  return kron4(g, s.kp) + kron4(s.km, g);
}

Eigen::Matrix4cd delta_perm(const std::string& gen, cplx q) {
  const auto s = spin_half_rep(q);
  if (gen == "K+") return kron4(s.kp, s.kp);
  if (gen == "K-") return kron4(s.km, s.km);
  const auto& g = generator(s, gen);
  return kron4(g, s.km) + kron4(s.kp, g);
}

Eigen::MatrixXcd embed_pair(const Eigen::Matrix4cd& op, int i, int j) {
  const int si = linear_site(i) - 1, sj = linear_site(j) - 1;
  if (si == sj) throw RangeError("embed_pair needs two distinct labels");
  // Site s (0-based) is bit 3 - s of the basis index: site 1 is the leftmost factor.
  auto bit = [](int idx, int s) { return (idx >> (3 - s)) & 1; };
  Eigen::MatrixXcd out = Eigen::MatrixXcd::Zero(16, 16);
  for (int c = 0; c < 16; ++c) {
    const int pc = 2 * bit(c, si) + bit(c, sj);
    for (int pr = 0; pr < 4; ++pr) {
      if (op(pr, pc) == cplx(0.0)) continue;
      int r = c;
      r = (r & ~(1 << (3 - si))) | ((pr >> 1) << (3 - si));
      r = (r & ~(1 << (3 - sj))) | ((pr & 1) << (3 - sj));
      out(r, c) += op(pr, pc);
    }
  }
  return out;
}

Eigen::MatrixXcd embed_site(const Eigen::Matrix2cd& op, int i) {
  std::vector<Eigen::MatrixXcd> f(4, Eigen::MatrixXcd::Identity(2, 2));
  f[static_cast<std::size_t>(linear_site(i) - 1)] = op;
  return kron_sites(f).dense();
}

Eigen::MatrixXcd r_pair(cplx q, int i, int j, bool inverse) {
  Eigen::Matrix4cd r = r_matrix(q);
  return embed_pair(inverse ? Eigen::Matrix4cd(r.inverse()) : r, i, j);
}

Eigen::MatrixXcd r2d(cplx q) {
  return r_pair(q, 1, 4, true) * r_pair(q, 2, 4, true) * r_pair(q, 1, 3, true) * r_pair(q, 2, 3, true) *
         r_pair(q, 3, 4) * r_pair(q, 1, 2);
}

FormalSum boxplus_perm_sum(const std::string& gen) {
  generator(spin_half_rep(1.0), gen);
  FormalSum src = boxplus(make_uq_symbolic(2.0), gen, 2, 2);
  FormalSum out({2, 2});
  for (const auto& [src_cells, c] : src.terms()) {
    FormalSum::Cells cells = src_cells;
    for (auto& s : cells) s = s == "K+" ? "K-" : (s == "K-" ? "K+" : s);
    out.add_term(cells, c);
  }
  return out;
}

Eigen::MatrixXcd boxplus_perm(const std::string& gen, cplx q) {
  return evaluate(boxplus_perm_sum(gen), spin_half_rep(q).as_representation()).dense();
}

Eigen::Matrix4cd classical_r() {
  Eigen::Matrix4cd r = Eigen::Matrix4cd::Zero();
  r(0, 0) = 0.5;
  r(1, 2) = 1.0;
  r(3, 3) = 0.5;
  return r;
}

Eigen::MatrixXcd classical_r2d() {
  const Eigen::Matrix4cd r = classical_r();
  return embed_pair(r, 1, 2) + embed_pair(r, 3, 4) - embed_pair(r, 1, 4) - embed_pair(r, 1, 3) - embed_pair(r, 2, 3) -
         embed_pair(r, 2, 4);
}

Eigen::MatrixXcd a_pair(const std::string& gen, int i, int j) {
  const auto s = spin_half_rep(1.0);
  const auto& g = generator(s, gen);
  return -embed_site(g, i) * embed_site(s.sz, j) + embed_site(s.sz, i) * embed_site(g, j);
}

Eigen::MatrixXcd first_order_rhs(const std::string& gen) {
  const auto s = spin_half_rep(1.0);
  const auto& g = generator(s, gen);
  auto S = [&](int i) { return embed_site(g, i); };
  auto Z = [&](int i) { return embed_site(s.sz, i); };
  return S(1) * (-Z(2) + Z(3) + Z(4)) + S(2) * (Z(1) + Z(3) + Z(4)) - S(3) * (Z(1) + Z(2) + Z(4)) -
         S(4) * (Z(1) + Z(2) - Z(3));
}

// ---------------------------------------------------------------------------

std::string ChainStep::name() const {
  std::string r = "R" + std::to_string(i) + std::to_string(j);
  return inverse ? r + "^-1 (.) " + r : r + " (.) " + r + "^-1";
}

const std::vector<ChainStep>& chain_steps() {
  static const std::vector<ChainStep> steps = {{1, 2, false}, {3, 4, false}, {2, 3, true},
                                               {1, 3, true},  {2, 4, true},  {1, 4, true}};
  return steps;
}

std::vector<FormalSum> printed_chain(const std::string& gen) {
  generator(spin_half_rep(1.0), gen);
  // Each grid as drawn: labels (1 2) on the top row, (3 4) on the bottom row.
  using G = std::vector<std::vector<std::string>>;
  const std::string S = gen, P = "K+", M = "K-";
  const std::vector<std::vector<G>> grids = {
      {{{S, P}, {M, M}}, {{M, S}, {M, M}}, {{P, P}, {S, P}}, {{P, P}, {M, S}}},
      {{{S, M}, {M, M}}, {{P, S}, {M, M}}, {{P, P}, {S, P}}, {{P, P}, {M, S}}},
      {{{S, M}, {M, M}}, {{P, S}, {M, M}}, {{P, P}, {S, M}}, {{P, P}, {P, S}}},
      {{{S, M}, {M, M}}, {{P, S}, {P, M}}, {{P, M}, {S, M}}, {{P, P}, {P, S}}},
      {{{S, M}, {P, M}}, {{P, S}, {P, M}}, {{M, M}, {S, M}}, {{P, P}, {P, S}}},
      {{{S, M}, {P, M}}, {{P, S}, {P, P}}, {{M, M}, {S, M}}, {{P, M}, {P, S}}},
      {{{S, M}, {P, P}}, {{P, S}, {P, P}}, {{M, M}, {S, M}}, {{M, M}, {P, S}}},
  };
  std::vector<FormalSum> out;
  for (const auto& step : grids) {
    FormalSum s({2, 2});
    for (const auto& g : step) s.add_term(grid_from_rows(g), 1.0);
    out.push_back(s);
  }
  return out;
}

FormalSum conjugate_symbolic(const FormalSum& s, const ChainStep& step) {
  const std::size_t si = static_cast<std::size_t>(linear_site(step.i) - 1);
  const std::size_t sj = static_cast<std::size_t>(linear_site(step.j) - 1);
  auto is_s = [](const std::string& x) { return x == "S+" || x == "S-"; };
  // Forward: (S, K+) + (K-, S) -> (S, K-) + (K+, S).  Inverse: the reverse.
  const std::string from_k = step.inverse ? "K-" : "K+", to_k = step.inverse ? "K+" : "K-";
  const std::string from_partner = step.inverse ? "K+" : "K-", to_partner = step.inverse ? "K-" : "K+";
  FormalSum out(s.shape());
  for (const auto& [cells, c] : s.terms()) {
    const std::string &a = cells[si], &b = cells[sj];
    if (!is_s(a) && !is_s(b)) {
      if (a != b) throw DomainError(step.name() + ": mixed K pair on the conjugated sites in " + to_string(GridWord(s.shape(), cells)));
      out.add_term(cells, c);
      continue;
    }
    if (is_s(a) && b == from_k) {
      FormalSum::Cells partner = cells;
      partner[si] = from_partner;
      partner[sj] = a;
      if (std::abs(s.coeff(partner) - c) > kCanonEps)
        throw DomainError(step.name() + ": no matching partner for " + to_string(GridWord(s.shape(), cells)));
      FormalSum::Cells t1 = cells, t2 = partner;
      t1[sj] = to_k;
      t2[si] = to_partner;
      out.add_term(t1, c);
      out.add_term(t2, c);
      continue;
    }
    if (is_s(b) && a == from_partner) {
      FormalSum::Cells partner = cells;
      partner[si] = b;
      partner[sj] = from_k;
      if (!s.terms().count(partner))
        throw DomainError(step.name() + ": no matching partner for " + to_string(GridWord(s.shape(), cells)));
      continue;  // emitted together with its partner
    }
    throw DomainError(step.name() + ": the relation does not apply to " + to_string(GridWord(s.shape(), cells)));
  }
  return out;
}

CheckReport check_chain(const std::string& gen, const std::vector<cplx>& qs, double tol) {
  CheckReport r;
  r.check = "rmatrix_chain_" + gen;
  r.add_size({2, 2});
  const auto printed = printed_chain(gen);
  const auto start = boxplus(make_uq_symbolic(2.0), gen, 2, 2);
  r.add("X0 = boxplus(" + gen + ")", max_coeff_diff(start, printed.front()), tol);
  r.add("X6 = permuted boxplus(" + gen + ")", max_coeff_diff(boxplus_perm_sum(gen), printed.back()), tol);
  const auto& steps = chain_steps();
  for (std::size_t k = 0; k < steps.size(); ++k) {
    const std::string label = "X" + std::to_string(k) + " -> X" + std::to_string(k + 1) + " by " + steps[k].name();
    try {
      r.add(label + " symbolic", max_coeff_diff(conjugate_symbolic(printed[k], steps[k]), printed[k + 1]), tol);
    } catch (const DomainError& e) {
      r.add(label + " symbolic", std::nullopt, tol, e.what());
    }
    for (cplx q : qs) {
      const auto rep = spin_half_rep(q).as_representation();
      Eigen::MatrixXcd R = r_pair(q, steps[k].i, steps[k].j), Ri = r_pair(q, steps[k].i, steps[k].j, true);
      if (steps[k].inverse) std::swap(R, Ri);
      Eigen::MatrixXcd before = evaluate(printed[k], rep).dense(), after = evaluate(printed[k + 1], rep).dense();
      r.add(label + " " + q_label(q), dense_diff(R * before * Ri, after), tol);
    }
  }
  return r;
}

std::vector<cplx> seeded_qs(unsigned long long seed, int count) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> log_mod(std::log(0.5), std::log(2.0));
  std::uniform_real_distribution<double> phase(-std::numbers::pi / 4, std::numbers::pi / 4);
  std::vector<cplx> out;
  while (static_cast<int>(out.size()) < count) {
    cplx q = std::polar(std::exp(log_mod(rng)), phase(rng));
    if (std::abs(q * q - 1.0) >= 1e-3) out.push_back(q);
  }
  return out;
}

CheckReport check_intertwining_1d(const std::vector<cplx>& qs, double tol) {
  CheckReport r;
  r.check = "rmatrix_intertwining_1d";
  r.add_size({1, 2});
  for (cplx q : qs)
    for (const char* g : {"S+", "S-"}) {
      const Eigen::Matrix4cd R = r_matrix(q);
      r.add(std::string(g) + " " + q_label(q),
            dense_diff(R * delta_op(g, q), delta_perm(g, q) * R), tol);
    }
  return r;
}

CheckReport check_intertwining_2d(const std::vector<cplx>& qs, double tol) {
  CheckReport r;
  r.check = "rmatrix_intertwining_2d";
  r.add_size({2, 2});
  for (cplx q : qs) {
    const Eigen::MatrixXcd R = r2d(q);
    for (const char* g : {"S+", "S-"})
      r.add(std::string(g) + " " + q_label(q),
            dense_diff(R * boxplus_op(g, q, 2, 2).dense(), boxplus_perm(g, q) * R), tol);
  }
  return r;
}

CheckReport check_r_forms(const std::vector<cplx>& qs, double tol) {
  CheckReport r;
  r.check = "rmatrix_forms";
  r.add_size({1, 2});
  r.add_size({2, 2});
  r.add("R2d(1) = 1", dense_diff(r2d(1.0), Eigen::MatrixXcd::Identity(16, 16)), tol);
  for (cplx q : qs) {
    r.add("closed = factorized " + q_label(q), dense_diff(r_matrix(q), r_matrix_factorized(q)), tol);
    const Eigen::MatrixXcd R = r2d(q);
    Eigen::MatrixXcd inv = r_pair(q, 1, 2, true) * r_pair(q, 3, 4, true) * r_pair(q, 2, 3) * r_pair(q, 1, 3) *
                           r_pair(q, 2, 4) * r_pair(q, 1, 4);
    r.add("R2d invertible " + q_label(q), dense_diff(R * inv, Eigen::MatrixXcd::Identity(16, 16)), tol);
  }
  return r;
}

CheckReport check_classical_identities(double tol) {
  CheckReport r;
  r.check = "classical_identities";
  r.add_size({1, 2});
  r.add_size({2, 2});
  const Eigen::Matrix4cd cr = classical_r();
  const auto s = spin_half_rep(1.0);
  Eigen::Matrix4cd formula = 0.25 * Eigen::Matrix4cd::Identity() + kron4(s.sz, s.sz) + kron4(s.sp, s.sm);
  r.add("r = 1/4 + Sz Sz + S+ S-", dense_diff(cr, formula), tol);
  const std::vector<std::pair<int, int>> pairs = {{1, 2}, {3, 4}, {1, 4}, {1, 3}, {2, 3}, {2, 4}};
  const Eigen::MatrixXcd r2 = classical_r2d();
  for (const char* g : {"S+", "S-"}) {
    const Eigen::Matrix2cd& gm = generator(s, g);
    Eigen::Matrix4cd sum1 = kron4(gm, s.id) + kron4(s.id, gm);
    Eigen::Matrix4cd a1 = -kron4(gm, s.sz) + kron4(s.sz, gm);
    r.add(std::string("[r12, S1+S2] = A12 two-site ") + g, dense_diff(cr * sum1 - sum1 * cr, a1), tol);
    Eigen::MatrixXcd total = Eigen::MatrixXcd::Zero(16, 16);
    for (int i = 1; i <= 4; ++i) total += embed_site(gm, i);
    for (auto [i, j] : pairs) {
      Eigen::MatrixXcd rij = embed_pair(cr, i, j), sij = embed_site(gm, i) + embed_site(gm, j);
      r.add("[r" + std::to_string(i) + std::to_string(j) + ", S+S] = A " + g, dense_diff(rij * sij - sij * rij, a_pair(g, i, j)),
            tol);
    }
    Eigen::MatrixXcd comm = r2 * total - total * r2;
    Eigen::MatrixXcd combo = a_pair(g, 1, 2) + a_pair(g, 3, 4) - a_pair(g, 1, 4) - a_pair(g, 1, 3) - a_pair(g, 2, 3) -
                             a_pair(g, 2, 4);
    r.add(std::string("[r2d, sum S] = A combination ") + g, dense_diff(comm, combo), tol);
    r.add(std::string("[r2d, sum S] = site-by-site form ") + g, dense_diff(comm, first_order_rhs(g)), tol);
  }
  return r;
}

// ---------------------------------------------------------------------------

SemiclassicalFit semiclassical_fit_1d(const std::vector<double>& hs) {
  SemiclassicalFit f;
  f.name = "R vs r";
  f.h = hs;
  for (double h : hs) {
    Eigen::MatrixXcd quotient = (r_matrix(std::exp(h)) - Eigen::Matrix4cd::Identity()) / (2.0 * h);
    f.error.push_back(dense_diff(quotient, classical_r()));
  }
  f.slope = fit_slope(f.h, f.error);
  return f;
}

SemiclassicalFit semiclassical_fit_2d(const std::vector<double>& hs) {
  SemiclassicalFit f;
  f.name = "R2d vs r2d";
  f.h = hs;
  const Eigen::MatrixXcd target = without_trace(classical_r2d());
  for (double h : hs) {
    Eigen::MatrixXcd quotient = (r2d(std::exp(h)) - Eigen::MatrixXcd::Identity(16, 16)) / (2.0 * h);
    f.error.push_back(dense_diff(without_trace(quotient), target));
  }
  f.slope = fit_slope(f.h, f.error);
  return f;
}

nlohmann::json to_json(const SemiclassicalFit& f) {
  return {{"name", f.name}, {"h", f.h}, {"error", f.error}, {"slope", f.slope}};
}

CheckReport check_semiclassical(const std::vector<double>& hs) {
  if (hs.size() < 4) throw ConfigError("the semiclassical fit needs at least four h values");
  for (double h : hs)
    if (!(h > 1e-4 && h < 0.3)) throw ConfigError("h values must lie in (1e-4, 0.3)");
  CheckReport r;
  r.check = "semiclassical";
  r.add_size({1, 2});
  r.add_size({2, 2});
  for (const auto& f : {semiclassical_fit_1d(hs), semiclassical_fit_2d(hs)}) {
    // Residual: distance of the fitted slope from first order.
    const double dev = std::abs(f.slope - 1.0);
    std::ostringstream note;
    note.precision(6);
    note << "slope=" << f.slope;
    r.add(f.name, dev, 0.1, note.str());
  }
  return r;
}

}  // namespace lat2d
