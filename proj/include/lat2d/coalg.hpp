#pragma once

// The 2D coproduct engine: splitters for columns (x direction) and rows
// (y direction), growth of boxplus^{n,m}, and machine checks of the axioms.
//
// Tensor-factor convention: an x splitter maps an n x 1 column to a sum of
// n x 2 grids whose left column is the first tensor factor; a y splitter maps
// a 1 x m row to 2 x m grids whose bottom row is the first tensor factor.

#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "lat2d/symcore.hpp"

namespace lat2d {

enum class Dir { X, Y };
std::string to_string(Dir d);

using SplitFn = std::function<FormalSum(const GridWord&)>;
using CounitFn = std::function<cplx(const GridWord&)>;
using AntipodeFn = std::function<FormalSum(const GridWord&)>;
// Enumerates the declared domain of a splitter at boundary length len.
using DomainFn = std::function<std::vector<GridWord>(int len)>;
// Structure constants: product of two symbols as a 1x1 formal sum.
using MultiplyFn = std::function<FormalSum(const std::string&, const std::string&)>;

// A polynomial identity sum_k coeff_k * (f_k1 f_k2 ...) = 0 between algebra
// generators; checked on the lattice by replacing every generator s with
// boxplus(s) and multiplying operators.
struct Relation {
  struct Term {
    cplx coeff;
    std::vector<std::string> factors;
  };
  std::string name;
  std::vector<Term> terms;
};

struct CoalgebraExample {
  std::string name;
  std::vector<std::string> alphabet;
  // Symbols boxplus is grown from in the checks.
  std::vector<std::string> generators;
  SplitFn split_x, split_y;
  CounitFn counit_x, counit_y;
  DomainFn domain_x, domain_y;
  // Optional data; empty std::function means "not provided".
  AntipodeFn antipode_x, antipode_y;
  MultiplyFn multiply;
  std::vector<Relation> relations;
  std::optional<std::string> unit;
  std::function<Representation()> representation;
};

FormalSum apply_splitter(const CoalgebraExample& ex, Dir dir, const GridWord& w);
cplx apply_counit(const CoalgebraExample& ex, Dir dir, const GridWord& w);
FormalSum apply_antipode(const CoalgebraExample& ex, Dir dir, const GridWord& w);
std::vector<GridWord> domain_words(const CoalgebraExample& ex, Dir dir, int len);

// Replaces column j (resp. row i) of every term by its splitter image.
FormalSum split_column(const CoalgebraExample& ex, const FormalSum& s, int j);
FormalSum split_row(const CoalgebraExample& ex, const FormalSum& s, int i);

// Grows sym along a move string: 'x' splits the rightmost column, 'X' the
// leftmost, 'y' the top row and 'Y' the bottom row.
FormalSum grow(const CoalgebraExample& ex, const std::string& sym, const std::string& moves);
// Canonical order: columns first (y to height n), then rows (x to width m).
std::string canonical_moves(int n, int m);
// All interleavings of (n-1) 'y' and (m-1) 'x' moves, in lexicographic order.
std::vector<std::string> growth_orders(int n, int m);

FormalSum boxplus(const CoalgebraExample& ex, const std::string& sym, int n, int m);

// ---------------------------------------------------------------------------
// Reports

struct InstanceResult {
  std::string input;
  bool pass = false;
  std::optional<double> residual;  // empty when the instance raised an error
  std::string note;
};

struct CheckReport {
  std::string check;
  std::vector<Shape> sizes;
  std::vector<InstanceResult> instances;
  double elapsed_ms = 0.0;  // informational; never serialized

  bool passed() const;
  std::optional<double> max_residual() const;
  void add(std::string input, std::optional<double> residual, double tol, std::string note = {});
  void add_size(Shape s);
  void merge(const CheckReport& other);
};

nlohmann::json to_json(const CheckReport& r);

// ---------------------------------------------------------------------------
// Axiom checks.  When words is empty the splitter's declared domain is used.

CheckReport check_quasi_1d_assoc(const CoalgebraExample& ex, Dir dir, int len,
                                 std::vector<GridWord> words = {}, double tol = kDefaultTol);
CheckReport check_counit(const CoalgebraExample& ex, Dir dir, int len, std::vector<GridWord> words = {},
                         double tol = kDefaultTol);
// For every generator, compares boxplus along every growth order (and the
// canonical order with first-boundary splits) against the canonical order.
CheckReport check_xy_compat(const CoalgebraExample& ex, int n, int m, double tol = kDefaultTol);

// Evaluates the example's relations (optionally only those named) with every
// generator replaced by its n x m lattice image.
CheckReport check_homomorphism(const CoalgebraExample& ex, const Representation& rep, int n, int m,
                               const std::vector<std::string>& relation_names = {}, double tol = kDefaultTol);
// mu(S (x) 1) split(w) = eps(w) * 1 and mu(1 (x) S) split(w) = eps(w) * 1.
CheckReport check_antipode(const CoalgebraExample& ex, const Representation& rep, Dir dir, int len,
                           std::vector<GridWord> words = {}, double tol = kDefaultTol);

// ---------------------------------------------------------------------------
// Dual algebra: a grid of site functionals evaluated on boxplus(v).

enum class Gathering { Rows, Cols };

// functionals[k] is the functional on linear site k+1, given by its values on
// symbols (absent symbols evaluate to 0).  Gathering by columns contracts the
// column functionals against the x-grown sum (columns are built first);
// gathering by rows uses the growth order that builds rows first.
cplx dual_product(const std::vector<std::map<std::string, cplx>>& functionals, const CoalgebraExample& ex,
                  const std::string& v, int n, int m, Gathering gathering);

// ---------------------------------------------------------------------------
// The co-commutativity proposition for one-site coproducts.

struct SweedlerTerm {
  cplx coeff;
  std::string left, right;
};
using SiteCoproduct = std::function<std::vector<SweedlerTerm>(const std::string&)>;

struct PropositionReport {
  bool premise_holds = false;
  bool conclusion_holds = false;
  CheckReport premise;     // (Dy (x) Dy) o Dx = (Dx (x) Dx) o Dy per instance
  CheckReport conclusion;  // Dx = Dy and D = D^op per premise-holding instance
};

PropositionReport check_trivial_proposition(const SiteCoproduct& dx, const SiteCoproduct& dy,
                                            const std::vector<std::string>& instances, double tol = kDefaultTol);

// Compares the three growth orders z.y.x, y.z.x and x.y.z of the 3D pivot
// example on a 2x2x2 cube for the symbol sym (one of a, b, v).
CheckReport cube_xyz_compat(const std::string& sym, double tol = kDefaultTol);

}  // namespace lat2d
