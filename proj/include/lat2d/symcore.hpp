#pragma once

// Formal sums of symbol grids on an n x m square lattice.
//
// Site order: the linear index of the site in row i (counted from the bottom,
// 1-based) and column j (1-based) is (i-1)*m + j.  Cells are stored in this
// order, i.e. bottom row first, left to right.  When a grid is evaluated in a
// representation, site 1 is the leftmost Kronecker factor.

#include <complex>
#include <cstddef>
#include <iosfwd>
#include <map>
#include <string>
#include <utility>
#include <vector>

#include <Eigen/Dense>
#include <Eigen/Sparse>
#include <json.hpp>

#include "lat2d/errors.hpp"

namespace lat2d {

using cplx = std::complex<double>;

// Coefficients with magnitude below this are dropped from formal sums.
inline constexpr double kCanonEps = 1e-14;
// Default tolerance for comparing formal sums and operators.
inline constexpr double kDefaultTol = 1e-10;

struct Shape {
  int rows = 1;
  int cols = 1;

  int sites() const { return rows * cols; }
  auto operator<=>(const Shape&) const = default;
};

std::string to_string(const Shape& s);  // "NxM"
Shape parse_shape(const std::string& text);

// Linear index (1-based) of the site in row i from the bottom and column j.
int site_index(int i, int j, const Shape& shape);

// One lattice configuration: a symbol name per site, in linear site order.
struct GridWord {
  Shape shape;
  std::vector<std::string> cells;

  GridWord() = default;
  GridWord(Shape s, std::vector<std::string> c);

  const std::string& at(int i, int j) const;
  GridWord column(int j) const;
  GridWord row(int i) const;
  bool contains(const std::string& sym) const;
  int count(const std::string& sym) const;

  auto operator<=>(const GridWord&) const = default;
};

// Builders for readable literals.
GridWord make_column(std::vector<std::string> bottom_to_top);
GridWord make_row(std::vector<std::string> left_to_right);
// Rows are listed top row first, the way grids are usually drawn.
GridWord grid_from_rows(const std::vector<std::vector<std::string>>& top_to_bottom);
GridWord uniform_word(Shape shape, const std::string& sym);

// A finite complex combination of grid words sharing one shape.  Terms are
// kept in a std::map so that iteration order (and hence every report) is
// deterministic: words are ordered lexicographically by their cell names.
class FormalSum {
 public:
  using Cells = std::vector<std::string>;
  using TermMap = std::map<Cells, cplx>;

  explicit FormalSum(Shape shape = {});
  static FormalSum of(const GridWord& w, cplx c = 1.0);

  const Shape& shape() const { return shape_; }
  const TermMap& terms() const& { return terms_; }
  // By value on temporaries, so `for (auto& t : f().terms())` is safe.
  TermMap terms() && { return std::move(terms_); }
  std::size_t size() const { return terms_.size(); }
  bool empty() const { return terms_.empty(); }

  // Coefficient of a word (0 if absent).
  cplx coeff(const Cells& cells) const;
  void add_term(const Cells& cells, cplx c);
  void add_term(const GridWord& w, cplx c) { add_term(w.cells, c); }

  FormalSum& operator+=(const FormalSum& other);
  FormalSum& operator*=(cplx c);

 private:
  void drop_small();

  Shape shape_;
  TermMap terms_;
};

FormalSum sum_add(const FormalSum& a, const FormalSum& b);
FormalSum sum_scale(const FormalSum& a, cplx c);
FormalSum operator+(const FormalSum& a, const FormalSum& b);
FormalSum operator-(const FormalSum& a, const FormalSum& b);
FormalSum operator*(cplx c, const FormalSum& a);

// Bilinear juxtaposition: concat_h puts b to the right of a (equal row
// counts), concat_v puts b on top of a (equal column counts).
FormalSum concat_h(const FormalSum& a, const FormalSum& b);
FormalSum concat_v(const FormalSum& a, const FormalSum& b);
GridWord concat_h(const GridWord& a, const GridWord& b);
GridWord concat_v(const GridWord& a, const GridWord& b);

// Sub-blocks of a word: columns [j0, j1] or rows [i0, i1] (1-based, inclusive).
GridWord column_block(const GridWord& w, int j0, int j1);
GridWord row_block(const GridWord& w, int i0, int i1);

// Largest coefficient mismatch over the union of terms; +inf on shape mismatch.
double max_coeff_diff(const FormalSum& a, const FormalSum& b);
bool sums_equal(const FormalSum& a, const FormalSum& b, double tol = kDefaultTol);

std::string to_string(const GridWord& w);  // rows top-first: "(a v / b b)"
std::string to_string(const FormalSum& s);
std::ostream& operator<<(std::ostream& os, const FormalSum& s);

nlohmann::json to_json(const FormalSum& s);
FormalSum formal_sum_from_json(const nlohmann::json& j);

// ---------------------------------------------------------------------------
// Numeric evaluation.

struct Representation {
  std::vector<std::string> alphabet;
  int dim = 0;
  std::map<std::string, Eigen::MatrixXcd> matrices;

  const Eigen::MatrixXcd& matrix(const std::string& sym) const;
  void validate() const;
};

// Sparse complex matrix acting on the d^{nm}-dimensional lattice space.
struct SparseOperator {
  using Matrix = Eigen::SparseMatrix<cplx>;

  Matrix m;

  SparseOperator() = default;
  explicit SparseOperator(Matrix mat) : m(std::move(mat)) {}
  static SparseOperator zero(Eigen::Index dim);
  static SparseOperator identity(Eigen::Index dim);
  static SparseOperator from_dense(const Eigen::MatrixXcd& d, double eps = kCanonEps);

  Eigen::Index dim() const { return m.rows(); }
  Eigen::Index nnz() const { return m.nonZeros(); }
  Eigen::MatrixXcd dense() const { return Eigen::MatrixXcd(m); }
  // Removes explicit entries with magnitude below eps.
  void prune(double eps = kCanonEps);
};

SparseOperator operator+(const SparseOperator& a, const SparseOperator& b);
SparseOperator operator-(const SparseOperator& a, const SparseOperator& b);
SparseOperator operator*(const SparseOperator& a, const SparseOperator& b);
SparseOperator operator*(cplx c, const SparseOperator& a);

// Max-abs-entry norm, the matrix norm used throughout.
double max_abs(const SparseOperator& a);
double max_abs(const Eigen::MatrixXcd& a);
double max_abs_diff(const SparseOperator& a, const SparseOperator& b);

// Default cap on the lattice Hilbert-space dimension for evaluation.
inline constexpr long kDefaultDimCap = 1L << 16;

SparseOperator evaluate(const FormalSum& s, const Representation& rep,
                        long dim_cap = kDefaultDimCap);
// Kronecker product of per-site matrices; factor 0 is the leftmost.
SparseOperator kron_sites(const std::vector<Eigen::MatrixXcd>& factors);

// Matrix Market coordinate format, complex general, 1-based indices.
void write_matrix_market(std::ostream& os, const SparseOperator& op);
SparseOperator read_matrix_market(std::istream& is);

}  // namespace lat2d
