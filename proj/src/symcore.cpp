#include "lat2d/symcore.hpp"

#include <algorithm>
#include <cmath>
#include <iomanip>
#include <limits>
#include <sstream>

namespace lat2d {

std::string to_string(const Shape& s) {
  return std::to_string(s.rows) + "x" + std::to_string(s.cols);
}

Shape parse_shape(const std::string& text) {
  auto pos = text.find_first_of("xX");
  if (pos == std::string::npos) throw ConfigError("bad size '" + text + "', expected NxM");
  try {
    std::size_t used_n = 0, used_m = 0;
    std::string ns = text.substr(0, pos), ms = text.substr(pos + 1);
    int n = std::stoi(ns, &used_n);
    int m = std::stoi(ms, &used_m);
    if (used_n != ns.size() || used_m != ms.size() || n < 1 || m < 1) throw std::invalid_argument("");
    return {n, m};
  } catch (const std::exception&) {
    throw ConfigError("bad size '" + text + "', expected NxM with N, M >= 1");
  }
}

int site_index(int i, int j, const Shape& shape) {
  if (i < 1 || i > shape.rows || j < 1 || j > shape.cols)
    throw RangeError("site (" + std::to_string(i) + "," + std::to_string(j) + ") outside " +
                     to_string(shape));
  return (i - 1) * shape.cols + j;
}

// ---------------------------------------------------------------------------
// GridWord

GridWord::GridWord(Shape s, std::vector<std::string> c) : shape(s), cells(std::move(c)) {
  if (s.rows < 1 || s.cols < 1) throw ShapeError("grid shape must be at least 1x1");
  if (static_cast<int>(cells.size()) != s.sites())
    throw ShapeError("grid " + to_string(s) + " needs " + std::to_string(s.sites()) + " cells, got " +
                     std::to_string(cells.size()));
}

const std::string& GridWord::at(int i, int j) const { return cells[site_index(i, j, shape) - 1]; }

GridWord GridWord::column(int j) const { return column_block(*this, j, j); }

GridWord GridWord::row(int i) const { return row_block(*this, i, i); }

bool GridWord::contains(const std::string& sym) const {
  return std::find(cells.begin(), cells.end(), sym) != cells.end();
}

int GridWord::count(const std::string& sym) const {
  return static_cast<int>(std::count(cells.begin(), cells.end(), sym));
}

GridWord make_column(std::vector<std::string> bottom_to_top) {
  int n = static_cast<int>(bottom_to_top.size());
  return GridWord({n, 1}, std::move(bottom_to_top));
}

GridWord make_row(std::vector<std::string> left_to_right) {
  int m = static_cast<int>(left_to_right.size());
  return GridWord({1, m}, std::move(left_to_right));
}

GridWord grid_from_rows(const std::vector<std::vector<std::string>>& top_to_bottom) {
  if (top_to_bottom.empty()) throw ShapeError("empty grid literal");
  int n = static_cast<int>(top_to_bottom.size());
  int m = static_cast<int>(top_to_bottom.front().size());
  std::vector<std::string> cells;
  cells.reserve(static_cast<std::size_t>(n * m));
  for (int r = n - 1; r >= 0; --r) {
    if (static_cast<int>(top_to_bottom[r].size()) != m) throw ShapeError("ragged grid literal");
    cells.insert(cells.end(), top_to_bottom[r].begin(), top_to_bottom[r].end());
  }
  return GridWord({n, m}, std::move(cells));
}

GridWord uniform_word(Shape shape, const std::string& sym) {
  return GridWord(shape, std::vector<std::string>(static_cast<std::size_t>(shape.sites()), sym));
}

GridWord concat_h(const GridWord& a, const GridWord& b) {
  if (a.shape.rows != b.shape.rows)
    throw ShapeError("concat_h: row counts differ (" + to_string(a.shape) + " vs " + to_string(b.shape) + ")");
  Shape s{a.shape.rows, a.shape.cols + b.shape.cols};
  std::vector<std::string> cells;
  cells.reserve(static_cast<std::size_t>(s.sites()));
  for (int i = 1; i <= s.rows; ++i) {
    for (int j = 1; j <= a.shape.cols; ++j) cells.push_back(a.at(i, j));
    for (int j = 1; j <= b.shape.cols; ++j) cells.push_back(b.at(i, j));
  }
  return GridWord(s, std::move(cells));
}

GridWord concat_v(const GridWord& a, const GridWord& b) {
  if (a.shape.cols != b.shape.cols)
    throw ShapeError("concat_v: column counts differ (" + to_string(a.shape) + " vs " + to_string(b.shape) + ")");
  // Bottom-first storage makes vertical stacking a plain append.
  std::vector<std::string> cells = a.cells;
  cells.insert(cells.end(), b.cells.begin(), b.cells.end());
  return GridWord({a.shape.rows + b.shape.rows, a.shape.cols}, std::move(cells));
}

GridWord column_block(const GridWord& w, int j0, int j1) {
  if (j0 < 1 || j1 > w.shape.cols || j0 > j1) throw RangeError("column block out of range");
  std::vector<std::string> cells;
  for (int i = 1; i <= w.shape.rows; ++i)
    for (int j = j0; j <= j1; ++j) cells.push_back(w.at(i, j));
  return GridWord({w.shape.rows, j1 - j0 + 1}, std::move(cells));
}

GridWord row_block(const GridWord& w, int i0, int i1) {
  if (i0 < 1 || i1 > w.shape.rows || i0 > i1) throw RangeError("row block out of range");
  auto first = w.cells.begin() + (i0 - 1) * w.shape.cols;
  auto last = w.cells.begin() + i1 * w.shape.cols;
  return GridWord({i1 - i0 + 1, w.shape.cols}, std::vector<std::string>(first, last));
}

// ---------------------------------------------------------------------------
// FormalSum

FormalSum::FormalSum(Shape shape) : shape_(shape) {
  if (shape.rows < 1 || shape.cols < 1) throw ShapeError("formal sum shape must be at least 1x1");
}

FormalSum FormalSum::of(const GridWord& w, cplx c) {
  FormalSum s(w.shape);
  s.add_term(w.cells, c);
  return s;
}

cplx FormalSum::coeff(const Cells& cells) const {
  auto it = terms_.find(cells);
  return it == terms_.end() ? cplx(0.0) : it->second;
}

void FormalSum::add_term(const Cells& cells, cplx c) {
  if (static_cast<int>(cells.size()) != shape_.sites())
    throw ShapeError("term with " + std::to_string(cells.size()) + " cells added to " + to_string(shape_) + " sum");
  auto [it, inserted] = terms_.try_emplace(cells, c);
  if (!inserted) it->second += c;
  if (std::abs(it->second) < kCanonEps) terms_.erase(it);
}

FormalSum& FormalSum::operator+=(const FormalSum& other) {
  if (other.shape_ != shape_)
    throw ShapeError("cannot add " + to_string(other.shape_) + " sum to " + to_string(shape_) + " sum");
  for (const auto& [cells, c] : other.terms_) add_term(cells, c);
  return *this;
}

FormalSum& FormalSum::operator*=(cplx c) {
  for (auto& kv : terms_) kv.second *= c;
  drop_small();
  return *this;
}

void FormalSum::drop_small() {
  std::erase_if(terms_, [](const auto& kv) { return std::abs(kv.second) < kCanonEps; });
}

FormalSum sum_add(const FormalSum& a, const FormalSum& b) {
  FormalSum r = a;
  r += b;
  return r;
}

FormalSum sum_scale(const FormalSum& a, cplx c) {
  FormalSum r = a;
  r *= c;
  return r;
}

FormalSum operator+(const FormalSum& a, const FormalSum& b) { return sum_add(a, b); }
FormalSum operator-(const FormalSum& a, const FormalSum& b) { return sum_add(a, sum_scale(b, -1.0)); }
FormalSum operator*(cplx c, const FormalSum& a) { return sum_scale(a, c); }

FormalSum concat_h(const FormalSum& a, const FormalSum& b) {
  if (a.shape().rows != b.shape().rows)
    throw ShapeError("concat_h: row counts differ (" + to_string(a.shape()) + " vs " + to_string(b.shape()) + ")");
  FormalSum r({a.shape().rows, a.shape().cols + b.shape().cols});
  for (const auto& [ca, xa] : a.terms())
    for (const auto& [cb, xb] : b.terms())
      r.add_term(concat_h(GridWord(a.shape(), ca), GridWord(b.shape(), cb)), xa * xb);
  return r;
}

FormalSum concat_v(const FormalSum& a, const FormalSum& b) {
  if (a.shape().cols != b.shape().cols)
    throw ShapeError("concat_v: column counts differ (" + to_string(a.shape()) + " vs " + to_string(b.shape()) + ")");
  FormalSum r({a.shape().rows + b.shape().rows, a.shape().cols});
  for (const auto& [ca, xa] : a.terms())
    for (const auto& [cb, xb] : b.terms())
      r.add_term(concat_v(GridWord(a.shape(), ca), GridWord(b.shape(), cb)), xa * xb);
  return r;
}

double max_coeff_diff(const FormalSum& a, const FormalSum& b) {
  if (a.shape() != b.shape()) return std::numeric_limits<double>::infinity();
  double worst = 0.0;
  for (const auto& [cells, c] : a.terms()) worst = std::max(worst, std::abs(c - b.coeff(cells)));
  for (const auto& [cells, c] : b.terms())
    if (!a.terms().count(cells)) worst = std::max(worst, std::abs(c));
  return worst;
}

bool sums_equal(const FormalSum& a, const FormalSum& b, double tol) {
  return a.shape() == b.shape() && max_coeff_diff(a, b) <= tol;
}

std::string to_string(const GridWord& w) {
  std::string out = "(";
  for (int i = w.shape.rows; i >= 1; --i) {
    for (int j = 1; j <= w.shape.cols; ++j) {
      out += w.at(i, j);
      if (j < w.shape.cols) out += ' ';
    }
    if (i > 1) out += " / ";
  }
  return out + ")";
}

static std::string format_coeff(cplx c) {
  std::ostringstream os;
  os << std::setprecision(6);
  if (std::abs(c.imag()) < kCanonEps) {
    os << c.real();
  } else {
    os << "(" << c.real() << (c.imag() < 0 ? "-" : "+") << std::abs(c.imag()) << "i)";
  }
  return os.str();
}

std::string to_string(const FormalSum& s) {
  if (s.empty()) return "0";
  std::string out;
  for (const auto& [cells, c] : s.terms()) {
    if (!out.empty()) out += " + ";
    if (std::abs(c - cplx(1.0)) > kCanonEps) out += format_coeff(c) + "*";
    out += to_string(GridWord(s.shape(), cells));
  }
  return out;
}

std::ostream& operator<<(std::ostream& os, const FormalSum& s) { return os << to_string(s); }

nlohmann::json to_json(const FormalSum& s) {
  nlohmann::json terms = nlohmann::json::array();
  for (const auto& [cells, c] : s.terms())
    terms.push_back({{"cells", cells}, {"re", c.real()}, {"im", c.imag()}});
  return {{"shape", {s.shape().rows, s.shape().cols}}, {"terms", terms}};
}

FormalSum formal_sum_from_json(const nlohmann::json& j) {
  try {
    Shape shape{j.at("shape").at(0).get<int>(), j.at("shape").at(1).get<int>()};
    FormalSum s(shape);
    for (const auto& t : j.at("terms"))
      s.add_term(t.at("cells").get<std::vector<std::string>>(),
                 cplx(t.at("re").get<double>(), t.value("im", 0.0)));
    return s;
  } catch (const nlohmann::json::exception& e) {
    throw ConfigError(std::string("malformed formal sum JSON: ") + e.what());
  }
}

// ---------------------------------------------------------------------------
// Representation and sparse operators

const Eigen::MatrixXcd& Representation::matrix(const std::string& sym) const {
  auto it = matrices.find(sym);
  if (it == matrices.end()) throw RepresentationError("symbol '" + sym + "' has no matrix in the representation");
  return it->second;
}

void Representation::validate() const {
  if (dim < 1) throw RepresentationError("representation dimension must be positive");
  for (const auto& s : alphabet) {
    const auto& mat = matrix(s);
    if (mat.rows() != dim || mat.cols() != dim)
      throw RepresentationError("matrix of '" + s + "' is not " + std::to_string(dim) + "x" + std::to_string(dim));
  }
}

SparseOperator SparseOperator::zero(Eigen::Index dim) { return SparseOperator(Matrix(dim, dim)); }

SparseOperator SparseOperator::identity(Eigen::Index dim) {
  Matrix id(dim, dim);
  id.setIdentity();
  return SparseOperator(std::move(id));
}

SparseOperator SparseOperator::from_dense(const Eigen::MatrixXcd& d, double eps) {
  std::vector<Eigen::Triplet<cplx>> trip;
  for (Eigen::Index c = 0; c < d.cols(); ++c)
    for (Eigen::Index r = 0; r < d.rows(); ++r)
      if (std::abs(d(r, c)) >= eps) trip.emplace_back(r, c, d(r, c));
  Matrix m(d.rows(), d.cols());
  m.setFromTriplets(trip.begin(), trip.end());
  return SparseOperator(std::move(m));
}

void SparseOperator::prune(double eps) {
  m.prune([eps](Eigen::Index, Eigen::Index, const cplx& v) { return std::abs(v) >= eps; });
  m.makeCompressed();
}

static void require_same_dim(const SparseOperator& a, const SparseOperator& b) {
  if (a.dim() != b.dim())
    throw ShapeError("operator dimensions differ: " + std::to_string(a.dim()) + " vs " + std::to_string(b.dim()));
}

SparseOperator operator+(const SparseOperator& a, const SparseOperator& b) {
  require_same_dim(a, b);
  SparseOperator r(a.m + b.m);
  r.prune();
  return r;
}

SparseOperator operator-(const SparseOperator& a, const SparseOperator& b) {
  require_same_dim(a, b);
  SparseOperator r(a.m - b.m);
  r.prune();
  return r;
}

SparseOperator operator*(const SparseOperator& a, const SparseOperator& b) {
  require_same_dim(a, b);
  SparseOperator r(SparseOperator::Matrix(a.m * b.m));
  r.prune();
  return r;
}

SparseOperator operator*(cplx c, const SparseOperator& a) {
  SparseOperator r(SparseOperator::Matrix(c * a.m));
  r.prune();
  return r;
}

double max_abs(const SparseOperator& a) {
  double worst = 0.0;
  for (Eigen::Index k = 0; k < a.m.outerSize(); ++k)
    for (SparseOperator::Matrix::InnerIterator it(a.m, k); it; ++it) worst = std::max(worst, std::abs(it.value()));
  return worst;
}

double max_abs(const Eigen::MatrixXcd& a) { return a.size() == 0 ? 0.0 : a.cwiseAbs().maxCoeff(); }

double max_abs_diff(const SparseOperator& a, const SparseOperator& b) {
  require_same_dim(a, b);
  return max_abs(SparseOperator(SparseOperator::Matrix(a.m - b.m)));
}

namespace {

struct Entry {
  Eigen::Index row, col;
  cplx val;
};

std::vector<Entry> nonzeros(const Eigen::MatrixXcd& m) {
  std::vector<Entry> out;
  for (Eigen::Index r = 0; r < m.rows(); ++r)
    for (Eigen::Index c = 0; c < m.cols(); ++c)
      if (m(r, c) != cplx(0.0)) out.push_back({r, c, m(r, c)});
  return out;
}

// Appends the nonzeros of factors[0] (x) factors[1] (x) ... scaled by coef.
void kron_triplets(const std::vector<const std::vector<Entry>*>& factors, const std::vector<Eigen::Index>& dims,
                   cplx coef, std::vector<Eigen::Triplet<cplx>>& out) {
  struct Frame {
    Eigen::Index row, col;
    cplx val;
  };
  std::vector<Frame> cur{{0, 0, coef}}, next;
  for (std::size_t k = 0; k < factors.size(); ++k) {
    next.clear();
    next.reserve(cur.size() * factors[k]->size());
    for (const auto& f : cur)
      for (const auto& e : *factors[k]) next.push_back({f.row * dims[k] + e.row, f.col * dims[k] + e.col, f.val * e.val});
    std::swap(cur, next);
  }
  for (const auto& f : cur) out.emplace_back(f.row, f.col, f.val);
}

}  // namespace

SparseOperator kron_sites(const std::vector<Eigen::MatrixXcd>& factors) {
  Eigen::Index dim = 1;
  std::vector<std::vector<Entry>> nz;
  std::vector<const std::vector<Entry>*> ptrs;
  std::vector<Eigen::Index> dims;
  for (const auto& f : factors) {
    if (f.rows() != f.cols()) throw ShapeError("kron_sites: factors must be square");
    dim *= f.rows();
    dims.push_back(f.rows());
    nz.push_back(nonzeros(f));
  }
  for (const auto& v : nz) ptrs.push_back(&v);
  std::vector<Eigen::Triplet<cplx>> trip;
  kron_triplets(ptrs, dims, 1.0, trip);
  SparseOperator::Matrix m(dim, dim);
  m.setFromTriplets(trip.begin(), trip.end());
  SparseOperator r(std::move(m));
  r.prune();
  return r;
}

SparseOperator evaluate(const FormalSum& s, const Representation& rep, long dim_cap) {
  const int sites = s.shape().sites();
  double dimf = std::pow(static_cast<double>(rep.dim), sites);
  if (dimf > static_cast<double>(dim_cap))
    throw ResourceError("evaluation of a " + to_string(s.shape()) + " sum needs dimension " +
                        std::to_string(static_cast<long long>(dimf)) + " > cap " + std::to_string(dim_cap));
  const auto dim = static_cast<Eigen::Index>(dimf);

  std::map<std::string, std::vector<Entry>> cache;
  auto entries_of = [&](const std::string& sym) -> const std::vector<Entry>& {
    auto it = cache.find(sym);
    if (it == cache.end()) {
      const auto& mat = rep.matrix(sym);
      if (mat.rows() != rep.dim || mat.cols() != rep.dim)
        throw RepresentationError("matrix of '" + sym + "' has the wrong size");
      it = cache.emplace(sym, nonzeros(mat)).first;
    }
    return it->second;
  };

  std::vector<Eigen::Triplet<cplx>> trip;
  std::vector<Eigen::Index> dims(static_cast<std::size_t>(sites), rep.dim);
  for (const auto& [cells, c] : s.terms()) {
    std::vector<const std::vector<Entry>*> ptrs;
    for (const auto& sym : cells) ptrs.push_back(&entries_of(sym));
    kron_triplets(ptrs, dims, c, trip);
  }
  SparseOperator::Matrix m(dim, dim);
  m.setFromTriplets(trip.begin(), trip.end());
  SparseOperator r(std::move(m));
  r.prune();
  return r;
}

void write_matrix_market(std::ostream& os, const SparseOperator& op) {
  // Entries are written in row-major order so the output is independent of
  // Eigen's internal storage order.
  std::vector<Entry> entries;
  for (Eigen::Index k = 0; k < op.m.outerSize(); ++k)
    for (SparseOperator::Matrix::InnerIterator it(op.m, k); it; ++it)
      entries.push_back({it.row(), it.col(), it.value()});
  std::sort(entries.begin(), entries.end(),
            [](const Entry& a, const Entry& b) { return a.row != b.row ? a.row < b.row : a.col < b.col; });
  os << "%%MatrixMarket matrix coordinate complex general\n";
  os << op.m.rows() << " " << op.m.cols() << " " << entries.size() << "\n";
  os << std::setprecision(17);
  for (const auto& e : entries) os << e.row + 1 << " " << e.col + 1 << " " << e.val.real() << " " << e.val.imag() << "\n";
}

SparseOperator read_matrix_market(std::istream& is) {
  std::string line;
  if (!std::getline(is, line) || line.rfind("%%MatrixMarket matrix coordinate complex general", 0) != 0)
    throw ConfigError("unsupported Matrix Market header: " + line);
  while (std::getline(is, line) && (line.empty() || line[0] == '%')) {
  }
  std::istringstream dims(line);
  long rows = 0, cols = 0, nnz = 0;
  if (!(dims >> rows >> cols >> nnz)) throw ConfigError("malformed Matrix Market size line");
  std::vector<Eigen::Triplet<cplx>> trip;
  for (long k = 0; k < nnz; ++k) {
    long r = 0, c = 0;
    double re = 0, im = 0;
    if (!(is >> r >> c >> re >> im)) throw ConfigError("truncated Matrix Market data");
    if (r < 1 || r > rows || c < 1 || c > cols) throw ConfigError("Matrix Market index out of range");
    trip.emplace_back(r - 1, c - 1, cplx(re, im));
  }
  SparseOperator::Matrix m(rows, cols);
  m.setFromTriplets(trip.begin(), trip.end());
  return SparseOperator(std::move(m));
}

}  // namespace lat2d
