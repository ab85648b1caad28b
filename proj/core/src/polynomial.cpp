#include "distdeg/polynomial.hpp"

#include <algorithm>
#include <bit>
#include <charconv>
#include <cmath>
#include <numeric>
#include <stdexcept>
#include <unordered_map>

namespace distdeg {

namespace {

std::uint64_t degree_of(const Exponent& e) {
  return std::accumulate(e.begin(), e.end(), std::uint64_t{0});
}

std::string format_double(double v) {
  char buf[64];
  auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), v);
  if (ec != std::errc{}) return std::to_string(v);
  return std::string(buf, ptr);
}

}  // namespace

bool GradedLexLess::operator()(const Exponent& a, const Exponent& b) const {
  const auto da = degree_of(a);
  const auto db = degree_of(b);
  if (da != db) return da < db;
  // Within a degree, y1^2 > y1*y2 > y2^2: larger leading exponent ranks higher.
  return std::lexicographical_compare(a.begin(), a.end(), b.begin(), b.end());
}

Polynomial Polynomial::constant(std::size_t num_vars, Complex value) {
  Polynomial p(num_vars);
  p.add_term(Exponent(num_vars, 0), value);
  return p;
}

Polynomial Polynomial::variable(std::size_t num_vars, std::size_t index) {
  if (index >= num_vars) throw std::out_of_range("variable index out of range");
  Exponent e(num_vars, 0);
  e[index] = 1;
  Polynomial p(num_vars);
  p.add_term(e, 1.0);
  return p;
}

Polynomial Polynomial::monomial(Exponent exponent, Complex coefficient) {
  Polynomial p(exponent.size());
  p.add_term(exponent, coefficient);
  return p;
}

bool Polynomial::is_constant() const noexcept {
  return terms_.empty() || (terms_.size() == 1 && degree_of(terms_.begin()->first) == 0);
}

Complex Polynomial::coefficient(const Exponent& exponent) const {
  auto it = terms_.find(exponent);
  return it == terms_.end() ? Complex{} : it->second;
}

std::size_t Polynomial::total_degree() const {
  // Graded order: the last term has maximal degree.
  return terms_.empty() ? 0 : static_cast<std::size_t>(degree_of(terms_.rbegin()->first));
}

std::size_t Polynomial::degree_in(std::size_t var) const {
  if (var >= num_vars_) throw std::out_of_range("variable index out of range");
  std::size_t d = 0;
  for (const auto& [e, c] : terms_) d = std::max<std::size_t>(d, e[var]);
  return d;
}

std::size_t Polynomial::degree_in(std::span<const std::size_t> vars) const {
  std::size_t d = 0;
  for (const auto& [e, c] : terms_) {
    std::size_t s = 0;
    for (auto v : vars) s += e.at(v);
    d = std::max(d, s);
  }
  return d;
}

double Polynomial::coefficient_norm() const {
  double s = 0.0;
  for (const auto& [e, c] : terms_) s += std::abs(c);
  return s;
}

bool Polynomial::depends_on(std::size_t var) const {
  return std::any_of(terms_.begin(), terms_.end(),
                     [var](const auto& t) { return t.first.at(var) > 0; });
}

void Polynomial::add_term(const Exponent& exponent, Complex coefficient) {
  if (exponent.size() != num_vars_) {
    throw std::invalid_argument("exponent length does not match variable count");
  }
  if (coefficient == Complex{}) return;
  auto [it, inserted] = terms_.try_emplace(exponent, coefficient);
  if (!inserted) {
    it->second += coefficient;
    if (it->second == Complex{}) terms_.erase(it);
  }
}

void Polynomial::check_compatible(const Polynomial& other) const {
  if (other.num_vars_ != num_vars_) {
    throw std::invalid_argument("polynomials live in different variable contexts");
  }
}

Polynomial Polynomial::operator-() const {
  Polynomial r = *this;
  for (auto& [e, c] : r.terms_) c = -c;
  return r;
}

Polynomial& Polynomial::operator+=(const Polynomial& rhs) {
  check_compatible(rhs);
  for (const auto& [e, c] : rhs.terms_) add_term(e, c);
  return *this;
}

Polynomial& Polynomial::operator-=(const Polynomial& rhs) {
  check_compatible(rhs);
  for (const auto& [e, c] : rhs.terms_) add_term(e, -c);
  return *this;
}

Polynomial& Polynomial::operator*=(const Polynomial& rhs) {
  *this = *this * rhs;
  return *this;
}

Polynomial& Polynomial::operator*=(Complex scalar) {
  if (scalar == Complex{}) {
    terms_.clear();
    return *this;
  }
  for (auto it = terms_.begin(); it != terms_.end();) {
    it->second *= scalar;
    if (it->second == Complex{}) {
      it = terms_.erase(it);
    } else {
      ++it;
    }
  }
  return *this;
}

Polynomial operator*(const Polynomial& lhs, const Polynomial& rhs) {
  lhs.check_compatible(rhs);
  Polynomial r(lhs.num_vars_);
  Exponent e(lhs.num_vars_);
  for (const auto& [ea, ca] : lhs.terms_) {
    for (const auto& [eb, cb] : rhs.terms_) {
      for (std::size_t i = 0; i < e.size(); ++i) e[i] = ea[i] + eb[i];
      r.add_term(e, ca * cb);
    }
  }
  return r;
}

bool operator==(const Polynomial& a, const Polynomial& b) {
  return a.num_vars_ == b.num_vars_ && a.terms_ == b.terms_;
}

Polynomial pow(const Polynomial& base, std::uint32_t exponent) {
  Polynomial result = Polynomial::constant(base.num_vars(), 1.0);
  Polynomial square = base;
  while (exponent > 0) {
    if (exponent & 1U) result *= square;
    exponent >>= 1U;
    if (exponent > 0) square = square * square;
  }
  return result;
}

namespace {

template <typename T>
Complex evaluate_impl(const Polynomial& p, std::span<const T> point) {
  if (point.size() != p.num_vars()) {
    throw std::invalid_argument("evaluation point has " + std::to_string(point.size()) +
                                " coordinates, polynomial has " +
                                std::to_string(p.num_vars()) + " variables");
  }
  Complex sum{};
  for (const auto& [e, c] : p.terms()) {
    Complex term = c;
    for (std::size_t j = 0; j < e.size(); ++j) {
      for (std::uint32_t k = 0; k < e[j]; ++k) term *= point[j];
    }
    sum += term;
  }
  return sum;
}

}  // namespace

Complex evaluate(const Polynomial& p, std::span<const Complex> point) {
  return evaluate_impl(p, point);
}

Complex evaluate(const Polynomial& p, std::span<const double> point) {
  return evaluate_impl(p, point);
}

Polynomial differentiate(const Polynomial& p, std::size_t var_index) {
  if (var_index >= p.num_vars()) {
    throw std::out_of_range("differentiation index " + std::to_string(var_index) +
                            " out of range for " + std::to_string(p.num_vars()) +
                            " variables");
  }
  Polynomial r(p.num_vars());
  for (const auto& [e, c] : p.terms()) {
    if (e[var_index] == 0) continue;
    Exponent d = e;
    d[var_index] -= 1;
    r.add_term(d, c * static_cast<double>(e[var_index]));
  }
  return r;
}

Polynomial compose(const Polynomial& p, std::span<const Polynomial> images) {
  if (images.size() != p.num_vars()) {
    throw std::invalid_argument("compose needs one image per variable");
  }
  const std::size_t target_vars = images.empty() ? 0 : images.front().num_vars();
  for (const auto& img : images) {
    if (img.num_vars() != target_vars) {
      throw std::invalid_argument("compose images must share a variable context");
    }
  }
  // powers[j][k] = images[j]^k, filled lazily.
  std::vector<std::vector<Polynomial>> powers(images.size());
  auto power = [&](std::size_t j, std::uint32_t k) -> const Polynomial& {
    auto& cache = powers[j];
    if (cache.empty()) cache.push_back(Polynomial::constant(target_vars, 1.0));
    while (cache.size() <= k) cache.push_back(cache.back() * images[j]);
    return cache[k];
  };

  Polynomial r(target_vars);
  for (const auto& [e, c] : p.terms()) {
    Polynomial term = Polynomial::constant(target_vars, c);
    for (std::size_t j = 0; j < e.size(); ++j) {
      if (e[j] > 0) term *= power(j, e[j]);
    }
    r += term;
  }
  return r;
}

double max_coefficient_distance(const Polynomial& a, const Polynomial& b) {
  Polynomial d = a - b;
  double m = 0.0;
  for (const auto& [e, c] : d.terms()) m = std::max(m, std::abs(c));
  return m;
}

std::string to_string(const Polynomial& p, std::span<const std::string> vars) {
  if (vars.size() != p.num_vars()) {
    throw std::invalid_argument("variable name list does not match polynomial");
  }
  if (p.is_zero()) return "0";

  std::string out;
  bool first = true;
  for (auto it = p.terms().rbegin(); it != p.terms().rend(); ++it) {
    const auto& [e, c] = *it;
    std::string mono;
    for (std::size_t j = 0; j < e.size(); ++j) {
      if (e[j] == 0) continue;
      if (!mono.empty()) mono += "*";
      mono += vars[j];
      if (e[j] > 1) mono += "^" + std::to_string(e[j]);
    }

    std::string coef;
    bool negative = false;
    if (c.imag() == 0.0) {
      negative = std::signbit(c.real());
      const double mag = std::abs(c.real());
      if (mag != 1.0 || mono.empty()) coef = format_double(mag);
    } else if (c.real() == 0.0) {
      negative = std::signbit(c.imag());
      const double mag = std::abs(c.imag());
      coef = mag == 1.0 ? "I" : format_double(mag) + "*I";
    } else {
      const double im = c.imag();
      coef = "(" + format_double(c.real()) + (std::signbit(im) ? " - " : " + ") +
             format_double(std::abs(im)) + "*I)";
    }

    if (first) {
      if (negative) out += "-";
    } else {
      out += negative ? " - " : " + ";
    }
    first = false;
    out += coef;
    if (!coef.empty() && !mono.empty()) out += "*";
    out += mono;
  }
  return out;
}

PolyMatrix::PolyMatrix(std::size_t rows, std::size_t cols, std::size_t num_vars)
    : rows_(rows), cols_(cols), num_vars_(num_vars),
      entries_(rows * cols, Polynomial(num_vars)) {}

PolyMatrix::PolyMatrix(std::size_t rows, std::size_t cols, std::vector<Polynomial> entries)
    : rows_(rows), cols_(cols), num_vars_(entries.empty() ? 0 : entries.front().num_vars()),
      entries_(std::move(entries)) {
  if (entries_.size() != rows * cols) {
    throw std::invalid_argument("PolyMatrix entry count does not equal rows x cols");
  }
  for (const auto& e : entries_) {
    if (e.num_vars() != num_vars_) {
      throw std::invalid_argument("PolyMatrix entries must share a variable context");
    }
  }
}

void PolyMatrix::set(std::size_t r, std::size_t c, Polynomial p) {
  if (p.num_vars() != num_vars_) {
    throw std::invalid_argument("PolyMatrix entries must share a variable context");
  }
  entries_.at(r * cols_ + c) = std::move(p);
}

PolyMatrix PolyMatrix::with_column(std::span<const Polynomial> column) const {
  if (column.size() != rows_) throw std::invalid_argument("column length mismatch");
  std::vector<Polynomial> e;
  e.reserve(rows_ * (cols_ + 1));
  for (std::size_t r = 0; r < rows_; ++r) {
    for (std::size_t c = 0; c < cols_; ++c) e.push_back(at(r, c));
    e.push_back(column[r]);
  }
  return PolyMatrix(rows_, cols_ + 1, std::move(e));
}

namespace {

// Enumerates k-subsets of {0..n-1} as bitmasks in lexicographic order of
// their sorted index lists.
void k_subsets(std::size_t n, std::size_t k, std::size_t start, std::uint64_t mask,
               std::vector<std::uint64_t>& out) {
  if (k == 0) {
    out.push_back(mask);
    return;
  }
  for (std::size_t i = start; i + k <= n; ++i) {
    k_subsets(n, k - 1, i + 1, mask | (std::uint64_t{1} << i), out);
  }
}

class MinorExpander {
 public:
  explicit MinorExpander(const PolyMatrix& m) : m_(m) {}

  // Determinant of the submatrix with the given row and column sets (equal
  // popcount). Expands along the first row of the row set.
  const Polynomial& det(std::uint64_t rows, std::uint64_t cols) {
    const auto key = std::make_pair(rows, cols);
    if (auto it = memo_.find(key); it != memo_.end()) return it->second;

    Polynomial result(m_.num_vars());
    if (rows == 0) {
      result = Polynomial::constant(m_.num_vars(), 1.0);
    } else {
      const auto r = static_cast<std::size_t>(std::countr_zero(rows));
      const std::uint64_t rest = rows & (rows - 1);
      int sign = 1;
      for (std::size_t c = 0; c < m_.cols(); ++c) {
        const std::uint64_t bit = std::uint64_t{1} << c;
        if (!(cols & bit)) continue;
        const Polynomial& entry = m_.at(r, c);
        if (!entry.is_zero()) {
          const Polynomial& sub = det(rest, cols & ~bit);
          if (!sub.is_zero()) {
            Polynomial term = entry * sub;
            if (sign > 0) {
              result += term;
            } else {
              result -= term;
            }
          }
        }
        sign = -sign;
      }
    }
    return memo_.emplace(key, std::move(result)).first->second;
  }

 private:
  struct PairHash {
    std::size_t operator()(const std::pair<std::uint64_t, std::uint64_t>& p) const noexcept {
      return std::hash<std::uint64_t>{}(p.first * 0x9E3779B97F4A7C15ULL ^ p.second);
    }
  };

  const PolyMatrix& m_;
  std::unordered_map<std::pair<std::uint64_t, std::uint64_t>, Polynomial, PairHash> memo_;
};

}  // namespace

std::vector<Polynomial> all_minors(const PolyMatrix& m, std::size_t k) {
  if (k == 0 || k > std::min(m.rows(), m.cols())) {
    throw std::invalid_argument("minor size " + std::to_string(k) + " exceeds " +
                                std::to_string(m.rows()) + "x" + std::to_string(m.cols()) +
                                " matrix");
  }
  if (m.rows() > 63 || m.cols() > 63) throw std::invalid_argument("matrix too large for minors");

  std::vector<std::uint64_t> row_sets;
  std::vector<std::uint64_t> col_sets;
  k_subsets(m.rows(), k, 0, 0, row_sets);
  k_subsets(m.cols(), k, 0, 0, col_sets);

  MinorExpander expander(m);
  std::vector<Polynomial> out;
  out.reserve(row_sets.size() * col_sets.size());
  for (auto rs : row_sets) {
    for (auto cs : col_sets) out.push_back(expander.det(rs, cs));
  }
  return out;
}

}  // namespace distdeg
