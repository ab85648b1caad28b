#pragma once

#include <complex>
#include <cstddef>
#include <cstdint>
#include <map>
#include <span>
#include <string>
#include <vector>

namespace distdeg {

using Complex = std::complex<double>;
using Exponent = std::vector<std::uint32_t>;

/// Graded lexicographic order on exponent vectors: lower total degree first,
/// ties broken lexicographically (y1 > y2 > ...).
struct GradedLexLess {
  bool operator()(const Exponent& a, const Exponent& b) const;
};

/// Sparse multivariate polynomial with complex double coefficients.
///
/// Terms are kept in a map keyed by exponent vectors in graded lexicographic
/// order; exact-zero coefficients are never stored. Values are immutable in
/// practice: every operation returns a new polynomial.
class Polynomial {
 public:
  using TermMap = std::map<Exponent, Complex, GradedLexLess>;

  explicit Polynomial(std::size_t num_vars = 0) : num_vars_(num_vars) {}

  static Polynomial constant(std::size_t num_vars, Complex value);
  static Polynomial variable(std::size_t num_vars, std::size_t index);
  static Polynomial monomial(Exponent exponent, Complex coefficient);

  std::size_t num_vars() const noexcept { return num_vars_; }
  const TermMap& terms() const noexcept { return terms_; }
  std::size_t num_terms() const noexcept { return terms_.size(); }
  bool is_zero() const noexcept { return terms_.empty(); }
  bool is_constant() const noexcept;

  /// Coefficient of a monomial, 0 when absent.
  Complex coefficient(const Exponent& exponent) const;

  /// Zero polynomial has total degree 0.
  std::size_t total_degree() const;
  std::size_t degree_in(std::size_t var) const;
  /// Maximum over terms of the summed exponents of the selected variables.
  std::size_t degree_in(std::span<const std::size_t> vars) const;

  /// Sum of coefficient magnitudes; the scale used by relative residuals.
  double coefficient_norm() const;
  bool depends_on(std::size_t var) const;

  Polynomial operator-() const;
  Polynomial& operator+=(const Polynomial& rhs);
  Polynomial& operator-=(const Polynomial& rhs);
  Polynomial& operator*=(const Polynomial& rhs);
  Polynomial& operator*=(Complex scalar);

  friend Polynomial operator+(Polynomial lhs, const Polynomial& rhs) { return lhs += rhs; }
  friend Polynomial operator-(Polynomial lhs, const Polynomial& rhs) { return lhs -= rhs; }
  friend Polynomial operator*(const Polynomial& lhs, const Polynomial& rhs);
  friend Polynomial operator*(Polynomial lhs, Complex s) { return lhs *= s; }
  friend Polynomial operator*(Complex s, Polynomial rhs) { return rhs *= s; }

  /// Exact structural equality (same terms, bitwise-equal coefficients).
  friend bool operator==(const Polynomial& a, const Polynomial& b);

  /// Adds `coefficient * x^exponent`, dropping the term if it cancels exactly.
  void add_term(const Exponent& exponent, Complex coefficient);

 private:
  void check_compatible(const Polynomial& other) const;

  std::size_t num_vars_;
  TermMap terms_;
};

Polynomial pow(const Polynomial& base, std::uint32_t exponent);

/// Term-sum evaluation. Throws std::invalid_argument on dimension mismatch.
Complex evaluate(const Polynomial& p, std::span<const Complex> point);
Complex evaluate(const Polynomial& p, std::span<const double> point);

/// Formal partial derivative. Throws std::out_of_range for a bad index.
Polynomial differentiate(const Polynomial& p, std::size_t var_index);

/// Substitutes `images[j]` for variable j. All images share one variable
/// context, which becomes the context of the result.
Polynomial compose(const Polynomial& p, std::span<const Polynomial> images);

/// Largest coefficient-wise distance, useful for approximate comparison.
double max_coefficient_distance(const Polynomial& a, const Polynomial& b);

/// Prints terms in descending graded-lex order with shortest round-trip
/// coefficients, e.g. "y1^2 + y2^2 - 1". Non-real coefficients are written
/// with the imaginary unit `I`.
std::string to_string(const Polynomial& p, std::span<const std::string> vars);

/// Parses the polynomial grammar: + - * / ^, decimal literals, parentheses
/// and the names in `vars`. Division is only by constants; exponents must be
/// positive integers. `I` denotes the imaginary unit unless it is a variable.
Polynomial parse_polynomial(std::string_view text, std::span<const std::string> vars);

/// Dense matrix of polynomials over a common variable context, row-major.
class PolyMatrix {
 public:
  PolyMatrix(std::size_t rows, std::size_t cols, std::size_t num_vars);
  PolyMatrix(std::size_t rows, std::size_t cols, std::vector<Polynomial> entries);

  std::size_t rows() const noexcept { return rows_; }
  std::size_t cols() const noexcept { return cols_; }
  std::size_t num_vars() const noexcept { return num_vars_; }

  const Polynomial& at(std::size_t r, std::size_t c) const { return entries_.at(r * cols_ + c); }
  void set(std::size_t r, std::size_t c, Polynomial p);
  const std::vector<Polynomial>& entries() const noexcept { return entries_; }

  /// Appends a column; the column must have `rows()` entries.
  PolyMatrix with_column(std::span<const Polynomial> column) const;

 private:
  std::size_t rows_;
  std::size_t cols_;
  std::size_t num_vars_;
  std::vector<Polynomial> entries_;
};

/// All k x k minors, ordered lexicographically by (row set, column set).
/// Laplace expansion with memoization over column subsets.
std::vector<Polynomial> all_minors(const PolyMatrix& m, std::size_t k);

}  // namespace distdeg
