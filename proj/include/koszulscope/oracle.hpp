#pragma once

#include "koszulscope/arith.hpp"
#include "koszulscope/linalg.hpp"
#include "koszulscope/polynomial.hpp"

#include <filesystem>
#include <map>
#include <memory>
#include <mutex>
#include <stdexcept>
#include <string>
#include <vector>

namespace koszulscope {

/// The forms are not a regular sequence: a Hilbert function disagrees with
/// the Koszul alternating sum.
class RegularSequenceError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A runtime consistency check on the input data failed.
class InconsistentInput : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class ModelFormatError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Degree-m piece of a homogeneous ideal: the span of monomial multiples of
/// the generators, echeloned over the monomials of R_m in descending lex
/// order. Non-pivot monomials form a basis of the quotient piece.
struct IdealPiece {
  int degree = 0;
  std::vector<Exponents> monomials;
  std::map<Exponents, std::size_t> index;
  SparseEchelon ideal;
  std::vector<std::size_t> basis;               // standard monomial columns
  std::map<std::size_t, std::size_t> position;  // column -> basis position
};

IdealPiece ideal_piece(int nvars, const std::vector<Polynomial>& generators, int degree);

/// R/I for R = Q[x0..xn] and I generated by homogeneous forms.
/// Pieces are computed on first use and cached; concurrent queries are safe.
class GradedQuotient {
 public:
  /// Throws std::invalid_argument unless every form is a nonzero homogeneous
  /// polynomial in n+1 variables of degree >= 1.
  GradedQuotient(int n, std::vector<Polynomial> forms);

  int n() const { return n_; }
  int nvars() const { return n_ + 1; }
  const std::vector<Polynomial>& forms() const { return forms_; }
  std::vector<int> degrees() const;

  /// Empty piece for m < 0.
  const IdealPiece& piece(int m) const;

  /// dim (R/I)_m by row reduction. Throws RegularSequenceError when it
  /// differs from the Koszul alternating sum.
  ExactInt hilbert_function(int m) const;
  ExactInt koszul_prediction(int m) const;

  /// Coordinates of the class of a homogeneous p in the standard monomial
  /// basis of (R/I)_deg(p). The zero polynomial needs an explicit degree.
  std::vector<ExactRat> coordinates(const Polynomial& p, int degree) const;
  bool in_ideal(const Polynomial& p) const;

 private:
  int n_;
  std::vector<Polynomial> forms_;
  std::vector<Polynomial> generators_;  // same span per degree, distinct leads
  mutable std::mutex mutex_;
  mutable std::map<int, std::unique_ptr<IdealPiece>> cache_;
};

/// A linear map between graded pieces, written in standard monomial
/// coordinates: one column per source basis element.
struct GradedMap {
  std::vector<int> source_degrees;
  int target_degree = 0;
  RatMatrix matrix;

  std::size_t rank() const { return bareiss_rank(matrix); }
  std::size_t kernel_dim() const { return matrix.cols() - rank(); }
};

/// (R/I)_{k-1}^{n+1} -> (R/I)_k, (a_i) |-> sum x_i a_i.
GradedMap euler_map(const GradedQuotient& q, int k);
ExactInt euler_kernel_dim(const GradedQuotient& q, int k);

/// (+)_j (R/I)_{d-1-d_j} -> (R/I)_{d-2}^{n+1}, h |-> h * grad f_j.
GradedMap conormal_map(const GradedQuotient& q, int d);

/// Sections of Omega^1_X(d-1): the Euler kernel at d-1 modulo the conormal
/// image. Throws InconsistentInput if the image leaves the kernel.
ExactInt foliation_dim_oracle(const GradedQuotient& q, int d);

class HomogeneousVectorField {
 public:
  /// Throws std::invalid_argument on mixed degrees, wrong arity, or F = 0.
  explicit HomogeneousVectorField(std::vector<Polynomial> components);

  static HomogeneousVectorField radial(int n);

  int n() const { return static_cast<int>(components_.size()) - 1; }
  int degree() const { return degree_; }
  const std::vector<Polynomial>& components() const { return components_; }

  /// F(g) = sum F_i dg/dx_i.
  Polynomial apply(const Polynomial& g) const;

 private:
  std::vector<Polynomial> components_;
  int degree_ = 0;
};

bool is_invariant(const HomogeneousVectorField& f, const GradedQuotient& q);

/// F^(ij) = (df/dx_j) d_i - (df/dx_i) d_j for i < j, in lex order of (i, j).
std::vector<HomogeneousVectorField> hamiltonian_fields(const Polynomial& f);

/// Dimension of the span of the fields in (R/I)_deg^{n+1} modulo multiples
/// of the radial field. All fields must share one degree.
ExactInt section_span_dim(const GradedQuotient& q, const std::vector<HomogeneousVectorField>& fields);

struct SingularSchemeIdeal {
  std::vector<Polynomial> minors;  // x_i F_j - x_j F_i, i < j
  Polynomial common_factor;        // monic gcd of the nonzero minors, 0 if all vanish
};

SingularSchemeIdeal singular_scheme_ideal(const HomogeneousVectorField& f);

/// Jacobian criterion: the forms and the maximal minors of their Jacobian
/// generate an ideal with (R/J)_m = 0 for some m <= max_degree.
bool is_smooth(const GradedQuotient& q, int max_degree);

GradedQuotient fermat_quartic();
GradedQuotient quadric_cubic_model();
GradedQuotient three_quadrics_model();

/// Text format: header "n=<int> degrees=<a,b,...>", then one form per line as
/// whitespace-separated "coeff:e0,e1,...". '#' starts a comment.
GradedQuotient parse_model(const std::string& text);
std::string format_model(const GradedQuotient& q);
GradedQuotient load_model(const std::filesystem::path& path);

}  // namespace koszulscope
