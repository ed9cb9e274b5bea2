#pragma once

#include "koszulscope/arith.hpp"
#include "koszulscope/seqchase.hpp"
#include "koszulscope/sheaf.hpp"

#include <optional>
#include <string>
#include <vector>

namespace koszulscope {

class GradedQuotient;

enum class K3Type { Quartic, QuadricCubic, ThreeQuadrics };

/// "quartic", "2-3", "2-2-2".
std::string k3_name(K3Type type);
std::optional<K3Type> parse_k3_type(const std::string& name);
const std::vector<K3Type>& all_k3_types();

/// Smooth complete intersection surface X = V(f_1..f_c) in P^n, described
/// by its multidegree only.
class CompleteIntersection {
 public:
  /// Throws std::invalid_argument unless every d_i > 1 and n - c = 2.
  CompleteIntersection(int n, std::vector<int> degrees);
  static CompleteIntersection of(K3Type type);

  int n() const { return n_; }
  int codim() const { return static_cast<int>(degrees_.size()); }
  const std::vector<int>& degrees() const { return degrees_; }
  /// d_0 = product of the d_i.
  ExactInt degree() const;
  /// Sum d_i = n + 1, i.e. trivial canonical sheaf.
  bool is_k3() const;

  /// Koszul terms tensored with f: {E_1 (x) f, ..., E_c (x) f} where
  /// E_j = (+)_{|S| = j} O(-d_S).
  std::vector<SheafExpr> resolution_terms(const SheafExpr& f) const;

 private:
  int n_;
  std::vector<int> degrees_;
};

/// sum over S of (-1)^|S| C(n + m - d_S, n).
ExactInt hilbert_closed_form(const CompleteIntersection& x, long m);

enum class DimStatus { Determined, NeededOracle, Undetermined };
std::string status_name(DimStatus status);

struct EngineOptions {
  ChaseOptions chase;
  /// Consult the canonical model when the chase leaves a needed slot open.
  bool oracle_fallback = true;
};

/// A chased value together with everything needed to replay it.
struct ChasedValue {
  std::optional<ExactInt> value;  // empty when Undetermined
  DimStatus status = DimStatus::Undetermined;
  ChaseTrace trace;
  ProfileMap initial;
  ProfileMap final;
};

/// Profile of i_* i^* O(m). Throws std::logic_error when the chased h^0
/// disagrees with hilbert_closed_form.
CohProfile coh_pullback_structure(const CompleteIntersection& x, long m, const ChaseOptions& options = {});

/// h^0(X, i^* Omega^1(k)).
ChasedValue coh_pullback_omega1(K3Type type, long k, const EngineOptions& options = {});

/// sum_j h^0(X, i^* O(d - 1 - d_j)).
ExactInt structure_terms(K3Type type, long d);

struct FoliationSpaceResult {
  long d = 0;
  ExactInt h0;
  DimStatus status = DimStatus::Undetermined;
  ChaseTrace trace;
  ProfileMap initial;
  ProfileMap final;
};

/// h^0(X, Omega^1_X (x) i^* O(d - 1)) from the conormal sequence.
FoliationSpaceResult foliation_space_dim(K3Type type, long d, const EngineOptions& options = {});

/// 24 + (d - 1)^2 d_0.
ExactInt singular_scheme_degree(K3Type type, long d);

struct UniquenessCertificate {
  K3Type type = K3Type::Quartic;
  long d = 0;
  bool certified = false;
  /// Non-vanishing slots, e.g. "h0(X,i*O(0)) = 1". Empty when certified.
  std::vector<std::string> obstructions;
  /// The slot whose vanishing is the certificate, e.g. "Theta_X(-5):1".
  SlotRef target;
  ChaseTrace trace;
  ProfileMap initial;
  ProfileMap final;
};

/// Tries to prove H^1(X, Theta_X (x) i^* O(1 - d)) = 0. Requires d >= 3.
UniquenessCertificate uniqueness_certificate(K3Type type, long d, const ChaseOptions& options = {});

/// Smallest d >= 3 such that the certificate holds on [d, d + 47].
long uniqueness_threshold(K3Type type);

DimTable foliation_table(K3Type type, long dmin, long dmax, const EngineOptions& options = {});
/// Keyed by d, holding h^0(X, i^* Omega^1(d - 1)).
DimTable omega1_table(K3Type type, long dmin, long dmax, const EngineOptions& options = {});
DimTable structure_terms_table(K3Type type, long dmin, long dmax);

/// Canonical smooth model of each type, built once.
const GradedQuotient& canonical_model(K3Type type);

}  // namespace koszulscope
