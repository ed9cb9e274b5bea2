#pragma once

#include "koszulscope/arith.hpp"

#include <string>

namespace koszulscope {

enum class SheafKind { Structure, Cotangent1, Tangent };

/// O(k), Omega^1(k) or Theta(k) on P^n.
struct AmbientSheaf {
  SheafKind kind = SheafKind::Structure;
  long twist = 0;
  int n = 2;
};

// Every function below throws std::domain_error unless n >= 2 and 0 <= q <= n.

/// h^q(P^n, O(k)).
ExactInt coh_structure(int n, int q, long k);

/// h^q(P^n, Omega^1(k)) from Bott's formula with p = 1; the top degree uses
/// the closed dual form (1-k) C(-k-1, n-1).
ExactInt coh_omega1(int n, int q, long k);

/// h^q(P^n, Theta(k)) = h^{n-q}(P^n, Omega^1(-k-n-1)).
ExactInt coh_tangent(int n, int q, long k);

ExactInt coh(const AmbientSheaf& sheaf, int q);

std::string kind_symbol(SheafKind kind);

}  // namespace koszulscope
