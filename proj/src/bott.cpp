#include "koszulscope/bott.hpp"

#include <stdexcept>

namespace koszulscope {

namespace {

void check_range(int n, int q) {
  if (n < 2) throw std::domain_error("ambient dimension must be at least 2");
  if (q < 0 || q > n) throw std::domain_error("cohomological degree out of range");
}

}  // namespace

ExactInt coh_structure(int n, int q, long k) {
  check_range(n, q);
  if (q == 0) return k >= 0 ? binomial(n + k, k) : ExactInt(0);
  if (q == n) return k <= -n - 1 ? binomial(-k - 1, -k - n - 1) : ExactInt(0);
  return 0;
}

ExactInt coh_omega1(int n, int q, long k) {
  check_range(n, q);
  if (q == 0) return k > 1 ? ExactInt((k - 1) * binomial(k + n - 1, k)) : ExactInt(0);
  if (q == n) {
    // Dual to h^0(Omega^{n-1}(-k)) = C(-k+1, -k) C(-k-1, n-1), nonzero for k < 1-n.
    return k < 1 - n ? ExactInt((1 - k) * binomial(-k - 1, n - 1)) : ExactInt(0);
  }
  return (q == 1 && k == 0) ? ExactInt(1) : ExactInt(0);
}

ExactInt coh_tangent(int n, int q, long k) {
  check_range(n, q);
  return coh_omega1(n, n - q, -k - n - 1);
}

ExactInt coh(const AmbientSheaf& sheaf, int q) {
  switch (sheaf.kind) {
    case SheafKind::Structure: return coh_structure(sheaf.n, q, sheaf.twist);
    case SheafKind::Cotangent1: return coh_omega1(sheaf.n, q, sheaf.twist);
    case SheafKind::Tangent: return coh_tangent(sheaf.n, q, sheaf.twist);
  }
  throw std::logic_error("unknown sheaf kind");
}

std::string kind_symbol(SheafKind kind) {
  switch (kind) {
    case SheafKind::Structure: return "O";
    case SheafKind::Cotangent1: return "Omega1";
    case SheafKind::Tangent: return "Theta";
  }
  return "?";
}

}  // namespace koszulscope
