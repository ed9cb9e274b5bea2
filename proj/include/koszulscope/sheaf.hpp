#pragma once

#include "koszulscope/bott.hpp"
#include "koszulscope/seqchase.hpp"

#include <optional>
#include <string>
#include <vector>

namespace koszulscope {

struct Summand {
  SheafKind kind = SheafKind::Structure;
  long twist = 0;
  int multiplicity = 1;
};

/// Formal sheaf on P^n: a direct sum of twisted O, Omega^1, Theta; such a
/// sum tensored with the ideal sheaf of the surface; its pushed-forward
/// restriction i_* i^* F; or a named object (syzygies, sheaves on the surface).
class SheafExpr {
 public:
  enum class Form { Bundle, IdealTensor, Pullback, Named };

  static SheafExpr zero(int n);
  static SheafExpr bundle(int n, std::vector<Summand> summands);
  static SheafExpr line(int n, SheafKind kind, long twist, int multiplicity = 1);
  static SheafExpr named(int n, std::string name);

  /// F (x) I_X; only defined for bundles.
  SheafExpr ideal_tensor() const;
  /// i_* i^* F; only defined for bundles.
  SheafExpr pullback() const;

  /// Tensor product of two bundles, with equal summands merged.
  friend SheafExpr tensor(const SheafExpr& a, const SheafExpr& b);

  Form form() const { return form_; }
  int ambient_dim() const { return n_; }
  const std::vector<Summand>& summands() const { return summands_; }
  bool is_zero() const { return form_ == Form::Bundle && summands_.empty(); }

  /// Space-free label used in chase traces, e.g. "I_X*Omega1(5)".
  std::string label() const;

  /// Profile from Bott's formula; nullopt unless this is a bundle.
  std::optional<CohProfile> bott_profile() const;

 private:
  SheafExpr(Form form, int n) : form_(form), n_(n) {}
  std::string bundle_label() const;

  Form form_ = Form::Bundle;
  int n_ = 2;
  std::vector<Summand> summands_;
  std::string name_;
};

/// Accumulates profiles and one trace across several chases. Every profile
/// an object starts with is kept in initial(), so that
/// replay(trace(), initial()) == current().
class ChaseSession {
 public:
  explicit ChaseSession(ChaseOptions options = {}) : options_(options) {}

  /// Current profile; bundles are seeded from Bott's formula, anything else
  /// from its seed or as fully unknown.
  const CohProfile& profile(const SheafExpr& sheaf);
  bool has(const std::string& label) const { return current_.count(label) != 0; }

  /// Declares the starting profile of a non-bundle object. Throws
  /// std::logic_error if the object was already used.
  void seed(const std::string& label, CohProfile profile);

  /// Chases 0 -> left -> middle -> right -> 0.
  void run(const SheafExpr& left, const SheafExpr& middle, const SheafExpr& right);

  /// Records an externally computed value (provenance rule ORACLE).
  void record_oracle(const std::string& label, int q, const ExactInt& value);

  const ChaseTrace& trace() const { return trace_; }
  const ProfileMap& initial() const { return initial_; }
  const ProfileMap& current() const { return current_; }
  const ChaseOptions& options() const { return options_; }

 private:
  ChaseOptions options_;
  ProfileMap initial_;
  ProfileMap current_;
  ChaseTrace trace_;
};

struct ResolutionChase {
  CohProfile profile;
  ChaseTrace trace;
  ProfileMap initial;
  ProfileMap final;
};

/// Profile of target from a resolution 0 -> E_c -> ... -> E_1 -> target -> 0,
/// given as terms = {E_1, ..., E_c} (all bundles). The resolution is split
/// left to right through syzygy objects Z1(target), Z2(target), ...
ResolutionChase chase_resolution(const std::vector<SheafExpr>& terms, const SheafExpr& target,
                                 const ChaseOptions& options = {});

/// Same, inside an existing session.
const CohProfile& chase_resolution(ChaseSession& session, const std::vector<SheafExpr>& terms,
                                   const SheafExpr& target);

}  // namespace koszulscope
