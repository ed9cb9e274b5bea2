#pragma once

#include "koszulscope/arith.hpp"

#include <array>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace koszulscope {

/// A cohomology dimension that is either known exactly or confined to an
/// interval [lower, upper] with upper possibly infinite.
class Dim {
 public:
  Dim() = default;  // [0, inf)

  static Dim known(ExactInt value);
  static Dim unknown(ExactInt lower = 0, std::optional<ExactInt> upper = std::nullopt);

  bool is_known() const { return upper_ && *upper_ == lower_; }
  bool is_zero() const { return is_known() && lower_ == 0; }
  const ExactInt& lower() const { return lower_; }
  const std::optional<ExactInt>& upper() const { return upper_; }
  /// Throws std::logic_error when the dimension is not known.
  const ExactInt& value() const;

  /// "46", "[45,46]" or "[0,inf]".
  std::string str() const;
  static Dim parse(const std::string& text);

  friend bool operator==(const Dim& a, const Dim& b) {
    return a.lower_ == b.lower_ && a.upper_ == b.upper_;
  }

 private:
  ExactInt lower_ = 0;
  std::optional<ExactInt> upper_;
};

/// Dimensions h^0..h^top of one sheaf.
class CohProfile {
 public:
  CohProfile() = default;
  explicit CohProfile(std::vector<Dim> dims) : dims_(std::move(dims)) {}

  static CohProfile unknown(int top);
  static CohProfile zero(int top);
  static CohProfile known(const std::vector<ExactInt>& values);

  int top_degree() const { return static_cast<int>(dims_.size()) - 1; }
  std::size_t size() const { return dims_.size(); }
  const Dim& operator[](int q) const { return dims_.at(static_cast<std::size_t>(q)); }
  Dim& operator[](int q) { return dims_.at(static_cast<std::size_t>(q)); }
  bool all_known() const;
  CohProfile truncated(int top) const;

  std::string str() const;

  friend bool operator==(const CohProfile& a, const CohProfile& b) { return a.dims_ == b.dims_; }

 private:
  std::vector<Dim> dims_;
};

/// Dimensions add; unknown parts add as intervals.
CohProfile direct_sum(const CohProfile& a, const CohProfile& b);

/// 0 -> left -> middle -> right -> 0, objects named by label.
struct ShortExact {
  std::string left;
  std::string middle;
  std::string right;
};

struct SlotRef {
  std::string object;
  int q = 0;
  std::string str() const { return object + ":" + std::to_string(q); }
  friend bool operator==(const SlotRef& a, const SlotRef& b) { return a.object == b.object && a.q == b.q; }
};

struct TraceEntry {
  std::size_t sequence = 0;  // index into ChaseTrace::sequences()
  std::string rule;
  std::vector<SlotRef> reads;
  SlotRef write;
  Dim value;
  std::string justification;
};

/// Ordered record of every rule application. Serialized one rule per line,
///   RULE <name> READ <obj:q>... WRITE <obj:q> = <value>
/// with a "SEQ <left> <middle> <right>" line whenever the active short exact
/// sequence changes.
class ChaseTrace {
 public:
  std::size_t add_sequence(const ShortExact& seq);
  void record(TraceEntry entry);
  void append(const ChaseTrace& other);

  const std::vector<ShortExact>& sequences() const { return sequences_; }
  const std::vector<TraceEntry>& entries() const { return entries_; }
  bool empty() const { return entries_.empty(); }

  std::string serialize() const;
  /// Inverse of serialize (justifications are not serialized).
  static ChaseTrace parse(const std::string& text);

 private:
  std::vector<ShortExact> sequences_;
  std::vector<TraceEntry> entries_;
};

class ChaseContradiction : public std::runtime_error {
 public:
  ChaseContradiction(const std::string& what, ChaseTrace trace)
      : std::runtime_error(what), trace_(std::move(trace)) {}
  const ChaseTrace& trace() const { return trace_; }

 private:
  ChaseTrace trace_;
};

class ReplayMismatch : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Rule families the chase may use. Zero-flank rules (VANISH, ISO) are
/// always on; ALTSUM covers longer zero-bounded segments and BOUND tightens
/// intervals from neighbouring slots.
struct ChaseOptions {
  bool alternating_sums = true;
  bool bounds = true;
};

struct ChaseResult {
  std::array<CohProfile, 3> profiles;
  ChaseTrace trace;
};

/// Runs the rules on the long exact cohomology sequence of seq until nothing
/// changes. Throws ChaseContradiction when the data force an impossible
/// dimension, and std::invalid_argument when the profiles differ in length.
ChaseResult chase(const ShortExact& seq, std::array<CohProfile, 3> profiles,
                  const ChaseOptions& options = {});

using ProfileMap = std::map<std::string, CohProfile>;

/// Re-derives every trace entry from the profiles it reads and writes the
/// result; ORACLE entries are taken as given. Throws ReplayMismatch when a
/// rule does not reproduce its recorded value.
ProfileMap replay(const ChaseTrace& trace, ProfileMap initial);

/// Alternating sum over all slots of the long exact sequence, or nullopt
/// when some slot is not known.
std::optional<ExactInt> alternating_sum(const std::array<CohProfile, 3>& profiles);

}  // namespace koszulscope
