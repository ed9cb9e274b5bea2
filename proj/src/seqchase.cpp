#include "koszulscope/seqchase.hpp"

#include <algorithm>
#include <set>
#include <sstream>

namespace koszulscope {

// ---------------------------------------------------------------- Dim

Dim Dim::known(ExactInt value) {
  if (value < 0) throw std::invalid_argument("dimensions are non-negative");
  Dim d;
  d.lower_ = value;
  d.upper_ = std::move(value);
  return d;
}

Dim Dim::unknown(ExactInt lower, std::optional<ExactInt> upper) {
  if (lower < 0) lower = 0;
  if (upper && *upper < lower) throw std::invalid_argument("empty dimension interval");
  Dim d;
  d.lower_ = std::move(lower);
  d.upper_ = std::move(upper);
  return d;
}

const ExactInt& Dim::value() const {
  if (!is_known()) throw std::logic_error("dimension is not known: " + str());
  return lower_;
}

std::string Dim::str() const {
  if (is_known()) return lower_.get_str();
  return "[" + lower_.get_str() + "," + (upper_ ? upper_->get_str() : std::string("inf")) + "]";
}

Dim Dim::parse(const std::string& text) {
  if (text.empty()) throw std::invalid_argument("empty dimension");
  if (text.front() != '[') return known(ExactInt(text));
  const auto comma = text.find(',');
  if (comma == std::string::npos || text.back() != ']') throw std::invalid_argument("bad interval: " + text);
  const std::string lo = text.substr(1, comma - 1);
  const std::string hi = text.substr(comma + 1, text.size() - comma - 2);
  return unknown(ExactInt(lo), hi == "inf" ? std::nullopt : std::optional<ExactInt>(ExactInt(hi)));
}

// ---------------------------------------------------------------- CohProfile

CohProfile CohProfile::unknown(int top) { return CohProfile(std::vector<Dim>(static_cast<std::size_t>(top + 1))); }

CohProfile CohProfile::zero(int top) {
  return CohProfile(std::vector<Dim>(static_cast<std::size_t>(top + 1), Dim::known(0)));
}

CohProfile CohProfile::known(const std::vector<ExactInt>& values) {
  std::vector<Dim> dims;
  dims.reserve(values.size());
  for (const auto& v : values) dims.push_back(Dim::known(v));
  return CohProfile(std::move(dims));
}

bool CohProfile::all_known() const {
  return std::all_of(dims_.begin(), dims_.end(), [](const Dim& d) { return d.is_known(); });
}

CohProfile CohProfile::truncated(int top) const {
  std::vector<Dim> dims(dims_.begin(), dims_.begin() + std::min<std::ptrdiff_t>(top + 1, dims_.size()));
  return CohProfile(std::move(dims));
}

std::string CohProfile::str() const {
  std::string out = "(";
  for (std::size_t q = 0; q < dims_.size(); ++q) {
    if (q) out += ", ";
    out += dims_[q].str();
  }
  return out + ")";
}

CohProfile direct_sum(const CohProfile& a, const CohProfile& b) {
  if (a.size() != b.size()) throw std::invalid_argument("direct sum of profiles of different length");
  std::vector<Dim> dims;
  for (int q = 0; q <= a.top_degree(); ++q) {
    std::optional<ExactInt> hi;
    if (a[q].upper() && b[q].upper()) hi = *a[q].upper() + *b[q].upper();
    dims.push_back(Dim::unknown(a[q].lower() + b[q].lower(), hi));
  }
  return CohProfile(std::move(dims));
}

std::optional<ExactInt> alternating_sum(const std::array<CohProfile, 3>& profiles) {
  ExactInt sum = 0;
  for (int q = 0; q <= profiles[0].top_degree(); ++q) {
    for (int role = 0; role < 3; ++role) {
      const Dim& d = profiles[static_cast<std::size_t>(role)][q];
      if (!d.is_known()) return std::nullopt;
      if ((3 * q + role) % 2 == 0) sum += d.value();
      else sum -= d.value();
    }
  }
  return sum;
}

// ---------------------------------------------------------------- ChaseTrace

std::size_t ChaseTrace::add_sequence(const ShortExact& seq) {
  sequences_.push_back(seq);
  return sequences_.size() - 1;
}

void ChaseTrace::record(TraceEntry entry) {
  if (entry.sequence >= sequences_.size()) throw std::out_of_range("trace entry refers to unknown sequence");
  entries_.push_back(std::move(entry));
}

void ChaseTrace::append(const ChaseTrace& other) {
  const std::size_t offset = sequences_.size();
  sequences_.insert(sequences_.end(), other.sequences_.begin(), other.sequences_.end());
  for (auto entry : other.entries_) {
    entry.sequence += offset;
    entries_.push_back(std::move(entry));
  }
}

std::string ChaseTrace::serialize() const {
  std::ostringstream out;
  std::optional<std::size_t> active;
  for (const auto& e : entries_) {
    if (active != e.sequence) {
      const auto& s = sequences_[e.sequence];
      out << "SEQ " << s.left << ' ' << s.middle << ' ' << s.right << '\n';
      active = e.sequence;
    }
    out << "RULE " << e.rule << " READ";
    for (const auto& r : e.reads) out << ' ' << r.str();
    out << " WRITE " << e.write.str() << " = " << e.value.str() << '\n';
  }
  return out.str();
}

namespace {

SlotRef parse_slot(const std::string& token) {
  const auto colon = token.rfind(':');
  if (colon == std::string::npos) throw std::invalid_argument("bad slot reference: " + token);
  return {token.substr(0, colon), std::stoi(token.substr(colon + 1))};
}

}  // namespace

ChaseTrace ChaseTrace::parse(const std::string& text) {
  ChaseTrace trace;
  std::istringstream lines(text);
  std::string line;
  std::optional<std::size_t> active;
  while (std::getline(lines, line)) {
    if (line.empty()) continue;
    std::istringstream in(line);
    std::string head;
    in >> head;
    if (head == "SEQ") {
      ShortExact seq;
      if (!(in >> seq.left >> seq.middle >> seq.right)) throw std::invalid_argument("bad SEQ line: " + line);
      active = trace.add_sequence(seq);
      continue;
    }
    if (head != "RULE" || !active) throw std::invalid_argument("bad trace line: " + line);
    TraceEntry entry;
    entry.sequence = *active;
    std::string token;
    in >> entry.rule >> token;
    if (token != "READ") throw std::invalid_argument("missing READ: " + line);
    while (in >> token && token != "WRITE") entry.reads.push_back(parse_slot(token));
    if (token != "WRITE") throw std::invalid_argument("missing WRITE: " + line);
    std::string eq, value;
    in >> token >> eq >> value;
    if (eq != "=") throw std::invalid_argument("missing '=': " + line);
    entry.write = parse_slot(token);
    entry.value = Dim::parse(value);
    trace.record(std::move(entry));
  }
  return trace;
}

// ---------------------------------------------------------------- chase

namespace {

// Slot p of the long exact sequence is H^{p/3} of object p%3.
class LongExact {
 public:
  LongExact(const ShortExact& seq, std::array<CohProfile, 3>& profiles) : seq_(seq), profiles_(profiles) {}

  int size() const { return 3 * (profiles_[0].top_degree() + 1); }
  Dim& at(int p) { return profiles_[static_cast<std::size_t>(p % 3)][p / 3]; }
  const Dim& at(int p) const { return profiles_[static_cast<std::size_t>(p % 3)][p / 3]; }

  SlotRef ref(int p) const {
    const std::string& label = p % 3 == 0 ? seq_.left : (p % 3 == 1 ? seq_.middle : seq_.right);
    return {label, p / 3};
  }

  int position(const SlotRef& r) const {
    int role = -1;
    if (r.object == seq_.left) role = 0;
    else if (r.object == seq_.middle) role = 1;
    else if (r.object == seq_.right) role = 2;
    if (role < 0 || r.q < 0 || r.q > profiles_[0].top_degree())
      throw ReplayMismatch("slot " + r.str() + " is not part of the active sequence");
    return 3 * r.q + role;
  }

 private:
  const ShortExact& seq_;
  std::array<CohProfile, 3>& profiles_;
};

// v_w = -sum_{i != w} (-1)^{i-w} v_i over an exact segment bounded by zeros.
ExactInt segment_value(const LongExact& les, const std::vector<int>& reads, int write) {
  ExactInt sum = 0;
  for (int p : reads) {
    if ((p - write) % 2 == 0) sum -= les.at(p).value();
    else sum += les.at(p).value();
  }
  return sum;
}

std::optional<ExactInt> upper_at(const LongExact& les, int p) {
  if (p < 0 || p >= les.size()) return ExactInt(0);
  return les.at(p).upper();
}

ExactInt lower_at(const LongExact& les, int p) {
  if (p < 0 || p >= les.size()) return 0;
  return les.at(p).lower();
}

// Interval for slot p implied by exactness at its neighbours, intersected
// with what is already known:
//   dim V_p <= dim V_{p-1} + dim V_{p+1}
//   dim V_p >= dim V_{p+1} - dim V_{p+2}  and  >= dim V_{p-1} - dim V_{p-2}
Dim tightened(const LongExact& les, int p) {
  const Dim& current = les.at(p);
  ExactInt lo = current.lower();
  std::optional<ExactInt> hi = current.upper();

  const auto left = upper_at(les, p - 1);
  const auto right = upper_at(les, p + 1);
  if (left && right) {
    ExactInt cap = *left + *right;
    if (!hi || cap < *hi) hi = cap;
  }
  if (const auto far = upper_at(les, p + 2)) lo = std::max(lo, ExactInt(lower_at(les, p + 1) - *far));
  if (const auto far = upper_at(les, p - 2)) lo = std::max(lo, ExactInt(lower_at(les, p - 1) - *far));

  if (hi && lo > *hi) {
    throw std::range_error("empty interval at slot");
  }
  return Dim::unknown(lo, hi);
}

std::vector<int> bound_reads(const LongExact& les, int p) {
  std::vector<int> out;
  for (int i = p - 2; i <= p + 2; ++i) {
    if (i != p && i >= 0 && i < les.size()) out.push_back(i);
  }
  return out;
}

std::string segment_rule(std::size_t length) {
  if (length == 1) return "VANISH";
  if (length == 2) return "ISO";
  return "ALTSUM";
}

class Chaser {
 public:
  Chaser(const ShortExact& seq, std::array<CohProfile, 3>& profiles, const ChaseOptions& options)
      : les_(seq, profiles), options_(options) {
    sequence_ = trace_.add_sequence(seq);
  }

  void run() {
    while (true) {
      if (segment_pass()) continue;
      if (options_.bounds && bound_pass()) continue;
      break;
    }
  }

  ChaseTrace& trace() { return trace_; }

 private:
  [[noreturn]] void contradiction(const std::string& what) {
    throw ChaseContradiction("chase contradiction: " + what, trace_);
  }

  void write(int p, const std::string& rule, const std::vector<int>& reads, Dim value, std::string why) {
    TraceEntry entry;
    entry.sequence = sequence_;
    entry.rule = rule;
    for (int r : reads) entry.reads.push_back(les_.ref(r));
    entry.write = les_.ref(p);
    entry.value = value;
    entry.justification = std::move(why);
    trace_.record(std::move(entry));
    les_.at(p) = std::move(value);
  }

  bool segment_pass() {
    bool changed = false;
    const int n = les_.size();
    int start = 0;
    while (start < n) {
      if (les_.at(start).is_zero()) {
        ++start;
        continue;
      }
      int end = start;
      while (end + 1 < n && !les_.at(end + 1).is_zero()) ++end;

      std::vector<int> unknown;
      for (int p = start; p <= end; ++p) {
        if (!les_.at(p).is_known()) unknown.push_back(p);
      }
      const std::size_t length = static_cast<std::size_t>(end - start + 1);
      if (unknown.empty()) {
        std::vector<int> reads;
        for (int p = start + 1; p <= end; ++p) reads.push_back(p);
        if (segment_value(les_, reads, start) != les_.at(start).value()) {
          contradiction("exact segment " + les_.ref(start).str() + ".." + les_.ref(end).str() +
                        " has nonzero alternating sum");
        }
      } else if (unknown.size() == 1 && (length <= 2 || options_.alternating_sums)) {
        const int w = unknown.front();
        std::vector<int> reads;
        if (start > 0) reads.push_back(start - 1);
        for (int p = start; p <= end; ++p) {
          if (p != w) reads.push_back(p);
        }
        if (end + 1 < n) reads.push_back(end + 1);
        const ExactInt value = segment_value(les_, reads, w);
        const Dim& current = les_.at(w);
        if (value < current.lower() || (current.upper() && value > *current.upper())) {
          contradiction(les_.ref(w).str() + " forced to " + value.get_str() + " outside " + current.str());
        }
        write(w, segment_rule(length), reads, Dim::known(value),
              "exact segment " + les_.ref(start).str() + ".." + les_.ref(end).str() + " bounded by zeros");
        changed = true;
      }
      start = end + 1;
    }
    return changed;
  }

  bool bound_pass() {
    bool changed = false;
    for (int p = 0; p < les_.size(); ++p) {
      if (les_.at(p).is_known()) continue;
      Dim next;
      try {
        next = tightened(les_, p);
      } catch (const std::range_error&) {
        contradiction("bounds at " + les_.ref(p).str() + " are inconsistent");
      }
      if (next == les_.at(p)) continue;
      write(p, "BOUND", bound_reads(les_, p), next, "rank bounds from neighbouring slots");
      changed = true;
    }
    return changed;
  }

  LongExact les_;
  const ChaseOptions& options_;
  ChaseTrace trace_;
  std::size_t sequence_ = 0;
};

void check_shape(const ShortExact& seq, const std::array<CohProfile, 3>& profiles) {
  if (profiles[0].size() != profiles[1].size() || profiles[1].size() != profiles[2].size() || profiles[0].size() == 0)
    throw std::invalid_argument("profiles of a short exact sequence must share their length");
  if (seq.left == seq.middle || seq.middle == seq.right || seq.left == seq.right)
    throw std::invalid_argument("short exact sequence objects need distinct labels");
}

}  // namespace

ChaseResult chase(const ShortExact& seq, std::array<CohProfile, 3> profiles, const ChaseOptions& options) {
  check_shape(seq, profiles);
  Chaser chaser(seq, profiles, options);
  chaser.run();
  return {std::move(profiles), std::move(chaser.trace())};
}

// ---------------------------------------------------------------- replay

namespace {

void replay_segment(const LongExact& les, const TraceEntry& entry, int w, const std::vector<int>& reads) {
  std::vector<int> all = reads;
  all.push_back(w);
  std::sort(all.begin(), all.end());
  for (std::size_t i = 1; i < all.size(); ++i) {
    if (all[i] != all[i - 1] + 1) throw ReplayMismatch(entry.rule + " reads a non-contiguous segment");
  }
  // Boundary slots must be zero; outside the sequence the boundary is implicit.
  int first = all.front();
  int last = all.back();
  if (first != w && les.at(first).is_zero()) ++first;
  else if (first > 0) throw ReplayMismatch(entry.rule + " segment is not bounded by a zero on the left");
  if (last != w && les.at(last).is_zero()) --last;
  else if (last < les.size() - 1) throw ReplayMismatch(entry.rule + " segment is not bounded by a zero on the right");
  for (int p : reads) {
    if (!les.at(p).is_known()) throw ReplayMismatch(entry.rule + " reads unknown slot " + les.ref(p).str());
  }
  if (segment_rule(static_cast<std::size_t>(last - first + 1)) != entry.rule)
    throw ReplayMismatch("rule name " + entry.rule + " does not match segment length");
  const Dim value = Dim::known(segment_value(les, reads, w));
  if (!(value == entry.value))
    throw ReplayMismatch(entry.write.str() + ": recorded " + entry.value.str() + ", replay gives " + value.str());
}

}  // namespace

ProfileMap replay(const ChaseTrace& trace, ProfileMap state) {
  for (const auto& entry : trace.entries()) {
    if (entry.rule == "ORACLE") {
      auto it = state.find(entry.write.object);
      if (it == state.end() || entry.write.q < 0 || entry.write.q > it->second.top_degree())
        throw ReplayMismatch("oracle value for unknown slot " + entry.write.str());
      const Dim& current = it->second[entry.write.q];
      if (!entry.value.is_known() || entry.value.value() < current.lower() ||
          (current.upper() && entry.value.value() > *current.upper()))
        throw ReplayMismatch("oracle value for " + entry.write.str() + " contradicts the chase");
      it->second[entry.write.q] = entry.value;
      continue;
    }
    const ShortExact& seq = trace.sequences().at(entry.sequence);
    std::array<CohProfile, 3> profiles;
    const std::array<const std::string*, 3> labels{&seq.left, &seq.middle, &seq.right};
    for (std::size_t i = 0; i < 3; ++i) {
      auto it = state.find(*labels[i]);
      if (it == state.end()) throw ReplayMismatch("no initial profile for " + *labels[i]);
      profiles[i] = it->second;
    }
    LongExact les(seq, profiles);
    const int w = les.position(entry.write);
    std::vector<int> reads;
    for (const auto& r : entry.reads) reads.push_back(les.position(r));

    if (entry.rule == "VANISH" || entry.rule == "ISO" || entry.rule == "ALTSUM") {
      replay_segment(les, entry, w, reads);
    } else if (entry.rule == "BOUND") {
      Dim value;
      try {
        value = tightened(les, w);
      } catch (const std::range_error&) {
        throw ReplayMismatch("bounds at " + entry.write.str() + " are inconsistent on replay");
      }
      if (!(value == entry.value))
        throw ReplayMismatch(entry.write.str() + ": recorded " + entry.value.str() + ", replay gives " + value.str());
    } else {
      throw ReplayMismatch("unknown rule " + entry.rule);
    }
    state[entry.write.object][entry.write.q] = entry.value;
  }
  return state;
}

}  // namespace koszulscope
