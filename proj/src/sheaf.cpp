#include "koszulscope/sheaf.hpp"

#include <algorithm>
#include <stdexcept>

namespace koszulscope {

namespace {

std::vector<Summand> normalized(std::vector<Summand> in) {
  std::sort(in.begin(), in.end(), [](const Summand& a, const Summand& b) {
    if (a.kind != b.kind) return a.kind < b.kind;
    return a.twist > b.twist;
  });
  std::vector<Summand> out;
  for (const auto& s : in) {
    if (s.multiplicity < 0) throw std::invalid_argument("negative multiplicity");
    if (s.multiplicity == 0) continue;
    if (!out.empty() && out.back().kind == s.kind && out.back().twist == s.twist) {
      out.back().multiplicity += s.multiplicity;
    } else {
      out.push_back(s);
    }
  }
  return out;
}

}  // namespace

SheafExpr SheafExpr::zero(int n) { return bundle(n, {}); }

SheafExpr SheafExpr::bundle(int n, std::vector<Summand> summands) {
  if (n < 2) throw std::domain_error("ambient dimension must be at least 2");
  SheafExpr out(Form::Bundle, n);
  out.summands_ = normalized(std::move(summands));
  return out;
}

SheafExpr SheafExpr::line(int n, SheafKind kind, long twist, int multiplicity) {
  return bundle(n, {{kind, twist, multiplicity}});
}

SheafExpr SheafExpr::named(int n, std::string name) {
  if (name.empty() || name.find_first_of(" \t\n") != std::string::npos)
    throw std::invalid_argument("object names must be non-empty and space-free");
  SheafExpr out(Form::Named, n);
  out.name_ = std::move(name);
  return out;
}

SheafExpr SheafExpr::ideal_tensor() const {
  if (form_ != Form::Bundle) throw std::logic_error("ideal tensor needs a bundle");
  SheafExpr out = *this;
  out.form_ = Form::IdealTensor;
  return out;
}

SheafExpr SheafExpr::pullback() const {
  if (form_ != Form::Bundle) throw std::logic_error("pullback needs a bundle");
  SheafExpr out = *this;
  out.form_ = Form::Pullback;
  return out;
}

SheafExpr tensor(const SheafExpr& a, const SheafExpr& b) {
  if (a.form_ != SheafExpr::Form::Bundle || b.form_ != SheafExpr::Form::Bundle)
    throw std::logic_error("tensor product is only formed between bundles");
  if (a.n_ != b.n_) throw std::invalid_argument("tensor product across different ambients");
  std::vector<Summand> out;
  for (const auto& x : a.summands_) {
    for (const auto& y : b.summands_) {
      if (x.kind != SheafKind::Structure && y.kind != SheafKind::Structure)
        throw std::logic_error("only twists of O can multiply Omega^1 or Theta");
      const SheafKind kind = x.kind == SheafKind::Structure ? y.kind : x.kind;
      out.push_back({kind, x.twist + y.twist, x.multiplicity * y.multiplicity});
    }
  }
  return SheafExpr::bundle(a.n_, std::move(out));
}

std::string SheafExpr::bundle_label() const {
  if (summands_.empty()) return "0";
  std::string out;
  for (const auto& s : summands_) {
    if (!out.empty()) out += "+";
    out += kind_symbol(s.kind) + "(" + std::to_string(s.twist) + ")";
    if (s.multiplicity != 1) out += "^" + std::to_string(s.multiplicity);
  }
  return out;
}

std::string SheafExpr::label() const {
  const std::string inner = bundle_label();
  const bool compound = summands_.size() > 1 || (summands_.size() == 1 && summands_[0].multiplicity != 1);
  switch (form_) {
    case Form::Bundle: return inner;
    case Form::IdealTensor: return compound ? "I_X*(" + inner + ")" : "I_X*" + inner;
    case Form::Pullback: return compound ? "i*(" + inner + ")" : "i*" + inner;
    case Form::Named: return name_;
  }
  return name_;
}

std::optional<CohProfile> SheafExpr::bott_profile() const {
  if (form_ != Form::Bundle) return std::nullopt;
  std::vector<ExactInt> dims(static_cast<std::size_t>(n_ + 1), ExactInt(0));
  for (const auto& s : summands_) {
    for (int q = 0; q <= n_; ++q) dims[static_cast<std::size_t>(q)] += s.multiplicity * coh({s.kind, s.twist, n_}, q);
  }
  return CohProfile::known(dims);
}

// ---------------------------------------------------------------- session

const CohProfile& ChaseSession::profile(const SheafExpr& sheaf) {
  const std::string key = sheaf.label();
  auto it = current_.find(key);
  if (it != current_.end()) return it->second;
  CohProfile start = sheaf.bott_profile().value_or(CohProfile::unknown(sheaf.ambient_dim()));
  initial_[key] = start;
  return current_[key] = std::move(start);
}

void ChaseSession::seed(const std::string& label, CohProfile profile) {
  if (current_.count(label) != 0) throw std::logic_error("object already in use: " + label);
  initial_[label] = profile;
  current_[label] = std::move(profile);
}

void ChaseSession::run(const SheafExpr& left, const SheafExpr& middle, const SheafExpr& right) {
  const ShortExact seq{left.label(), middle.label(), right.label()};
  std::array<CohProfile, 3> profiles{profile(left), profile(middle), profile(right)};
  ChaseResult result = chase(seq, std::move(profiles), options_);
  trace_.append(result.trace);
  current_[seq.left] = std::move(result.profiles[0]);
  current_[seq.middle] = std::move(result.profiles[1]);
  current_[seq.right] = std::move(result.profiles[2]);
}

void ChaseSession::record_oracle(const std::string& label, int q, const ExactInt& value) {
  auto it = current_.find(label);
  if (it == current_.end()) throw std::logic_error("oracle value for unknown object " + label);
  const Dim& current = it->second[q];
  if (value < current.lower() || (current.upper() && value > *current.upper()))
    throw ChaseContradiction("oracle value " + value.get_str() + " for " + label + " contradicts " + current.str(),
                             trace_);
  const std::size_t seq = trace_.add_sequence({label, "oracle", "-"});
  TraceEntry entry;
  entry.sequence = seq;
  entry.rule = "ORACLE";
  entry.write = {label, q};
  entry.value = Dim::known(value);
  entry.justification = "graded linear algebra on an explicit model";
  trace_.record(std::move(entry));
  it->second[q] = Dim::known(value);
}

// ---------------------------------------------------------------- resolutions

const CohProfile& chase_resolution(ChaseSession& session, const std::vector<SheafExpr>& terms,
                                   const SheafExpr& target) {
  if (terms.empty()) throw std::invalid_argument("a resolution needs at least one term");
  for (const auto& t : terms) {
    if (t.form() != SheafExpr::Form::Bundle) throw std::invalid_argument("resolution terms must be bundles");
  }
  const int n = target.ambient_dim();
  if (terms.size() == 1) {
    session.run(terms[0], target, SheafExpr::zero(n));
    return session.profile(target);
  }
  // 0 -> E_c -> E_{c-1} -> Z -> 0, then 0 -> Z -> E_{c-2} -> Z' -> 0, ...,
  // finally 0 -> Z -> E_1 -> target -> 0.
  SheafExpr left = terms.back();
  for (std::size_t i = terms.size() - 1; i-- > 0;) {
    const SheafExpr right =
        i == 0 ? target : SheafExpr::named(n, "Z" + std::to_string(i) + "(" + target.label() + ")");
    session.run(left, terms[i], right);
    left = right;
  }
  return session.profile(target);
}

ResolutionChase chase_resolution(const std::vector<SheafExpr>& terms, const SheafExpr& target,
                                 const ChaseOptions& options) {
  ChaseSession session(options);
  CohProfile profile = chase_resolution(session, terms, target);
  return {std::move(profile), session.trace(), session.initial(), session.current()};
}

}  // namespace koszulscope
