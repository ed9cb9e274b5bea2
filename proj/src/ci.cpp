#include "koszulscope/ci.hpp"

#include "koszulscope/oracle.hpp"

#include <map>
#include <numeric>
#include <stdexcept>

namespace koszulscope {

std::string k3_name(K3Type type) {
  switch (type) {
    case K3Type::Quartic: return "quartic";
    case K3Type::QuadricCubic: return "2-3";
    case K3Type::ThreeQuadrics: return "2-2-2";
  }
  throw std::logic_error("bad K3Type");
}

std::optional<K3Type> parse_k3_type(const std::string& name) {
  for (K3Type t : all_k3_types()) {
    if (k3_name(t) == name) return t;
  }
  return std::nullopt;
}

const std::vector<K3Type>& all_k3_types() {
  static const std::vector<K3Type> types{K3Type::Quartic, K3Type::QuadricCubic, K3Type::ThreeQuadrics};
  return types;
}

std::string status_name(DimStatus status) {
  switch (status) {
    case DimStatus::Determined: return "determined";
    case DimStatus::NeededOracle: return "needed-oracle";
    case DimStatus::Undetermined: return "undetermined";
  }
  throw std::logic_error("bad DimStatus");
}

// ---------------------------------------------------------------- CompleteIntersection

CompleteIntersection::CompleteIntersection(int n, std::vector<int> degrees) : n_(n), degrees_(std::move(degrees)) {
  if (degrees_.empty()) throw std::invalid_argument("a complete intersection needs at least one form");
  for (int d : degrees_) {
    if (d <= 1) throw std::invalid_argument("every degree must exceed 1");
  }
  if (n_ - codim() != 2) throw std::invalid_argument("complete intersection is not a surface");
}

CompleteIntersection CompleteIntersection::of(K3Type type) {
  switch (type) {
    case K3Type::Quartic: return CompleteIntersection(3, {4});
    case K3Type::QuadricCubic: return CompleteIntersection(4, {2, 3});
    case K3Type::ThreeQuadrics: return CompleteIntersection(5, {2, 2, 2});
  }
  throw std::logic_error("bad K3Type");
}

ExactInt CompleteIntersection::degree() const {
  ExactInt out = 1;
  for (int d : degrees_) out *= d;
  return out;
}

bool CompleteIntersection::is_k3() const {
  return std::accumulate(degrees_.begin(), degrees_.end(), 0) == n_ + 1;
}

std::vector<SheafExpr> CompleteIntersection::resolution_terms(const SheafExpr& f) const {
  const unsigned c = static_cast<unsigned>(codim());
  std::vector<std::vector<Summand>> by_size(c + 1);
  for (unsigned mask = 1; mask < (1U << c); ++mask) {
    long shift = 0;
    for (unsigned i = 0; i < c; ++i) {
      if (mask & (1U << i)) shift += degrees_[i];
    }
    by_size[static_cast<std::size_t>(__builtin_popcount(mask))].push_back({SheafKind::Structure, -shift, 1});
  }
  std::vector<SheafExpr> terms;
  for (unsigned j = 1; j <= c; ++j) terms.push_back(tensor(SheafExpr::bundle(n_, by_size[j]), f));
  return terms;
}

ExactInt hilbert_closed_form(const CompleteIntersection& x, long m) {
  const auto& degs = x.degrees();
  ExactInt sum = 0;
  for (unsigned mask = 0; mask < (1U << degs.size()); ++mask) {
    long shift = 0;
    for (std::size_t i = 0; i < degs.size(); ++i) {
      if (mask & (1U << i)) shift += degs[i];
    }
    const ExactInt term = binomial(x.n() + m - shift, x.n());
    if (__builtin_popcount(mask) % 2 == 0) sum += term;
    else sum -= term;
  }
  return sum;
}

// ---------------------------------------------------------------- chases

namespace {

// Sheaves supported on a surface have no cohomology above degree 2.
CohProfile surface_profile(int n) {
  CohProfile p = CohProfile::unknown(n);
  for (int q = 3; q <= n; ++q) p[q] = Dim::known(0);
  return p;
}

// 0 -> F (x) I_X -> F -> i_* i^* F -> 0, with F (x) I_X resolved by Koszul.
const CohProfile& chase_pullback(ChaseSession& session, const CompleteIntersection& x, const SheafExpr& f) {
  const SheafExpr pulled = f.pullback();
  if (session.has(pulled.label())) return session.profile(pulled);
  session.seed(pulled.label(), surface_profile(x.n()));
  const SheafExpr ideal = f.ideal_tensor();
  chase_resolution(session, x.resolution_terms(f), ideal);
  session.run(ideal, f, pulled);
  return session.profile(pulled);
}

std::string twist_str(long k) { return "(" + std::to_string(k) + ")"; }

SheafExpr structure_sum(int n, const std::vector<int>& degrees, long base, int sign) {
  std::vector<Summand> summands;
  for (int dj : degrees) summands.push_back({SheafKind::Structure, base + sign * dj, 1});
  return SheafExpr::bundle(n, summands);
}

void export_session(const ChaseSession& session, ChaseTrace& trace, ProfileMap& initial, ProfileMap& final) {
  trace = session.trace();
  initial = session.initial();
  final = session.current();
}

}  // namespace

CohProfile coh_pullback_structure(const CompleteIntersection& x, long m, const ChaseOptions& options) {
  ChaseSession session(options);
  CohProfile profile = chase_pullback(session, x, SheafExpr::line(x.n(), SheafKind::Structure, m));
  const ExactInt expected = hilbert_closed_form(x, m);
  if (profile[0].is_known() && profile[0].value() != expected) {
    throw std::logic_error("chased h0(X,i*O" + twist_str(m) + ") = " + profile[0].value().get_str() +
                           " disagrees with the Hilbert function " + expected.get_str());
  }
  return profile;
}

ChasedValue coh_pullback_omega1(K3Type type, long k, const EngineOptions& options) {
  const CompleteIntersection x = CompleteIntersection::of(type);
  ChaseSession session(options.chase);
  const SheafExpr omega = SheafExpr::line(x.n(), SheafKind::Cotangent1, k);
  const Dim h0 = chase_pullback(session, x, omega)[0];
  ChasedValue out;
  if (h0.is_known()) {
    out.value = h0.value();
    out.status = DimStatus::Determined;
  } else if (options.oracle_fallback) {
    out.value = euler_kernel_dim(canonical_model(type), static_cast<int>(k));
    session.record_oracle(omega.pullback().label(), 0, *out.value);
    out.status = DimStatus::NeededOracle;
  }
  export_session(session, out.trace, out.initial, out.final);
  return out;
}

ExactInt structure_terms(K3Type type, long d) {
  const CompleteIntersection x = CompleteIntersection::of(type);
  ExactInt sum = 0;
  for (int dj : x.degrees()) {
    const CohProfile p = coh_pullback_structure(x, d - 1 - dj);
    sum += p[0].value();
  }
  return sum;
}

FoliationSpaceResult foliation_space_dim(K3Type type, long d, const EngineOptions& options) {
  const CompleteIntersection x = CompleteIntersection::of(type);
  const int n = x.n();
  ChaseSession session(options.chase);
  bool used_oracle = false;

  const SheafExpr omega = SheafExpr::line(n, SheafKind::Cotangent1, d - 1);
  if (!chase_pullback(session, x, omega)[0].is_known() && options.oracle_fallback) {
    session.record_oracle(omega.pullback().label(), 0,
                          euler_kernel_dim(canonical_model(type), static_cast<int>(d - 1)));
    used_oracle = true;
  }

  // Conormal sequence 0 -> (+)_j O_X(d-1-d_j) -> i^*Omega^1(d-1) -> Omega^1_X(d-1) -> 0.
  const SheafExpr conormal = structure_sum(n, x.degrees(), d - 1, -1);
  chase_pullback(session, x, conormal);
  const SheafExpr target = SheafExpr::named(n, "Omega1_X" + twist_str(d - 1));
  session.seed(target.label(), surface_profile(n));
  session.run(conormal.pullback(), omega.pullback(), target);

  FoliationSpaceResult out;
  out.d = d;
  const Dim h0 = session.profile(target)[0];
  if (h0.is_known()) {
    out.h0 = h0.value();
    out.status = used_oracle ? DimStatus::NeededOracle : DimStatus::Determined;
  } else if (options.oracle_fallback) {
    const GradedQuotient& model = canonical_model(type);
    out.h0 = d >= 1 ? foliation_dim_oracle(model, static_cast<int>(d)) : euler_kernel_dim(model, static_cast<int>(d - 1));
    session.record_oracle(target.label(), 0, out.h0);
    out.status = DimStatus::NeededOracle;
  } else {
    out.h0 = 0;  // meaningless; status says so
    out.status = DimStatus::Undetermined;
  }
  export_session(session, out.trace, out.initial, out.final);
  return out;
}

ExactInt singular_scheme_degree(K3Type type, long d) {
  const ExactInt e = d - 1;
  return 24 + e * e * CompleteIntersection::of(type).degree();
}

UniquenessCertificate uniqueness_certificate(K3Type type, long d, const ChaseOptions& options) {
  if (d < 3) throw std::invalid_argument("uniqueness certificates need d >= 3");
  const CompleteIntersection x = CompleteIntersection::of(type);
  const int n = x.n();
  ChaseSession session(options);

  // Normal sequence 0 -> Theta_X(1-d) -> i^*Theta(1-d) -> (+)_j O_X(d_j+1-d) -> 0.
  const SheafExpr theta = SheafExpr::line(n, SheafKind::Tangent, 1 - d);
  const SheafExpr normal = structure_sum(n, x.degrees(), 1 - d, 1);
  const CohProfile theta_pb = chase_pullback(session, x, theta);
  chase_pullback(session, x, normal);
  const SheafExpr target = SheafExpr::named(n, "Theta_X" + twist_str(1 - d));
  session.seed(target.label(), surface_profile(n));
  session.run(target, theta.pullback(), normal.pullback());

  UniquenessCertificate out;
  out.type = type;
  out.d = d;
  out.target = {target.label(), 1};
  out.certified = session.profile(target)[1].is_zero();

  std::map<long, bool> seen;
  for (int dj : x.degrees()) {
    const long m = dj + 1 - d;
    if (seen[m]) continue;
    seen[m] = true;
    const Dim h = chase_pullback(session, x, SheafExpr::line(n, SheafKind::Structure, m))[0];
    if (!h.is_zero()) out.obstructions.push_back("h0(X,i*O" + twist_str(m) + ") = " + h.str());
  }
  const Dim h1 = session.profile(theta.pullback())[1];
  if (!h1.is_zero()) out.obstructions.push_back("h1(X,i*Theta" + twist_str(1 - d) + ") = " + h1.str());
  if (out.certified) out.obstructions.clear();
  else if (out.obstructions.empty()) out.obstructions.push_back("h1(X,Theta_X" + twist_str(1 - d) + ") not forced to 0");

  export_session(session, out.trace, out.initial, out.final);
  return out;
}

long uniqueness_threshold(K3Type type) {
  constexpr long window = 48;
  constexpr long cap = 1000;
  std::map<long, bool> verdict;
  auto certified = [&](long d) {
    auto it = verdict.find(d);
    if (it == verdict.end()) it = verdict.emplace(d, uniqueness_certificate(type, d).certified).first;
    return it->second;
  };
  for (long d = 3; d <= cap; ++d) {
    bool all = true;
    for (long e = d; e < d + window && all; ++e) all = certified(e);
    if (all) return d;
  }
  throw std::runtime_error("no uniqueness threshold below " + std::to_string(cap));
}

// ---------------------------------------------------------------- tables

DimTable foliation_table(K3Type type, long dmin, long dmax, const EngineOptions& options) {
  DimTable table;
  for (long d = dmin; d <= dmax; ++d) {
    const FoliationSpaceResult r = foliation_space_dim(type, d, options);
    if (r.status == DimStatus::Undetermined) throw std::runtime_error("foliation space left undetermined");
    table.set(d, r.h0);
  }
  return table;
}

DimTable omega1_table(K3Type type, long dmin, long dmax, const EngineOptions& options) {
  DimTable table;
  for (long d = dmin; d <= dmax; ++d) {
    const ChasedValue v = coh_pullback_omega1(type, d - 1, options);
    if (!v.value) throw std::runtime_error("h0 of the restricted cotangent bundle left undetermined");
    table.set(d, *v.value);
  }
  return table;
}

DimTable structure_terms_table(K3Type type, long dmin, long dmax) {
  DimTable table;
  for (long d = dmin; d <= dmax; ++d) table.set(d, structure_terms(type, d));
  return table;
}

const GradedQuotient& canonical_model(K3Type type) {
  static const GradedQuotient quartic = fermat_quartic();
  static const GradedQuotient quadric_cubic = quadric_cubic_model();
  static const GradedQuotient three_quadrics = three_quadrics_model();
  switch (type) {
    case K3Type::Quartic: return quartic;
    case K3Type::QuadricCubic: return quadric_cubic;
    case K3Type::ThreeQuadrics: return three_quadrics;
  }
  throw std::logic_error("bad K3Type");
}

}  // namespace koszulscope
