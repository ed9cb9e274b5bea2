#include "koszulscope/oracle.hpp"

#include <algorithm>
#include <fstream>
#include <sstream>

namespace koszulscope {

namespace {

// Generator scaled to integer coefficients, as a list of (exponents, value).
std::vector<std::pair<Exponents, ExactInt>> integral_terms(const Polynomial& g) {
  ExactInt scale = 1;
  for (const auto& [e, c] : g.terms()) scale = lcm(scale, ExactInt(c.get_den()));
  std::vector<std::pair<Exponents, ExactInt>> out;
  for (const auto& [e, c] : g.terms()) out.emplace_back(e, c.get_num() * (scale / c.get_den()));
  return out;
}

SparseVector to_sparse(const IdealPiece& piece, const Polynomial& p) {
  SparseVector v;
  for (const auto& [e, c] : p.terms()) {
    auto it = piece.index.find(e);
    if (it == piece.index.end()) throw std::invalid_argument("polynomial is not homogeneous of the piece degree");
    v[it->second] += c;
  }
  return v;
}

Polynomial multiply_monomial(const Polynomial& p, const Exponents& u) {
  return p * Polynomial::monomial(p.nvars(), u);
}

Polynomial determinant(const std::vector<std::vector<Polynomial>>& m) {
  const std::size_t size = m.size();
  if (size == 1) return m[0][0];
  Polynomial out(m[0][0].nvars());
  for (std::size_t col = 0; col < size; ++col) {
    if (m[0][col].is_zero()) continue;
    std::vector<std::vector<Polynomial>> minor;
    for (std::size_t r = 1; r < size; ++r) {
      std::vector<Polynomial> row;
      for (std::size_t c = 0; c < size; ++c) {
        if (c != col) row.push_back(m[r][c]);
      }
      minor.push_back(std::move(row));
    }
    Polynomial term = m[0][col] * determinant(minor);
    if (col % 2 == 0) out += term;
    else out -= term;
  }
  return out;
}

void choose(int n, int k, int start, std::vector<int>& current, std::vector<std::vector<int>>& out) {
  if (static_cast<int>(current.size()) == k) {
    out.push_back(current);
    return;
  }
  for (int i = start; i < n; ++i) {
    current.push_back(i);
    choose(n, k, i + 1, current, out);
    current.pop_back();
  }
}

}  // namespace

IdealPiece ideal_piece(int nvars, const std::vector<Polynomial>& generators, int degree) {
  IdealPiece piece;
  piece.degree = degree;
  piece.monomials = monomials(nvars, degree);
  for (std::size_t i = 0; i < piece.monomials.size(); ++i) piece.index.emplace(piece.monomials[i], i);
  piece.ideal = SparseEchelon(piece.monomials.size());

  Exponents shifted(static_cast<std::size_t>(nvars));
  std::vector<SparseRow> rows;
  for (const auto& g : generators) {
    const int shift = degree - g.degree().value_or(0);
    if (g.is_zero() || shift < 0) continue;
    const auto terms = integral_terms(g);
    for (const auto& u : monomials(nvars, shift)) {
      SparseRow row;
      row.reserve(terms.size());
      for (const auto& [e, c] : terms) {
        for (std::size_t i = 0; i < shifted.size(); ++i) shifted[i] = e[i] + u[i];
        row.emplace_back(piece.index.at(shifted), c);
      }
      std::sort(row.begin(), row.end(), [](const auto& a, const auto& b) { return a.first < b.first; });
      rows.push_back(std::move(row));
    }
  }
  // Rows with lex-smaller leads go in first; this cuts fill-in and
  // coefficient growth by an order of magnitude on mixed-degree ideals.
  std::sort(rows.begin(), rows.end(), [](const SparseRow& a, const SparseRow& b) { return a.front().first > b.front().first; });
  for (auto& row : rows) piece.ideal.insert(std::move(row));
  for (std::size_t col = 0; col < piece.monomials.size(); ++col) {
    if (!piece.ideal.is_pivot(col)) {
      piece.position.emplace(col, piece.basis.size());
      piece.basis.push_back(col);
    }
  }
  return piece;
}

// ---------------------------------------------------------------- GradedQuotient

GradedQuotient::GradedQuotient(int n, std::vector<Polynomial> forms) : n_(n), forms_(std::move(forms)) {
  if (n < 1) throw std::invalid_argument("ambient dimension must be positive");
  std::map<int, std::vector<const Polynomial*>> by_degree;
  for (const auto& f : forms_) {
    if (f.nvars() != n + 1) throw std::invalid_argument("form has the wrong number of variables");
    if (f.is_zero() || !f.is_homogeneous() || *f.degree() < 1)
      throw std::invalid_argument("forms must be nonzero homogeneous of positive degree");
    by_degree[*f.degree()].push_back(&f);
  }
  // Echelon each degree group so the generators have distinct leading
  // monomials; this spares the piece builders a lot of reduction work.
  for (const auto& [deg, group] : by_degree) {
    std::vector<Polynomial> as_list;
    for (const auto* f : group) as_list.push_back(*f);
    const IdealPiece piece = ideal_piece(nvars(), as_list, deg);
    // Each pivot monomial minus its normal form is an element of the span
    // whose leading monomial is that pivot.
    for (std::size_t col = 0; col < piece.monomials.size(); ++col) {
      if (!piece.ideal.is_pivot(col)) continue;
      SparseVector unit{{col, ExactRat(1)}};
      const SparseVector rest = piece.ideal.reduce(unit);
      Polynomial g = Polynomial::monomial(nvars(), piece.monomials[col]);
      for (const auto& [c, v] : rest) g.add_term(piece.monomials[c], -v);
      generators_.push_back(std::move(g));
    }
  }
}

std::vector<int> GradedQuotient::degrees() const {
  std::vector<int> out;
  for (const auto& f : forms_) out.push_back(*f.degree());
  return out;
}

const IdealPiece& GradedQuotient::piece(int m) const {
  static const IdealPiece empty{};
  if (m < 0) return empty;
  std::lock_guard<std::mutex> lock(mutex_);
  auto it = cache_.find(m);
  if (it == cache_.end()) {
    it = cache_.emplace(m, std::make_unique<IdealPiece>(ideal_piece(nvars(), generators_, m))).first;
  }
  return *it->second;
}

ExactInt GradedQuotient::koszul_prediction(int m) const {
  const auto degs = degrees();
  ExactInt sum = 0;
  for (unsigned mask = 0; mask < (1U << degs.size()); ++mask) {
    long shift = 0;
    int size = 0;
    for (std::size_t i = 0; i < degs.size(); ++i) {
      if (mask & (1U << i)) {
        shift += degs[i];
        ++size;
      }
    }
    const ExactInt term = binomial(n_ + m - shift, n_);
    sum += (size % 2 == 0) ? term : ExactInt(-term);
  }
  return sum;
}

ExactInt GradedQuotient::hilbert_function(int m) const {
  const ExactInt computed = static_cast<unsigned long>(piece(m).basis.size());
  const ExactInt predicted = koszul_prediction(m);
  if (computed != predicted) {
    std::ostringstream msg;
    msg << "forms are not a regular sequence: dim (R/I)_" << m << " = " << computed.get_str()
        << " but the Koszul complex predicts " << predicted.get_str();
    throw RegularSequenceError(msg.str());
  }
  return computed;
}

std::vector<ExactRat> GradedQuotient::coordinates(const Polynomial& p, int degree) const {
  if (!p.is_zero() && (!p.is_homogeneous() || *p.degree() != degree))
    throw std::invalid_argument("polynomial is not homogeneous of the requested degree");
  const IdealPiece& pc = piece(degree);
  std::vector<ExactRat> out(pc.basis.size());
  if (p.is_zero()) return out;
  for (const auto& [col, v] : pc.ideal.reduce(to_sparse(pc, p))) out[pc.position.at(col)] = v;
  return out;
}

bool GradedQuotient::in_ideal(const Polynomial& p) const {
  if (p.is_zero()) return true;
  if (!p.is_homogeneous()) throw std::invalid_argument("membership is only decided for homogeneous polynomials");
  const IdealPiece& pc = piece(*p.degree());
  return pc.ideal.reduce(to_sparse(pc, p)).empty();
}

// ---------------------------------------------------------------- maps

GradedMap euler_map(const GradedQuotient& q, int k) {
  GradedMap map;
  map.target_degree = k;
  map.source_degrees.assign(static_cast<std::size_t>(q.nvars()), k - 1);
  const IdealPiece& source = q.piece(k - 1);
  const IdealPiece& target = q.piece(k);
  map.matrix = RatMatrix(target.basis.size(), source.basis.size() * static_cast<std::size_t>(q.nvars()));
  std::size_t col = 0;
  for (int i = 0; i < q.nvars(); ++i) {
    const Polynomial xi = Polynomial::variable(q.nvars(), i);
    for (std::size_t b : source.basis) {
      const auto coords = q.coordinates(multiply_monomial(xi, source.monomials[b]), k);
      for (std::size_t r = 0; r < coords.size(); ++r) map.matrix(r, col) = coords[r];
      ++col;
    }
  }
  return map;
}

ExactInt euler_kernel_dim(const GradedQuotient& q, int k) {
  return static_cast<unsigned long>(euler_map(q, k).kernel_dim());
}

GradedMap conormal_map(const GradedQuotient& q, int d) {
  GradedMap map;
  map.target_degree = d - 2;
  const IdealPiece& target = q.piece(d - 2);
  const std::size_t block = target.basis.size();
  std::vector<std::vector<ExactRat>> columns;
  for (const auto& f : q.forms()) {
    const int sdeg = d - 1 - *f.degree();
    map.source_degrees.push_back(sdeg);
    const IdealPiece& source = q.piece(sdeg);
    for (std::size_t b : source.basis) {
      std::vector<ExactRat> column;
      column.reserve(block * static_cast<std::size_t>(q.nvars()));
      for (int i = 0; i < q.nvars(); ++i) {
        const auto coords = q.coordinates(multiply_monomial(f.derivative(i), source.monomials[b]), d - 2);
        column.insert(column.end(), coords.begin(), coords.end());
      }
      columns.push_back(std::move(column));
    }
  }
  map.matrix = RatMatrix(block * static_cast<std::size_t>(q.nvars()), columns.size());
  for (std::size_t c = 0; c < columns.size(); ++c) {
    for (std::size_t r = 0; r < columns[c].size(); ++r) map.matrix(r, c) = columns[c][r];
  }
  return map;
}

ExactInt foliation_dim_oracle(const GradedQuotient& q, int d) {
  if (d < 1) throw std::invalid_argument("foliation degree must be at least 1");
  const GradedMap conormal = conormal_map(q, d);
  const IdealPiece& target = q.piece(d - 2);
  const std::size_t block = target.basis.size();

  // Lift each image vector to standard monomials and check that sum x_i a_i
  // vanishes in (R/I)_{d-1}.
  for (std::size_t c = 0; c < conormal.matrix.cols(); ++c) {
    Polynomial contraction(q.nvars());
    for (int i = 0; i < q.nvars(); ++i) {
      Polynomial a(q.nvars());
      for (std::size_t b = 0; b < block; ++b) {
        a.add_term(target.monomials[target.basis[b]], conormal.matrix(static_cast<std::size_t>(i) * block + b, c));
      }
      contraction += Polynomial::variable(q.nvars(), i) * a;
    }
    if (!q.in_ideal(contraction)) throw InconsistentInput("conormal image is not contained in the Euler kernel");
  }
  return euler_kernel_dim(q, d - 1) - static_cast<unsigned long>(conormal.rank());
}

// ---------------------------------------------------------------- vector fields

HomogeneousVectorField::HomogeneousVectorField(std::vector<Polynomial> components)
    : components_(std::move(components)) {
  if (components_.size() < 2) throw std::invalid_argument("vector field needs at least two components");
  const int nvars = static_cast<int>(components_.size());
  std::optional<int> degree;
  for (const auto& c : components_) {
    if (c.nvars() != nvars) throw std::invalid_argument("component lives in the wrong ring");
    if (c.is_zero()) continue;
    if (!c.is_homogeneous()) throw std::invalid_argument("component is not homogeneous");
    if (degree && *degree != *c.degree()) throw std::invalid_argument("components have different degrees");
    degree = c.degree();
  }
  if (!degree) throw std::invalid_argument("vector field is zero");
  degree_ = *degree;
}

HomogeneousVectorField HomogeneousVectorField::radial(int n) {
  std::vector<Polynomial> comps;
  for (int i = 0; i <= n; ++i) comps.push_back(Polynomial::variable(n + 1, i));
  return HomogeneousVectorField(std::move(comps));
}

Polynomial HomogeneousVectorField::apply(const Polynomial& g) const {
  Polynomial out(g.nvars());
  for (int i = 0; i <= n(); ++i) out += components_[static_cast<std::size_t>(i)] * g.derivative(i);
  return out;
}

bool is_invariant(const HomogeneousVectorField& f, const GradedQuotient& q) {
  if (f.n() != q.n()) throw std::invalid_argument("vector field and quotient live over different spaces");
  for (const auto& g : q.forms()) {
    if (!q.in_ideal(f.apply(g))) return false;
  }
  return true;
}

std::vector<HomogeneousVectorField> hamiltonian_fields(const Polynomial& f) {
  std::vector<HomogeneousVectorField> out;
  const int nvars = f.nvars();
  for (int i = 0; i < nvars; ++i) {
    for (int j = i + 1; j < nvars; ++j) {
      std::vector<Polynomial> comps(static_cast<std::size_t>(nvars), Polynomial(nvars));
      comps[static_cast<std::size_t>(i)] = f.derivative(j);
      comps[static_cast<std::size_t>(j)] = -f.derivative(i);
      out.emplace_back(std::move(comps));
    }
  }
  return out;
}

ExactInt section_span_dim(const GradedQuotient& q, const std::vector<HomogeneousVectorField>& fields) {
  if (fields.empty()) return 0;
  const int deg = fields.front().degree();
  const std::size_t block = q.piece(deg).basis.size();
  auto stacked = [&](const std::vector<Polynomial>& comps) {
    std::vector<ExactRat> v;
    for (const auto& c : comps) {
      const auto coords = q.coordinates(c, deg);
      v.insert(v.end(), coords.begin(), coords.end());
    }
    return v;
  };

  std::vector<std::vector<ExactRat>> radial_rows;
  const IdealPiece& lower = q.piece(deg - 1);
  const HomogeneousVectorField r = HomogeneousVectorField::radial(q.n());
  for (std::size_t b : lower.basis) {
    std::vector<Polynomial> comps;
    for (const auto& c : r.components()) comps.push_back(multiply_monomial(c, lower.monomials[b]));
    radial_rows.push_back(stacked(comps));
  }
  std::vector<std::vector<ExactRat>> all_rows = radial_rows;
  for (const auto& f : fields) {
    if (f.degree() != deg || f.n() != q.n()) throw std::invalid_argument("fields must share degree and ambient space");
    all_rows.push_back(stacked(f.components()));
  }

  auto rank_of = [&](const std::vector<std::vector<ExactRat>>& rows) {
    RatMatrix m(rows.size(), block * static_cast<std::size_t>(q.nvars()));
    for (std::size_t i = 0; i < rows.size(); ++i) {
      for (std::size_t j = 0; j < rows[i].size(); ++j) m(i, j) = rows[i][j];
    }
    return bareiss_rank(m);
  };
  return static_cast<unsigned long>(rank_of(all_rows) - rank_of(radial_rows));
}

SingularSchemeIdeal singular_scheme_ideal(const HomogeneousVectorField& f) {
  SingularSchemeIdeal out;
  const int nvars = f.n() + 1;
  out.common_factor = Polynomial(nvars);
  for (int i = 0; i < nvars; ++i) {
    for (int j = i + 1; j < nvars; ++j) {
      Polynomial minor = Polynomial::variable(nvars, i) * f.components()[static_cast<std::size_t>(j)] -
                         Polynomial::variable(nvars, j) * f.components()[static_cast<std::size_t>(i)];
      out.common_factor = gcd(out.common_factor, minor);
      out.minors.push_back(std::move(minor));
    }
  }
  return out;
}

bool is_smooth(const GradedQuotient& q, int max_degree) {
  const int c = static_cast<int>(q.forms().size());
  std::vector<Polynomial> generators = q.forms();
  std::vector<std::vector<int>> subsets;
  std::vector<int> current;
  choose(q.nvars(), c, 0, current, subsets);
  for (const auto& cols : subsets) {
    std::vector<std::vector<Polynomial>> jac;
    for (const auto& f : q.forms()) {
      std::vector<Polynomial> row;
      for (int col : cols) row.push_back(f.derivative(col));
      jac.push_back(std::move(row));
    }
    Polynomial minor = determinant(jac);
    if (!minor.is_zero()) generators.push_back(std::move(minor));
  }
  for (int m = 0; m <= max_degree; ++m) {
    if (ideal_piece(q.nvars(), generators, m).basis.empty()) return true;
  }
  return false;
}

// ---------------------------------------------------------------- models

namespace {

Polynomial power_sum(int nvars, int power, const std::vector<long>& weights) {
  Polynomial p(nvars);
  for (int i = 0; i < nvars; ++i) {
    Exponents e(static_cast<std::size_t>(nvars), 0);
    e[static_cast<std::size_t>(i)] = power;
    p.add_term(e, weights[static_cast<std::size_t>(i)]);
  }
  return p;
}

}  // namespace

GradedQuotient fermat_quartic() { return GradedQuotient(3, {power_sum(4, 4, {1, 1, 1, 1})}); }

GradedQuotient quadric_cubic_model() {
  const std::vector<long> ones(5, 1);
  return GradedQuotient(4, {power_sum(5, 2, ones), power_sum(5, 3, ones)});
}

GradedQuotient three_quadrics_model() {
  return GradedQuotient(5, {power_sum(6, 2, {1, 1, 1, 1, 1, 1}), power_sum(6, 2, {0, 1, 2, 3, 4, 5}),
                            power_sum(6, 2, {0, 1, 4, 9, 16, 25})});
}

GradedQuotient parse_model(const std::string& text) {
  std::istringstream in(text);
  std::string line;
  int line_no = 0;
  std::optional<int> n;
  std::vector<int> degrees;
  std::vector<Polynomial> forms;
  auto fail = [&](const std::string& why) {
    throw ModelFormatError("model line " + std::to_string(line_no) + ": " + why);
  };
  auto parse_int = [&](const std::string& s) {
    std::size_t used = 0;
    int v = 0;
    try {
      v = std::stoi(s, &used);
    } catch (const std::exception&) {
      fail("expected an integer, got '" + s + "'");
    }
    if (used != s.size()) fail("expected an integer, got '" + s + "'");
    return v;
  };
  auto split = [](const std::string& s, char sep) {
    std::vector<std::string> parts;
    std::string part;
    std::istringstream ps(s);
    while (std::getline(ps, part, sep)) parts.push_back(part);
    if (!s.empty() && s.back() == sep) parts.emplace_back();
    return parts;
  };

  while (std::getline(in, line)) {
    ++line_no;
    if (auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
    std::istringstream tokens(line);
    std::vector<std::string> words;
    for (std::string w; tokens >> w;) words.push_back(w);
    if (words.empty()) continue;

    if (!n) {
      for (const auto& w : words) {
        if (w.rfind("n=", 0) == 0) {
          n = parse_int(w.substr(2));
        } else if (w.rfind("degrees=", 0) == 0) {
          for (const auto& d : split(w.substr(8), ',')) degrees.push_back(parse_int(d));
        } else {
          fail("unexpected header field '" + w + "'");
        }
      }
      if (!n || *n < 1) fail("header must set n to a positive integer");
      if (degrees.empty()) fail("header must list degrees");
      continue;
    }

    Polynomial f(*n + 1);
    for (const auto& w : words) {
      const auto colon = w.find(':');
      if (colon == std::string::npos) fail("term '" + w + "' is not coeff:exponents");
      ExactRat coeff;
      try {
        coeff = parse_rat(w.substr(0, colon));
      } catch (const std::exception&) {
        fail("bad coefficient in '" + w + "'");
      }
      Exponents e;
      for (const auto& part : split(w.substr(colon + 1), ',')) {
        const int v = parse_int(part);
        if (v < 0) fail("negative exponent in '" + w + "'");
        e.push_back(v);
      }
      if (static_cast<int>(e.size()) != *n + 1) fail("term '" + w + "' needs " + std::to_string(*n + 1) + " exponents");
      f.add_term(e, coeff);
    }
    if (f.is_zero() || !f.is_homogeneous()) fail("form is zero or not homogeneous");
    if (forms.size() >= degrees.size()) fail("more forms than listed degrees");
    if (*f.degree() != degrees[forms.size()]) {
      fail("form has degree " + std::to_string(*f.degree()) + ", header says " + std::to_string(degrees[forms.size()]));
    }
    forms.push_back(std::move(f));
  }
  if (!n) throw ModelFormatError("model has no header");
  if (forms.size() != degrees.size()) throw ModelFormatError("model lists fewer forms than degrees");
  return GradedQuotient(*n, std::move(forms));
}

std::string format_model(const GradedQuotient& q) {
  std::ostringstream out;
  out << "n=" << q.n() << " degrees=";
  const auto degs = q.degrees();
  for (std::size_t i = 0; i < degs.size(); ++i) out << (i ? "," : "") << degs[i];
  out << '\n';
  for (const auto& f : q.forms()) {
    bool first = true;
    for (const auto& [e, c] : f.terms()) {
      out << (first ? "" : " ") << c.get_str() << ':';
      first = false;
      for (std::size_t i = 0; i < e.size(); ++i) out << (i ? "," : "") << e[i];
    }
    out << '\n';
  }
  return out.str();
}

GradedQuotient load_model(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ModelFormatError("cannot open model file " + path.string());
  std::ostringstream text;
  text << in.rdbuf();
  try {
    return parse_model(text.str());
  } catch (const ModelFormatError& e) {
    throw ModelFormatError(path.string() + ": " + e.what());
  }
}

}  // namespace koszulscope
