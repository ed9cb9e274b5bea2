#include "koszulscope/cli.hpp"

#include "koszulscope/ci.hpp"
#include "koszulscope/oracle.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <algorithm>
#include <atomic>
#include <cstdlib>
#include <exception>
#include <filesystem>
#include <functional>
#include <map>
#include <memory>
#include <ostream>
#include <regex>
#include <sstream>
#include <thread>

#ifndef KOSZULSCOPE_DEFAULT_MODEL_DIR
#define KOSZULSCOPE_DEFAULT_MODEL_DIR "models"
#endif

namespace koszulscope {

// ---------------------------------------------------------------- rendering

namespace {

std::string d_text(const Record& r) { return r.d ? std::to_string(*r.d) : ""; }

std::string csv_field(const std::string& s) {
  if (s.find_first_of(",\"\r\n") == std::string::npos) return s;
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out += '"';
    out += c;
  }
  return out + "\"";
}

std::string md_cell(const std::string& s) {
  std::string out;
  for (char c : s) {
    if (c == '|' || c == '\\') out += '\\';
    out += c;
  }
  return out;
}

}  // namespace

std::string render(const std::vector<Record>& records, OutputFormat format) {
  std::ostringstream out;
  switch (format) {
    case OutputFormat::Json: {
      nlohmann::ordered_json array = nlohmann::ordered_json::array();
      for (const auto& r : records) {
        nlohmann::ordered_json row;
        row["surface"] = r.surface;
        row["d"] = r.d ? nlohmann::ordered_json(*r.d) : nlohmann::ordered_json(nullptr);
        row["quantity"] = r.quantity;
        row["value"] = r.value;
        row["status"] = r.status;
        row["provenance"] = r.provenance;
        array.push_back(std::move(row));
      }
      out << array.dump(2) << '\n';
      break;
    }
    case OutputFormat::Csv:
      out << "surface,d,quantity,value,status,provenance\n";
      for (const auto& r : records) {
        out << csv_field(r.surface) << ',' << d_text(r) << ',' << csv_field(r.quantity) << ','
            << csv_field(r.value) << ',' << csv_field(r.status) << ',' << csv_field(r.provenance) << '\n';
      }
      break;
    case OutputFormat::Markdown:
      out << "| surface | d | quantity | value | status | provenance |\n";
      out << "|---|---|---|---|---|---|\n";
      for (const auto& r : records) {
        out << "| " << md_cell(r.surface) << " | " << d_text(r) << " | " << md_cell(r.quantity) << " | "
            << md_cell(r.value) << " | " << md_cell(r.status) << " | " << md_cell(r.provenance) << " |\n";
      }
      break;
  }
  return out.str();
}

// ---------------------------------------------------------------- commands

namespace {

class UsageError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct RunConfig {
  std::vector<K3Type> surfaces;
  long dmin = 0;
  long dmax = 0;
  OutputFormat format = OutputFormat::Json;
  bool with_oracle = false;
  bool with_trace = false;
  bool fit = false;
};

/// What one (surface, d) work item produced.
struct ItemOutput {
  std::vector<Record> records;
  std::string trace;
  bool mismatch = false;
};

/// Runs fn(i) for i in [0, count) on a small pool; results stay in index order.
std::vector<ItemOutput> parallel_items(std::size_t count, const std::function<ItemOutput(std::size_t)>& fn) {
  std::vector<ItemOutput> results(count);
  std::vector<std::exception_ptr> errors(count);
  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (std::size_t i = next++; i < count; i = next++) {
      try {
        results[i] = fn(i);
      } catch (...) {
        errors[i] = std::current_exception();
      }
    }
  };
  const std::size_t threads = std::min<std::size_t>(count, std::max(1U, std::thread::hardware_concurrency()));
  std::vector<std::thread> pool;
  for (std::size_t t = 1; t < threads; ++t) pool.emplace_back(worker);
  worker();
  for (auto& t : pool) t.join();
  for (const auto& e : errors) {
    if (e) std::rethrow_exception(e);
  }
  return results;
}

std::string trace_block(K3Type type, long d, const std::string& quantity, const ChaseTrace& trace) {
  std::ostringstream out;
  out << "# trace " << k3_name(type) << " d=" << d << ' ' << quantity << '\n' << trace.serialize();
  return out.str();
}

std::string provenance_of(DimStatus status) {
  return status == DimStatus::Determined ? "chase" : status == DimStatus::NeededOracle ? "chase+oracle" : "none";
}

// Loaded model plus where it came from.
struct ModelHandle {
  std::unique_ptr<GradedQuotient> owned;
  const GradedQuotient* model = nullptr;
  std::string source;
};

ModelHandle load_model_for(K3Type type) {
  ModelHandle handle;
  const char* env = std::getenv("KOSZULSCOPE_MODEL_DIR");
  const std::filesystem::path dir = env && *env ? env : KOSZULSCOPE_DEFAULT_MODEL_DIR;
  const std::filesystem::path file = dir / (k3_name(type) + ".txt");
  if (env && *env) {
    handle.owned.reset(new GradedQuotient(load_model(file)));
  } else if (std::filesystem::exists(file)) {
    handle.owned.reset(new GradedQuotient(load_model(file)));
  } else {
    handle.model = &canonical_model(type);
    handle.source = "built-in";
    return handle;
  }
  handle.model = handle.owned.get();
  handle.source = file.string();

  const CompleteIntersection x = CompleteIntersection::of(type);
  auto degrees = handle.model->degrees();
  std::sort(degrees.begin(), degrees.end());
  if (handle.model->n() != x.n() || degrees != x.degrees()) {
    throw ModelFormatError(handle.source + ": model does not have type " + k3_name(type));
  }
  return handle;
}

std::vector<Record> finish(std::vector<ItemOutput>& items, const RunConfig& config, std::ostream& err, bool& mismatch) {
  std::vector<Record> records;
  for (auto& item : items) {
    if (config.with_trace && !item.trace.empty()) err << item.trace;
    mismatch = mismatch || item.mismatch;
    records.insert(records.end(), item.records.begin(), item.records.end());
  }
  return records;
}

void append_fit(std::vector<Record>& records, K3Type type, const std::string& quantity, const DimTable& table,
                const RunConfig& config) {
  const DimTable fitted = fit_piecewise(table);
  const std::string name = k3_name(type);
  for (const auto& piece : fitted.pieces()) {
    if (piece.last < config.dmin || piece.first > config.dmax) continue;
    std::ostringstream range;
    range << "fit on " << piece.first << ".." << piece.last;
    records.push_back({name, std::nullopt, quantity + "_fit", piece.poly.str(), "fitted", range.str()});
  }
  for (long d : fitted.exceptional()) {
    if (d < config.dmin || d > config.dmax) continue;
    records.push_back({name, d, quantity + "_exceptional", fitted.at(d)->get_str(), "exceptional",
                       "outside every fitted piece"});
  }
}

int cmd_dims(const RunConfig& config, std::ostream& out, std::ostream& err) {
  std::vector<std::pair<K3Type, long>> work;
  for (K3Type t : config.surfaces) {
    for (long d = config.dmin; d <= config.dmax; ++d) work.emplace_back(t, d);
  }
  std::map<K3Type, ModelHandle> models;
  if (config.with_oracle) {
    for (K3Type t : config.surfaces) models.emplace(t, load_model_for(t));
  }

  auto items = parallel_items(work.size(), [&](std::size_t i) {
    const auto [type, d] = work[i];
    const std::string name = k3_name(type);
    ItemOutput item;
    const FoliationSpaceResult fol = foliation_space_dim(type, d);
    const ChasedValue omega = coh_pullback_omega1(type, d - 1);
    item.records.push_back({name, d, "h0_foliations", fol.h0.get_str(), status_name(fol.status),
                            provenance_of(fol.status)});
    item.records.push_back({name, d, "h0_omega1_pullback", omega.value ? omega.value->get_str() : "?",
                            status_name(omega.status), provenance_of(omega.status)});
    item.records.push_back({name, d, "h0_structure_terms", structure_terms(type, d).get_str(), "determined",
                            "hilbert-function"});
    if (config.with_oracle && d >= 1) {
      const ModelHandle& m = models.at(type);
      const ExactInt oracle = foliation_dim_oracle(*m.model, static_cast<int>(d));
      item.mismatch = oracle != fol.h0;
      item.records.push_back({name, d, "oracle_h0_foliations", oracle.get_str(), item.mismatch ? "mismatch" : "match",
                              "model " + m.source});
    }
    if (config.with_trace) item.trace = trace_block(type, d, "h0_foliations", fol.trace);
    return item;
  });
  bool mismatch = false;
  std::vector<Record> records = finish(items, config, err, mismatch);

  if (config.fit) {
    const long hi = std::max(config.dmax, 40L);
    for (K3Type t : config.surfaces) {
      append_fit(records, t, "h0_foliations", foliation_table(t, 0, hi), config);
      append_fit(records, t, "h0_omega1_pullback", omega1_table(t, 0, hi), config);
      append_fit(records, t, "h0_structure_terms", structure_terms_table(t, 0, hi), config);
    }
  }
  out << render(records, config.format);
  return mismatch ? kExitMismatch : kExitOk;
}

int cmd_uniqueness(const RunConfig& config, std::ostream& out, std::ostream& err) {
  if (config.dmin < 3) throw UsageError("uniqueness certificates need d >= 3");
  std::vector<std::pair<K3Type, long>> work;
  for (K3Type t : config.surfaces) {
    work.emplace_back(t, -1);  // threshold
    for (long d = config.dmin; d <= config.dmax; ++d) work.emplace_back(t, d);
  }
  auto items = parallel_items(work.size(), [&](std::size_t i) {
    const auto [type, d] = work[i];
    const std::string name = k3_name(type);
    ItemOutput item;
    if (d < 0) {
      item.records.push_back({name, std::nullopt, "uniqueness_threshold", std::to_string(uniqueness_threshold(type)),
                              "certified", "chase"});
      return item;
    }
    const UniquenessCertificate cert = uniqueness_certificate(type, d);
    std::string value = cert.certified ? "Certified" : "Obstructed";
    for (std::size_t k = 0; k < cert.obstructions.size(); ++k) value += (k ? "; " : ": ") + cert.obstructions[k];
    item.records.push_back({name, d, "certificate", value, cert.certified ? "certified" : "obstructed", "chase"});
    if (config.with_trace) item.trace = trace_block(type, d, "certificate", cert.trace);
    return item;
  });
  bool mismatch = false;
  out << render(finish(items, config, err, mismatch), config.format);
  return kExitOk;
}

int cmd_singdeg(const RunConfig& config, std::ostream& out) {
  std::vector<Record> records;
  for (K3Type t : config.surfaces) {
    for (long d = config.dmin; d <= config.dmax; ++d) {
      records.push_back({k3_name(t), d, "singular_scheme_degree", singular_scheme_degree(t, d).get_str(), "determined",
                         "chern"});
    }
  }
  out << render(records, config.format);
  return kExitOk;
}

int cmd_verify(const RunConfig& config, std::ostream& out, std::ostream& err) {
  std::vector<Record> records;
  bool failed = false;
  std::map<K3Type, ModelHandle> models;
  for (K3Type t : config.surfaces) {
    try {
      ModelHandle m = load_model_for(t);
      const bool smooth = is_smooth(*m.model, 4 * (m.model->n() + 1));
      records.push_back({k3_name(t), std::nullopt, "model_smooth", smooth ? "true" : "false",
                         smooth ? "match" : "mismatch", "model " + m.source});
      failed = failed || !smooth;
      models.emplace(t, std::move(m));
    } catch (const ModelFormatError& e) {
      err << "error: " << e.what() << '\n';
      records.push_back({k3_name(t), std::nullopt, "model_load", e.what(), "mismatch", "model"});
      failed = true;
    }
  }

  std::vector<std::pair<K3Type, long>> work;
  for (K3Type t : config.surfaces) {
    if (!models.count(t)) continue;
    for (long d = std::max(config.dmin, 1L); d <= config.dmax; ++d) work.emplace_back(t, d);
  }
  auto items = parallel_items(work.size(), [&](std::size_t i) {
    const auto [type, d] = work[i];
    const std::string name = k3_name(type);
    const ModelHandle& m = models.at(type);
    ItemOutput item;
    try {
      const FoliationSpaceResult fol = foliation_space_dim(type, d);
      const ChasedValue omega = coh_pullback_omega1(type, d - 1);
      const ExactInt oracle_fol = foliation_dim_oracle(*m.model, static_cast<int>(d));
      const ExactInt oracle_omega = euler_kernel_dim(*m.model, static_cast<int>(d - 1));
      const bool fol_ok = oracle_fol == fol.h0;
      const bool omega_ok = omega.value && oracle_omega == *omega.value;
      item.mismatch = !fol_ok || !omega_ok;
      item.records.push_back({name, d, "oracle_h0_foliations", oracle_fol.get_str() + " vs " + fol.h0.get_str(),
                              fol_ok ? "match" : "mismatch", "model " + m.source});
      item.records.push_back({name, d, "oracle_h0_omega1_pullback",
                              oracle_omega.get_str() + " vs " + (omega.value ? omega.value->get_str() : "?"),
                              omega_ok ? "match" : "mismatch", "model " + m.source});
    } catch (const RegularSequenceError& e) {
      item.mismatch = true;
      item.records.push_back({name, d, "oracle_regular_sequence", e.what(), "mismatch", "model " + m.source});
    } catch (const InconsistentInput& e) {
      item.mismatch = true;
      item.records.push_back({name, d, "oracle_consistency", e.what(), "mismatch", "model " + m.source});
    }
    return item;
  });

  std::size_t passed = 0;
  for (const auto& item : items) passed += item.mismatch ? 0 : 1;
  bool mismatch = false;
  std::vector<Record> rows = finish(items, config, err, mismatch);
  records.insert(records.end(), rows.begin(), rows.end());
  failed = failed || mismatch;

  std::ostringstream summary;
  summary << (failed ? "FAIL" : "PASS") << " (" << passed << '/' << work.size() << ')';
  records.push_back({"all", std::nullopt, "verify_summary", summary.str(), failed ? "fail" : "pass", "oracle"});
  out << render(records, config.format);
  return failed ? kExitMismatch : kExitOk;
}

void parse_range(const std::string& text, long& dmin, long& dmax) {
  static const std::regex pattern(R"(^(\d{1,6})(?:\.\.(\d{1,6}))?$)");
  std::smatch m;
  if (!std::regex_match(text, m, pattern)) throw UsageError("--d expects N or A..B, got '" + text + "'");
  dmin = std::stol(m[1]);
  dmax = m[2].matched ? std::stol(m[2]) : dmin;
  if (dmin > dmax || dmax > 200) throw UsageError("--d range must satisfy 0 <= A <= B <= 200");
}

}  // namespace

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Cohomology dimensions and uniqueness certificates for foliations on K3 complete intersections",
               "koszulscope"};
  app.require_subcommand(1);
  app.set_version_flag("--version", "koszulscope 0.1.0");

  std::string surface = "all";
  std::string range;
  std::string format = "json";
  bool with_oracle = false;
  bool with_trace = false;
  bool fit = false;

  auto common = [&](CLI::App* sub) {
    sub->add_option("--surface", surface, "quartic, 2-3, 2-2-2 or all")
        ->check(CLI::IsMember({"quartic", "2-3", "2-2-2", "all"}));
    sub->add_option("--d", range, "degree N or range A..B with 0 <= A <= B <= 200");
    sub->add_option("--format", format, "json, csv or md")->check(CLI::IsMember({"json", "csv", "md"}));
  };
  CLI::App* dims = app.add_subcommand("dims", "section-space dimensions per degree");
  common(dims);
  dims->add_flag("--with-oracle", with_oracle, "cross-check against the explicit model");
  dims->add_flag("--with-trace", with_trace, "stream chase traces to stderr");
  dims->add_flag("--fit", fit, "append piecewise polynomial fits");
  CLI::App* uniq = app.add_subcommand("uniqueness", "thresholds and per-degree certificates");
  common(uniq);
  uniq->add_flag("--with-trace", with_trace, "stream chase traces to stderr");
  CLI::App* singdeg = app.add_subcommand("singdeg", "degree of the singular scheme");
  common(singdeg);
  CLI::App* verify = app.add_subcommand("verify", "compare the engine with the explicit models");
  common(verify);

  try {
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(reversed);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kExitOk : kExitUsage;
  }

  try {
    RunConfig config;
    config.with_oracle = with_oracle;
    config.with_trace = with_trace;
    config.fit = fit;
    config.format = format == "csv" ? OutputFormat::Csv : format == "md" ? OutputFormat::Markdown : OutputFormat::Json;
    config.surfaces = surface == "all" ? all_k3_types() : std::vector<K3Type>{*parse_k3_type(surface)};
    if (range.empty()) {
      const bool cert = app.got_subcommand(uniq);
      const bool ver = app.got_subcommand(verify);
      config.dmin = cert || ver ? 3 : 0;
      config.dmax = ver ? 6 : 10;
    } else {
      parse_range(range, config.dmin, config.dmax);
    }

    if (app.got_subcommand(dims)) return cmd_dims(config, out, err);
    if (app.got_subcommand(uniq)) return cmd_uniqueness(config, out, err);
    if (app.got_subcommand(singdeg)) return cmd_singdeg(config, out);
    return cmd_verify(config, out, err);
  } catch (const UsageError& e) {
    err << "usage error: " << e.what() << '\n';
    return kExitUsage;
  } catch (const ChaseContradiction& e) {
    err << "contradiction: " << e.what() << '\n' << e.trace().serialize();
    return kExitMismatch;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return kExitMismatch;
  }
}

}  // namespace koszulscope
