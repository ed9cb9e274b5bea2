#include "koszulscope/cli.hpp"

#include <doctest.h>
#include <json.hpp>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

using namespace koszulscope;
using nlohmann::json;

namespace {

struct Run {
  int code;
  std::string out;
  std::string err;
};

Run run(const std::vector<std::string>& args) {
  std::ostringstream out, err;
  const int code = run_cli(args, out, err);
  return {code, out.str(), err.str()};
}

std::vector<Record> from_json(const std::string& text) {
  std::vector<Record> records;
  for (const auto& row : json::parse(text)) {
    REQUIRE(row.size() == 6);
    Record r;
    r.surface = row.at("surface");
    if (!row.at("d").is_null()) r.d = row.at("d").get<long>();
    r.quantity = row.at("quantity");
    r.value = row.at("value");
    r.status = row.at("status");
    r.provenance = row.at("provenance");
    records.push_back(r);
  }
  return records;
}

Record from_fields(const std::vector<std::string>& f) {
  REQUIRE(f.size() == 6);
  Record r{f[0], std::nullopt, f[2], f[3], f[4], f[5]};
  if (!f[1].empty()) r.d = std::stol(f[1]);
  return r;
}

// RFC 4180 reader.
std::vector<Record> from_csv(const std::string& text) {
  std::vector<std::vector<std::string>> rows(1);
  std::string field;
  bool quoted = false;
  for (std::size_t i = 0; i < text.size(); ++i) {
    const char ch = text[i];
    if (quoted) {
      if (ch == '"' && i + 1 < text.size() && text[i + 1] == '"') {
        field += '"';
        ++i;
      } else if (ch == '"') {
        quoted = false;
      } else {
        field += ch;
      }
    } else if (ch == '"') {
      quoted = true;
    } else if (ch == ',') {
      rows.back().push_back(field);
      field.clear();
    } else if (ch == '\n') {
      rows.back().push_back(field);
      field.clear();
      rows.emplace_back();
    } else {
      field += ch;
    }
  }
  rows.pop_back();
  REQUIRE(rows.front() == std::vector<std::string>{"surface", "d", "quantity", "value", "status", "provenance"});
  std::vector<Record> records;
  for (std::size_t i = 1; i < rows.size(); ++i) records.push_back(from_fields(rows[i]));
  return records;
}

std::vector<Record> from_markdown(const std::string& text) {
  std::istringstream in(text);
  std::string line;
  std::vector<Record> records;
  int index = 0;
  while (std::getline(in, line)) {
    if (index++ < 2) continue;
    std::vector<std::string> cells;
    std::string cell;
    for (std::size_t i = 1; i < line.size(); ++i) {
      if (line[i] == '\\' && i + 1 < line.size()) {
        cell += line[++i];
      } else if (line[i] == '|') {
        cells.push_back(cell.substr(1, cell.size() - 2));  // strip the padding spaces
        cell.clear();
      } else {
        cell += line[i];
      }
    }
    records.push_back(from_fields(cells));
  }
  return records;
}

std::vector<std::string> values_of(const std::vector<Record>& records, const std::string& quantity) {
  std::vector<std::string> out;
  for (const auto& r : records) {
    if (r.quantity == quantity) out.push_back(r.value);
  }
  return out;
}

struct ModelDirGuard {
  explicit ModelDirGuard(const std::string& dir) { setenv("KOSZULSCOPE_MODEL_DIR", dir.c_str(), 1); }
  ~ModelDirGuard() { unsetenv("KOSZULSCOPE_MODEL_DIR"); }
};

std::filesystem::path model_copy(const std::string& name) {
  const auto dir = std::filesystem::temp_directory_path() / ("koszulscope-test-" + name);
  std::filesystem::remove_all(dir);
  std::filesystem::create_directories(dir);
  for (const char* f : {"quartic.txt", "2-3.txt", "2-2-2.txt"}) {
    std::filesystem::copy_file(std::filesystem::path(KOSZULSCOPE_SOURCE_MODEL_DIR) / f, dir / f);
  }
  return dir;
}

}  // namespace

TEST_CASE("dims for the quartic") {
  const Run r = run({"dims", "--surface", "quartic", "--d", "3..6"});
  CHECK(r.code == kExitOk);
  CHECK(values_of(from_json(r.out), "h0_foliations") == std::vector<std::string>{"6", "20", "45", "80"});
}

TEST_CASE("no foliations below degree 3") {
  const Run r = run({"dims", "--surface", "all", "--d", "0..2"});
  CHECK(r.code == kExitOk);
  const auto values = values_of(from_json(r.out), "h0_foliations");
  CHECK(values.size() == 9);
  for (const auto& v : values) CHECK(v == "0");
}

TEST_CASE("fit annotates exceptional degrees") {
  const Run r = run({"dims", "--surface", "2-2-2", "--d", "3", "--fit"});
  CHECK(r.code == kExitOk);
  const auto records = from_json(r.out);
  CHECK(values_of(records, "h0_foliations") == std::vector<std::string>{"15"});
  const auto exc = values_of(records, "h0_foliations_exceptional");
  CHECK(exc == std::vector<std::string>{"15"});
}

TEST_CASE("fit over a wide range") {
  const Run r = run({"dims", "--surface", "quartic", "--d", "0..40", "--fit"});
  const auto fits = values_of(from_json(r.out), "h0_foliations_fit");
  CHECK(std::find(fits.begin(), fits.end(), "4d^2-8d-16") != fits.end());
}

TEST_CASE("dims with the oracle") {
  const Run r = run({"dims", "--surface", "2-3", "--d", "3..4", "--with-oracle"});
  CHECK(r.code == kExitOk);
  CHECK(values_of(from_json(r.out), "oracle_h0_foliations") == std::vector<std::string>{"10", "35"});
}

TEST_CASE("uniqueness thresholds and certificates") {
  Run r = run({"uniqueness", "--surface", "all"});
  CHECK(r.code == kExitOk);
  CHECK(values_of(from_json(r.out), "uniqueness_threshold") == std::vector<std::string>{"6", "5", "4"});

  r = run({"uniqueness", "--surface", "quartic", "--d", "4"});
  CHECK(values_of(from_json(r.out), "certificate") == std::vector<std::string>{"Obstructed: h0(X,i*O(1)) = 4"});

  r = run({"uniqueness", "--surface", "2-3", "--d", "5"});
  CHECK(values_of(from_json(r.out), "certificate") == std::vector<std::string>{"Certified"});
}

TEST_CASE("singular scheme degrees") {
  CHECK(values_of(from_json(run({"singdeg", "--surface", "quartic", "--d", "3..5"}).out), "singular_scheme_degree") ==
        std::vector<std::string>{"40", "60", "88"});
  CHECK(values_of(from_json(run({"singdeg", "--surface", "2-3", "--d", "1"}).out), "singular_scheme_degree") ==
        std::vector<std::string>{"24"});
  CHECK(values_of(from_json(run({"singdeg", "--surface", "2-2-2", "--d", "3"}).out), "singular_scheme_degree") ==
        std::vector<std::string>{"56"});
}

TEST_CASE("verify against the models") {
  Run r = run({"verify", "--surface", "quartic", "--d", "3..6"});
  CHECK(r.code == kExitOk);
  CHECK(values_of(from_json(r.out), "verify_summary") == std::vector<std::string>{"PASS (4/4)"});
  r = run({"verify", "--surface", "all", "--d", "3..4"});
  CHECK(r.code == kExitOk);
  CHECK(values_of(from_json(r.out), "verify_summary") == std::vector<std::string>{"PASS (6/6)"});
}

TEST_CASE("verify honours the model directory") {
  const auto dir = model_copy("good");
  ModelDirGuard guard(dir.string());
  const Run r = run({"verify", "--surface", "2-2-2", "--d", "3..5"});
  CHECK(r.code == kExitOk);
  CHECK(r.out.find(dir.string()) != std::string::npos);
}

TEST_CASE("a corrupted model fails verification") {
  const auto dir = model_copy("corrupt");
  // x0^2 x1^2 + x2^4 + x3^4 is singular at [1:0:0:0].
  std::ofstream(dir / "quartic.txt") << "n=3 degrees=4\n1:2,2,0,0 1:0,0,4,0 1:0,0,0,4\n";
  ModelDirGuard guard(dir.string());
  const Run r = run({"verify", "--surface", "quartic", "--d", "3..6"});
  CHECK(r.code == kExitMismatch);
  const auto summary = values_of(from_json(r.out), "verify_summary");
  REQUIRE(summary.size() == 1);
  CHECK(summary[0].rfind("FAIL", 0) == 0);
}

TEST_CASE("an unreadable model fails verification") {
  const auto dir = model_copy("garbage");
  std::ofstream(dir / "2-3.txt") << "this is not a model\n";
  ModelDirGuard guard(dir.string());
  const Run r = run({"verify", "--surface", "2-3", "--d", "3"});
  CHECK(r.code == kExitMismatch);
  CHECK(r.err.find("2-3.txt") != std::string::npos);
}

TEST_CASE("a model of the wrong type is rejected") {
  const auto dir = model_copy("wrongtype");
  std::filesystem::copy_file(dir / "quartic.txt", dir / "2-3.txt", std::filesystem::copy_options::overwrite_existing);
  ModelDirGuard guard(dir.string());
  CHECK(run({"verify", "--surface", "2-3", "--d", "3"}).code == kExitMismatch);
}

TEST_CASE("usage errors exit with 2") {
  CHECK(run({}).code == kExitUsage);
  CHECK(run({"dims", "--surface", "cubic"}).code == kExitUsage);
  CHECK(run({"dims", "--d", "5..3"}).code == kExitUsage);
  CHECK(run({"dims", "--d", "0..201"}).code == kExitUsage);
  CHECK(run({"dims", "--d", "-1"}).code == kExitUsage);
  CHECK(run({"dims", "--format", "xml"}).code == kExitUsage);
  CHECK(run({"uniqueness", "--d", "2"}).code == kExitUsage);
  CHECK(run({"frobnicate"}).code == kExitUsage);
  CHECK(run({"singdeg", "--fit"}).code == kExitUsage);
  CHECK(run({"--help"}).code == kExitOk);
}

TEST_CASE("csv and markdown are lossless") {
  for (const auto& args : std::vector<std::vector<std::string>>{
           {"dims", "--surface", "all", "--d", "2..5", "--fit"},
           {"uniqueness", "--surface", "all", "--d", "3..5"},
           {"verify", "--surface", "quartic", "--d", "3..4"}}) {
    auto with = [&](const std::string& format) {
      auto a = args;
      a.insert(a.end(), {"--format", format});
      return run(a).out;
    };
    const auto records = from_json(with("json"));
    CHECK_FALSE(records.empty());
    CHECK(from_csv(with("csv")) == records);
    CHECK(from_markdown(with("md")) == records);
  }
}

TEST_CASE("rendering escapes awkward text") {
  const std::vector<Record> records{{"a,b", 3, "q|x", "say \"hi\"", "s\\t", "p, q | r"},
                                    {"plain", std::nullopt, "q", "v", "s", "p"}};
  CHECK(from_csv(render(records, OutputFormat::Csv)) == records);
  CHECK(from_markdown(render(records, OutputFormat::Markdown)) == records);
  CHECK(from_json(render(records, OutputFormat::Json)) == records);
}

TEST_CASE("traces go to stderr only") {
  const Run r = run({"uniqueness", "--surface", "quartic", "--d", "6", "--with-trace"});
  CHECK(r.code == kExitOk);
  CHECK(r.err.find("# trace quartic d=6 certificate") != std::string::npos);
  CHECK(r.err.find("RULE ") != std::string::npos);
  CHECK(r.out.find("RULE ") == std::string::npos);
  json parsed;
  CHECK_NOTHROW(parsed = json::parse(r.out));
  CHECK(parsed.is_array());
}

TEST_CASE("output is deterministic") {
  const std::vector<std::string> args{"dims", "--surface", "all", "--d", "0..12"};
  CHECK(run(args).out == run(args).out);
}
