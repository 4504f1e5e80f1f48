#include <charconv>
#include <fstream>
#include <iomanip>
#include <sstream>

#include "oak/case_base.hpp"
#include "oak/errors.hpp"
#include "oak/pddl.hpp"

namespace oak {
namespace {

constexpr const char* kCaseHeader = "OAKCASE v1";
constexpr const char* kIndexFile = "index.oak";
constexpr const char* kDomainFile = "domain.pddl";

std::string case_file(CaseId id) {
  std::ostringstream os;
  os << "cases/case-" << std::setw(6) << std::setfill('0') << id << ".oak";
  return os.str();
}

std::string hex64(std::uint64_t v) {
  std::ostringstream os;
  os << std::hex << std::setw(16) << std::setfill('0') << v;
  return os.str();
}

// Write-to-temp then rename, so a crash never leaves a torn file behind.
void write_atomic(const std::filesystem::path& path, const std::string& content) {
  std::filesystem::create_directories(path.parent_path());
  std::filesystem::path tmp = path;
  tmp += ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw LibraryError("cannot write " + tmp.string());
    out << content;
    if (!out.flush()) throw LibraryError("cannot write " + tmp.string());
  }
  std::filesystem::rename(tmp, path);
}

std::size_t count_lines(const std::string& s) {
  std::size_t n = 0;
  for (char c : s)
    if (c == '\n') ++n;
  if (!s.empty() && s.back() != '\n') ++n;
  return n;
}

void section(std::ostringstream& os, const char* name, const std::string& body) {
  os << name << ' ' << count_lines(body) << '\n' << body;
  if (!body.empty() && body.back() != '\n') os << '\n';
}

class LineReader {
 public:
  LineReader(const std::string& text, std::string origin) : in_(text), origin_(std::move(origin)) {}

  std::string line() {
    std::string l;
    if (!std::getline(in_, l)) fail("unexpected end of file");
    ++n_;
    return l;
  }

  // "key value..." -> value; checks the key.
  std::string field(const std::string& key) {
    std::string l = line();
    if (l.rfind(key + " ", 0) != 0) fail("expected '" + key + "'");
    return l.substr(key.size() + 1);
  }

  std::string section(const std::string& key) {
    std::size_t n = number<std::size_t>(field(key));
    std::string body;
    for (std::size_t i = 0; i < n; ++i) body += line() + '\n';
    return body;
  }

  template <class T>
  T number(const std::string& s, int base = 10) {
    T v{};
    auto [p, ec] = std::from_chars(s.data(), s.data() + s.size(), v, base);
    if (ec != std::errc() || p != s.data() + s.size()) fail("bad number '" + s + "'");
    return v;
  }

  [[noreturn]] void fail(const std::string& what) const {
    throw LibraryError(origin_ + ":" + std::to_string(n_) + ": " + what);
  }

 private:
  std::istringstream in_;
  std::string origin_;
  std::size_t n_ = 0;
};

std::string sort_counts_text(const PlanningCase& c) {
  std::string s;
  for (const auto& [sort, n] : c.sort_counts()) s += (s.empty() ? "" : ",") + sort + "=" + std::to_string(n);
  return s.empty() ? "-" : s;
}

PlanningCase parse_case_text(const std::string& text, std::shared_ptr<const Domain> domain,
                             const std::string& origin) {
  LineReader r(text, origin);
  if (r.line() != kCaseHeader) r.fail(std::string("expected header '") + kCaseHeader + "'");
  PlanningCase c;
  c.id = r.number<CaseId>(r.field("id"));
  std::string kind = r.field("kind");
  if (kind == "solution")
    c.kind = CaseKind::Solution;
  else if (kind == "subplan")
    c.kind = CaseKind::Subplan;
  else
    r.fail("unknown case kind '" + kind + "'");
  std::string parent = r.field("parent");
  if (parent != "-") c.parent_id = r.number<CaseId>(parent);
  std::istringstream usage(r.field("usage"));
  if (!(usage >> c.usage.attempts >> c.usage.successes) || c.usage.successes > c.usage.attempts)
    r.fail("bad usage counters");
  try {
    c.problem = parse_problem(std::move(domain), r.section("problem"));
    c.solution = parse_plan(r.section("plan"));
    c.encoding = parse_graph(r.section("graph"));
    c.signature = parse_signature(r.section("signature"));
  } catch (const LibraryError&) {
    throw;
  } catch (const Error& e) {
    r.fail(e.what());
  }
  if (c.encoding != encode_problem(c.problem)) r.fail("stored encoding graph does not match the problem");
  if (c.signature != degree_signature(c.encoding)) r.fail("stored degree signature does not match the graph");
  return c;
}

}  // namespace

std::string serialize_case(const PlanningCase& c) {
  std::ostringstream os;
  os << kCaseHeader << '\n';
  os << "id " << c.id << '\n';
  os << "kind " << (c.kind == CaseKind::Solution ? "solution" : "subplan") << '\n';
  os << "parent " << (c.parent_id ? std::to_string(*c.parent_id) : "-") << '\n';
  os << "usage " << c.usage.attempts << ' ' << c.usage.successes << '\n';
  section(os, "problem", format_problem(c.problem));
  section(os, "plan", format_plan(c.solution, false));
  section(os, "graph", serialize_graph(c.encoding));
  section(os, "signature", serialize_signature(c.signature));
  return os.str();
}

PlanningCase parse_case(const std::string& text, std::shared_ptr<const Domain> domain) {
  return parse_case_text(text, std::move(domain), "case");
}

void CaseBase::persist_case(const PlanningCase& c) const { write_atomic(*dir_ / case_file(c.id), serialize_case(c)); }

void CaseBase::unpersist_case(CaseId id) const { std::filesystem::remove(*dir_ / case_file(id)); }

void CaseBase::persist_domain() const { write_atomic(*dir_ / kDomainFile, format_domain(*domain_)); }

void CaseBase::persist_index() const {
  std::ostringstream os;
  os << kFormatHeader << '\n';
  os << "domain " << (domain_ ? domain_->name : "-") << '\n';
  os << "next " << next_id_ << '\n';
  for (const auto& c : cases_)
    os << "case " << c.id << ' ' << case_file(c.id) << ' ' << sort_counts_text(c) << ' '
       << hex64(fnv1a(serialize_signature(c.signature))) << ' ' << c.solution.size() << ' '
       << (c.parent_id ? std::to_string(*c.parent_id) : "-") << '\n';
  write_atomic(*dir_ / kIndexFile, os.str());
}

void CaseBase::save_to(const std::filesystem::path& dir) {
  dir_ = dir;
  std::filesystem::create_directories(dir);
  if (domain_) persist_domain();
  for (const auto& c : cases_) persist_case(c);
  persist_index();
}

CaseBase CaseBase::open(const std::filesystem::path& dir) {
  CaseBase base;
  base.dir_ = dir;
  const auto index_path = dir / kIndexFile;
  if (!std::filesystem::exists(index_path)) {
    if (std::filesystem::exists(dir) && !std::filesystem::is_directory(dir))
      throw LibraryError(dir.string() + " is not a directory");
    return base;
  }
  LineReader r(read_file(index_path.string()), index_path.string());
  if (r.line() != kFormatHeader) r.fail(std::string("expected header '") + kFormatHeader + "'");
  std::string domain_name = r.field("domain");
  base.next_id_ = r.number<CaseId>(r.field("next"));
  if (domain_name != "-") {
    try {
      base.domain_ = parse_domain(read_file((dir / kDomainFile).string()));
    } catch (const Error& e) {
      throw LibraryError((dir / kDomainFile).string() + ": " + e.what());
    }
    if (base.domain_->name != domain_name) r.fail("index names domain " + domain_name);
  }
  std::string l;
  for (;;) {
    try {
      l = r.line();
    } catch (const LibraryError&) {
      break;
    }
    if (l.empty()) continue;
    std::istringstream fields(l);
    std::string tag, id, file, sorts, digest, length, parent;
    if (!(fields >> tag >> id >> file >> sorts >> digest >> length >> parent) || tag != "case")
      r.fail("malformed case entry");
    if (!base.domain_) r.fail("case entry without a domain");
    const auto path = dir / file;
    std::string text;
    try {
      text = read_file(path.string());
    } catch (const Error& e) {
      r.fail(e.what());
    }
    PlanningCase c = parse_case_text(text, base.domain_, path.string());
    if (c.id != r.number<CaseId>(id)) r.fail("case id differs from " + file);
    if (hex64(fnv1a(serialize_signature(c.signature))) != digest) r.fail("signature digest mismatch for " + file);
    if (c.solution.size() != r.number<std::size_t>(length)) r.fail("plan length mismatch for " + file);
    if (c.id >= base.next_id_) r.fail("case id beyond next id");
    base.cases_.push_back(std::move(c));
  }
  return base;
}

}  // namespace oak
