#include "cachelab/trace.hpp"

#include <cstdio>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>

namespace cachelab {

namespace {

const char* header_magic = "#cachelab-trace";

[[noreturn]] void bad_line(const std::string& what, int lineno) {
  throw trace_error(what + " at line " + std::to_string(lineno));
}

std::vector<std::string> split_spaces(const std::string& line) {
  std::vector<std::string> out;
  std::size_t i = 0;
  while (i < line.size()) {
    auto j = line.find(' ', i);
    if (j == std::string::npos) j = line.size();
    out.push_back(line.substr(i, j - i));
    i = j + 1;
  }
  return out;
}

std::uint64_t parse_num(const std::string& tok, const char* what, int lineno, int base) {
  std::uint64_t v = 0;
  std::size_t pos = 0;
  try {
    v = std::stoull(tok, &pos, base);
  } catch (const std::exception&) {
    pos = 0;
  }
  if (pos == 0 || pos != tok.size()) bad_line(std::string("bad ") + what + " '" + tok + "'", lineno);
  return v;
}

// "key=value" with a fixed expected key.
std::string header_field(const std::string& tok, const char* key, int lineno) {
  std::string prefix = std::string(key) + "=";
  if (tok.rfind(prefix, 0) != 0 || tok.size() == prefix.size())
    bad_line("trace header: expected '" + prefix + "<value>', got '" + tok + "'", lineno);
  return tok.substr(prefix.size());
}

}  // namespace

char kind_letter(access_kind k) {
  switch (k) {
    case access_kind::read: return 'r';
    case access_kind::write: return 'w';
    case access_kind::ifetch: return 'i';
  }
  return '?';
}

trace_file parse_trace(std::istream& in) {
  trace_file t;
  std::string line;
  int lineno = 0;
  bool have_header = false;

  while (std::getline(in, line)) {
    ++lineno;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (!have_header) {
      if (line.empty()) continue;
      if (line[0] == '#' && line.rfind(header_magic, 0) != 0) continue;  // leading comment
      if (line[0] != '#') bad_line("expected '" + std::string(header_magic) + " v1 ...' header, got '" + line + "'", lineno);
      auto tok = split_spaces(line);
      if (tok.size() != 6 || tok[0] != header_magic)
        bad_line("malformed trace header '" + line + "'", lineno);
      if (tok[1] != "v1") bad_line("unsupported trace version '" + tok[1] + "'", lineno);
      t.header.core_count = static_cast<unsigned>(
          parse_num(header_field(tok[2], "cores", lineno), "cores", lineno, 10));
      t.header.record_count = parse_num(header_field(tok[3], "count", lineno), "count", lineno, 10);
      t.header.generator = header_field(tok[4], "generator", lineno);
      t.header.seed = parse_num(header_field(tok[5], "seed", lineno), "seed", lineno, 10);
      if (t.header.core_count == 0) bad_line("cores must be >= 1", lineno);
      t.records.reserve(t.header.record_count);
      have_header = true;
      continue;
    }
    auto tok = split_spaces(line);
    if (tok.size() != 3) bad_line("malformed trace record '" + line + "'", lineno);
    trace_record r;
    r.core = static_cast<int>(parse_num(tok[0], "core", lineno, 10));
    if (tok[1].size() != 1 || (tok[1][0] != 'r' && tok[1][0] != 'w' && tok[1][0] != 'i'))
      bad_line("unknown access kind '" + tok[1] + "'", lineno);
    r.kind = tok[1][0] == 'r'   ? access_kind::read
             : tok[1][0] == 'w' ? access_kind::write
                                : access_kind::ifetch;
    if (tok[2].rfind("0x", 0) != 0 || tok[2].size() == 2)
      bad_line("bad address '" + tok[2] + "' (want 0x-hex)", lineno);
    r.address = parse_num(tok[2].substr(2), "address", lineno, 16);
    if (r.core < 0 || static_cast<unsigned>(r.core) >= t.header.core_count)
      bad_line("core " + tok[0] + " out of range (cores=" + std::to_string(t.header.core_count) + ")",
               lineno);
    t.records.push_back(r);
  }
  if (!have_header) throw trace_error("trace: missing '#cachelab-trace v1' header");
  if (t.records.size() != t.header.record_count)
    throw trace_error("trace header count=" + std::to_string(t.header.record_count) +
                      " but found " + std::to_string(t.records.size()) + " records");
  return t;
}

void emit_trace(const trace_file& t, std::ostream& out) {
  out << header_magic << " v1 cores=" << t.header.core_count << " count=" << t.records.size()
      << " generator=" << t.header.generator << " seed=" << t.header.seed << "\n";
  char buf[64];
  for (const auto& r : t.records) {
    std::snprintf(buf, sizeof buf, "%d %c 0x%llx\n", r.core, kind_letter(r.kind),
                  static_cast<unsigned long long>(r.address));
    out << buf;
  }
  if (!out) throw trace_error("trace: write failure");
}

trace_file load_trace_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw trace_error("cannot open trace file '" + path + "'");
  return parse_trace(in);
}

void save_trace_file(const trace_file& t, const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw trace_error("cannot open output file '" + path + "'");
  emit_trace(t, out);
}

}  // namespace cachelab
