#include "sstc/dataset_io.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>
#include <unordered_map>
#include <vector>

#include "sstc/error.hpp"

namespace sstc {

namespace {

std::string trim(std::string_view s) {
  std::size_t b = 0;
  std::size_t e = s.size();
  while (b < e && (s[b] == ' ' || s[b] == '\t' || s[b] == '\r')) ++b;
  while (e > b && (s[e - 1] == ' ' || s[e - 1] == '\t' || s[e - 1] == '\r')) --e;
  return std::string(s.substr(b, e - b));
}

// Minimal RFC 4180 field splitting (quoted fields with doubled quotes).
bool split_csv_line(const std::string& line, std::vector<std::string>& fields) {
  fields.clear();
  std::string cur;
  bool quoted = false;
  bool was_quoted = false;
  for (std::size_t i = 0; i < line.size(); ++i) {
    const char c = line[i];
    if (quoted) {
      if (c == '"') {
        if (i + 1 < line.size() && line[i + 1] == '"') {
          cur.push_back('"');
          ++i;
        } else {
          quoted = false;
        }
      } else {
        cur.push_back(c);
      }
    } else if (c == '"' && trim(cur).empty()) {
      cur.clear();
      quoted = true;
      was_quoted = true;
    } else if (c == ',') {
      fields.push_back(was_quoted ? cur : trim(cur));
      cur.clear();
      was_quoted = false;
    } else {
      cur.push_back(c);
    }
  }
  if (quoted) return false;
  fields.push_back(was_quoted ? cur : trim(cur));
  return true;
}

bool parse_double(const std::string& s, double& out) {
  if (s.empty()) return false;
  const char* first = s.data();
  if (*first == '+') ++first;
  const char* last = s.data() + s.size();
  auto [ptr, ec] = std::from_chars(first, last, out);
  return ec == std::errc() && ptr == last;
}

std::string quote_if_needed(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string q = "\"";
  for (char c : s) {
    if (c == '"') q.push_back('"');
    q.push_back(c);
  }
  q.push_back('"');
  return q;
}

}  // namespace

std::string format_double(double v) {
  char buf[64];
  auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), v);
  return std::string(buf, ptr);
}

Dataset read_instances_csv(std::istream& in, const Taxonomy& taxonomy,
                           const std::string& source_name) {
  auto fail = [&](ErrorCode code, std::size_t line, const std::string& what) -> Error {
    return Error(code, source_name + ":" + std::to_string(line) + ": " + what);
  };

  std::string line;
  std::size_t line_no = 0;
  std::vector<std::string> fields;

  // Header, skipping a UTF-8 BOM.
  if (!std::getline(in, line)) throw fail(ErrorCode::ParseError, 1, "missing header");
  ++line_no;
  if (line.rfind("\xEF\xBB\xBF", 0) == 0) line.erase(0, 3);
  if (!split_csv_line(line, fields) || fields.size() != 3 || fields[0] != "feature" ||
      fields[1] != "x" || fields[2] != "y") {
    throw fail(ErrorCode::ParseError, line_no, "header must be `feature,x,y`");
  }

  Dataset data;
  std::unordered_map<std::uint32_t, std::uint32_t> next_id;
  while (std::getline(in, line)) {
    ++line_no;
    if (trim(line).empty()) continue;
    if (!split_csv_line(line, fields) || fields.size() != 3) {
      throw fail(ErrorCode::ParseError, line_no, "expected 3 fields");
    }
    auto feature = taxonomy.find(fields[0]);
    if (!feature) {
      throw fail(ErrorCode::UnknownFeature, line_no, "feature \"" + fields[0] + "\" not in taxonomy");
    }
    if (!taxonomy.is_leaf(*feature)) {
      throw fail(ErrorCode::UnknownFeature, line_no,
                 "feature \"" + fields[0] + "\" is not a taxonomy leaf");
    }
    Point p;
    if (!parse_double(fields[1], p.x) || !parse_double(fields[2], p.y) || !std::isfinite(p.x) ||
        !std::isfinite(p.y)) {
      throw fail(ErrorCode::ParseError, line_no, "coordinates must be finite decimal numbers");
    }
    const std::uint32_t id = next_id[feature->value]++;
    data.instances.push_back(FeatureInstance{*feature, id, p});
  }
  return data;
}

Dataset read_instances_csv(const std::filesystem::path& path, const Taxonomy& taxonomy) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::IoError, "cannot open " + path.string());
  return read_instances_csv(in, taxonomy, path.string());
}

void write_instances_csv(std::ostream& out, const Dataset& data, const Taxonomy& taxonomy) {
  out << "feature,x,y\n";
  for (const auto& inst : data.instances) {
    out << quote_if_needed(taxonomy.name(inst.feature)) << ',' << format_double(inst.location.x)
        << ',' << format_double(inst.location.y) << '\n';
  }
}

std::string read_text_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::IoError, "cannot open " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_text_file(const std::filesystem::path& path, const std::string& content) {
  if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error(ErrorCode::IoError, "cannot write " + path.string());
  out << content;
  if (!out) throw Error(ErrorCode::IoError, "write failed for " + path.string());
}

Taxonomy read_taxonomy_file(const std::filesystem::path& path) {
  try {
    return Taxonomy::parse(read_text_file(path));
  } catch (const Error& e) {
    if (e.code() == ErrorCode::IoError) throw;
    throw Error(e.code(), path.string() + ": " + e.what());
  }
}

}  // namespace sstc
