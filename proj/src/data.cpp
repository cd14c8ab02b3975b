#include "fsr/data.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <istream>
#include <ostream>
#include <set>
#include <sstream>
#include <unordered_map>
#include <unordered_set>

namespace fsr {
namespace {

constexpr std::size_t kContinuousMinDistinct = 12;

std::string trim(std::string_view s) {
  const auto first = s.find_first_not_of(" \t\r");
  if (first == std::string_view::npos) return {};
  const auto last = s.find_last_not_of(" \t\r");
  return std::string(s.substr(first, last - first + 1));
}

// Splits one CSV record; double-quoted fields may contain commas and "" escapes.
std::vector<std::string> split_record(const std::string& line, std::size_t line_no) {
  std::vector<std::string> fields;
  std::string cur;
  bool quoted = false;
  bool was_quoted = false;
  for (std::size_t i = 0; i < line.size(); ++i) {
    const char ch = line[i];
    if (quoted) {
      if (ch == '"') {
        if (i + 1 < line.size() && line[i + 1] == '"') {
          cur.push_back('"');
          ++i;
        } else {
          quoted = false;
        }
      } else {
        cur.push_back(ch);
      }
    } else if (ch == '"') {
      quoted = true;
      was_quoted = true;
    } else if (ch == ',') {
      fields.push_back(was_quoted ? cur : trim(cur));
      cur.clear();
      was_quoted = false;
    } else {
      cur.push_back(ch);
    }
  }
  if (quoted) throw IngestionError("line " + std::to_string(line_no) + ": unterminated quoted field");
  fields.push_back(was_quoted ? cur : trim(cur));
  return fields;
}

std::optional<double> parse_real(const std::string& text) {
  double value = 0.0;
  const char* begin = text.data();
  const char* end = begin + text.size();
  if (begin != end && *begin == '+') ++begin;
  auto [ptr, ec] = std::from_chars(begin, end, value);
  if (ec != std::errc() || ptr != end) return std::nullopt;
  return value;
}

std::string format_real(double v) {
  char buf[64];
  auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), v);
  (void)ec;
  return std::string(buf, ptr);
}

bool needs_quoting(const std::string& s) {
  return s.find_first_of(",\"\n") != std::string::npos || s != trim(s);
}

std::string quote(const std::string& s) {
  if (!needs_quoting(s)) return s;
  std::string out = "\"";
  for (char ch : s) {
    if (ch == '"') out.push_back('"');
    out.push_back(ch);
  }
  out.push_back('"');
  return out;
}

void validate_schema(const std::vector<ColumnSchema>& schema) {
  std::unordered_set<std::string> names;
  std::size_t targets = 0;
  for (const auto& col : schema) {
    if (col.name.empty()) throw SchemaError("schema: empty column name");
    if (!names.insert(col.name).second) throw SchemaError("schema: duplicate column name '" + col.name + "'");
    if (col.kind == ColumnKind::target) ++targets;
  }
  if (targets != 1) {
    throw SchemaError("schema: exactly one target column required, found " + std::to_string(targets));
  }
}

struct RawTable {
  std::vector<std::string> header;
  std::vector<std::vector<std::string>> columns;  // column-major
  std::vector<std::size_t> line_numbers;          // file line of each row
};

RawTable read_table(std::istream& in) {
  RawTable table;
  std::string line;
  std::size_t line_no = 0;
  bool have_header = false;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line_no == 1 && line.size() >= 3 && line.compare(0, 3, "\xEF\xBB\xBF") == 0) line.erase(0, 3);
    if (trim(line).empty()) continue;
    auto fields = split_record(line, line_no);
    if (!have_header) {
      table.header = std::move(fields);
      table.columns.resize(table.header.size());
      have_header = true;
      continue;
    }
    if (fields.size() != table.header.size()) {
      throw IngestionError("line " + std::to_string(line_no) + ": expected " +
                           std::to_string(table.header.size()) + " fields, found " +
                           std::to_string(fields.size()));
    }
    for (std::size_t c = 0; c < fields.size(); ++c) {
      if (fields[c].empty()) {
        throw IngestionError("line " + std::to_string(line_no) + ": empty value in column '" +
                             table.header[c] + "'");
      }
      table.columns[c].push_back(std::move(fields[c]));
    }
    table.line_numbers.push_back(line_no);
  }
  if (!have_header) throw IngestionError("input has no header row");
  if (table.line_numbers.empty()) throw IngestionError("input has no data rows");
  return table;
}

std::vector<ColumnSchema> infer_schema(const RawTable& table, const std::optional<std::string>& target) {
  std::vector<ColumnSchema> schema;
  std::size_t target_index = table.header.size() - 1;
  if (target) {
    bool found = false;
    for (std::size_t c = 0; c < table.header.size(); ++c) {
      if (table.header[c] == *target) {
        target_index = c;
        found = true;
      }
    }
    if (!found) throw SchemaError("target column '" + *target + "' not found in header");
  }
  for (std::size_t c = 0; c < table.header.size(); ++c) {
    ColumnSchema col{table.header[c], ColumnKind::categorical};
    if (c == target_index) {
      col.kind = ColumnKind::target;
    } else {
      bool numeric = true;
      std::set<double> distinct;
      for (const auto& cell : table.columns[c]) {
        auto v = parse_real(cell);
        if (!v || !std::isfinite(*v)) {
          numeric = false;
          break;
        }
        if (distinct.size() <= kContinuousMinDistinct) distinct.insert(*v);
      }
      if (numeric && distinct.size() > kContinuousMinDistinct) col.kind = ColumnKind::continuous;
    }
    schema.push_back(col);
  }
  return schema;
}

}  // namespace

std::string to_string(ColumnKind kind) {
  switch (kind) {
    case ColumnKind::categorical: return "categorical";
    case ColumnKind::continuous: return "continuous";
    case ColumnKind::target: return "target";
  }
  return "?";
}

ColumnKind parse_column_kind(const std::string& text) {
  if (text == "categorical") return ColumnKind::categorical;
  if (text == "continuous") return ColumnKind::continuous;
  if (text == "target") return ColumnKind::target;
  throw SchemaError("unknown column kind '" + text + "'");
}

LabelVector LabelVector::from_values(const std::vector<int>& values) {
  BitVector bits(values.size());
  for (std::size_t i = 0; i < values.size(); ++i) {
    if (values[i] != 0 && values[i] != 1) throw SchemaError("label values must be 0 or 1");
    bits.set(i, values[i] == 1);
  }
  return LabelVector(std::move(bits));
}

std::optional<std::int32_t> FeatureColumn::code_of(const std::string& value) const {
  for (std::size_t k = 0; k < dictionary.size(); ++k) {
    if (dictionary[k] == value) return static_cast<std::int32_t>(k);
  }
  return std::nullopt;
}

FeatureColumn FeatureColumn::categorical(std::string name, std::vector<std::int32_t> codes,
                                         std::vector<std::string> dictionary) {
  FeatureColumn col;
  col.schema = {std::move(name), ColumnKind::categorical};
  for (auto code : codes) {
    if (code < 0 || static_cast<std::size_t>(code) >= dictionary.size()) {
      throw SchemaError("column '" + col.schema.name + "': code outside dictionary");
    }
  }
  col.codes = std::move(codes);
  col.dictionary = std::move(dictionary);
  return col;
}

FeatureColumn FeatureColumn::continuous(std::string name, std::vector<double> values) {
  FeatureColumn col;
  col.schema = {std::move(name), ColumnKind::continuous};
  for (double v : values) {
    if (!std::isfinite(v)) throw SchemaError("column '" + col.schema.name + "': non-finite value");
  }
  col.values = std::move(values);
  return col;
}

Dataset::Dataset(std::vector<FeatureColumn> features, LabelVector target, std::string target_name,
                 std::size_t target_position)
    : features_(std::move(features)),
      target_(std::move(target)),
      target_name_(std::move(target_name)),
      target_position_(target_position == std::size_t(-1) ? features_.size() : target_position) {
  if (target_.size() == 0) throw SchemaError("dataset must have at least one transaction");
  if (target_position_ > features_.size()) throw SchemaError("target position out of range");
  std::vector<ColumnSchema> all = schema();
  validate_schema(all);
  for (const auto& f : features_) {
    if (f.schema.kind == ColumnKind::target) throw SchemaError("feature column marked as target");
    if (f.length() != target_.size()) {
      throw SchemaError("column '" + f.schema.name + "' has length " + std::to_string(f.length()) +
                        ", expected " + std::to_string(target_.size()));
    }
  }
}

std::size_t Dataset::continuous_count() const {
  std::size_t n = 0;
  for (const auto& f : features_) n += f.is_continuous() ? 1 : 0;
  return n;
}

std::vector<ColumnSchema> Dataset::schema() const {
  std::vector<ColumnSchema> out;
  for (std::size_t i = 0; i <= features_.size(); ++i) {
    if (i == target_position_) out.push_back({target_name_, ColumnKind::target});
    if (i < features_.size()) out.push_back(features_[i].schema);
  }
  return out;
}

Dataset Dataset::with_target(LabelVector labels) const {
  return Dataset(features_, std::move(labels), target_name_, target_position_);
}

Dataset parse_csv(std::istream& in, const LoadOptions& options) {
  RawTable table = read_table(in);

  std::vector<ColumnSchema> schema;
  if (options.schema) {
    validate_schema(*options.schema);
    std::unordered_map<std::string, ColumnKind> kinds;
    for (const auto& col : *options.schema) kinds[col.name] = col.kind;
    if (kinds.size() != table.header.size()) {
      throw SchemaError("schema lists " + std::to_string(kinds.size()) + " columns, file has " +
                        std::to_string(table.header.size()));
    }
    for (const auto& name : table.header) {
      auto it = kinds.find(name);
      if (it == kinds.end()) throw SchemaError("column '" + name + "' missing from schema");
      schema.push_back({name, it->second});
    }
  } else {
    schema = infer_schema(table, options.target);
  }
  validate_schema(schema);

  const std::size_t m = table.line_numbers.size();
  std::vector<FeatureColumn> features;
  BitVector target_bits(m);
  std::string target_name;
  std::size_t target_position = 0;

  for (std::size_t c = 0; c < schema.size(); ++c) {
    const auto& cells = table.columns[c];
    const auto& col = schema[c];
    switch (col.kind) {
      case ColumnKind::target: {
        target_name = col.name;
        target_position = features.size();
        for (std::size_t i = 0; i < m; ++i) {
          auto v = parse_real(cells[i]);
          if (!v || (*v != 0.0 && *v != 1.0)) {
            throw SchemaError("line " + std::to_string(table.line_numbers[i]) + ": target '" + col.name +
                              "' value '" + cells[i] + "' is not 0 or 1");
          }
          target_bits.set(i, *v == 1.0);
        }
        break;
      }
      case ColumnKind::continuous: {
        std::vector<double> values(m);
        for (std::size_t i = 0; i < m; ++i) {
          auto v = parse_real(cells[i]);
          if (!v || !std::isfinite(*v)) {
            throw SchemaError("line " + std::to_string(table.line_numbers[i]) + ": column '" + col.name +
                              "' value '" + cells[i] + "' is not a finite number");
          }
          values[i] = *v;
        }
        features.push_back(FeatureColumn::continuous(col.name, std::move(values)));
        break;
      }
      case ColumnKind::categorical: {
        std::unordered_map<std::string, std::int32_t> dict;
        std::vector<std::string> dictionary;
        std::vector<std::int32_t> codes(m);
        for (std::size_t i = 0; i < m; ++i) {
          auto [it, inserted] = dict.try_emplace(cells[i], static_cast<std::int32_t>(dictionary.size()));
          if (inserted) dictionary.push_back(cells[i]);
          codes[i] = it->second;
        }
        features.push_back(FeatureColumn::categorical(col.name, std::move(codes), std::move(dictionary)));
        break;
      }
    }
  }
  return Dataset(std::move(features), LabelVector(std::move(target_bits)), target_name, target_position);
}

Dataset load_csv(const std::filesystem::path& path, const LoadOptions& options) {
  std::ifstream in(path);
  if (!in) throw IngestionError("cannot open '" + path.string() + "'");
  return parse_csv(in, options);
}

std::vector<ColumnSchema> parse_schema(std::istream& in) {
  std::vector<ColumnSchema> schema;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    const std::string t = trim(line);
    if (t.empty() || t.front() == '#') continue;
    const auto eq = t.find('=');
    if (eq == std::string::npos) {
      throw SchemaError("schema line " + std::to_string(line_no) + ": expected name=kind");
    }
    schema.push_back({trim(t.substr(0, eq)), parse_column_kind(trim(t.substr(eq + 1)))});
  }
  validate_schema(schema);
  return schema;
}

std::vector<ColumnSchema> read_schema_file(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw IngestionError("cannot open schema file '" + path.string() + "'");
  return parse_schema(in);
}

void write_csv(const Dataset& d, std::ostream& out) {
  const auto schema = d.schema();
  for (std::size_t c = 0; c < schema.size(); ++c) {
    out << (c ? "," : "") << quote(schema[c].name);
  }
  out << '\n';
  for (std::size_t i = 0; i < d.m(); ++i) {
    bool first = true;
    auto emit = [&](const std::string& cell) {
      if (!first) out << ',';
      out << cell;
      first = false;
    };
    for (std::size_t c = 0; c <= d.feature_count(); ++c) {
      if (c == d.target_position()) emit(d.target()[i] ? "1" : "0");
      if (c == d.feature_count()) break;
      const auto& f = d.feature(c);
      emit(f.is_categorical() ? quote(f.dictionary[static_cast<std::size_t>(f.codes[i])])
                              : format_real(f.values[i]));
    }
    out << '\n';
  }
}

void write_csv(const Dataset& d, const std::filesystem::path& path) {
  std::ofstream out(path);
  if (!out) throw IngestionError("cannot write '" + path.string() + "'");
  write_csv(d, out);
}

double mean_target(const Dataset& d) { return d.target().mean(); }

}  // namespace fsr
