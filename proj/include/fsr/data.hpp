#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "fsr/bitvector.hpp"

namespace fsr {

/// Input could not be read or split into rows (missing file, wrong arity, empty cell).
class IngestionError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Input parsed but violates the declared or inferred schema.
class SchemaError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

enum class ColumnKind { categorical, continuous, target };

std::string to_string(ColumnKind kind);
ColumnKind parse_column_kind(const std::string& text);

struct ColumnSchema {
  std::string name;
  ColumnKind kind = ColumnKind::categorical;

  friend bool operator==(const ColumnSchema&, const ColumnSchema&) = default;
};

/// Binary vector of length m: the observed target or a resampled/permuted copy.
class LabelVector {
 public:
  LabelVector() = default;
  explicit LabelVector(BitVector bits) : bits_(std::move(bits)), ones_(bits_.count()) {}
  static LabelVector from_values(const std::vector<int>& values);

  std::size_t size() const { return bits_.size(); }
  std::size_t ones() const { return ones_; }
  double mean() const {
    return bits_.size() == 0 ? 0.0 : static_cast<double>(ones_) / static_cast<double>(bits_.size());
  }
  bool operator[](std::size_t i) const { return bits_.test(i); }
  const BitVector& bits() const { return bits_; }

  friend bool operator==(const LabelVector&, const LabelVector&) = default;

 private:
  BitVector bits_;
  std::size_t ones_ = 0;
};

/// A non-target column. Categorical columns hold integer codes plus the
/// code -> string dictionary; continuous columns hold finite reals.
struct FeatureColumn {
  ColumnSchema schema;
  std::vector<std::int32_t> codes;
  std::vector<std::string> dictionary;
  std::vector<double> values;

  bool is_categorical() const { return schema.kind == ColumnKind::categorical; }
  bool is_continuous() const { return schema.kind == ColumnKind::continuous; }
  std::size_t length() const { return is_categorical() ? codes.size() : values.size(); }
  std::optional<std::int32_t> code_of(const std::string& value) const;

  static FeatureColumn categorical(std::string name, std::vector<std::int32_t> codes,
                                   std::vector<std::string> dictionary);
  static FeatureColumn continuous(std::string name, std::vector<double> values);
};

/// Immutable dataset D = (A, T). Feature indices used by selectors count
/// non-target columns only, in file order.
class Dataset {
 public:
  Dataset(std::vector<FeatureColumn> features, LabelVector target, std::string target_name = "target",
          std::size_t target_position = std::size_t(-1));

  std::size_t m() const { return target_.size(); }
  std::size_t feature_count() const { return features_.size(); }
  const FeatureColumn& feature(std::size_t i) const { return features_.at(i); }
  const std::vector<FeatureColumn>& features() const { return features_; }
  const LabelVector& target() const { return target_; }
  const std::string& target_name() const { return target_name_; }
  std::size_t target_position() const { return target_position_; }

  std::size_t continuous_count() const;
  /// Column schemas in file order, target included.
  std::vector<ColumnSchema> schema() const;

  /// Same features, different labels.
  Dataset with_target(LabelVector labels) const;

 private:
  std::vector<FeatureColumn> features_;
  LabelVector target_;
  std::string target_name_;
  std::size_t target_position_;
};

/// Schema handling for load_csv. An explicit schema lists every column; when
/// absent the schema is inferred and `target` (default: last column) names
/// the label column.
struct LoadOptions {
  std::optional<std::vector<ColumnSchema>> schema;
  std::optional<std::string> target;
};

Dataset load_csv(const std::filesystem::path& path, const LoadOptions& options = {});
Dataset parse_csv(std::istream& in, const LoadOptions& options = {});

/// Sidecar schema file: one `name=kind` line per column; blank lines and `#` comments ignored.
std::vector<ColumnSchema> read_schema_file(const std::filesystem::path& path);
std::vector<ColumnSchema> parse_schema(std::istream& in);

void write_csv(const Dataset& d, std::ostream& out);
void write_csv(const Dataset& d, const std::filesystem::path& path);

/// Fraction of target entries equal to 1.
double mean_target(const Dataset& d);

}  // namespace fsr
