#include "sartex/dataset.hpp"

#include <cmath>
#include <fstream>
#include <sstream>

#include "sartex/error.hpp"
#include "sartex/text.hpp"

namespace sartex::classify {

namespace {

Error dataset_error(ErrorKind kind, const std::string& message) {
  return Error(kind, "classify", message);
}

std::vector<std::string> read_lines(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw dataset_error(ErrorKind::Io, "cannot open " + path.string());
  std::vector<std::string> lines;
  std::string line;
  while (std::getline(in, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (!text::trim(line).empty()) lines.push_back(line);
  }
  return lines;
}

}  // namespace

std::size_t LabeledDataset::count(int label) const {
  std::size_t n = 0;
  for (const auto& s : samples) n += (s.label == label);
  return n;
}

void validate_for_training(const LabeledDataset& data) {
  for (std::size_t i = 0; i < data.size(); ++i) {
    const auto& s = data.samples[i];
    if (s.label != 0 && s.label != 1) {
      throw dataset_error(ErrorKind::Training,
                          "label of sample " + std::to_string(i) + " is not 0 or 1");
    }
    for (double v : s.x.values) {
      if (!std::isfinite(v)) {
        throw dataset_error(ErrorKind::Training,
                            "non-finite feature in sample " + std::to_string(i));
      }
    }
  }
  if (data.count(0) == 0 || data.count(1) == 0) {
    throw dataset_error(ErrorKind::Training, "training data must contain both classes (have " +
                                                 std::to_string(data.count(0)) + " / " +
                                                 std::to_string(data.count(1)) + ")");
  }
}

std::pair<LabeledDataset, LabeledDataset> stratified_split(const LabeledDataset& data,
                                                           double train_fraction) {
  if (!(train_fraction > 0.0 && train_fraction < 1.0)) {
    throw dataset_error(ErrorKind::Input, "train fraction must lie in (0, 1)");
  }
  const std::size_t keep[2] = {
      static_cast<std::size_t>(std::llround(train_fraction * double(data.count(0)))),
      static_cast<std::size_t>(std::llround(train_fraction * double(data.count(1)))),
  };
  std::size_t seen[2] = {0, 0};
  LabeledDataset train;
  LabeledDataset test;
  for (const auto& s : data.samples) {
    const int c = s.label == 1 ? 1 : 0;
    (seen[c]++ < keep[c] ? train : test).samples.push_back(s);
  }
  return {std::move(train), std::move(test)};
}

Standardizer Standardizer::fit(const LabeledDataset& data) {
  if (data.empty()) throw dataset_error(ErrorKind::Input, "cannot standardize an empty dataset");
  Standardizer s;
  const double n = static_cast<double>(data.size());
  for (std::size_t f = 0; f < texture::kFeatureCount; ++f) {
    double sum = 0.0;
    for (const auto& smp : data.samples) sum += smp.x.values[f];
    const double mean = sum / n;
    double ss = 0.0;
    for (const auto& smp : data.samples) {
      const double d = smp.x.values[f] - mean;
      ss += d * d;
    }
    const double sd = std::sqrt(ss / n);
    s.mean[f] = mean;
    s.scale[f] = sd > 0.0 ? sd : 1.0;
  }
  return s;
}

Standardizer Standardizer::identity() {
  Standardizer s;
  s.scale.fill(1.0);
  return s;
}

Features Standardizer::apply(const Features& x) const {
  Features out;
  for (std::size_t f = 0; f < x.size(); ++f) out[f] = (x[f] - mean[f]) / scale[f];
  return out;
}

void require_finite(const Features& x) {
  for (std::size_t f = 0; f < x.size(); ++f) {
    if (!std::isfinite(x[f])) {
      throw dataset_error(ErrorKind::Input, "feature " + texture::feature_names()[f] +
                                                " is not finite");
    }
  }
}

std::string features_csv_header(bool with_label) {
  std::string h = "timestamp";
  for (const auto& name : texture::feature_names()) h += "," + name;
  if (with_label) h += ",label";
  return h;
}

std::string features_csv_row(const texture::TextureVector& v, std::optional<int> label,
                             bool with_label) {
  std::string row = v.timestamp.value_or("");
  for (double x : v.values) row += "," + text::format_double(x);
  if (with_label) {
    row += ",";
    if (label) row += std::to_string(*label);
  }
  return row;
}

void write_features_csv(const std::filesystem::path& path,
                        const std::vector<texture::TextureVector>& rows,
                        const std::vector<std::optional<int>>& labels) {
  const bool with_label = !labels.empty();
  if (with_label && labels.size() != rows.size()) {
    throw dataset_error(ErrorKind::Input, "label count does not match row count");
  }
  std::ofstream out(path, std::ios::trunc);
  if (!out) throw dataset_error(ErrorKind::Io, "cannot write " + path.string());
  out << features_csv_header(with_label) << '\n';
  for (std::size_t i = 0; i < rows.size(); ++i) {
    out << features_csv_row(rows[i], with_label ? labels[i] : std::nullopt, with_label) << '\n';
  }
  if (!out) throw dataset_error(ErrorKind::Io, "write failed for " + path.string());
}

FeatureTable read_features_csv(const std::filesystem::path& path) {
  const auto lines = read_lines(path);
  if (lines.empty()) throw dataset_error(ErrorKind::Format, path.string() + ": missing header");
  const auto header = text::split(lines[0], ',');
  FeatureTable table;
  const auto& names = texture::feature_names();
  const bool ok_base = header.size() >= 1 + names.size() && text::trim(header[0]) == "timestamp";
  bool ok = ok_base;
  for (std::size_t f = 0; ok && f < names.size(); ++f) ok = text::trim(header[f + 1]) == names[f];
  if (ok && header.size() == names.size() + 2) {
    ok = text::trim(header.back()) == "label";
    table.has_label_column = ok;
  } else if (ok && header.size() != names.size() + 1) {
    ok = false;
  }
  if (!ok) {
    throw dataset_error(ErrorKind::Format,
                        path.string() + ": header must be '" + features_csv_header(false) +
                            "' with an optional trailing 'label' column");
  }
  for (std::size_t li = 1; li < lines.size(); ++li) {
    const auto fields = text::split(lines[li], ',');
    if (fields.size() != header.size()) {
      throw dataset_error(ErrorKind::Format, path.string() + ": line " + std::to_string(li + 1) +
                                                 " has " + std::to_string(fields.size()) +
                                                 " fields, expected " +
                                                 std::to_string(header.size()));
    }
    texture::TextureVector v;
    const auto ts = text::trim(fields[0]);
    if (!ts.empty()) v.timestamp = std::string(ts);
    for (std::size_t f = 0; f < names.size(); ++f) {
      v.values[f] = text::parse_double(fields[f + 1], names[f]);
    }
    std::optional<int> label;
    if (table.has_label_column && !text::trim(fields.back()).empty()) {
      label = static_cast<int>(text::parse_int(fields.back(), "label"));
    }
    table.rows.push_back(std::move(v));
    table.labels.push_back(label);
  }
  return table;
}

std::map<std::string, int> read_labels_csv(const std::filesystem::path& path) {
  const auto lines = read_lines(path);
  if (lines.empty() || text::trim(lines[0]) != "timestamp,label") {
    throw dataset_error(ErrorKind::Format, path.string() + ": header must be 'timestamp,label'");
  }
  std::map<std::string, int> out;
  for (std::size_t li = 1; li < lines.size(); ++li) {
    const auto fields = text::split(lines[li], ',');
    if (fields.size() != 2) {
      throw dataset_error(ErrorKind::Format,
                          path.string() + ": line " + std::to_string(li + 1) + " malformed");
    }
    const std::string key(text::trim(fields[0]));
    if (!out.emplace(key, static_cast<int>(text::parse_int(fields[1], "label"))).second) {
      throw dataset_error(ErrorKind::Format, path.string() + ": duplicate timestamp " + key);
    }
  }
  return out;
}

void write_labels_csv(const std::filesystem::path& path,
                      const std::vector<std::pair<std::string, int>>& labels) {
  std::ofstream out(path, std::ios::trunc);
  if (!out) throw dataset_error(ErrorKind::Io, "cannot write " + path.string());
  out << "timestamp,label\n";
  for (const auto& [ts, label] : labels) out << ts << ',' << label << '\n';
  if (!out) throw dataset_error(ErrorKind::Io, "write failed for " + path.string());
}

LabeledDataset to_dataset(const FeatureTable& table, const std::map<std::string, int>* labels) {
  LabeledDataset data;
  for (std::size_t i = 0; i < table.rows.size(); ++i) {
    const auto& row = table.rows[i];
    std::optional<int> label;
    if (labels) {
      if (!row.timestamp) {
        throw dataset_error(ErrorKind::Input,
                            "row " + std::to_string(i + 1) + " has no timestamp to join labels on");
      }
      const auto it = labels->find(*row.timestamp);
      if (it != labels->end()) label = it->second;
    } else {
      label = table.labels[i];
    }
    if (!label) {
      throw dataset_error(ErrorKind::Input, "no label for row " + std::to_string(i + 1) +
                                                (row.timestamp ? " (" + *row.timestamp + ")" : ""));
    }
    data.samples.push_back({row, *label});
  }
  return data;
}

}  // namespace sartex::classify
