#include "mixkern/dataset.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <sstream>

#include "mixkern/errors.hpp"

namespace mixkern {

namespace {

double parse_double(const std::string& tok, std::size_t line_no) {
  try {
    std::size_t pos = 0;
    const double v = std::stod(tok, &pos);
    if (pos != tok.size()) throw ParseError("trailing characters in field '" + tok + "'", line_no);
    return v;
  } catch (const ParseError&) {
    throw;
  } catch (...) {
    throw ParseError("cannot parse number '" + tok + "'", line_no);
  }
}

LabeledDataset load_csv(const DatasetFile& file) {
  std::ifstream in(file.path);
  if (!in) throw std::runtime_error("cannot open dataset file: " + file.path);
  LabeledDataset ds;
  std::string line;
  std::size_t line_no = 0;
  std::size_t n_cols = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty()) continue;
    std::vector<std::string> fields;
    std::string tok;
    std::istringstream ls(line);
    while (std::getline(ls, tok, file.delimiter)) fields.push_back(tok);
    if (n_cols == 0) {
      n_cols = fields.size();
      if (n_cols < 2) throw ParseError("need at least a label and one feature", line_no);
      if (file.label_column >= n_cols)
        throw ParseError("label column out of range", line_no);
    } else if (fields.size() != n_cols) {
      throw ParseError("inconsistent column count", line_no);
    }
    std::vector<double> x;
    x.reserve(n_cols - 1);
    double y = 0.0;
    for (std::size_t c = 0; c < fields.size(); ++c) {
      const double v = parse_double(fields[c], line_no);
      if (c == file.label_column) y = v;
      else x.push_back(v);
    }
    ds.features.push_back(std::move(x));
    ds.labels.push_back(y);
  }
  return ds;
}

LabeledDataset load_libsvm(const DatasetFile& file) {
  std::ifstream in(file.path);
  if (!in) throw std::runtime_error("cannot open dataset file: " + file.path);
  std::vector<double> labels;
  std::vector<std::vector<std::pair<std::size_t, double>>> rows;
  std::size_t max_idx = file.libsvm_dim;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty()) continue;
    std::istringstream ls(line);
    std::string tok;
    if (!(ls >> tok)) continue;
    labels.push_back(parse_double(tok, line_no));
    std::vector<std::pair<std::size_t, double>> row;
    while (ls >> tok) {
      const auto colon = tok.find(':');
      if (colon == std::string::npos)
        throw ParseError("expected idx:value, got '" + tok + "'", line_no);
      std::size_t idx = 0;
      try {
        idx = std::stoul(tok.substr(0, colon));
      } catch (...) {
        throw ParseError("bad feature index in '" + tok + "'", line_no);
      }
      if (idx == 0) throw ParseError("libsvm indices are one-based", line_no);
      const double v = parse_double(tok.substr(colon + 1), line_no);
      row.emplace_back(idx, v);
      max_idx = std::max(max_idx, idx);
    }
    rows.push_back(std::move(row));
  }
  LabeledDataset ds;
  ds.labels = std::move(labels);
  ds.features.assign(rows.size(), std::vector<double>(max_idx, 0.0));
  for (std::size_t i = 0; i < rows.size(); ++i)
    for (const auto& [idx, v] : rows[i]) ds.features[i][idx - 1] = v;
  return ds;
}

}  // namespace

LabeledDataset load(const DatasetFile& file) {
  LabeledDataset ds = file.format == FileFormat::kCsv ? load_csv(file)
                                                      : load_libsvm(file);
  bool all01 = true, any0 = false;
  for (double y : ds.labels) {
    if (y != 0.0 && y != 1.0) all01 = false;
    if (y == 0.0) any0 = true;
  }
  if (all01 && any0 && !ds.labels.empty()) {
    std::cerr << "warning: labels in {0,1} remapped to {-1,+1} (" << file.path
              << ")\n";
    for (double& y : ds.labels) y = 2.0 * y - 1.0;
  }
  for (double y : ds.labels)
    if (std::abs(y) > 1.0)
      throw LabelDomainError("label " + std::to_string(y) +
                             " outside [-1,1]; binary labels must be -1/+1 or 0/1");
  return ds;
}

void save_csv(const LabeledDataset& ds, const std::string& path,
              std::size_t label_column, char delimiter) {
  std::FILE* f = std::fopen(path.c_str(), "w");
  if (!f) throw std::runtime_error("cannot open output file: " + path);
  const std::size_t d = ds.dim();
  for (std::size_t i = 0; i < ds.size(); ++i) {
    std::size_t fi = 0;
    for (std::size_t c = 0; c < d + 1; ++c) {
      if (c > 0) std::fputc(delimiter, f);
      std::fprintf(f, "%.17g", c == label_column ? ds.labels[i] : ds.features[i][fi++]);
    }
    std::fputc('\n', f);
  }
  std::fclose(f);
}

void save_libsvm(const LabeledDataset& ds, const std::string& path) {
  std::FILE* f = std::fopen(path.c_str(), "w");
  if (!f) throw std::runtime_error("cannot open output file: " + path);
  for (std::size_t i = 0; i < ds.size(); ++i) {
    std::fprintf(f, "%.17g", ds.labels[i]);
    for (std::size_t j = 0; j < ds.features[i].size(); ++j)
      if (ds.features[i][j] != 0.0)
        std::fprintf(f, " %zu:%.17g", j + 1, ds.features[i][j]);
    std::fputc('\n', f);
  }
  std::fclose(f);
}

LabeledDataset Standardizer::apply(const LabeledDataset& ds) const {
  LabeledDataset out = ds;
  for (auto& x : out.features)
    for (std::size_t j = 0; j < x.size(); ++j)
      x[j] = (x[j] - mean[j]) / scale[j];
  return out;
}

Standardizer standardize_fit(const LabeledDataset& ds) {
  if (ds.size() < 2) throw TooFewExamples("standardize needs at least 2 examples");
  const std::size_t d = ds.dim();
  const double n = static_cast<double>(ds.size());
  Standardizer st;
  st.mean.assign(d, 0.0);
  st.scale.assign(d, 1.0);
  for (const auto& x : ds.features)
    for (std::size_t j = 0; j < d; ++j) st.mean[j] += x[j];
  for (std::size_t j = 0; j < d; ++j) st.mean[j] /= n;
  std::vector<double> var(d, 0.0);
  for (const auto& x : ds.features)
    for (std::size_t j = 0; j < d; ++j) {
      const double c = x[j] - st.mean[j];
      var[j] += c * c;
    }
  for (std::size_t j = 0; j < d; ++j) {
    const double sd = std::sqrt(var[j] / n);
    if (sd > 0.0) st.scale[j] = sd;
  }
  return st;
}

LabeledDataset select(const LabeledDataset& ds, const std::vector<std::size_t>& idx) {
  LabeledDataset out;
  out.features.reserve(idx.size());
  out.labels.reserve(idx.size());
  for (std::size_t i : idx) {
    out.features.push_back(ds.features[i]);
    out.labels.push_back(ds.labels[i]);
  }
  return out;
}

LabeledDataset subsample(const LabeledDataset& ds, std::size_t count, Rng& rng) {
  if (count >= ds.size()) return ds;
  // Partial Fisher-Yates over an index vector.
  std::vector<std::size_t> idx(ds.size());
  for (std::size_t i = 0; i < idx.size(); ++i) idx[i] = i;
  for (std::size_t i = 0; i < count; ++i) {
    const std::size_t j = i + rng.uniform_index(idx.size() - i);
    std::swap(idx[i], idx[j]);
  }
  idx.resize(count);
  return select(ds, idx);
}

}  // namespace mixkern
