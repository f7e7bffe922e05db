#pragma once

#include <cstddef>
#include <string>
#include <vector>

#include "mixkern/rng.hpp"

namespace mixkern {

// Feature vectors with real labels in [-1, 1]: binary {-1,+1} before
// augmentation, fractional after.
struct LabeledDataset {
  std::vector<std::vector<double>> features;
  std::vector<double> labels;

  std::size_t size() const { return labels.size(); }
  std::size_t dim() const { return features.empty() ? 0 : features[0].size(); }
};

enum class FileFormat { kCsv, kLibsvm };

struct DatasetFile {
  std::string path;
  FileFormat format = FileFormat::kCsv;
  std::size_t label_column = 0;  // CSV only
  char delimiter = ',';          // CSV only
  std::size_t libsvm_dim = 0;    // 0 = infer from max index
};

// Parses a dataset file. Labels in {0,1} are remapped to {-1,+1} with a
// warning on stderr; labels outside [-1,1] otherwise raise LabelDomainError.
LabeledDataset load(const DatasetFile& file);

// Canonical CSV writer: label at label_column, fields at 17 significant
// digits so that load(save(ds)) round-trips bitwise.
void save_csv(const LabeledDataset& ds, const std::string& path,
              std::size_t label_column = 0, char delimiter = ',');

// Canonical libsvm writer (one-based indices, nonzero features only).
void save_libsvm(const LabeledDataset& ds, const std::string& path);

// Per-feature affine transform fitted on training data.
struct Standardizer {
  std::vector<double> mean;
  std::vector<double> scale;  // 1 for zero-variance features

  LabeledDataset apply(const LabeledDataset& ds) const;
};

// Shift each feature to mean 0, unit standard deviation; zero-variance
// features are centered and left at scale 1. Needs n >= 2.
Standardizer standardize_fit(const LabeledDataset& ds);

// Uniform subsample without replacement, deterministic given the rng state.
LabeledDataset subsample(const LabeledDataset& ds, std::size_t count, Rng& rng);

LabeledDataset select(const LabeledDataset& ds, const std::vector<std::size_t>& idx);

}  // namespace mixkern
