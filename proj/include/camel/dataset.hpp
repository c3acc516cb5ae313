#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include "camel/matrix.hpp"

namespace camel {

// A multi-label dataset: n instances with d real features and q labels in
// {-1,+1}. Immutable after construction; safe to share across workers.
struct Dataset {
    Matrix features;                       // n×d
    Matrix labels;                         // n×q, entries ±1
    std::vector<std::string> label_names;  // empty or exactly q entries
};

struct FoldSplit {
    int fold_count = 0;
    std::vector<int> assignments;  // length n, values in [0, fold_count)
    std::uint64_t seed = 0;
};

struct DatasetSummary {
    std::size_t instance_count = 0;  // n
    std::size_t feature_count = 0;   // d
    std::size_t label_count = 0;     // q
    double label_cardinality = 0.0;  // mean +1 entries per instance
};

// Feature file: one instance per line, d reals separated by commas or
// whitespace. Label file: same row order, q fields each in {0,1} or {-1,+1}
// (0 maps to -1); optional first line `#labels name1,...,nameq`.
Dataset load_dataset(const std::filesystem::path& features_path,
                     const std::filesystem::path& labels_path);

// Inverse of load_dataset; reloading reproduces the dataset bit-exactly.
void save_dataset(const Dataset& ds, const std::filesystem::path& features_path,
                  const std::filesystem::path& labels_path);

// Reads a label file alone (names header allowed, then dropped); entries
// come back ±1-encoded.
Matrix load_label_matrix(const std::filesystem::path& labels_path);

// Throws InputError unless the invariants above hold.
void validate_dataset(const Dataset& ds);

// Balanced shuffled partition, a pure function of (n, k, seed).
FoldSplit kfold_split(std::size_t n, int k, std::uint64_t seed);

std::vector<int> fold_test_rows(const FoldSplit& split, int fold);
std::vector<int> fold_train_rows(const FoldSplit& split, int fold);

DatasetSummary describe(const Dataset& ds);

// Rows of `ds` selected by `rows`, in order.
Dataset subset(const Dataset& ds, std::span<const int> rows);

}  // namespace camel
