#include "camel/dataset.hpp"

#include <cmath>
#include <numeric>
#include <random>
#include <sstream>

#include "camel/errors.hpp"
#include "camel/text_io.hpp"

namespace camel {

namespace {

constexpr std::string_view kLabelHeader = "#labels";

struct ParsedRows {
    std::vector<std::vector<double>> rows;
    std::vector<std::string> names;
};

ParsedRows parse_table(const std::filesystem::path& path, bool allow_label_header) {
    const std::string content = read_file(path);
    ParsedRows out;
    std::istringstream in(content);
    std::string line;
    std::size_t lineno = 0;
    std::size_t cols = 0;
    while (std::getline(in, line)) {
        ++lineno;
        if (lineno == 1 && allow_label_header && line.rfind(kLabelHeader, 0) == 0) {
            for (auto f : split_fields(line.substr(kLabelHeader.size())))
                out.names.emplace_back(f);
            continue;
        }
        auto fields = split_fields(line);
        if (fields.empty()) continue;
        std::vector<double> row;
        row.reserve(fields.size());
        for (auto f : fields) {
            try {
                row.push_back(parse_double(f));
            } catch (const InputError& e) {
                throw InputError(path.string() + ":" + std::to_string(lineno) + ": " + e.what());
            }
        }
        if (cols == 0) cols = row.size();
        if (row.size() != cols)
            throw InputError(path.string() + ":" + std::to_string(lineno) + ": expected " +
                             std::to_string(cols) + " fields, got " +
                             std::to_string(row.size()));
        out.rows.push_back(std::move(row));
    }
    if (out.rows.empty()) throw InputError(path.string() + ": empty file");
    return out;
}

Matrix to_matrix(const std::vector<std::vector<double>>& rows) {
    Matrix m(rows.size(), rows.front().size());
    for (std::size_t i = 0; i < rows.size(); ++i)
        for (std::size_t j = 0; j < rows[i].size(); ++j) m(i, j) = rows[i][j];
    return m;
}

// Unbiased draw in [0, n) from a fully specified engine, so fold
// assignments are reproducible across platforms.
std::uint64_t bounded(std::mt19937_64& rng, std::uint64_t n) {
    const std::uint64_t limit = UINT64_MAX - UINT64_MAX % n;
    std::uint64_t x;
    do {
        x = rng();
    } while (x >= limit);
    return x % n;
}

// {0,1} input maps to {-1,+1}; anything else outside ±1 is rejected.
Matrix encode_labels(Matrix labels, const std::filesystem::path& path) {
    for (std::size_t i = 0; i < labels.rows(); ++i) {
        for (std::size_t j = 0; j < labels.cols(); ++j) {
            const double v = labels(i, j);
            if (v == 0.0)
                labels(i, j) = -1.0;
            else if (v != 1.0 && v != -1.0)
                throw InputError(path.string() + ": label value " + format_double(v) +
                                 " outside {0,1,-1,+1} at row " + std::to_string(i + 1));
        }
    }
    return labels;
}

}  // namespace

Dataset load_dataset(const std::filesystem::path& features_path,
                     const std::filesystem::path& labels_path) {
    ParsedRows feat = parse_table(features_path, false);
    ParsedRows lab = parse_table(labels_path, true);

    Dataset ds;
    ds.features = to_matrix(feat.rows);
    ds.label_names = std::move(lab.names);
    ds.labels = encode_labels(to_matrix(lab.rows), labels_path);

    if (ds.features.rows() != ds.labels.rows())
        throw InputError("dimension mismatch: " + std::to_string(ds.features.rows()) +
                         " feature rows vs " + std::to_string(ds.labels.rows()) +
                         " label rows");
    validate_dataset(ds);
    return ds;
}

void save_dataset(const Dataset& ds, const std::filesystem::path& features_path,
                  const std::filesystem::path& labels_path) {
    atomic_write_file(features_path, matrix_to_text(ds.features));
    std::string labels;
    if (!ds.label_names.empty()) {
        labels += kLabelHeader;
        labels += ' ';
        for (std::size_t j = 0; j < ds.label_names.size(); ++j) {
            if (j > 0) labels += ',';
            labels += ds.label_names[j];
        }
        labels += '\n';
    }
    labels += matrix_to_text(ds.labels);
    atomic_write_file(labels_path, labels);
}

Matrix load_label_matrix(const std::filesystem::path& labels_path) {
    ParsedRows lab = parse_table(labels_path, true);
    Matrix labels = encode_labels(to_matrix(lab.rows), labels_path);
    if (labels.cols() < 2) throw InputError(labels_path.string() + ": need q >= 2 labels");
    return labels;
}

void validate_dataset(const Dataset& ds) {
    const std::size_t n = ds.features.rows();
    if (n < 1 || ds.features.cols() < 1) throw InputError("dataset needs n >= 1 and d >= 1");
    if (ds.labels.rows() != n)
        throw InputError("dimension mismatch between features and labels");
    if (ds.labels.cols() < 2) throw InputError("dataset needs q >= 2 labels");
    for (std::size_t i = 0; i < ds.features.size(); ++i)
        if (!std::isfinite(ds.features.data()[i]))
            throw InputError("feature matrix contains NaN or infinite entries");
    for (std::size_t i = 0; i < ds.labels.size(); ++i) {
        const double v = ds.labels.data()[i];
        if (v != 1.0 && v != -1.0) throw InputError("label matrix has entries outside {-1,+1}");
    }
    if (!ds.label_names.empty() && ds.label_names.size() != ds.labels.cols())
        throw InputError("label name count does not match label count");
}

FoldSplit kfold_split(std::size_t n, int k, std::uint64_t seed) {
    if (k <= 1) throw InputError("fold count must be at least 2");
    if (static_cast<std::size_t>(k) > n)
        throw InputError("fold count " + std::to_string(k) + " exceeds instance count " +
                         std::to_string(n));
    std::vector<int> perm(n);
    std::iota(perm.begin(), perm.end(), 0);
    std::mt19937_64 rng(seed);
    for (std::size_t i = n - 1; i > 0; --i) {
        const std::size_t j = bounded(rng, i + 1);
        std::swap(perm[i], perm[j]);
    }
    FoldSplit split;
    split.fold_count = k;
    split.seed = seed;
    split.assignments.resize(n);
    for (std::size_t i = 0; i < n; ++i)
        split.assignments[static_cast<std::size_t>(perm[i])] = static_cast<int>(i % k);
    return split;
}

std::vector<int> fold_test_rows(const FoldSplit& split, int fold) {
    std::vector<int> rows;
    for (std::size_t i = 0; i < split.assignments.size(); ++i)
        if (split.assignments[i] == fold) rows.push_back(static_cast<int>(i));
    return rows;
}

std::vector<int> fold_train_rows(const FoldSplit& split, int fold) {
    std::vector<int> rows;
    for (std::size_t i = 0; i < split.assignments.size(); ++i)
        if (split.assignments[i] != fold) rows.push_back(static_cast<int>(i));
    return rows;
}

DatasetSummary describe(const Dataset& ds) {
    DatasetSummary s;
    s.instance_count = ds.features.rows();
    s.feature_count = ds.features.cols();
    s.label_count = ds.labels.cols();
    std::size_t positives = 0;
    for (std::size_t i = 0; i < ds.labels.size(); ++i)
        if (ds.labels.data()[i] == 1.0) ++positives;
    s.label_cardinality = static_cast<double>(positives) / static_cast<double>(s.instance_count);
    return s;
}

Dataset subset(const Dataset& ds, std::span<const int> rows) {
    Dataset out;
    out.features = take_rows(ds.features, rows);
    out.labels = take_rows(ds.labels, rows);
    out.label_names = ds.label_names;
    return out;
}

}  // namespace camel
