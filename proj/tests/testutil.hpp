#pragma once

#include <cstring>
#include <filesystem>
#include <fstream>
#include <random>
#include <string>

#include "camel/dataset.hpp"
#include "camel/matrix.hpp"

namespace testutil {

// Unique scratch directory, removed on scope exit.
struct TempDir {
    std::filesystem::path path;
    TempDir() {
        static int counter = 0;
        path = std::filesystem::temp_directory_path() /
               ("camel_test_" + std::to_string(::getpid()) + "_" + std::to_string(counter++));
        std::filesystem::create_directories(path);
    }
    ~TempDir() { std::filesystem::remove_all(path); }
    TempDir(const TempDir&) = delete;
    TempDir& operator=(const TempDir&) = delete;
};

inline void write_file(const std::filesystem::path& p, const std::string& content) {
    std::ofstream out(p);
    out << content;
}

inline camel::Matrix random_matrix(std::size_t rows, std::size_t cols, std::mt19937_64& rng,
                                   double lo = -1.0, double hi = 1.0) {
    std::uniform_real_distribution<double> dist(lo, hi);
    camel::Matrix m(rows, cols);
    for (std::size_t i = 0; i < m.size(); ++i) m.data()[i] = dist(rng);
    return m;
}

inline camel::Matrix random_pm1(std::size_t rows, std::size_t cols, std::mt19937_64& rng) {
    camel::Matrix m(rows, cols);
    for (std::size_t i = 0; i < m.size(); ++i) m.data()[i] = (rng() & 1) ? 1.0 : -1.0;
    return m;
}

// ±1 labels where every column contains both signs and every row is mixed,
// so all seven metrics have valid instances.
inline camel::Matrix random_labels(std::size_t rows, std::size_t cols, std::mt19937_64& rng) {
    for (;;) {
        camel::Matrix m = random_pm1(rows, cols, rng);
        bool ok = true;
        for (std::size_t j = 0; j < cols && ok; ++j) {
            bool pos = false, neg = false;
            for (std::size_t i = 0; i < rows; ++i) {
                if (m(i, j) == 1.0) pos = true;
                else neg = true;
            }
            ok = pos && neg;
        }
        for (std::size_t i = 0; i < rows && ok; ++i) {
            bool pos = false, neg = false;
            for (std::size_t j = 0; j < cols; ++j) {
                if (m(i, j) == 1.0) pos = true;
                else neg = true;
            }
            ok = pos && neg;
        }
        if (ok) return m;
    }
}

inline bool bitwise_equal(const camel::Matrix& a, const camel::Matrix& b) {
    return a.rows() == b.rows() && a.cols() == b.cols() &&
           std::memcmp(a.data(), b.data(), a.size() * sizeof(double)) == 0;
}

inline bool bitwise_equal(const std::vector<double>& a, const std::vector<double>& b) {
    return a.size() == b.size() &&
           std::memcmp(a.data(), b.data(), a.size() * sizeof(double)) == 0;
}

// Well-separated Gaussian blobs; cluster c carries positives at labels
// {c mod q, (c+1) mod q}, so every instance has a mixed label pattern.
inline camel::Dataset make_cluster_dataset(std::size_t per_cluster, std::size_t clusters,
                                           std::size_t d, std::size_t q, double noise,
                                           std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> center_dist(-10.0, 10.0);
    std::normal_distribution<double> jitter(0.0, noise);

    camel::Matrix centers(clusters, d);
    for (std::size_t i = 0; i < centers.size(); ++i) centers.data()[i] = center_dist(rng);

    const std::size_t n = per_cluster * clusters;
    camel::Dataset ds;
    ds.features = camel::Matrix(n, d);
    ds.labels = camel::Matrix(n, q, -1.0);
    for (std::size_t c = 0; c < clusters; ++c) {
        for (std::size_t r = 0; r < per_cluster; ++r) {
            const std::size_t row = c * per_cluster + r;
            for (std::size_t k = 0; k < d; ++k)
                ds.features(row, k) = centers(c, k) + jitter(rng);
            ds.labels(row, c % q) = 1.0;
            ds.labels(row, (c + 1) % q) = 1.0;
        }
    }
    return ds;
}

}  // namespace testutil
