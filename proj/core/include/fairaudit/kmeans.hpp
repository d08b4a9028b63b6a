#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include "fairaudit/ingest.hpp"

namespace fairaudit {

struct ClusterConfig {
    std::size_t k = 15;
    std::size_t max_iterations = 300;
    /// Stop once the total squared centroid shift of an iteration drops below this.
    double tolerance = 1e-4;
    std::uint64_t seed = 0;

    void validate(std::size_t row_count) const;
};

/// Lloyd's algorithm result. Every row is assigned to its nearest centroid
/// (squared Euclidean, ties to the lowest index) and no cluster is empty.
class ClusterModel {
public:
    std::size_t k() const { return k_; }
    std::size_t dim() const { return dim_; }
    std::span<const double> centroid(std::size_t c) const { return {centroids_.data() + c * dim_, dim_}; }
    std::span<const std::uint32_t> assignments() const { return assignments_; }
    /// Sum of squared distances of rows to their assigned centroids.
    double inertia() const { return inertia_trace_.empty() ? 0.0 : inertia_trace_.back(); }
    /// Inertia after every assignment step, seeding included.
    std::span<const double> inertia_trace() const { return inertia_trace_; }
    std::size_t iterations() const { return iterations_; }
    bool converged() const { return converged_; }
    /// Row ids per cluster, ascending.
    std::vector<std::vector<RowId>> members() const;

private:
    friend ClusterModel kmeans(const OneHotMatrix& matrix, const ClusterConfig& config);

    std::size_t k_ = 0;
    std::size_t dim_ = 0;
    std::vector<double> centroids_;
    std::vector<std::uint32_t> assignments_;
    std::vector<double> inertia_trace_;
    std::size_t iterations_ = 0;
    bool converged_ = false;
};

/// K-means with K-means++ seeding on the one-hot rows.
///
/// Duplicate rows are collapsed into weighted patterns visited in
/// lexicographic order, so the seed fully determines the induced partition
/// regardless of input row order.
ClusterModel kmeans(const OneHotMatrix& matrix, const ClusterConfig& config);

/// ||x - c||^2 for a one-hot row given by its active columns, where
/// `centroid_norm` is ||c||^2.
double squared_distance(std::span<const std::uint32_t> active, std::span<const double> centroid, double centroid_norm);

}  // namespace fairaudit
