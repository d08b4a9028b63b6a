#include "fairaudit/kmeans.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <random>

#include "fairaudit/errors.hpp"

namespace fairaudit {

namespace {

// Distinct one-hot rows with their multiplicities.
struct Patterns {
    std::size_t width = 0;                 // active columns per pattern
    std::vector<std::uint32_t> active;     // pattern-major
    std::vector<double> weight;
    std::vector<std::uint32_t> row_pattern;

    std::size_t size() const { return weight.size(); }
    std::span<const std::uint32_t> at(std::size_t p) const { return {active.data() + p * width, width}; }
};

Patterns collapse(const OneHotMatrix& matrix) {
    Patterns out;
    out.width = matrix.feature_count();
    const std::size_t n = matrix.row_count();
    std::vector<std::uint32_t> order(n);
    std::iota(order.begin(), order.end(), 0u);
    auto less = [&](std::uint32_t a, std::uint32_t b) {
        auto x = matrix.active(a);
        auto y = matrix.active(b);
        return std::lexicographical_compare(x.begin(), x.end(), y.begin(), y.end());
    };
    std::stable_sort(order.begin(), order.end(), less);

    out.row_pattern.resize(n);
    for (std::size_t i = 0; i < n; ++i) {
        auto row = matrix.active(order[i]);
        if (i == 0 || !std::equal(row.begin(), row.end(), out.at(out.size() - 1).begin())) {
            out.active.insert(out.active.end(), row.begin(), row.end());
            out.weight.push_back(0.0);
        }
        out.weight.back() += 1.0;
        out.row_pattern[order[i]] = static_cast<std::uint32_t>(out.size() - 1);
    }
    return out;
}

// Uniform draws built directly on the engine so sequences do not depend on
// the standard library's distribution implementations.
class Rng {
public:
    explicit Rng(std::uint64_t seed) : engine_(seed) {}
    double unit() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }

private:
    std::mt19937_64 engine_;
};

// Index of the first cumulative weight strictly above `target`.
std::size_t pick(std::span<const double> weights, double target) {
    double acc = 0.0;
    std::size_t last_positive = 0;
    for (std::size_t i = 0; i < weights.size(); ++i) {
        if (weights[i] <= 0.0) continue;
        acc += weights[i];
        last_positive = i;
        if (acc > target) return i;
    }
    return last_positive;
}

class Lloyd {
public:
    Lloyd(const Patterns& patterns, std::size_t dim, std::size_t k)
        : patterns_(patterns), dim_(dim), k_(k), centroids_(k * dim, 0.0), norms_(k, 0.0),
          assignment_(patterns.size(), 0), distance_(patterns.size(), 0.0) {}

    void seed(Rng& rng) {
        const std::size_t np = patterns_.size();
        const double rows = std::accumulate(patterns_.weight.begin(), patterns_.weight.end(), 0.0);
        std::size_t first = pick(patterns_.weight, std::floor(rng.unit() * rows));
        set_to_pattern(0, first);

        std::vector<double> nearest(np);
        for (std::size_t p = 0; p < np; ++p) nearest[p] = distance_to(p, 0);
        std::vector<double> weighted(np);
        for (std::size_t c = 1; c < k_; ++c) {
            double total = 0.0;
            for (std::size_t p = 0; p < np; ++p) {
                weighted[p] = patterns_.weight[p] * nearest[p];
                total += weighted[p];
            }
            if (!(total > 0.0)) {
                throw InvalidArgumentError("k = " + std::to_string(k_) + " exceeds the number of distinct rows (" +
                                           std::to_string(np) + ")");
            }
            std::size_t chosen = pick(weighted, rng.unit() * total);
            set_to_pattern(c, chosen);
            for (std::size_t p = 0; p < np; ++p) nearest[p] = std::min(nearest[p], distance_to(p, c));
        }
    }

    // Nearest-centroid assignment; returns the inertia.
    double assign() {
        double inertia = 0.0;
        for (std::size_t p = 0; p < patterns_.size(); ++p) {
            std::uint32_t best = 0;
            double best_d = distance_to(p, 0);
            for (std::size_t c = 1; c < k_; ++c) {
                double d = distance_to(p, c);
                if (d < best_d) {
                    best_d = d;
                    best = static_cast<std::uint32_t>(c);
                }
            }
            assignment_[p] = best;
            distance_[p] = best_d;
            inertia += patterns_.weight[p] * best_d;
        }
        return inertia;
    }

    bool has_empty_cluster() const {
        std::vector<char> used(k_, 0);
        for (auto a : assignment_) used[a] = 1;
        return std::find(used.begin(), used.end(), 0) != used.end();
    }

    // Moves centroids to the means of their members, reseeding empty
    // clusters at the points farthest from their own centroid. Returns the
    // total squared shift.
    double update() {
        std::vector<double> next(k_ * dim_, 0.0);
        std::vector<double> mass(k_, 0.0);
        for (std::size_t p = 0; p < patterns_.size(); ++p) {
            const auto a = assignment_[p];
            mass[a] += patterns_.weight[p];
            for (auto j : patterns_.at(p)) next[a * dim_ + j] += patterns_.weight[p];
        }
        std::vector<std::size_t> empty;
        for (std::size_t c = 0; c < k_; ++c) {
            if (mass[c] == 0.0) {
                empty.push_back(c);
                continue;
            }
            for (std::size_t j = 0; j < dim_; ++j) next[c * dim_ + j] /= mass[c];
        }

        const std::vector<double> previous = centroids_;
        centroids_ = std::move(next);
        for (std::size_t c = 0; c < k_; ++c) refresh_norm(c);

        if (!empty.empty()) {
            std::vector<std::pair<double, std::size_t>> far;
            far.reserve(patterns_.size());
            for (std::size_t p = 0; p < patterns_.size(); ++p) far.emplace_back(distance_to(p, assignment_[p]), p);
            std::stable_sort(far.begin(), far.end(), [](const auto& a, const auto& b) { return a.first > b.first; });
            for (std::size_t i = 0; i < empty.size(); ++i) set_to_pattern(empty[i], far.at(i).second);
        }

        double shift = 0.0;
        for (std::size_t i = 0; i < centroids_.size(); ++i) {
            const double d = centroids_[i] - previous[i];
            shift += d * d;
        }
        return shift;
    }

    const std::vector<std::uint32_t>& assignment() const { return assignment_; }
    const std::vector<double>& centroids() const { return centroids_; }

private:
    double distance_to(std::size_t p, std::size_t c) const {
        return squared_distance(patterns_.at(p), {centroids_.data() + c * dim_, dim_}, norms_[c]);
    }

    void set_to_pattern(std::size_t c, std::size_t p) {
        std::fill_n(centroids_.begin() + static_cast<std::ptrdiff_t>(c * dim_), dim_, 0.0);
        for (auto j : patterns_.at(p)) centroids_[c * dim_ + j] = 1.0;
        refresh_norm(c);
    }

    void refresh_norm(std::size_t c) {
        double s = 0.0;
        for (std::size_t j = 0; j < dim_; ++j) s += centroids_[c * dim_ + j] * centroids_[c * dim_ + j];
        norms_[c] = s;
    }

    const Patterns& patterns_;
    std::size_t dim_;
    std::size_t k_;
    std::vector<double> centroids_;
    std::vector<double> norms_;
    std::vector<std::uint32_t> assignment_;
    std::vector<double> distance_;
};

}  // namespace

void ClusterConfig::validate(std::size_t row_count) const {
    if (k == 0) throw InvalidArgumentError("k must be positive");
    if (max_iterations == 0) throw InvalidArgumentError("max_iterations must be positive");
    if (!(tolerance >= 0.0) || !std::isfinite(tolerance)) throw InvalidArgumentError("tolerance must be >= 0");
    if (row_count == 0) throw InvalidArgumentError("cannot cluster an empty matrix");
    if (k > row_count) {
        throw InvalidArgumentError("k = " + std::to_string(k) + " exceeds the row count " + std::to_string(row_count));
    }
}

double squared_distance(std::span<const std::uint32_t> active, std::span<const double> centroid, double centroid_norm) {
    // ||x||^2 - 2<x,c> + ||c||^2 with x binary: each active column adds 1 - 2c_j.
    double d = centroid_norm;
    for (auto j : active) d += 1.0 - 2.0 * centroid[j];
    return d < 0.0 ? 0.0 : d;
}

std::vector<std::vector<RowId>> ClusterModel::members() const {
    std::vector<std::vector<RowId>> out(k_);
    for (std::size_t r = 0; r < assignments_.size(); ++r) out[assignments_[r]].push_back(static_cast<RowId>(r));
    return out;
}

ClusterModel kmeans(const OneHotMatrix& matrix, const ClusterConfig& config) {
    config.validate(matrix.row_count());
    const Patterns patterns = collapse(matrix);
    Lloyd lloyd(patterns, matrix.dim(), config.k);
    Rng rng(config.seed);
    lloyd.seed(rng);

    ClusterModel model;
    model.k_ = config.k;
    model.dim_ = matrix.dim();
    model.inertia_trace_.push_back(lloyd.assign());

    // Repairing an empty cluster always fills it on the next assignment, so
    // the extra passes beyond max_iterations are bounded by k.
    const std::size_t hard_limit = config.max_iterations + config.k + 1;
    std::size_t iteration = 0;
    while (iteration < hard_limit) {
        const auto before = lloyd.assignment();
        const double shift = lloyd.update();
        model.inertia_trace_.push_back(lloyd.assign());
        ++iteration;
        const bool empty = lloyd.has_empty_cluster();
        const bool fixed = lloyd.assignment() == before;
        if (!empty && (fixed || shift < config.tolerance)) {
            model.converged_ = true;
            break;
        }
        if (!empty && iteration >= config.max_iterations) break;
    }

    model.iterations_ = iteration;
    model.centroids_ = lloyd.centroids();
    model.assignments_.resize(matrix.row_count());
    for (std::size_t r = 0; r < matrix.row_count(); ++r) {
        model.assignments_[r] = lloyd.assignment()[patterns.row_pattern[r]];
    }
    return model;
}

}  // namespace fairaudit
