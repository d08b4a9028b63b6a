#pragma once

#include <cstddef>
#include <span>
#include <string>
#include <vector>

namespace fairaudit {

/// Quantile intervals over a numeric column.
///
/// Cut points are taken at the order statistics floor(j*n/bins) of the
/// sorted sample for j = 1..bins-1, deduplicated. A value x falls into bin
/// `count of cuts <= x`, so bins are half-open [lo, hi) except the last,
/// which is closed at the sample maximum. Heavy ties can merge bins, so the
/// result may hold fewer than `bins` intervals.
class QuantileBinning {
public:
    QuantileBinning(std::span<const double> sample, std::size_t bins);

    std::size_t bin_count() const { return cuts_.size() + 1; }
    std::size_t bin_of(double value) const;
    std::span<const double> cuts() const { return cuts_; }
    /// Interval labels in bin order, e.g. "[17, 22)" ... "[61, 90]".
    const std::vector<std::string>& labels() const { return labels_; }

private:
    std::vector<double> cuts_;
    std::vector<std::string> labels_;
};

/// Shortest round-trip decimal text for `value`.
std::string format_number(double value);

}  // namespace fairaudit
