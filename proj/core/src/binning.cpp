#include "fairaudit/binning.hpp"

#include <algorithm>
#include <array>
#include <charconv>

#include "fairaudit/errors.hpp"

namespace fairaudit {

std::string format_number(double value) {
    std::array<char, 64> buf{};
    auto [end, ec] = std::to_chars(buf.data(), buf.data() + buf.size(), value);
    if (ec != std::errc{}) return std::to_string(value);
    return std::string(buf.data(), end);
}

QuantileBinning::QuantileBinning(std::span<const double> sample, std::size_t bins) {
    if (sample.empty()) throw InvalidArgumentError("cannot bin an empty sample");
    if (bins == 0) throw InvalidArgumentError("numeric_bins must be positive");

    std::vector<double> sorted(sample.begin(), sample.end());
    std::sort(sorted.begin(), sorted.end());
    const std::size_t n = sorted.size();
    const double lo = sorted.front();
    const double hi = sorted.back();

    for (std::size_t j = 1; j < bins; ++j) {
        double cut = sorted[(j * n) / bins];
        if (cut <= lo) continue;
        if (!cuts_.empty() && cut <= cuts_.back()) continue;
        cuts_.push_back(cut);
    }

    std::vector<double> bounds;
    bounds.push_back(lo);
    bounds.insert(bounds.end(), cuts_.begin(), cuts_.end());
    for (std::size_t b = 0; b < bounds.size(); ++b) {
        if (b + 1 < bounds.size()) {
            labels_.push_back("[" + format_number(bounds[b]) + ", " + format_number(bounds[b + 1]) + ")");
        } else {
            labels_.push_back("[" + format_number(bounds[b]) + ", " + format_number(hi) + "]");
        }
    }
}

std::size_t QuantileBinning::bin_of(double value) const {
    return static_cast<std::size_t>(std::upper_bound(cuts_.begin(), cuts_.end(), value) - cuts_.begin());
}

}  // namespace fairaudit
