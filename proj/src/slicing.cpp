#include "msir/slicing.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <set>

namespace msir {

int default_num_slices(long n, long p) {
    if (n < 1 || p < 1) throw std::invalid_argument("default_num_slices: n and p must be positive");
    const double ratio = static_cast<double>(n) / std::sqrt(static_cast<double>(p));
    const int h = static_cast<int>(std::floor(std::log2(ratio)));
    return std::max(3, h);
}

long distinct_count(const Vector& y) {
    std::set<double> seen(y.data(), y.data() + y.size());
    return static_cast<long>(seen.size());
}

ResponseKind detect_kind(const Vector& y, int H) {
    return distinct_count(y) <= std::max(10, H) ? ResponseKind::Discrete : ResponseKind::Continuous;
}

namespace {

void finish(SlicedResponse& s, Eigen::Index n) {
    s.proportions = s.counts.cast<double>() / static_cast<double>(n);
}

SlicedResponse slice_discrete(const Vector& y) {
    std::set<double> uniq(y.data(), y.data() + y.size());
    SlicedResponse s;
    s.kind = ResponseKind::Discrete;
    s.H = static_cast<int>(uniq.size());
    s.values.resize(s.H);
    std::copy(uniq.begin(), uniq.end(), s.values.data());
    s.labels.resize(y.size());
    s.counts = IndexVector::Zero(s.H);
    for (Eigen::Index i = 0; i < y.size(); ++i) {
        const auto it = std::lower_bound(s.values.data(), s.values.data() + s.H, y[i]);
        const int h = static_cast<int>(it - s.values.data());
        s.labels[i] = h + 1;
        ++s.counts[h];
    }
    finish(s, y.size());
    return s;
}

SlicedResponse slice_continuous(const Vector& y, int H) {
    const Eigen::Index n = y.size();
    std::vector<Eigen::Index> order(n);
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(), [&](Eigen::Index a, Eigen::Index b) { return y[a] < y[b]; });

    SlicedResponse s;
    s.kind = ResponseKind::Continuous;
    s.labels.resize(n);
    std::vector<int> counts;
    std::vector<double> cuts;
    Eigen::Index start = 0;
    for (int h = 0; h < H && start < n; ++h) {
        const Eigen::Index remaining = n - start;
        const int slices_left = H - h;
        // Spread the remainder over the first slices so sizes differ by at most one.
        Eigen::Index size = remaining / slices_left + (remaining % slices_left != 0 ? 1 : 0);
        if (h == H - 1) size = remaining;
        Eigen::Index end = std::min(n, start + std::max<Eigen::Index>(size, 1));
        while (end < n && y[order[end]] == y[order[end - 1]]) ++end;
        for (Eigen::Index k = start; k < end; ++k) s.labels[order[k]] = h + 1;
        counts.push_back(static_cast<int>(end - start));
        if (end < n) cuts.push_back(y[order[end - 1]]);
        start = end;
    }
    s.H = static_cast<int>(counts.size());
    if (s.H < H)
        s.warnings.push_back("slicing: ties reduced the number of slices from " + std::to_string(H) + " to " +
                             std::to_string(s.H));
    s.counts = Eigen::Map<IndexVector>(counts.data(), s.H);
    s.cutpoints = Eigen::Map<Vector>(cuts.data(), static_cast<Eigen::Index>(cuts.size()));
    finish(s, n);
    return s;
}

}  // namespace

SlicedResponse slice_response(const Vector& y, int H, ResponseKind kind) {
    if (y.size() == 0) throw DataError("slice_response: empty response");
    if (!y.allFinite()) throw DataError("slice_response: non-finite response value");
    if (kind == ResponseKind::Discrete) return slice_discrete(y);
    if (H < 1) throw std::invalid_argument("slice_response: H must be at least 1");
    const long distinct = distinct_count(y);
    if (H > distinct)
        throw DataError("slice_response: H = " + std::to_string(H) + " exceeds the " + std::to_string(distinct) +
                        " distinct response values");
    return slice_continuous(y, H);
}

SlicedResponse slice_for_fit(const Vector& y, long p, std::optional<int> H, DiscreteMode mode) {
    const int h = H.value_or(default_num_slices(static_cast<long>(y.size()), p));
    ResponseKind kind = ResponseKind::Continuous;
    if (mode == DiscreteMode::Discrete)
        kind = ResponseKind::Discrete;
    else if (mode == DiscreteMode::Auto)
        kind = detect_kind(y, h);
    SlicedResponse s = slice_response(y, h, kind);
    for (int k = 0; k < s.H; ++k) {
        if (s.counts[k] < 5 * p)
            s.warnings.push_back("slicing: slice " + std::to_string(k + 1) + " has " + std::to_string(s.counts[k]) +
                                 " observations (< 5p); full-covariance mixtures will be skipped");
    }
    return s;
}

}  // namespace msir
