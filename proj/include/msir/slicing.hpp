#pragma once

#include "msir/common.hpp"

#include <optional>

namespace msir {

enum class ResponseKind { Continuous, Discrete };

/// Which slicing rule to apply when the caller has not decided.
enum class DiscreteMode { Auto, Discrete, Continuous };

struct SlicedResponse {
    IndexVector labels;  // 1..H per observation
    IndexVector counts;  // length H
    Vector proportions;  // counts / n
    int H = 0;
    Vector cutpoints;    // continuous: H-1 upper bounds; empty for discrete
    Vector values;       // discrete: response value of each slice
    ResponseKind kind = ResponseKind::Continuous;
    std::vector<std::string> warnings;
};

/// max(3, floor(log2(n / sqrt(p)))).
int default_num_slices(long n, long p);

/// Number of distinct values in y.
long distinct_count(const Vector& y);

/// Treat y as discrete when it has at most max(10, H) distinct values.
ResponseKind detect_kind(const Vector& y, int H);

/// Continuous: contiguous groups of the order statistics with near-equal sizes;
/// tied values always share a slice. Discrete: one slice per distinct value and
/// H is ignored.
SlicedResponse slice_response(const Vector& y, int H, ResponseKind kind = ResponseKind::Continuous);

/// Slicing as used by the estimators: resolves `H` (nullopt = default rule)
/// and the discrete/continuous decision.
SlicedResponse slice_for_fit(const Vector& y, long p, std::optional<int> H, DiscreteMode mode);

}  // namespace msir
