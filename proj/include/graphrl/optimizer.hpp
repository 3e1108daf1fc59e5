#pragma once

#include <cstdint>

#include "graphrl/policy.hpp"

namespace graphrl {

struct AdamConfig {
    double learning_rate = 1e-5;
    double beta1 = 0.9;
    double beta2 = 0.999;
    double epsilon = 1e-8;

    bool operator==(const AdamConfig&) const = default;
};

template <typename Real>
struct AdamState {
    AdamConfig config;
    std::uint64_t step = 0;
    PolicyParams<Real> first_moment;
    PolicyParams<Real> second_moment;

    static AdamState init(const PolicyParams<Real>& params, AdamConfig config = {});

    bool operator==(const AdamState&) const = default;
};

// One bias-corrected Adam update. A non-finite gradient rejects the step:
// DataError is thrown and params and state are left untouched.
template <typename Real>
void adam_step(PolicyParams<Real>& params, const PolicyParams<Real>& grads, AdamState<Real>& state);

}  // namespace graphrl
