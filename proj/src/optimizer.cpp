#include "graphrl/optimizer.hpp"

#include <cmath>
#include <string>

namespace graphrl {

template <typename Real>
AdamState<Real> AdamState<Real>::init(const PolicyParams<Real>& params, AdamConfig config) {
    if (!(config.learning_rate > 0.0) || !(config.beta1 >= 0.0 && config.beta1 < 1.0) ||
        !(config.beta2 >= 0.0 && config.beta2 < 1.0) || !(config.epsilon > 0.0)) {
        throw ConfigError("invalid Adam settings");
    }
    AdamState s;
    s.config = config;
    s.first_moment = PolicyParams<Real>::zeros(params.embed_dim, params.layers);
    s.second_moment = PolicyParams<Real>::zeros(params.embed_dim, params.layers);
    return s;
}

template <typename Real>
void adam_step(PolicyParams<Real>& params, const PolicyParams<Real>& grads, AdamState<Real>& state) {
    if (grads.embed_dim != params.embed_dim || grads.layers != params.layers ||
        state.first_moment.embed_dim != params.embed_dim) {
        throw DataError("gradient shape does not match parameters");
    }
    const auto gs = grads.tensors();
    for (std::size_t t = 0; t < gs.size(); ++t) {
        for (Real g : gs[t]->data) {
            if (!std::isfinite(g)) {
                throw DataError("Adam step " + std::to_string(state.step + 1) +
                                " rejected: non-finite gradient in theta" + std::to_string(t + 1));
            }
        }
    }
    const auto& c = state.config;
    const std::uint64_t step = state.step + 1;
    const double bc1 = 1.0 - std::pow(c.beta1, static_cast<double>(step));
    const double bc2 = 1.0 - std::pow(c.beta2, static_cast<double>(step));
    auto ps = params.tensors();
    auto ms = state.first_moment.tensors();
    auto vs = state.second_moment.tensors();
    for (std::size_t t = 0; t < ps.size(); ++t) {
        auto& p = ps[t]->data;
        auto& m = ms[t]->data;
        auto& v = vs[t]->data;
        const auto& g = gs[t]->data;
        for (std::size_t i = 0; i < p.size(); ++i) {
            const double gi = g[i];
            const double mi = c.beta1 * m[i] + (1.0 - c.beta1) * gi;
            const double vi = c.beta2 * v[i] + (1.0 - c.beta2) * gi * gi;
            m[i] = static_cast<Real>(mi);
            v[i] = static_cast<Real>(vi);
            const double update = c.learning_rate * (mi / bc1) / (std::sqrt(vi / bc2) + c.epsilon);
            p[i] = static_cast<Real>(static_cast<double>(p[i]) - update);
        }
    }
    state.step = step;
}

template struct AdamState<float>;
template struct AdamState<double>;
template void adam_step(PolicyParams<float>&, const PolicyParams<float>&, AdamState<float>&);
template void adam_step(PolicyParams<double>&, const PolicyParams<double>&, AdamState<double>&);

}  // namespace graphrl
