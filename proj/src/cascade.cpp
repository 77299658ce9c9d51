#include "iccbf/cascade.hpp"

#include "iccbf/errors.hpp"

#include <cmath>
#include <cstring>
#include <limits>
#include <utility>

namespace iccbf {

namespace {

constexpr double kStateQuantum = 1e-9;

// States closer than the quantum share a key by design.
detail::BarrierCacheKey cache_key(const Vec& x, int level) {
    detail::BarrierCacheKey key;
    key.level = level;
    key.dim = static_cast<std::int32_t>(x.size());
    for (std::size_t i = 0; i < x.size(); ++i)
        key.q[i] = std::llround(x[i] / kStateQuantum);
    return key;
}

} // namespace

AlphaVector::AlphaVector(std::vector<ClassKFn> alphas, std::string id)
    : alphas_(std::move(alphas)), id_(std::move(id)) {
    if (alphas_.empty()) throw EmptyGrid("parameter vector needs at least one class-K function");
    const int r = depth();
    for (int i = 0; i < size(); ++i) {
        const ClassKFn& fn = alphas_[static_cast<std::size_t>(i)];
        if (fn.exponential_boundary()) {
            // Coefficient 1 keeps forward invariance for a plain barrier but
            // breaks the strict decrease the recursion needs at r >= 1.
            if (r >= 1)
                throw OutOfRange("alpha[" + std::to_string(i) +
                                 "]: coefficient 1 is not admissible at depth >= 1");
            continue;
        }
        const ClassKCheck check = check_classk(fn, standard_classk_grid());
        if (!check.pass)
            throw OutOfRange("alpha[" + std::to_string(i) + "] fails the class-K check: " +
                             check.reason);
    }
}

const ClassKFn& AlphaVector::at(int level) const {
    if (level < 0 || level >= size())
        throw LevelOutOfRange("alpha index " + std::to_string(level) + " out of range");
    return alphas_[static_cast<std::size_t>(level)];
}

BarrierCascade::BarrierCascade(const SystemModel& model, AlphaVector alpha, CascadeSettings settings)
    : model_(&model), alpha_(std::move(alpha)), settings_(settings) {
    if (settings_.input_resolution < 2)
        throw ResolutionTooSmall("cascade input resolution must be at least 2");
    inputs_ = input_grid(model, settings_.input_resolution);
}

double BarrierCascade::eval_b(const Vec& x, int level) const {
    if (level < 0 || level > depth())
        throw LevelOutOfRange("cascade level " + std::to_string(level) + " out of range [0, " +
                              std::to_string(depth()) + "]");
    if (!all_finite(x)) throw NonFiniteState("cascade evaluated at a non-finite state");
    return eval_b_unchecked(x, level);
}

double BarrierCascade::eval_b_unchecked(const Vec& x, int level) const {
    if (level == 0) return model_->barrier(x);

    const bool cacheable =
        settings_.use_cache && x.size() <= detail::BarrierCacheKey::kMaxDims;
    detail::BarrierCacheKey key;
    if (cacheable) {
        key = cache_key(x, level);
        const auto it = cache_.find(key);
        if (it != cache_.end()) return it->second;
    }

    const double b_here = eval_b_unchecked(x, level - 1);
    double min_next = std::numeric_limits<double>::infinity();
    for (const Vec& u : inputs_.points) {
        const double b_next = eval_b_unchecked(model_->step(x, u), level - 1);
        if (b_next < min_next) min_next = b_next;
    }
    const double value = (min_next - b_here) + alpha_.at(level - 1).eval(b_here);

    if (cacheable) cache_.emplace(key, value);
    return value;
}

double BarrierCascade::delta_b(const Vec& x, const Vec& u, int level) const {
    if (level < 0 || level > depth())
        throw LevelOutOfRange("cascade level " + std::to_string(level) + " out of range [0, " +
                              std::to_string(depth()) + "]");
    if (!all_finite(x)) throw NonFiniteState("cascade evaluated at a non-finite state");
    const Vec next = model_->step(x, u);  // validates u against the input box
    return eval_b_unchecked(next, level) - eval_b_unchecked(x, level);
}

double BarrierCascade::eval_psi(const Vec& x, const Vec& u) const {
    const int r = depth();
    const double db = delta_b(x, u, r);
    return db + alpha_.at(r).eval(eval_b_unchecked(x, r));
}

Membership BarrierCascade::membership(const Vec& x) const {
    if (!all_finite(x)) throw NonFiniteState("membership queried at a non-finite state");
    Membership m;
    m.level_ok.resize(static_cast<std::size_t>(depth()) + 1);
    m.in_c_star = true;
    for (int i = 0; i <= depth(); ++i) {
        const bool ok = eval_b_unchecked(x, i) >= 0.0;
        m.level_ok[static_cast<std::size_t>(i)] = ok;
        m.in_c_star = m.in_c_star && ok;
    }
    return m;
}

} // namespace iccbf
