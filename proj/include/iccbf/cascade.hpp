#pragma once

#include "iccbf/classk.hpp"
#include "iccbf/dynamics.hpp"

#include <array>
#include <cstdint>
#include <string>
#include <unordered_map>
#include <vector>

namespace iccbf {

// Ordered class-K parameter vector (alpha_0, ..., alpha_r). Construction
// admits only functions that pass the contracted-decrease grid check; the
// single exception is a linear coefficient-1 function at depth zero, which
// is the exponential-CBF boundary case.
class AlphaVector {
public:
    AlphaVector(std::vector<ClassKFn> alphas, std::string id);

    int depth() const { return static_cast<int>(alphas_.size()) - 1; }  // r
    int size() const { return static_cast<int>(alphas_.size()); }       // r + 1
    const ClassKFn& at(int level) const;
    const std::vector<ClassKFn>& alphas() const { return alphas_; }
    const std::string& id() const { return id_; }

private:
    std::vector<ClassKFn> alphas_;
    std::string id_;
};

struct CascadeSettings {
    int input_resolution = 11;  // grid points per input axis for the inner min/max
    bool use_cache = true;      // memoize b-values by quantized state
};

struct Membership {
    std::vector<bool> level_ok;  // b_i(x) >= 0 per level i = 0..r
    bool in_c_star = false;      // conjunction over all levels
};

namespace detail {

// Memo key: level tag plus the state quantized to 1e-9 per axis. Fixed-size
// so lookups never touch the heap; states with more axes skip the cache.
struct BarrierCacheKey {
    static constexpr int kMaxDims = 7;
    std::int32_t level = 0;
    std::int32_t dim = 0;
    std::array<std::int64_t, kMaxDims> q{};
    bool operator==(const BarrierCacheKey&) const = default;
};

struct BarrierCacheKeyHash {
    std::size_t operator()(const BarrierCacheKey& key) const {
        std::uint64_t h = 1469598103934665603ull;  // FNV-1a
        const auto mix = [&h](std::uint64_t v) {
            h ^= v;
            h *= 1099511628211ull;
        };
        mix((static_cast<std::uint64_t>(static_cast<std::uint32_t>(key.level)) << 32) |
            static_cast<std::uint32_t>(key.dim));
        for (int i = 0; i < key.dim; ++i) mix(static_cast<std::uint64_t>(key.q[static_cast<std::size_t>(i)]));
        return static_cast<std::size_t>(h);
    }
};

} // namespace detail

// Recursive barrier stack over a system model:
//   b_0(x) = h(x)
//   b_i(x) = min over the input grid of [b_{i-1}(f(x,u)) - b_{i-1}(x)]
//            + alpha_{i-1}(b_{i-1}(x))          for i = 1..r
// together with the constraint value
//   psi(x, u) = b_r(f(x,u)) - b_r(x) + alpha_r(b_r(x)).
// The grid min is the numerical surrogate for the infimum over the input box;
// box vertices are always grid points, so for control-affine systems the
// surrogate is exact.
//
// Evaluation is logically pure and deterministic for fixed (model, alpha,
// input_resolution); the memo cache only short-circuits recomputation. The
// cache is not synchronized: use one instance per worker thread.
class BarrierCascade {
public:
    // The model must outlive the cascade.
    BarrierCascade(const SystemModel& model, AlphaVector alpha, CascadeSettings settings = {});

    double eval_b(const Vec& x, int level) const;
    double delta_b(const Vec& x, const Vec& u, int level) const;
    double eval_psi(const Vec& x, const Vec& u) const;
    Membership membership(const Vec& x) const;

    int depth() const { return alpha_.depth(); }
    const AlphaVector& alpha() const { return alpha_; }
    const SystemModel& model() const { return *model_; }
    const InputGrid& inputs() const { return inputs_; }
    const CascadeSettings& settings() const { return settings_; }

    void clear_cache() const { cache_.clear(); }
    std::size_t cache_size() const { return cache_.size(); }

private:
    double eval_b_unchecked(const Vec& x, int level) const;

    const SystemModel* model_;
    AlphaVector alpha_;
    CascadeSettings settings_;
    InputGrid inputs_;
    mutable std::unordered_map<detail::BarrierCacheKey, double, detail::BarrierCacheKeyHash>
        cache_;  // quantized (state, level) -> b
};

} // namespace iccbf
