#pragma once

#include <cstdint>

#include "hspace/chart.hpp"

namespace hspace {

/// Radical-inverse of index in the given base.
inline double halton_value(std::uint64_t index, std::uint64_t base) {
    double f = 1.0, r = 0.0;
    while (index > 0) {
        f /= static_cast<double>(base);
        r += f * static_cast<double>(index % base);
        index /= base;
    }
    return r;
}

inline constexpr std::uint64_t kHaltonBases[] = {2, 3, 5, 7, 11, 13};

/// Deterministic low-discrepancy sampler over a box. The seed offsets the
/// start index, so distinct seeds give distinct but reproducible streams.
class HaltonSampler {
public:
    explicit HaltonSampler(Box box, std::uint64_t seed = 0)
        : box_(std::move(box)), index_(seed + 1) {
        if (box_.dim() > 6) throw DimensionError("Halton sampler supports up to 6 dimensions");
    }

    std::vector<double> next() {
        std::vector<double> p(static_cast<std::size_t>(box_.dim()));
        for (int d = 0; d < box_.dim(); ++d) {
            const double u = halton_value(index_, kHaltonBases[static_cast<std::size_t>(d)]);
            p[static_cast<std::size_t>(d)] =
                box_.lo[static_cast<std::size_t>(d)] +
                u * (box_.hi[static_cast<std::size_t>(d)] - box_.lo[static_cast<std::size_t>(d)]);
        }
        ++index_;
        return p;
    }

    /// Next point satisfying the predicate over the named coordinates;
    /// throws DomainError when the guard rejects too many candidates.
    std::vector<double> next_in(const Predicate& guard, const std::vector<std::string>& coords,
                                int max_attempts = 10000) {
        for (int k = 0; k < max_attempts; ++k) {
            std::vector<double> p = next();
            if (guard.trivial() || eval_predicate(guard, chart_value_env(coords, p))) return p;
        }
        throw DomainError("domain guard rejected every sampled point");
    }

private:
    Box box_;
    std::uint64_t index_;
};

/// Convenience: n guarded samples.
inline std::vector<std::vector<double>> halton_samples(const Box& box, int count,
                                                       std::uint64_t seed,
                                                       const Predicate& guard = {},
                                                       const std::vector<std::string>& coords = {}) {
    HaltonSampler sampler(box, seed);
    std::vector<std::vector<double>> out;
    out.reserve(static_cast<std::size_t>(count));
    for (int i = 0; i < count; ++i) out.push_back(sampler.next_in(guard, coords));
    return out;
}

}  // namespace hspace
