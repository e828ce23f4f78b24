#pragma once

#include <cstdint>
#include <cstdlib>
#include <limits>

#include "bslip/kernels.hpp"

namespace bslip::kernels::detail {

inline constexpr double kInf = std::numeric_limits<double>::infinity();

// All budget entries of one frontier state. Writes budget_len costs to `out`
// and the chosen replaced-value index to `arg`; ties keep the smaller value.
inline void frontier_state(const FrontierStep& s, const double* prev, std::int64_t state, double* out,
                           std::uint8_t* arg)
{
    const int m = s.n_values;
    const int blen = s.budget_len;
    const int v = static_cast<int>((state / s.stride) % m);
    const int use = s.budget_use[v];
    const int wv = s.values[v];
    double local = s.self_cost[v];
    if (s.left_stride != 0) {
        const int lv = static_cast<int>((state / s.left_stride) % m);
        local += s.left_weight * std::abs(wv - s.values[lv]);
    }
    const std::int64_t cleared = state - v * s.stride;
    for (int u = 0; u < blen && u < use; ++u) {
        out[u] = kInf;
        arg[u] = 0;
    }
    if (use >= blen) return;
    // first candidate initializes, the rest compete with strict <
    {
        const double* p = prev + (cleared) * blen - use;
        const double c = local + s.up_weight * std::abs(wv - s.values[0]);
        for (int u = use; u < blen; ++u) {
            out[u] = p[u] == kInf ? kInf : p[u] + c;
            arg[u] = 0;
        }
    }
    for (int vo = 1; vo < m; ++vo) {
        const double* p = prev + (cleared + vo * s.stride) * blen - use;
        const double c = local + s.up_weight * std::abs(wv - s.values[vo]);
        for (int u = use; u < blen; ++u) {
            const double cand = p[u] + c;
            if (cand < out[u]) {
                out[u] = cand;
                arg[u] = static_cast<std::uint8_t>(vo);
            }
        }
    }
}

// Packs one word of choices from the byte buffer.
inline std::uint64_t pack_word(const std::uint8_t* arg, std::int64_t begin, std::int64_t end, int bits)
{
    std::uint64_t word = 0;
    for (std::int64_t e = begin; e < end; ++e) {
        word |= static_cast<std::uint64_t>(arg[e]) << ((e - begin) * bits);
    }
    return word;
}

} // namespace bslip::kernels::detail
