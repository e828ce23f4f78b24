#pragma once

// Data-parallel inner loops. Every kernel has a plain serial reference in
// `kernels::serial` and an OpenMP version in `kernels::omp`; both produce
// bit-identical output, which the tests check.

#include <cstdint>
#include <span>

namespace bslip {

enum class ExecPolicy { Serial, Parallel };

namespace kernels {

// One cell of the row-frontier dynamic program. A state packs the values of
// the last `width` assigned cells as base-M digits; digit `position` is the
// slot the current cell overwrites. Entries are laid out as
// state * budget_len + budget.
struct FrontierStep {
    int n_values = 2;          // M
    std::int64_t n_states = 1; // M^width
    std::int64_t stride = 1;   // M^position
    std::int64_t left_stride = 0;  // M^(position-1), 0 when no in-patch left neighbor
    int budget_len = 1;        // K + 1
    std::span<const int> values;       // W
    std::span<const double> self_cost; // per value index: linear + fixed-exterior TV
    std::span<const int> budget_use;   // per value index
    double up_weight = 0.0;    // alpha * measure toward the digit being replaced, 0 on the first row
    double left_weight = 0.0;  // alpha * measure toward the left digit
};

inline int choice_bits(int n_values)
{
    int bits = 1;
    while ((1 << bits) < n_values) ++bits;
    return bits;
}

inline std::int64_t choice_words(std::int64_t entries, int n_values)
{
    const std::int64_t per_word = 64 / choice_bits(n_values);
    return (entries + per_word - 1) / per_word;
}

inline int read_choice(std::span<const std::uint64_t> words, std::int64_t entry, int n_values)
{
    const int bits = choice_bits(n_values);
    const std::int64_t per_word = 64 / bits;
    const std::uint64_t w = words[static_cast<std::size_t>(entry / per_word)];
    return static_cast<int>((w >> ((entry % per_word) * bits)) & ((std::uint64_t{1} << bits) - 1));
}

namespace serial {
// y = A x for a row-major rows x cols matrix.
void matvec(std::span<const double> a, int rows, int cols, std::span<const double> x, std::span<double> y);
// y = A^T x.
void matvec_transposed(std::span<const double> a, int rows, int cols, std::span<const double> x, std::span<double> y);
void frontier_step(const FrontierStep& step, std::span<const double> prev, std::span<double> next,
                   std::span<std::uint64_t> choices);
} // namespace serial

namespace omp {
void matvec(std::span<const double> a, int rows, int cols, std::span<const double> x, std::span<double> y);
void matvec_transposed(std::span<const double> a, int rows, int cols, std::span<const double> x, std::span<double> y);
void frontier_step(const FrontierStep& step, std::span<const double> prev, std::span<double> next,
                   std::span<std::uint64_t> choices);
} // namespace omp

inline void matvec(ExecPolicy p, std::span<const double> a, int rows, int cols, std::span<const double> x,
                   std::span<double> y)
{
    p == ExecPolicy::Parallel ? omp::matvec(a, rows, cols, x, y) : serial::matvec(a, rows, cols, x, y);
}

inline void matvec_transposed(ExecPolicy p, std::span<const double> a, int rows, int cols,
                              std::span<const double> x, std::span<double> y)
{
    p == ExecPolicy::Parallel ? omp::matvec_transposed(a, rows, cols, x, y)
                              : serial::matvec_transposed(a, rows, cols, x, y);
}

inline void frontier_step(ExecPolicy p, const FrontierStep& step, std::span<const double> prev,
                          std::span<double> next, std::span<std::uint64_t> choices)
{
    p == ExecPolicy::Parallel ? omp::frontier_step(step, prev, next, choices)
                              : serial::frontier_step(step, prev, next, choices);
}

} // namespace kernels
} // namespace bslip
