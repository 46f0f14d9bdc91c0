#ifndef CANNINGS_COMBINATORICS_HPP
#define CANNINGS_COMBINATORICS_HPP

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <functional>
#include <limits>
#include <span>
#include <vector>

namespace cannings {

// falling factorial (x)_n = x(x-1)...(x-n+1), (x)_0 = 1
inline double falling(double x, int64_t n) {
    double r = 1.0;
    for (int64_t i = 0; i < n; ++i) r *= (x - static_cast<double>(i));
    return r;
}

inline double log_binom(int64_t n, int64_t k) {
    if (k < 0 || k > n) return -std::numeric_limits<double>::infinity();
    return std::lgamma(static_cast<double>(n + 1)) - std::lgamma(static_cast<double>(k + 1)) -
           std::lgamma(static_cast<double>(n - k + 1));
}

// exact for small n, log-space beyond (values above 2^53 lose integer exactness anyway)
inline double binom(int64_t n, int64_t k) {
    if (k < 0 || k > n || n < 0) return 0.0;
    if (k > n - k) k = n - k;
    if (n <= 60) {
        double r = 1.0;
        for (int64_t i = 1; i <= k; ++i) r = r * static_cast<double>(n - k + i) / static_cast<double>(i);
        return std::round(r);
    }
    return std::exp(log_binom(n, k));
}

inline double factorial(int64_t n) {
    double r = 1.0;
    for (int64_t i = 2; i <= n; ++i) r *= static_cast<double>(i);
    return r;
}

// integer partitions of n (parts in non-increasing order)
inline std::vector<std::vector<int>> integer_partitions(int n) {
    std::vector<std::vector<int>> out;
    std::vector<int> cur;
    std::function<void(int, int)> rec = [&](int left, int maxpart) {
        if (left == 0) {
            out.push_back(cur);
            return;
        }
        for (int p = std::min(left, maxpart); p >= 1; --p) {
            cur.push_back(p);
            rec(left - p, p);
            cur.pop_back();
        }
    };
    rec(n, n);
    return out;
}

// ordered compositions of `total` into `parts` parts, each >= minpart
inline void for_each_composition(int total, int parts, int minpart,
                                 const std::function<void(std::span<const int>)>& fn) {
    if (parts == 0) {
        if (total == 0) fn({});
        return;
    }
    std::vector<int> cur(static_cast<size_t>(parts));
    std::function<void(int, int)> rec = [&](int idx, int left) {
        if (idx == parts - 1) {
            if (left >= minpart) {
                cur[static_cast<size_t>(idx)] = left;
                fn(cur);
            }
            return;
        }
        for (int v = minpart; v <= left - minpart * (parts - 1 - idx); ++v) {
            cur[static_cast<size_t>(idx)] = v;
            rec(idx + 1, left - v);
        }
    };
    rec(0, total);
}

// set partitions of {0..n-1} as restricted growth strings; block ids appear in
// order of their minimal element, so blocks are canonically ordered
inline void for_each_set_partition(int n, const std::function<void(std::span<const int>)>& fn) {
    std::vector<int> rgs(static_cast<size_t>(n), 0);
    std::function<void(int, int)> rec = [&](int i, int maxused) {
        if (i == n) {
            fn(rgs);
            return;
        }
        for (int b = 0; b <= maxused + 1; ++b) {
            rgs[static_cast<size_t>(i)] = b;
            rec(i + 1, std::max(maxused, b));
        }
    };
    if (n == 0) {
        fn(rgs);
        return;
    }
    rgs[0] = 0;
    rec(1, 0);
}

// non-negative integer matrices with given row and column sums,
// filled column by column with pruning on the remaining row capacity
inline void for_each_contingency_table(std::span<const int> row_sums, std::span<const int> col_sums,
                                       const std::function<void(const std::vector<std::vector<int>>&)>& fn) {
    const int R = static_cast<int>(row_sums.size());
    const int C = static_cast<int>(col_sums.size());
    long long total_r = 0, total_c = 0;
    for (int v : row_sums) total_r += v;
    for (int v : col_sums) total_c += v;
    if (total_r != total_c) return;

    std::vector<std::vector<int>> m(static_cast<size_t>(R), std::vector<int>(static_cast<size_t>(C), 0));
    std::vector<int> row_left(row_sums.begin(), row_sums.end());

    std::function<void(int)> fill_col = [&](int c) {
        if (c == C) {
            fn(m);
            return;
        }
        // remaining capacity after this column must cover the later columns
        long long later = 0;
        for (int cc = c + 1; cc < C; ++cc) later += col_sums[static_cast<size_t>(cc)];
        std::function<void(int, int)> fill_cell = [&](int r, int left) {
            if (r == R - 1) {
                if (left <= row_left[static_cast<size_t>(r)]) {
                    m[static_cast<size_t>(r)][static_cast<size_t>(c)] = left;
                    row_left[static_cast<size_t>(r)] -= left;
                    long long cap = 0;
                    for (int rr = 0; rr < R; ++rr) cap += row_left[static_cast<size_t>(rr)];
                    if (cap == later) fill_col(c + 1);
                    row_left[static_cast<size_t>(r)] += left;
                    m[static_cast<size_t>(r)][static_cast<size_t>(c)] = 0;
                }
                return;
            }
            int hi = std::min(left, row_left[static_cast<size_t>(r)]);
            for (int v = 0; v <= hi; ++v) {
                m[static_cast<size_t>(r)][static_cast<size_t>(c)] = v;
                row_left[static_cast<size_t>(r)] -= v;
                fill_cell(r + 1, left - v);
                row_left[static_cast<size_t>(r)] += v;
                m[static_cast<size_t>(r)][static_cast<size_t>(c)] = 0;
            }
        };
        fill_cell(0, col_sums[static_cast<size_t>(c)]);
    };
    fill_col(0);
}

// Kahan-compensated accumulator
class CompensatedSum {
  public:
    void add(double x) {
        double y = x - c_;
        double t = s_ + y;
        c_ = (t - s_) - y;
        s_ = t;
    }
    double value() const { return s_; }

  private:
    double s_ = 0.0;
    double c_ = 0.0;
};

}  // namespace cannings

#endif
