#ifndef CANNINGS_MATRIX_HPP
#define CANNINGS_MATRIX_HPP

#include <cmath>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

namespace cannings {

// Dense square matrix over an explicitly enumerated state space.
// Row/column order follows `labels`.
struct LabeledMatrix {
    std::vector<std::string> labels;
    std::vector<double> a;  // row-major, n x n

    LabeledMatrix() = default;
    explicit LabeledMatrix(std::vector<std::string> labs)
        : labels(std::move(labs)), a(labels.size() * labels.size(), 0.0) {}

    size_t size() const { return labels.size(); }

    double& at(size_t r, size_t c) { return a[r * size() + c]; }
    double at(size_t r, size_t c) const { return a[r * size() + c]; }

    static LabeledMatrix identity(std::vector<std::string> labs) {
        LabeledMatrix m(std::move(labs));
        for (size_t i = 0; i < m.size(); ++i) m.at(i, i) = 1.0;
        return m;
    }

    LabeledMatrix multiply(const LabeledMatrix& other) const {
        if (size() != other.size()) throw std::invalid_argument("matrix size mismatch");
        LabeledMatrix out(labels);
        const size_t n = size();
        for (size_t i = 0; i < n; ++i) {
            for (size_t k = 0; k < n; ++k) {
                double v = at(i, k);
                if (v == 0.0) continue;
                const double* row = &other.a[k * n];
                double* dst = &out.a[i * n];
                for (size_t j = 0; j < n; ++j) dst[j] += v * row[j];
            }
        }
        return out;
    }

    LabeledMatrix power(uint64_t e) const {
        LabeledMatrix result = identity(labels);
        LabeledMatrix base = *this;
        while (e > 0) {
            if (e & 1) result = result.multiply(base);
            base = base.multiply(base);
            e >>= 1;
        }
        return result;
    }

    double row_sum(size_t r) const {
        double s = 0.0;
        for (size_t j = 0; j < size(); ++j) s += at(r, j);
        return s;
    }

    double max_row_sum_deviation(double target) const {
        double worst = 0.0;
        for (size_t r = 0; r < size(); ++r) worst = std::max(worst, std::fabs(row_sum(r) - target));
        return worst;
    }

    // operator norm induced by the sup norm: max over rows of the L1 row norm
    double sup_row_norm_diff(const LabeledMatrix& other) const {
        double worst = 0.0;
        for (size_t r = 0; r < size(); ++r) {
            double s = 0.0;
            for (size_t c = 0; c < size(); ++c) s += std::fabs(at(r, c) - other.at(r, c));
            worst = std::max(worst, s);
        }
        return worst;
    }

    double min_off_diagonal() const {
        double m = 0.0;
        for (size_t r = 0; r < size(); ++r)
            for (size_t c = 0; c < size(); ++c)
                if (r != c) m = std::min(m, at(r, c));
        return m;
    }
};

}  // namespace cannings

#endif
