#ifndef CANNINGS_RNG_HPP
#define CANNINGS_RNG_HPP

#include <cstdint>
#include <random>
#include <string_view>
#include <vector>

namespace cannings {

// Deterministic stream derivation: the engine seed is a hash of
// (base seed, purpose tag, replicate id), so replicate streams are
// independent of execution order and of each other.
class RngStream {
  public:
    explicit RngStream(uint64_t raw_seed) : eng_(raw_seed) {}

    static RngStream derive(uint64_t seed, std::string_view tag, uint64_t replicate = 0) {
        uint64_t h = 0xcbf29ce484222325ULL;  // FNV-1a offset basis
        auto mix_byte = [&h](unsigned char b) {
            h ^= b;
            h *= 0x100000001b3ULL;
        };
        for (int i = 0; i < 8; ++i) mix_byte(static_cast<unsigned char>(seed >> (8 * i)));
        for (char c : tag) mix_byte(static_cast<unsigned char>(c));
        for (int i = 0; i < 8; ++i) mix_byte(static_cast<unsigned char>(replicate >> (8 * i)));
        // splitmix64 finalizer to spread the hash over the seed space
        h += 0x9e3779b97f4a7c15ULL;
        h = (h ^ (h >> 30)) * 0xbf58476d1ce4e5b9ULL;
        h = (h ^ (h >> 27)) * 0x94d049bb133111ebULL;
        h ^= h >> 31;
        return RngStream(h);
    }

    std::mt19937_64& engine() { return eng_; }

    double uniform() { return std::uniform_real_distribution<double>(0.0, 1.0)(eng_); }

    // uniform on {0, ..., n-1}
    int64_t uniform_int(int64_t n) {
        return std::uniform_int_distribution<int64_t>(0, n - 1)(eng_);
    }

    int64_t binomial(int64_t n, double p) {
        if (n <= 0 || p <= 0.0) return 0;
        if (p >= 1.0) return n;
        return std::binomial_distribution<int64_t>(n, p)(eng_);
    }

    int64_t poisson(double lambda) {
        if (lambda <= 0.0) return 0;
        return std::poisson_distribution<int64_t>(lambda)(eng_);
    }

    // index in [0, weights.size()) with probability proportional to weights
    size_t discrete(const std::vector<double>& weights) {
        return std::discrete_distribution<size_t>(weights.begin(), weights.end())(eng_);
    }

    // counts of n trials over the probability vector p (sequential binomial)
    std::vector<int64_t> multinomial(int64_t n, const std::vector<double>& p) {
        std::vector<int64_t> out(p.size(), 0);
        int64_t left = n;
        double mass = 1.0;
        for (size_t k = 0; k + 1 < p.size() && left > 0; ++k) {
            double cond = mass > 0.0 ? p[k] / mass : 0.0;
            if (cond > 1.0) cond = 1.0;
            out[k] = binomial(left, cond);
            left -= out[k];
            mass -= p[k];
        }
        if (!p.empty()) out[p.size() - 1] += left;
        return out;
    }

    template <typename T>
    void shuffle(std::vector<T>& v) {
        std::shuffle(v.begin(), v.end(), eng_);
    }

  private:
    std::mt19937_64 eng_;
};

}  // namespace cannings

#endif
