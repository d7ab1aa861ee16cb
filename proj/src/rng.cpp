#include "dsokr/rng.hpp"

#include <cmath>

namespace dsokr {

double Rng::normal() {
    if (has_spare_) {
        has_spare_ = false;
        return spare_;
    }
    double u1 = uniform();
    while (u1 <= 0.0) u1 = uniform();
    const double u2 = uniform();
    const double r = std::sqrt(-2.0 * std::log(u1));
    const double theta = 2.0 * M_PI * u2;
    spare_ = r * std::sin(theta);
    has_spare_ = true;
    return r * std::cos(theta);
}

int Rng::below(int n) {
    if (n <= 0) throw std::invalid_argument("Rng::below: n must be positive");
    // rejection sampling to avoid modulo bias
    const std::uint64_t un = static_cast<std::uint64_t>(n);
    const std::uint64_t limit = UINT64_MAX - UINT64_MAX % un;
    std::uint64_t x;
    do {
        x = next_u64();
    } while (x >= limit);
    return static_cast<int>(x % un);
}

std::vector<int> Rng::sample_without_replacement(int n, int m) {
    if (m < 0 || m > n) throw std::invalid_argument("sample_without_replacement: need 0 <= m <= n");
    std::vector<int> pool(n);
    for (int i = 0; i < n; ++i) pool[i] = i;
    for (int i = 0; i < m; ++i) {
        const int j = i + below(n - i);
        std::swap(pool[i], pool[j]);
    }
    pool.resize(m);
    return pool;
}

}  // namespace dsokr
