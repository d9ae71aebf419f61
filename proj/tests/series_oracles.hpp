#pragma once

// Exact integer q-series used as independent oracles.

#include <algorithm>
#include <cstddef>
#include <vector>

namespace oracle {

using Series = std::vector<__int128>;

inline Series mul(const Series& a, const Series& b, std::size_t len) {
    Series out(len, 0);
    for (std::size_t i = 0; i < std::min(len, a.size()); ++i)
        for (std::size_t j = 0; j + i < len && j < b.size(); ++j) out[i + j] += a[i] * b[j];
    return out;
}

// prod (1 - q^n)^24 up to q^{len-1}
inline Series eta24_product(std::size_t len) {
    Series p(len, 0);
    p[0] = 1;
    for (std::size_t n = 1; n < len; ++n)
        for (int r = 0; r < 24; ++r)
            for (std::size_t i = len - 1; i >= n; --i) p[i] -= p[i - n];
    return p;
}

// q-expansion of j = E4^3 / Delta, returned as coefficients of q^{-1}, q^0, q^1, ...
inline std::vector<double> j_coefficients(std::size_t len) {
    Series e4(len + 1, 0);
    e4[0] = 1;
    for (std::size_t n = 1; n <= len; ++n) {
        __int128 s = 0;
        for (std::size_t d = 1; d <= n; ++d)
            if (n % d == 0) s += static_cast<__int128>(d) * d * d;
        e4[n] = 240 * s;
    }
    Series e43 = mul(mul(e4, e4, len + 1), e4, len + 1);
    // divide by prod(1-q^n)^24
    Series p = eta24_product(len + 1), quo(len + 1, 0);
    for (std::size_t i = 0; i <= len; ++i) {
        __int128 s = e43[i];
        for (std::size_t j = 1; j <= i; ++j) s -= p[j] * quo[i - j];
        quo[i] = s;
    }
    std::vector<double> out;
    for (auto v : quo) out.push_back(static_cast<double>(v));
    return out;
}

// tau(n) for n >= 1
inline std::vector<double> ramanujan_tau(std::size_t len) {
    auto p = eta24_product(len);
    std::vector<double> out{0};
    for (std::size_t n = 1; n < len; ++n) out.push_back(static_cast<double>(p[n - 1]));
    return out;
}

inline long long partitions(int n, int largest) {
    if (n == 0) return 1;
    long long s = 0;
    for (int k = std::min(n, largest); k >= 1; --k) s += partitions(n - k, k);
    return s;
}

// Same j expansion in floating point, for indices where __int128 overflows.
// E4^3 and prod (1-q^n)^{-24} have positive coefficients, so nothing cancels.
inline std::vector<double> j_coefficients_real(std::size_t len) {
    std::vector<double> e4(len + 1, 0.0), inv(len + 1, 0.0);
    e4[0] = 1;
    for (std::size_t n = 1; n <= len; ++n) {
        double s = 0;
        for (std::size_t d = 1; d <= n; ++d)
            if (n % d == 0) s += static_cast<double>(d) * d * d;
        e4[n] = 240 * s;
    }
    auto mulr = [&](const std::vector<double>& a, const std::vector<double>& b) {
        std::vector<double> out(len + 1, 0.0);
        for (std::size_t i = 0; i <= len; ++i)
            for (std::size_t j = 0; i + j <= len; ++j) out[i + j] += a[i] * b[j];
        return out;
    };
    inv[0] = 1;
    for (std::size_t n = 1; n <= len; ++n)
        for (int r = 0; r < 24; ++r)
            for (std::size_t i = n; i <= len; ++i) inv[i] += inv[i - n];
    return mulr(mulr(mulr(e4, e4), e4), inv);
}

}  // namespace oracle
