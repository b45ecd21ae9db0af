#pragma once

#include <minop/rational.hpp>

#include <algorithm>
#include <numeric>
#include <utility>
#include <vector>

namespace minop {

/// Permutation in one-line notation, 0-based: p[i] is the image of i.
using Perm = std::vector<int>;

inline Perm perm_identity(int n) {
    Perm p(n);
    std::iota(p.begin(), p.end(), 0);
    return p;
}

/// (p*q)(i) = p(q(i)); group product = composition of functions.
inline Perm perm_compose(const Perm& p, const Perm& q) {
    Perm r(p.size());
    for (size_t i = 0; i < p.size(); ++i) r[i] = p[q[i]];
    return r;
}

inline Perm perm_inverse(const Perm& p) {
    Perm r(p.size());
    for (size_t i = 0; i < p.size(); ++i) r[p[i]] = static_cast<int>(i);
    return r;
}

inline Perm perm_transposition(int n, int j) {
    Perm p = perm_identity(n);
    std::swap(p[j], p[j + 1]);
    return p;
}

/*
 * Factor p as s_{w[0]} * s_{w[1]} * ... (product = function composition),
 * where s_j swaps j and j+1. Obtained by bubble-sorting the one-line
 * notation; right-multiplying by s_j swaps positions j, j+1.
 */
inline std::vector<int> adjacent_word(Perm p) {
    std::vector<int> applied;
    int n = static_cast<int>(p.size());
    bool changed = true;
    while (changed) {
        changed = false;
        for (int j = 0; j + 1 < n; ++j) {
            if (p[j] > p[j + 1]) {
                std::swap(p[j], p[j + 1]);
                applied.push_back(j);
                changed = true;
            }
        }
    }
    return {applied.rbegin(), applied.rend()};
}

/// Koszul sign of p acting on a tensor of homogeneous degrees:
/// product of (-1)^{d_i d_j} over pairs i < j with p(i) > p(j).
inline int koszul_sign(const Perm& p, const std::vector<int>& degrees) {
    int exp = 0;
    int n = static_cast<int>(p.size());
    for (int i = 0; i < n; ++i)
        for (int j = i + 1; j < n; ++j)
            if (p[i] > p[j]) exp += degrees[i] * degrees[j];
    return (exp % 2 == 0) ? 1 : -1;
}

/*
 * Block thickening: p permutes m blocks of the given sizes; items keep
 * their order inside each block. Returns a permutation of sum(sizes).
 */
inline Perm block_perm(const Perm& p, const std::vector<int>& sizes) {
    int m = static_cast<int>(p.size());
    std::vector<int> start(m, 0);
    for (int j = 1; j < m; ++j) start[j] = start[j - 1] + sizes[j - 1];
    // Target offset of block j: total size of blocks landing before p(j).
    std::vector<int> target(m, 0);
    Perm inv = perm_inverse(p);
    int acc = 0;
    for (int k = 0; k < m; ++k) {
        target[inv[k]] = acc;
        acc += sizes[inv[k]];
    }
    Perm out(acc);
    for (int j = 0; j < m; ++j)
        for (int t = 0; t < sizes[j]; ++t) out[start[j] + t] = target[j] + t;
    return out;
}

/// Stable-sorting permutation and its Koszul sign for a list of keyed,
/// graded items: returns p with sorted[k] = items[p^{-1}(k)].
template <typename Key>
std::pair<Perm, int> sorting_perm(const std::vector<Key>& keys,
                                  const std::vector<int>& degrees) {
    int n = static_cast<int>(keys.size());
    std::vector<int> order(n);
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(),
                     [&](int a, int b) { return keys[a] < keys[b]; });
    // order[k] = original index landing at position k, i.e. p^{-1}.
    Perm p(n);
    for (int k = 0; k < n; ++k) p[order[k]] = k;
    return {p, koszul_sign(p, degrees)};
}

}  // namespace minop
