#pragma once

#include <minop/operad.hpp>

#include <algorithm>
#include <functional>
#include <map>
#include <memory>
#include <string>
#include <utility>
#include <vector>

namespace minop {
namespace builtins {

// ---------------------------------------------------------------------------
// Com: one operation per arity, trivial symmetric action, unitary.
// ---------------------------------------------------------------------------

inline std::shared_ptr<OperadTable> make_com_table(Convention conv, int bound) {
    auto p = std::make_shared<OperadTable>("Com", conv, Unitality::Unitary, bound);
    p->set_degree_floor(0);
    for (int n = 0; n <= bound; ++n) {
        std::string display;
        if (n == 0)
            display = "1";
        else
            for (int k = 1; k <= n; ++k)
                display += (k > 1 ? "*" : "") + std::string("%") + std::to_string(k);
        p->add_basis_elt(n, 0, "e" + std::to_string(n), display);
        if (n >= 2)
            p->set_transpositions(
                n, std::vector<RatMatrix>(n - 1, RatMatrix::identity(1)));
    }
    for (int m = 1; m <= bound; ++m)
        for (int n = 0; n <= bound && m + n - 1 <= bound; ++n)
            for (int i = 1; i <= m; ++i) p->add_composition(m, n, i, 0, 0, 0, Rat(1));
    return p;
}

// ---------------------------------------------------------------------------
// Ass: the regular representation. Basis of P(n) = permutations of n letters;
// the element of sigma is the operation multiplying its arguments in the
// order sigma^{-1}(0), sigma^{-1}(1), ... ("word" notation).
// ---------------------------------------------------------------------------

namespace detail {

inline std::vector<Perm> all_perms(int n) {
    std::vector<Perm> out;
    Perm p = perm_identity(n);
    do {
        out.push_back(p);
    } while (std::next_permutation(p.begin(), p.end()));
    return out;
}

inline Perm word_of(const Perm& sigma) { return perm_inverse(sigma); }
inline Perm perm_of_word(const Perm& word) { return perm_inverse(word); }

/// Substitute word w2 (possibly empty) for letter `slot` of w1 (0-based).
inline Perm word_subst(const Perm& w1, int slot, const Perm& w2) {
    int n = static_cast<int>(w2.size());
    Perm out;
    for (int x : w1) {
        if (x < slot) {
            out.push_back(x);
        } else if (x == slot) {
            for (int y : w2) out.push_back(y + slot);
        } else {
            out.push_back(x + n - 1);
        }
    }
    return out;
}

}  // namespace detail

inline std::shared_ptr<OperadTable> make_ass_table(Convention conv, int bound) {
    auto p = std::make_shared<OperadTable>("Ass", conv, Unitality::Unitary, bound);
    p->set_degree_floor(0);
    p->add_basis_elt(0, 0, "1", "1");
    std::vector<std::map<Perm, int>> index(bound + 1);
    std::vector<std::vector<Perm>> perms(bound + 1);
    for (int n = 1; n <= bound; ++n) {
        perms[n] = detail::all_perms(n);
        for (int a = 0; a < static_cast<int>(perms[n].size()); ++a) {
            const Perm& sigma = perms[n][a];
            index[n][sigma] = a;
            Perm w = detail::word_of(sigma);
            std::string display, label = "w";
            for (int k = 0; k < n; ++k) {
                display += (k ? "*" : "") + std::string("%") + std::to_string(w[k] + 1);
                label += std::to_string(w[k] + 1);
            }
            p->add_basis_elt(n, 0, label, display);
        }
        if (n >= 2) {
            std::vector<RatMatrix> ts;
            for (int j = 0; j + 1 < n; ++j) {
                RatMatrix t(p->dim(n), p->dim(n));
                Perm s = perm_transposition(n, j);
                for (int a = 0; a < p->dim(n); ++a)
                    t.set(index[n][perm_compose(perms[n][a], s)], a, Rat(1));
                ts.push_back(std::move(t));
            }
            p->set_transpositions(n, std::move(ts));
        }
    }
    for (int m = 1; m <= bound; ++m)
        for (int n = 0; n <= bound && m + n - 1 <= bound; ++n)
            for (int i = 1; i <= m; ++i)
                for (int a = 0; a < p->dim(m); ++a) {
                    Perm w1 = detail::word_of(perms[m][a]);
                    if (n == 0) {
                        Perm w = detail::word_subst(w1, i - 1, {});
                        int dst = m == 1 ? 0 : index[m - 1][detail::perm_of_word(w)];
                        p->add_composition(m, 0, i, a, 0, dst, Rat(1));
                        continue;
                    }
                    for (int b = 0; b < p->dim(n); ++b) {
                        Perm w2 = detail::word_of(perms[n][b]);
                        Perm w = detail::word_subst(w1, i - 1, w2);
                        p->add_composition(m, n, i, a, b,
                                           index[m + n - 1][detail::perm_of_word(w)],
                                           Rat(1));
                    }
                }
    return p;
}

// ---------------------------------------------------------------------------
// Lie: realized inside Ass via the commutator embedding. The basis of Lie(n)
// is the left-normed bracket monomials [[x_0, x_{s(1)}], ..., x_{s(n-1)}]
// starting at the minimal letter; their structure constants are computed by
// expanding commutators in the group algebra and solving back.
// ---------------------------------------------------------------------------

namespace detail {

/// Commutator expansion of a left-normed word into signed permutation words.
inline std::vector<std::pair<Perm, int>> commutator_words(const std::vector<int>& seq) {
    std::vector<std::pair<Perm, int>> acc = {{{seq[0]}, 1}};
    for (size_t k = 1; k < seq.size(); ++k) {
        std::vector<std::pair<Perm, int>> next;
        for (const auto& [w, c] : acc) {
            Perm left = w;
            left.push_back(seq[k]);
            Perm right = {seq[k]};
            right.insert(right.end(), w.begin(), w.end());
            next.emplace_back(std::move(left), c);
            next.emplace_back(std::move(right), -c);
        }
        acc = std::move(next);
    }
    return acc;
}

inline std::vector<std::vector<int>> left_normed_sequences(int n) {
    std::vector<std::vector<int>> out;
    std::vector<int> rest;
    for (int k = 1; k < n; ++k) rest.push_back(k);
    do {
        std::vector<int> seq = {0};
        seq.insert(seq.end(), rest.begin(), rest.end());
        out.push_back(seq);
    } while (std::next_permutation(rest.begin(), rest.end()));
    return out;
}

inline std::string bracket_display(const std::vector<int>& seq) {
    std::string s = "%" + std::to_string(seq[0] + 1);
    for (size_t k = 1; k < seq.size(); ++k)
        s = "[" + s + ",%" + std::to_string(seq[k] + 1) + "]";
    return s;
}

}  // namespace detail

struct LieRealization {
    std::shared_ptr<OperadTable> lie;
    /// Per arity: dim Ass(n) x dim Lie(n) embedding (commutator expansion).
    std::vector<RatMatrix> embedding;
};

inline LieRealization make_lie_realization(Convention conv, int bound) {
    auto ass = make_ass_table(conv, bound);
    auto lie =
        std::make_shared<OperadTable>("Lie", conv, Unitality::Reduced, bound);
    lie->set_degree_floor(0);

    std::vector<std::map<Perm, int>> ass_index(bound + 1);
    {
        std::vector<std::vector<Perm>> perms(bound + 1);
        for (int n = 1; n <= bound; ++n) {
            perms[n] = detail::all_perms(n);
            for (int a = 0; a < static_cast<int>(perms[n].size()); ++a)
                ass_index[n][perms[n][a]] = a;
        }
    }

    std::vector<RatMatrix> embed(bound + 1);
    std::vector<std::unique_ptr<LinearSolver>> solver(bound + 1);
    std::vector<std::vector<std::vector<int>>> seqs(bound + 1);

    for (int n = 1; n <= bound; ++n) {
        seqs[n] = detail::left_normed_sequences(n);
        embed[n] = RatMatrix(ass->dim(n), static_cast<int>(seqs[n].size()));
        for (int col = 0; col < static_cast<int>(seqs[n].size()); ++col) {
            lie->add_basis_elt(n, 0, "l" + std::to_string(n) + "_" +
                                         std::to_string(col),
                               detail::bracket_display(seqs[n][col]));
            for (const auto& [w, c] : detail::commutator_words(seqs[n][col]))
                embed[n].add_to(ass_index[n][detail::perm_of_word(w)], col, Rat(c));
        }
        solver[n] = std::make_unique<LinearSolver>(embed[n]);
        if (solver[n]->rank() != static_cast<int>(seqs[n].size()))
            throw ValidationError("Lie embedding degenerated at arity " +
                                  std::to_string(n));
    }

    auto to_lie = [&](int n, const RatVec& ass_vec) {
        auto x = solver[n]->solve(ass_vec);
        if (!x)
            throw ValidationError("element not in the Lie suboperad at arity " +
                                  std::to_string(n));
        return *x;
    };

    for (int n = 2; n <= bound; ++n) {
        std::vector<RatMatrix> ts;
        for (int j = 0; j + 1 < n; ++j) {
            RatMatrix t(lie->dim(n), lie->dim(n));
            for (int a = 0; a < lie->dim(n); ++a) {
                RatVec img = ass->transposition(n, j).apply(embed[n].column_dense(a));
                RatVec x = to_lie(n, img);
                for (int r = 0; r < lie->dim(n); ++r)
                    if (x[r] != 0) t.set(r, a, x[r]);
            }
            ts.push_back(std::move(t));
        }
        lie->set_transpositions(n, std::move(ts));
    }

    for (int m = 1; m <= bound; ++m)
        for (int n = 1; n <= bound && m + n - 1 <= bound; ++n)
            for (int i = 1; i <= m; ++i)
                for (int a = 0; a < lie->dim(m); ++a)
                    for (int b = 0; b < lie->dim(n); ++b) {
                        RatVec img = ass->compose(m, n, i, embed[m].column_dense(a),
                                                  embed[n].column_dense(b));
                        RatVec x = to_lie(m + n - 1, img);
                        for (int r = 0; r < lie->dim(m + n - 1); ++r)
                            if (x[r] != 0)
                                lie->add_composition(m, n, i, a, b, r, x[r]);
                    }

    return {lie, std::move(embed)};
}

inline std::shared_ptr<OperadTable> make_lie_table(Convention conv, int bound) {
    return make_lie_realization(conv, bound).lie;
}

// ---------------------------------------------------------------------------
// Ger: free-Gerstenhaber normal form. A basis monomial is a set partition of
// the letters with a left-normed bracket word per block (minimal letter
// first), blocks ordered by their minima. The operadic bracket basis lambda
// is the suspension-twisted one, so its symmetry is lambda(u,v) =
// (-1)^{p(u)p(v)} lambda(v,u) and all rewriting signs depend only on
// degree parities (hence work for both conventions):
//   (J)  lambda(u,lambda(v,w)) = -(-1)^{p(u)} lambda(lambda(u,v),w)
//                                - (-1)^{p(u)+p(v)p(w)} lambda(lambda(u,w),v)
//   (P)  lambda(u, v w) = lambda(u,v) w + (-1)^{(p(u)+1)p(v)} v lambda(u,w)
// ---------------------------------------------------------------------------

namespace ger {

struct Mono {
    std::vector<std::vector<int>> blocks;
    bool operator<(const Mono& o) const { return blocks < o.blocks; }
    bool operator==(const Mono& o) const { return blocks == o.blocks; }
};

using Expr = std::map<Mono, Rat>;

inline int block_parity(const std::vector<int>& b) {
    return static_cast<int>(b.size() + 1) % 2;
}

inline int parity(const Mono& m) {
    int p = 0;
    for (const auto& b : m.blocks) p += block_parity(b);
    return p % 2;
}

inline void add_term(Expr& e, const Mono& m, const Rat& c) {
    if (c == 0) return;
    auto it = e.find(m);
    if (it == e.end()) {
        e.emplace(m, c);
    } else {
        it->second += c;
        if (it->second == 0) e.erase(it);
    }
}

inline Expr scaled(const Expr& e, const Rat& c) {
    Expr out;
    for (const auto& [m, v] : e) add_term(out, m, c * v);
    return out;
}

inline Expr& acc_into(Expr& into, const Expr& e, const Rat& c = Rat(1)) {
    for (const auto& [m, v] : e) add_term(into, m, c * v);
    return into;
}

/// Sort blocks by first letter; Koszul sign on block parities.
inline std::pair<Mono, int> sort_blocks(std::vector<std::vector<int>> blocks) {
    int sign = 1;
    for (size_t i = 1; i < blocks.size(); ++i)
        for (size_t j = i; j > 0 && blocks[j][0] < blocks[j - 1][0]; --j) {
            if (block_parity(blocks[j]) && block_parity(blocks[j - 1])) sign = -sign;
            std::swap(blocks[j], blocks[j - 1]);
        }
    return {Mono{std::move(blocks)}, sign};
}

inline Expr product_mono(const Mono& a, const Mono& b) {
    std::vector<std::vector<int>> blocks = a.blocks;
    blocks.insert(blocks.end(), b.blocks.begin(), b.blocks.end());
    auto [m, s] = sort_blocks(std::move(blocks));
    Expr e;
    add_term(e, m, Rat(s));
    return e;
}

inline Expr product(const Expr& a, const Expr& b) {
    Expr out;
    for (const auto& [ma, ca] : a)
        for (const auto& [mb, cb] : b) acc_into(out, product_mono(ma, mb), ca * cb);
    return out;
}

Expr bracket(const Expr& a, const Expr& b);

inline Expr letter(int i) {
    Expr e;
    add_term(e, Mono{{{i}}}, Rat(1));
    return e;
}

inline Expr mono_expr(const std::vector<std::vector<int>>& blocks) {
    Expr e;
    auto [m, s] = sort_blocks(blocks);
    add_term(e, m, Rat(s));
    return e;
}

/// lambda on two left-normed words (single blocks). Terminates because each
/// rewriting step shrinks the right-hand word.
inline Expr bracket_words(const std::vector<int>& w1, const std::vector<int>& w2) {
    int p1 = block_parity(w1);
    if (w2.size() == 1) {
        int c = w2[0];
        if (w1[0] < c) {
            std::vector<int> w = w1;
            w.push_back(c);
            Expr e;
            add_term(e, Mono{{w}}, Rat(1));
            return e;
        }
        // c below every letter of w1; flip via symmetry (no sign: p(c)=0).
        if (w1.size() == 1) {
            Expr e;
            add_term(e, Mono{{{c, w1[0]}}}, Rat(1));
            return e;
        }
        std::vector<int> prefix(w1.begin(), w1.end() - 1);
        int y = w1.back();
        // lambda(c, [prefix, y]) = -lambda(lambda(c,prefix), y)
        //                          - lambda(lambda(c,y), prefix)
        Expr t1 = bracket(bracket_words({c}, prefix), letter(y));
        Expr t2 = bracket(bracket_words({c}, {y}),
                          mono_expr({{prefix}}));
        Expr out;
        acc_into(out, t1, Rat(-1));
        acc_into(out, t2, Rat(-1));
        return out;
    }
    std::vector<int> prefix(w2.begin(), w2.end() - 1);
    int z = w2.back();
    // lambda(w1, [prefix, z]) =
    //   -(-1)^{p1} [ lambda(lambda(w1,prefix), z) + lambda(lambda(w1,z), prefix) ]
    Expr t1 = bracket(bracket_words(w1, prefix), letter(z));
    Expr t2 = bracket(bracket_words(w1, {z}), mono_expr({{prefix}}));
    Rat s = p1 ? Rat(1) : Rat(-1);
    Expr out;
    acc_into(out, t1, s);
    acc_into(out, t2, s);
    return out;
}

inline Expr bracket_mono(const Mono& a, const Mono& b) {
    if (b.blocks.size() > 1) {
        Mono head{{b.blocks.front()}};
        Mono tail{{b.blocks.begin() + 1, b.blocks.end()}};
        Expr t1 = product(bracket_mono(a, head), mono_expr(tail.blocks));
        Expr t2 = product(mono_expr(head.blocks), bracket_mono(a, tail));
        int sgn = ((parity(a) + 1) * block_parity(b.blocks.front())) % 2 ? -1 : 1;
        Expr out = t1;
        acc_into(out, t2, Rat(sgn));
        return out;
    }
    if (a.blocks.size() > 1) {
        int sgn = (parity(a) * parity(b)) % 2 ? -1 : 1;
        return scaled(bracket_mono(b, a), Rat(sgn));
    }
    return bracket_words(a.blocks[0], b.blocks[0]);
}

inline Expr bracket(const Expr& a, const Expr& b) {
    Expr out;
    for (const auto& [ma, ca] : a)
        for (const auto& [mb, cb] : b) acc_into(out, bracket_mono(ma, mb), ca * cb);
    return out;
}

/// Normalize a left-normed letter sequence that may violate min-first order.
inline Expr word_normalize(const std::vector<int>& seq) {
    Expr e = letter(seq[0]);
    for (size_t k = 1; k < seq.size(); ++k) e = bracket(e, letter(seq[k]));
    return e;
}

inline Expr normalize_blocks(const std::vector<std::vector<int>>& blocks) {
    Expr e;
    add_term(e, Mono{}, Rat(1));
    for (const auto& b : blocks) e = product(e, word_normalize(b));
    return e;
}

inline Expr relabel(const Mono& m, const std::function<int(int)>& f) {
    std::vector<std::vector<int>> blocks = m.blocks;
    for (auto& b : blocks)
        for (auto& x : b) x = f(x);
    return normalize_blocks(blocks);
}

/*
 * Substitute E for letter i of m, preserving textual position. A monomial is
 * a tensor of block operators applied after an unshuffle; feeding a graded
 * element into block j moves it past the block operators standing after j,
 * which costs (-1)^{p(E) * (total parity of the later blocks)}.
 */
inline Expr subst(const Mono& m, int i, const Expr& E_in) {
    size_t j = 0;
    while (j < m.blocks.size() &&
           std::find(m.blocks[j].begin(), m.blocks[j].end(), i) == m.blocks[j].end())
        ++j;
    if (j == m.blocks.size()) throw Error("substitution letter not found");

    int tail_parity = 0;
    for (size_t t = j + 1; t < m.blocks.size(); ++t)
        tail_parity += block_parity(m.blocks[t]);
    Expr E;
    for (const auto& [mono, c] : E_in)
        add_term(E, mono, (parity(mono) * tail_parity) % 2 ? -c : c);

    Expr core;
    if (m.blocks[j].size() == 1) {
        core = E;
    } else {
        const auto& seq = m.blocks[j];
        core = (seq[0] == i) ? E : letter(seq[0]);
        for (size_t k = 1; k < seq.size(); ++k)
            core = bracket(core, seq[k] == i ? E : letter(seq[k]));
    }
    std::vector<std::vector<int>> prefix(m.blocks.begin(), m.blocks.begin() + j);
    std::vector<std::vector<int>> suffix(m.blocks.begin() + j + 1, m.blocks.end());
    Expr out;
    add_term(out, Mono{prefix}, Rat(1));
    out = product(out, core);
    Expr suf;
    add_term(suf, Mono{suffix}, Rat(1));
    return product(out, suf);
}

inline void enumerate_partitions(
    int n, std::vector<std::vector<int>>& current,
    const std::function<void(const std::vector<std::vector<int>>&)>& fn, int next) {
    if (next == n) {
        fn(current);
        return;
    }
    size_t existing = current.size();
    for (size_t j = 0; j < existing; ++j) {
        current[j].push_back(next);
        enumerate_partitions(n, current, fn, next + 1);
        current[j].pop_back();
    }
    current.push_back({next});
    enumerate_partitions(n, current, fn, next + 1);
    current.pop_back();
}

inline std::vector<Mono> enumerate_basis(int n) {
    std::vector<Mono> out;
    std::vector<std::vector<int>> cur;
    enumerate_partitions(
        n, cur,
        [&](const std::vector<std::vector<int>>& partition) {
            // Per block: all orderings of the non-minimal letters.
            std::vector<std::vector<std::vector<int>>> choices;
            for (const auto& b : partition) {
                std::vector<int> rest(b.begin() + 1, b.end());
                std::sort(rest.begin(), rest.end());
                std::vector<std::vector<int>> opts;
                do {
                    std::vector<int> seq = {b[0]};
                    seq.insert(seq.end(), rest.begin(), rest.end());
                    opts.push_back(seq);
                } while (std::next_permutation(rest.begin(), rest.end()));
                choices.push_back(std::move(opts));
            }
            std::vector<size_t> pick(choices.size(), 0);
            while (true) {
                std::vector<std::vector<int>> blocks;
                for (size_t k = 0; k < choices.size(); ++k)
                    blocks.push_back(choices[k][pick[k]]);
                out.push_back(sort_blocks(blocks).first);
                size_t k = 0;
                while (k < pick.size() && ++pick[k] == choices[k].size())
                    pick[k++] = 0;
                if (k == pick.size()) break;
            }
        },
        0);
    std::sort(out.begin(), out.end());
    return out;
}

inline std::string display_of(const Mono& m) {
    std::string s;
    for (size_t j = 0; j < m.blocks.size(); ++j) {
        const auto& b = m.blocks[j];
        std::string w = "%" + std::to_string(b[0] + 1);
        for (size_t k = 1; k < b.size(); ++k)
            w = "[" + w + ",%" + std::to_string(b[k] + 1) + "]";
        s += (j ? "*" : "") + w;
    }
    return s;
}

}  // namespace ger

inline std::shared_ptr<OperadTable> make_ger_table(Convention conv, int bound) {
    auto p = std::make_shared<OperadTable>("Ger", conv, Unitality::Reduced, bound);
    if (conv == Convention::Chain) p->set_degree_floor(0);
    std::vector<std::vector<ger::Mono>> basis(bound + 1);
    std::vector<std::map<ger::Mono, int>> index(bound + 1);
    int orient = conv == Convention::Cochain ? -1 : 1;

    for (int n = 1; n <= bound; ++n) {
        basis[n] = ger::enumerate_basis(n);
        for (int a = 0; a < static_cast<int>(basis[n].size()); ++a) {
            index[n][basis[n][a]] = a;
            int brackets = n - static_cast<int>(basis[n][a].blocks.size());
            p->add_basis_elt(n, orient * brackets,
                             "g" + std::to_string(n) + "_" + std::to_string(a),
                             ger::display_of(basis[n][a]));
        }
    }

    auto to_vec = [&](int n, const ger::Expr& e) {
        RatVec v(basis[n].size(), Rat(0));
        for (const auto& [m, c] : e) v[index[n].at(m)] = c;
        return v;
    };

    for (int n = 2; n <= bound; ++n) {
        std::vector<RatMatrix> ts;
        for (int j = 0; j + 1 < n; ++j) {
            RatMatrix t(p->dim(n), p->dim(n));
            for (int a = 0; a < p->dim(n); ++a) {
                // Right action: relabel letters through sigma^{-1} = s_j.
                ger::Expr img = ger::relabel(
                    basis[n][a], [j](int x) { return x == j ? j + 1 : (x == j + 1 ? j : x); });
                RatVec v = to_vec(n, img);
                for (int r = 0; r < p->dim(n); ++r)
                    if (v[r] != 0) t.set(r, a, v[r]);
            }
            ts.push_back(std::move(t));
        }
        p->set_transpositions(n, std::move(ts));
    }

    for (int m = 1; m <= bound; ++m)
        for (int n = 1; n <= bound && m + n - 1 <= bound; ++n)
            for (int i = 1; i <= m; ++i) {
                int slot = i - 1;
                for (int a = 0; a < p->dim(m); ++a) {
                    // Shift letters: k>slot in a by n-1; letters of b by slot.
                    ger::Expr shifted_a = ger::relabel(basis[m][a], [&](int x) {
                        return x > slot ? x + n - 1 : x;
                    });
                    if (shifted_a.size() != 1)
                        throw Error("monotone relabel must stay a monomial");
                    ger::Mono am = shifted_a.begin()->first;
                    Rat ca = shifted_a.begin()->second;
                    for (int b = 0; b < p->dim(n); ++b) {
                        ger::Expr bb = ger::relabel(basis[n][b],
                                                    [&](int x) { return x + slot; });
                        ger::Expr res = ger::scaled(ger::subst(am, slot, bb), ca);
                        RatVec v = to_vec(m + n - 1, res);
                        for (int r = 0; r < p->dim(m + n - 1); ++r)
                            if (v[r] != 0) p->add_composition(m, n, i, a, b, r, v[r]);
                    }
                }
            }
    return p;
}

// ---------------------------------------------------------------------------
// Named construction + built-in operad morphisms.
// ---------------------------------------------------------------------------

inline std::shared_ptr<OperadTable> make_builtin(const std::string& name,
                                                 Convention conv, int bound) {
    if (bound < 2) throw PreconditionError("builtin operads need arity bound >= 2");
    if (name == "Com") return make_com_table(conv, bound);
    if (name == "Ass") return make_ass_table(conv, bound);
    if (name == "Lie") return make_lie_table(conv, bound);
    if (name == "Ger") return make_ger_table(conv, bound);
    throw PreconditionError("unsupported built-in operad: " + name);
}

/// Bracket |-> commutator: the embedding used to realize Lie inside Ass.
inline OperadMorphism lie_to_ass_morphism(Convention conv, int bound) {
    LieRealization real = make_lie_realization(conv, bound);
    auto ass = make_ass_table(conv, bound);
    std::vector<RatMatrix> mats;
    mats.push_back(RatMatrix(ass->dim(0), 0));
    for (int n = 1; n <= bound; ++n) mats.push_back(real.embedding[n]);
    return OperadMorphism(real.lie, ass, std::move(mats));
}

/// Abelianization: every permutation word to the commutative product.
inline OperadMorphism ass_to_com_morphism(Convention conv, int bound) {
    auto ass = make_ass_table(conv, bound);
    auto com = make_com_table(conv, bound);
    std::vector<RatMatrix> mats;
    for (int n = 0; n <= bound; ++n) {
        RatMatrix m(com->dim(n), ass->dim(n));
        for (int a = 0; a < ass->dim(n); ++a) m.set(0, a, Rat(1));
        mats.push_back(std::move(m));
    }
    return OperadMorphism(ass, com, std::move(mats));
}

}  // namespace builtins
}  // namespace minop
