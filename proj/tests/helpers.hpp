#pragma once

#include <map>
#include <random>
#include <utility>
#include <vector>

#include "kiss3/congruence.hpp"

namespace kiss3::testing {

// |SL2(O_d/uO_d)| by direct enumeration of determinant-1 quadruples.
inline mpz_class brute_sl2_order(const QuadInt& u) {
    ResidueSystem rs(u);
    std::vector<QuadInt> elems = rs.all();
    const int n = static_cast<int>(elems.size());
    std::map<std::pair<long, long>, int> index;
    for (int i = 0; i < n; ++i)
        index[{elems[i].a().get_si(), elems[i].b().get_si()}] = i;
    auto idx = [&](const QuadInt& x) {
        QuadInt r = rs.reduce(x);
        return index.at({r.a().get_si(), r.b().get_si()});
    };
    std::vector<std::vector<int>> mul(n, std::vector<int>(n));
    std::vector<std::vector<int>> sub(n, std::vector<int>(n));
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) {
            mul[i][j] = idx(elems[i] * elems[j]);
            sub[i][j] = idx(elems[i] - elems[j]);
        }
    const int one_idx = idx(one(u.ring()));
    long count = 0;
    for (int p = 0; p < n; ++p)
        for (int s = 0; s < n; ++s) {
            int ps = mul[p][s];
            for (int q = 0; q < n; ++q)
                for (int r = 0; r < n; ++r)
                    if (sub[ps][mul[q][r]] == one_idx) ++count;
        }
    return mpz_class(count);
}

// Random word in the given generators, length exactly len.
inline Mat2 random_word(const std::vector<Mat2>& gens, std::mt19937_64& rng, int len) {
    std::uniform_int_distribution<size_t> pick(0, gens.size() - 1);
    Mat2 w = Mat2::identity(gens.front().ring());
    for (int i = 0; i < len; ++i) w = w * gens[pick(rng)];
    return w;
}

// Generators of a subgroup of the principal congruence group of level u:
// elementary matrices with off-diagonal entries in u O_d.
inline std::vector<Mat2> principal_level_generators(const QuadInt& u) {
    const Ring rg = u.ring();
    const QuadInt z = zero(rg), o = one(rg);
    std::vector<Mat2> gens;
    for (const QuadInt& lam : {u, u * omega(rg)}) {
        Mat2 upper(o, lam, z, o), lower(o, z, lam, o);
        gens.push_back(upper);
        gens.push_back(upper.inverse());
        gens.push_back(lower);
        gens.push_back(lower.inverse());
    }
    return gens;
}

} // namespace kiss3::testing
