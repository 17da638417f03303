#include "kiss3/forms.hpp"

#include <algorithm>
#include <map>
#include <set>

#include "kiss3/errors.hpp"

namespace kiss3 {

QuadForm::QuadForm(QuadInt a, QuadInt b, QuadInt c)
    : a_(std::move(a)), b_(std::move(b)), c_(std::move(c)),
      disc_(b_ * b_ - a_ * c_ * mpz_class(4)) {
    if (a_.d() != b_.d() || a_.d() != c_.d())
        throw usage_error("QuadForm: ring mismatch");
    if (a_.is_zero() && b_.is_zero() && c_.is_zero())
        throw usage_error("QuadForm: zero form");
    if (ring().euclidean())
        primitive_ = content({a_, b_, c_}).is_unit();
}

bool QuadForm::lex_less(const QuadForm& o) const {
    int c = cmp(a_.norm(), o.a_.norm());
    if (c != 0) return c < 0;
    if (a_ != o.a_) return a_.lex_less(o.a_);
    c = cmp(b_.norm(), o.b_.norm());
    if (c != 0) return c < 0;
    if (b_ != o.b_) return b_.lex_less(o.b_);
    return c_.lex_less(o.c_);
}

std::string QuadForm::str() const {
    return "(" + a_.str() + ", " + b_.str() + ", " + c_.str() + ")";
}

QuadForm act(const Mat2& M, const QuadForm& Q) {
    const QuadInt &p = M.p(), &q = M.q(), &r = M.r(), &s = M.s();
    const QuadInt &a = Q.a(), &b = Q.b(), &c = Q.c();
    QuadInt na = a * p * p + b * p * r + c * r * r;
    QuadInt nc = a * q * q + b * q * s + c * s * s;
    QuadInt nb = (a * p * q + c * r * s) * mpz_class(2) + b * (p * s + q * r);
    QuadForm result(na, nb, nc);
    if (!(result.disc() == Q.disc()))
        throw invariant_error("act: discriminant changed");
    return result;
}

Mat2 automorph(const QuadForm& Q, const PellSolution& s) {
    if (!(Q.disc() == s.D))
        throw usage_error("automorph: Pell solution has a different discriminant");
    const Ring rg = Q.ring();
    const QuadInt two(rg, 2, 0);
    auto upper = divide_exact(two, s.t - Q.b() * s.u);
    auto lower = divide_exact(two, s.t + Q.b() * s.u);
    if (!upper || !lower)
        throw invariant_error("automorph: (t +- bu)/2 is not integral");
    return Mat2(*upper, -(Q.c() * s.u), Q.a() * s.u, *lower);
}

namespace {

using FormKey = std::array<mpz_class, 6>;

FormKey key_of(const QuadForm& Q) {
    return {Q.a().a(), Q.a().b(), Q.b().a(), Q.b().b(), Q.c().a(), Q.c().b()};
}

} // namespace

EquivResult equivalent(const QuadForm& Q1, const QuadForm& Q2, int depth) {
    if (depth < 0) throw usage_error("equivalent: negative depth");
    if (!(Q1.disc() == Q2.disc())) return {EquivOutcome::No, std::nullopt};
    const Ring rg = Q1.ring();
    Mat2 id = Mat2::identity(rg);
    if (Q1 == Q2) return {EquivOutcome::Found, EquivWitness{id, Q1, Q2}};

    // BFS over the orbit of Q1, keeping one witness per form reached
    std::set<FormKey> seen = {key_of(Q1)};
    std::vector<std::pair<QuadForm, Mat2>> frontier = {{Q1, id}};
    const auto gens = sl2_generators(rg);
    for (int level = 0; level < depth; ++level) {
        std::vector<std::pair<QuadForm, Mat2>> next;
        for (const auto& [form, word] : frontier) {
            for (const Mat2& g : gens) {
                QuadForm image = act(g, form);
                if (!seen.insert(key_of(image)).second) continue;
                Mat2 witness = word * g; // act(w*g, Q1) = act(w, act(g, Q1))
                if (image == Q2)
                    return {EquivOutcome::Found, EquivWitness{witness, Q1, Q2}};
                next.emplace_back(image, witness);
            }
        }
        frontier = std::move(next);
        if (frontier.empty()) break;
    }
    return {EquivOutcome::Unknown, std::nullopt};
}

namespace {

// Inner product of the norm form: (N(x+y) - N(x) - N(y))/2.
mpz_class norm_pairing(const QuadInt& x, const QuadInt& y) {
    return ((x + y).norm() - x.norm() - y.norm()) / 2;
}

// Representative of x mod (mu) with minimal norm, ties by lexicographically
// largest representative. Lagrange-reduced basis plus a small Babai window.
QuadInt norm_minimal_rep(const QuadInt& x, const QuadInt& mu) {
    const Ring rg = x.ring();
    QuadInt v1 = mu, v2 = mu * omega(rg);
    // Lagrange reduction under the norm form
    while (true) {
        if (v2.norm() < v1.norm()) std::swap(v1, v2);
        mpz_class t = round_div(norm_pairing(v1, v2), v1.norm());
        if (t == 0) break;
        v2 = v2 - v1 * t;
    }
    // Babai rounding: solve x = c1 v1 + c2 v2 over the rationals
    mpz_class det = v1.a() * v2.b() - v1.b() * v2.a();
    mpz_class c1 = round_div(x.a() * v2.b() - x.b() * v2.a(), det);
    mpz_class c2 = round_div(v1.a() * x.b() - v1.b() * x.a(), det);
    std::optional<QuadInt> best;
    for (long d1 = -2; d1 <= 2; ++d1) {
        for (long d2 = -2; d2 <= 2; ++d2) {
            QuadInt cand = x - v1 * mpz_class(c1 + d1) - v2 * mpz_class(c2 + d2);
            if (!best) { best = cand; continue; }
            int c = cmp(cand.norm(), best->norm());
            if (c < 0 || (c == 0 && best->lex_less(cand))) best = cand;
        }
    }
    return *best;
}

} // namespace

std::vector<QuadForm> enumerate_forms(const Discriminant& D,
                                      const mpz_class& a_norm_bound) {
    if (a_norm_bound < 1) throw usage_error("enumerate_forms: bound must be >= 1");
    const Ring rg = D.value.ring();
    std::vector<QuadForm> out;
    for (const QuadInt& a : lattice_ball(rg, a_norm_bound)) {
        if (a.is_zero()) continue;
        const QuadInt four_a = a * mpz_class(4);
        const QuadInt two_a = a * mpz_class(2);
        // b over norm-minimal representatives of O_d / 2a O_d
        std::vector<QuadInt> b_reps;
        for (const QuadInt& r : ResidueSystem(two_a).all())
            b_reps.push_back(norm_minimal_rep(r, two_a));
        std::sort(b_reps.begin(), b_reps.end(), [](const QuadInt& x, const QuadInt& y) {
            int c = cmp(x.norm(), y.norm());
            if (c != 0) return c < 0;
            return x.lex_less(y);
        });
        for (const QuadInt& b : b_reps) {
            auto c = divide_exact(four_a, b * b - D.value);
            if (!c) continue;
            QuadForm form(a, b, *c);
            if (form.primitive().has_value() && !*form.primitive()) continue;
            out.push_back(form);
        }
    }
    std::sort(out.begin(), out.end(),
              [](const QuadForm& x, const QuadForm& y) { return x.lex_less(y); });
    return out;
}

const char* to_string(EstimateStatus s) {
    return s == EstimateStatus::LowerBoundCertified ? "lower-bound-certified"
                                                    : "heuristic-estimate";
}

namespace {

struct UnionFind {
    std::vector<int> parent;
    explicit UnionFind(int n) : parent(n) {
        for (int i = 0; i < n; ++i) parent[i] = i;
    }
    int find(int i) {
        while (parent[i] != i) {
            parent[i] = parent[parent[i]];
            i = parent[i];
        }
        return i;
    }
    bool unite(int i, int j) {
        int ri = find(i), rj = find(j);
        if (ri == rj) return false;
        parent[std::max(ri, rj)] = std::min(ri, rj);
        return true;
    }
};

} // namespace

ClassNumberEstimate class_number_estimate(const Discriminant& D,
                                          const mpz_class& a_norm_bound,
                                          int equiv_depth) {
    std::vector<QuadForm> forms = enumerate_forms(D, a_norm_bound);
    ClassNumberEstimate est{D, 0, 0, a_norm_bound, equiv_depth};
    if (forms.empty()) return est;

    const int n = static_cast<int>(forms.size());
    UnionFind uf(n);

    // one orbit ball per form; two forms merge when one lies in the ball of
    // the other
    std::vector<std::set<FormKey>> balls(n);
    const auto gens = sl2_generators(D.value.ring());
    for (int i = 0; i < n; ++i) {
        std::set<FormKey>& ball = balls[i];
        ball.insert(key_of(forms[i]));
        std::vector<QuadForm> frontier = {forms[i]};
        for (int level = 0; level < equiv_depth; ++level) {
            std::vector<QuadForm> next;
            for (const QuadForm& f : frontier)
                for (const Mat2& g : gens) {
                    QuadForm image = act(g, f);
                    if (ball.insert(key_of(image)).second) next.push_back(image);
                }
            frontier = std::move(next);
            if (frontier.empty()) break;
        }
    }
    for (int i = 0; i < n; ++i)
        for (int j = i + 1; j < n; ++j)
            if (balls[i].count(key_of(forms[j])) || balls[j].count(key_of(forms[i])))
                if (uf.unite(i, j)) ++est.merged_by_depth;

    // merge further when the automorph generators are conjugate
    auto fu = pell_fundamental(D, 10000);
    if (fu) {
        std::vector<Mat2> eps;
        eps.reserve(n);
        for (const QuadForm& f : forms) eps.push_back(automorph(f, fu->sol));
        for (int i = 0; i < n; ++i)
            for (int j = i + 1; j < n; ++j) {
                if (uf.find(i) == uf.find(j)) continue;
                if (conjugating_witness(eps[i], eps[j], equiv_depth))
                    if (uf.unite(i, j)) ++est.merged_by_depth;
            }
    }

    std::map<int, QuadForm> reps;
    for (int i = 0; i < n; ++i) {
        int root = uf.find(i);
        auto it = reps.find(root);
        if (it == reps.end())
            reps.emplace(root, forms[i]);
        else if (forms[i].lex_less(it->second))
            it->second = forms[i];
    }
    for (auto& [root, form] : reps) est.representatives.push_back(form);
    std::sort(est.representatives.begin(), est.representatives.end(),
              [](const QuadForm& x, const QuadForm& y) { return x.lex_less(y); });
    est.classes_found = static_cast<long>(reps.size());
    est.certified_minimum = est.classes_found >= 1 ? 1 : 0;
    est.status = EstimateStatus::HeuristicEstimate;
    return est;
}

CorrespondenceReport correspondence_check(const std::vector<QuadForm>& forms,
                                          const PellSolution& s, int depth) {
    CorrespondenceReport report;
    std::vector<Mat2> eps;
    eps.reserve(forms.size());
    for (const QuadForm& f : forms) {
        Mat2 e = automorph(f, s);
        if (!(e.trace() == s.t)) report.traces_match = false;
        eps.push_back(e);
    }
    for (size_t i = 0; i < forms.size(); ++i) {
        for (size_t j = i + 1; j < forms.size(); ++j) {
            ++report.pairs_checked;
            EquivResult eq = equivalent(forms[i], forms[j], depth);
            if (eq.outcome == EquivOutcome::Found) {
                ++report.equivalences_found;
                const Mat2& M = eq.witness->M;
                // act(M, Q_i) = Q_j forces automorph(Q_j) = M^-1 automorph(Q_i) M
                if (!(M.inverse() * eps[i] * M == eps[j]))
                    ++report.conjugation_mismatches;
            } else if (eq.outcome == EquivOutcome::Unknown) {
                if (conjugating_witness(eps[i], eps[j], depth))
                    ++report.missed_equivalences;
            }
        }
    }
    return report;
}

} // namespace kiss3
