#include "kiss3/congruence.hpp"

#include <algorithm>
#include <array>
#include <map>
#include <set>
#include <sstream>
#include <thread>

#include "kiss3/errors.hpp"
#include "kiss3/geom.hpp"

namespace kiss3 {

Mat2::Mat2(QuadInt p, QuadInt q, QuadInt r, QuadInt s)
    : p_(std::move(p)), q_(std::move(q)), r_(std::move(r)), s_(std::move(s)) {
    if (p_.d() != q_.d() || p_.d() != r_.d() || p_.d() != s_.d())
        throw usage_error("Mat2: ring mismatch");
    if (!(p_ * s_ - q_ * r_ == one(p_.ring())))
        throw usage_error("Mat2: determinant must be 1");
}

Mat2 Mat2::operator*(const Mat2& o) const {
    return Mat2(p_ * o.p_ + q_ * o.r_, p_ * o.q_ + q_ * o.s_,
                r_ * o.p_ + s_ * o.r_, r_ * o.q_ + s_ * o.s_);
}

Mat2 Mat2::inverse() const { return Mat2(s_, -q_, -r_, p_); }

Mat2 Mat2::operator-() const { return Mat2(-p_, -q_, -r_, -s_); }

Mat2 Mat2::pow(long n) const {
    if (n < 0) throw usage_error("Mat2::pow: negative exponent");
    Mat2 result = identity(ring());
    Mat2 base = *this;
    while (n > 0) {
        if (n & 1) result = result * base;
        base = base * base;
        n >>= 1;
    }
    return result;
}

bool Mat2::operator==(const Mat2& o) const {
    return p_ == o.p_ && q_ == o.q_ && r_ == o.r_ && s_ == o.s_;
}

bool Mat2::lex_less(const Mat2& o) const {
    for (auto [x, y] : {std::pair{&p_, &o.p_}, {&q_, &o.q_}, {&r_, &o.r_}, {&s_, &o.s_}}) {
        if (*x != *y) return x->lex_less(*y);
    }
    return false;
}

std::string Mat2::str() const {
    return "[[" + p_.str() + "," + q_.str() + "],[" + r_.str() + "," + s_.str() + "]]";
}

Mat2 Mat2::identity(const Ring& rg) {
    return Mat2(one(rg), zero(rg), zero(rg), one(rg));
}

std::vector<Mat2> sl2_generators(const Ring& rg) {
    const QuadInt o = one(rg), z = zero(rg), w = omega(rg);
    Mat2 S(z, -o, o, z);
    Mat2 T1(o, o, z, o);
    Mat2 Tw(o, w, z, o);
    return {S, S.inverse(), T1, T1.inverse(), Tw, Tw.inverse()};
}

ResidueSystem::ResidueSystem(const QuadInt& mu) : mu_(mu) {
    if (mu.is_zero()) throw usage_error("ResidueSystem: zero modulus");
    const Ring rg = mu.ring();
    const QuadInt muw = mu * omega(rg);
    // Row lattice spanned by (a1,b1), (a2,b2); bring to a basis
    // (xper, 0), (xoff, yper) by integer row operations.
    mpz_class a1 = mu.a(), b1 = mu.b(), a2 = muw.a(), b2 = muw.b();
    mpz_class g, x, y;
    mpz_gcdext(g.get_mpz_t(), x.get_mpz_t(), y.get_mpz_t(), b1.get_mpz_t(),
               b2.get_mpz_t());
    // w = x*(a1,b1) + y*(a2,b2) has second coordinate g
    mpz_class wa = x * a1 + y * a2;
    // h = (b2/g)*(a1,b1) - (b1/g)*(a2,b2) has second coordinate 0
    mpz_class e = (b2 / g) * a1 - (b1 / g) * a2;
    if (e == 0) throw invariant_error("ResidueSystem: degenerate lattice");
    xper_ = e < 0 ? mpz_class(-e) : e;
    yper_ = g; // gcd is nonnegative
    mpz_class r;
    mpz_fdiv_r(r.get_mpz_t(), wa.get_mpz_t(), xper_.get_mpz_t());
    xoff_ = r;
    if (xper_ * yper_ != mu.norm())
        throw invariant_error("ResidueSystem: index mismatch");
}

mpz_class ResidueSystem::size() const { return xper_ * yper_; }

QuadInt ResidueSystem::reduce(const QuadInt& x) const {
    if (x.d() != mu_.d()) throw usage_error("ResidueSystem: ring mismatch");
    mpz_class k;
    mpz_fdiv_q(k.get_mpz_t(), x.b().get_mpz_t(), yper_.get_mpz_t());
    mpz_class yb = x.b() - k * yper_;
    mpz_class xa = x.a() - k * xoff_;
    mpz_class ra;
    mpz_fdiv_r(ra.get_mpz_t(), xa.get_mpz_t(), xper_.get_mpz_t());
    return QuadInt(mu_.ring(), ra, yb);
}

std::vector<QuadInt> ResidueSystem::all() const {
    if (!size().fits_slong_p())
        throw unsupported_error("residue system too large to enumerate");
    std::vector<QuadInt> out;
    out.reserve(size().get_si());
    for (mpz_class j = 0; j < yper_; ++j)
        for (mpz_class i = 0; i < xper_; ++i)
            out.emplace_back(mu_.ring(), i, j);
    return out;
}

std::optional<QuadInt> solve_norm_equation(const Ring& rg, const mpz_class& p) {
    if (p <= 0) return std::nullopt;
    if (rg.half_basis()) {
        // (2a + b)^2 + d b^2 = 4p
        mpz_class bmax = isqrt_floor(4 * p / rg.d());
        for (mpz_class b = 0; b <= bmax; ++b) {
            mpz_class rem = 4 * p - rg.d() * b * b;
            auto s = isqrt_exact(rem);
            if (!s) continue;
            for (int sgn : {1, -1}) {
                mpz_class twice_a = sgn * *s - b;
                if (!mpz_divisible_ui_p(twice_a.get_mpz_t(), 2)) continue;
                QuadInt cand(rg, mpz_class(twice_a / 2), b);
                if (cand.norm() == p) return canonical_associate(cand);
            }
        }
        return std::nullopt;
    }
    // a^2 + d b^2 = p
    mpz_class bmax = isqrt_floor(p / rg.d());
    for (mpz_class b = 0; b <= bmax; ++b) {
        auto a = isqrt_exact(p - rg.d() * b * b);
        if (a) return canonical_associate(QuadInt(rg, *a, b));
    }
    return std::nullopt;
}

namespace {

// Rational prime factorization by trial division; mpz-exact for the sizes
// this artifact meets.
std::vector<std::pair<mpz_class, int>> factor_rational(mpz_class n) {
    std::vector<std::pair<mpz_class, int>> out;
    if (n < 0) n = -n;
    if (n <= 1) return out;
    auto strip = [&](const mpz_class& p) {
        int e = 0;
        while (mpz_divisible_p(n.get_mpz_t(), p.get_mpz_t())) {
            n /= p;
            ++e;
        }
        if (e) out.emplace_back(p, e);
    };
    strip(2);
    strip(3);
    mpz_class p = 5;
    while (p * p <= n) {
        if (mpz_probab_prime_p(n.get_mpz_t(), 30) != 0) break;
        strip(p);
        strip(p + 2);
        p += 6;
        if (p > 100000000) throw unsupported_error("factorization bound exceeded");
    }
    if (n > 1) out.emplace_back(n, 1);
    return out;
}

int valuation(QuadInt& x, const QuadInt& prime) {
    int e = 0;
    while (true) {
        auto q = divide_exact(prime, x);
        if (!q) return e;
        x = *q;
        ++e;
    }
}

} // namespace

ResidueRing factor_element(const QuadInt& x) {
    if (x.is_zero()) throw usage_error("factor_element: zero input");
    const Ring rg = x.ring();
    ResidueRing out{x, one(rg), {}};
    QuadInt rem = x;
    mpz_class disc(rg.field_discriminant());
    for (const auto& [p, e_norm] : factor_rational(x.norm())) {
        int chi = mpz_kronecker(disc.get_mpz_t(), mpz_class(p).get_mpz_t());
        if (chi == -1) {
            QuadInt prime(rg, p, 0);
            int e = valuation(rem, prime);
            if (2 * e != e_norm)
                throw invariant_error("factor_element: inert valuation mismatch");
            if (e) out.factors.push_back({canonical_associate(prime), e, p * p});
            continue;
        }
        auto pi = solve_norm_equation(rg, p);
        if (!pi)
            throw invariant_error("factor_element: norm equation unsolvable for split prime");
        QuadInt pibar = canonical_associate(pi->conj());
        int e1 = valuation(rem, *pi);
        if (e1) out.factors.push_back({*pi, e1, p});
        if (!(pibar == *pi)) {
            int e2 = valuation(rem, pibar);
            if (e2) out.factors.push_back({pibar, e2, p});
        }
    }
    if (!rem.is_unit())
        throw invariant_error("factor_element: nonunit cofactor remained");
    out.unit = rem;
    // deterministic order: by residue norm, then prime coordinates
    std::sort(out.factors.begin(), out.factors.end(),
              [](const PrimePower& a, const PrimePower& b) {
                  int c = cmp(a.residue_norm, b.residue_norm);
                  if (c != 0) return c < 0;
                  return a.prime.lex_less(b.prime);
              });
    mpz_class check = 1;
    for (const auto& f : out.factors)
        for (int i = 0; i < f.exponent; ++i) check *= f.prime.norm();
    if (check != x.norm())
        throw invariant_error("factor_element: norm product mismatch");
    return out;
}

ResidueRing factor_modulus(const QuadInt& u) {
    if (u.is_zero()) throw usage_error("factor_modulus: zero modulus");
    if (u.is_unit()) throw usage_error("factor_modulus: unit modulus");
    return factor_element(u);
}

std::vector<QuadInt> divisors(const QuadInt& x) {
    ResidueRing f = factor_element(x);
    std::vector<QuadInt> out = {one(x.ring())};
    for (const auto& pp : f.factors) {
        std::vector<QuadInt> next;
        next.reserve(out.size() * (pp.exponent + 1));
        for (const QuadInt& d0 : out) {
            QuadInt acc = d0;
            next.push_back(acc);
            for (int k = 1; k <= pp.exponent; ++k) {
                acc = acc * pp.prime;
                next.push_back(acc);
            }
        }
        out = std::move(next);
    }
    for (QuadInt& d0 : out) d0 = canonical_associate(d0);
    return out;
}

mpz_class sl2_order(const ResidueRing& ring_data) {
    if (ring_data.factors.empty())
        throw usage_error("sl2_order: trivial modulus");
    mpz_class order = 1;
    for (const auto& f : ring_data.factors) {
        // N(P)^{3e-2} (N(P)^2 - 1)
        mpz_class npow = 1;
        for (int i = 0; i < 3 * f.exponent - 2; ++i) npow *= f.residue_norm;
        order *= npow * (f.residue_norm * f.residue_norm - 1);
    }
    return order;
}

ResidueMat reduce_mat(const Mat2& M, const QuadInt& u) {
    return reduce_mat(M, ResidueSystem(u));
}

ResidueMat reduce_mat(const Mat2& M, const ResidueSystem& rs) {
    return ResidueMat{rs.reduce(M.p()), rs.reduce(M.q()), rs.reduce(M.r()),
                      rs.reduce(M.s())};
}

CongruenceLevel make_level(const QuadInt& t, const QuadInt& u, const Discriminant& D) {
    const Ring rg = t.ring();
    PellSolution sol(t, u, D.value); // asserts the Pell equation
    if (u.is_unit() || u.is_zero())
        throw usage_error("make_level: modulus u must be a nonzero nonunit");

    const QuadInt two(rg, 2, 0);
    ResidueSystem rs(u);

    // tau = (t - beta u)/2 mod u, for any beta with D = beta^2 + 4 xi.
    auto tau_from = [&](const QuadInt& beta) {
        auto half = divide_exact(two, t - beta * u);
        if (!half)
            throw invariant_error("make_level: (t - beta u)/2 is not integral");
        return rs.reduce(*half);
    };

    QuadInt tau = tau_from(D.witness);

    // well-definedness: every residue-class witness and a shifted one agree
    const QuadInt four(rg, 4, 0);
    const QuadInt reps[4] = {QuadInt(rg, 0, 0), QuadInt(rg, 1, 0),
                             QuadInt(rg, 0, 1), QuadInt(rg, 1, 1)};
    for (const QuadInt& x : reps) {
        if (!divide_exact(four, D.value - x * x)) continue;
        if (!(tau_from(x) == tau) || !(tau_from(x + two) == tau))
            throw invariant_error("make_level: tau depends on the decomposition");
    }

    // 2 tau = t and tau^2 = 1 in O_d/uO_d
    if (!(rs.reduce(tau * two - t).is_zero()))
        throw invariant_error("make_level: 2 tau != t mod u");
    if (!(rs.reduce(tau * tau - one(rg)).is_zero()))
        throw invariant_error("make_level: tau^2 != 1 mod u");

    bool degenerate = rs.reduce(tau - one(rg)).is_zero();
    return CongruenceLevel{u, tau, t, u, D, degenerate};
}

const char* to_string(Membership m) {
    switch (m) {
        case Membership::Principal: return "principal";
        case Membership::TauCoset: return "tau-coset";
        case Membership::No: return "no";
    }
    return "?";
}

Membership member(const Mat2& M, const CongruenceLevel& level) {
    ResidueSystem rs(level.u);
    ResidueMat R = reduce_mat(M, rs);
    if (!R.q.is_zero() || !R.r.is_zero()) return Membership::No;
    QuadInt one_rep = rs.reduce(one(M.ring()));
    if (R.p == one_rep && R.s == one_rep) return Membership::Principal;
    if (R.p == level.tau && R.s == level.tau) return Membership::TauCoset;
    return Membership::No;
}

bool trace_congruence_check(const Mat2& M, const QuadInt& u) {
    ResidueSystem rs(u);
    ResidueMat R = reduce_mat(M, rs);
    QuadInt one_rep = rs.reduce(one(M.ring()));
    if (!R.q.is_zero() || !R.r.is_zero() || !(R.p == one_rep) || !(R.s == one_rep))
        throw usage_error("trace_congruence_check: matrix is not principal mod u");
    return divide_exact(u * u, M.trace() - QuadInt(M.ring(), 2, 0)).has_value();
}

LevelIndex level_index(const CongruenceLevel& level) {
    mpz_class full = sl2_order(factor_modulus(level.u));
    if (level.degenerate) return {full, true};
    return {full / 2, false};
}

namespace {

// Lift enumeration: all p in (c + u O_d) with norm(p) <= height.
std::vector<QuadInt> coset_lifts(const QuadInt& c, const QuadInt& u,
                                 const mpz_class& height) {
    const Ring rg = c.ring();
    mpz_class rad = isqrt_floor(c.norm()) + isqrt_floor(height) + 2;
    mpz_class ybound = rad * rad / u.norm() + 1;
    std::vector<QuadInt> out;
    for (const QuadInt& y : lattice_ball(rg, ybound)) {
        QuadInt cand = c + u * y;
        if (cand.norm() <= height) out.push_back(cand);
    }
    return out;
}

struct ExactDisplacement {
    // 4 cosh(ell) = ntr + sqrt(gap), both integers
    mpz_class ntr, gap;

    int compare(const ExactDisplacement& o) const {
        return cmp_int_plus_sqrt(ntr, gap, o.ntr, o.gap);
    }
    Real value() const { return to_real(ntr) + sqrt(to_real(gap)); }
};

ExactDisplacement displacement_key(const QuadInt& tr) {
    const Ring rg = tr.ring();
    QuadInt gap = tr * tr - QuadInt(rg, 4, 0);
    return {tr.norm(), gap.norm()};
}

enum class TraceKind { Loxodromic, Parabolic, Elliptic };

TraceKind classify_exact(const QuadInt& tr) {
    if (tr.b() != 0) return TraceKind::Loxodromic; // nonreal trace
    if (tr.a() == 2 || tr.a() == -2) return TraceKind::Parabolic;
    if (tr.a() > -2 && tr.a() < 2) return TraceKind::Elliptic;
    return TraceKind::Loxodromic;
}

struct SystoleAccumulator {
    unsigned long checked = 0, lox = 0, par = 0, ell = 0, violations = 0;
    std::optional<ExactDisplacement> min_key;
    std::vector<Mat2> min_witnesses;
    std::vector<Mat2> violation_witnesses;

    void take(const Mat2& M, const ExactDisplacement& ref) {
        ++checked;
        TraceKind kind = classify_exact(M.trace());
        if (kind == TraceKind::Parabolic) { ++par; return; }
        if (kind == TraceKind::Elliptic) { ++ell; return; }
        ++lox;
        ExactDisplacement key = displacement_key(M.trace());
        if (key.compare(ref) < 0) {
            ++violations;
            violation_witnesses.push_back(M);
        }
        if (!min_key || key.compare(*min_key) < 0) {
            min_key = key;
            min_witnesses.assign(1, M);
        } else if (key.compare(*min_key) == 0) {
            min_witnesses.push_back(M);
        }
    }

    void merge(const SystoleAccumulator& o) {
        checked += o.checked;
        lox += o.lox;
        par += o.par;
        ell += o.ell;
        violations += o.violations;
        violation_witnesses.insert(violation_witnesses.end(),
                                   o.violation_witnesses.begin(),
                                   o.violation_witnesses.end());
        if (o.min_key) {
            if (!min_key || o.min_key->compare(*min_key) < 0) {
                min_key = o.min_key;
                min_witnesses = o.min_witnesses;
            } else if (o.min_key->compare(*min_key) == 0) {
                min_witnesses.insert(min_witnesses.end(), o.min_witnesses.begin(),
                                     o.min_witnesses.end());
            }
        }
    }
};

} // namespace

SystoleCertificate systole_certificate(const CongruenceLevel& level, const QuadInt& t,
                                       const mpz_class& height, int workers) {
    const Ring rg = level.u.ring();
    if (height < 1) throw usage_error("systole_certificate: height must be >= 1");
    // 4 < |t| < (4/9)|u|^2, decided exactly on squared norms
    if (!(t.norm() > 16))
        throw usage_error("systole_certificate: |t| > 4 required");
    if (!(81 * t.norm() < 16 * level.u.norm() * level.u.norm()))
        throw usage_error("systole_certificate: |t| < (4/9)|u|^2 required");

    const ExactDisplacement ref = displacement_key(t);
    ResidueSystem rs(level.u);

    std::vector<QuadInt> coset_reps = {rs.reduce(one(rg))};
    if (!level.degenerate) coset_reps.push_back(level.tau);

    // elements of u O_d with norm <= height, for the off-diagonal entries
    std::vector<QuadInt> offdiag;
    for (const QuadInt& y : lattice_ball(rg, height / level.u.norm()))
        offdiag.push_back(level.u * y);

    struct Task {
        QuadInt p;
        const std::vector<QuadInt>* diag;
    };
    std::vector<std::vector<QuadInt>> diag_lists;
    std::vector<Task> tasks;
    for (const QuadInt& c : coset_reps)
        diag_lists.push_back(coset_lifts(c, level.u, height));
    for (size_t ci = 0; ci < coset_reps.size(); ++ci)
        for (const QuadInt& p : diag_lists[ci]) tasks.push_back({p, &diag_lists[ci]});

    auto run_range = [&](size_t lo, size_t hi, SystoleAccumulator& acc) {
        for (size_t i = lo; i < hi; ++i) {
            const QuadInt& p = tasks[i].p;
            for (const QuadInt& s : *tasks[i].diag) {
                QuadInt z = p * s - one(rg);
                if (z.is_zero()) {
                    // q r = 0: one off-diagonal entry free over u O_d
                    for (const QuadInt& r : offdiag)
                        acc.take(Mat2(p, zero(rg), r, s), ref);
                    for (const QuadInt& q : offdiag)
                        if (!q.is_zero()) acc.take(Mat2(p, q, zero(rg), s), ref);
                    continue;
                }
                mpz_class nz = z.norm();
                if (nz > height * height) continue; // q r too large to split
                for (const QuadInt& d0 : divisors(z)) {
                    for (const QuadInt& unit : units(rg)) {
                        QuadInt q = d0 * unit;
                        if (q.norm() > height) continue;
                        auto r = divide_exact(q, z);
                        if (!r || r->norm() > height) continue;
                        if (!divide_exact(level.u, q) || !divide_exact(level.u, *r))
                            continue;
                        acc.take(Mat2(p, q, *r, s), ref);
                    }
                }
            }
        }
    };

    SystoleAccumulator total;
    if (workers <= 1 || tasks.size() < 2) {
        run_range(0, tasks.size(), total);
    } else {
        size_t n = std::min<size_t>(workers, tasks.size());
        std::vector<SystoleAccumulator> accs(n);
        std::vector<std::thread> threads;
        size_t chunk = (tasks.size() + n - 1) / n;
        for (size_t k = 0; k < n; ++k) {
            size_t lo = k * chunk, hi = std::min(tasks.size(), lo + chunk);
            threads.emplace_back([&, lo, hi, k] { run_range(lo, hi, accs[k]); });
        }
        for (auto& th : threads) th.join();
        for (const auto& acc : accs) total.merge(acc);
    }

    SystoleCertificate cert{height, t};
    cert.members_checked = total.checked;
    cert.loxodromic = total.lox;
    cert.parabolic = total.par;
    cert.elliptic = total.ell;
    cert.violations = total.violations;
    cert.vacuous = total.lox == 0;
    if (total.min_key) {
        Real four_cosh = total.min_key->value();
        cert.min_ell = acosh(four_cosh / 4).convert_to<double>();
        cert.min_witness_count = total.min_witnesses.size();
        std::sort(total.min_witnesses.begin(), total.min_witnesses.end(),
                  [](const Mat2& a, const Mat2& b) { return a.lex_less(b); });
        if (total.min_witnesses.size() > 256)
            total.min_witnesses.erase(total.min_witnesses.begin() + 256,
                                      total.min_witnesses.end());
        cert.min_witnesses = std::move(total.min_witnesses);
    }
    std::sort(total.violation_witnesses.begin(), total.violation_witnesses.end(),
              [](const Mat2& a, const Mat2& b) { return a.lex_less(b); });
    cert.violation_witnesses = std::move(total.violation_witnesses);
    return cert;
}

namespace {

// All real values c + lambda, lambda in mu O_d, lying in (-2, 2).
std::vector<QuadInt> real_residue_candidates(const QuadInt& c, const QuadInt& mu) {
    const Ring rg = c.ring();
    mpz_class rad = isqrt_floor(c.norm()) + 3;
    mpz_class ybound = rad * rad / mu.norm() + 1;
    std::vector<QuadInt> out;
    for (const QuadInt& y : lattice_ball(rg, ybound)) {
        QuadInt cand = c + mu * y;
        if (cand.b() != 0) continue;         // not real
        if (cand.norm() >= 4) continue;      // |x| >= 2
        out.push_back(cand);
    }
    std::sort(out.begin(), out.end(),
              [](const QuadInt& a, const QuadInt& b) { return a.lex_less(b); });
    return out;
}

} // namespace

TorsionReport torsion_scan(const CongruenceLevel& level) {
    const Ring rg = level.u.ring();
    const QuadInt two(rg, 2, 0);
    const QuadInt usq = level.u * level.u;

    TorsionReport report;
    report.principal_candidates = real_residue_candidates(two, usq);

    // Coset traces are congruent to the source t mod u^2 provided the coset
    // contains the inducing automorphism-type matrix; rebuild it and check.
    report.strong_coset_constraint = false;
    if (!level.degenerate) {
        const QuadInt& beta = level.source_D.witness;
        auto xi = divide_exact(QuadInt(rg, 4, 0),
                               level.source_D.value - beta * beta);
        if (xi) {
            auto th1 = divide_exact(two, level.source_t - beta * level.source_u);
            auto th2 = divide_exact(two, level.source_t + beta * level.source_u);
            if (th1 && th2) {
                Mat2 A(*th1, *xi * level.source_u, level.source_u, *th2);
                if (member(A, level) == Membership::TauCoset)
                    report.strong_coset_constraint = true;
            }
        }
    }
    if (level.degenerate) {
        report.coset_candidates.clear();
    } else if (report.strong_coset_constraint) {
        report.coset_candidates = real_residue_candidates(level.source_t, usq);
    } else {
        // weak fallback: traces in the coset are 2 tau mod u
        report.coset_candidates = real_residue_candidates(level.tau * two, level.u);
    }

    report.certified = level.u.norm() > 1 && report.principal_candidates.empty() &&
                       report.coset_candidates.empty();
    return report;
}

namespace {

using MatKey = std::array<mpz_class, 8>;

MatKey key_of(const Mat2& M) {
    return {M.p().a(), M.p().b(), M.q().a(), M.q().b(),
            M.r().a(), M.r().b(), M.s().a(), M.s().b()};
}

// canonical sign: conjugation by W and -W agree
Mat2 sign_canonical(const Mat2& M) {
    Mat2 neg = -M;
    return M.lex_less(neg) ? neg : M;
}

} // namespace

std::optional<Mat2> conjugating_witness(const Mat2& A, const Mat2& B, int depth) {
    if (depth < 0) throw usage_error("conjugating_witness: negative depth");
    const Ring rg = A.ring();
    Mat2 id = Mat2::identity(rg);
    if (A * id == id * B) return id; // A == B
    std::set<MatKey> seen;
    std::vector<Mat2> frontier = {id};
    seen.insert(key_of(id));
    const auto gens = sl2_generators(rg);
    for (int level = 0; level < depth; ++level) {
        std::vector<Mat2> next;
        for (const Mat2& W : frontier) {
            for (const Mat2& g : gens) {
                Mat2 Wg = sign_canonical(g * W);
                if (!seen.insert(key_of(Wg)).second) continue;
                if (Wg * A * Wg.inverse() == B) return Wg;
                next.push_back(Wg);
            }
        }
        frontier = std::move(next);
        if (frontier.empty()) break;
    }
    return std::nullopt;
}

} // namespace kiss3
