#include "kiss3/ring.hpp"

#include <algorithm>
#include <cctype>
#include <map>

namespace kiss3 {

namespace {

bool is_valid_d(int d) {
    return std::find(kClassNumberOne.begin(), kClassNumberOne.end(), d) !=
           kClassNumberOne.end();
}

bool is_euclidean_d(int d) {
    return d == 1 || d == 2 || d == 3 || d == 7 || d == 11;
}

} // namespace

Ring::Ring(int d) : d_(d) {
    if (!is_valid_d(d))
        throw usage_error("d must be one of {1,2,3,7,11,19,43,67,163}, got " +
                          std::to_string(d));
    half_ = (d % 4 == 3);
    euclidean_ = is_euclidean_d(d);
    disc_ = half_ ? -static_cast<long>(d) : -4L * d;
    units_ = (d == 1) ? 4 : (d == 3) ? 6 : 2;
}

QuadInt::QuadInt(const Ring& ring, mpz_class a, mpz_class b)
    : d_(ring.d()), a_(std::move(a)), b_(std::move(b)) {}

QuadInt::QuadInt(const Ring& ring, long a, long b)
    : d_(ring.d()), a_(a), b_(b) {}

void QuadInt::check_same_ring(const QuadInt& o) const {
    if (d_ != o.d_)
        throw usage_error("QuadInt operands from different rings (d=" +
                          std::to_string(d_) + " vs d=" + std::to_string(o.d_) + ")");
}

QuadInt QuadInt::operator+(const QuadInt& o) const {
    check_same_ring(o);
    return QuadInt(ring(), a_ + o.a_, b_ + o.b_);
}

QuadInt QuadInt::operator-(const QuadInt& o) const {
    check_same_ring(o);
    return QuadInt(ring(), a_ - o.a_, b_ - o.b_);
}

QuadInt QuadInt::operator*(const QuadInt& o) const {
    check_same_ring(o);
    const Ring rg = ring();
    mpz_class cross = a_ * o.b_ + b_ * o.a_;
    mpz_class bb = b_ * o.b_;
    if (rg.half_basis()) {
        // w^2 = w - (1+d)/4
        mpz_class c = (1 + mpz_class(d_)) / 4;
        return QuadInt(rg, a_ * o.a_ - c * bb, cross + bb);
    }
    // w^2 = -d
    return QuadInt(rg, a_ * o.a_ - d_ * bb, cross);
}

QuadInt QuadInt::operator-() const { return QuadInt(ring(), -a_, -b_); }

QuadInt QuadInt::operator*(const mpz_class& k) const {
    return QuadInt(ring(), a_ * k, b_ * k);
}

QuadInt QuadInt::conj() const {
    if (ring().half_basis()) return QuadInt(ring(), a_ + b_, -b_);
    return QuadInt(ring(), a_, -b_);
}

mpz_class QuadInt::norm() const {
    if (ring().half_basis()) {
        mpz_class c = (1 + mpz_class(d_)) / 4;
        return a_ * a_ + a_ * b_ + c * b_ * b_;
    }
    return a_ * a_ + d_ * b_ * b_;
}

mpz_class QuadInt::trace() const {
    if (ring().half_basis()) return 2 * a_ + b_;
    return 2 * a_;
}

bool QuadInt::operator==(const QuadInt& o) const {
    return d_ == o.d_ && a_ == o.a_ && b_ == o.b_;
}

bool QuadInt::lex_less(const QuadInt& o) const {
    int c = cmp(a_, o.a_);
    if (c != 0) return c < 0;
    return cmp(b_, o.b_) < 0;
}

std::string QuadInt::str() const {
    if (b_ == 0) return a_.get_str();
    std::string wpart = (b_ == 1)    ? "w"
                        : (b_ == -1) ? "-w"
                                     : b_.get_str() + "*w";
    if (a_ == 0) return wpart;
    if (b_ > 0) return a_.get_str() + "+" + wpart;
    return a_.get_str() + wpart; // sign carried by b
}

QuadInt QuadInt::parse(const Ring& ring, const std::string& text) {
    std::string s;
    for (char ch : text)
        if (!std::isspace(static_cast<unsigned char>(ch))) s.push_back(ch);
    if (s.empty()) throw usage_error("empty quadratic integer literal");

    mpz_class a = 0, b = 0;
    size_t i = 0;
    while (i < s.size()) {
        int sign = 1;
        if (s[i] == '+' || s[i] == '-') {
            sign = (s[i] == '-') ? -1 : 1;
            ++i;
        }
        size_t start = i;
        while (i < s.size() && std::isdigit(static_cast<unsigned char>(s[i]))) ++i;
        std::string digits = s.substr(start, i - start);
        bool has_w = false;
        if (i < s.size() && s[i] == '*') {
            if (i + 1 >= s.size() || s[i + 1] != 'w')
                throw usage_error("bad quadratic integer literal: " + text);
            has_w = true;
            i += 2;
        } else if (i < s.size() && s[i] == 'w') {
            has_w = true;
            ++i;
        }
        if (digits.empty() && !has_w)
            throw usage_error("bad quadratic integer literal: " + text);
        mpz_class v = digits.empty() ? mpz_class(1) : mpz_class(digits);
        if (sign < 0) v = -v;
        if (has_w)
            b += v;
        else
            a += v;
        if (i < s.size() && s[i] != '+' && s[i] != '-')
            throw usage_error("bad quadratic integer literal: " + text);
    }
    return QuadInt(ring, a, b);
}

QuadInt zero(const Ring& ring) { return QuadInt(ring, 0, 0); }
QuadInt one(const Ring& ring) { return QuadInt(ring, 1, 0); }
QuadInt omega(const Ring& ring) { return QuadInt(ring, 0, 1); }

const std::vector<QuadInt>& units(const Ring& ring) {
    static std::map<int, std::vector<QuadInt>> cache;
    auto it = cache.find(ring.d());
    if (it != cache.end()) return it->second;
    std::vector<QuadInt> us;
    us.push_back(one(ring));
    us.push_back(-one(ring));
    if (ring.d() == 1) {
        us.push_back(omega(ring));
        us.push_back(-omega(ring));
    } else if (ring.d() == 3) {
        // sixth roots of unity
        us.push_back(omega(ring));
        us.push_back(-omega(ring));
        us.push_back(QuadInt(ring, -1, 1));
        us.push_back(QuadInt(ring, 1, -1));
    }
    return cache.emplace(ring.d(), std::move(us)).first->second;
}

QuadInt canonical_associate(const QuadInt& x) {
    QuadInt best = x;
    for (const QuadInt& u : units(x.ring())) {
        QuadInt cand = x * u;
        if (best.lex_less(cand)) best = cand;
    }
    return best;
}

std::optional<QuadInt> sqrt_exact(const QuadInt& z) {
    const Ring rg = z.ring();
    if (z.is_zero()) return zero(rg);

    // If w^2 = z then norm(w)^2 = norm(z) and trace(w)^2 = trace(z) + 2 norm(w).
    auto s_opt = isqrt_exact(z.norm());
    if (!s_opt) return std::nullopt;
    const mpz_class s = *s_opt;
    mpz_class t2 = z.trace() + 2 * s;
    auto T_opt = isqrt_exact(t2);
    if (!T_opt) return std::nullopt;
    const mpz_class T = *T_opt;

    std::vector<QuadInt> candidates;
    auto push_pair = [&](const mpz_class& a, const mpz_class& b) {
        candidates.emplace_back(rg, a, b);
        candidates.emplace_back(rg, -a, -b);
    };
    if (rg.half_basis()) {
        // trace = 2a + b, 4 norm - trace^2 = d b^2
        mpz_class num = 4 * s - T * T;
        if (num < 0) return std::nullopt;
        if (!mpz_divisible_ui_p(num.get_mpz_t(), static_cast<unsigned long>(rg.d())))
            return std::nullopt;
        auto beta_opt = isqrt_exact(num / rg.d());
        if (!beta_opt) return std::nullopt;
        for (int sgn : {1, -1}) {
            mpz_class beta = sgn * *beta_opt;
            mpz_class twice_a = T - beta;
            if (!mpz_divisible_ui_p(twice_a.get_mpz_t(), 2)) continue;
            push_pair(twice_a / 2, beta);
        }
    } else {
        // trace = 2a, norm = a^2 + d b^2
        if (!mpz_divisible_ui_p(T.get_mpz_t(), 2)) return std::nullopt;
        mpz_class alpha = T / 2;
        mpz_class num = s - alpha * alpha;
        if (num < 0) return std::nullopt;
        if (!mpz_divisible_ui_p(num.get_mpz_t(), static_cast<unsigned long>(rg.d())))
            return std::nullopt;
        auto beta_opt = isqrt_exact(num / rg.d());
        if (!beta_opt) return std::nullopt;
        push_pair(alpha, *beta_opt);
        push_pair(alpha, -*beta_opt);
    }

    std::optional<QuadInt> best;
    for (const QuadInt& w : candidates) {
        if (!(w * w == z)) continue;
        if (!best || best->lex_less(w)) best = w;
    }
    return best;
}

std::optional<QuadInt> divide_exact(const QuadInt& x, const QuadInt& y) {
    if (x.is_zero()) throw usage_error("divide_exact: zero divisor");
    if (x.d() != y.d()) throw usage_error("divide_exact: ring mismatch");
    QuadInt num = y * x.conj();
    mpz_class n = x.norm();
    if (!mpz_divisible_p(num.a().get_mpz_t(), n.get_mpz_t())) return std::nullopt;
    if (!mpz_divisible_p(num.b().get_mpz_t(), n.get_mpz_t())) return std::nullopt;
    return QuadInt(x.ring(), num.a() / n, num.b() / n);
}

QuadInt gcd_euclidean(QuadInt x, QuadInt y) {
    const Ring rg = x.ring();
    if (rg != y.ring()) throw usage_error("gcd: ring mismatch");
    if (!rg.euclidean())
        throw unsupported_error("gcd is implemented only for Euclidean d in {1,2,3,7,11}");
    while (!y.is_zero()) {
        QuadInt num = x * y.conj();
        mpz_class n = y.norm();
        // Coordinate rounding alone is not norm-minimizing in the half-basis
        // rings, so scan the 3x3 neighborhood of the rounded quotient.
        mpz_class qa = round_div(num.a(), n), qb = round_div(num.b(), n);
        QuadInt r = x;
        bool first = true;
        for (long da = -1; da <= 1; ++da) {
            for (long db = -1; db <= 1; ++db) {
                QuadInt cand = x - QuadInt(rg, qa + da, qb + db) * y;
                if (first || cand.norm() < r.norm()) { r = cand; first = false; }
            }
        }
        if (r.norm() >= n)
            throw invariant_error("euclidean division failed to reduce the norm");
        x = y;
        y = r;
    }
    return x;
}

QuadInt content(const std::vector<QuadInt>& xs) {
    if (xs.empty()) throw usage_error("content: empty input");
    const Ring rg = xs.front().ring();
    if (!rg.euclidean())
        throw unsupported_error("content is implemented only for Euclidean d in {1,2,3,7,11}");
    QuadInt g = zero(rg);
    for (const QuadInt& x : xs) {
        if (x.d() != rg.d()) throw usage_error("content: ring mismatch");
        g = g.is_zero() ? x : gcd_euclidean(g, x);
    }
    if (g.is_zero()) throw usage_error("content: all inputs are zero");
    return canonical_associate(g);
}

std::vector<QuadInt> lattice_ball(const Ring& ring, const mpz_class& bound) {
    std::vector<QuadInt> out;
    if (bound < 0) return out;
    if (!bound.fits_slong_p())
        throw unsupported_error("lattice_ball bound too large");
    const long B = bound.get_si();
    const long d = ring.d();

    if (ring.half_basis()) {
        // 4 norm = (2a+b)^2 + d b^2
        const long bmax = mpz_class(isqrt_floor(mpz_class(4 * mpz_class(B) / d))).get_si();
        for (long b = -bmax; b <= bmax; ++b) {
            mpz_class rem = 4 * mpz_class(B) - d * mpz_class(b) * b;
            if (rem < 0) continue;
            long srem = mpz_class(isqrt_floor(rem)).get_si();
            // -srem <= 2a + b <= srem
            long lo = -srem - b, hi = srem - b;
            long alo = (lo >= 0) ? (lo + 1) / 2 : -((-lo) / 2);
            long ahi = (hi >= 0) ? hi / 2 : -((-hi + 1) / 2);
            for (long a = alo; a <= ahi; ++a) {
                QuadInt x(ring, a, b);
                if (x.norm() <= B) out.push_back(x);
            }
        }
    } else {
        const long bmax = mpz_class(isqrt_floor(mpz_class(B) / d)).get_si();
        for (long b = -bmax; b <= bmax; ++b) {
            mpz_class rem = mpz_class(B) - d * mpz_class(b) * b;
            if (rem < 0) continue;
            long amax = mpz_class(isqrt_floor(rem)).get_si();
            for (long a = -amax; a <= amax; ++a) out.emplace_back(ring, a, b);
        }
    }
    std::vector<std::pair<mpz_class, size_t>> keys;
    keys.reserve(out.size());
    for (size_t i = 0; i < out.size(); ++i) keys.emplace_back(out[i].norm(), i);
    std::sort(keys.begin(), keys.end(),
              [&](const auto& x, const auto& y) {
                  int c = cmp(x.first, y.first);
                  if (c != 0) return c < 0;
                  return out[x.second].lex_less(out[y.second]);
              });
    std::vector<QuadInt> sorted;
    sorted.reserve(out.size());
    for (const auto& k : keys) sorted.push_back(out[k.second]);
    return sorted;
}

Cplx to_complex(const QuadInt& x) {
    const Ring rg = x.ring();
    Real sd = sqrt(Real(rg.d()));
    Real ra = to_real(x.a());
    Real rb = to_real(x.b());
    if (rg.half_basis()) return {ra + rb / 2, rb * sd / 2};
    return {ra, rb * sd};
}

} // namespace kiss3
