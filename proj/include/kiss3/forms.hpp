#pragma once

#include <optional>
#include <string>
#include <vector>

#include "kiss3/congruence.hpp"
#include "kiss3/pell.hpp"
#include "kiss3/ring.hpp"

namespace kiss3 {

/**
 * Binary quadratic form a x^2 + b xy + c y^2 over O_d with cached
 * discriminant b^2 - 4ac. Primitivity is known exactly for Euclidean d
 * and left undetermined otherwise.
 */
class QuadForm {
public:
    QuadForm(QuadInt a, QuadInt b, QuadInt c);

    const QuadInt& a() const { return a_; }
    const QuadInt& b() const { return b_; }
    const QuadInt& c() const { return c_; }
    const QuadInt& disc() const { return disc_; }
    Ring ring() const { return a_.ring(); }
    std::optional<bool> primitive() const { return primitive_; }

    bool operator==(const QuadForm& o) const {
        return a_ == o.a_ && b_ == o.b_ && c_ == o.c_;
    }
    bool operator!=(const QuadForm& o) const { return !(*this == o); }
    bool lex_less(const QuadForm& o) const;
    std::string str() const;

private:
    QuadInt a_, b_, c_, disc_;
    std::optional<bool> primitive_;
};

// Linear substitution (x, y) -> (px + qy, rx + sy) for M = [[p,q],[r,s]].
// Discriminant and primitivity are preserved.
QuadForm act(const Mat2& M, const QuadForm& Q);

// Generator of the automorphism group of Q attached to a Pell solution of
// disc(Q): [[(t - bu)/2, -cu], [au, (t + bu)/2]]; trace t, determinant 1.
Mat2 automorph(const QuadForm& Q, const PellSolution& s);

struct EquivWitness {
    Mat2 M; // act(M, from) = to, det 1
    QuadForm from, to;
};

enum class EquivOutcome { Found, Unknown, No };

struct EquivResult {
    EquivOutcome outcome;
    std::optional<EquivWitness> witness;
};

// Breadth-first word search over the elementary generators S, T_1, T_w and
// inverses, up to the given word length. No is definitive (discriminants
// differ); Unknown is exhaustion, not nonequivalence.
EquivResult equivalent(const QuadForm& Q1, const QuadForm& Q2, int depth);

// All primitive forms with 1 <= norm(a) <= a_norm_bound and b running over
// norm-minimal representatives of O_d / 2a O_d, whenever c = (b^2 - D)/(4a)
// is integral. Deterministic order; prefix-closed as the bound grows.
std::vector<QuadForm> enumerate_forms(const Discriminant& D,
                                      const mpz_class& a_norm_bound);

enum class EstimateStatus { LowerBoundCertified, HeuristicEstimate };

const char* to_string(EstimateStatus s);

struct ClassNumberEstimate {
    Discriminant D;
    long classes_found = 0;
    long merged_by_depth = 0;
    mpz_class a_norm_bound;
    int equiv_depth = 0;
    EstimateStatus status = EstimateStatus::HeuristicEstimate;
    // the bounded search can both miss classes (a-bound) and fail to merge
    // (depth); only classes_found >= this many is certified
    long certified_minimum = 0;
    std::vector<QuadForm> representatives;
};

// Partitions enumerate_forms output by bounded equivalence search, merging
// additionally when the automorph generators are detected conjugate.
ClassNumberEstimate class_number_estimate(const Discriminant& D,
                                          const mpz_class& a_norm_bound,
                                          int equiv_depth);

struct CorrespondenceReport {
    int pairs_checked = 0;
    int equivalences_found = 0;
    // equivalence witness M failed the identity automorph(act(M,Q)) =
    // M^-1 automorph(Q) M
    int conjugation_mismatches = 0;
    // forms not merged by the search whose automorphs are conjugate anyway
    int missed_equivalences = 0;
    bool traces_match = true; // every automorph has trace s.t
};

CorrespondenceReport correspondence_check(const std::vector<QuadForm>& forms,
                                          const PellSolution& s, int depth);

} // namespace kiss3
