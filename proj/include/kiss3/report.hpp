#pragma once

#include <json.hpp>

#include <optional>
#include <string>
#include <vector>

#include "kiss3/forms.hpp"

namespace kiss3 {

struct Budgets {
    mpz_class pell_bound = 10000; // norm bound for the fundamental-unit search
    mpz_class a_bound = 2;        // norm bound on leading form coefficients
    int equiv_depth = 4;          // word length for equivalence search
    int m_cap = 12;               // power-sequence cap for the m index
    int conj_depth = 4;           // word length for conjugacy search
    mpz_class scan_bound = 60;    // norm bound when scanning discriminants
    int workers = 1;
};

/**
 * Full pipeline output for one (d, D): fundamental unit, m index, level
 * data, class-number estimate and the resulting kissing lower bound. A
 * field left empty means the corresponding budget ran out; values are
 * never guessed.
 */
struct KissReport {
    int d;
    QuadInt D;
    Budgets budgets;

    std::optional<FundamentalUnit> fundamental;
    std::optional<int> m;
    bool small_regime = false; // m <= 2
    std::optional<QuadInt> t_m, u_m;
    std::optional<QuadInt> tau;
    std::optional<mpz_class> group_order;   // [SL2(O_d) : level group]
    std::optional<long> stabilizer_order;   // 2(m+1)
    std::optional<ClassNumberEstimate> h_estimate;

    // h * |G| / (2(m+1)); conditional on the heuristic h estimate
    std::optional<mpz_class> kiss_lower;
    // same bound restricted to representatives whose level membership and
    // pairwise nonconjugacy were verified
    std::optional<mpz_class> kiss_lower_certified;
    long verified_classes = 0;
    bool divisibility_exact = true; // false when the division needed a floor

    std::optional<double> systole;
    std::optional<double> orbifold_volume;
    std::optional<double> manifold_volume;
    std::optional<double> diagnostic_exponent; // kiss log(vol) / vol^{31/27}
    bool eq_index_cube_ok = true;              // 2|G| <= N(u_m)^3, exact
    std::vector<std::string> notes;
};

KissReport kiss_lower_bound(int d, const QuadInt& D, const Budgets& budgets);

struct VolumeConstant {
    int d;
    long disc;
    double value;
    double zeta2;  // zeta(2)
    double lvalue; // L(2, chi_disc)
    std::string formula;
};

// Humbert's closed form |disc|^{3/2} zeta_k(2) / (4 pi^2) for the volume of
// the Bianchi orbifold; recorded inputs make the number auditable.
VolumeConstant orbifold_volume(int d);

struct GrowthDiagnostic {
    double ratio;        // kiss_lower * log(vol) / vol^{31/27}
    double u_norm_ratio; // N(u_m) / vol^{1/3}
    bool index_cube_ok;
};

std::optional<GrowthDiagnostic> growth_diagnostic(const KissReport& r);

// integral of dt/log t from 2 to x, adaptive Simpson quadrature
double logarithmic_integral(double x);

struct AverageEntry {
    QuadInt D;
    double eps_abs;
    long h_estimate;
};

struct AverageTable {
    int d;
    double x;
    Budgets budgets;
    long discriminants_scanned = 0;
    std::vector<AverageEntry> found; // certified |eps_D| <= x only
    double empirical_mean = 0;
    double c_d = 0;
    bool c_d_supplied = false;
    double model_value = 0; // Li(x^4) / (c_d x^2)
    std::vector<std::string> caveats;
};

// Exploratory only: budget-limited h values over a budget-limited
// discriminant set; the table is qualitative by construction.
AverageTable sarnak_average(int d, double x, const Budgets& budgets,
                            std::optional<double> c_d_supplied = std::nullopt);

// JSON encodings used by the CLI. Key order is deterministic.
nlohmann::json to_json(const QuadInt& x);
nlohmann::json to_json(const Mat2& m);
nlohmann::json to_json(const FundamentalUnit& f);
nlohmann::json to_json(const ClassNumberEstimate& est);
nlohmann::json to_json(const SystoleCertificate& cert);
nlohmann::json to_json(const TorsionReport& rep);
nlohmann::json to_json(const CongruenceLevel& level);
nlohmann::json to_json(const VolumeConstant& vol);
nlohmann::json to_json(const KissReport& r);
nlohmann::json to_json(const AverageTable& table);

} // namespace kiss3
