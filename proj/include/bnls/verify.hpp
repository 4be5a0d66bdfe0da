#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "bnls/constants.hpp"
#include "bnls/solvers.hpp"
#include "json.hpp"

namespace bnls {

/// Tolerance tiers: pure algebra, single-solve identities, identities that
/// compose a solve with a closed form, and comparisons across two solves.
struct TolProfile {
    double algebraic = 1e-10;
    double numeric = 1e-6;
    double cross = 1e-4;
    double route = 1e-3;
};

struct Check {
    std::string name;
    std::string anchor;
    double measured = 0.0;
    double tolerance = 0.0;
    bool pass = false;
    bool skipped = false;
    std::string note;
};

struct VerificationReport {
    std::vector<Check> checks;
    std::vector<std::string> inputs;  ///< provenance hashes of the fields checked

    /// Records |measured| <= tolerance (NaN fails).
    Check& add(std::string name, std::string anchor, double measured, double tolerance, std::string note = {});
    Check& skip(std::string name, std::string anchor, std::string note);
    void merge(const VerificationReport& other);

    std::size_t passed() const;
    std::size_t failed() const;
    std::size_t skipped() const;
    bool ok() const { return failed() == 0; }
    /// First failing check, or nullptr.
    const Check* first_failure() const;
    const Check* find(const std::string& anchor) const;
};

/// Hex FNV-1a hash of the field's binary encoding.
std::string field_hash(const Field& u);

/// Identities of the critical-mass ground state built from the Weinstein
/// minimizer. The PDE residual is checked first and recomputed from the field.
/// Throws PreconditionError for an unconverged input.
VerificationReport verify_Q(const GroundState& gs, const ConstantsReport& cr, const TolProfile& tol = {});

/// Energy ground state at the critical mass vs action ground state at
/// omega(eps). Throws PreconditionError when (N, p, eps) differ.
VerificationReport verify_equivalence(const GroundState& gs_energy, const GroundState& gs_action, double c_eps,
                                      const TolProfile& tol = {});

/// Inequality direction for the given fields: C * W_p(u) >= 1 - tol,
/// gn_k_quotient(u) <= K (1 + tol), and the Holder interpolation bound.
/// Fields with a vanishing gradient, bilaplacian or L^p integral are skipped.
VerificationReport verify_gn_samples(const Params& params, double C, double K, std::span<const Field> samples,
                                     double tol = 1e-6);

/// verify_gn_samples over n seeded random localized fields on `grid`.
VerificationReport verify_gn_random(const Params& params, double C, double K, const BoxGrid& grid, int n_samples,
                                    std::uint64_t seed, double tol = 1e-6);

/// Pure NormTuple algebra on random inputs: g-functions, the fiber gap
/// decomposition and maximality on tuples with zero Nehari and Pohozaev
/// residuals, the fiber-slope combination, the energy factorization, the
/// invariance of W_p, and the closed-form round trips.
VerificationReport verify_algebra(std::uint64_t seed, int n_samples = 1000, double tol = 1e-12);

/// Mass flow at c = 2 c_eps: strictly negative energy, monotone descent, and
/// the Nehari and Pohozaev identities of the limit.
VerificationReport verify_supercritical(const Params& params, double c_eps, const BoxGrid& grid,
                                        const SolverConfig& config, const TolProfile& tol = {});

/// Every anchor the full default suite is expected to report.
const std::vector<std::string>& required_anchors();
/// Anchors of `required_anchors()` absent from the report.
std::vector<std::string> missing_anchors(const VerificationReport& r);

nlohmann::json to_json(const VerificationReport& r);
std::string to_table(const VerificationReport& r);

}  // namespace bnls
