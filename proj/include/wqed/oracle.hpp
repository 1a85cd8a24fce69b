#ifndef WQED_ORACLE_HPP
#define WQED_ORACLE_HPP

#include <string>
#include <utility>
#include <vector>

#include "wqed/model.hpp"
#include "wqed/params.hpp"

namespace wqed {

// The stationary scattering conditions written out as a dense complex
// linear system A x = b. n is 3 (bare) or 5 (cavity).
struct ComplexMatrixSystem {
    int n = 0;
    std::vector<cplx> A;  // row-major, n*n
    std::vector<cplx> b;  // length n
    std::vector<std::string> unknown_labels;

    cplx& at(int i, int j) { return A[static_cast<std::size_t>(i) * n + j]; }
    const cplx& at(int i, int j) const {
        return A[static_cast<std::size_t>(i) * n + j];
    }
};

struct SolveDiagnostics {
    double residual_norm = 0.0;       // max |A x - b| component
    double pivot_min = 0.0;           // smallest pivot magnitude used
    double condition_estimate = 0.0;  // max pivot / min pivot
};

// Bare case, unknowns (t, r, e_q).
ComplexMatrixSystem build_bare_system(const BareParams& p);

// Cavity case, unknowns (t, r, e_q, e_a, e_b).
ComplexMatrixSystem build_cavity_system(const CavityParams& p);

// Gaussian elimination with partial pivoting. Throws SingularSystem when a
// pivot magnitude falls below 1e-14 x the pivot row scale.
std::vector<cplx> solve_dense(const ComplexMatrixSystem& sys,
                              SolveDiagnostics* diag = nullptr);

// Solve and map the unknowns back into a ScatterSolution.
std::pair<ScatterSolution, SolveDiagnostics> solve(const ComplexMatrixSystem& sys);

// Oracle-equivalence run: compares closed-form amplitudes against the
// linear-system solutions over deterministic pseudo-random physical draws
// (half bare, half cavity). The deviation for one draw is
// max_i |closed_i - oracle_i| / max_i |oracle_i|.
struct VerifyResult {
    int draws = 0;
    double max_rel_deviation = 0.0;
    double max_residual_norm = 0.0;
};

// Closed forms and oracle must agree to this relative deviation.
inline constexpr double kOracleAgreementTol = 1e-10;

VerifyResult verify_closed_forms(int draws);

} // namespace wqed

#endif // WQED_ORACLE_HPP
