#pragma once

#include <armadillo>
#include <stdexcept>

namespace panelfc {

// Thrown when a moment or design matrix is rank deficient beyond tolerance.
class SingularError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct LstsqResult {
  arma::vec coef;
  bool pinv_fallback = false;  // set when the pivoted QR flagged rank deficiency
};

// Least squares via column-pivoted QR. Units flagged as near singular
// (|r_jj| < rtol * max|r_ii|) are re-solved with the pseudo-inverse.
LstsqResult lstsq(const arma::mat& A, const arma::vec& b, double rtol = 1e-10);

// Solve S x = b for symmetric positive definite S; throws SingularError when
// S is rank deficient beyond rtol (relative smallest eigenvalue).
arma::vec solve_spd(const arma::mat& S, const arma::vec& b, double rtol = 1e-10);
arma::mat inv_spd(const arma::mat& S, double rtol = 1e-10);

// Relative rank check on a symmetric PSD matrix: min eigenvalue below
// rtol * max eigenvalue counts as deficient.
bool is_rank_deficient_sym(const arma::mat& S, double rtol = 1e-10);

}  // namespace panelfc
