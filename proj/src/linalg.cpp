#include "panelfc/linalg.hpp"

namespace panelfc {

LstsqResult lstsq(const arma::mat& A, const arma::vec& b, double rtol) {
  arma::mat Q, R;
  arma::uvec piv;
  if (!arma::qr(Q, R, piv, A, "vector")) {
    throw SingularError("lstsq: QR decomposition failed");
  }
  const arma::uword k = A.n_cols;
  arma::vec rdiag = arma::abs(R.submat(0, 0, k - 1, k - 1).diag());
  const double rmax = rdiag.max();

  LstsqResult out;
  if (rmax <= 0.0 || rdiag.min() < rtol * rmax) {
    out.coef = arma::pinv(A) * b;
    out.pinv_fallback = true;
    return out;
  }
  arma::vec z = arma::solve(arma::trimatu(R.rows(0, k - 1)), Q.cols(0, k - 1).t() * b);
  out.coef.set_size(k);
  for (arma::uword j = 0; j < k; ++j) out.coef(piv(j)) = z(j);
  return out;
}

arma::vec solve_spd(const arma::mat& S, const arma::vec& b, double rtol) {
  if (is_rank_deficient_sym(S, rtol)) {
    throw SingularError("solve_spd: matrix rank deficient beyond tolerance");
  }
  return arma::solve(S, b, arma::solve_opts::likely_sympd);
}

arma::mat inv_spd(const arma::mat& S, double rtol) {
  if (is_rank_deficient_sym(S, rtol)) {
    throw SingularError("inv_spd: matrix rank deficient beyond tolerance");
  }
  return arma::inv_sympd(arma::symmatu(S));
}

bool is_rank_deficient_sym(const arma::mat& S, double rtol) {
  if (S.n_rows == 0) return false;
  arma::vec ev;
  if (!arma::eig_sym(ev, arma::symmatu(S))) return true;
  const double emax = ev.max();
  if (!(emax > 0.0)) return true;
  return ev.min() < rtol * emax;
}

}  // namespace panelfc
