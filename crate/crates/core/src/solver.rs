//! Closed-form solution of the zero-cost claim selection problem.
//!
//! The hedger maximizes the concave quadratic
//!
//! ```text
//!     (d + 2 a c)' x - a x' M x            over x = [x_p; x_w]
//! ```
//!
//! subject to the two zero-cost constraints `b_p' x_p = 0` and
//! `b_w' x_w = 0` (stacked as `B' x = 0`). The first-order conditions are
//!
//! ```text
//!     2 a M x + B lambda = 2 a c + d,      B' x = 0,
//! ```
//!
//! and multiplying from the left by the block indicator vectors shows both
//! multipliers equal 1: indicators are null directions of M, probabilities
//! sum to one, and the c blocks sum to zero. Substituting the multipliers
//! back makes one FOC row per block redundant, so dropping the final price
//! row and the final weather row and appending the two cost rows leaves a
//! square, generically nonsingular system:
//!
//! ```text
//!     [M_hat; B'] x = [c_hat + (d_hat - b_hat) / (2a); 0]
//! ```
//!
//! Linearity in 1/(2a) splits every solution into two funds,
//! `x(a) = x_inf + x_o / (2a)`: the risk-minimizing claim `x_inf` (right-hand
//! side `[c_hat; 0]`) and the profit-seeking tilt `x_o` (right-hand side
//! `[d_hat - b_hat; 0]`).
//!
//! The solve uses an LU factorization with full pivoting and fails loudly
//! when the smallest pivot falls under
//! [`SINGULARITY_RELATIVE_THRESHOLD`](crate::tolerances) times the matrix
//! max-norm; no regularization is ever applied.

use nalgebra::{DMatrix, DVector, Dyn};
use serde::{Deserialize, Serialize};

use crate::error::HedgeError;
use crate::moments::HedgeSystem;
use crate::tolerances::{
    COST_RESIDUAL_TOL, FOC_RELATIVE_TOL, INDEPENDENCE_MAX_CROSS_MOMENT,
    SINGULARITY_RELATIVE_THRESHOLD,
};

/// Optimal claim pair with its multipliers and solve diagnostics.
///
/// `foc_residual` is the stationarity max-norm of the system the solver
/// actually imposed: the full first-order conditions for [`solve_general`]
/// and [`solve_independent`], the active block only for [`solve_restricted`].
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct HedgeSolution {
    pub x_p: Vec<f64>,
    pub x_w: Vec<f64>,
    /// Multiplier of the price-claim cost constraint; identically 1 here,
    /// kept so verification reports can restate the FOC.
    pub lambda_p: f64,
    /// Multiplier of the weather-claim cost constraint; identically 1.
    pub lambda_w: f64,
    #[serde(rename = "a")]
    pub risk_aversion: f64,
    pub foc_residual: f64,
    pub cost_residual_p: f64,
    pub cost_residual_w: f64,
}

/// A pair of claim payoff vectors on the price and weather supports.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ClaimPair {
    pub price: Vec<f64>,
    pub weather: Vec<f64>,
}

/// The two funds spanning every optimal solution: `x(a) = x_inf + x_o / (2a)`.
#[derive(Debug, Clone, PartialEq)]
pub struct TwoFundBasis {
    /// Profit-seeking tilt, the direction bought as risk aversion fades.
    pub x_o: ClaimPair,
    /// Risk-minimizing claim, the a -> infinity limit.
    pub x_inf: ClaimPair,
}

/// Residuals of the full first-order conditions at a candidate solution.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FocReport {
    /// Max-norm of `2 a M x + B lambda - (2 a c + d)`.
    pub stationarity: f64,
    /// Larger of the two cost-constraint residuals `|b' x|`.
    pub feasibility: f64,
    /// Size of the right-hand side, `max(1, |2 a c + d|_inf)`; stationarity
    /// should be judged relative to it.
    pub scale: f64,
}

impl FocReport {
    /// True when stationarity is small relative to the right-hand side and
    /// the cost residuals are small absolutely.
    pub fn passes(&self) -> bool {
        self.stationarity <= FOC_RELATIVE_TOL * self.scale
            && self.feasibility <= COST_RESIDUAL_TOL
    }
}

// ---------------------------------------------------------------------------
// Stacked linear systems
// ---------------------------------------------------------------------------

#[derive(Clone, Copy)]
enum Block {
    Full,
    Price,
    Weather,
}

/// Factored stacked matrix with the singularity check already performed.
struct StackedSolver {
    lu: nalgebra::linalg::FullPivLU<f64, Dyn, Dyn>,
}

impl StackedSolver {
    fn new(k: DMatrix<f64>) -> Result<Self, HedgeError> {
        let max_norm = k.amax();
        let threshold = SINGULARITY_RELATIVE_THRESHOLD * max_norm;
        let lu = k.full_piv_lu();
        let u = lu.u();
        let dim = u.nrows().min(u.ncols());
        let mut min_pivot = f64::INFINITY;
        for i in 0..dim {
            min_pivot = min_pivot.min(u[(i, i)].abs());
        }
        if !(min_pivot > threshold) {
            return Err(HedgeError::SingularSystem {
                pivot: min_pivot,
                threshold,
            });
        }
        Ok(Self { lu })
    }

    fn solve(&self, rhs: &DVector<f64>) -> Result<DVector<f64>, HedgeError> {
        self.lu.solve(rhs).ok_or(HedgeError::SingularSystem {
            pivot: 0.0,
            threshold: 0.0,
        })
    }
}

/// Builds the square stacked matrix for the chosen block selection: kept FOC
/// rows (all but the final row of each active block) above the active cost
/// rows.
fn stacked_matrix(sys: &HedgeSystem, block: Block) -> DMatrix<f64> {
    match block {
        Block::Full => {
            let n = sys.n_prices();
            let m = sys.n_weather();
            let size = n + m;
            let mm = sys.stacked_m();
            let mut k = DMatrix::zeros(size, size);
            let mut row = 0;
            for r in (0..n - 1).chain(n..n + m - 1) {
                k.row_mut(row).copy_from(&mm.row(r));
                row += 1;
            }
            for i in 0..n {
                k[(size - 2, i)] = sys.b_p[i];
            }
            for j in 0..m {
                k[(size - 1, n + j)] = sys.b_w[j];
            }
            k
        }
        Block::Price => single_block_matrix(&sys.m_pp, &sys.b_p),
        Block::Weather => single_block_matrix(&sys.m_ww, &sys.b_w),
    }
}

fn single_block_matrix(m_block: &DMatrix<f64>, b: &DVector<f64>) -> DMatrix<f64> {
    let n = b.len();
    let mut k = DMatrix::zeros(n, n);
    for r in 0..n - 1 {
        k.row_mut(r).copy_from(&m_block.row(r));
    }
    for i in 0..n {
        k[(n - 1, i)] = b[i];
    }
    k
}

/// Right-hand side `c_coeff * c_hat + tilt_coeff * (d_hat - b_hat)` over the
/// kept rows, padded with zeros for the cost rows.
fn stacked_rhs(sys: &HedgeSystem, block: Block, c_coeff: f64, tilt_coeff: f64) -> DVector<f64> {
    let entry = |c: f64, d: f64, b: f64| c_coeff * c + tilt_coeff * (d - b);
    match block {
        Block::Full => {
            let n = sys.n_prices();
            let m = sys.n_weather();
            let mut rhs = DVector::zeros(n + m);
            let mut row = 0;
            for i in 0..n - 1 {
                rhs[row] = entry(sys.c_p[i], sys.d_p[i], sys.b_p[i]);
                row += 1;
            }
            for k in 0..m - 1 {
                rhs[row] = entry(sys.c_w[k], sys.d_w[k], sys.b_w[k]);
                row += 1;
            }
            rhs
        }
        Block::Price => {
            let n = sys.n_prices();
            let mut rhs = DVector::zeros(n);
            for i in 0..n - 1 {
                rhs[i] = entry(sys.c_p[i], sys.d_p[i], sys.b_p[i]);
            }
            rhs
        }
        Block::Weather => {
            let m = sys.n_weather();
            let mut rhs = DVector::zeros(m);
            for k in 0..m - 1 {
                rhs[k] = entry(sys.c_w[k], sys.d_w[k], sys.b_w[k]);
            }
            rhs
        }
    }
}

fn check_risk_aversion(a: f64) -> Result<(), HedgeError> {
    if !a.is_finite() || a <= 0.0 {
        return Err(HedgeError::NonPositiveRiskAversion(a));
    }
    Ok(())
}

// ---------------------------------------------------------------------------
// Solvers
// ---------------------------------------------------------------------------

/// Solves the full problem for a given risk aversion `a > 0`.
pub fn solve_general(sys: &HedgeSystem, a: f64) -> Result<HedgeSolution, HedgeError> {
    check_risk_aversion(a)?;
    let solver = StackedSolver::new(stacked_matrix(sys, Block::Full))?;
    let x = solver.solve(&stacked_rhs(sys, Block::Full, 1.0, 0.5 / a))?;
    Ok(finish_full_solution(sys, &x, a))
}

/// Solves the two funds with a single factorization of the stacked matrix.
pub fn two_fund_basis(sys: &HedgeSystem) -> Result<TwoFundBasis, HedgeError> {
    let solver = StackedSolver::new(stacked_matrix(sys, Block::Full))?;
    let x_o = solver.solve(&stacked_rhs(sys, Block::Full, 0.0, 1.0))?;
    let x_inf = solver.solve(&stacked_rhs(sys, Block::Full, 1.0, 0.0))?;
    let n = sys.n_prices();
    let m = sys.n_weather();
    Ok(TwoFundBasis {
        x_o: split_claims(&x_o, n, m),
        x_inf: split_claims(&x_inf, n, m),
    })
}

/// Solves the decoupled price and weather block systems. Only valid when the
/// cross-moment block vanishes; instances with
/// `max |Mpw| > `[`INDEPENDENCE_MAX_CROSS_MOMENT`](crate::tolerances) are
/// rejected.
pub fn solve_independent(sys: &HedgeSystem, a: f64) -> Result<HedgeSolution, HedgeError> {
    check_risk_aversion(a)?;
    let cross = sys.m_pw.amax();
    if cross > INDEPENDENCE_MAX_CROSS_MOMENT {
        return Err(HedgeError::NotIndependent(cross));
    }
    let x_p = solve_single_block(sys, Block::Price, 1.0, 0.5 / a)?;
    let x_w = solve_single_block(sys, Block::Weather, 1.0, 0.5 / a)?;
    let mut x = DVector::zeros(sys.n_prices() + sys.n_weather());
    x.rows_mut(0, sys.n_prices()).copy_from(&x_p);
    x.rows_mut(sys.n_prices(), sys.n_weather()).copy_from(&x_w);
    Ok(finish_full_solution(sys, &x, a))
}

/// Which single claim a restricted hedge may use.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Restriction {
    PriceOnly,
    WeatherOnly,
}

/// Solves the problem restricted to one claim, the other held at zero.
///
/// The cross block never enters (it multiplies the zeroed claim), so no
/// independence is required: this is a restriction of the feasible set, not
/// a decoupling of the objective. `foc_residual` and the multiplier refer to
/// the restricted block's own optimality system; pushing the result through
/// [`verify_foc`] shows the inactive block's stationarity gap.
pub fn solve_restricted(
    sys: &HedgeSystem,
    a: f64,
    restriction: Restriction,
) -> Result<HedgeSolution, HedgeError> {
    check_risk_aversion(a)?;
    let block = match restriction {
        Restriction::PriceOnly => Block::Price,
        Restriction::WeatherOnly => Block::Weather,
    };
    let x_active = solve_single_block(sys, block, 1.0, 0.5 / a)?;

    let (m_block, c, d, b) = match restriction {
        Restriction::PriceOnly => (&sys.m_pp, &sys.c_p, &sys.d_p, &sys.b_p),
        Restriction::WeatherOnly => (&sys.m_ww, &sys.c_w, &sys.d_w, &sys.b_w),
    };
    let rhs_full = 2.0 * a * c + d;
    let resid = 2.0 * a * (m_block * &x_active) + b - &rhs_full;
    let cost_residual = b.dot(&x_active);

    let active: Vec<f64> = x_active.iter().copied().collect();
    let (x_p, x_w, cost_p, cost_w) = match restriction {
        Restriction::PriceOnly => (active, vec![0.0; sys.n_weather()], cost_residual, 0.0),
        Restriction::WeatherOnly => (vec![0.0; sys.n_prices()], active, 0.0, cost_residual),
    };
    Ok(HedgeSolution {
        x_p,
        x_w,
        lambda_p: 1.0,
        lambda_w: 1.0,
        risk_aversion: a,
        foc_residual: resid.amax(),
        cost_residual_p: cost_p,
        cost_residual_w: cost_w,
    })
}

/// Risk-minimizing claim of the restricted problem (the a -> infinity fund
/// of one block), with the inactive claim zeroed.
pub fn restricted_risk_min(
    sys: &HedgeSystem,
    restriction: Restriction,
) -> Result<ClaimPair, HedgeError> {
    let block = match restriction {
        Restriction::PriceOnly => Block::Price,
        Restriction::WeatherOnly => Block::Weather,
    };
    let x_active = solve_single_block(sys, block, 1.0, 0.0)?;
    let active: Vec<f64> = x_active.iter().copied().collect();
    Ok(match restriction {
        Restriction::PriceOnly => ClaimPair {
            price: active,
            weather: vec![0.0; sys.n_weather()],
        },
        Restriction::WeatherOnly => ClaimPair {
            price: vec![0.0; sys.n_prices()],
            weather: active,
        },
    })
}

fn solve_single_block(
    sys: &HedgeSystem,
    block: Block,
    c_coeff: f64,
    tilt_coeff: f64,
) -> Result<DVector<f64>, HedgeError> {
    let solver = StackedSolver::new(stacked_matrix(sys, block))?;
    solver.solve(&stacked_rhs(sys, block, c_coeff, tilt_coeff))
}

fn split_claims(x: &DVector<f64>, n: usize, m: usize) -> ClaimPair {
    ClaimPair {
        price: x.rows(0, n).iter().copied().collect(),
        weather: x.rows(n, m).iter().copied().collect(),
    }
}

fn finish_full_solution(sys: &HedgeSystem, x: &DVector<f64>, a: f64) -> HedgeSolution {
    let n = sys.n_prices();
    let m = sys.n_weather();
    let claims = split_claims(x, n, m);
    let mut sol = HedgeSolution {
        x_p: claims.price,
        x_w: claims.weather,
        lambda_p: 1.0,
        lambda_w: 1.0,
        risk_aversion: a,
        foc_residual: 0.0,
        cost_residual_p: sys.b_p.dot(&x.rows(0, n).into_owned()),
        cost_residual_w: sys.b_w.dot(&x.rows(n, m).into_owned()),
    };
    sol.foc_residual = verify_foc(sys, &sol).stationarity;
    sol
}

/// Evaluates the full first-order conditions at a candidate solution, using
/// its stored multipliers and risk aversion.
///
/// The stationarity residual runs over all n + m rows, including the two the
/// reduced solve dropped, so a multiplier different from the true value 1
/// shows up here even though the solvers fix lambda = 1 by construction.
pub fn verify_foc(sys: &HedgeSystem, sol: &HedgeSolution) -> FocReport {
    assert_eq!(sol.x_p.len(), sys.n_prices(), "price claim length mismatch");
    assert_eq!(sol.x_w.len(), sys.n_weather(), "weather claim length mismatch");
    let a = sol.risk_aversion;
    let n = sys.n_prices();
    let m = sys.n_weather();

    let mut x = DVector::zeros(n + m);
    for (i, v) in sol.x_p.iter().enumerate() {
        x[i] = *v;
    }
    for (k, v) in sol.x_w.iter().enumerate() {
        x[n + k] = *v;
    }

    let mm = sys.stacked_m();
    let c = sys.stacked_c();
    let d = sys.stacked_d();
    let rhs = 2.0 * a * &c + &d;

    let mut resid = 2.0 * a * (&mm * &x) - &rhs;
    for i in 0..n {
        resid[i] += sol.lambda_p * sys.b_p[i];
    }
    for k in 0..m {
        resid[n + k] += sol.lambda_w * sys.b_w[k];
    }

    let xp = DVector::from_column_slice(&sol.x_p);
    let xw = DVector::from_column_slice(&sol.x_w);
    FocReport {
        stationarity: resid.amax(),
        feasibility: sys.b_p.dot(&xp).abs().max(sys.b_w.dot(&xw).abs()),
        scale: rhs.amax().max(1.0),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::distributions::{RealWorldMeasure, RiskNeutralMeasure, ScenarioGrid};
    use crate::moments::assemble_system;

    /// Uniform 2x2x2 instance: prices {100, 140}, quantities {10, 20},
    /// r = 120. Profit is independent of weather, mu_y = 0 and the
    /// conditional mean profits per price are +300 and -300.
    fn uniform_instance() -> HedgeSystem {
        let grid =
            ScenarioGrid::new(vec![100.0, 140.0], vec![10.0, 20.0], vec![0.0, 1.0]).unwrap();
        let psi = RealWorldMeasure::new(grid, vec![0.125; 8]).unwrap();
        let phi = RiskNeutralMeasure::from_real_world(&psi);
        assemble_system(&psi, &phi, 120.0).unwrap()
    }

    /// 2x1x2 instance whose price and weather levels move together almost
    /// surely, collapsing the rank of the stacked system.
    fn perfectly_coupled_instance() -> HedgeSystem {
        let grid = ScenarioGrid::new(vec![100.0, 140.0], vec![10.0], vec![0.0, 1.0]).unwrap();
        let psi = RealWorldMeasure::new(grid, vec![0.5, 0.0, 0.0, 0.5]).unwrap();
        let phi = RiskNeutralMeasure::from_real_world(&psi);
        assemble_system(&psi, &phi, 120.0).unwrap()
    }

    fn coupled_instance() -> HedgeSystem {
        let grid = ScenarioGrid::new(vec![100.0, 140.0], vec![10.0], vec![0.0, 1.0]).unwrap();
        let psi = RealWorldMeasure::new(grid, vec![0.4, 0.1, 0.1, 0.4]).unwrap();
        let phi = RiskNeutralMeasure::from_real_world(&psi);
        assemble_system(&psi, &phi, 120.0).unwrap()
    }

    /// Asymmetric 2x2x2 instance where neither single claim spans the
    /// other's hedging demand, so restricted optima are strictly suboptimal.
    fn asymmetric_instance() -> HedgeSystem {
        let grid =
            ScenarioGrid::new(vec![100.0, 140.0], vec![10.0, 30.0], vec![0.0, 1.0]).unwrap();
        let probs = vec![0.20, 0.05, 0.10, 0.05, 0.05, 0.15, 0.05, 0.35];
        let psi = RealWorldMeasure::new(grid, probs).unwrap();
        let phi = RiskNeutralMeasure::from_real_world(&psi);
        assemble_system(&psi, &phi, 120.0).unwrap()
    }

    // -- solve_general tests -------------------------------------------------

    #[test]
    fn matching_measures_give_conditional_mean_offsets() {
        // With identical pricing and real-world marginals and an independent
        // instance, the optimum is mu_y minus the conditional mean profit.
        let sys = uniform_instance();
        let sol = solve_general(&sys, 1.0).unwrap();
        assert!((sol.x_p[0] - (-300.0)).abs() < 1e-9, "x_p = {:?}", sol.x_p);
        assert!((sol.x_p[1] - 300.0).abs() < 1e-9);
        assert!(sol.x_w[0].abs() < 1e-9);
        assert!(sol.x_w[1].abs() < 1e-9);
        assert_eq!(sol.lambda_p, 1.0);
        assert_eq!(sol.lambda_w, 1.0);
        assert!(verify_foc(&sys, &sol).passes());
    }

    #[test]
    fn zero_risk_aversion_is_rejected() {
        let sys = uniform_instance();
        assert!(matches!(
            solve_general(&sys, 0.0),
            Err(HedgeError::NonPositiveRiskAversion(_))
        ));
        assert!(solve_general(&sys, -2.0).is_err());
        assert!(solve_general(&sys, f64::NAN).is_err());
    }

    #[test]
    fn perfect_coupling_is_singular() {
        let sys = perfectly_coupled_instance();
        let err = solve_general(&sys, 1.0).unwrap_err();
        assert!(matches!(err, HedgeError::SingularSystem { .. }));
        assert!(err.to_string().contains("non-generic instance"));
    }

    // -- two-fund tests --------------------------------------------------------

    #[test]
    fn solution_is_affine_in_inverse_risk_aversion() {
        let sys = coupled_instance();
        let basis = two_fund_basis(&sys).unwrap();
        for a in [0.1, 0.5, 1.0, 5.0, 50.0] {
            let sol = solve_general(&sys, a).unwrap();
            for i in 0..sol.x_p.len() {
                let combo = basis.x_inf.price[i] + basis.x_o.price[i] / (2.0 * a);
                assert!((sol.x_p[i] - combo).abs() < 1e-9 * combo.abs().max(1.0));
            }
            for k in 0..sol.x_w.len() {
                let combo = basis.x_inf.weather[k] + basis.x_o.weather[k] / (2.0 * a);
                assert!((sol.x_w[k] - combo).abs() < 1e-9 * combo.abs().max(1.0));
            }
        }
    }

    #[test]
    fn matching_measures_zero_the_tilt_fund() {
        let sys = uniform_instance();
        let basis = two_fund_basis(&sys).unwrap();
        for v in basis.x_o.price.iter().chain(basis.x_o.weather.iter()) {
            assert!(v.abs() < 1e-12);
        }
    }

    // -- independence and restriction tests -------------------------------------

    #[test]
    fn independent_solve_requires_vanishing_cross_block() {
        let sys = coupled_instance();
        let err = solve_independent(&sys, 1.0).unwrap_err();
        assert!(matches!(err, HedgeError::NotIndependent(_)));
        assert!(err.to_string().contains("measure not independent"));
    }

    #[test]
    fn independent_solve_matches_general_solve() {
        let sys = uniform_instance();
        let fast = solve_independent(&sys, 2.0).unwrap();
        let general = solve_general(&sys, 2.0).unwrap();
        for (f, g) in fast.x_p.iter().zip(&general.x_p) {
            assert!((f - g).abs() < 1e-9 * g.abs().max(1.0));
        }
        for (f, g) in fast.x_w.iter().zip(&general.x_w) {
            assert!((f - g).abs() < 1e-9 * g.abs().max(1.0));
        }
    }

    #[test]
    fn restricted_price_claim_matches_independent_block() {
        let sys = uniform_instance();
        let restricted = solve_restricted(&sys, 1.5, Restriction::PriceOnly).unwrap();
        let fast = solve_independent(&sys, 1.5).unwrap();
        for (r, f) in restricted.x_p.iter().zip(&fast.x_p) {
            assert!((r - f).abs() < 1e-9 * f.abs().max(1.0));
        }
        assert!(restricted.x_w.iter().all(|v| *v == 0.0));
        assert!(restricted.cost_residual_p.abs() < 1e-10);
        assert_eq!(restricted.cost_residual_w, 0.0);
    }

    #[test]
    fn restricted_solve_allows_coupled_instances() {
        let sys = coupled_instance();
        let sol = solve_restricted(&sys, 1.0, Restriction::WeatherOnly).unwrap();
        assert!(sol.foc_residual < 1e-10);
        assert!(sol.x_p.iter().all(|v| *v == 0.0));
        assert!(sol.x_w.iter().any(|v| v.abs() > 1.0));
    }

    // -- verify_foc tests ---------------------------------------------------------

    #[test]
    fn zero_claims_leave_linear_risk_term_as_residual() {
        // With matching measures the zero claim satisfies feasibility and the
        // lambda terms cancel d exactly, leaving max |2 a c|.
        let sys = uniform_instance();
        let a = 1.0;
        let candidate = HedgeSolution {
            x_p: vec![0.0; 2],
            x_w: vec![0.0; 2],
            lambda_p: 1.0,
            lambda_w: 1.0,
            risk_aversion: a,
            foc_residual: 0.0,
            cost_residual_p: 0.0,
            cost_residual_w: 0.0,
        };
        let report = verify_foc(&sys, &candidate);
        let expected = sys.stacked_c().amax() * 2.0 * a;
        assert!((report.stationarity - expected).abs() < 1e-12);
        assert!((report.stationarity - 300.0).abs() < 1e-12);
        assert!(report.feasibility < 1e-15);
        assert!(!report.passes());
    }

    #[test]
    fn restricted_solution_fails_full_stationarity() {
        let sys = asymmetric_instance();
        let general = solve_general(&sys, 1.0).unwrap();
        assert!(
            general.x_w.iter().any(|v| v.abs() > 1.0),
            "instance must want a weather claim, got {:?}",
            general.x_w
        );
        let sol = solve_restricted(&sys, 1.0, Restriction::PriceOnly).unwrap();
        let report = verify_foc(&sys, &sol);
        assert!(report.feasibility <= 1e-10);
        assert!(report.stationarity > 1.0, "stationarity = {}", report.stationarity);
        assert!(!report.passes());
    }
}
