//! Profit moments and the quadratic data of the hedging problem.
//!
//! Retail profit in scenario (p, q, w) is
//!
//! ```text
//!     y(p, q) = (r - p) q
//! ```
//!
//! for a flat retail rate r: the retailer sells q at r and procures it at the
//! spot price p. Adding zero-cost claims x_p(p) and x_w(w) changes the
//! mean-variance objective into a concave quadratic in the stacked claim
//! vector x = [x_p; x_w]:
//!
//! ```text
//!     E[y + x] - a Var[y + x] = mu_y - a sigma2_y + (d + 2 a c)' x - a x' M x
//! ```
//!
//! with data assembled from the real-world measure psi and the pricing
//! marginals phi:
//!
//! ```text
//!     c_p  = mu_y psi_p - mu_y_given_p . psi_p      (elementwise product)
//!     c_w  = mu_y psi_w - mu_y_given_w . psi_w
//!     M_pp = Diag(psi_p) - psi_p psi_p'
//!     M_ww = Diag(psi_w) - psi_w psi_w'
//!     M_pw = psi_pw - psi_p psi_w'
//!     d    = [psi_p; psi_w]           b = [phi_p; phi_w]
//! ```
//!
//! M is the covariance operator of the pair of claim payoffs, so it is
//! positive semidefinite with the two block indicator vectors spanning its
//! null space: adding a constant to either claim never changes variance.

use nalgebra::{DMatrix, DVector};

use crate::distributions::{RealWorldMeasure, RiskNeutralMeasure};
use crate::error::HedgeError;
use crate::tolerances::ASSEMBLY_IDENTITY_TOL;

/// Retail profit for one scenario: quantity q bought at spot price p and
/// sold at the flat rate r. q is assumed nonnegative.
pub fn profit(price: f64, quantity: f64, retail_rate: f64) -> f64 {
    (retail_rate - price) * quantity
}

/// All moment data the solver, frontier and analytics need, assembled once
/// from a measure pair.
#[derive(Debug, Clone, PartialEq)]
pub struct HedgeSystem {
    /// Expected unhedged profit under psi.
    pub mu_y: f64,
    /// Variance of unhedged profit under psi.
    pub sigma2_y: f64,
    /// Price-block linear risk coupling c_p.
    pub c_p: DVector<f64>,
    /// Weather-block linear risk coupling c_w.
    pub c_w: DVector<f64>,
    pub m_pp: DMatrix<f64>,
    pub m_ww: DMatrix<f64>,
    pub m_pw: DMatrix<f64>,
    /// Pricing marginal phi_p (cost weights of the price claim).
    pub b_p: DVector<f64>,
    /// Pricing marginal phi_w (cost weights of the weather claim).
    pub b_w: DVector<f64>,
    /// Real-world price marginal psi_p (mean weights of the price claim).
    pub d_p: DVector<f64>,
    /// Real-world weather marginal psi_w (mean weights of the weather claim).
    pub d_w: DVector<f64>,
    pub retail_rate: f64,
    /// Conditional mean profit given each price level.
    pub mu_y_given_p: DVector<f64>,
    /// Conditional mean profit given each weather level.
    pub mu_y_given_w: DVector<f64>,
}

impl HedgeSystem {
    pub fn n_prices(&self) -> usize {
        self.d_p.len()
    }

    pub fn n_weather(&self) -> usize {
        self.d_w.len()
    }

    /// Full (n + m) x (n + m) quadratic-form matrix [[Mpp, Mpw], [Mpw', Mww]].
    pub fn stacked_m(&self) -> DMatrix<f64> {
        let n = self.n_prices();
        let m = self.n_weather();
        let mut out = DMatrix::zeros(n + m, n + m);
        out.view_mut((0, 0), (n, n)).copy_from(&self.m_pp);
        out.view_mut((0, n), (n, m)).copy_from(&self.m_pw);
        out.view_mut((n, 0), (m, n)).copy_from(&self.m_pw.transpose());
        out.view_mut((n, n), (m, m)).copy_from(&self.m_ww);
        out
    }

    /// Stacked [c_p; c_w].
    pub fn stacked_c(&self) -> DVector<f64> {
        stack(&self.c_p, &self.c_w)
    }

    /// Stacked [psi_p; psi_w].
    pub fn stacked_d(&self) -> DVector<f64> {
        stack(&self.d_p, &self.d_w)
    }

    /// Stacked [phi_p; phi_w].
    pub fn stacked_b(&self) -> DVector<f64> {
        stack(&self.b_p, &self.b_w)
    }

    /// The same system with the price-weather cross block forced to zero,
    /// i.e. the model a hedger who wrongly assumes price-weather independence
    /// would solve.
    pub fn independence_proxy(&self) -> HedgeSystem {
        let mut proxy = self.clone();
        proxy.m_pw.fill(0.0);
        proxy
    }

    /// Structural identities that hold for any correctly assembled system;
    /// returns the violated ones. Useful as a diagnostic on hand-built or
    /// deserialized systems.
    pub fn validation_report(&self) -> Vec<String> {
        let mut violations = Vec::new();
        let n = self.n_prices();
        let m = self.n_weather();
        let tol = ASSEMBLY_IDENTITY_TOL;

        let c_p_sum = self.c_p.sum();
        if c_p_sum.abs() > tol {
            violations.push(format!("c_p entries sum to {c_p_sum:e}, expected 0"));
        }
        let c_w_sum = self.c_w.sum();
        if c_w_sum.abs() > tol {
            violations.push(format!("c_w entries sum to {c_w_sum:e}, expected 0"));
        }

        let stacked = self.stacked_m();
        let mut e_p = DVector::zeros(n + m);
        for i in 0..n {
            e_p[i] = 1.0;
        }
        let mut e_w = DVector::zeros(n + m);
        for k in 0..m {
            e_w[n + k] = 1.0;
        }
        let r_p = (&stacked * &e_p).amax();
        if r_p > tol {
            violations.push(format!(
                "price indicator is not a null direction of M (residual {r_p:e})"
            ));
        }
        let r_w = (&stacked * &e_w).amax();
        if r_w > tol {
            violations.push(format!(
                "weather indicator is not a null direction of M (residual {r_w:e})"
            ));
        }

        let asym = (&stacked - stacked.transpose()).amax();
        if asym > tol {
            violations.push(format!("M is asymmetric by {asym:e}"));
        }
        violations
    }
}

fn stack(top: &DVector<f64>, bottom: &DVector<f64>) -> DVector<f64> {
    let mut out = DVector::zeros(top.len() + bottom.len());
    out.rows_mut(0, top.len()).copy_from(top);
    out.rows_mut(top.len(), bottom.len()).copy_from(bottom);
    out
}

/// Assembles the moment data of the hedging problem from a real-world
/// measure, compatible pricing marginals and the retail rate.
///
/// The pricing supports must match the scenario grid exactly (claims are
/// written per grid level), and every price and weather level needs strictly
/// positive real-world mass so that conditional mean profits exist.
pub fn assemble_system(
    psi: &RealWorldMeasure,
    phi: &RiskNeutralMeasure,
    retail_rate: f64,
) -> Result<HedgeSystem, HedgeError> {
    if !retail_rate.is_finite() {
        return Err(HedgeError::InvalidParameter(
            "retail rate must be finite".to_string(),
        ));
    }
    if phi.prices() != psi.grid().prices() {
        return Err(HedgeError::IncompatibleSupports(
            "risk-neutral price support differs from the scenario grid".to_string(),
        ));
    }
    if phi.weather() != psi.grid().weather() {
        return Err(HedgeError::IncompatibleSupports(
            "risk-neutral weather support differs from the scenario grid".to_string(),
        ));
    }

    let (n, l, m) = psi.grid().dims();
    let prices = psi.grid().prices();
    let quantities = psi.grid().quantities();

    let psi_p = DVector::from_column_slice(psi.price_marginal());
    let psi_w = DVector::from_column_slice(psi.weather_marginal());
    for i in 0..n {
        if psi_p[i] <= 0.0 {
            return Err(HedgeError::DegenerateMarginal(format!(
                "price level {} carries zero probability",
                prices[i]
            )));
        }
    }
    for k in 0..m {
        if psi_w[k] <= 0.0 {
            return Err(HedgeError::DegenerateMarginal(format!(
                "weather level {} carries zero probability",
                psi.grid().weather()[k]
            )));
        }
    }

    let mut mu_y = 0.0;
    let mut second_moment = 0.0;
    let mut y_mass_p = vec![0.0; n];
    let mut y_mass_w = vec![0.0; m];
    for i in 0..n {
        for j in 0..l {
            let y = profit(prices[i], quantities[j], retail_rate);
            for k in 0..m {
                let p = psi.prob(i, j, k);
                let py = p * y;
                mu_y += py;
                second_moment += py * y;
                y_mass_p[i] += py;
                y_mass_w[k] += py;
            }
        }
    }
    let sigma2_y = second_moment - mu_y * mu_y;

    let mu_y_given_p = DVector::from_fn(n, |i, _| y_mass_p[i] / psi_p[i]);
    let mu_y_given_w = DVector::from_fn(m, |k, _| y_mass_w[k] / psi_w[k]);

    let c_p = DVector::from_fn(n, |i, _| mu_y * psi_p[i] - y_mass_p[i]);
    let c_w = DVector::from_fn(m, |k, _| mu_y * psi_w[k] - y_mass_w[k]);

    let m_pp = DMatrix::from_fn(n, n, |i, j| {
        let diag = if i == j { psi_p[i] } else { 0.0 };
        diag - psi_p[i] * psi_p[j]
    });
    let m_ww = DMatrix::from_fn(m, m, |i, j| {
        let diag = if i == j { psi_w[i] } else { 0.0 };
        diag - psi_w[i] * psi_w[j]
    });
    let m_pw = DMatrix::from_fn(n, m, |i, k| {
        psi.price_weather_marginal(i, k) - psi_p[i] * psi_w[k]
    });

    Ok(HedgeSystem {
        mu_y,
        sigma2_y,
        c_p,
        c_w,
        m_pp,
        m_ww,
        m_pw,
        b_p: DVector::from_column_slice(phi.price_marginal()),
        b_w: DVector::from_column_slice(phi.weather_marginal()),
        d_p: psi_p,
        d_w: psi_w,
        retail_rate,
        mu_y_given_p,
        mu_y_given_w,
    })
}

/// Mean-variance objective value of a claim pair:
/// `mu_y - a sigma2_y + (d + 2 a c)' x - a x' M x`.
///
/// Claim vectors must match the system dimensions.
pub fn utility_value(sys: &HedgeSystem, x_p: &[f64], x_w: &[f64], a: f64) -> f64 {
    let (mean, variance) = hedged_mean_variance(sys, x_p, x_w);
    mean - a * variance
}

/// Mean and variance of hedged profit y + x_p + x_w under psi, evaluated
/// from the assembled moments:
/// mean = mu_y + d' x, variance = sigma2_y - 2 c' x + x' M x.
pub fn hedged_mean_variance(sys: &HedgeSystem, x_p: &[f64], x_w: &[f64]) -> (f64, f64) {
    assert_eq!(
        x_p.len(),
        sys.n_prices(),
        "price claim length must match the price support"
    );
    assert_eq!(
        x_w.len(),
        sys.n_weather(),
        "weather claim length must match the weather support"
    );
    let xp = DVector::from_column_slice(x_p);
    let xw = DVector::from_column_slice(x_w);

    let mean = sys.mu_y + sys.d_p.dot(&xp) + sys.d_w.dot(&xw);
    let quad = xp.dot(&(&sys.m_pp * &xp))
        + 2.0 * xp.dot(&(&sys.m_pw * &xw))
        + xw.dot(&(&sys.m_ww * &xw));
    let variance = sys.sigma2_y - 2.0 * (sys.c_p.dot(&xp) + sys.c_w.dot(&xw)) + quad;
    (mean, variance)
}
