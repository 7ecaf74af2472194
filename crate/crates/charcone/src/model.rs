//! Lagrangian families in the single invariant `sigma_2`, with exact first
//! and second derivatives and the nonlinearity parameter `xi = 2 L'' / L'`.

use thiserror::Error;

#[derive(Debug, Error, PartialEq)]
pub enum ModelError {
    #[error("exponent must be a positive finite real, got {q}")]
    InvalidExponent { q: f64 },
    #[error("sigma_2 = {sigma2} is outside the domain of a fractional power (exponent {q})")]
    Domain { sigma2: f64, q: f64 },
    #[error("model is degenerate at sigma_2 = {sigma2}: first derivative vanishes")]
    Degenerate { sigma2: f64 },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ModelFamily {
    /// `L(sigma_2) = c sigma_2^q`.
    Power,
}

/// A one-parameter Lagrangian `L(sigma_2)`.
///
/// Only the power family is built in; the two reference models are the
/// quartic-root action (`c = -1/2, q = 3/4`) and the strongly coupled one
/// (`c = -1/2, q = 1`). The evaluation contract accepts any `(c, q)`, so
/// further smooth families can be added behind it.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LagrangianModel {
    pub family: ModelFamily,
    pub c: f64,
    pub q: f64,
}

/// Value, first and second derivative of the Lagrangian at one `sigma_2`,
/// plus the nonlinearity parameter.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ModelEval {
    pub l: f64,
    pub l2: f64,
    pub l22: f64,
    pub xi: f64,
}

impl LagrangianModel {
    pub fn power(c: f64, q: f64) -> Result<Self, ModelError> {
        if !(q.is_finite() && q > 0.0) || !c.is_finite() {
            return Err(ModelError::InvalidExponent { q });
        }
        Ok(Self {
            family: ModelFamily::Power,
            c,
            q,
        })
    }

    /// The scale-balanced model `L = -sigma_2^{3/4} / 2`.
    pub fn three_quarter_power() -> Self {
        Self {
            family: ModelFamily::Power,
            c: -0.5,
            q: 0.75,
        }
    }

    /// The strongly coupled model `L = -sigma_2 / 2`.
    pub fn strongly_coupled() -> Self {
        Self {
            family: ModelFamily::Power,
            c: -0.5,
            q: 1.0,
        }
    }

    fn is_integer_exponent(&self) -> bool {
        self.q.fract() == 0.0 && self.q.abs() < i32::MAX as f64
    }

    fn pow(&self, sigma2: f64, exponent: f64) -> f64 {
        if self.is_integer_exponent() {
            // Integer powers stay exact at sigma_2 = 0 and extend to
            // negative arguments.
            let e = exponent as i32;
            if e >= 0 {
                sigma2.powi(e)
            } else if sigma2 == 0.0 {
                f64::INFINITY
            } else {
                sigma2.powi(e)
            }
        } else {
            sigma2.powf(exponent)
        }
    }

    /// Closed-form evaluation of `L`, `L'`, `L''` and `xi` at `sigma2`.
    ///
    /// Fractional exponents require `sigma2 > 0`; a vanishing first
    /// derivative (integer exponents above one at `sigma2 = 0`, or `c = 0`)
    /// is reported as a degenerate model.
    pub fn eval(&self, sigma2: f64) -> Result<ModelEval, ModelError> {
        if !self.is_integer_exponent() && sigma2 <= 0.0 {
            return Err(ModelError::Domain {
                sigma2,
                q: self.q,
            });
        }
        let l = self.c * self.pow(sigma2, self.q);
        let l2 = self.c * self.q * self.pow(sigma2, self.q - 1.0);
        if l2 == 0.0 || !l2.is_finite() {
            return Err(ModelError::Degenerate { sigma2 });
        }
        let (l22, xi) = if self.q == 1.0 {
            (0.0, 0.0)
        } else {
            (
                self.c * self.q * (self.q - 1.0) * self.pow(sigma2, self.q - 2.0),
                2.0 * (self.q - 1.0) / sigma2,
            )
        };
        Ok(ModelEval { l, l2, l22, xi })
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn three_quarter_power_at_unit_sigma2() {
        let eval = LagrangianModel::three_quarter_power().eval(1.0).unwrap();
        assert_eq!(eval.l, -0.5);
        assert_eq!(eval.l2, -0.375);
        assert_eq!(eval.l22, 3.0 / 32.0);
        // xi = 2 L'' / L' = 2 (q - 1) / sigma_2 = -1/2; cross-checked against
        // central differences below before freezing.
        assert_eq!(eval.xi, -0.5);
        assert_eq!(2.0 * eval.l22 / eval.l2, -0.5);
    }

    #[test]
    fn strongly_coupled_is_linear() {
        let model = LagrangianModel::strongly_coupled();
        for sigma2 in [0.1, 1.0, 7.3] {
            let eval = model.eval(sigma2).unwrap();
            assert_eq!(eval.l2, -0.5);
            assert_eq!(eval.l22, 0.0);
            assert_eq!(eval.xi, 0.0);
        }
    }

    #[test]
    fn derivatives_match_central_differences() {
        let models = [
            LagrangianModel::three_quarter_power(),
            LagrangianModel::strongly_coupled(),
            LagrangianModel::power(2.0, 1.7).unwrap(),
            LagrangianModel::power(-0.3, 2.0).unwrap(),
        ];
        for model in models {
            // Log-spaced grid over six decades.
            for i in 0..=24 {
                let sigma2 = 10f64.powf(-3.0 + 0.25 * i as f64);
                let delta = 1e-5 * sigma2;
                let eval = model.eval(sigma2).unwrap();
                let lp = model.eval(sigma2 + delta).unwrap().l;
                let lm = model.eval(sigma2 - delta).unwrap().l;
                let fd_l2 = (lp - lm) / (2.0 * delta);
                assert!(
                    (eval.l2 - fd_l2).abs() <= 1e-6 * (1.0 + eval.l2.abs()),
                    "L' mismatch for q={} at sigma2={}",
                    model.q,
                    sigma2
                );
                let l2p = model.eval(sigma2 + delta).unwrap().l2;
                let l2m = model.eval(sigma2 - delta).unwrap().l2;
                let fd_l22 = (l2p - l2m) / (2.0 * delta);
                assert!(
                    (eval.l22 - fd_l22).abs() <= 1e-6 * (1.0 + eval.l22.abs()),
                    "L'' mismatch for q={} at sigma2={}",
                    model.q,
                    sigma2
                );
                // The finite-difference ratio confirms xi = 2 (q - 1) / sigma_2.
                let fd_xi = 2.0 * fd_l22 / fd_l2;
                assert!((eval.xi - fd_xi).abs() <= 1e-5 * (1.0 + eval.xi.abs()));
            }
        }
    }

    #[test]
    fn xi_sigma2_product_is_twice_exponent_shift() {
        let model = LagrangianModel::power(3.0, 2.5).unwrap();
        for sigma2 in [1e-3, 0.2, 1.0, 40.0, 1e3] {
            let eval = model.eval(sigma2).unwrap();
            assert!((eval.xi * sigma2 - 2.0 * (model.q - 1.0)).abs() < 1e-12);
        }
    }

    #[test]
    fn fractional_power_rejects_nonpositive_sigma2() {
        let model = LagrangianModel::three_quarter_power();
        assert!(matches!(
            model.eval(0.0),
            Err(ModelError::Domain { .. })
        ));
        assert!(matches!(
            model.eval(-1.0),
            Err(ModelError::Domain { .. })
        ));
    }

    #[test]
    fn degenerate_first_derivative_is_reported() {
        let quadratic = LagrangianModel::power(1.0, 2.0).unwrap();
        assert_eq!(
            quadratic.eval(0.0),
            Err(ModelError::Degenerate { sigma2: 0.0 })
        );
        let zero = LagrangianModel::power(0.0, 1.0).unwrap();
        assert_eq!(
            zero.eval(1.0),
            Err(ModelError::Degenerate { sigma2: 1.0 })
        );
    }

    #[test]
    fn rejects_bad_exponent() {
        assert!(LagrangianModel::power(1.0, 0.0).is_err());
        assert!(LagrangianModel::power(1.0, -2.0).is_err());
        assert!(LagrangianModel::power(1.0, f64::NAN).is_err());
    }
}
