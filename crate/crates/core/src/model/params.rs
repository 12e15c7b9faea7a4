use serde::{Deserialize, Serialize};

use crate::{Error, Result};

/// Charge cutoff used when none is given; converged well below 1e-8 for
/// `E_J2,Σ/E_C` up to about 40.
pub const DEFAULT_N_CUT: usize = 25;

/// Raw circuit constants. Only the junction sums and asymmetries enter the
/// Hamiltonian; [`CircuitParams::from_junctions`] reduces per-junction values.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CircuitParams {
    /// Single-Cooper-pair tunneling total `E_J1,a + E_J1,b` (MHz).
    pub ej1_sum: f64,
    /// Pair tunneling total `E_J2,a + E_J2,b` (MHz).
    pub ej2_sum: f64,
    pub d1: f64,
    pub d2: f64,
    /// Charging energy `e²/2C` (MHz).
    pub ec: f64,
    /// Offset charge in Cooper pairs.
    pub ng: f64,
    /// Charge cutoff `N`, basis dimension `2N + 1`.
    pub n_cut: usize,
}

impl CircuitParams {
    pub fn new(
        ej1_sum: f64,
        ej2_sum: f64,
        d1: f64,
        d2: f64,
        ec: f64,
        ng: f64,
        n_cut: usize,
    ) -> Result<Self> {
        let params = Self {
            ej1_sum,
            ej2_sum,
            d1,
            d2,
            ec,
            ng,
            n_cut,
        };
        params.validate()?;
        Ok(params)
    }

    /// Builds parameters from the four junction energies of the loop.
    pub fn from_junctions(
        ej1_a: f64,
        ej1_b: f64,
        ej2_a: f64,
        ej2_b: f64,
        ec: f64,
        ng: f64,
        n_cut: usize,
    ) -> Result<Self> {
        for (name, v) in [
            ("ej1_a", ej1_a),
            ("ej1_b", ej1_b),
            ("ej2_a", ej2_a),
            ("ej2_b", ej2_b),
        ] {
            if !(v.is_finite() && v >= 0.0) {
                return Err(Error::invalid(
                    name,
                    format!("must be finite and >= 0, got {v}"),
                ));
            }
        }
        let (ej1_sum, d1) = sum_and_asymmetry(ej1_a, ej1_b);
        let (ej2_sum, d2) = sum_and_asymmetry(ej2_a, ej2_b);
        Self::new(ej1_sum, ej2_sum, d1, d2, ec, ng, n_cut)
    }

    /// Parameter set of the reference device: `E_J2,Σ/E_C = 30`,
    /// `E_J1,Σ/E_J2,Σ = 0.1`, `E_C = 200 MHz`, `n_g = 0`, `d1 = d2 = 0.05`.
    pub fn reference() -> Self {
        Self {
            ej1_sum: 600.0,
            ej2_sum: 6000.0,
            d1: 0.05,
            d2: 0.05,
            ec: 200.0,
            ng: 0.0,
            n_cut: DEFAULT_N_CUT,
        }
    }

    pub fn validate(&self) -> Result<()> {
        let finite = |name: &str, v: f64| {
            if v.is_finite() {
                Ok(())
            } else {
                Err(Error::invalid(name, format!("must be finite, got {v}")))
            }
        };
        finite("ej1_sum", self.ej1_sum)?;
        finite("ej2_sum", self.ej2_sum)?;
        finite("d1", self.d1)?;
        finite("d2", self.d2)?;
        finite("ec", self.ec)?;
        finite("ng", self.ng)?;
        if self.ej1_sum < 0.0 {
            return Err(Error::invalid("ej1_sum", "must be >= 0"));
        }
        if self.ej2_sum < 0.0 {
            return Err(Error::invalid("ej2_sum", "must be >= 0"));
        }
        if self.ec <= 0.0 {
            return Err(Error::invalid(
                "ec",
                format!("must be > 0, got {}", self.ec),
            ));
        }
        if self.d1.abs() >= 1.0 {
            return Err(Error::invalid("d1", "must satisfy |d1| < 1"));
        }
        if self.d2.abs() >= 1.0 {
            return Err(Error::invalid("d2", "must satisfy |d2| < 1"));
        }
        if self.n_cut < 4 {
            return Err(Error::invalid(
                "n_cut",
                format!("must be >= 4, got {}", self.n_cut),
            ));
        }
        Ok(())
    }

    pub fn dim(&self) -> usize {
        2 * self.n_cut + 1
    }

    pub fn with_ng(self, ng: f64) -> Self {
        Self { ng, ..self }
    }

    pub fn with_n_cut(self, n_cut: usize) -> Self {
        Self { n_cut, ..self }
    }

    pub fn with_ej1_sum(self, ej1_sum: f64) -> Self {
        Self { ej1_sum, ..self }
    }

    pub fn with_ej2_sum(self, ej2_sum: f64) -> Self {
        Self { ej2_sum, ..self }
    }

    pub fn with_asymmetry(self, d1: f64, d2: f64) -> Self {
        Self { d1, d2, ..self }
    }
}

fn sum_and_asymmetry(a: f64, b: f64) -> (f64, f64) {
    let sum = a + b;
    let d = if sum > 0.0 { (a - b) / sum } else { 0.0 };
    (sum, d)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn reference_is_valid() {
        let p = CircuitParams::reference();
        p.validate().unwrap();
        assert_eq!(p.dim(), 51);
        assert_eq!(p.ej2_sum / p.ec, 30.0);
    }

    #[test]
    fn junction_energies_reduce_to_sum_and_asymmetry() {
        let p =
            CircuitParams::from_junctions(315.0, 285.0, 3150.0, 2850.0, 200.0, 0.0, 25).unwrap();
        assert!((p.ej1_sum - 600.0).abs() < 1e-12);
        assert!((p.d1 - 0.05).abs() < 1e-12);
        assert!((p.ej2_sum - 6000.0).abs() < 1e-12);
        assert!((p.d2 - 0.05).abs() < 1e-12);
        let zero = CircuitParams::from_junctions(0.0, 0.0, 10.0, 10.0, 1.0, 0.0, 8).unwrap();
        assert_eq!(zero.d1, 0.0);
    }

    #[test]
    fn rejects_out_of_domain_values() {
        let p = CircuitParams::reference();
        let err = CircuitParams { ec: -1.0, ..p }.validate().unwrap_err();
        assert!(err.to_string().contains("`ec`"));
        assert!(CircuitParams { d2: 1.0, ..p }.validate().is_err());
        assert!(CircuitParams { n_cut: 3, ..p }.validate().is_err());
        assert!(CircuitParams { ej1_sum: -0.1, ..p }.validate().is_err());
        assert!(CircuitParams { ng: f64::NAN, ..p }.validate().is_err());
    }
}
