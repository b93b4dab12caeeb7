//! Spin-to-spin inhomogeneity of detunings and couplings.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{HarnessError, Result};
use crate::params::{ParamSpec, Params, Section};

/// Default relative disorder bound (5 %).
pub const DISORDER_BOUND: f64 = 0.05;

/// Detuning offsets δ_dg^j (λ units) and coupling factors λ^j/λ.
#[derive(Clone, Debug, PartialEq)]
pub struct DisorderSpec {
    pub delta_dg_offsets: Vec<f64>,
    pub lambda_factors: Vec<f64>,
}

impl DisorderSpec {
    pub fn none(n_spins: usize) -> Self {
        Self { delta_dg_offsets: vec![0.0; n_spins], lambda_factors: vec![1.0; n_spins] }
    }

    /// Checks |offset| ≤ bound and |factor − 1| ≤ bound.
    pub fn validate(&self, n_spins: usize, bound: f64) -> Result<()> {
        if self.delta_dg_offsets.len() != n_spins || self.lambda_factors.len() != n_spins {
            return Err(HarnessError::config(format!(
                "disorder vectors have {} and {} entries for {n_spins} spins",
                self.delta_dg_offsets.len(),
                self.lambda_factors.len()
            )));
        }
        let slack = 1e-12;
        if let Some(x) = self.delta_dg_offsets.iter().find(|x| x.is_nan() || x.abs() > bound + slack) {
            return Err(HarnessError::config(format!("detuning offset {x} exceeds the disorder bound {bound}")));
        }
        if let Some(f) = self.lambda_factors.iter().find(|f| f.is_nan() || (*f - 1.0).abs() > bound + slack) {
            return Err(HarnessError::config(format!("coupling factor {f} exceeds the disorder bound {bound}")));
        }
        Ok(())
    }

    /// Independent uniform draws in [−bound, bound] and [1 − bound, 1 + bound].
    pub fn sample(n_spins: usize, bound: f64, seed: u64) -> Result<Self> {
        if !(0.0..=DISORDER_BOUND).contains(&bound) {
            return Err(HarnessError::config(format!("disorder bound must lie in [0, {DISORDER_BOUND}], got {bound}")));
        }
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let mut draw = || if bound == 0.0 { 0.0 } else { rng.gen_range(-bound..=bound) };
        let delta_dg_offsets = (0..n_spins).map(|_| draw()).collect();
        let lambda_factors = (0..n_spins).map(|_| 1.0 + draw()).collect();
        Ok(Self { delta_dg_offsets, lambda_factors })
    }

    /// Applies the disorder on top of homogeneous detuning and coupling.
    pub fn apply(&self, delta_dg: &[f64], lambda: &[f64]) -> (Vec<f64>, Vec<f64>) {
        let d = delta_dg.iter().zip(&self.delta_dg_offsets).map(|(a, b)| a + b).collect();
        let l = lambda.iter().zip(&self.lambda_factors).map(|(a, b)| a * b).collect();
        (d, l)
    }
}

/// How a scenario obtains its disorder.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum DisorderMode {
    None,
    /// Explicit vectors from the configuration.
    Explicit,
    /// Seeded uniform draws within the bound.
    Seeded,
}

impl DisorderMode {
    pub fn parse(text: &str) -> Result<Self> {
        match text {
            "none" => Ok(DisorderMode::None),
            "explicit" => Ok(DisorderMode::Explicit),
            "seeded" => Ok(DisorderMode::Seeded),
            other => {
                Err(HarnessError::config(format!("disorder mode must be none, explicit or seeded, got {other:?}")))
            }
        }
    }
}

/// Declared `[disorder]` keys with the given defaults.
pub fn disorder_specs(mode: &str, offsets: &[f64], factors: &[f64]) -> Vec<ParamSpec> {
    vec![
        ParamSpec::text(Section::Disorder, "mode", mode, "none, explicit or seeded"),
        ParamSpec::list(Section::Disorder, "delta_dg_offsets", offsets, "explicit detuning offsets, λ units"),
        ParamSpec::list(Section::Disorder, "lambda_factors", factors, "explicit coupling factors λ^j/λ"),
        ParamSpec::float(Section::Disorder, "bound", DISORDER_BOUND, "largest offset and largest |factor − 1|"),
    ]
}

/// Disorder selected by the `[disorder]` keys; seeded draws use `seed`.
pub fn resolve_disorder(p: &Params, n_spins: usize, seed: u64) -> Result<(DisorderMode, DisorderSpec)> {
    let mode = DisorderMode::parse(p.text("mode")?)?;
    let bound = p.float("bound")?;
    if !(0.0..=DISORDER_BOUND).contains(&bound) {
        return Err(HarnessError::config(format!("disorder bound must lie in [0, {DISORDER_BOUND}], got {bound}")));
    }
    let spec = match mode {
        DisorderMode::None => DisorderSpec::none(n_spins),
        DisorderMode::Explicit => DisorderSpec {
            delta_dg_offsets: p.per_spin("delta_dg_offsets", n_spins)?,
            lambda_factors: p.per_spin("lambda_factors", n_spins)?,
        },
        DisorderMode::Seeded => DisorderSpec::sample(n_spins, bound, seed)?,
    };
    spec.validate(n_spins, bound)?;
    Ok((mode, spec))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn samples_respect_the_bound() {
        for seed in 0..200 {
            let d = DisorderSpec::sample(6, DISORDER_BOUND, seed).unwrap();
            d.validate(6, DISORDER_BOUND).unwrap();
        }
    }

    #[test]
    fn same_seed_same_draw() {
        let a = DisorderSpec::sample(4, 0.03, 11).unwrap();
        let b = DisorderSpec::sample(4, 0.03, 11).unwrap();
        let c = DisorderSpec::sample(4, 0.03, 12).unwrap();
        assert_eq!(a, b);
        assert_ne!(a, c);
    }

    #[test]
    fn rejects_large_disorder() {
        let d = DisorderSpec { delta_dg_offsets: vec![0.0, 0.06], lambda_factors: vec![1.0, 1.0] };
        assert!(d.validate(2, DISORDER_BOUND).is_err());
        let d = DisorderSpec { delta_dg_offsets: vec![0.0, 0.0], lambda_factors: vec![0.94, 1.0] };
        assert!(d.validate(2, DISORDER_BOUND).is_err());
        assert!(DisorderSpec::sample(2, 0.2, 0).is_err());
    }

    #[test]
    fn applies_offsets_and_factors() {
        let d = DisorderSpec { delta_dg_offsets: vec![-0.03, 0.02], lambda_factors: vec![1.03, 0.98] };
        let (delta, lambda) = d.apply(&[0.0, 1.0], &[1.0, 2.0]);
        assert_eq!(delta, vec![-0.03, 1.02]);
        assert_eq!(lambda, vec![1.03, 1.96]);
    }
}
