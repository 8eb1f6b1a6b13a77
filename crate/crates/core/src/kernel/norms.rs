use std::fmt;
use std::str::FromStr;

use serde::Serialize;

use super::{CutWitness, StepKernel};
use crate::density::cycle_density;
use crate::error::{Error, Result};
use crate::scalar::{ExtFloat, Scalar};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum NormKind {
    L2,
    Linf,
    Cut,
    /// `t(C_{2r}, U)^{1/(2r)}`.
    Schatten(u32),
}

impl FromStr for NormKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let lower = s.to_ascii_lowercase();
        match lower.as_str() {
            "l2" => return Ok(NormKind::L2),
            "linf" | "inf" | "max" => return Ok(NormKind::Linf),
            "cut" => return Ok(NormKind::Cut),
            _ => {}
        }
        let rest = lower
            .strip_prefix("schatten")
            .ok_or_else(|| Error::Parse(format!("unknown norm {s:?}")))?;
        let digits = rest.trim_matches(|c: char| c == ':' || c == '(' || c == ')' || c == '=' || c == '-');
        let r: u32 = digits
            .parse()
            .map_err(|_| Error::Parse(format!("bad Schatten index in {s:?}")))?;
        if r == 0 {
            return Err(Error::Parse("Schatten index must be at least 1".into()));
        }
        Ok(NormKind::Schatten(r))
    }
}

impl fmt::Display for NormKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            NormKind::L2 => f.write_str("l2"),
            NormKind::Linf => f.write_str("linf"),
            NormKind::Cut => f.write_str("cut"),
            NormKind::Schatten(r) => write!(f, "schatten({r})"),
        }
    }
}

/// Exact form of a norm: the value itself, or a radicand whose `degree`-th
/// root is the norm.
#[derive(Clone, Debug, PartialEq)]
pub enum NormValue<S> {
    Exact(S),
    Root { radicand: S, degree: u32 },
}

#[derive(Clone, Debug)]
pub struct NormReport<S> {
    pub kind: NormKind,
    pub value: NormValue<S>,
    pub approx: f64,
    /// The value is only a lower bound (cut norm beyond the enumeration cap).
    pub lower_bound: bool,
    pub witness: Option<CutWitness>,
}

fn root_approx<S: Scalar>(x: &S, degree: u32) -> f64 {
    let e = match x.to_rational() {
        Some(r) => ExtFloat::from_rational(&r),
        None => ExtFloat::from_f64(x.to_f64()),
    };
    e.powf(1.0 / f64::from(degree)).to_f64()
}

/// Clamps float noise around zero; a genuinely negative radicand is an error.
pub(crate) fn nonnegative_radicand<S: Scalar>(x: S, exponent: &str) -> Result<S> {
    if x >= S::zero() {
        return Ok(x);
    }
    if !S::EXACT && x.to_f64() >= -1e-12 {
        return Ok(S::zero());
    }
    Err(Error::NegativeRadicand { value: x.to_f64(), exponent: exponent.to_string() })
}

impl<S: Scalar> StepKernel<S> {
    /// `∫∫ U^2`.
    pub fn l2_squared(&self) -> S {
        self.map_values(|x| x.clone() * x.clone()).integral()
    }

    pub fn norm(&self, kind: NormKind) -> Result<NormReport<S>> {
        Ok(match kind {
            NormKind::L2 => {
                let sq = self.l2_squared();
                NormReport {
                    kind,
                    approx: root_approx(&sq, 2),
                    value: NormValue::Root { radicand: sq, degree: 2 },
                    lower_bound: false,
                    witness: None,
                }
            }
            NormKind::Linf => {
                let m = self.max_abs();
                NormReport { kind, approx: m.to_f64(), value: NormValue::Exact(m), lower_bound: false, witness: None }
            }
            NormKind::Cut => {
                let c = self.cut_norm();
                NormReport {
                    kind,
                    approx: c.value.to_f64(),
                    value: NormValue::Exact(c.value),
                    lower_bound: !c.exact,
                    witness: Some(c.witness),
                }
            }
            NormKind::Schatten(r) => {
                let t = cycle_density(self, r as usize)?;
                let t = nonnegative_radicand(t, &format!("1/{}", 2 * r))?;
                NormReport {
                    kind,
                    approx: root_approx(&t, 2 * r),
                    value: NormValue::Root { radicand: t, degree: 2 * r },
                    lower_bound: false,
                    witness: None,
                }
            }
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::kernel::{sign_kernel, KernelSampler};
    use crate::scalar::{rat, rat_int, Rational};

    #[test]
    fn parse_kinds() {
        assert_eq!("cut".parse::<NormKind>().unwrap(), NormKind::Cut);
        assert_eq!("schatten(3)".parse::<NormKind>().unwrap(), NormKind::Schatten(3));
        assert_eq!("schatten:2".parse::<NormKind>().unwrap(), NormKind::Schatten(2));
        assert!("schatten0".parse::<NormKind>().is_err());
        assert!("l7".parse::<NormKind>().is_err());
    }

    #[test]
    fn constant_norms() {
        let u = StepKernel::constant(rat(-3, 5));
        for kind in [NormKind::L2, NormKind::Linf, NormKind::Cut, NormKind::Schatten(2)] {
            let r = u.norm(kind).unwrap();
            assert!((r.approx - 0.6).abs() < 1e-15, "{kind}");
        }
    }

    #[test]
    fn sign_kernel_sandwich() {
        let u = sign_kernel();
        assert_eq!(u.norm(NormKind::Cut).unwrap().value, NormValue::Exact(rat(1, 4)));
        let s = u.norm(NormKind::Schatten(2)).unwrap();
        assert_eq!(s.value, NormValue::Root { radicand: rat_int(1), degree: 4 });
        assert_eq!(s.approx, 1.0);
    }

    #[test]
    fn c2_is_l2_squared() {
        for seed in 0..20 {
            let u: StepKernel<Rational> = KernelSampler::new(3, 2).random_measures(true).sample(seed);
            assert_eq!(cycle_density(&u, 1).unwrap(), u.l2_squared());
        }
    }

    #[test]
    fn c4_dominates_cut_fourth_power() {
        for seed in 0..100 {
            let u: StepKernel<Rational> = KernelSampler::new(1 + seed as usize % 4, 1 + seed as usize % 3)
                .random_measures(true)
                .sample(seed);
            let cut = u.cut_norm().value;
            let c4 = cycle_density(&u, 2).unwrap();
            assert!(cut.clone() * cut.clone() * cut.clone() * cut.clone() <= c4);
            assert!(c4 <= rat_int(4) * cut);
        }
    }

    #[test]
    fn gram_trace_is_l2() {
        // Σ_i λ_i (U ∘ Uᵀ)(i, i) over the atom structure equals ‖U‖₂²
        for seed in 0..10 {
            let u: StepKernel<Rational> = KernelSampler::new(3, 2).random_measures(true).sample(seed);
            let g = u.compose(&u.transpose()).unwrap();
            assert!(g.is_symmetric());
            let trace: Rational = (0..g.row_count())
                .map(|i| g.row_measures()[i].clone() * g.value(i, i).clone())
                .sum();
            assert_eq!(trace, u.l2_squared());
        }
    }
}
