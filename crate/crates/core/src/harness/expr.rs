//! Formal expressions in homomorphism densities: sums of products of
//! (possibly absolute, possibly fractional) powers of densities.

use std::fmt;
use std::ops::{Add, Mul};

use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::bigraph::Bigraph;
use crate::density::density;
use crate::error::{Error, Result};
use crate::kernel::StepKernel;
use crate::scalar::{format_rational, rat_int, Rational, Scalar};

/// A quantity computed from the kernel.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Atom {
    /// `t(F, U)`; for a labeled `F`, the rooted density at the current
    /// anchors.
    Density { graph: Bigraph, name: String },
    /// `‖U‖□`.
    CutNorm,
}

impl Atom {
    pub fn graph(&self) -> Option<&Bigraph> {
        match self {
            Atom::Density { graph, .. } => Some(graph),
            Atom::CutNorm => None,
        }
    }

    /// Edge count, the degree of homogeneity in the kernel.
    fn degree(&self) -> usize {
        match self {
            Atom::Density { graph, .. } => graph.edge_count(),
            Atom::CutNorm => 1,
        }
    }
}

impl fmt::Display for Atom {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Atom::Density { name, .. } => write!(f, "t({name})"),
            Atom::CutNorm => f.write_str("cut(U)"),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Power {
    pub atom: Atom,
    pub abs: bool,
    /// Nonnegative. Non-integer exponents need a nonnegative base.
    pub exponent: Rational,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Product {
    pub coeff: Rational,
    pub factors: Vec<Power>,
}

/// `Σ_i c_i Π_j |a_ij|^{q_ij}`; the empty sum is zero.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DensityExpr {
    pub terms: Vec<Product>,
}

/// Value of an expression: exact when every exponent is an integer and the
/// back end is exact, otherwise a double.
#[derive(Clone, Debug, PartialEq)]
pub enum ExprValue<S> {
    Exact(S),
    Approx(f64),
}

impl<S: Scalar> ExprValue<S> {
    pub fn to_f64(&self) -> f64 {
        match self {
            ExprValue::Exact(s) => s.to_f64(),
            ExprValue::Approx(x) => *x,
        }
    }

    pub fn exact(&self) -> Option<&S> {
        match self {
            ExprValue::Exact(s) => Some(s),
            ExprValue::Approx(_) => None,
        }
    }

    /// `self - other`.
    pub fn minus(&self, other: &Self) -> Self {
        match (self, other) {
            (ExprValue::Exact(a), ExprValue::Exact(b)) => ExprValue::Exact(a.clone() - b.clone()),
            _ => ExprValue::Approx(self.to_f64() - other.to_f64()),
        }
    }
}

impl DensityExpr {
    pub fn zero() -> Self {
        DensityExpr { terms: Vec::new() }
    }

    pub fn constant(c: Rational) -> Self {
        DensityExpr { terms: vec![Product { coeff: c, factors: Vec::new() }] }
    }

    pub fn atom(atom: Atom) -> Self {
        DensityExpr {
            terms: vec![Product {
                coeff: rat_int(1),
                factors: vec![Power { atom, abs: false, exponent: rat_int(1) }],
            }],
        }
    }

    /// `t(F, ·)` displayed as `name`.
    pub fn t(graph: Bigraph, name: impl Into<String>) -> Self {
        Self::atom(Atom::Density { graph, name: name.into() })
    }

    pub fn cut_norm() -> Self {
        Self::atom(Atom::CutNorm)
    }

    fn single(&self) -> &Product {
        assert_eq!(self.terms.len(), 1, "power and absolute value apply to a single product");
        &self.terms[0]
    }

    /// Raises a single product to `q`, factor by factor. The coefficient
    /// must be one.
    ///
    /// # Panics
    /// On sums, on a coefficient other than one, or on a negative exponent.
    pub fn pow(&self, q: Rational) -> Self {
        assert!(!q.is_negative(), "negative exponent");
        let p = self.single();
        assert!(p.coeff.is_one(), "power of a scaled product");
        let factors = p
            .factors
            .iter()
            .map(|f| Power { atom: f.atom.clone(), abs: f.abs, exponent: f.exponent.clone() * q.clone() })
            .collect();
        DensityExpr { terms: vec![Product { coeff: rat_int(1), factors }] }
    }

    pub fn powi(&self, k: i64) -> Self {
        self.pow(rat_int(k))
    }

    /// Absolute value of every factor of a single product with a
    /// nonnegative coefficient.
    pub fn abs(&self) -> Self {
        let p = self.single();
        assert!(!p.coeff.is_negative(), "absolute value of a negated product");
        let factors = p.factors.iter().map(|f| Power { abs: true, ..f.clone() }).collect();
        DensityExpr { terms: vec![Product { coeff: p.coeff.clone(), factors }] }
    }

    pub fn scale(&self, c: Rational) -> Self {
        DensityExpr {
            terms: self
                .terms
                .iter()
                .map(|p| Product { coeff: p.coeff.clone() * c.clone(), factors: p.factors.clone() })
                .collect(),
        }
    }

    /// Distinct atoms, in first-appearance order.
    pub fn atoms(&self) -> Vec<&Atom> {
        let mut out: Vec<&Atom> = Vec::new();
        for p in &self.terms {
            for f in &p.factors {
                if !out.contains(&&f.atom) {
                    out.push(&f.atom);
                }
            }
        }
        out
    }

    pub fn all_integer_exponents(&self) -> bool {
        self.terms.iter().all(|p| p.factors.iter().all(|f| f.exponent.is_integer()))
    }

    /// Common degree of homogeneity of all terms, if there is one. Zero
    /// expressions are homogeneous of every degree and give `None`.
    pub fn degree(&self) -> Option<Rational> {
        let mut out: Option<Rational> = None;
        for p in &self.terms {
            if p.coeff.is_zero() {
                continue;
            }
            let d: Rational = p
                .factors
                .iter()
                .map(|f| f.exponent.clone() * rat_int(f.atom.degree() as i64))
                .sum();
            match &out {
                None => out = Some(d),
                Some(prev) if *prev == d => {}
                Some(_) => return None,
            }
        }
        out
    }

    pub fn is_zero(&self) -> bool {
        self.terms.iter().all(|p| p.coeff.is_zero())
    }

    /// Replaces every density atom by `f(graph, name)`.
    pub fn map_graphs(&self, f: &impl Fn(&Bigraph, &str) -> (Bigraph, String)) -> Self {
        DensityExpr {
            terms: self
                .terms
                .iter()
                .map(|p| Product {
                    coeff: p.coeff.clone(),
                    factors: p
                        .factors
                        .iter()
                        .map(|pw| {
                            let atom = match &pw.atom {
                                Atom::Density { graph, name } => {
                                    let (graph, name) = f(graph, name);
                                    Atom::Density { graph, name }
                                }
                                Atom::CutNorm => Atom::CutNorm,
                            };
                            Power { atom, ..pw.clone() }
                        })
                        .collect(),
                })
                .collect(),
        }
    }

    /// Evaluates with atom values supplied by `value`.
    pub fn evaluate_with<S: Scalar>(&self, value: impl Fn(&Atom) -> Result<S>) -> Result<ExprValue<S>> {
        let mut exact = S::zero();
        let mut approx = 0.0;
        let mut is_exact = S::EXACT || self.all_integer_exponents();
        for p in &self.terms {
            let mut e = S::from_rational(&p.coeff);
            let mut a = Scalar::to_f64(&p.coeff);
            for f in &p.factors {
                let mut v = value(&f.atom)?;
                if f.abs {
                    v = v.abs();
                }
                if f.exponent.is_integer() {
                    let k = f.exponent.to_integer().to_u32().ok_or_else(|| {
                        Error::InvalidModel(format!("exponent {} out of range", format_rational(&f.exponent)))
                    })?;
                    a *= v.to_f64().powi(k as i32);
                    e = e * v.pow_u32(k);
                } else {
                    is_exact = false;
                    let v = crate::kernel::nonnegative_radicand(v, &format_rational(&f.exponent))?;
                    let q = Scalar::to_f64(&f.exponent);
                    let x = match v.to_rational() {
                        Some(r) => crate::scalar::ExtFloat::from_rational(&r).powf(q).to_f64(),
                        None => v.to_f64().powf(q),
                    };
                    a *= x;
                }
            }
            exact = exact + e;
            approx += a;
        }
        if is_exact && self.all_integer_exponents() {
            Ok(ExprValue::Exact(exact))
        } else {
            Ok(ExprValue::Approx(approx))
        }
    }

    /// Evaluates an expression over unlabeled graphs.
    pub fn evaluate<S: Scalar>(&self, u: &StepKernel<S>) -> Result<ExprValue<S>> {
        self.evaluate_with(|atom| match atom {
            Atom::Density { graph, .. } => {
                if graph.label_count() > 0 {
                    return Err(Error::MissingAnchor(1));
                }
                density(graph, u)
            }
            Atom::CutNorm => Ok(u.cut_norm().value),
        })
    }
}

impl Add for DensityExpr {
    type Output = DensityExpr;

    fn add(mut self, rhs: DensityExpr) -> DensityExpr {
        self.terms.extend(rhs.terms);
        self
    }
}

impl Mul for DensityExpr {
    type Output = DensityExpr;

    fn mul(self, rhs: DensityExpr) -> DensityExpr {
        let mut terms = Vec::with_capacity(self.terms.len() * rhs.terms.len());
        for a in &self.terms {
            for b in &rhs.terms {
                let mut factors = a.factors.clone();
                factors.extend(b.factors.iter().cloned());
                terms.push(Product { coeff: a.coeff.clone() * b.coeff.clone(), factors });
            }
        }
        DensityExpr { terms }
    }
}

impl fmt::Display for DensityExpr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return f.write_str("0");
        }
        for (i, p) in self.terms.iter().enumerate() {
            if i > 0 {
                f.write_str(" + ")?;
            }
            let mut parts = Vec::new();
            if !p.coeff.is_one() || p.factors.is_empty() {
                parts.push(format_rational(&p.coeff));
            }
            for pw in &p.factors {
                let base = if pw.abs { format!("|{}|", pw.atom) } else { pw.atom.to_string() };
                if pw.exponent.is_one() {
                    parts.push(base);
                } else {
                    parts.push(format!("{base}^({})", format_rational(&pw.exponent)));
                }
            }
            f.write_str(&parts.join(" "))?;
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::bigraph::family::*;
    use crate::kernel::KernelSampler;
    use crate::scalar::rat;

    fn c(n: usize) -> DensityExpr {
        DensityExpr::t(cycle(n), format!("C{n}"))
    }

    #[test]
    fn constant_kernel_roots() {
        let u = StepKernel::constant(rat(-3, 5));
        let e = c(4).pow(rat(1, 4));
        assert!((e.evaluate(&u).unwrap().to_f64() - 0.6).abs() < 1e-15);
        let e = c(6) * c(4).pow(rat(1, 4));
        // (-3/5)^6 * 3/5
        assert!((e.evaluate(&u).unwrap().to_f64() - 0.6f64.powi(7)).abs() < 1e-15);
        assert_eq!(c(6).evaluate(&u).unwrap(), ExprValue::Exact(rat(729, 15625)));
    }

    #[test]
    fn mixed_sum_matches_direct_formula() {
        let p3 = DensityExpr::t(path(3), "P3");
        let e = (c(4) + p3).scale(rat(1, 2)) * c(4).pow(rat(1, 8));
        assert_eq!(e.terms.len(), 2);
        for seed in 0..20 {
            let u: StepKernel<Rational> = KernelSampler::new(3, 4).random_measures(true).sample(seed);
            let got = e.evaluate(&u).unwrap().to_f64();
            // direct: integrate the block sums by hand
            let f = u.to_f64();
            let (r, cc) = (f.row_count(), f.col_count());
            let (rm, cm) = (f.row_measures(), f.col_measures());
            let mut c4: f64 = 0.0;
            for i in 0..r {
                for k in 0..r {
                    let mut s = 0.0;
                    for j in 0..cc {
                        s += cm[j] * f.value(i, j) * f.value(k, j);
                    }
                    c4 += rm[i] * rm[k] * s * s;
                }
            }
            // the middle node of P3 is a column variable
            let mut p3 = 0.0;
            for j in 0..cc {
                let mut s = 0.0;
                for i in 0..r {
                    s += rm[i] * f.value(i, j);
                }
                p3 += cm[j] * s * s;
            }
            let want = 0.5 * (c4 + p3) * c4.powf(0.125);
            assert!((got - want).abs() < 1e-12, "seed {seed}: {got} vs {want}");
        }
    }

    #[test]
    fn degrees_and_display() {
        let e = c(6) * c(4).pow(rat(1, 4));
        assert_eq!(e.degree(), Some(rat_int(7)));
        assert_eq!(e.to_string(), "t(C6) t(C4)^(1/4)");
        assert_eq!((c(4) + c(6)).degree(), None);
        assert_eq!(DensityExpr::zero().degree(), None);
        assert_eq!(DensityExpr::t(path(3), "P3").abs().to_string(), "|t(P3)|");
        assert_eq!(DensityExpr::cut_norm().powi(4).degree(), Some(rat_int(4)));
    }

    #[test]
    fn negative_base_under_root_is_an_error() {
        let u = StepKernel::constant(rat_int(-1));
        let e = DensityExpr::t(path(2), "K2").pow(rat(1, 2));
        assert!(e.evaluate(&u).is_err());
        assert!(e.abs().evaluate(&u).is_ok());
    }
}
