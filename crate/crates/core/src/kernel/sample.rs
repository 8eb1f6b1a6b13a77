use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::StepKernel;
use crate::error::{Error, Result};
use crate::scalar::{rat, rat_int, Rational};

/// Seeded generator of rational step kernels. Values are drawn uniformly
/// from a grid of `grid + 1` points spanning the range.
#[derive(Clone, Debug)]
pub struct KernelSampler {
    rows: usize,
    cols: usize,
    lo: Rational,
    hi: Rational,
    grid: u32,
    symmetric: bool,
    mean_zero: bool,
    random_measures: bool,
}

impl KernelSampler {
    pub fn new(rows: usize, cols: usize) -> Self {
        KernelSampler {
            rows,
            cols,
            lo: rat_int(-1),
            hi: rat_int(1),
            grid: 1024,
            symmetric: false,
            mean_zero: false,
            random_measures: false,
        }
    }

    pub fn square(blocks: usize) -> Self {
        Self::new(blocks, blocks)
    }

    pub fn range(mut self, lo: Rational, hi: Rational) -> Self {
        self.lo = lo;
        self.hi = hi;
        self
    }

    pub fn grid(mut self, points: u32) -> Self {
        self.grid = points;
        self
    }

    pub fn symmetric(mut self, on: bool) -> Self {
        self.symmetric = on;
        self
    }

    /// Shift (and if needed shrink toward zero) so that `∫ U = 0`.
    pub fn mean_zero(mut self, on: bool) -> Self {
        self.mean_zero = on;
        self
    }

    /// Block measures drawn from weights `1..=4` instead of equal blocks.
    pub fn random_measures(mut self, on: bool) -> Self {
        self.random_measures = on;
        self
    }

    pub fn try_sample(&self, seed: u64) -> Result<StepKernel<Rational>> {
        if self.rows == 0 || self.cols == 0 {
            return Err(Error::InvalidKernel("sampler needs at least one block".into()));
        }
        if self.lo > self.hi || self.grid == 0 {
            return Err(Error::InvalidKernel("empty sampling range".into()));
        }
        if self.symmetric && self.rows != self.cols {
            return Err(Error::InvalidKernel("symmetric kernels need square block structure".into()));
        }
        if self.mean_zero && (self.lo > rat_int(0) || self.hi < rat_int(0)) {
            return Err(Error::InvalidKernel("mean-zero sampling needs 0 in the range".into()));
        }
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let measures = |n: usize, rng: &mut ChaCha8Rng| -> Vec<Rational> {
            if !self.random_measures {
                return vec![rat(1, n as i64); n];
            }
            let w: Vec<i64> = (0..n).map(|_| rng.gen_range(1..=4)).collect();
            let total: i64 = w.iter().sum();
            w.into_iter().map(|x| rat(x, total)).collect()
        };
        let rows = measures(self.rows, &mut rng);
        let cols = if self.symmetric { rows.clone() } else { measures(self.cols, &mut rng) };
        let span = self.hi.clone() - self.lo.clone();
        let grid = i64::from(self.grid);
        let draw = |rng: &mut ChaCha8Rng| self.lo.clone() + span.clone() * rat(rng.gen_range(0..=grid), grid);
        let (r, c) = (self.rows, self.cols);
        let mut values = vec![rat_int(0); r * c];
        for i in 0..r {
            let start = if self.symmetric { i } else { 0 };
            for j in start..c {
                let v = draw(&mut rng);
                if self.symmetric {
                    values[j * c + i] = v.clone();
                }
                values[i * c + j] = v;
            }
        }
        let mut k = StepKernel::from_flat(rows, cols, values)?;
        if self.mean_zero {
            k = k.shifted(&-k.integral());
            let (min, max) = k.bounds();
            let mut shrink = rat_int(1);
            if max > self.hi {
                shrink = shrink.min(self.hi.clone() / max);
            }
            if min < self.lo {
                shrink = shrink.min(self.lo.clone() / min);
            }
            k = k.scaled(&shrink);
        }
        Ok(k)
    }

    /// Like [`KernelSampler::try_sample`].
    ///
    /// # Panics
    /// If the sampler configuration is invalid.
    pub fn sample(&self, seed: u64) -> StepKernel<Rational> {
        self.try_sample(seed).expect("invalid sampler configuration")
    }
}

/// Two equal blocks, `+1` on the diagonal blocks and `-1` off them.
pub fn sign_kernel() -> StepKernel<Rational> {
    StepKernel::uniform(vec![vec![rat_int(1), rat_int(-1)], vec![rat_int(-1), rat_int(1)]]).unwrap()
}

/// Two equal blocks, `-1` on the second diagonal block and `+1` elsewhere.
pub fn corner_kernel() -> StepKernel<Rational> {
    StepKernel::uniform(vec![vec![rat_int(1), rat_int(1)], vec![rat_int(1), rat_int(-1)]]).unwrap()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn deterministic() {
        let s = KernelSampler::square(3).symmetric(true);
        assert_eq!(s.sample(7), s.sample(7));
        assert_ne!(s.sample(7), s.sample(8));
        assert!(s.sample(7).is_symmetric());
    }

    #[test]
    fn in_range() {
        for seed in 0..30 {
            let k = KernelSampler::new(3, 5).random_measures(true).sample(seed);
            assert!(k.in_w1());
        }
    }

    #[test]
    fn mean_zero_exact() {
        for seed in 0..30 {
            let k = KernelSampler::new(4, 2).mean_zero(true).random_measures(true).sample(seed);
            assert_eq!(k.integral(), rat_int(0));
            assert!(k.in_w1());
        }
        let k = KernelSampler::new(1, 1).range(rat_int(-1), rat_int(1)).mean_zero(true).sample(1);
        assert_eq!(k.values(), &[rat_int(0)]);
    }

    #[test]
    fn invalid_configurations() {
        assert!(KernelSampler::new(2, 3).symmetric(true).try_sample(0).is_err());
        assert!(KernelSampler::new(0, 3).try_sample(0).is_err());
        assert!(KernelSampler::new(2, 2).range(rat_int(1), rat_int(2)).mean_zero(true).try_sample(0).is_err());
    }
}
