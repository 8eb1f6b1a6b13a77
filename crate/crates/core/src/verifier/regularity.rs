//! Weak regularity partitions by iterated cut-witness splitting.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::kernel::{Partition, StepKernel};
use crate::scalar::{format_rational, Rational, Scalar};

#[derive(Clone, Debug, Serialize)]
pub struct PartitionReport {
    /// Class of each atom of the kernel.
    pub assignment: Vec<usize>,
    pub classes: usize,
    /// Cut-norm target `‖W_P - W‖□ <= target`.
    pub target: String,
    /// Final `‖W_P - W‖□`.
    pub discrepancy: String,
    /// `‖W_P‖₂²` after each round, starting from the trivial partition.
    pub energies: Vec<String>,
    /// Cut norm of `W_P - W` before each split.
    pub discrepancies: Vec<String>,
    /// `log2` of the class-count bound `2^{4 m² / eps²}`.
    pub class_cap_log2: f64,
}

impl PartitionReport {
    pub fn partition(&self) -> Result<Partition> {
        Partition::new(self.assignment.clone())
    }

    pub fn averaged_kernel(&self, w: &StepKernel<Rational>) -> Result<StepKernel<Rational>> {
        w.step_average(&self.partition()?)
    }
}

/// Refine the trivial partition of the atoms of `w` until
/// `‖W_P - W‖□ <= target`. Each round splits every class by the rows and
/// columns of an exact cut-norm witness of `W_P - W`, which raises
/// `‖W_P‖₂²` by at least the square of the discrepancy.
pub fn weak_regularity_partition(
    w: &StepKernel<Rational>,
    target: &Rational,
    m: usize,
    eps: &Rational,
) -> Result<PartitionReport> {
    let w = w.on_atoms()?;
    let atoms = w.row_count();
    let mut p = Partition::single(atoms);
    let mut energies = Vec::new();
    let mut discrepancies = Vec::new();
    let eps_f = eps.to_f64();
    let class_cap_log2 = 4.0 * (m * m) as f64 / (eps_f * eps_f);
    loop {
        let wp = w.step_average(&p)?;
        energies.push(format_rational(&wp.l2_squared()));
        let cut = wp.sub(&w)?.cut_norm();
        if !cut.exact {
            return Err(Error::CapExceeded {
                what: "atoms for an exact cut norm",
                required: atoms as u128,
                limit: crate::kernel::CUT_NORM_CAP as u128,
            });
        }
        discrepancies.push(format_rational(&cut.value));
        if cut.value <= *target {
            return Ok(PartitionReport {
                assignment: p.assignment().to_vec(),
                classes: p.class_count(),
                target: format_rational(target),
                discrepancy: format_rational(&cut.value),
                energies,
                discrepancies,
                class_cap_log2,
            });
        }
        let mut keys: Vec<(usize, bool, bool)> = Vec::new();
        let assignment: Vec<usize> = (0..atoms)
            .map(|a| {
                let key = (p.class_of(a), cut.witness.rows.contains(&a), cut.witness.cols.contains(&a));
                match keys.iter().position(|k| *k == key) {
                    Some(i) => i,
                    None => {
                        keys.push(key);
                        keys.len() - 1
                    }
                }
            })
            .collect();
        let next = Partition::new(assignment)?;
        if next.class_count() == p.class_count() {
            return Err(Error::PartitionFailure {
                classes: p.class_count(),
                discrepancy: format_rational(&cut.value),
            });
        }
        p = next;
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::kernel::KernelSampler;
    use crate::scalar::{parse_rational, rat, rat_int};

    #[test]
    fn energy_increases_and_target_is_met() {
        for seed in 0..8 {
            let w = KernelSampler::new(4, 4).range(rat_int(0), rat_int(2)).random_measures(seed % 2 == 0).sample(seed);
            let target = rat(1, 1000);
            let r = weak_regularity_partition(&w, &target, 4, &rat(1, 100)).unwrap();
            assert!(parse_rational(&r.discrepancy).unwrap() <= target);
            let e: Vec<Rational> = r.energies.iter().map(|s| parse_rational(s).unwrap()).collect();
            for pair in e.windows(2) {
                assert!(pair[1] > pair[0]);
            }
            assert!(*e.last().unwrap() <= w.l2_squared());
        }
    }

    #[test]
    fn zero_target_recovers_the_kernel_values() {
        let w = KernelSampler::new(3, 3).range(rat_int(0), rat_int(2)).symmetric(true).sample(2);
        let r = weak_regularity_partition(&w, &rat_int(0), 3, &rat(1, 10)).unwrap();
        let avg = r.averaged_kernel(&w).unwrap();
        assert_eq!(avg.sub(&w).unwrap().max_abs(), rat_int(0));
    }

    #[test]
    fn step_average_is_idempotent() {
        let w = KernelSampler::new(3, 2).range(rat_int(0), rat_int(2)).random_measures(true).sample(9);
        let r = weak_regularity_partition(&w, &rat(1, 20), 2, &rat(1, 10)).unwrap();
        let p = r.partition().unwrap();
        let once = w.step_average(&p).unwrap();
        assert_eq!(once.step_average(&p).unwrap(), once);
    }
}
