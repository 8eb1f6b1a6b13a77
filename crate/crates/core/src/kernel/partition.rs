use super::{common_refinement, StepKernel};
use crate::error::{Error, Result};
use crate::scalar::Scalar;

/// Surjective map from the atoms of a kernel (blocks of the common
/// refinement of its row and column structures) onto classes `0..k`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Partition {
    assignment: Vec<usize>,
    classes: usize,
}

impl Partition {
    pub fn new(assignment: Vec<usize>) -> Result<Self> {
        if assignment.is_empty() {
            return Err(Error::InvalidPartition("no atoms".into()));
        }
        let classes = assignment.iter().max().unwrap() + 1;
        let mut hit = vec![false; classes];
        for &c in &assignment {
            hit[c] = true;
        }
        if let Some(empty) = hit.iter().position(|h| !h) {
            return Err(Error::EmptyClass(empty));
        }
        Ok(Partition { assignment, classes })
    }

    pub fn identity(atoms: usize) -> Self {
        Partition { assignment: (0..atoms).collect(), classes: atoms }
    }

    pub fn single(atoms: usize) -> Self {
        Partition { assignment: vec![0; atoms], classes: 1 }
    }

    pub fn class_count(&self) -> usize {
        self.classes
    }

    pub fn atom_count(&self) -> usize {
        self.assignment.len()
    }

    pub fn class_of(&self, atom: usize) -> usize {
        self.assignment[atom]
    }

    pub fn assignment(&self) -> &[usize] {
        &self.assignment
    }

    pub fn members(&self, class: usize) -> Vec<usize> {
        (0..self.atom_count()).filter(|&a| self.assignment[a] == class).collect()
    }

    pub fn class_measures<S: Scalar>(&self, atoms: &[S]) -> Vec<S> {
        let mut m = vec![S::zero(); self.classes];
        for (a, x) in atoms.iter().enumerate() {
            m[self.assignment[a]] = m[self.assignment[a]].clone() + x.clone();
        }
        m
    }

    /// Splits class `class` into the atoms in `part` and the rest; the new
    /// class gets the next free index.
    pub fn split(&self, class: usize, part: &[usize]) -> Result<Self> {
        let mut assignment = self.assignment.clone();
        for &a in part {
            if assignment[a] != class {
                return Err(Error::InvalidPartition(format!("atom {a} is not in class {class}")));
            }
            assignment[a] = self.classes;
        }
        Partition::new(assignment)
    }
}

impl<S: Scalar> StepKernel<S> {
    /// Atom measures: common refinement of row and column blocks.
    pub fn atoms(&self) -> Result<Vec<S>> {
        Ok(common_refinement(self.row_measures(), self.col_measures())?.0)
    }

    /// Kernel on the classes of `p`: the average of `W` over each product of
    /// classes.
    pub fn quotient(&self, p: &Partition) -> Result<Self> {
        let w = self.on_atoms()?;
        if p.atom_count() != w.row_count() {
            return Err(Error::InvalidPartition(format!(
                "partition has {} atoms, kernel has {}",
                p.atom_count(),
                w.row_count()
            )));
        }
        let measures = p.class_measures(w.row_measures());
        let k = p.class_count();
        let mut mass = vec![S::zero(); k * k];
        for a in 0..w.row_count() {
            for b in 0..w.col_count() {
                let idx = p.class_of(a) * k + p.class_of(b);
                mass[idx] = mass[idx].clone()
                    + w.row_measures()[a].clone() * w.col_measures()[b].clone() * w.value(a, b).clone();
            }
        }
        let values = (0..k * k)
            .map(|idx| mass[idx].clone() / (measures[idx / k].clone() * measures[idx % k].clone()))
            .collect();
        StepKernel::from_flat(measures.clone(), measures, values)
    }

    /// `W_P` on the atom structure: each atom pair gets the average over the
    /// product of its classes.
    pub fn step_average(&self, p: &Partition) -> Result<Self> {
        let q = self.quotient(p)?;
        let atoms = self.atoms()?;
        let n = atoms.len();
        let mut values = Vec::with_capacity(n * n);
        for a in 0..n {
            for b in 0..n {
                values.push(q.value(p.class_of(a), p.class_of(b)).clone());
            }
        }
        StepKernel::from_flat(atoms.clone(), atoms, values)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::kernel::KernelSampler;
    use crate::scalar::{rat_int, Rational};

    #[test]
    fn identity_and_single() {
        let w = KernelSampler::new(3, 3).range(rat_int(0), rat_int(2)).random_measures(true).sample(4);
        let atoms = w.atoms().unwrap().len();
        assert_eq!(w.step_average(&Partition::identity(atoms)).unwrap(), w.on_atoms().unwrap());
        let single = w.step_average(&Partition::single(atoms)).unwrap();
        assert!(single.values().iter().all(|v| *v == w.integral()));
    }

    #[test]
    fn averaging_is_projection_and_bounded() {
        for seed in 0..20 {
            let w = KernelSampler::new(4, 3).range(rat_int(0), rat_int(2)).random_measures(true).sample(seed);
            let n = w.atoms().unwrap().len();
            let p = Partition::new((0..n).map(|a| a % 2).collect()).unwrap();
            let once = w.step_average(&p).unwrap();
            assert_eq!(once.step_average(&p).unwrap(), once);
            assert_eq!(once.integral(), w.integral());
            let (lo, hi) = once.bounds();
            assert!(lo >= rat_int(0) && hi <= rat_int(2));
        }
    }

    #[test]
    fn empty_class_rejected() {
        assert!(matches!(Partition::new(vec![0, 2]), Err(Error::EmptyClass(1))));
        let w = StepKernel::<Rational>::constant(rat_int(1));
        assert!(w.quotient(&Partition::identity(2)).is_err());
    }
}
