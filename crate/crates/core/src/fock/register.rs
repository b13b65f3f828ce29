use std::fmt;

use crate::error::{Error, Result};

/// One bosonic mode: a label and an occupation cutoff (occupations `0..dim`).
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Mode {
    pub label: String,
    pub dim: usize,
}

/// Ordered set of modes defining a tensor-product Fock basis.
///
/// Basis states are enumerated lexicographically in the occupation tuple with
/// the first-listed mode most significant, so for `[(A,3),(B,3)]` the order is
/// `|00>, |01>, |02>, |10>, ...`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct ModeRegister {
    modes: Vec<Mode>,
}

impl ModeRegister {
    pub fn new<S: Into<String>>(specs: impl IntoIterator<Item = (S, usize)>) -> Result<Self> {
        let modes: Vec<Mode> = specs
            .into_iter()
            .map(|(label, dim)| Mode {
                label: label.into(),
                dim,
            })
            .collect();
        if modes.is_empty() {
            return Err(Error::EmptyRegister);
        }
        Self::from_modes(modes)
    }

    /// The zero-mode register: a single basis state, the scalar.
    pub fn empty() -> Self {
        ModeRegister { modes: Vec::new() }
    }

    pub(crate) fn from_modes(modes: Vec<Mode>) -> Result<Self> {
        for (i, m) in modes.iter().enumerate() {
            if m.dim < 2 {
                return Err(Error::CutoffTooSmall {
                    label: m.label.clone(),
                    dim: m.dim,
                });
            }
            if modes[..i].iter().any(|o| o.label == m.label) {
                return Err(Error::DuplicateLabel(m.label.clone()));
            }
        }
        Ok(ModeRegister { modes })
    }

    pub fn modes(&self) -> &[Mode] {
        &self.modes
    }

    pub fn len(&self) -> usize {
        self.modes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.modes.is_empty()
    }

    pub fn labels(&self) -> impl Iterator<Item = &str> {
        self.modes.iter().map(|m| m.label.as_str())
    }

    /// Total Hilbert-space dimension (product of cutoffs).
    pub fn dimension(&self) -> usize {
        self.modes.iter().map(|m| m.dim).product()
    }

    pub fn position(&self, label: &str) -> Result<usize> {
        self.modes
            .iter()
            .position(|m| m.label == label)
            .ok_or_else(|| Error::UnknownMode(label.to_string()))
    }

    pub fn dim_of(&self, label: &str) -> Result<usize> {
        Ok(self.modes[self.position(label)?].dim)
    }

    pub fn contains(&self, label: &str) -> bool {
        self.modes.iter().any(|m| m.label == label)
    }

    /// Register holding only the listed modes, in this register's order.
    pub fn subregister(&self, labels: &[&str]) -> Result<ModeRegister> {
        for l in labels {
            self.position(l)?;
        }
        let modes = self
            .modes
            .iter()
            .filter(|m| labels.contains(&m.label.as_str()))
            .cloned()
            .collect();
        Ok(ModeRegister { modes })
    }

    /// Register with the listed modes removed.
    pub fn complement(&self, labels: &[&str]) -> ModeRegister {
        let modes = self
            .modes
            .iter()
            .filter(|m| !labels.contains(&m.label.as_str()))
            .cloned()
            .collect();
        ModeRegister { modes }
    }

    /// Occupation tuple of basis state `index`.
    pub fn occupations(&self, mut index: usize) -> Vec<usize> {
        let mut occ = vec![0; self.modes.len()];
        for (slot, m) in occ.iter_mut().zip(&self.modes).rev() {
            *slot = index % m.dim;
            index /= m.dim;
        }
        occ
    }

    /// Basis index of an occupation tuple.
    pub fn index_of(&self, occupations: &[usize]) -> Result<usize> {
        if occupations.len() != self.modes.len() {
            return Err(Error::DimensionMismatch {
                expected: self.modes.len(),
                found: occupations.len(),
            });
        }
        let mut index = 0;
        for (&n, m) in occupations.iter().zip(&self.modes) {
            if n >= m.dim {
                return Err(Error::InvalidParameter(format!(
                    "occupation {n} exceeds cutoff of mode `{}`",
                    m.label
                )));
            }
            index = index * m.dim + n;
        }
        Ok(index)
    }

    /// Total particle number of basis state `index`.
    pub fn total_number(&self, index: usize) -> usize {
        self.occupations(index).iter().sum()
    }

    /// Split every basis index into (index over `part`, index over the rest),
    /// both in this register's order. `part` must be a subregister.
    pub(crate) fn split_indices(&self, part: &ModeRegister) -> Result<Vec<(usize, usize)>> {
        let mut in_part = vec![false; self.modes.len()];
        for m in &part.modes {
            let p = self.position(&m.label)?;
            if self.modes[p].dim != m.dim {
                return Err(Error::ModeDimensionMismatch {
                    label: m.label.clone(),
                    expected: self.modes[p].dim,
                    found: m.dim,
                });
            }
            in_part[p] = true;
        }
        // Position of each part mode within `part`'s own order.
        let part_order: Vec<usize> = self
            .modes
            .iter()
            .filter_map(|m| part.modes.iter().position(|pm| pm.label == m.label))
            .collect();
        let mut out = Vec::with_capacity(self.dimension());
        for idx in 0..self.dimension() {
            let occ = self.occupations(idx);
            let mut part_occ = vec![0; part.modes.len()];
            let mut rest = 0;
            let mut k = 0;
            for (i, m) in self.modes.iter().enumerate() {
                if in_part[i] {
                    part_occ[part_order[k]] = occ[i];
                    k += 1;
                } else {
                    rest = rest * m.dim + occ[i];
                }
            }
            let mut pi = 0;
            for (n, m) in part_occ.iter().zip(&part.modes) {
                pi = pi * m.dim + n;
            }
            out.push((pi, rest));
        }
        Ok(out)
    }
}

impl fmt::Display for ModeRegister {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[")?;
        for (i, m) in self.modes.iter().enumerate() {
            if i > 0 {
                write!(f, ", ")?;
            }
            write!(f, "{}:{}", m.label, m.dim)?;
        }
        write!(f, "]")
    }
}

/// Build a register from `(label, cutoff)` pairs.
pub fn build_register<S: Into<String>>(
    specs: impl IntoIterator<Item = (S, usize)>,
) -> Result<ModeRegister> {
    ModeRegister::new(specs)
}
