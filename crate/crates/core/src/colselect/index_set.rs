use std::fmt;

use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Provenance {
    Greedy,
    Qrcp,
    Uniform,
    Refined,
}

impl Provenance {
    pub fn as_str(self) -> &'static str {
        match self {
            Provenance::Greedy => "greedy",
            Provenance::Qrcp => "qrcp",
            Provenance::Uniform => "uniform",
            Provenance::Refined => "refined",
        }
    }
}

impl fmt::Display for Provenance {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

/// Ordered set of distinct zero-based column indices into `[0, n)`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct IndexSet {
    indices: Vec<usize>,
    n: usize,
    provenance: Provenance,
}

impl IndexSet {
    pub fn new(indices: Vec<usize>, n: usize, provenance: Provenance) -> Result<Self> {
        if indices.is_empty() {
            return Err(Error::InvalidIndexSet("empty".into()));
        }
        if indices.len() > n {
            return Err(Error::InvalidIndexSet(format!("{} indices for n = {n}", indices.len())));
        }
        let mut seen = vec![false; n];
        for &i in &indices {
            if i >= n {
                return Err(Error::InvalidIndexSet(format!("index {i} out of range for n = {n}")));
            }
            if std::mem::replace(&mut seen[i], true) {
                return Err(Error::InvalidIndexSet(format!("duplicate index {i}")));
            }
        }
        Ok(Self { indices, n, provenance })
    }

    pub fn indices(&self) -> &[usize] {
        &self.indices
    }

    pub fn len(&self) -> usize {
        self.indices.len()
    }

    pub fn is_empty(&self) -> bool {
        self.indices.is_empty()
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn provenance(&self) -> Provenance {
        self.provenance
    }

    pub fn contains(&self, i: usize) -> bool {
        self.indices.contains(&i)
    }

    pub fn with_provenance(mut self, provenance: Provenance) -> Self {
        self.provenance = provenance;
        self
    }

    /// Indices in increasing order (set semantics).
    pub fn sorted(&self) -> Vec<usize> {
        let mut v = self.indices.clone();
        v.sort_unstable();
        v
    }
}
