//! Sparse exact-rational states and operators on `N` parties of uniform local
//! dimension, with partial trace and partial transpose.
//!
//! Parties are indexed from 0. After a partial trace the retained parties keep
//! their ascending original order.

use std::collections::BTreeMap;
use std::fmt;

use num_traits::Zero;

use crate::error::{Error, Result};
use crate::linalg::SymmetricMatrix;
use crate::scalar::{ExactScalar, Limits};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct SystemShape {
    n_parties: usize,
    local_dim: usize,
}

impl SystemShape {
    pub fn new(n_parties: usize, local_dim: usize) -> Result<Self> {
        if n_parties == 0 {
            return Err(Error::Shape("at least one party is required".into()));
        }
        if !(2..=256).contains(&local_dim) {
            return Err(Error::Shape(format!("local dimension {local_dim} not in 2..=256")));
        }
        Ok(SystemShape {
            n_parties,
            local_dim,
        })
    }

    pub fn qubits(n_parties: usize) -> Result<Self> {
        Self::new(n_parties, 2)
    }

    pub fn n_parties(&self) -> usize {
        self.n_parties
    }

    pub fn local_dim(&self) -> usize {
        self.local_dim
    }

    fn check_party(&self, index: usize) -> Result<()> {
        if index >= self.n_parties {
            return Err(Error::PartyOutOfRange {
                index,
                parties: self.n_parties,
            });
        }
        Ok(())
    }
}

/// Computational-basis label: one symbol per party.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct BasisLabel(Vec<u8>);

impl BasisLabel {
    pub fn new(symbols: Vec<u8>, shape: SystemShape) -> Result<Self> {
        let label = BasisLabel(symbols);
        label.check(shape)?;
        Ok(label)
    }

    fn check(&self, shape: SystemShape) -> Result<()> {
        if self.0.len() != shape.n_parties
            || self.0.iter().any(|&s| s as usize >= shape.local_dim)
        {
            return Err(Error::BadLabel {
                label: self.to_string(),
                parties: shape.n_parties,
                dim: shape.local_dim,
            });
        }
        Ok(())
    }

    pub fn symbols(&self) -> &[u8] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    /// Symbols at the given positions, in the given order.
    pub fn restrict(&self, keep: &[usize]) -> BasisLabel {
        BasisLabel(keep.iter().map(|&i| self.0[i]).collect())
    }

    pub fn agrees_on(&self, other: &BasisLabel, positions: &[usize]) -> bool {
        positions.iter().all(|&i| self.0[i] == other.0[i])
    }

    pub fn with_symbol(&self, position: usize, symbol: u8) -> BasisLabel {
        let mut s = self.0.clone();
        s[position] = symbol;
        BasisLabel(s)
    }

    /// Parses the textual form produced by `Display`.
    pub fn parse(text: &str, shape: SystemShape) -> Result<Self> {
        let bad = || Error::BadLabel {
            label: text.to_string(),
            parties: shape.n_parties,
            dim: shape.local_dim,
        };
        let symbols: Vec<u8> = if shape.local_dim <= 10 {
            text.bytes()
                .map(|b| b.checked_sub(b'0').filter(|d| *d < 10).ok_or_else(bad))
                .collect::<Result<_>>()?
        } else {
            text.split('.')
                .map(|t| t.parse::<u8>().map_err(|_| bad()))
                .collect::<Result<_>>()?
        };
        BasisLabel::new(symbols, shape)
    }
}

impl fmt::Display for BasisLabel {
    /// Contiguous digits when every symbol is a single digit, dot-separated
    /// integers otherwise.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.iter().all(|&s| s < 10) {
            for s in &self.0 {
                write!(f, "{s}")?;
            }
            Ok(())
        } else {
            let parts: Vec<String> = self.0.iter().map(u8::to_string).collect();
            f.write_str(&parts.join("."))
        }
    }
}

/// Unnormalized pure state with real rational amplitudes.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PureVector {
    shape: SystemShape,
    amplitudes: BTreeMap<BasisLabel, ExactScalar>,
}

impl PureVector {
    /// Repeated labels are summed; zero amplitudes are dropped. Fails if
    /// nothing nonzero remains.
    pub fn new(
        shape: SystemShape,
        terms: impl IntoIterator<Item = (BasisLabel, ExactScalar)>,
    ) -> Result<Self> {
        let mut amplitudes: BTreeMap<BasisLabel, ExactScalar> = BTreeMap::new();
        for (label, amp) in terms {
            label.check(shape)?;
            *amplitudes.entry(label).or_insert_with(ExactScalar::zero) += amp;
        }
        amplitudes.retain(|_, a| !a.is_zero());
        if amplitudes.is_empty() {
            return Err(Error::ZeroVector);
        }
        Ok(PureVector { shape, amplitudes })
    }

    pub fn shape(&self) -> SystemShape {
        self.shape
    }

    pub fn amplitude(&self, label: &BasisLabel) -> ExactScalar {
        self.amplitudes.get(label).cloned().unwrap_or_else(ExactScalar::zero)
    }

    pub fn iter(&self) -> impl Iterator<Item = (&BasisLabel, &ExactScalar)> {
        self.amplitudes.iter()
    }

    pub fn support_size(&self) -> usize {
        self.amplitudes.len()
    }

    pub fn norm_squared(&self) -> ExactScalar {
        self.amplitudes.values().map(|a| a * a).sum()
    }
}

/// Real symmetric operator stored sparsely by basis-label pairs.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DenseOperator {
    shape: SystemShape,
    entries: BTreeMap<(BasisLabel, BasisLabel), ExactScalar>,
}

impl DenseOperator {
    pub fn from_entries(
        shape: SystemShape,
        entries: impl IntoIterator<Item = ((BasisLabel, BasisLabel), ExactScalar)>,
    ) -> Result<Self> {
        let mut map: BTreeMap<(BasisLabel, BasisLabel), ExactScalar> = BTreeMap::new();
        for ((x, y), v) in entries {
            x.check(shape)?;
            y.check(shape)?;
            *map.entry((x, y)).or_insert_with(ExactScalar::zero) += v;
        }
        map.retain(|_, v| !v.is_zero());
        for ((x, y), v) in &map {
            if map.get(&(y.clone(), x.clone())) != Some(v) {
                return Err(Error::NotSymmetric {
                    row: x.to_string(),
                    col: y.to_string(),
                });
            }
        }
        Ok(DenseOperator { shape, entries: map })
    }

    fn from_map_unchecked(
        shape: SystemShape,
        mut entries: BTreeMap<(BasisLabel, BasisLabel), ExactScalar>,
    ) -> Self {
        entries.retain(|_, v| !v.is_zero());
        DenseOperator { shape, entries }
    }

    /// `|psi><psi|`.
    pub fn outer(psi: &PureVector) -> DenseOperator {
        let mut entries = BTreeMap::new();
        for (x, ax) in psi.iter() {
            for (y, ay) in psi.iter() {
                entries.insert((x.clone(), y.clone()), ax * ay);
            }
        }
        DenseOperator {
            shape: psi.shape(),
            entries,
        }
    }

    pub fn shape(&self) -> SystemShape {
        self.shape
    }

    pub fn entry(&self, x: &BasisLabel, y: &BasisLabel) -> ExactScalar {
        self.entries
            .get(&(x.clone(), y.clone()))
            .cloned()
            .unwrap_or_else(ExactScalar::zero)
    }

    pub fn iter(&self) -> impl Iterator<Item = (&(BasisLabel, BasisLabel), &ExactScalar)> {
        self.entries.iter()
    }

    pub fn nnz(&self) -> usize {
        self.entries.len()
    }

    pub fn trace(&self) -> ExactScalar {
        self.entries
            .iter()
            .filter(|((x, y), _)| x == y)
            .map(|(_, v)| v)
            .sum()
    }

    pub fn scaled(&self, factor: &ExactScalar) -> DenseOperator {
        DenseOperator::from_map_unchecked(
            self.shape,
            self.entries.iter().map(|(k, v)| (k.clone(), v * factor)).collect(),
        )
    }

    pub fn add(&self, other: &DenseOperator) -> Result<DenseOperator> {
        if self.shape != other.shape {
            return Err(Error::DimensionMismatch("operators on different shapes".into()));
        }
        let mut entries = self.entries.clone();
        for (k, v) in &other.entries {
            *entries.entry(k.clone()).or_insert_with(ExactScalar::zero) += v;
        }
        Ok(DenseOperator::from_map_unchecked(self.shape, entries))
    }

    /// First nonzero off-diagonal entry in label order.
    pub fn first_off_diagonal(&self) -> Option<(&BasisLabel, &BasisLabel, &ExactScalar)> {
        self.entries
            .iter()
            .find(|((x, y), _)| x != y)
            .map(|((x, y), v)| (x, y, v))
    }

    pub fn is_diagonal(&self) -> bool {
        self.first_off_diagonal().is_none()
    }

    /// Traces out the parties in `lost`. The result lives on the remaining
    /// parties in ascending original order.
    pub fn partial_trace(&self, lost: &[usize]) -> Result<DenseOperator> {
        let n = self.shape.n_parties;
        let mut is_lost = vec![false; n];
        for &p in lost {
            self.shape.check_party(p)?;
            is_lost[p] = true;
        }
        let lost_sorted: Vec<usize> = (0..n).filter(|&p| is_lost[p]).collect();
        let kept: Vec<usize> = (0..n).filter(|&p| !is_lost[p]).collect();
        if kept.is_empty() {
            return Err(Error::TraceAll);
        }
        if lost_sorted.is_empty() {
            return Ok(self.clone());
        }
        let shape = SystemShape::new(kept.len(), self.shape.local_dim)?;
        let mut entries: BTreeMap<(BasisLabel, BasisLabel), ExactScalar> = BTreeMap::new();
        for ((x, y), v) in &self.entries {
            if x.agrees_on(y, &lost_sorted) {
                *entries
                    .entry((x.restrict(&kept), y.restrict(&kept)))
                    .or_insert_with(ExactScalar::zero) += v;
            }
        }
        Ok(DenseOperator::from_map_unchecked(shape, entries))
    }

    /// Transposes the factor belonging to `party`: the symbols of the bra and
    /// ket at that position are exchanged.
    pub fn partial_transpose(&self, party: usize) -> Result<DenseOperator> {
        self.shape.check_party(party)?;
        let entries = self
            .entries
            .iter()
            .map(|((x, y), v)| {
                let (a, b) = (x.symbols()[party], y.symbols()[party]);
                ((x.with_symbol(party, b), y.with_symbol(party, a)), v.clone())
            })
            .collect();
        Ok(DenseOperator::from_map_unchecked(self.shape, entries))
    }

    pub fn partial_transpose_set(&self, parties: &[usize]) -> Result<DenseOperator> {
        parties
            .iter()
            .try_fold(self.clone(), |acc, &p| acc.partial_transpose(p))
    }

    /// `v^T M v`.
    pub fn quadratic_form(&self, v: &PureVector) -> Result<ExactScalar> {
        if v.shape() != self.shape {
            return Err(Error::DimensionMismatch(format!(
                "vector on {} parties of dimension {} against operator on {} of dimension {}",
                v.shape().n_parties,
                v.shape().local_dim,
                self.shape.n_parties,
                self.shape.local_dim
            )));
        }
        let mut acc = ExactScalar::zero();
        for (x, vx) in v.iter() {
            for (y, vy) in v.iter() {
                if let Some(m) = self.entries.get(&(x.clone(), y.clone())) {
                    acc += vx * m * vy;
                }
            }
        }
        Ok(acc)
    }

    /// Labels touched by any nonzero entry, in order.
    pub fn support(&self) -> Vec<BasisLabel> {
        let mut labels: Vec<BasisLabel> = self
            .entries
            .keys()
            .flat_map(|(x, y)| [x.clone(), y.clone()])
            .collect();
        labels.sort();
        labels.dedup();
        labels
    }

    /// Dense matrix on the support. Rows and columns that are identically
    /// zero are omitted; they do not affect positive semidefiniteness.
    pub fn support_matrix(&self, limits: &Limits) -> Result<(Vec<BasisLabel>, SymmetricMatrix)> {
        let labels = self.support();
        let n = labels.len();
        let needed = n.saturating_mul(n);
        if needed > limits.max_dense_entries {
            return Err(Error::Guard {
                what: "dense materialization",
                needed: needed.to_string(),
                limit: limits.max_dense_entries,
            });
        }
        let index: BTreeMap<&BasisLabel, usize> =
            labels.iter().enumerate().map(|(i, l)| (l, i)).collect();
        let mut m = SymmetricMatrix::zeros(n);
        for ((x, y), v) in &self.entries {
            m.set(index[x], index[y], v.clone());
        }
        Ok((labels, m))
    }

    pub fn is_psd(&self, limits: &Limits) -> Result<bool> {
        Ok(self.support_matrix(limits)?.1.is_psd())
    }
}
