//! Banded operators on finite, semi-infinite and bi-infinite index sets.
//!
//! A diagonal at offset `d` is stored row-indexed: its value at index `i` is
//! the entry `A[i, i + d]`. Operator description documents use column
//! indexing instead (value at `j` is `A[j - d, j]`), and [`parse_operator`]
//! converts between the two.

mod block;
mod document;

use std::collections::BTreeMap;
use std::fmt;

use num_complex::Complex64;

use crate::error::{Error, Result};

pub use block::{block_tridiagonalize, BlockView};
pub(crate) use block::validate_block_size;
pub use document::parse_operator;

pub type Scalar = Complex64;

const ZERO: Scalar = Complex64::new(0.0, 0.0);

/// Index set of rows and columns.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum IndexDomain {
    /// Indices `1..=N`.
    Finite(usize),
    /// Indices `1, 2, ...`.
    SemiInfinite,
    /// All integers.
    BiInfinite,
}

impl IndexDomain {
    pub fn contains(&self, i: i64) -> bool {
        match *self {
            IndexDomain::Finite(n) => i >= 1 && i <= n as i64,
            IndexDomain::SemiInfinite => i >= 1,
            IndexDomain::BiInfinite => true,
        }
    }

    /// Smallest index, if bounded below.
    pub fn first(&self) -> Option<i64> {
        match self {
            IndexDomain::BiInfinite => None,
            _ => Some(1),
        }
    }

    /// Largest index, if bounded above.
    pub fn last(&self) -> Option<i64> {
        match *self {
            IndexDomain::Finite(n) => Some(n as i64),
            _ => None,
        }
    }
}

impl fmt::Display for IndexDomain {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            IndexDomain::Finite(n) => write!(f, "finite(N={n})"),
            IndexDomain::SemiInfinite => write!(f, "semi-infinite"),
            IndexDomain::BiInfinite => write!(f, "bi-infinite"),
        }
    }
}

/// Bounded sequence carried by one diagonal.
#[derive(Debug, Clone, PartialEq)]
pub enum Diagonal {
    Constant(Scalar),
    /// `v[i] = values[i mod p]`.
    Periodic(Vec<Scalar>),
    /// `v[start + t] = values[t]`, zero elsewhere. Finite domains only.
    Explicit { start: i64, values: Vec<Scalar> },
    /// Periodic background with finitely many entries replaced.
    PerturbedPeriodic {
        background: Vec<Scalar>,
        overrides: BTreeMap<i64, Scalar>,
    },
}

fn periodic_at(values: &[Scalar], i: i64) -> Scalar {
    values[i.rem_euclid(values.len() as i64) as usize]
}

fn rotated(values: &[Scalar], s: i64) -> Vec<Scalar> {
    (0..values.len() as i64).map(|r| periodic_at(values, r + s)).collect()
}

fn max_abs<'a>(values: impl IntoIterator<Item = &'a Scalar>) -> f64 {
    values.into_iter().map(|z| z.norm()).fold(0.0, f64::max)
}

impl Diagonal {
    pub fn value(&self, i: i64) -> Scalar {
        match self {
            Diagonal::Constant(c) => *c,
            Diagonal::Periodic(v) => periodic_at(v, i),
            Diagonal::Explicit { start, values } => {
                let t = i - start;
                if t >= 0 && (t as usize) < values.len() {
                    values[t as usize]
                } else {
                    ZERO
                }
            }
            Diagonal::PerturbedPeriodic { background, overrides } => overrides
                .get(&i)
                .copied()
                .unwrap_or_else(|| periodic_at(background, i)),
        }
    }

    /// Exact supremum of `|v_i|` over all integers `i`.
    pub fn sup_norm(&self) -> f64 {
        match self {
            Diagonal::Constant(c) => c.norm(),
            Diagonal::Periodic(v) => max_abs(v),
            Diagonal::Explicit { values, .. } => max_abs(values),
            Diagonal::PerturbedPeriodic { background, overrides } => {
                max_abs(background).max(max_abs(overrides.values()))
            }
        }
    }

    /// Length of the repeating pattern; `None` for explicit data.
    pub fn period(&self) -> Option<usize> {
        match self {
            Diagonal::Constant(_) => Some(1),
            Diagonal::Periodic(v) => Some(v.len()),
            Diagonal::PerturbedPeriodic { background, .. } => Some(background.len()),
            Diagonal::Explicit { .. } => None,
        }
    }

    /// Indices whose value departs from the periodic background.
    pub fn override_indices(&self) -> impl Iterator<Item = i64> + '_ {
        let keys = match self {
            Diagonal::PerturbedPeriodic { overrides, .. } => Some(overrides.keys().copied()),
            _ => None,
        };
        keys.into_iter().flatten()
    }

    /// Sequence `w_i = v_{i + s}`.
    pub fn shifted(&self, s: i64) -> Diagonal {
        match self {
            Diagonal::Constant(c) => Diagonal::Constant(*c),
            Diagonal::Periodic(v) => Diagonal::Periodic(rotated(v, s)),
            Diagonal::Explicit { start, values } => Diagonal::Explicit {
                start: start - s,
                values: values.clone(),
            },
            Diagonal::PerturbedPeriodic { background, overrides } => Diagonal::PerturbedPeriodic {
                background: rotated(background, s),
                overrides: overrides.iter().map(|(&k, &v)| (k - s, v)).collect(),
            },
        }
    }

    /// Sequence `w_i = v_{-i}`.
    pub fn reflected(&self) -> Diagonal {
        let reflect = |v: &[Scalar]| -> Vec<Scalar> {
            (0..v.len() as i64).map(|r| periodic_at(v, -r)).collect()
        };
        match self {
            Diagonal::Constant(c) => Diagonal::Constant(*c),
            Diagonal::Periodic(v) => Diagonal::Periodic(reflect(v)),
            Diagonal::Explicit { start, values } => Diagonal::Explicit {
                start: -(start + values.len() as i64 - 1),
                values: values.iter().rev().copied().collect(),
            },
            Diagonal::PerturbedPeriodic { background, overrides } => Diagonal::PerturbedPeriodic {
                background: reflect(background),
                overrides: overrides.iter().map(|(&k, &v)| (-k, v)).collect(),
            },
        }
    }

    /// Drops overrides whose index fails `keep`, collapsing to `Periodic`
    /// when none remain.
    fn retain_overrides(self, keep: impl Fn(i64) -> bool) -> Diagonal {
        match self {
            Diagonal::PerturbedPeriodic { background, mut overrides } => {
                overrides.retain(|&k, _| keep(k));
                Diagonal::PerturbedPeriodic { background, overrides }.normalized()
            }
            other => other,
        }
    }

    fn normalized(self) -> Diagonal {
        match self {
            Diagonal::PerturbedPeriodic { background, overrides } if overrides.is_empty() => {
                Diagonal::Periodic(background)
            }
            Diagonal::Periodic(v) if v.len() == 1 => Diagonal::Constant(v[0]),
            other => other,
        }
    }

    fn values(&self) -> Box<dyn Iterator<Item = &Scalar> + '_> {
        match self {
            Diagonal::Constant(c) => Box::new(std::iter::once(c)),
            Diagonal::Periodic(v) => Box::new(v.iter()),
            Diagonal::Explicit { values, .. } => Box::new(values.iter()),
            Diagonal::PerturbedPeriodic { background, overrides } => {
                Box::new(background.iter().chain(overrides.values()))
            }
        }
    }

    fn validate(&self) -> Result<()> {
        match self {
            Diagonal::Periodic(v) if v.is_empty() => {
                return Err(Error::InvalidOperator("periodic diagonal needs at least one value".into()))
            }
            Diagonal::PerturbedPeriodic { background, .. } if background.is_empty() => {
                return Err(Error::InvalidOperator("perturbed diagonal needs a nonempty background".into()))
            }
            _ => {}
        }
        if self.values().any(|z| !z.re.is_finite() || !z.im.is_finite()) {
            return Err(Error::InvalidOperator("diagonal value is not finite".into()));
        }
        Ok(())
    }
}

/// Banded matrix with structured diagonals. Immutable once built.
#[derive(Debug, Clone, PartialEq)]
pub struct BandOperator {
    domain: IndexDomain,
    bandwidth: usize,
    diagonals: BTreeMap<i64, Diagonal>,
}

fn lcm(a: usize, b: usize) -> usize {
    fn gcd(a: usize, b: usize) -> usize {
        if b == 0 {
            a
        } else {
            gcd(b, a % b)
        }
    }
    a / gcd(a, b) * b
}

impl BandOperator {
    /// Builds an operator from row-indexed diagonals. Identically zero
    /// diagonals are dropped and the bandwidth is the largest remaining
    /// offset.
    pub fn new(domain: IndexDomain, diagonals: impl IntoIterator<Item = (i64, Diagonal)>) -> Result<Self> {
        if domain == IndexDomain::Finite(0) {
            return Err(Error::InvalidOperator("finite domain needs N >= 1".into()));
        }
        let mut map = BTreeMap::new();
        for (offset, diag) in diagonals {
            diag.validate()?;
            if matches!(diag, Diagonal::Explicit { .. }) && !matches!(domain, IndexDomain::Finite(_)) {
                return Err(Error::InvalidOperator(format!(
                    "explicit diagonal at offset {offset} requires a finite domain"
                )));
            }
            if let IndexDomain::Finite(n) = domain {
                if offset.unsigned_abs() as usize >= n && diag.sup_norm() > 0.0 {
                    return Err(Error::InvalidOperator(format!(
                        "offset {offset} does not fit in an {n}x{n} matrix"
                    )));
                }
            }
            if map.insert(offset, diag.normalized()).is_some() {
                return Err(Error::InvalidOperator(format!("offset {offset} given twice")));
            }
        }
        let mut op = Self {
            domain,
            bandwidth: 0,
            diagonals: map,
        };
        op.diagonals.retain(|_, d| d.sup_norm() > 0.0);
        op.bandwidth = op
            .diagonals
            .keys()
            .map(|d| d.unsigned_abs() as usize)
            .max()
            .unwrap_or(0);
        Ok(op)
    }

    pub fn zero(domain: IndexDomain) -> Result<Self> {
        Self::new(domain, [])
    }

    pub fn domain(&self) -> IndexDomain {
        self.domain
    }

    pub fn bandwidth(&self) -> usize {
        self.bandwidth
    }

    pub fn diagonals(&self) -> &BTreeMap<i64, Diagonal> {
        &self.diagonals
    }

    pub fn diagonal(&self, offset: i64) -> Option<&Diagonal> {
        self.diagonals.get(&offset)
    }

    /// Entry without the domain check; zero off the band.
    #[inline]
    pub(crate) fn entry_unchecked(&self, i: i64, j: i64) -> Scalar {
        self.diagonals.get(&(j - i)).map_or(ZERO, |d| d.value(i))
    }

    /// Matrix entry `A[i, j]`.
    pub fn entry(&self, i: i64, j: i64) -> Result<Scalar> {
        if !self.domain.contains(i) || !self.domain.contains(j) {
            return Err(Error::IndexOutOfDomain { row: i, col: j });
        }
        Ok(self.entry_unchecked(i, j))
    }

    /// Banach-space adjoint: the transpose, without complex conjugation.
    pub fn adjoint(&self) -> BandOperator {
        let diagonals = self
            .diagonals
            .iter()
            .map(|(&d, diag)| (-d, diag.shifted(-d)))
            .collect();
        BandOperator {
            domain: self.domain,
            bandwidth: self.bandwidth,
            diagonals,
        }
    }

    /// `A - λI`.
    pub fn shift_spectral(&self, lambda: Scalar) -> BandOperator {
        if lambda == ZERO {
            return self.clone();
        }
        let main = match self.diagonals.get(&0) {
            None => Diagonal::Constant(-lambda),
            Some(Diagonal::Constant(c)) => Diagonal::Constant(c - lambda),
            Some(Diagonal::Periodic(v)) => Diagonal::Periodic(v.iter().map(|z| z - lambda).collect()),
            Some(Diagonal::PerturbedPeriodic { background, overrides }) => Diagonal::PerturbedPeriodic {
                background: background.iter().map(|z| z - lambda).collect(),
                overrides: overrides.iter().map(|(&k, z)| (k, z - lambda)).collect(),
            },
            Some(explicit @ Diagonal::Explicit { .. }) => {
                // Only finite domains carry explicit data.
                let n = self.domain.last().unwrap_or(0);
                Diagonal::Explicit {
                    start: 1,
                    values: (1..=n).map(|i| explicit.value(i) - lambda).collect(),
                }
            }
        };
        let mut diagonals = self.diagonals.clone();
        diagonals.insert(0, main);
        diagonals.retain(|_, d| d.sup_norm() > 0.0);
        BandOperator {
            domain: self.domain,
            bandwidth: self.bandwidth,
            diagonals,
        }
    }

    /// Exact `sup |A[i, i+d]|` per stored offset, over index pairs inside the
    /// domain.
    pub fn sup_norms(&self) -> BTreeMap<i64, f64> {
        self.diagonals
            .iter()
            .map(|(&d, diag)| {
                let sup = match self.domain {
                    IndexDomain::BiInfinite => diag.sup_norm(),
                    IndexDomain::Finite(n) => {
                        let n = n as i64;
                        let (lo, hi) = (1.max(1 - d), n.min(n - d));
                        (lo..=hi).map(|i| diag.value(i).norm()).fold(0.0, f64::max)
                    }
                    IndexDomain::SemiInfinite => match diag {
                        Diagonal::PerturbedPeriodic { background, overrides } => {
                            let first = 1.max(1 - d);
                            max_abs(background).max(max_abs(
                                overrides.range(first..).map(|(_, v)| v),
                            ))
                        }
                        other => other.sup_norm(),
                    },
                };
                (d, sup)
            })
            .collect()
    }

    /// Common period of all diagonals, or `None` if any is explicit.
    pub fn period(&self) -> Option<usize> {
        self.diagonals
            .values()
            .try_fold(1usize, |acc, d| d.period().map(|p| lcm(acc, p)))
    }

    /// True when every diagonal is constant or periodic.
    pub fn is_periodic(&self) -> bool {
        self.diagonals
            .values()
            .all(|d| matches!(d, Diagonal::Constant(_) | Diagonal::Periodic(_)))
    }

    /// Row indices carrying an override on some diagonal.
    pub fn override_rows(&self) -> Vec<i64> {
        let mut rows: Vec<i64> = self
            .diagonals
            .values()
            .flat_map(|d| d.override_indices())
            .collect();
        rows.sort_unstable();
        rows.dedup();
        rows
    }

    /// Same diagonals on a different index set.
    pub fn with_domain(&self, domain: IndexDomain) -> Result<BandOperator> {
        Self::new(domain, self.diagonals.clone())
    }

    /// The operator with every override removed.
    pub fn background(&self) -> BandOperator {
        let diagonals = self
            .diagonals
            .iter()
            .map(|(&d, diag)| (d, diag.clone().retain_overrides(|_| false)))
            .collect();
        BandOperator {
            domain: self.domain,
            bandwidth: self.bandwidth,
            diagonals,
        }
    }

    /// Dense copy of the rows and columns `first..=last`.
    pub fn dense_section(&self, first: i64, last: i64) -> crate::kernels::DenseMatrix {
        let n = (last - first + 1).max(0) as usize;
        let mut m = crate::kernels::DenseMatrix::zeros(n, n);
        for r in 0..n {
            let i = first + r as i64;
            let lo = r.saturating_sub(self.bandwidth);
            let hi = (r + self.bandwidth).min(n.saturating_sub(1));
            for c in lo..=hi {
                m.set(r, c, self.entry_unchecked(i, first + c as i64));
            }
        }
        m
    }
}

/// Restrictions of a bi-infinite operator to indices `<= -1` (reflected onto
/// `1, 2, ...`) and `>= 1`.
pub fn split_biinfinite(a: &BandOperator) -> Result<(BandOperator, BandOperator)> {
    if a.domain != IndexDomain::BiInfinite {
        return Err(Error::WrongDomain {
            expected: "a bi-infinite operator".into(),
            found: a.domain.to_string(),
        });
    }
    let plus = a
        .diagonals
        .iter()
        .map(|(&d, diag)| (d, diag.clone().retain_overrides(|k| k >= 1 && k + d >= 1)));
    let plus = BandOperator::new(IndexDomain::SemiInfinite, plus)?;
    // minus[i', j'] = A[-i', -j']: offset flips sign, rows reflect.
    let minus = a.diagonals.iter().map(|(&d, diag)| {
        (-d, diag.reflected().retain_overrides(|k| k >= 1 && k - d >= 1))
    });
    let minus = BandOperator::new(IndexDomain::SemiInfinite, minus)?;
    Ok((minus, plus))
}

/// `A_{>m}`: rows and columns above `m`, re-indexed from 1.
pub fn tail_operator(a: &BandOperator, m: usize) -> Result<BandOperator> {
    if a.domain != IndexDomain::SemiInfinite {
        return Err(Error::WrongDomain {
            expected: "a semi-infinite operator".into(),
            found: a.domain.to_string(),
        });
    }
    let m = m as i64;
    let diagonals = a
        .diagonals
        .iter()
        .map(|(&d, diag)| (d, diag.shifted(m).retain_overrides(|k| k >= 1 && k + d >= 1)));
    BandOperator::new(IndexDomain::SemiInfinite, diagonals)
}
