//! Boxes, tilings and residues in `Z+^N`.

use std::fmt;

use crate::error::{precondition, Error, Result};

/// A point of `Z+^N`, `N >= 1`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct LatticePoint(Vec<u64>);

impl LatticePoint {
    /// Panics if `coords` is empty.
    pub fn new(coords: impl Into<Vec<u64>>) -> Self {
        let coords = coords.into();
        assert!(!coords.is_empty(), "lattice points need at least one coordinate");
        LatticePoint(coords)
    }

    pub fn zero(dim: usize) -> Self {
        Self::new(vec![0; dim])
    }

    pub fn ones(dim: usize) -> Self {
        Self::new(vec![1; dim])
    }

    pub fn diagonal(dim: usize, t: u64) -> Self {
        Self::new(vec![t; dim])
    }

    pub fn unit(dim: usize, axis: usize) -> Self {
        let mut v = vec![0; dim];
        v[axis] = 1;
        Self::new(v)
    }

    pub fn dim(&self) -> usize {
        self.0.len()
    }

    pub fn coords(&self) -> &[u64] {
        &self.0
    }

    pub fn is_zero(&self) -> bool {
        self.0.iter().all(|&c| c == 0)
    }

    pub fn min_coord(&self) -> u64 {
        *self.0.iter().min().unwrap()
    }

    pub fn max_coord(&self) -> u64 {
        *self.0.iter().max().unwrap()
    }

    /// Componentwise order.
    pub fn le(&self, other: &LatticePoint) -> bool {
        self.0.iter().zip(&other.0).all(|(a, b)| a <= b)
    }

    pub fn checked_add(&self, other: &LatticePoint) -> Result<LatticePoint> {
        check_dim(self, other)?;
        let v = self
            .0
            .iter()
            .zip(&other.0)
            .map(|(a, b)| a.checked_add(*b).ok_or(Error::Overflow("lattice sum")))
            .collect::<Result<Vec<_>>>()?;
        Ok(LatticePoint(v))
    }

    /// Componentwise product.
    pub fn checked_mul(&self, other: &LatticePoint) -> Result<LatticePoint> {
        check_dim(self, other)?;
        let v = self
            .0
            .iter()
            .zip(&other.0)
            .map(|(a, b)| a.checked_mul(*b).ok_or(Error::Overflow("lattice product")))
            .collect::<Result<Vec<_>>>()?;
        Ok(LatticePoint(v))
    }

    /// Number of points in the box `[0, n)`, zero if some coordinate is zero.
    pub fn lambda(&self) -> Result<u64> {
        self.0.iter().try_fold(1u64, |acc, &c| {
            acc.checked_mul(c).ok_or(Error::Overflow("box cardinality"))
        })
    }
}

impl fmt::Display for LatticePoint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.0.iter().map(|c| c.to_string()).collect();
        write!(f, "({})", parts.join(","))
    }
}

impl From<Vec<u64>> for LatticePoint {
    fn from(v: Vec<u64>) -> Self {
        LatticePoint::new(v)
    }
}

pub(crate) fn check_dim(a: &LatticePoint, b: &LatticePoint) -> Result<()> {
    if a.dim() != b.dim() {
        return Err(Error::Dimension {
            expected: a.dim(),
            got: b.dim(),
        });
    }
    Ok(())
}

fn nonempty(n: &LatticePoint) -> Result<()> {
    match n.0.iter().position(|&c| c == 0) {
        Some(axis) => Err(Error::EmptyBox { axis }),
        None => Ok(()),
    }
}

/// The box `{k : 0 <= k_j < n_j}`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LatticeBox {
    upper: LatticePoint,
    cardinality: u64,
}

impl LatticeBox {
    pub fn new(upper: LatticePoint) -> Result<Self> {
        nonempty(&upper)?;
        let cardinality = upper.lambda()?;
        Ok(LatticeBox { upper, cardinality })
    }

    pub fn upper(&self) -> &LatticePoint {
        &self.upper
    }

    pub fn cardinality(&self) -> u64 {
        self.cardinality
    }

    pub fn contains(&self, k: &LatticePoint) -> bool {
        k.dim() == self.upper.dim() && k.0.iter().zip(&self.upper.0).all(|(a, b)| a < b)
    }

    /// Lexicographic order, last coordinate fastest.
    pub fn iter(&self) -> BoxIter {
        BoxIter {
            upper: self.upper.0.clone(),
            next: Some(vec![0; self.upper.dim()]),
        }
    }
}

pub struct BoxIter {
    upper: Vec<u64>,
    next: Option<Vec<u64>>,
}

impl Iterator for BoxIter {
    type Item = LatticePoint;

    fn next(&mut self) -> Option<LatticePoint> {
        let cur = self.next.take()?;
        let mut succ = cur.clone();
        let mut axis = succ.len();
        loop {
            if axis == 0 {
                break;
            }
            axis -= 1;
            succ[axis] += 1;
            if succ[axis] < self.upper[axis] {
                self.next = Some(succ);
                break;
            }
            succ[axis] = 0;
        }
        Some(LatticePoint(cur))
    }
}

/// All points of `[0, n)` in lexicographic order.
pub fn enumerate_box(n: &LatticePoint) -> Result<Vec<LatticePoint>> {
    let b = LatticeBox::new(n.clone())?;
    if b.cardinality() > usize::MAX as u64 {
        return Err(Error::Overflow("box enumeration"));
    }
    Ok(b.iter().collect())
}

/// The tiles `p + [0, q)` with `p` in `k + qZ+^N` lying inside `[0, n)`,
/// and the points of `[0, n)` they miss.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TileDecomposition {
    pub n: LatticePoint,
    pub q: LatticePoint,
    pub k: LatticePoint,
    /// Tile corners in lexicographic order.
    pub corners: Vec<LatticePoint>,
    /// Uncovered points in lexicographic order.
    pub residue: Vec<LatticePoint>,
}

impl TileDecomposition {
    pub fn tile_count(&self) -> usize {
        self.corners.len()
    }

    /// Points of the tile with the given corner.
    pub fn tile_points(&self, corner: &LatticePoint) -> Vec<LatticePoint> {
        LatticeBox::new(self.q.clone())
            .expect("q validated at construction")
            .iter()
            .map(|d| LatticePoint(d.0.iter().zip(&corner.0).map(|(a, b)| a + b).collect()))
            .collect()
    }
}

pub fn decompose(n: &LatticePoint, q: &LatticePoint, k: &LatticePoint) -> Result<TileDecomposition> {
    check_dim(n, q)?;
    check_dim(n, k)?;
    nonempty(n)?;
    nonempty(q)?;
    if !k.0.iter().zip(&q.0).all(|(a, b)| a < b) {
        return Err(precondition(format!("offset {k} must lie in the box [0, {q})")));
    }
    let dim = n.dim();
    // per axis: number of tiles that fit
    let counts: Vec<u64> = (0..dim)
        .map(|j| {
            let (nj, qj, kj) = (n.0[j], q.0[j], k.0[j]);
            if kj + qj > nj {
                0
            } else {
                (nj - kj) / qj
            }
        })
        .collect();
    let mut corners = Vec::new();
    if counts.iter().all(|&c| c > 0) {
        for t in LatticeBox::new(LatticePoint(counts.clone()))?.iter() {
            corners.push(LatticePoint(
                (0..dim).map(|j| k.0[j] + q.0[j] * t.0[j]).collect(),
            ));
        }
    }
    let tiled = corners.len() as u64;
    let covered = |j: usize, x: u64| -> bool {
        tiled > 0 && x >= k.0[j] && (x - k.0[j]) / q.0[j] < counts[j]
    };
    let residue = LatticeBox::new(n.clone())?
        .iter()
        .filter(|p| !(0..dim).all(|j| covered(j, p.0[j])))
        .collect();
    Ok(TileDecomposition {
        n: n.clone(),
        q: q.clone(),
        k: k.clone(),
        corners,
        residue,
    })
}

/// Whether `|residue| <= 2N max(q) lambda(n) / min(n)`, checked in integers.
pub fn residue_within_bound(d: &TileDecomposition) -> Result<bool> {
    let lhs = d.residue.len() as u128 * d.n.min_coord() as u128;
    let rhs = 2 * d.n.dim() as u128 * d.q.max_coord() as u128 * d.n.lambda()? as u128;
    Ok(lhs <= rhs)
}

/// `|[0,n) symmetric-difference (m + [0,n))| = 2 (lambda(n) - prod max(0, n_j - m_j))`.
pub fn sym_diff_cardinality(n: &LatticePoint, m: &LatticePoint) -> Result<u64> {
    check_dim(n, m)?;
    nonempty(n)?;
    let total = n.lambda()?;
    let overlap = n
        .0
        .iter()
        .zip(&m.0)
        .try_fold(1u64, |acc, (&nj, &mj)| {
            acc.checked_mul(nj.saturating_sub(mj))
                .ok_or(Error::Overflow("box overlap"))
        })?;
    (total - overlap)
        .checked_mul(2)
        .ok_or(Error::Overflow("symmetric difference"))
}
