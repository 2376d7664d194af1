//! Rank and index of integer sublattices of `Z^d`.

use serde::Serialize;

use super::KernelError;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum LatticeIndex {
    Finite(u64),
    Infinite,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct LatticeIndexResult {
    pub rank: usize,
    pub index: LatticeIndex,
}

impl LatticeIndexResult {
    pub fn is_finite_index(&self) -> bool {
        matches!(self.index, LatticeIndex::Finite(_))
    }
}

/// Rank of the integer span of `vectors` and its index in `Z^d`, by
/// Euclidean row reduction to echelon form. The index is the product of the
/// pivot magnitudes when the rank is full.
pub fn lattice_index(vectors: &[Vec<i64>], d: usize) -> Result<LatticeIndexResult, KernelError> {
    if d == 0 {
        return Err(KernelError::InvalidDimension(0));
    }
    if let Some(v) = vectors.iter().find(|v| v.len() != d) {
        return Err(KernelError::DimensionMismatch { expected: d, found: v.len() });
    }
    let mut rows: Vec<Vec<i128>> = vectors.iter().map(|v| v.iter().map(|&x| x as i128).collect()).collect();
    let mut rank = 0;
    let mut pivots = Vec::new();
    for col in 0..d {
        // smallest non-zero entry below the current rank moves up
        while let Some(p) = (rank..rows.len()).filter(|&i| rows[i][col] != 0).min_by_key(|&i| rows[i][col].abs()) {
            rows.swap(rank, p);
            let (head, tail) = rows.split_at_mut(rank + 1);
            let pivot = &head[rank];
            let mut clean = true;
            for row in tail.iter_mut() {
                let q = row[col] / pivot[col];
                if q != 0 {
                    for (x, &y) in row[col..].iter_mut().zip(&pivot[col..]) {
                        *x -= q * y;
                    }
                }
                clean &= row[col] == 0;
            }
            if clean {
                pivots.push(rows[rank][col].unsigned_abs());
                rank += 1;
                break;
            }
        }
    }
    let index = if rank == d {
        let product = pivots.iter().try_fold(1u128, |acc, &p| acc.checked_mul(p));
        match product.and_then(|p| u64::try_from(p).ok()) {
            Some(p) => LatticeIndex::Finite(p),
            None => return Err(KernelError::IndexOverflow),
        }
    } else {
        LatticeIndex::Infinite
    };
    Ok(LatticeIndexResult { rank, index })
}
