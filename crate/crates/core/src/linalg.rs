//! Dense exact linear algebra: incremental row echelon form and kernels.

use crate::field::Field;

/// Row echelon form built one row at a time. Rows are stored normalised
/// (pivot entry one) and sorted by pivot column.
#[derive(Clone, Debug)]
pub struct Echelon<K: Field> {
    field: K,
    ncols: usize,
    rows: Vec<Vec<K::Elem>>,
    pivots: Vec<usize>,
}

impl<K: Field> Echelon<K> {
    pub fn new(field: K, ncols: usize) -> Self {
        Echelon {
            field,
            ncols,
            rows: Vec::new(),
            pivots: Vec::new(),
        }
    }

    pub fn rank(&self) -> usize {
        self.rows.len()
    }

    pub fn ncols(&self) -> usize {
        self.ncols
    }

    pub fn pivots(&self) -> &[usize] {
        &self.pivots
    }

    /// Reduces `row` against the stored rows; returns the remainder.
    pub fn reduce(&self, mut row: Vec<K::Elem>) -> Vec<K::Elem> {
        let f = &self.field;
        for (prow, &pc) in self.rows.iter().zip(&self.pivots) {
            if f.is_zero(&row[pc]) {
                continue;
            }
            let c = row[pc].clone();
            for k in pc..self.ncols {
                if !f.is_zero(&prow[k]) {
                    let d = f.mul(&c, &prow[k]);
                    row[k] = f.sub(&row[k], &d);
                }
            }
        }
        row
    }

    /// Adds a row; returns `true` when it increased the rank.
    pub fn insert(&mut self, row: Vec<K::Elem>) -> bool {
        assert_eq!(row.len(), self.ncols);
        if self.rows.len() == self.ncols {
            return false;
        }
        let row = self.reduce(row);
        let f = &self.field;
        let Some(pc) = row.iter().position(|x| !f.is_zero(x)) else {
            return false;
        };
        let inv = f.inv(&row[pc]);
        let row: Vec<K::Elem> = row.iter().map(|x| f.mul(x, &inv)).collect();
        let at = self.pivots.partition_point(|&p| p < pc);
        self.pivots.insert(at, pc);
        self.rows.insert(at, row);
        true
    }

    /// Reduced row echelon form (pivot columns cleared above and below).
    pub fn into_rref(mut self) -> Echelon<K> {
        let f = self.field.clone();
        for a in (0..self.rows.len()).rev() {
            let pc = self.pivots[a];
            let (upper, lower) = self.rows.split_at_mut(a);
            let prow = &lower[0];
            for row in upper.iter_mut() {
                if f.is_zero(&row[pc]) {
                    continue;
                }
                let c = row[pc].clone();
                for k in pc..self.ncols {
                    if !f.is_zero(&prow[k]) {
                        let d = f.mul(&c, &prow[k]);
                        row[k] = f.sub(&row[k], &d);
                    }
                }
            }
        }
        self
    }

    /// Kernel of the stored rows (assumed in reduced form, see
    /// [`Echelon::into_rref`]): one vector per free column `f`, with entry
    /// one at `f` and support otherwise on pivot columns smaller than `f`.
    pub fn kernel(&self) -> Vec<(usize, Vec<K::Elem>)> {
        let f = &self.field;
        let mut is_pivot = vec![None; self.ncols];
        for (r, &p) in self.pivots.iter().enumerate() {
            is_pivot[p] = Some(r);
        }
        let mut out = Vec::new();
        for col in 0..self.ncols {
            if is_pivot[col].is_some() {
                continue;
            }
            let mut v = vec![f.zero(); self.ncols];
            v[col] = f.one();
            for (r, &p) in self.pivots.iter().enumerate() {
                if p < col && !f.is_zero(&self.rows[r][col]) {
                    v[p] = f.neg(&self.rows[r][col]);
                }
            }
            out.push((col, v));
        }
        out
    }
}

/// Rank of a matrix given by rows.
pub fn rank<K: Field>(field: &K, ncols: usize, rows: impl IntoIterator<Item = Vec<K::Elem>>) -> usize {
    let mut e = Echelon::new(field.clone(), ncols);
    for r in rows {
        e.insert(r);
        if e.rank() == ncols {
            break;
        }
    }
    e.rank()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::PrimeField;

    #[test]
    fn kernel_of_small_matrix() {
        let f = PrimeField::new(7).unwrap();
        let mut e = Echelon::new(f, 3);
        assert!(e.insert(vec![1, 2, 3]));
        assert!(e.insert(vec![2, 4, 1]));
        assert!(!e.insert(vec![3, 6, 4]));
        let e = e.into_rref();
        let ker = e.kernel();
        assert_eq!(ker.len(), 1);
        let (col, v) = &ker[0];
        assert_eq!(*col, 1);
        // check orthogonality to the original rows
        for row in [[1u32, 2, 3], [2, 4, 1]] {
            let s = (0..3).fold(0, |acc, k| f.add(&acc, &f.mul(&row[k], &v[k])));
            assert_eq!(s, 0);
        }
        assert_eq!(rank(&f, 3, vec![vec![1, 0, 0], vec![0, 0, 0]]), 1);
    }
}
