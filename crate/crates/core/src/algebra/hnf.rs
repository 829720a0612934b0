//! Hermite normal form of integer row lattices.

use crate::scalar::Coefficient;

/// Row lattice in Hermite normal form: pivots strictly increasing, pivot
/// entries positive, entries above a pivot reduced into `[0, pivot)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Lattice<C> {
    ncols: usize,
    rows: Vec<Vec<C>>,
    pivots: Vec<usize>,
}

fn axpy<C: Coefficient>(target: &mut [C], q: &C, src: &[C]) {
    if q.is_zero() {
        return;
    }
    for (t, s) in target.iter_mut().zip(src) {
        if !s.is_zero() {
            *t = t.clone() - q.clone() * s.clone();
        }
    }
}

impl<C: Coefficient> Lattice<C> {
    pub fn from_rows(mut rows: Vec<Vec<C>>, ncols: usize) -> Self {
        rows.retain(|r| r.iter().any(|x| !x.is_zero()));
        let mut r = 0;
        let mut pivots = Vec::new();
        for col in 0..ncols {
            if r == rows.len() {
                break;
            }
            loop {
                // smallest nonzero entry in this column becomes the pivot
                let best = (r..rows.len())
                    .filter(|&i| !rows[i][col].is_zero())
                    .min_by(|&a, &b| rows[a][col].abs().cmp(&rows[b][col].abs()));
                let Some(best) = best else { break };
                rows.swap(r, best);
                let pivot_row = rows[r].clone();
                let mut done = true;
                for row in rows.iter_mut().skip(r + 1) {
                    if !row[col].is_zero() {
                        let q = row[col].floor_div(&pivot_row[col]);
                        axpy(row, &q, &pivot_row);
                        if !row[col].is_zero() {
                            done = false;
                        }
                    }
                }
                if done {
                    break;
                }
            }
            if r < rows.len() && !rows[r][col].is_zero() {
                if rows[r][col].is_negative() {
                    for x in rows[r].iter_mut() {
                        *x = -x.clone();
                    }
                }
                let pivot_row = rows[r].clone();
                for row in rows.iter_mut().take(r) {
                    let q = row[col].floor_div(&pivot_row[col]);
                    axpy(row, &q, &pivot_row);
                }
                pivots.push(col);
                r += 1;
                rows.retain(|row| row.iter().any(|x| !x.is_zero()));
            }
        }
        rows.truncate(r);
        Self { ncols, rows, pivots }
    }

    pub fn rank(&self) -> usize {
        self.rows.len()
    }

    pub fn ncols(&self) -> usize {
        self.ncols
    }

    pub fn rows(&self) -> &[Vec<C>] {
        &self.rows
    }

    pub fn pivots(&self) -> &[usize] {
        &self.pivots
    }

    /// Columns without a pivot, ascending.
    pub fn free_columns(&self) -> Vec<usize> {
        (0..self.ncols).filter(|c| self.pivots.binary_search(c).is_err()).collect()
    }

    /// True when every pivot is 1, i.e. the quotient is torsion-free.
    pub fn is_saturated(&self) -> bool {
        self.rows.iter().zip(&self.pivots).all(|(row, &c)| row[c].is_one())
    }

    /// Canonical representative of `v` modulo the lattice.
    pub fn reduce(&self, v: &[C]) -> Vec<C> {
        let mut v = v.to_vec();
        for (row, &c) in self.rows.iter().zip(&self.pivots) {
            let q = v[c].floor_div(&row[c]);
            axpy(&mut v, &q, row);
        }
        v
    }

    pub fn contains(&self, v: &[C]) -> bool {
        self.reduce(v).iter().all(|x| x.is_zero())
    }
}
