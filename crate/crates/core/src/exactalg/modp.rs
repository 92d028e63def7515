//! Fast arithmetic over F_p: compiled polynomial evaluators and sparse rank.

use super::{Poly, PrimeField};

/// A polynomial with coefficients reduced mod p, compiled for repeated evaluation.
#[derive(Clone, Debug)]
pub struct ModPoly {
    field: PrimeField,
    nvars: usize,
    terms: Vec<(u64, Vec<(usize, u32)>)>,
}

impl ModPoly {
    pub fn compile(p: &Poly, field: PrimeField) -> ModPoly {
        assert!(!p.is_laurent(), "cannot compile a Laurent polynomial");
        let terms = p
            .terms()
            .map(|(m, c)| {
                let factors = m
                    .0
                    .iter()
                    .enumerate()
                    .filter(|(_, &e)| e > 0)
                    .map(|(i, &e)| (i, e as u32))
                    .collect();
                (c.to_fp(field), factors)
            })
            .filter(|(c, _)| *c != 0)
            .collect();
        ModPoly { field, nvars: p.ambient().nvars(), terms }
    }

    pub fn eval(&self, x: &[u64]) -> u64 {
        debug_assert_eq!(x.len(), self.nvars);
        let f = &self.field;
        let mut acc = 0u64;
        for (c, fs) in &self.terms {
            let mut t = *c;
            for &(i, e) in fs {
                let xi = x[i];
                t = f.mul(t, if e == 1 { xi } else { f.pow(xi, e as u64) });
                if t == 0 {
                    break;
                }
            }
            acc = f.add(acc, t);
        }
        acc
    }

    /// Evaluate with per-variable weights: each occurrence of variable i in a
    /// monomial contributes an extra factor counted in `tw[i]`; the total count
    /// k of a monomial contributes `scale[k]`. Used for Frobenius-twisted points.
    pub fn eval_twisted(&self, x: &[u64], tw: &[u32], scale: &dyn Fn(u32) -> u64) -> u64 {
        let f = &self.field;
        let mut acc = 0u64;
        for (c, fs) in &self.terms {
            let mut t = *c;
            let mut k = 0u32;
            for &(i, e) in fs {
                t = f.mul(t, f.pow(x[i], e as u64));
                k += tw[i] * e;
            }
            if t != 0 {
                acc = f.add(acc, f.mul(t, scale(k)));
            }
        }
        acc
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }
}

/// Rank of a dense matrix over F_p.
pub fn rank_dense(field: PrimeField, m: &[Vec<u64>]) -> usize {
    let mut a = m.to_vec();
    let rows = a.len();
    if rows == 0 {
        return 0;
    }
    let cols = a[0].len();
    let mut r = 0;
    for c in 0..cols {
        let Some(p) = (r..rows).find(|&i| !a[i][c].is_multiple_of(field.p())) else { continue };
        a.swap(r, p);
        let inv = field.inv(a[r][c]).unwrap();
        for k in c..cols {
            a[r][k] = field.mul(a[r][k], inv);
        }
        for i in 0..rows {
            if i != r && a[i][c] != 0 {
                let f = a[i][c];
                for k in c..cols {
                    a[i][k] = field.sub(a[i][k], field.mul(f, a[r][k]));
                }
            }
        }
        r += 1;
        if r == rows {
            break;
        }
    }
    r
}

/// Incremental row echelon form for sparse rows over F_p.
pub struct SparseEchelon {
    field: PrimeField,
    pivots: Vec<Option<Vec<(u32, u64)>>>,
    rank: usize,
}

impl SparseEchelon {
    pub fn new(field: PrimeField, ncols: usize) -> SparseEchelon {
        SparseEchelon { field, pivots: vec![None; ncols], rank: 0 }
    }

    pub fn rank(&self) -> usize {
        self.rank
    }

    /// Insert a row (column, value) with distinct columns; returns true if it
    /// increased the rank.
    pub fn insert(&mut self, mut row: Vec<(u32, u64)>) -> bool {
        let f = self.field;
        row.retain(|&(_, v)| v % f.p() != 0);
        row.sort_unstable_by_key(|&(c, _)| c);
        loop {
            let Some(&(lead, lv)) = row.first() else { return false };
            match &self.pivots[lead as usize] {
                Some(piv) => {
                    // row -= lv * piv (piv has leading coefficient 1)
                    row = axpy(f, &row, piv, f.neg(lv));
                }
                None => {
                    let inv = f.inv(lv).unwrap();
                    let normed: Vec<(u32, u64)> = row.iter().map(|&(c, v)| (c, f.mul(v, inv))).collect();
                    self.pivots[lead as usize] = Some(normed);
                    self.rank += 1;
                    return true;
                }
            }
        }
    }
}

fn axpy(f: PrimeField, a: &[(u32, u64)], b: &[(u32, u64)], s: u64) -> Vec<(u32, u64)> {
    let mut out = Vec::with_capacity(a.len() + b.len());
    let (mut i, mut j) = (0, 0);
    while i < a.len() || j < b.len() {
        let take_a = j >= b.len() || (i < a.len() && a[i].0 < b[j].0);
        let take_b = i >= a.len() || (j < b.len() && b[j].0 < a[i].0);
        if take_a {
            out.push(a[i]);
            i += 1;
        } else if take_b {
            out.push((b[j].0, f.mul(b[j].1, s)));
            j += 1;
        } else {
            let v = f.add(a[i].1, f.mul(b[j].1, s));
            if v != 0 {
                out.push((a[i].0, v));
            }
            i += 1;
            j += 1;
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn sparse_matches_dense() {
        let f = PrimeField::new(13).unwrap();
        let m = vec![vec![1, 2, 0, 4], vec![2, 4, 0, 8], vec![0, 1, 1, 0], vec![1, 3, 1, 4]];
        let mut e = SparseEchelon::new(f, 4);
        for r in &m {
            e.insert(r.iter().enumerate().map(|(c, &v)| (c as u32, v)).collect());
        }
        assert_eq!(e.rank(), rank_dense(f, &m));
        assert_eq!(e.rank(), 2);
    }
}
