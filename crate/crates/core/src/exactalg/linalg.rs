use std::collections::HashMap;

use super::{AlgError, Poly, Scalar};

/// Rank by Gaussian elimination over the field of the entries.
pub fn rank(m: &[Vec<Scalar>]) -> usize {
    let mut a: Vec<Vec<Scalar>> = m.to_vec();
    let rows = a.len();
    if rows == 0 {
        return 0;
    }
    let cols = a[0].len();
    let mut r = 0;
    for c in 0..cols {
        let Some(p) = (r..rows).find(|&i| !a[i][c].is_zero()) else { continue };
        a.swap(r, p);
        let inv = a[r][c].inv().unwrap();
        for k in c..cols {
            a[r][k] = &a[r][k] * &inv;
        }
        for i in 0..rows {
            if i != r && !a[i][c].is_zero() {
                let f = a[i][c].clone();
                for k in c..cols {
                    let d = &f * &a[r][k];
                    a[i][k] = &a[i][k] - &d;
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

/// Determinant of a square polynomial matrix by expansion over column
/// subsets (row-by-row dynamic programming; zero entries are skipped).
pub fn determinant(m: &[Vec<Poly>]) -> Result<Poly, AlgError> {
    let n = m.len();
    if let Some(row) = m.iter().find(|r| r.len() != n) {
        return Err(AlgError::NotSquare { rows: n, cols: row.len() });
    }
    if n == 0 {
        return Err(AlgError::NotSquare { rows: 0, cols: 0 });
    }
    if n > 24 {
        return Err(AlgError::Budget { needed: n, budget: 24 });
    }
    let amb = m[0][0].ambient();
    // state: set of used columns after processing the first popcount rows
    let mut layer: HashMap<u32, Poly> = HashMap::new();
    layer.insert(0, Poly::one(amb));
    for row in m.iter() {
        let mut next: HashMap<u32, Poly> = HashMap::new();
        for (mask, acc) in &layer {
            for (c, entry) in row.iter().enumerate() {
                if mask & (1 << c) != 0 || entry.is_zero() {
                    continue;
                }
                // sign: parity of used columns greater than c
                let above = (mask >> (c + 1)).count_ones();
                let mut t = acc * entry;
                if above % 2 == 1 {
                    t = -&t;
                }
                let key = mask | (1 << c);
                match next.get_mut(&key) {
                    Some(v) => *v = &*v + &t,
                    None => {
                        next.insert(key, t);
                    }
                }
            }
        }
        next.retain(|_, v| !v.is_zero());
        layer = next;
    }
    Ok(layer.remove(&((1u32 << n) - 1)).unwrap_or_else(|| Poly::zero(amb)))
}

/// Determinant of a small scalar matrix.
pub fn scalar_determinant(m: &[Vec<Scalar>]) -> Scalar {
    let n = m.len();
    let mut a = m.to_vec();
    let mut det = Scalar::one();
    for c in 0..n {
        let Some(p) = (c..n).find(|&i| !a[i][c].is_zero()) else { return Scalar::zero() };
        if p != c {
            a.swap(p, c);
            det = -det;
        }
        det = &det * &a[c][c];
        let inv = a[c][c].inv().unwrap();
        for i in c + 1..n {
            let f = &a[i][c] * &inv;
            if f.is_zero() {
                continue;
            }
            for k in c..n {
                let d = &f * &a[c][k];
                a[i][k] = &a[i][k] - &d;
            }
        }
    }
    det
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactalg::{Ambient, PrimeField};

    #[test]
    fn rank_examples() {
        let id = vec![vec![Scalar::one(), Scalar::zero()], vec![Scalar::zero(), Scalar::one()]];
        assert_eq!(rank(&id), 2);
        let f = PrimeField::new(13).unwrap();
        let m = vec![
            vec![Scalar::fp(f, 2), Scalar::fp(f, 1)],
            vec![Scalar::fp(f, 1), Scalar::fp(f, 2)],
        ];
        assert_eq!(rank(&m), 2);
        assert_eq!(scalar_determinant(&m), Scalar::fp(f, 3));
    }

    #[test]
    fn det_examples() {
        let x0 = Poly::var(Ambient::XY, 0);
        let x1 = Poly::var(Ambient::XY, 1);
        let z = Poly::zero(Ambient::XY);
        assert_eq!(determinant(&[vec![x0.clone()]]).unwrap(), x0);
        let d = determinant(&[vec![x0.clone(), z.clone()], vec![z.clone(), x1.clone()]]).unwrap();
        assert_eq!(d, &x0 * &x1);
        let d = determinant(&[vec![z.clone(), x0.clone()], vec![x1.clone(), z]]).unwrap();
        assert_eq!(d, -&(&x0 * &x1));
        assert!(determinant(&[vec![x0.clone(), x1]]).is_err());
    }
}
