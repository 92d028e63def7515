use crate::exactalg::PrimeField;

/// An F_q-point of P(1^8,2^8), normalized: the first nonzero x-coordinate is 1,
/// or, when all x vanish, the first nonzero y-coordinate is 1.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct WPoint(pub [u64; 16]);

impl WPoint {
    pub fn normalize(mut raw: [u64; 16], f: PrimeField) -> Option<WPoint> {
        if let Some(i) = (0..8).find(|&i| raw[i] != 0) {
            let l = f.inv(raw[i]).unwrap();
            let l2 = f.mul(l, l);
            for (k, v) in raw.iter_mut().enumerate() {
                *v = f.mul(*v, if k < 8 { l } else { l2 });
            }
            return Some(WPoint(raw));
        }
        let i = (8..16).find(|&i| raw[i] != 0)?;
        // over the algebraic closure every scalar is a square, so y alone is a P^7 point
        let m = f.inv(raw[i]).unwrap();
        for v in raw[8..].iter_mut() {
            *v = f.mul(*v, m);
        }
        Some(WPoint(raw))
    }

    pub fn x(&self, v: usize) -> u64 {
        self.0[v]
    }

    /// (s0 : s1 : s2 : s3) with s_i = (x_i0² + x_i1²)/2, normalized in P^3.
    pub fn s_image(&self, f: PrimeField) -> Option<[u64; 4]> {
        let half = f.inv(2).unwrap();
        let mut s = [0u64; 4];
        for (i, si) in s.iter_mut().enumerate() {
            let a = self.0[2 * i];
            let b = self.0[2 * i + 1];
            *si = f.mul(half, f.add(f.mul(a, a), f.mul(b, b)));
        }
        normalize_p3(s, f)
    }
}

/// Normalize a point of P^n so its first nonzero coordinate is 1.
pub fn normalize_p3<const N: usize>(mut v: [u64; N], f: PrimeField) -> Option<[u64; N]> {
    let i = (0..N).find(|&i| v[i] != 0)?;
    let l = f.inv(v[i]).unwrap();
    for x in v.iter_mut() {
        *x = f.mul(*x, l);
    }
    Some(v)
}
