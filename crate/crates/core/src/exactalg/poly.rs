use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use super::{AlgError, Ambient, FieldKind, Scalar};

/// Exponent vector; entries may be negative for Laurent polynomials.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Mono(pub Vec<i32>);

impl Mono {
    pub fn one(n: usize) -> Mono {
        Mono(vec![0; n])
    }

    pub fn var(n: usize, i: usize) -> Mono {
        let mut e = vec![0; n];
        e[i] = 1;
        Mono(e)
    }

    pub fn mul(&self, o: &Mono) -> Mono {
        Mono(self.0.iter().zip(&o.0).map(|(a, b)| a + b).collect())
    }

    /// self / o; may produce negative entries.
    pub fn div(&self, o: &Mono) -> Mono {
        Mono(self.0.iter().zip(&o.0).map(|(a, b)| a - b).collect())
    }

    pub fn divides(&self, o: &Mono) -> bool {
        self.0.iter().zip(&o.0).all(|(a, b)| a <= b)
    }

    pub fn is_laurent(&self) -> bool {
        self.0.iter().any(|&e| e < 0)
    }

    pub fn total_degree(&self) -> i64 {
        self.0.iter().map(|&e| e as i64).sum()
    }

    pub fn weighted_degree(&self, amb: Ambient) -> i64 {
        self.0.iter().enumerate().map(|(i, &e)| e as i64 * amb.weight(i)).sum()
    }

    /// Multidegree in the four P^1 factors (T4 ambient).
    pub fn multidegree(&self) -> [i32; 4] {
        let mut d = [0; 4];
        for (i, &e) in self.0.iter().enumerate() {
            d[i / 2] += e;
        }
        d
    }

    pub fn gcd(&self, o: &Mono) -> Mono {
        Mono(self.0.iter().zip(&o.0).map(|(a, b)| *a.min(b)).collect())
    }

    pub fn fmt_in(&self, amb: Ambient) -> String {
        let parts: Vec<String> = self
            .0
            .iter()
            .enumerate()
            .filter(|(_, &e)| e != 0)
            .map(|(i, &e)| {
                if e == 1 {
                    amb.var_name(i).to_string()
                } else {
                    format!("{}^{}", amb.var_name(i), e)
                }
            })
            .collect();
        if parts.is_empty() {
            "1".into()
        } else {
            parts.join("*")
        }
    }
}

/// Sparse polynomial with exact coefficients in a fixed ambient.
#[derive(Clone, Debug, PartialEq)]
pub struct Poly {
    ambient: Ambient,
    terms: BTreeMap<Mono, Scalar>,
}

impl Poly {
    pub fn zero(ambient: Ambient) -> Poly {
        Poly { ambient, terms: BTreeMap::new() }
    }

    pub fn constant(ambient: Ambient, c: Scalar) -> Poly {
        Poly::term(ambient, c, Mono::one(ambient.nvars()))
    }

    pub fn one(ambient: Ambient) -> Poly {
        Poly::constant(ambient, Scalar::one())
    }

    pub fn var(ambient: Ambient, i: usize) -> Poly {
        Poly::term(ambient, Scalar::one(), Mono::var(ambient.nvars(), i))
    }

    pub fn term(ambient: Ambient, c: Scalar, m: Mono) -> Poly {
        assert_eq!(m.0.len(), ambient.nvars(), "exponent vector length");
        let mut terms = BTreeMap::new();
        if !c.is_zero() {
            terms.insert(m, c);
        }
        Poly { ambient, terms }
    }

    /// Monomial from (variable, exponent) pairs.
    pub fn monomial(ambient: Ambient, c: Scalar, factors: &[(usize, i32)]) -> Poly {
        let mut m = Mono::one(ambient.nvars());
        for &(v, e) in factors {
            m.0[v] += e;
        }
        Poly::term(ambient, c, m)
    }

    pub fn from_terms(ambient: Ambient, it: impl IntoIterator<Item = (Mono, Scalar)>) -> Poly {
        let mut p = Poly::zero(ambient);
        for (m, c) in it {
            p.add_term(m, c);
        }
        p
    }

    pub fn ambient(&self) -> Ambient {
        self.ambient
    }

    pub fn terms(&self) -> impl DoubleEndedIterator<Item = (&Mono, &Scalar)> {
        self.terms.iter()
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn coeff(&self, m: &Mono) -> Scalar {
        self.terms.get(m).cloned().unwrap_or_else(Scalar::zero)
    }

    pub fn add_term(&mut self, m: Mono, c: Scalar) {
        if c.is_zero() {
            return;
        }
        match self.terms.get_mut(&m) {
            Some(old) => {
                let s = &*old + &c;
                if s.is_zero() {
                    self.terms.remove(&m);
                } else {
                    *old = s;
                }
            }
            None => {
                self.terms.insert(m, c);
            }
        }
    }

    fn check(&self, o: &Poly) {
        assert_eq!(self.ambient, o.ambient, "ambient mismatch in polynomial arithmetic");
    }

    pub fn scale(&self, c: &Scalar) -> Poly {
        if c.is_zero() {
            return Poly::zero(self.ambient);
        }
        Poly::from_terms(self.ambient, self.terms.iter().map(|(m, a)| (m.clone(), a * c)))
    }

    pub fn mul_mono(&self, c: &Scalar, m: &Mono) -> Poly {
        Poly::from_terms(self.ambient, self.terms.iter().map(|(k, a)| (k.mul(m), a * c)))
    }

    pub fn pow(&self, e: u32) -> Poly {
        let mut r = Poly::one(self.ambient);
        for _ in 0..e {
            r = &r * self;
        }
        r
    }

    /// Leading term under the lexicographic order.
    pub fn leading(&self) -> Option<(&Mono, &Scalar)> {
        self.terms.iter().next_back()
    }

    pub fn is_laurent(&self) -> bool {
        self.terms.keys().any(Mono::is_laurent)
    }

    pub fn weighted_degrees(&self) -> Vec<i64> {
        let mut d: Vec<i64> = self.terms.keys().map(|m| m.weighted_degree(self.ambient)).collect();
        d.sort();
        d.dedup();
        d
    }

    pub fn is_homogeneous(&self) -> bool {
        self.weighted_degrees().len() <= 1
    }

    pub fn weighted_degree(&self) -> Option<i64> {
        let d = self.weighted_degrees();
        (d.len() == 1).then(|| d[0])
    }

    /// Common multidegree of all terms (T4 ambient), if homogeneous.
    pub fn multidegree(&self) -> Option<[i32; 4]> {
        let mut it = self.terms.keys().map(Mono::multidegree);
        let first = it.next()?;
        it.all(|d| d == first).then_some(first)
    }

    pub fn derivative(&self, v: usize) -> Poly {
        Poly::from_terms(
            self.ambient,
            self.terms.iter().filter(|(m, _)| m.0[v] != 0).map(|(m, c)| {
                let mut m2 = m.clone();
                let e = m2.0[v];
                m2.0[v] -= 1;
                (m2, c * &Scalar::int(e as i64))
            }),
        )
    }

    pub fn eval(&self, point: &[Scalar]) -> Scalar {
        assert_eq!(point.len(), self.ambient.nvars());
        let mut acc = Scalar::zero();
        for (m, c) in &self.terms {
            let mut t = c.clone();
            for (x, &e) in point.iter().zip(&m.0) {
                if e != 0 {
                    t = &t * &x.pow(e as i64);
                }
            }
            acc = &acc + &t;
        }
        acc
    }

    /// Substitute arbitrary polynomials for the variables (non-negative exponents only).
    pub fn compose(&self, images: &[Poly], target: Ambient) -> Result<Poly, AlgError> {
        if images.len() != self.ambient.nvars() {
            return Err(AlgError::AmbientMismatch {
                expected: format!("{} images", self.ambient.nvars()),
                found: format!("{}", images.len()),
            });
        }
        let mut out = Poly::zero(target);
        for (m, c) in &self.terms {
            let mut t = Poly::constant(target, c.clone());
            for (img, &e) in images.iter().zip(&m.0) {
                if e < 0 {
                    return Err(AlgError::LaurentOutput);
                }
                if e > 0 {
                    if img.ambient != target {
                        return Err(AlgError::AmbientMismatch {
                            expected: target.to_string(),
                            found: img.ambient.to_string(),
                        });
                    }
                    t = &t * &img.pow(e as u32);
                }
            }
            out = &out + &t;
        }
        Ok(out)
    }

    /// Exact quotient self / g, or None if g does not divide self.
    pub fn div_exact(&self, g: &Poly) -> Option<Poly> {
        self.check(g);
        let (lm_g, lc_g) = g.leading()?;
        let lc_inv = lc_g.inv()?;
        let mut r = self.clone();
        let mut q = Poly::zero(self.ambient);
        while let Some((lm, lc)) = r.leading() {
            if !lm_g.divides(lm) {
                return None;
            }
            let m = lm.div(lm_g);
            let c = lc * &lc_inv;
            r = &r - &g.mul_mono(&c, &m);
            q.add_term(m, c);
        }
        Some(q)
    }

    /// Monomial gcd of all terms.
    pub fn monomial_content(&self) -> Option<Mono> {
        let mut it = self.terms.keys();
        let first = it.next()?.clone();
        Some(it.fold(first, |a, m| a.gcd(m)))
    }

    pub fn coerce(&self, kind: FieldKind) -> Poly {
        Poly::from_terms(self.ambient, self.terms.iter().map(|(m, c)| (m.clone(), c.coerce(kind))))
    }

    /// Reinterpret in another ambient with the same number of variables.
    pub fn relabel(&self, ambient: Ambient) -> Poly {
        assert_eq!(ambient.nvars(), self.ambient.nvars());
        Poly { ambient, terms: self.terms.clone() }
    }

    /// Scalar c with self = c·other, if one exists.
    pub fn proportionality(&self, other: &Poly) -> Option<Scalar> {
        self.check(other);
        if self.is_zero() || other.is_zero() {
            return (self.is_zero() && other.is_zero()).then(Scalar::one);
        }
        let (m, c) = self.leading()?;
        let d = other.terms.get(m)?;
        let ratio = c.div(d).ok()?;
        (other.scale(&ratio) == *self).then_some(ratio)
    }

    /// Scalar c and Laurent monomial u with self = c·u·other, if they exist.
    pub fn proportional_up_to_monomial(&self, other: &Poly) -> Option<(Scalar, Mono)> {
        self.check(other);
        let (m1, c1) = self.leading()?;
        let (m2, c2) = other.leading()?;
        let shift = m1.div(m2);
        let ratio = c1.div(c2).ok()?;
        (other.mul_mono(&ratio, &shift) == *self).then_some((ratio, shift))
    }
}

impl fmt::Display for Poly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        let mut first = true;
        for (m, c) in self.terms.iter().rev() {
            if !first {
                write!(f, " + ")?;
            }
            first = false;
            let is_const = m.0.iter().all(|&e| e == 0);
            let ms = m.fmt_in(self.ambient);
            if is_const {
                write!(f, "{c}")?;
            } else if c.is_one() {
                write!(f, "{ms}")?;
            } else if (-c).is_one() {
                write!(f, "-{ms}")?;
            } else if matches!(c, Scalar::Gauss(_)) {
                write!(f, "({c})*{ms}")?;
            } else {
                write!(f, "{c}*{ms}")?;
            }
        }
        Ok(())
    }
}

impl<'a> Add<&'a Poly> for &'a Poly {
    type Output = Poly;
    fn add(self, o: &'a Poly) -> Poly {
        self.check(o);
        let mut r = self.clone();
        for (m, c) in &o.terms {
            r.add_term(m.clone(), c.clone());
        }
        r
    }
}

impl<'a> Sub<&'a Poly> for &'a Poly {
    type Output = Poly;
    fn sub(self, o: &'a Poly) -> Poly {
        self.check(o);
        let mut r = self.clone();
        for (m, c) in &o.terms {
            r.add_term(m.clone(), -c);
        }
        r
    }
}

impl<'a> Mul<&'a Poly> for &'a Poly {
    type Output = Poly;
    fn mul(self, o: &'a Poly) -> Poly {
        self.check(o);
        let mut r = Poly::zero(self.ambient);
        for (m1, c1) in &self.terms {
            for (m2, c2) in &o.terms {
                r.add_term(m1.mul(m2), c1 * c2);
            }
        }
        r
    }
}

impl Neg for &Poly {
    type Output = Poly;
    fn neg(self) -> Poly {
        self.scale(&Scalar::int(-1))
    }
}

macro_rules! owned_ops {
    ($tr:ident, $m:ident) => {
        impl $tr<Poly> for Poly {
            type Output = Poly;
            fn $m(self, o: Poly) -> Poly {
                (&self).$m(&o)
            }
        }
    };
}
owned_ops!(Add, add);
owned_ops!(Sub, sub);
owned_ops!(Mul, mul);

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactalg::ambient::xy;

    fn x(i: usize, a: u8) -> Poly {
        Poly::var(Ambient::XY, xy::x(i, a))
    }

    #[test]
    fn printing_is_canonical() {
        let p = &(&x(0, 0) * &x(0, 0)) - &Poly::var(Ambient::XY, xy::y(1)).scale(&Scalar::int(3));
        assert_eq!(p.to_string(), "x00^2 + -3*y0011");
        assert_eq!(Poly::zero(Ambient::XY).to_string(), "0");
    }

    #[test]
    fn exact_division() {
        let f = &x(0, 0) * &x(0, 1);
        let g = &f - &(&x(1, 0) * &x(1, 1));
        let h = &g * &(&x(2, 0) + &x(3, 1));
        assert_eq!(h.div_exact(&g).unwrap(), &x(2, 0) + &x(3, 1));
        assert!(h.div_exact(&x(2, 1)).is_none());
    }

    #[test]
    fn degrees() {
        let y = Poly::var(Ambient::XY, xy::y(0));
        let p = &(&y * &x(0, 0)) - &(&(&x(1, 1) * &x(2, 1)) * &x(3, 1));
        assert_eq!(p.weighted_degree(), Some(3));
        assert!(!(&y + &x(0, 0)).is_homogeneous());
        assert_eq!(p.derivative(xy::y(0)), x(0, 0));
    }
}
