use std::cmp::Ordering;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};
use std::str::FromStr;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use super::AlgError;

/// A prime field F_p with p ≡ 1 mod 4 and its canonical square root of -1.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct PrimeField {
    p: u64,
    eps: u64,
}

impl PrimeField {
    pub const MAX_PRIME: u64 = 1 << 31;

    pub fn new(p: u64) -> Result<Self, AlgError> {
        if !(5..Self::MAX_PRIME).contains(&p) || !is_prime(p) {
            return Err(AlgError::Field(format!("{p} is not a supported prime")));
        }
        if p % 4 != 1 {
            return Err(AlgError::Field(format!(
                "{p} is not 1 mod 4, so F_{p} has no square root of -1 (epsilon)"
            )));
        }
        let eps = sqrt_minus_one(p);
        Ok(PrimeField { p, eps })
    }

    pub fn p(&self) -> u64 {
        self.p
    }

    /// The smaller of the two square roots of -1.
    pub fn eps(&self) -> u64 {
        self.eps
    }

    pub fn elem(&self, v: i64) -> Fp {
        Fp { v: v.rem_euclid(self.p as i64) as u64, field: *self }
    }

    #[inline]
    pub fn add(&self, a: u64, b: u64) -> u64 {
        let s = a + b;
        if s >= self.p {
            s - self.p
        } else {
            s
        }
    }

    #[inline]
    pub fn sub(&self, a: u64, b: u64) -> u64 {
        if a >= b {
            a - b
        } else {
            a + self.p - b
        }
    }

    #[inline]
    pub fn mul(&self, a: u64, b: u64) -> u64 {
        (a * b) % self.p
    }

    #[inline]
    pub fn neg(&self, a: u64) -> u64 {
        if a == 0 {
            0
        } else {
            self.p - a
        }
    }

    pub fn pow(&self, mut a: u64, mut e: u64) -> u64 {
        let mut r = 1u64;
        a %= self.p;
        while e > 0 {
            if e & 1 == 1 {
                r = self.mul(r, a);
            }
            a = self.mul(a, a);
            e >>= 1;
        }
        r
    }

    pub fn inv(&self, a: u64) -> Option<u64> {
        if a.is_multiple_of(self.p) {
            None
        } else {
            Some(self.pow(a, self.p - 2))
        }
    }

    pub fn is_square(&self, a: u64) -> bool {
        a.is_multiple_of(self.p) || self.pow(a, (self.p - 1) / 2) == 1
    }

    /// Smallest quadratic non-residue.
    pub fn non_residue(&self) -> u64 {
        (2..self.p).find(|&g| !self.is_square(g)).expect("odd prime has non-residues")
    }

    pub fn sqrt(&self, a: u64) -> Option<u64> {
        let a = a % self.p;
        if a == 0 {
            return Some(0);
        }
        if !self.is_square(a) {
            return None;
        }
        // brute force is fine for the small primes used here, Tonelli-Shanks otherwise
        if self.p < 1 << 16 {
            let r = (1..self.p).find(|&r| self.mul(r, r) == a).unwrap();
            return Some(r.min(self.p - r));
        }
        Some(tonelli_shanks(a, self.p))
    }

    /// Reduce a rational number; None if the denominator vanishes mod p.
    pub fn reduce(&self, r: &BigRational) -> Option<u64> {
        let pb = BigInt::from(self.p);
        let n = r.numer().mod_floor(&pb).to_u64().unwrap();
        let d = r.denom().mod_floor(&pb).to_u64().unwrap();
        self.inv(d).map(|di| self.mul(n, di))
    }
}

fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    let mut d = 2;
    while d * d <= n {
        if n.is_multiple_of(d) {
            return false;
        }
        d += 1;
    }
    true
}

fn sqrt_minus_one(p: u64) -> u64 {
    let f = PrimeField { p, eps: 0 };
    let g = f.non_residue();
    let r = f.pow(g, (p - 1) / 4);
    r.min(p - r)
}

fn tonelli_shanks(a: u64, p: u64) -> u64 {
    let f = PrimeField { p, eps: 0 };
    let (mut q, mut s) = (p - 1, 0);
    while q % 2 == 0 {
        q /= 2;
        s += 1;
    }
    let z = f.non_residue();
    let mut m = s;
    let mut c = f.pow(z, q);
    let mut t = f.pow(a, q);
    let mut r = f.pow(a, q.div_ceil(2));
    while t != 1 {
        let mut i = 0;
        let mut tt = t;
        while tt != 1 {
            tt = f.mul(tt, tt);
            i += 1;
        }
        let b = f.pow(c, 1 << (m - i - 1));
        m = i;
        c = f.mul(b, b);
        t = f.mul(t, c);
        r = f.mul(r, b);
    }
    r.min(p - r)
}

/// Element of a prime field.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct Fp {
    pub v: u64,
    pub field: PrimeField,
}

/// a + b·i with rational parts.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Gaussian {
    pub re: BigRational,
    pub im: BigRational,
}

/// Exact scalar. Rationals act as universal constants: combining a rational
/// with a Gaussian or prime-field element coerces it into that field
/// (i maps to ε under reduction mod p).
#[derive(Clone, Debug)]
pub enum Scalar {
    Rat(BigRational),
    Gauss(Gaussian),
    Fp(Fp),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum FieldKind {
    Rational,
    Gaussian,
    Prime(PrimeField),
}

fn rat(n: i64) -> BigRational {
    BigRational::from_integer(BigInt::from(n))
}

impl Scalar {
    pub fn zero() -> Scalar {
        Scalar::Rat(BigRational::zero())
    }

    pub fn one() -> Scalar {
        Scalar::Rat(BigRational::one())
    }

    pub fn int(n: i64) -> Scalar {
        Scalar::Rat(rat(n))
    }

    pub fn frac(n: i64, d: i64) -> Scalar {
        Scalar::Rat(BigRational::new(BigInt::from(n), BigInt::from(d)))
    }

    /// The imaginary unit of Q(i).
    pub fn i() -> Scalar {
        Scalar::Gauss(Gaussian { re: BigRational::zero(), im: BigRational::one() })
    }

    pub fn gauss(re: BigRational, im: BigRational) -> Scalar {
        Scalar::Gauss(Gaussian { re, im }).simplify()
    }

    pub fn fp(field: PrimeField, v: u64) -> Scalar {
        Scalar::Fp(Fp { v: v % field.p, field })
    }

    /// Square root of -1 in the given field kind.
    pub fn eps_in(kind: FieldKind) -> Result<Scalar, AlgError> {
        match kind {
            FieldKind::Rational => Err(AlgError::Field("Q has no square root of -1".into())),
            FieldKind::Gaussian => Ok(Scalar::i()),
            FieldKind::Prime(f) => Ok(Scalar::fp(f, f.eps)),
        }
    }

    pub fn kind(&self) -> FieldKind {
        match self {
            Scalar::Rat(_) => FieldKind::Rational,
            Scalar::Gauss(_) => FieldKind::Gaussian,
            Scalar::Fp(f) => FieldKind::Prime(f.field),
        }
    }

    fn simplify(self) -> Scalar {
        match self {
            Scalar::Gauss(g) if g.im.is_zero() => Scalar::Rat(g.re),
            s => s,
        }
    }

    pub fn is_zero(&self) -> bool {
        match self {
            Scalar::Rat(r) => r.is_zero(),
            Scalar::Gauss(g) => g.re.is_zero() && g.im.is_zero(),
            Scalar::Fp(f) => f.v == 0,
        }
    }

    pub fn is_one(&self) -> bool {
        match self {
            Scalar::Rat(r) => r.is_one(),
            Scalar::Gauss(g) => g.re.is_one() && g.im.is_zero(),
            Scalar::Fp(f) => f.v == 1,
        }
    }

    pub fn as_rational(&self) -> Option<&BigRational> {
        match self {
            Scalar::Rat(r) => Some(r),
            _ => None,
        }
    }

    /// Residue in F_p; None when a denominator vanishes mod p.
    pub fn try_to_fp(&self, f: PrimeField) -> Option<u64> {
        match self {
            Scalar::Rat(r) => f.reduce(r),
            Scalar::Gauss(g) => {
                let re = f.reduce(&g.re)?;
                let im = f.reduce(&g.im)?;
                Some(f.add(re, f.mul(im, f.eps)))
            }
            Scalar::Fp(x) => {
                assert_eq!(x.field.p, f.p, "mixed prime fields");
                Some(x.v)
            }
        }
    }

    pub fn to_fp(&self, f: PrimeField) -> u64 {
        self.try_to_fp(f)
            .unwrap_or_else(|| panic!("{self} has a denominator divisible by {}", f.p))
    }

    pub fn coerce(&self, kind: FieldKind) -> Scalar {
        match kind {
            FieldKind::Rational => match self {
                Scalar::Rat(_) => self.clone(),
                _ => panic!("cannot coerce {self} into Q"),
            },
            FieldKind::Gaussian => match self {
                Scalar::Rat(r) => Scalar::Gauss(Gaussian { re: r.clone(), im: BigRational::zero() }),
                Scalar::Gauss(_) => self.clone(),
                Scalar::Fp(_) => panic!("cannot coerce {self} into Q(i)"),
            },
            FieldKind::Prime(f) => Scalar::fp(f, self.to_fp(f)),
        }
    }

    fn join(a: &Scalar, b: &Scalar) -> FieldKind {
        match (a.kind(), b.kind()) {
            (FieldKind::Prime(f), FieldKind::Prime(g)) => {
                assert_eq!(f.p, g.p, "mixed prime fields F_{} and F_{}", f.p, g.p);
                FieldKind::Prime(f)
            }
            (FieldKind::Prime(f), _) | (_, FieldKind::Prime(f)) => FieldKind::Prime(f),
            (FieldKind::Gaussian, _) | (_, FieldKind::Gaussian) => FieldKind::Gaussian,
            _ => FieldKind::Rational,
        }
    }

    fn binop(&self, other: &Scalar, op: Op) -> Scalar {
        match (self, other) {
            (Scalar::Rat(a), Scalar::Rat(b)) => Scalar::Rat(match op {
                Op::Add => a + b,
                Op::Sub => a - b,
                Op::Mul => a * b,
            }),
            (Scalar::Fp(a), Scalar::Fp(b)) => {
                assert_eq!(a.field.p, b.field.p, "mixed prime fields");
                let f = a.field;
                Scalar::fp(
                    f,
                    match op {
                        Op::Add => f.add(a.v, b.v),
                        Op::Sub => f.sub(a.v, b.v),
                        Op::Mul => f.mul(a.v, b.v),
                    },
                )
            }
            (Scalar::Gauss(a), Scalar::Gauss(b)) => {
                let g = match op {
                    Op::Add => Gaussian { re: &a.re + &b.re, im: &a.im + &b.im },
                    Op::Sub => Gaussian { re: &a.re - &b.re, im: &a.im - &b.im },
                    Op::Mul => Gaussian {
                        re: &a.re * &b.re - &a.im * &b.im,
                        im: &a.re * &b.im + &a.im * &b.re,
                    },
                };
                Scalar::Gauss(g).simplify()
            }
            _ => {
                let k = Scalar::join(self, other);
                self.coerce(k).binop(&other.coerce(k), op)
            }
        }
    }

    pub fn inv(&self) -> Option<Scalar> {
        if self.is_zero() {
            return None;
        }
        Some(match self {
            Scalar::Rat(r) => Scalar::Rat(r.recip()),
            Scalar::Gauss(g) => {
                let n = &g.re * &g.re + &g.im * &g.im;
                Scalar::Gauss(Gaussian { re: &g.re / &n, im: -(&g.im / &n) }).simplify()
            }
            Scalar::Fp(x) => Scalar::fp(x.field, x.field.inv(x.v).unwrap()),
        })
    }

    pub fn div(&self, other: &Scalar) -> Result<Scalar, AlgError> {
        other.inv().map(|i| self * &i).ok_or(AlgError::DivisionByZero)
    }

    pub fn pow(&self, e: i64) -> Scalar {
        let base = if e < 0 { self.inv().expect("negative power of zero") } else { self.clone() };
        let mut e = e.unsigned_abs();
        let mut r = Scalar::one();
        let mut b = base;
        while e > 0 {
            if e & 1 == 1 {
                r = &r * &b;
            }
            b = &b * &b;
            e >>= 1;
        }
        r
    }

    /// Parse `a/b`, `a`, `a/b+c/d*i` or `a-c*i` as an exact scalar over Q or Q(i).
    pub fn parse(s: &str) -> Result<Scalar, AlgError> {
        let s = s.trim();
        if let Some(body) = s.strip_suffix("*i") {
            // split at the last +/- that is not at position 0 and not after '/'
            let bytes = body.as_bytes();
            let mut split = None;
            for k in (1..bytes.len()).rev() {
                if (bytes[k] == b'+' || bytes[k] == b'-') && bytes[k - 1] != b'/' && bytes[k - 1] != b'+' {
                    split = Some(k);
                    break;
                }
            }
            let (re, im) = match split {
                Some(k) => {
                    let re = parse_rational(&body[..k])?;
                    let im_str = if bytes[k] == b'+' { &body[k + 1..] } else { &body[k..] };
                    (re, parse_rational(im_str)?)
                }
                None => (BigRational::zero(), parse_rational(body)?),
            };
            return Ok(Scalar::gauss(re, im));
        }
        if s == "i" {
            return Ok(Scalar::i());
        }
        Ok(Scalar::Rat(parse_rational(s)?))
    }

    /// Parse in a given field; over F_p any rational/Gaussian string is reduced.
    pub fn parse_in(s: &str, kind: FieldKind) -> Result<Scalar, AlgError> {
        let v = Scalar::parse(s)?;
        match kind {
            FieldKind::Prime(f) => v
                .try_to_fp(f)
                .map(|r| Scalar::fp(f, r))
                .ok_or_else(|| AlgError::Parse(format!("{s} is not defined mod {}", f.p))),
            FieldKind::Rational if matches!(v, Scalar::Gauss(_)) => {
                Err(AlgError::Parse(format!("{s} is not rational")))
            }
            k => Ok(v.coerce(k)),
        }
    }
}

fn parse_rational(s: &str) -> Result<BigRational, AlgError> {
    let s = s.trim();
    let err = || AlgError::Parse(format!("bad rational '{s}'"));
    match s.split_once('/') {
        Some((n, d)) => {
            let n = BigInt::from_str(n.trim()).map_err(|_| err())?;
            let d = BigInt::from_str(d.trim()).map_err(|_| err())?;
            if d.is_zero() {
                return Err(err());
            }
            Ok(BigRational::new(n, d))
        }
        None => Ok(BigRational::from_integer(BigInt::from_str(s).map_err(|_| err())?)),
    }
}

fn fmt_rat(r: &BigRational) -> String {
    if r.denom().is_one() {
        r.numer().to_string()
    } else {
        format!("{}/{}", r.numer(), r.denom())
    }
}

#[derive(Clone, Copy)]
enum Op {
    Add,
    Sub,
    Mul,
}

impl PartialEq for Scalar {
    fn eq(&self, other: &Scalar) -> bool {
        match (self, other) {
            (Scalar::Rat(a), Scalar::Rat(b)) => a == b,
            (Scalar::Gauss(a), Scalar::Gauss(b)) => a == b,
            (Scalar::Fp(a), Scalar::Fp(b)) => a.field.p == b.field.p && a.v == b.v,
            (Scalar::Fp(a), o) | (o, Scalar::Fp(a)) => o.try_to_fp(a.field) == Some(a.v),
            (Scalar::Rat(_), Scalar::Gauss(_)) | (Scalar::Gauss(_), Scalar::Rat(_)) => {
                (self - other).is_zero()
            }
        }
    }
}

impl fmt::Display for Scalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Scalar::Rat(r) => write!(f, "{}", fmt_rat(r)),
            Scalar::Gauss(g) => write!(f, "{}+{}*i", fmt_rat(&g.re), fmt_rat(&g.im)),
            Scalar::Fp(x) => write!(f, "{}", x.v),
        }
    }
}

impl Scalar {
    /// True when the printed form needs a leading minus (used by polynomial printing).
    pub fn is_negative_rational(&self) -> bool {
        matches!(self, Scalar::Rat(r) if r.is_negative())
    }

    /// Deterministic total order for canonical sorting (not a field order).
    pub fn canonical_cmp(&self, other: &Scalar) -> Ordering {
        self.to_string().cmp(&other.to_string())
    }
}

macro_rules! impl_ops {
    ($tr:ident, $m:ident, $op:expr) => {
        impl<'a> $tr<&'a Scalar> for &'a Scalar {
            type Output = Scalar;
            fn $m(self, o: &'a Scalar) -> Scalar {
                self.binop(o, $op)
            }
        }
        impl $tr<Scalar> for Scalar {
            type Output = Scalar;
            fn $m(self, o: Scalar) -> Scalar {
                self.binop(&o, $op)
            }
        }
    };
}
impl_ops!(Add, add, Op::Add);
impl_ops!(Sub, sub, Op::Sub);
impl_ops!(Mul, mul, Op::Mul);

impl Neg for &Scalar {
    type Output = Scalar;
    fn neg(self) -> Scalar {
        match self {
            Scalar::Rat(r) => Scalar::Rat(-r),
            Scalar::Gauss(g) => Scalar::Gauss(Gaussian { re: -&g.re, im: -&g.im }),
            Scalar::Fp(x) => Scalar::fp(x.field, x.field.neg(x.v)),
        }
    }
}

impl Neg for Scalar {
    type Output = Scalar;
    fn neg(self) -> Scalar {
        -&self
    }
}

impl From<i64> for Scalar {
    fn from(n: i64) -> Scalar {
        Scalar::int(n)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn eps_is_canonical() {
        let f = PrimeField::new(13).unwrap();
        assert_eq!(f.eps(), 5);
        assert_eq!(f.mul(5, 5), 12);
        assert_eq!(PrimeField::new(17).unwrap().eps(), 4);
        assert_eq!(PrimeField::new(29).unwrap().eps(), 12);
        assert!(PrimeField::new(7).is_err());
        assert!(PrimeField::new(15).is_err());
    }

    #[test]
    fn gaussian_reduces_through_eps() {
        let f = PrimeField::new(13).unwrap();
        let i = Scalar::i();
        assert_eq!((&i * &i), Scalar::int(-1));
        assert_eq!(i.coerce(FieldKind::Prime(f)), Scalar::fp(f, 5));
        let half = Scalar::frac(1, 2);
        assert_eq!(&half * &Scalar::fp(f, 2), Scalar::one());
    }

    #[test]
    fn parse_roundtrip() {
        for s in ["3", "-7/4", "1/2+-3/4*i", "0+1*i", "5+2*i"] {
            let v = Scalar::parse(s).unwrap();
            assert_eq!(Scalar::parse(&v.to_string()).unwrap(), v);
        }
        assert_eq!(Scalar::parse("1-2*i").unwrap().to_string(), "1+-2*i");
        assert_eq!(Scalar::parse("6/4").unwrap().to_string(), "3/2");
    }

    #[test]
    fn tonelli_matches_bruteforce() {
        let f = PrimeField { p: 10009, eps: 0 };
        for a in [4u64, 9, 2, 3, 5] {
            if f.is_square(a) {
                let r = tonelli_shanks(a, f.p);
                assert_eq!(f.mul(r, r), a);
            }
        }
    }
}
