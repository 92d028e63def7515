//! F_q point enumeration on (P^1)^4, on T̃ = Z1 ∩ Z2 and on the images in P(1^8,2^8).
//!
//! A point of P^1(F_q) is stored normalized: (1 : a) in chart 0, (0 : 1) in chart 1.
//! "Twisted" tuples are the F_{q^2}-points (a_i : ω b_i) with ω² = n a fixed
//! non-residue; they satisfy Frob(P) = s(P) and map to F_q-points downstairs.

use std::collections::BTreeSet;
use std::fmt::Write as _;

use rand::Rng;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use crate::exactalg::modp::ModPoly;
use crate::exactalg::{Ambient, Poly, PrimeField, Scalar};
use crate::unproj::FamilyParams;

use super::points::WPoint;
use super::sigma::build_sigma;

pub type Homog = [[u64; 2]; 4];

/// A normalized F_q-point of (P^1)^4 with its chart id (bit i set when factor i is (0:1)).
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct CoverPoint {
    pub chart: u8,
    pub aff: [u64; 4],
}

impl CoverPoint {
    pub fn from_homog(h: &Homog, f: PrimeField) -> Option<CoverPoint> {
        let mut chart = 0u8;
        let mut aff = [0u64; 4];
        for i in 0..4 {
            let [a, b] = h[i];
            if a != 0 {
                aff[i] = f.mul(b, f.inv(a).unwrap());
            } else if b != 0 {
                chart |= 1 << i;
            } else {
                return None;
            }
        }
        Some(CoverPoint { chart, aff })
    }

    pub fn homog(&self) -> Homog {
        [0, 1, 2, 3].map(|i| if self.chart & (1 << i) != 0 { [0, 1] } else { [1, self.aff[i]] })
    }

    pub fn flat(&self) -> [u64; 8] {
        let h = self.homog();
        [h[0][0], h[0][1], h[1][0], h[1][1], h[2][0], h[2][1], h[3][0], h[3][1]]
    }
}

pub fn p1_points(f: PrimeField) -> Vec<[u64; 2]> {
    let mut v: Vec<[u64; 2]> = (0..f.p()).map(|a| [1, a]).collect();
    v.push([0, 1]);
    v
}

fn flat(h: &Homog) -> [u64; 8] {
    [h[0][0], h[0][1], h[1][0], h[1][1], h[2][0], h[2][1], h[3][0], h[3][1]]
}

/// Per-variable twist weights on T4: 1 for t_i1.
pub const T4_TWIST: [u32; 8] = [0, 1, 0, 1, 0, 1, 0, 1];

/// Evaluator for the surface equations over F_q.
#[derive(Clone, Debug)]
pub struct SurfaceEquations {
    pub field: PrimeField,
    pub z1: ModPoly,
    pub z2: ModPoly,
    pub z2_poly: Poly,
}

impl SurfaceEquations {
    pub fn new(field: PrimeField, nu: &FamilyParams) -> SurfaceEquations {
        let z2_poly = super::z2::build_z2(nu);
        SurfaceEquations {
            field,
            z1: ModPoly::compile(&super::sigma::z1(), field),
            z2: ModPoly::compile(&z2_poly, field),
            z2_poly,
        }
    }

    pub fn on_surface(&self, x: &[u64; 8]) -> bool {
        self.z1.eval(x) == 0 && self.z2.eval(x) == 0
    }

    /// Vanishing at a twisted tuple; Z1 has only odd, Z2 only even twist
    /// degrees, so the common power of ω drops out.
    pub fn on_surface_twisted(&self, x: &[u64; 8]) -> bool {
        let f = self.field;
        let n = f.non_residue();
        let half = |k: u32| f.pow(n, (k / 2) as u64);
        self.z1.eval_twisted(x, &T4_TWIST, &half) == 0 && self.z2.eval_twisted(x, &T4_TWIST, &half) == 0
    }
}

/// The F_q-points of Z1 ∩ Z2, sorted. Z1 is linear in the last factor:
/// A·t30 + B·t31 with A = t01 t10 t20, B = t00 t11 t21.
pub fn enumerate_surface(eq: &SurfaceEquations) -> Vec<CoverPoint> {
    enumerate_fast(eq, false)
}

/// The twisted points of Z1 ∩ Z2 in the (a : b) coordinates of (a : ωb).
pub fn enumerate_surface_twisted(eq: &SurfaceEquations) -> Vec<CoverPoint> {
    enumerate_fast(eq, true)
}

fn enumerate_fast(eq: &SurfaceEquations, twisted: bool) -> Vec<CoverPoint> {
    let f = eq.field;
    let n = f.non_residue();
    let pts = p1_points(f);
    let mut out: Vec<CoverPoint> = pts
        .par_iter()
        .flat_map_iter(|p0| {
            let mut local = Vec::new();
            for p1 in &pts {
                for p2 in &pts {
                    let a = f.mul(f.mul(p0[1], p1[0]), p2[0]);
                    let mut b = f.mul(f.mul(p0[0], p1[1]), p2[1]);
                    if twisted {
                        // ω b0 a1 a2 a3 + ω³ a0 b1 b2 b3 = ω (a·a3 + n·b'·b3)
                        b = f.mul(b, n);
                    }
                    let cands: Vec<[u64; 2]> =
                        if a == 0 && b == 0 { pts.clone() } else { vec![[b, f.neg(a)]] };
                    for p3 in cands {
                        let h = [*p0, *p1, *p2, p3];
                        let x = flat(&h);
                        let ok = if twisted { eq.on_surface_twisted(&x) } else { eq.on_surface(&x) };
                        if ok {
                            local.push(CoverPoint::from_homog(&h, f).unwrap());
                        }
                    }
                }
            }
            local
        })
        .collect();
    out.sort();
    out
}

/// Brute force over all (q+1)^4 tuples; the oracle for the fast path.
pub fn enumerate_naive(eq: &SurfaceEquations, twisted: bool) -> Vec<CoverPoint> {
    let f = eq.field;
    let pts = p1_points(f);
    let mut out = Vec::new();
    for p0 in &pts {
        for p1 in &pts {
            for p2 in &pts {
                for p3 in &pts {
                    let h = [*p0, *p1, *p2, *p3];
                    let x = flat(&h);
                    let ok = if twisted { eq.on_surface_twisted(&x) } else { eq.on_surface(&x) };
                    if ok {
                        out.push(CoverPoint::from_homog(&h, f).unwrap());
                    }
                }
            }
        }
    }
    out.sort();
    out
}

/// All tuples of (P^1(F_q))^4.
pub fn all_tuples(f: PrimeField) -> Vec<CoverPoint> {
    let pts = p1_points(f);
    let mut out = Vec::with_capacity(pts.len().pow(4));
    for p0 in &pts {
        for p1 in &pts {
            for p2 in &pts {
                for p3 in &pts {
                    out.push(CoverPoint::from_homog(&[*p0, *p1, *p2, *p3], f).unwrap());
                }
            }
        }
    }
    out
}

/// σ compiled over F_q: the 16 image monomials.
#[derive(Clone, Debug)]
pub struct SigmaFp {
    field: PrimeField,
    images: Vec<ModPoly>,
}

impl SigmaFp {
    pub fn new(field: PrimeField) -> SigmaFp {
        let s = build_sigma();
        let images = (0..16).map(|v| ModPoly::compile(&s.image_poly(v), field)).collect();
        SigmaFp { field, images }
    }

    pub fn image(&self, p: &CoverPoint) -> WPoint {
        let x = p.flat();
        let mut raw = [0u64; 16];
        for (v, r) in raw.iter_mut().enumerate() {
            *r = self.images[v].eval(&x);
        }
        WPoint::normalize(raw, self.field).expect("σ has no base points")
    }

    /// Image of the twisted tuple (a_i : ω b_i), rescaled by 1/ω so that all
    /// coordinates lie in F_q: x gets n^{(k-1)/2}, y gets n^{k/2-1}.
    pub fn image_twisted(&self, p: &CoverPoint) -> WPoint {
        let f = self.field;
        let n = f.non_residue();
        let n_inv = f.inv(n).unwrap();
        let x = p.flat();
        let mut raw = [0u64; 16];
        for (v, r) in raw.iter_mut().enumerate() {
            *r = if v < 8 {
                self.images[v].eval_twisted(&x, &T4_TWIST, &|k| f.pow(n, ((k - 1) / 2) as u64))
            } else {
                self.images[v].eval_twisted(&x, &T4_TWIST, &|k| f.mul(f.pow(n, (k / 2) as u64), n_inv))
            };
        }
        WPoint::normalize(raw, f).expect("σ has no base points")
    }
}

/// The F_q-points of Y: σ-images of rational and of twisted tuples.
pub struct YPoints {
    pub rational_images: BTreeSet<WPoint>,
    pub all: BTreeSet<WPoint>,
}

pub fn y_points(f: PrimeField) -> YPoints {
    let sig = SigmaFp::new(f);
    let tuples = all_tuples(f);
    let rational_images: BTreeSet<WPoint> = tuples.par_iter().map(|p| sig.image(p)).collect::<Vec<_>>().into_iter().collect();
    let twisted: Vec<WPoint> = tuples.par_iter().map(|p| sig.image_twisted(p)).collect();
    let mut all = rational_images.clone();
    all.extend(twisted);
    YPoints { rational_images, all }
}

/// The F_q-points of T = σ(T̃), from rational and twisted points of T̃.
pub fn t_points(eq: &SurfaceEquations) -> Vec<WPoint> {
    let sig = SigmaFp::new(eq.field);
    let mut set: BTreeSet<WPoint> = enumerate_surface(eq).iter().map(|p| sig.image(p)).collect();
    set.extend(enumerate_surface_twisted(eq).iter().map(|p| sig.image_twisted(p)));
    set.into_iter().collect()
}

/// Draw ν over F_q with all entries nonzero and not degenerate.
pub fn draw_nu(f: PrimeField, rng: &mut ChaCha8Rng) -> FamilyParams {
    loop {
        let v: [u64; 5] = std::array::from_fn(|_| rng.gen_range(1..f.p()));
        let nu = FamilyParams::new(v.map(|x| Scalar::fp(f, x)));
        if !nu.degenerate() {
            return nu;
        }
    }
}

pub fn rng_for(seed: u64, prime: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed ^ prime.wrapping_mul(0x9E37_79B9_7F4A_7C15))
}

pub fn nu_residues(nu: &FamilyParams, f: PrimeField) -> [u64; 5] {
    std::array::from_fn(|i| nu.nu[i].to_fp(f))
}

/// Point-set dump: header `q nu0..nu4 count`, then `chart t0 t1 t2 t3` per point.
pub fn dump_points(f: PrimeField, nu: &FamilyParams, points: &[CoverPoint]) -> String {
    let r = nu_residues(nu, f);
    let mut s = format!("{} {} {} {} {} {} {}\n", f.p(), r[0], r[1], r[2], r[3], r[4], points.len());
    for p in points {
        let _ = writeln!(s, "{:04b} {} {} {} {}", p.chart, p.aff[0], p.aff[1], p.aff[2], p.aff[3]);
    }
    s
}

/// Inverse of [`dump_points`].
pub fn parse_points(s: &str) -> Result<(u64, [u64; 5], Vec<CoverPoint>), String> {
    let mut lines = s.lines();
    let head: Vec<u64> = lines
        .next()
        .ok_or("empty dump")?
        .split_whitespace()
        .map(|t| t.parse::<u64>().map_err(|e| e.to_string()))
        .collect::<Result<_, _>>()?;
    if head.len() != 7 {
        return Err("header needs 7 fields".into());
    }
    let mut pts = Vec::new();
    for l in lines {
        let t: Vec<&str> = l.split_whitespace().collect();
        if t.len() != 5 {
            return Err(format!("bad point line '{l}'"));
        }
        let chart = u8::from_str_radix(t[0], 2).map_err(|e| e.to_string())?;
        let aff: [u64; 4] = std::array::from_fn(|i| t[i + 1].parse().unwrap_or(u64::MAX));
        if aff.contains(&u64::MAX) {
            return Err(format!("bad residue in '{l}'"));
        }
        pts.push(CoverPoint { chart, aff });
    }
    if pts.len() as u64 != head[6] {
        return Err("count mismatch".into());
    }
    Ok((head[0], [head[1], head[2], head[3], head[4], head[5]], pts))
}

/// Gradient evaluator for (Z1, Z2) on T4.
pub fn gradients(eq: &SurfaceEquations) -> [Vec<ModPoly>; 2] {
    let z1 = super::sigma::z1();
    [
        (0..8).map(|v| ModPoly::compile(&z1.derivative(v), eq.field)).collect(),
        (0..8).map(|v| ModPoly::compile(&eq.z2_poly.derivative(v), eq.field)).collect(),
    ]
}

pub fn t4_zero() -> Poly {
    Poly::zero(Ambient::T4)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn chart_roundtrip() {
        let f = PrimeField::new(13).unwrap();
        for p in all_tuples(f).iter().step_by(97) {
            assert_eq!(CoverPoint::from_homog(&p.homog(), f), Some(*p));
        }
    }

    #[test]
    fn fast_matches_naive() {
        let f = PrimeField::new(13).unwrap();
        let mut rng = rng_for(42, 13);
        let nu = draw_nu(f, &mut rng);
        let eq = SurfaceEquations::new(f, &nu);
        assert_eq!(enumerate_surface(&eq), enumerate_naive(&eq, false));
        assert_eq!(enumerate_surface_twisted(&eq), enumerate_naive(&eq, true));
    }

    #[test]
    fn dump_roundtrip() {
        let f = PrimeField::new(13).unwrap();
        let nu = draw_nu(f, &mut rng_for(1, 13));
        let eq = SurfaceEquations::new(f, &nu);
        let pts = enumerate_surface(&eq);
        let (q, _, back) = parse_points(&dump_points(f, &nu, &pts)).unwrap();
        assert_eq!(q, 13);
        assert_eq!(back, pts);
    }
}
