use crate::exactalg::ambient::{c, t4, xy, L};
use crate::exactalg::{Ambient, Mono, MonomialMap, Poly, Scalar};

/// Pullback along σ: (P^1)^4 → P(1^8,2^8).
pub fn build_sigma() -> MonomialMap {
    let mut images = Vec::with_capacity(16);
    for i in 0..4 {
        for a in 0..2u8 {
            let mut m = Mono::one(8);
            for j in 0..4 {
                let b = if j == i { c(a) } else { a };
                m.0[t4::t(j, b)] += 1;
            }
            images.push((Scalar::one(), m));
        }
    }
    for t in L {
        let constant = t.iter().all(|&d| d == t[0]);
        let mut m = Mono::one(8);
        for j in 0..4 {
            let b = if constant { c(t[j]) } else { t[j] };
            m.0[t4::t(j, b)] += 2;
        }
        images.push((Scalar::one(), m));
    }
    MonomialMap::new(Ambient::XY, Ambient::T4, images, false)
}

/// Deck involution s: t_ia ↦ (-1)^a t_ia.
pub fn deck_involution() -> MonomialMap {
    let images = (0..8)
        .map(|v| (Scalar::int(if v % 2 == 1 { -1 } else { 1 }), Mono::var(8, v)))
        .collect();
    MonomialMap::new(Ambient::T4, Ambient::T4, images, false)
}

/// Z1 = t01 t10 t20 t30 + t00 t11 t21 t31.
pub fn z1() -> Poly {
    let a = Poly::monomial(
        Ambient::T4,
        Scalar::one(),
        &[(t4::t(0, 1), 1), (t4::t(1, 0), 1), (t4::t(2, 0), 1), (t4::t(3, 0), 1)],
    );
    let b = Poly::monomial(
        Ambient::T4,
        Scalar::one(),
        &[(t4::t(0, 0), 1), (t4::t(1, 1), 1), (t4::t(2, 1), 1), (t4::t(3, 1), 1)],
    );
    &a + &b
}

/// The hyperplane x00 + x01.
pub fn hyperplane() -> Poly {
    &Poly::var(Ambient::XY, xy::x(0, 0)) + &Poly::var(Ambient::XY, xy::x(0, 1))
}

/// The scalar λ with f♯(v) = λ^weight(v)·g♯(v) for every source variable v,
/// if it exists (projective equality of two maps into a weighted target).
pub fn weighted_ratio(f: &MonomialMap, g: &MonomialMap) -> Option<Scalar> {
    let src = f.source();
    let mut lambda: Option<Scalar> = None;
    // weight-1 variables determine λ; heavier ones are then checked
    let mut order: Vec<usize> = (0..src.nvars()).collect();
    order.sort_by_key(|&v| src.weight(v));
    for v in order {
        let (cf, mf) = f.image(v);
        let (cg, mg) = g.image(v);
        if mf != mg || cf.is_zero() != cg.is_zero() {
            return None;
        }
        let ratio = cf.div(cg).ok()?;
        match &lambda {
            None => {
                if src.weight(v) != 1 {
                    return None;
                }
                lambda = Some(ratio);
            }
            Some(l) => {
                if l.pow(src.weight(v)) != ratio {
                    return None;
                }
            }
        }
    }
    lambda
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn sigma_examples() {
        let s = build_sigma();
        assert_eq!(s.apply(&hyperplane()).unwrap(), z1());
        let y0 = s.apply(&Poly::var(Ambient::XY, xy::y(0))).unwrap();
        assert_eq!(y0.to_string(), "t01^2*t11^2*t21^2*t31^2");
        let q = &(&Poly::var(Ambient::XY, 0) * &Poly::var(Ambient::XY, 1))
            - &(&Poly::var(Ambient::XY, 2) * &Poly::var(Ambient::XY, 3));
        assert!(s.apply(&q).unwrap().is_zero());
    }

    #[test]
    fn sigma_is_deck_invariant() {
        let s = build_sigma();
        let lam = weighted_ratio(&s.then(&deck_involution()).unwrap(), &s).unwrap();
        assert_eq!(lam, Scalar::int(-1));
    }
}
