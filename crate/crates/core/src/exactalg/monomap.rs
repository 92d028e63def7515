use super::{AlgError, Ambient, Mono, Poly, Scalar};

/// Ring homomorphism sending each source variable to scalar × monomial.
#[derive(Clone, Debug, PartialEq)]
pub struct MonomialMap {
    source: Ambient,
    target: Ambient,
    images: Vec<(Scalar, Mono)>,
    laurent: bool,
}

impl MonomialMap {
    pub fn new(
        source: Ambient,
        target: Ambient,
        images: Vec<(Scalar, Mono)>,
        laurent: bool,
    ) -> MonomialMap {
        assert_eq!(images.len(), source.nvars(), "one image per source variable");
        for (c, m) in &images {
            assert_eq!(m.0.len(), target.nvars(), "image exponent length");
            assert!(!c.is_zero() || !laurent, "zero image in a Laurent map");
        }
        MonomialMap { source, target, images, laurent }
    }

    /// Build from images given as monomial polynomials.
    pub fn from_polys(source: Ambient, target: Ambient, imgs: &[Poly], laurent: bool) -> MonomialMap {
        let images = imgs
            .iter()
            .map(|p| {
                assert!(p.num_terms() <= 1, "image {p} is not a monomial");
                match p.leading() {
                    Some((m, c)) => (c.clone(), m.clone()),
                    None => (Scalar::zero(), Mono::one(target.nvars())),
                }
            })
            .collect();
        MonomialMap::new(source, target, images, laurent)
    }

    pub fn identity(a: Ambient) -> MonomialMap {
        let n = a.nvars();
        MonomialMap::new(a, a, (0..n).map(|i| (Scalar::one(), Mono::var(n, i))).collect(), false)
    }

    pub fn source(&self) -> Ambient {
        self.source
    }

    pub fn target(&self) -> Ambient {
        self.target
    }

    pub fn is_laurent(&self) -> bool {
        self.laurent
    }

    pub fn image(&self, v: usize) -> &(Scalar, Mono) {
        &self.images[v]
    }

    pub fn image_poly(&self, v: usize) -> Poly {
        let (c, m) = &self.images[v];
        Poly::term(self.target, c.clone(), m.clone())
    }

    fn apply_mono(&self, m: &Mono) -> (Scalar, Mono) {
        let mut c = Scalar::one();
        let mut out = Mono::one(self.target.nvars());
        for (v, &e) in m.0.iter().enumerate() {
            if e == 0 {
                continue;
            }
            let (ci, mi) = &self.images[v];
            c = &c * &ci.pow(e as i64);
            for (o, &k) in out.0.iter_mut().zip(&mi.0) {
                *o += k * e;
            }
        }
        (c, out)
    }

    pub fn apply(&self, f: &Poly) -> Result<Poly, AlgError> {
        if f.ambient() != self.source {
            return Err(AlgError::AmbientMismatch {
                expected: self.source.to_string(),
                found: f.ambient().to_string(),
            });
        }
        let out = Poly::from_terms(self.target, f.terms().map(|(m, c)| {
            let (k, mm) = self.apply_mono(m);
            (mm, c * &k)
        }));
        if !self.laurent && out.is_laurent() {
            return Err(AlgError::LaurentOutput);
        }
        Ok(out)
    }

    /// The map "apply self, then apply next".
    pub fn then(&self, next: &MonomialMap) -> Result<MonomialMap, AlgError> {
        if self.target != next.source {
            return Err(AlgError::AmbientMismatch {
                expected: next.source.to_string(),
                found: self.target.to_string(),
            });
        }
        let images = self
            .images
            .iter()
            .map(|(c, m)| {
                let (k, mm) = next.apply_mono(m);
                (c * &k, mm)
            })
            .collect();
        Ok(MonomialMap::new(self.source, next.target, images, self.laurent || next.laurent))
    }
}

/// Substitute a polynomial through a monomial map.
pub fn substitute(f: &Poly, m: &MonomialMap) -> Result<Poly, AlgError> {
    m.apply(f)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn identity_is_identity() {
        let f = Poly::var(Ambient::XY, 0);
        assert_eq!(MonomialMap::identity(Ambient::XY).apply(&f).unwrap(), f);
    }

    #[test]
    fn laurent_output_is_rejected() {
        let n = 8;
        let mut imgs: Vec<(Scalar, Mono)> = (0..n).map(|i| (Scalar::one(), Mono::var(n, i))).collect();
        let mut inv = Mono::one(n);
        inv.0[1] = -1;
        imgs[0] = (Scalar::one(), inv);
        let m = MonomialMap::new(Ambient::T4, Ambient::T4, imgs.clone(), false);
        assert_eq!(m.apply(&Poly::var(Ambient::T4, 0)), Err(AlgError::LaurentOutput));
        let m = MonomialMap::new(Ambient::T4, Ambient::T4, imgs, true);
        assert!(m.apply(&Poly::var(Ambient::T4, 0)).unwrap().is_laurent());
    }
}
