//! The Burniat sub-pencil −ν0 = ν1 = ν2 = ν3: local charts, the 24 nodes,
//! and the plane model in (u0 : u1 : u2).

use std::collections::BTreeSet;

use serde::Serialize;
use serde_json::json;

use super::{BicanonError, SCubic, S};
use crate::cover::enumerate::{
    enumerate_surface, enumerate_surface_twisted, gradients, rng_for, CoverPoint, SigmaFp, SurfaceEquations, T4_TWIST,
};
use crate::cover::points::WPoint;
use crate::exactalg::ambient::{xy, CHART3, CHART_W, LAM_S, LAM_U};
use crate::exactalg::modp::rank_dense;
use crate::exactalg::{Ambient, Mono, MonomialMap, Poly, PrimeField, Scalar};
use crate::report::{CheckReport, Checklist, Params};
use crate::unproj::{build_v_ideal, s_poly, y_invariant, FamilyParams};

pub const C3: Ambient = Ambient::Free(&CHART3);
pub const CW: Ambient = Ambient::Free(&CHART_W);
pub const LU: Ambient = Ambient::Free(&LAM_U);
pub const LS: Ambient = Ambient::Free(&LAM_S);

fn mono(n: usize, exps: &[(usize, i32)]) -> Mono {
    let mut m = Mono::one(n);
    for &(v, e) in exps {
        m.0[v] += e;
    }
    m
}

/// Pencil generators on V: T1 = s0 − s1 − s2 − s3 and T2 = Σ (−1)^a y_abcd.
pub fn pencil_generators() -> (Poly, Poly) {
    let t1 = (1..4).fold(s_poly(0), |acc, i| &acc - &s_poly(i));
    (t1, y_invariant())
}

/// F1 = 1 − ½ Σ (x_i² + x_i⁻²).
pub fn f1() -> Poly {
    let mut p = Poly::one(C3);
    for i in 0..3 {
        p.add_term(mono(3, &[(i, 2)]), Scalar::frac(-1, 2));
        p.add_term(mono(3, &[(i, -2)]), Scalar::frac(-1, 2));
    }
    p
}

/// F2 = Π (x_i − 1/x_i).
pub fn f2() -> Poly {
    (0..3).fold(Poly::one(C3), |acc, i| {
        let fac = &Poly::var(C3, i) - &Poly::term(C3, Scalar::one(), mono(3, &[(i, -1)]));
        &acc * &fac
    })
}

/// F3 as displayed (coefficient 1 on x00²x21²x31²).
pub fn f3_displayed() -> Poly {
    let t = |c: i64, e: [i32; 3]| Poly::term(CW, Scalar::int(c), Mono(e.to_vec()));
    [
        t(1, [2, 2, 2]),
        t(-1, [2, 4, 4]),
        t(-1, [2, 0, 0]),
        t(-1, [4, 0, 2]),
        t(-1, [0, 4, 2]),
        t(-1, [4, 2, 0]),
        t(-1, [0, 2, 4]),
    ]
    .iter()
    .fold(Poly::zero(CW), |a, b| &a + b)
}

/// ξ2: torus chart (x1, x2, x3) → Ω00 ⊂ V. y_abcd = x_{1b'} x_{2c'} x_{3d'} / x_{0a}.
pub fn xi2() -> MonomialMap {
    let xim = |i: usize, a: u8| -> (Scalar, Mono) {
        match (i, a) {
            (0, 0) => (Scalar::one(), Mono::one(3)),
            (0, _) => (Scalar::int(-1), Mono::one(3)),
            (_, 0) => (Scalar::one(), mono(3, &[(i - 1, 1)])),
            _ => (Scalar::int(-1), mono(3, &[(i - 1, -1)])),
        }
    };
    chart_map(C3, 3, &xim, 0)
}

/// ζ2 on the affine piece y0000 = 1 of P(1³,2), coordinates (x00, x21, x31).
pub fn zeta2() -> MonomialMap {
    let xim = |i: usize, a: u8| -> (Scalar, Mono) {
        match (i, a) {
            (0, 0) => (Scalar::one(), mono(3, &[(0, 1)])),
            (0, _) => (Scalar::int(-1), mono(3, &[(0, 1)])),
            (1, 0) => (Scalar::int(-1), mono(3, &[(0, 1), (1, 1), (2, 1)])),
            (1, _) => (Scalar::one(), mono(3, &[(0, 1), (1, -1), (2, -1)])),
            (2, 0) => (Scalar::int(-1), mono(3, &[(0, 2), (1, -1)])),
            (2, _) => (Scalar::one(), mono(3, &[(1, 1)])),
            (3, 0) => (Scalar::int(-1), mono(3, &[(0, 2), (2, -1)])),
            _ => (Scalar::one(), mono(3, &[(2, 1)])),
        }
    };
    chart_map(CW, 3, &xim, 3)
}

/// Builds a Laurent map on XY from x-images; y_t = Π_{j≠k} x_{j t_j'} / x_{k t_k}.
fn chart_map(target: Ambient, n: usize, xim: &dyn Fn(usize, u8) -> (Scalar, Mono), k: usize) -> MonomialMap {
    let mut images = Vec::with_capacity(16);
    for v in 0..8 {
        images.push(xim(v / 2, (v % 2) as u8));
    }
    for yv in 8..16 {
        let t = xy::tuple(yv);
        let (mut c, mut m) = (Scalar::one(), Mono::one(n));
        for j in (0..4).filter(|&j| j != k) {
            let (cj, mj) = xim(j, 1 - t[j]);
            c = &c * &cj;
            m = m.mul(&mj);
        }
        let (ck, mk) = xim(k, t[k]);
        c = c.div(&ck).unwrap();
        m = m.div(&mk);
        images.push((c, m));
    }
    MonomialMap::new(Ambient::XY, target, images, true)
}

/// The 24 points of the 64 with x_i⁴ = 1 on F1 = 0: exactly one coordinate is ±i.
pub fn node_set() -> Vec<[Scalar; 3]> {
    let units = [Scalar::one(), Scalar::int(-1), Scalar::i(), -&Scalar::i()];
    let f = f1();
    let mut out = Vec::new();
    for a in &units {
        for b in &units {
            for c in &units {
                let p = [a.clone(), b.clone(), c.clone()];
                if f.eval(&p).is_zero() {
                    out.push(p);
                }
            }
        }
    }
    out
}

fn hessian_at(p: &Poly, pt: &[Scalar]) -> Vec<Vec<Scalar>> {
    let n = pt.len();
    (0..n).map(|a| (0..n).map(|b| p.derivative(a).derivative(b).eval(pt)).collect()).collect()
}

pub fn verify_nodes() -> CheckReport {
    let mut cl = Checklist::new();
    let d = node_set();
    cl.check("node_count", d.len() == 24, json!(d.len()));
    let one_eps = d.iter().all(|p| p.iter().filter(|x| x.as_rational().is_none()).count() == 1);
    cl.check("exactly_one_eps_coordinate", one_eps, json!(null));
    let (p1, p2) = (f1(), f2());
    let mut all_ok = true;
    for p in &d {
        let g1 = (0..3).all(|v| p1.derivative(v).eval(p).is_zero());
        let g2 = (0..3).all(|v| p2.derivative(v).eval(p).is_zero());
        let h = hessian_at(&p1, p);
        let det = crate::exactalg::linalg::scalar_determinant(&h);
        all_ok &= p1.eval(p).is_zero() && p2.eval(p).is_zero() && g1 && g2 && !det.is_zero();
    }
    cl.check("f1_f2_singular_with_nondegenerate_hessian", all_ok, json!(null));
    let second = p1.derivative(0).derivative(0);
    let expected = &Poly::constant(C3, Scalar::int(-1)) + &Poly::term(C3, Scalar::int(-3), mono(3, &[(0, -4)]));
    cl.check("second_partial_formula", second == expected, json!(second.to_string()));
    let mixed = p1.derivative(0).derivative(1).is_zero();
    cl.check("mixed_partials_vanish", mixed, json!(null));
    let at_eps = second.eval(&[Scalar::i(), Scalar::one(), Scalar::one()]);
    cl.check("hessian_diag_at_eps", at_eps == Scalar::int(-4), json!(at_eps.to_string()));
    // singular points of F1 = 0 in the torus: the gradient forces x_i⁴ = 1
    let grad0 = p1.derivative(0);
    let grad_form = &Poly::term(C3, Scalar::one(), mono(3, &[(0, -3)])) - &Poly::var(C3, 0);
    cl.check("gradient_formula", grad0 == grad_form, json!(grad0.to_string()));
    cl.into_report("burniat.nodes")
}

pub fn verify_charts() -> CheckReport {
    let mut cl = Checklist::new();
    let (t1, t2) = pencil_generators();
    let xi = xi2();
    let p1 = xi.apply(&t1).unwrap();
    cl.check("xi2_pullback_t1_is_f1", p1 == f1(), json!(p1.to_string()));
    let p2 = xi.apply(&t2).unwrap();
    let r2 = p2.proportional_up_to_monomial(&f2());
    cl.check(
        "xi2_pullback_t2_proportional_to_f2",
        r2.is_some(),
        json!(r2.map(|(c, m)| format!("{c} * {}", m.fmt_in(C3)))),
    );
    let v = build_v_ideal().polys();
    let bad_xi: Vec<String> = v.iter().filter_map(|g| {
        let img = xi.apply(g).unwrap();
        (!img.is_zero()).then(|| g.to_string())
    }).collect();
    cl.check("xi2_lands_in_v", bad_xi.is_empty(), json!(bad_xi));
    let zeta = zeta2();
    let bad_zeta: Vec<String> = v.iter().filter_map(|g| {
        let img = zeta.apply(g).unwrap();
        (!img.is_zero()).then(|| g.to_string())
    }).collect();
    cl.check("zeta2_lands_in_v", bad_zeta.is_empty(), json!(bad_zeta));
    let y0 = zeta.image(xy::y(0));
    cl.check("zeta2_y0000_is_one", y0.0.is_one() && y0.1 == Mono::one(3), json!(null));
    cl.into_report("burniat.charts")
}

/// F3 derived from ζ2♯T1 by clearing 2x21²x31²; compared with the displayed one.
pub fn derived_f3() -> Poly {
    let (t1, _) = pencil_generators();
    let pulled = zeta2().apply(&t1).unwrap();
    pulled.mul_mono(&Scalar::int(2), &mono(3, &[(1, 2), (2, 2)]))
}

pub fn verify_f3() -> CheckReport {
    let mut cl = Checklist::new();
    let derived = derived_f3();
    let shown = f3_displayed();
    let diff = &derived - &shown;
    let key = mono(3, &[(0, 2), (1, 2), (2, 2)]);
    cl.check(
        "derived_vs_displayed",
        diff.num_terms() <= 1,
        json!({"derived": derived.to_string(), "difference": diff.to_string(), "derived_coeff_x00^2x21^2x31^2": derived.coeff(&key).to_string()}),
    );
    let at0 = |p: &Poly, v: usize| {
        let d = p.derivative(v);
        Poly::from_terms(CW, d.terms().filter(|(m, _)| m.0[0] == 0).map(|(m, c)| (m.clone(), c.clone())))
    };
    let same_partials = at0(&derived, 1) == at0(&shown, 1) && at0(&derived, 2) == at0(&shown, 2);
    cl.check("partials_at_x00_zero_agree", same_partials, json!(null));
    // ∂21 = −2x21x31²(2a + b), ∂31 = −2x21²x31(a + 2b) with a = x21², b = x31²
    let d21 = at0(&shown, 1);
    let d31 = at0(&shown, 2);
    let m = |e: [i32; 3]| Mono(e.to_vec());
    let rows = [
        [d21.coeff(&m([0, 3, 2])), d21.coeff(&m([0, 1, 4]))],
        [d31.coeff(&m([0, 4, 1])), d31.coeff(&m([0, 2, 3]))],
    ];
    let det = &(&rows[0][0] * &rows[1][1]) - &(&rows[0][1] * &rows[1][0]);
    let nonzero = !det.is_zero() && d21.num_terms() == 2 && d31.num_terms() == 2;
    cl.check(
        "no_common_zero_of_partials",
        nonzero,
        json!({"d21": d21.to_string(), "d31": d31.to_string(), "coefficient_determinant": det.to_string()}),
    );
    cl.into_report("burniat.f3")
}

/// The plane cubics s0..s3 in (λ, u0, u1, u2).
pub fn plane_cubics() -> [Poly; 4] {
    let lam = Poly::var(LU, 0);
    let u = |i: usize| Poly::var(LU, i + 1);
    let one_minus = &Poly::one(LU) - &lam;
    let s0 = (&(&u(0) - &(&lam * &u(1))) * &(&(&u(1) - &u(2)) * &(&u(2) - &(&lam * &u(0))))).scale(&Scalar::frac(-1, 2));
    let s1 = &(&(&one_minus * &u(0)) * &(&(&u(1) - &u(2)) * &(&(&lam * &u(1)) - &u(2)))) - &s0;
    let s2 = &(&(&one_minus * &u(1)) * &(&(&u(2) - &u(0)) * &(&u(2) - &(&lam * &u(0))))) - &s0;
    let s3 = &(&(&one_minus * &u(2)) * &(&(&u(0) - &u(1)) * &(&u(0) - &(&lam * &u(1))))) - &s0;
    [s0, s1, s2, s3]
}

/// (λ+1)²Π(s_i − s0) + 2λ s0 (s1+s2+s3−s0)² in a ring whose variable 0 is λ.
fn identity_form(amb: Ambient, s: &[Poly; 4]) -> Poly {
    let lam = Poly::var(amb, 0);
    let lp1 = &lam + &Poly::one(amb);
    let prod = (1..4).fold(Poly::one(amb), |a, i| &a * &(&s[i] - &s[0]));
    let sig = &(&(&s[1] + &s[2]) + &s[3]) - &s[0];
    &(&(&lp1 * &lp1) * &prod) + &(&(&lam * &s[0]) * &(&sig * &sig)).scale(&Scalar::int(2))
}

pub fn verify_lambda_identity() -> CheckReport {
    let s = plane_cubics();
    let form = identity_form(LU, &s);
    let degrees: Vec<i64> = s.iter().map(|p| {
        p.terms().map(|(m, _)| m.0[1..].iter().map(|&e| e as i64).sum::<i64>()).max().unwrap_or(0)
    }).collect();
    let homogeneous = s.iter().all(|p| p.terms().all(|(m, _)| m.0[1..].iter().sum::<i32>() == 3));
    CheckReport::new(
        "burniat.lambda_identity",
        form.is_zero() && homogeneous,
        json!({"residual_terms": form.num_terms(), "u_degrees": degrees, "cubic_forms": homogeneous}),
    )
}

/// ν4 normalization matching the pencil member −ν0 = ν1 = ν2 = ν3 = ν, ν² = −λ.
#[derive(Clone, Debug, Serialize)]
pub struct ParameterMap {
    pub lambda: String,
    pub nu_squared: String,
    /// ν4² solving 2·SCubic = identity form.
    pub nu4_squared: String,
    pub nu4: String,
    pub printed_nu4: String,
    /// (printed ν4 / matching ν4)².
    pub discrepancy_squared: String,
    /// ν over the base field when −λ is a square there.
    pub family: Option<Vec<String>>,
}

/// SCubic for ν = (−ν, ν, ν, ν, ν4) with ν² = −λ; only ν² and ν4² enter.
fn pencil_cubic(amb: Ambient, lam: &Poly, nu4_sq: &Poly) -> Poly {
    let s = |i: usize| Poly::var(amb, i + 1);
    let prod = (1..4).fold(Poly::one(amb), |a, i| &a * &(&s(i) - &s(0)));
    let sig = &(&(&s(1) + &s(2)) + &s(3)) - &s(0);
    // l² = ν²Σ'² = −λΣ'²
    &(nu4_sq * &prod).scale(&Scalar::int(8)) + &(&(lam * &s(0)) * &(&sig * &sig))
}

pub fn burniat_parameter_map(lambda: &Scalar) -> Result<(ParameterMap, CheckReport), BicanonError> {
    if lambda.is_zero() || lambda.is_one() {
        return Err(BicanonError::BadLambda);
    }
    let mut cl = Checklist::new();
    // symbolic in λ: 2·SCubic(ν4² = (λ+1)²/16) − identity form = 0
    let lam = Poly::var(LS, 0);
    let lp1 = &lam + &Poly::one(LS);
    let n4sq = (&lp1 * &lp1).scale(&Scalar::frac(1, 16));
    let s_vars: [Poly; 4] = std::array::from_fn(|i| Poly::var(LS, i + 1));
    let ident = identity_form(LS, &s_vars);
    let residual = &pencil_cubic(LS, &lam, &n4sq).scale(&Scalar::int(2)) - &ident;
    cl.check("symbolic_match_nu4_sq=(lam+1)^2/16", residual.is_zero(), json!(residual.to_string()));
    let printed_sq = (&lp1 * &lp1).scale(&Scalar::int(16));
    let printed_ratio = pencil_cubic(LS, &lam, &printed_sq).proportionality(&ident);
    cl.check("printed_normalization_not_proportional", printed_ratio.is_none(), json!(printed_ratio.map(|r| r.to_string())));

    // specialized at the given λ
    let l1 = lambda + &Scalar::one();
    let nu4_sq = &(&l1 * &l1) * &Scalar::frac(1, 16);
    let nu4 = &l1 * &Scalar::frac(1, 4);
    let printed = &l1 * &Scalar::int(4);
    let discrepancy = (&printed * &printed).div(&nu4_sq).ok();
    let at = |p: &Poly| {
        let images: Vec<Poly> =
            std::iter::once(Poly::constant(S, lambda.clone())).chain((0..4).map(|i| Poly::var(S, i))).collect();
        p.compose(&images, S).unwrap()
    };
    let ident_s = at(&ident);
    let mut family = None;
    if let Scalar::Fp(e) = lambda {
        let f = e.field;
        let neg = f.neg(lambda.to_fp(f));
        if let Some(root) = f.sqrt(neg) {
            let nu = FamilyParams::new([
                Scalar::fp(f, f.neg(root)),
                Scalar::fp(f, root),
                Scalar::fp(f, root),
                Scalar::fp(f, root),
                nu4.clone(),
            ]);
            let c = SCubic::new(&nu);
            let ratio = c.poly.proportionality(&ident_s);
            cl.check("field_member_proportional", ratio.is_some(), json!(ratio.map(|r| r.to_string())));
            let pencil = nu.nu[0] == -&nu.nu[1] && nu.nu[1] == nu.nu[2] && nu.nu[2] == nu.nu[3];
            cl.check("pencil_membership", pencil, json!(nu.strings()));
            family = Some(nu.strings());
        }
    }
    let pm = ParameterMap {
        lambda: lambda.to_string(),
        nu_squared: (-lambda).to_string(),
        nu4_squared: nu4_sq.to_string(),
        nu4: format!("±{nu4}"),
        printed_nu4: printed.to_string(),
        discrepancy_squared: discrepancy.map(|d| d.to_string()).unwrap_or_else(|| "undefined (lambda = -1)".into()),
        family,
    };
    let mut r = cl.into_report("burniat.parameter_map");
    if let serde_json::Value::Object(m) = &mut r.witness {
        m.insert("map".into(), serde_json::to_value(&pm).unwrap());
    }
    r.params.lambda = Some(lambda.to_string());
    Ok((pm, r))
}

/// ξ2(𝔇) reduced into P(1⁸,2⁸)(F_q).
pub fn node_images(f: PrimeField) -> BTreeSet<WPoint> {
    let xi = xi2();
    node_set()
        .iter()
        .map(|p| {
            let pt: Vec<u64> = p.iter().map(|s| s.to_fp(f)).collect();
            let mut raw = [0u64; 16];
            for (v, r) in raw.iter_mut().enumerate() {
                let (c, m) = xi.image(v);
                let mut val = c.to_fp(f);
                for (k, &e) in m.0.iter().enumerate() {
                    let base = if e < 0 { f.inv(pt[k]).unwrap() } else { pt[k] };
                    val = f.mul(val, f.pow(base, e.unsigned_abs() as u64));
                }
                *r = val;
            }
            WPoint::normalize(raw, f).unwrap()
        })
        .collect()
}

fn jacobian_rank(eq: &SurfaceEquations, p: &CoverPoint, twisted: bool, grads: &[Vec<crate::exactalg::modp::ModPoly>; 2]) -> usize {
    let f = eq.field;
    let x = p.flat();
    let n = f.non_residue();
    let m: Vec<Vec<u64>> = grads
        .iter()
        .map(|row| {
            row.iter()
                .enumerate()
                .map(|(v, d)| {
                    if twisted {
                        let cv = T4_TWIST[v];
                        d.eval_twisted(&x, &T4_TWIST, &|k| f.pow(n, ((k + cv) / 2) as u64))
                    } else {
                        d.eval(&x)
                    }
                })
                .collect()
        })
        .collect();
    rank_dense(f, &m)
}

/// Draws a pencil member over F_q with seed; ν4 generic.
pub fn draw_pencil_nu(f: PrimeField, seed: u64) -> FamilyParams {
    use rand::Rng;
    let mut rng = rng_for(seed ^ 0xB0, f.p());
    loop {
        let a = rng.gen_range(1..f.p());
        let n4 = rng.gen_range(1..f.p());
        let nu = FamilyParams::new([Scalar::fp(f, f.neg(a)), Scalar::fp(f, a), Scalar::fp(f, a), Scalar::fp(f, a), Scalar::fp(f, n4)]);
        if !nu.degenerate() {
            return nu;
        }
    }
}

/// Singular points of T̃ for a pencil member map onto ξ2(𝔇).
pub fn verify_pencil_singularities(f: PrimeField, nu: &FamilyParams) -> CheckReport {
    let eq = SurfaceEquations::new(f, nu);
    let grads = gradients(&eq);
    let sig = SigmaFp::new(f);
    let rational = enumerate_surface(&eq);
    let twisted = enumerate_surface_twisted(&eq);
    let mut images = BTreeSet::new();
    let mut count = 0;
    for p in &rational {
        if jacobian_rank(&eq, p, false, &grads) < 2 {
            images.insert(sig.image(p));
            count += 1;
        }
    }
    for p in &twisted {
        if jacobian_rank(&eq, p, true, &grads) < 2 {
            images.insert(sig.image_twisted(p));
            count += 1;
        }
    }
    let expected = node_images(f);
    let ok = images == expected && expected.len() == 24;
    CheckReport::new(
        "burniat.pencil_singularities",
        ok,
        json!({
            "prime": f.p(),
            "cover_points": rational.len() + twisted.len(),
            "singular_cover_points": count,
            "singular_images": images.len(),
            "expected_images": expected.len(),
            "unexpected": images.difference(&expected).take(3).map(|p| p.0.to_vec()).collect::<Vec<_>>(),
            "missing": expected.difference(&images).take(3).map(|p| p.0.to_vec()).collect::<Vec<_>>(),
        }),
    )
    .with_params(Params { primes: vec![f.p()], nu: nu.strings(), ..Default::default() })
}

/// All Burniat sub-checks.
pub fn verify_burniat_pencil(lambda: &Scalar, f: PrimeField, seed: u64) -> Vec<CheckReport> {
    let mut out = vec![verify_nodes(), verify_charts(), verify_f3(), verify_lambda_identity()];
    match burniat_parameter_map(lambda) {
        Ok((_, r)) => out.push(r),
        Err(e) => out.push(CheckReport::new("burniat.parameter_map", false, json!({"error": e.to_string()}))),
    }
    out.push(verify_pencil_singularities(f, &draw_pencil_nu(f, seed)));
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn exact_subchecks() {
        for r in [verify_nodes(), verify_charts(), verify_f3(), verify_lambda_identity()] {
            assert!(r.passed(), "{}: {}", r.id, r.witness);
        }
    }

    #[test]
    fn parameter_map_rational_and_fp() {
        let (pm, r) = burniat_parameter_map(&Scalar::int(3)).unwrap();
        assert!(r.passed(), "{}", r.witness);
        assert_eq!(pm.discrepancy_squared, "256");
        let f = PrimeField::new(13).unwrap();
        // −3 ≡ 10 = 6² mod 13
        let (pm, r) = burniat_parameter_map(&Scalar::fp(f, 3)).unwrap();
        assert!(r.passed(), "{}", r.witness);
        assert!(pm.family.is_some());
        assert_eq!(burniat_parameter_map(&Scalar::zero()).unwrap_err(), BicanonError::BadLambda);
    }

    #[test]
    fn singularities_f13() {
        let f = PrimeField::new(13).unwrap();
        let r = verify_pencil_singularities(f, &draw_pencil_nu(f, 0));
        assert!(r.passed(), "{}", r.witness);
    }
}
