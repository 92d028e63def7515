use serde_json::json;

use crate::exactalg::ambient::{t4, L};
use crate::exactalg::{Ambient, Mono, Poly, Scalar};
use crate::report::{CheckReport, Checklist};
use crate::unproj::{q_poly, FamilyParams};

use super::projaut::lifted_generators;
use super::sigma::{build_sigma, deck_involution};

/// Z2 := 2·σ♯(q(ν)).
pub fn build_z2(nu: &FamilyParams) -> Poly {
    build_sigma().apply(&q_poly(nu)).unwrap().scale(&Scalar::int(2))
}

fn square_mono(choice: [u8; 4]) -> Mono {
    let mut m = Mono::one(8);
    for (i, &b) in choice.iter().enumerate() {
        m.0[t4::t(i, b)] = 2;
    }
    m
}

/// The closed form with sign (−1)^{(b+c+d−a)/2} on the ν4 sum.
pub fn z2_displayed(nu: &FamilyParams) -> Poly {
    let mut z = Poly::zero(Ambient::T4);
    for i in 0..4 {
        let mut lo = [1u8; 4];
        lo[i] = 0;
        let mut hi = [0u8; 4];
        hi[i] = 1;
        z = &z + &Poly::term(Ambient::T4, nu.nu[i].clone(), square_mono(lo));
        z = &z + &Poly::term(Ambient::T4, nu.nu[i].clone(), square_mono(hi));
    }
    for t in L {
        let e = (t[1] + t[2] + t[3]) as i32 - t[0] as i32;
        let sign = if (e / 2).rem_euclid(2) == 0 { 1 } else { -1 };
        z = &z + &Poly::term(Ambient::T4, &nu.nu[4] * &Scalar::int(-2 * sign), square_mono(t));
    }
    z
}

/// Sample ν with independent entries for the structural checks.
pub fn sample_nu() -> FamilyParams {
    FamilyParams::from_ints([3, 5, 7, 11, 13])
}

pub fn verify_z2() -> CheckReport {
    let mut cl = Checklist::new();
    let nu = sample_nu();
    let z = build_z2(&nu);
    let disp = z2_displayed(&nu);
    let diff = &z - &disp;
    cl.check(
        "matches_displayed_form",
        diff.is_zero(),
        json!({"discrepancy": diff.to_string(), "convention": "Z2 = 2*sigma#(q), q = l + nu4*sum (-1)^a y_abcd"}),
    );
    cl.check("multidegree_2222", z.multidegree() == Some([2, 2, 2, 2]), json!(z.multidegree()));
    cl.check("monomial_count", z.num_terms() == 16, json!(z.num_terms()));
    let e0 = build_z2(&FamilyParams::from_ints([1, 0, 0, 0, 0]));
    let expected = &Poly::term(Ambient::T4, Scalar::one(), square_mono([0, 1, 1, 1]))
        + &Poly::term(Ambient::T4, Scalar::one(), square_mono([1, 0, 0, 0]));
    cl.check("nu0_term", e0 == expected, json!(e0.to_string()));
    cl.check("deck_invariant", deck_involution().apply(&z).unwrap() == z, json!(null));
    let z1 = super::sigma::z1();
    let mut ratios = Vec::new();
    let mut inv_ok = true;
    for g in lifted_generators() {
        let pb = g.pullback().unwrap();
        let r2 = pb.apply(&z).unwrap().proportionality(&z);
        let r1 = pb.apply(&z1).unwrap().proportionality(&z1);
        inv_ok &= r1.is_some() && r2.is_some();
        ratios.push(json!({"z1": r1.map(|s| s.to_string()), "z2": r2.map(|s| s.to_string())}));
    }
    cl.check("lifted_group_invariant_up_to_scalar", inv_ok, json!(ratios));
    cl.into_report("cover.z2")
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn z2_report() {
        let r = verify_z2();
        assert!(r.passed(), "{}", r.witness);
    }
}
