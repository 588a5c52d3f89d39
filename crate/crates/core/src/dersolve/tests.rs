use super::*;
use crate::families::{build_lprime, build_w, Family};
use crate::linalg::{PrimeField, Rationals};
use crate::scalar::rat;

fn q() -> Rationals {
    Rationals::new()
}

/// sl(2) with basis h, e, f.
fn sl2() -> AlgebraTable {
    let mut c = vec![Vec::new(); 9];
    c[1] = vec![(1, rat(2))];
    c[3] = vec![(1, rat(-2))];
    c[2] = vec![(2, rat(-2))];
    c[6] = vec![(2, rat(2))];
    c[5] = vec![(0, rat(1))];
    c[7] = vec![(0, rat(-1))];
    AlgebraTable::lie("sl2", c).unwrap()
}

#[test]
fn unknown_count_w4_even() {
    assert_eq!(derivation_unknowns(&build_w(4).unwrap(), Parity::Even), 2048);
}

#[test]
fn every_map_on_trivial_algebra_is_a_derivation() {
    let t = AlgebraTable::lie("trivial", vec![Vec::new()]).unwrap();
    let sol = solve_derivations(&t, Parity::Even, q(), DerOptions::default()).unwrap();
    assert_eq!(sol.dimension(), 1);
    let odd = solve_derivations(&t, Parity::Odd, q(), DerOptions::default()).unwrap();
    assert_eq!(odd.dimension(), 0);
}

#[test]
fn sl2_derivations_are_inner() {
    let t = sl2();
    let sol = solve_derivations(&t, Parity::Even, q(), DerOptions::default()).unwrap();
    assert_eq!(sol.dimension(), 3);
    let s = t.structure(q()).unwrap();
    let mut ad = Echelon::new(q(), 9);
    for x in 0..3 {
        let v: Vec<_> = (0..3).flat_map(|k| s.bracket_basis(x, k).iter().map(move |(m, c)| (k * 3 + m, c.clone()))).collect();
        ad.insert(v);
    }
    assert_eq!(ad.rank(), 3);
    for v in &sol.basis {
        assert!(ad.contains(v.clone()));
    }
}

#[test]
fn solutions_satisfy_the_identity() {
    let t = build_w(2).unwrap();
    let s = t.structure(q()).unwrap();
    for gamma in [Parity::Even, Parity::Odd] {
        let sol = solve_derivations(&t, gamma, q(), DerOptions::default()).unwrap();
        assert_eq!(sol.cross_block_rows, 0);
        for i in 0..sol.dimension() {
            assert_eq!(derivation_residual(&s, gamma, &sol.map(i)), None);
        }
    }
}

#[test]
fn adjoint_maps_pass_and_perturbed_maps_fail() {
    let t = build_w(3).unwrap();
    let s = t.structure(q()).unwrap();
    for x in 0..t.dim() {
        let map: Vec<_> = (0..t.dim()).map(|k| s.bracket_basis(x, k).to_vec()).collect();
        assert_eq!(derivation_residual(&s, t.parity(x), &map), None, "ad e_{x}");
    }
    let mut map: Vec<_> = (0..t.dim()).map(|k| s.bracket_basis(0, k).to_vec()).collect();
    map[5].push((t.dim() - 1, rat(1)));
    map[5].sort_by_key(|(m, _)| *m);
    assert!(derivation_residual(&s, t.parity(0), &map).is_some());
}

#[test]
fn w3_derivations_equal_ad_lprime() {
    let lp = build_lprime(Family::W, 3).unwrap();
    let mut total = 0;
    for gamma in [Parity::Even, Parity::Odd] {
        let sol = solve_derivations(&lp.table, gamma, q(), DerOptions::default()).unwrap();
        let c = classify_derivations(&sol, q(), &lp).unwrap();
        assert!(c.passed, "{c:?}");
        assert!(c.outer.is_empty());
        total += c.der_dim;
    }
    assert_eq!(total, 24);
}

#[test]
fn blocked_and_unblocked_agree() {
    let t = build_w(2).unwrap();
    for gamma in [Parity::Even, Parity::Odd] {
        let a = solve_derivations(&t, gamma, q(), DerOptions::default()).unwrap();
        let b = solve_derivations(&t, gamma, q(), DerOptions { unblocked: true, ..Default::default() }).unwrap();
        assert_eq!(a.dimension(), b.dimension());
        assert_eq!(a.unknowns, b.unknowns);
        assert_eq!(b.blocks.len(), 1);
    }
}

#[test]
fn modular_dimension_matches_rational() {
    let t = build_w(3).unwrap();
    let p = PrimeField::new(PrimeField::DEFAULT_PRIME).unwrap();
    for gamma in [Parity::Even, Parity::Odd] {
        let a = solve_derivations(&t, gamma, q(), DerOptions::default()).unwrap();
        let b = solve_derivations(&t, gamma, p, DerOptions::default()).unwrap();
        assert_eq!(a.dimension(), b.dimension());
        assert_eq!(b.field, FieldTag::Prime { p: PrimeField::DEFAULT_PRIME });
    }
}
