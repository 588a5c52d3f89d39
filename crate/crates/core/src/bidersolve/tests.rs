use super::*;
use crate::families::{build_lprime, build_w, Family};
use crate::linalg::Rationals;
use crate::scalar::{rat, Rational};

fn q() -> Rationals {
    Rationals::new()
}

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

fn abelian(dim: usize) -> AlgebraTable {
    AlgebraTable::lie("abelian", vec![Vec::new(); dim * dim]).unwrap()
}

#[test]
fn block_sizes_sum_to_the_global_count() {
    let t = build_w(2).unwrap();
    for gamma in [Parity::Even, Parity::Odd] {
        let blocks = enumerate_blocks(&t, gamma).unwrap();
        assert_eq!(blocks.iter().map(|b| b.2).sum::<usize>(), bider_unknowns(&t, gamma));
    }
    // 8 basis elements, 4 of each parity: every pair has 4 admissible outputs
    assert_eq!(bider_unknowns(&t, Parity::Even), 256);
}

#[test]
fn blocked_and_unblocked_agree() {
    let t = build_w(2).unwrap();
    let blocked = solve_bder(&t, q(), BiderOptions::default()).unwrap();
    let whole = solve_bder(&t, q(), BiderOptions { unblocked: true, ..Default::default() }).unwrap();
    assert_eq!(blocked.even.total_nullity, whole.even.total_nullity);
    assert_eq!(blocked.odd.total_nullity, whole.odd.total_nullity);
    assert_eq!(whole.even.blocks.len(), 1);
    assert!(blocked.inner && whole.inner);
}

#[test]
fn abelian_plane_has_every_admissible_map() {
    // Both identities are vacuous: all 2^3 coefficients are free.
    let t = abelian(2);
    let sol = solve_bder_lie(&t, q(), BiderOptions::default()).unwrap();
    assert_eq!(sol.even.unknowns, 8);
    assert_eq!(sol.even.total_nullity, 8);
    assert_eq!(sol.odd.unknowns, 0);
    assert!(!sol.inner);
    let maps: Vec<_> = sol.even.solutions.iter().map(|v| BilinearMap::from_global(2, v)).collect();
    assert!(maps.iter().any(|m| skew_witness(&q(), m).is_some()));
}

#[test]
fn line_gives_an_empty_system() {
    let t = abelian(1);
    let sol = solve_bder_lie(&t, q(), BiderOptions::default()).unwrap();
    assert_eq!(sol.even.unknowns, 1);
    assert_eq!(sol.even.blocks[0].rows, 0);
    assert_eq!(sol.even.total_nullity, 1);
}

#[test]
fn sl2_biderivations_are_multiples_of_the_bracket() {
    let sol = solve_bder_lie(&sl2(), q(), BiderOptions::default()).unwrap();
    assert_eq!(sol.even.total_nullity, 1);
    assert!(sol.inner);
}

#[test]
fn lie_mode_rejects_odd_elements() {
    assert!(matches!(solve_bder_lie(&build_w(2).unwrap(), q(), BiderOptions::default()), Err(Error::Precondition { .. })));
}

#[test]
fn w3_solutions_satisfy_both_identities() {
    let t = build_w(3).unwrap();
    let sol = solve_bder(&t, q(), BiderOptions::default()).unwrap();
    assert!(sol.inner, "{:?}", sol.even.nonzero_off_diagonal());
    assert_eq!(sol.even.cross_block_rows + sol.odd.cross_block_rows, 0);
    assert!(sol.even.nonzero_off_diagonal().is_empty());
    let s = t.structure(q()).unwrap();
    for v in &sol.even.solutions {
        let m = BilinearMap::from_global(t.dim(), v);
        assert!(bider_residual(&s, Parity::Even, &m).is_none());
        assert!(respects_parity(t.parities(), Parity::Even, &m));
    }
}

#[test]
fn residual_detects_non_solutions() {
    let t = build_w(2).unwrap();
    let s = t.structure(q()).unwrap();
    for lambda in [1, -2, 7] {
        let f = BilinearMap::bracket(&s, &rat(lambda));
        assert!(bider_residual(&s, Parity::Even, &f).is_none());
        assert!(bider_residual(&s, Parity::Odd, &f).is_some());
    }
    let mut f = BilinearMap::bracket(&s, &rat(1));
    let entry = f.values.iter_mut().find(|v| !v.is_empty()).unwrap();
    entry[0].1 += rat(1);
    assert!(bider_residual(&s, Parity::Even, &f).is_some());
    let zero = BilinearMap::<Rational>::zero(t.dim());
    assert!(bider_residual(&s, Parity::Even, &zero).is_none());
}

#[test]
fn modular_dimensions_match_rational_on_w3() {
    let t = build_w(3).unwrap();
    let exact = solve_bder(&t, q(), BiderOptions::default()).unwrap();
    let (cert, modp) = certify_mod_p(&t, PrimeField::DEFAULT_PRIME, BiderOptions::default()).unwrap();
    assert!(cert.valid);
    assert_eq!(exact.even.total_nullity, modp.even.total_nullity);
    assert_eq!(exact.odd.total_nullity, modp.odd.total_nullity);
    let ranks = |b: &[BiderBlock]| b.iter().map(|b| (b.unknowns, b.rank)).collect::<Vec<_>>();
    assert_eq!(ranks(&exact.even.blocks), ranks(&modp.even.blocks));
}

#[test]
fn composite_prime_is_rejected() {
    let t = build_w(2).unwrap();
    assert!(matches!(certify_mod_p(&t, 2_147_483_649, BiderOptions::default()), Err(Error::NotPrime(_))));
}

#[test]
fn perturbed_table_loses_the_bracket() {
    let mut t = build_w(2).unwrap().without_fields();
    // keep super-skew symmetry so only the Jacobi identity breaks
    let (a, b) = (0..t.dim()).flat_map(|a| (0..t.dim()).map(move |b| (a, b))).find(|&(a, b)| a != b && !t.bracket_basis(a, b).is_empty()).unwrap();
    let (k, c) = t.bracket_basis(a, b)[0].clone();
    let sign = if t.parity(a).koszul_negative(t.parity(b)) { rat(1) } else { rat(-1) };
    t.set_constant_unchecked(a, b, k, c.clone() * rat(2));
    t.set_constant_unchecked(b, a, k, c * rat(2) * sign);
    assert!(t.validate().is_ok());
    assert!(!t.check_super_jacobi().passed);
    assert!(!bracket_is_biderivation(&t));
    let sol = solve_bder(&t, q(), BiderOptions::default()).unwrap();
    assert!(!sol.inner);
}

#[test]
fn bracket_factors_through_the_identity() {
    let lp = build_lprime(Family::W, 3).unwrap();
    let t = build_w(3).unwrap();
    let s = t.structure(q()).unwrap();
    let f = BilinearMap::bracket(&s, &rat(3));
    let r = factor_biderivation(&lp, &f);
    assert!(r.passed(), "{:?}", r.status);
    assert_eq!(r.weight.as_deref(), Some(t.weight(0).sub(t.weight(0)).to_string().as_str()));
    for a in 0..t.dim() {
        assert_eq!(r.phi[a], vec![(a, rat(3))]);
        assert_eq!(r.psi[a], vec![(a, rat(3))]);
    }
    let mut g = f.clone();
    let entry = g.values.iter_mut().find(|v| !v.is_empty()).unwrap();
    entry[0].1 += rat(1);
    assert!(!factor_biderivation(&lp, &g).passed());
}

#[test]
fn w4_heavy_weight_block_comes_from_d1_pairs() {
    use crate::superfields::weight_difference;
    let t = build_w(4).unwrap();
    let target: Vec<Rational> = [2, 1, 1, 1].into_iter().map(rat).collect();
    let dim = t.dim();
    let par = t.parities();
    let mut hits = Vec::new();
    for a in 0..dim {
        for b in 0..dim {
            for k in 0..dim {
                if weight_difference(&t, k, &[a, b]).0 == target {
                    hits.push((a, b, k, par[k] + par[a] + par[b]));
                }
            }
        }
    }
    // basis indices 0..4 are d1..d4; only (d1, dj) -> x1x2x3x4 dj lands here,
    // and the output is odd, so the block sits in the odd system
    for &(a, b, k, g) in &hits {
        assert!(a.min(b) == 0 && a.max(b) < 4 && k == 60 + a.max(b) && g == Parity::Odd, "{hits:?}");
    }
    assert_eq!(hits.len(), 7);
    let label = weight_difference(&t, 60, &[0, 0]).to_string();
    assert!(enumerate_blocks(&t, Parity::Odd).unwrap().iter().any(|b| b.0 == label && b.1 == 5 && b.2 == 7));
    assert!(!enumerate_blocks(&t, Parity::Even).unwrap().iter().any(|b| b.0 == label));
}
