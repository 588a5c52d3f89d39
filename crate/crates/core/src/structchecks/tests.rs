use super::*;
use crate::families::{build_h, build_lprime, build_s, build_s_tilde, build_w, Family};

#[test]
fn bracket_onto_holds_for_small_families() {
    for t in [build_w(3).unwrap(), build_s(4).unwrap(), build_s_tilde(4).unwrap(), build_h(5).unwrap()] {
        let r = check_bracket_onto(&t);
        assert!(r.passed, "{t}: {:?}", r.witness);
    }
}

#[test]
fn bracket_onto_rank_at_degree_zero() {
    // [L_-1, L_0] has rank 4 = dim W(4)_-1
    let t = build_w(4).unwrap();
    let s = structure(&t);
    let mut ech = Echelon::new(q(), t.dim());
    for a in degree_part(&t, -1) {
        for b in degree_part(&t, 0) {
            ech.insert(s.bracket_basis(a, b).to_vec());
        }
    }
    assert_eq!(ech.rank(), 4);
}

#[test]
fn local_part_generates_but_minus_one_alone_does_not() {
    let t = build_w(4).unwrap();
    assert!(check_generated(&t).passed);
    // L_-1 is abelian: it closes on itself
    assert_eq!(generated_dim(&t, &degree_part(&t, -1)), 4);
    assert_eq!(generated_dim(&build_s(4).unwrap(), &(0..49).collect::<Vec<_>>()), 49);
}

#[test]
fn lprime_is_transitive_and_abelian_plane_is_not() {
    for (f, n) in [(Family::W, 3), (Family::H, 5), (Family::S, 4)] {
        let r = check_transitive(&build_lprime(f, n).unwrap());
        assert!(r.passed, "{f}: {:?}", r.witness);
    }
    let abelian = AlgebraTable::lie("abelian", vec![Vec::new(); 4]).unwrap();
    assert!(!transitive_on(&abelian).passed);
}

#[test]
fn minus_one_is_irreducible() {
    for t in [build_w(4).unwrap(), build_h(5).unwrap(), build_s_tilde(4).unwrap()] {
        let r = check_irreducible(&t, 7);
        assert!(r.passed, "{t}: {:?}", r.witness);
    }
}

#[test]
fn zero_action_has_full_commutant() {
    let zero = vec![vec![Vec::new(); 4]; 3];
    let p = irreducibility_proxy(4, &zero, 1);
    assert_eq!(p.commutant_dim, 16);
    assert_eq!(p.proper_submodule_from, Some(0));
}

#[test]
fn h_pairing_and_its_subspace_control() {
    let t = build_h(5).unwrap();
    assert_eq!(t.top_degree(), 2);
    assert!(check_h_pairing(&t).passed);
    // With L_1 cut down to one vector, the 10-dim L_1 cannot embed in Hom(ℂy, L_2) (dim 5).
    let s = structure(&t);
    let l1 = degree_part(&t, 1);
    assert_eq!(l1.len(), 10);
    assert!(pairing_injective(&s, &l1, &l1.iter().map(|&k| basis_vec(k)).collect::<Vec<_>>()).is_none());
    assert!(pairing_injective(&s, &l1, &[basis_vec(l1[0])]).is_some());
}

#[test]
fn simplicity_sample_and_central_control() {
    let r = check_simplicity_sample(&build_w(3).unwrap(), 3);
    assert!(r.passed, "{:?}", r.witness);
    let ext = with_central_element(&build_w(2).unwrap()).unwrap();
    assert!(ext.check_super_jacobi().passed);
    let r = check_simplicity_sample(&ext, 3);
    assert!(!r.passed);
    // W(2) itself is a proper ideal
    assert_eq!(r.witness.as_deref(), Some("start vector 0 generates an ideal of dim 8"));
    let s = structure(&ext);
    let ops: Vec<_> = (0..9).map(basis_vec).collect();
    assert_eq!(closure_dim(&s, &ops, &[basis_vec(8)]), 1);
}
