use super::*;
use crate::catalog::{self, get_str};
use crate::exact_linear::normal_form::int_vector;
use crate::exact_linear::{Matrix, Scalar};
use crate::group_engine::MatrixGroup;

/// `Σ_w t^{dim ker(w − 1)}`, coefficients from `t⁰` upward.
fn fixed_space_polynomial(w: &MatrixGroup) -> Vec<i64> {
    let n = w.degree();
    let mut c = vec![0i64; n + 1];
    for e in w.elements() {
        let fix = n - e.sub(&Matrix::identity(n)).rank();
        c[fix] += 1;
    }
    c
}

/// Coefficients of `∏ (t + dᵢ − 1)`.
fn product_polynomial(degrees: &[usize]) -> Vec<i64> {
    let mut c = vec![1i64];
    for &d in degrees {
        let mut next = vec![0i64; c.len() + 1];
        for (k, &x) in c.iter().enumerate() {
            next[k + 1] += x;
            next[k] += x * (d as i64 - 1);
        }
        c = next;
    }
    c
}

fn shephard_todd(w: &MatrixGroup) -> Vec<usize> {
    let d = invariant_degrees(w);
    assert_eq!(d.iter().product::<usize>(), w.order());
    assert_eq!(d.iter().map(|x| x - 1).sum::<usize>(), w.reflections().len());
    d
}

#[test]
fn degrees_b3_against_fixed_space_oracle() {
    let d = get_str("SO(7)@3").unwrap();
    let degrees = shephard_todd(d.weyl());
    assert_eq!(degrees, vec![2, 4, 6]);
    assert_eq!(fixed_space_polynomial(d.weyl()), product_polynomial(&degrees));
}

#[test]
fn degrees_di4() {
    let d = get_str("DI4@2").unwrap();
    let degrees = shephard_todd(d.weyl());
    assert_eq!(degrees, vec![4, 6, 14]);
    assert_eq!(fixed_space_polynomial(d.weyl()), product_polynomial(&degrees));
}

#[test]
fn shephard_todd_on_small_catalog() {
    for p in [2, 3] {
        for key in catalog::list_entries(3, p) {
            let d = catalog::get(&key).unwrap();
            let degrees = shephard_todd(d.weyl());
            assert_eq!(fixed_space_polynomial(d.weyl()), product_polynomial(&degrees), "{key}");
        }
    }
}

#[test]
fn fingerprint_examples() {
    let sp = fingerprint(&get_str("Sp(3)@2").unwrap()).unwrap();
    let spin = fingerprint(&get_str("Spin(7)@2").unwrap()).unwrap();
    assert_eq!(sp.weyl_order, 48);
    assert_eq!(spin.weyl_order, 48);
    assert_eq!(sp.first_difference(&spin), Some("reflection_classes"));

    let su = fingerprint(&get_str("SU(2)@2").unwrap()).unwrap();
    let so = fingerprint(&get_str("SO(3)@2").unwrap()).unwrap();
    assert!(su.first_difference(&so).is_some());
    assert_ne!(su.pi1, so.pi1);
    assert_ne!(su.center, so.center);
}

#[test]
fn fingerprint_basis_invariance() {
    let d = get_str("G2@2").unwrap();
    let q = Matrix::from_i64(&[vec![3, 1], vec![2, 1]]);
    let e = d.change_basis(&q).unwrap();
    assert_eq!(fingerprint(&d).unwrap(), fingerprint(&e).unwrap());
}

#[test]
fn iso_examples() {
    let d = get_str("Sp(2)@2").unwrap();
    let v = is_isomorphic(&d, &d).unwrap();
    assert!(check_isomorphism(&d, &d, v.witness().unwrap()).unwrap());

    let sp = get_str("Sp(3)@2").unwrap();
    let spin = get_str("Spin(7)@2").unwrap();
    assert_eq!(is_isomorphic(&sp, &spin).unwrap().is_isomorphic(), Some(false));

    let sp = get_str("Sp(3)@3").unwrap();
    let spin = get_str("Spin(7)@3").unwrap();
    let v = is_isomorphic(&sp, &spin).unwrap();
    let w = v.witness().expect("isomorphic at p = 3");
    assert!(check_isomorphism(&sp, &spin, w).unwrap());
    let back = is_isomorphic(&spin, &sp).unwrap();
    assert_eq!(back.is_isomorphic(), Some(true));
}

#[test]
fn iso_disguised_datum() {
    let d = get_str("SU(3)@2").unwrap();
    let q = Matrix::from_i64(&[vec![1, 4], vec![1, 5]]);
    let e = d.change_basis(&q).unwrap();
    let v = is_isomorphic(&d, &e).unwrap();
    assert!(check_isomorphism(&d, &e, v.witness().unwrap()).unwrap());
}

#[test]
fn iso_same_fingerprint_rank_one_trivial() {
    let a = RootDatum::trivial(2, 3);
    let v = is_isomorphic(&a, &a).unwrap();
    assert_eq!(v.witness(), Some(&Matrix::identity(2)));
}

#[test]
fn automorphism_checks() {
    let d = get_str("SU(2)@2").unwrap();
    assert!(check_automorphism(&d, &Matrix::identity(1)).unwrap());
    assert!(check_automorphism(&d, &Matrix::from_i64(&[vec![-1]])).unwrap());
    assert!(!check_automorphism(&d, &Matrix::from_i64(&[vec![2]])).unwrap());

    let b2 = get_str("Spin(5)@3").unwrap();
    for w in b2.weyl().elements() {
        assert!(check_automorphism(&b2, w).unwrap());
    }
    // does not normalize W
    assert!(!check_automorphism(&b2, &Matrix::from_i64(&[vec![1, 1], vec![0, 1]])).unwrap());

    let z = d.center().unwrap().generators;
    assert!(check_quotient_aut(&d, &z, &Matrix::from_i64(&[vec![-1]])).unwrap());
}

#[test]
fn structure_examples() {
    let s = structure_decomposition(&get_str("SU(2)@2").unwrap()).unwrap();
    assert_eq!((s.m0, s.factors.len()), (0, 1));
    assert!(s.a_structure.is_trivial());

    let s = structure_decomposition(&get_str("SO(3)@2").unwrap()).unwrap();
    assert_eq!(s.factors[0].label.unwrap().to_string(), "SU(2)@2");
    assert_eq!(s.a_structure.exponents, vec![1]);

    // (SU(2) × T(1)) / diagonal ℤ/2
    let su2 = get_str("SU(2)@2").unwrap();
    let d = su2.product(&RootDatum::trivial(1, 2)).unwrap();
    let a = TorusElement::from_ratios(&[(1, 2), (1, 2)], 2).unwrap();
    let u2 = d.quotient(&[a]).unwrap();
    let s = structure_decomposition(&u2).unwrap();
    assert_eq!(s.m0, 1);
    assert_eq!(s.factors.len(), 1);
    assert_eq!(s.factors[0].label.unwrap().to_string(), "SU(2)@2");
    assert_eq!(s.a_structure.order(), 2.into());
    assert!(check_isomorphism(&s.reassembled, &u2, &s.witness).unwrap());
}

#[test]
fn out_examples() {
    let su2 = get_str("SU(2)@2").unwrap();
    let t1 = RootDatum::trivial(1, 2);
    let o = out_of_product(&[(su2.clone(), 1)]).unwrap();
    assert_eq!(o.to_string(), "Out(SU(2)@2)");
    let o = out_of_product(&[(RootDatum::trivial(2, 2), 1)]).unwrap();
    assert_eq!(o.to_string(), "GL_2(Z_2)");
    let o = out_of_product(&[(su2.clone(), 2), (t1, 1)]).unwrap();
    assert_eq!(o.to_string(), "GL_1(Z_2) × (Out(SU(2)@2) ≀ Σ_2)");
    assert!(out_of_product(&[(su2.clone(), 1), (su2, 1)]).is_err());
}

#[test]
fn rank_one_root_conventions() {
    let d = get_str("SU(2)@3").unwrap();
    assert_eq!(d.coroot(0), &int_vector(&[1]));
    let _ = Scalar::one();
}

mod f2 {
    use super::super::f2module::*;

    #[test]
    fn permutation_module_splits() {
        let m = permutation_module(3);
        let ks = krull_schmidt(&m, 0).unwrap();
        let mut dims: Vec<usize> = ks.summands.iter().map(|s| s.module.dim).collect();
        dims.sort();
        assert_eq!(dims, vec![1, 2]);
        assert!(ks.change_of_basis.inverse().is_some());
        let two = ks.summands.iter().find(|s| s.module.dim == 2).unwrap();
        assert_eq!(two.module.signature().unwrap(), sum_zero_module(3).signature().unwrap());
    }

    #[test]
    fn trivial_group_two_lines() {
        let m = F2Module::new(2, vec![]).unwrap();
        let ks = krull_schmidt(&m, 0).unwrap();
        assert_eq!(ks.summands.len(), 2);
    }

    #[test]
    fn gl3_is_g2() {
        let m = natural_module(3);
        let ks = krull_schmidt(&m, 0).unwrap();
        assert_eq!(ks.summands.len(), 1);
        assert!(ks.certified);
        assert_eq!(m.endomorphisms().len(), 1);
        let names: Vec<String> = identify_weyl_pair(&m, &[], 0).unwrap().into_iter().map(|f| f.name).collect();
        assert_eq!(names, vec!["G2"]);
    }

    #[test]
    fn h6_flag_separates_su_and_sp() {
        let m = permutation_module(3);
        let names: Vec<String> = identify_weyl_pair(&m, &[], 0).unwrap().into_iter().map(|f| f.name).collect();
        assert_eq!(names, vec!["SU(2)", "SU(3)"]);
        let names: Vec<String> = identify_weyl_pair(&m, &[2], 0).unwrap().into_iter().map(|f| f.name).collect();
        assert_eq!(names, vec!["Sp(3)"]);
        let sp4: Vec<String> =
            identify_weyl_pair(&permutation_module(4), &[], 0).unwrap().into_iter().map(|f| f.name).collect();
        assert_eq!(sp4, vec!["Sp(4)"]);
    }

    #[test]
    fn parabolic_shapes() {
        let orders: Vec<usize> = [natural_module(4)]
            .iter()
            .map(|m| m.image_group().unwrap().len())
            .collect();
        assert_eq!(orders, vec![20160]);
        let names: Vec<String> =
            identify_weyl_pair(&natural_module(4), &[], 0).unwrap().into_iter().map(|f| f.name).collect();
        assert_eq!(names, vec!["DI4"]);
    }

    #[test]
    fn unidentified_factor() {
        // ℤ/3 acting irreducibly on 𝔽₂²
        let g = F2Matrix::from_strings(&["01", "11"]).unwrap();
        let m = F2Module::new(2, vec![g]).unwrap();
        let err = identify_weyl_pair(&m, &[], 0).unwrap_err();
        assert!(err.to_string().contains("unidentified factor"));
    }
}
