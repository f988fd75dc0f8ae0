use crmap_core::degeneracy::image_dimension;
use crmap_core::families::{effective_degree, verifies};
use crmap_core::{family_thm_i, family_thm_ii, FamilyIIParams, FamilyIParams, Rational, Scalar};

fn r(n: i64, d: i64) -> Rational {
    Rational::new(n.into(), d.into())
}

fn s(lit: &str) -> Scalar {
    lit.parse().unwrap()
}

#[test]
fn family_i_grid_verifies_with_degree_three() {
    for (mu, lam, n) in [(r(1, 3), "1/3", 4), (r(1, 3), "1/4", 5), (r(5, 6), "1", 5), (r(1, 1), "1", 5)] {
        let h = family_thm_i(&FamilyIParams::new(mu.clone(), s(lam), n).unwrap()).unwrap();
        assert!(verifies(&h).unwrap(), "mu={mu} lambda={lam}");
        let d = effective_degree(&h, 0);
        assert_eq!(d.degree, 3);
        assert_eq!(d.effective, 3);
    }
}

#[test]
fn family_ii_grid_verifies() {
    for (a, lam) in [(r(-1, 1), "0"), (r(-1, 16), "1/2"), (r(-1, 1), "1")] {
        let h = family_thm_ii(&FamilyIIParams::new(a.clone(), s(lam), 4).unwrap()).unwrap();
        assert!(verifies(&h).unwrap(), "a={a} lambda={lam}");
        assert_eq!(h.degree(), 3);
    }
}

#[test]
fn image_dimensions() {
    for n in 6..9 {
        let h = family_thm_i(&FamilyIParams::new(r(1, 1), s("1"), n).unwrap()).unwrap();
        assert_eq!(image_dimension(&h), 5, "family i, N={n}");
    }
    for n in 5..8 {
        let h = family_thm_ii(&FamilyIIParams::new(r(-1, 1), s("1"), n).unwrap()).unwrap();
        assert_eq!(image_dimension(&h), 4, "family ii, N={n}");
    }
}

#[test]
fn constraint_corners_are_rejected() {
    assert!(FamilyIParams::new(r(1, 6), s("1/10"), 5).is_err());
    assert!(FamilyIParams::new(r(1, 3), s("1"), 5).is_err());
    assert!(FamilyIParams::new(r(1, 3), s("1/4"), 4).is_err());
    assert!(FamilyIIParams::new(r(-1, 32), s("1"), 4).is_err());
    assert!(FamilyIIParams::new(r(-1, 1), s("-1"), 4).is_err());
    assert!(FamilyIIParams::new(r(-1, 1), s("1"), 3).is_err());
    assert!(FamilyIIParams::new(r(-1, 16), s("1"), 3).is_ok());
}
