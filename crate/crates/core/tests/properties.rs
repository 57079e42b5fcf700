//! Property tests for the subset calculus and the file formats, driven by
//! random subsets of the bundled fixture schemes.

use std::sync::OnceLock;

use proptest::prelude::*;

use schemekit_core::{
    emit_tensor, parse_catalog, parse_relation_matrix, parse_tensor,
    scheme_from_relation_matrix, CheckMode, IntersectionTensor, RelationSubset, Scheme,
};

fn fixtures() -> &'static Vec<(String, Scheme)> {
    static FIXTURES: OnceLock<Vec<(String, Scheme)>> = OnceLock::new();
    FIXTURES.get_or_init(|| {
        let path = concat!(env!("CARGO_MANIFEST_DIR"), "/../../fixtures/catalog.rm");
        let text = std::fs::read_to_string(path).expect("fixture catalog readable");
        parse_catalog(&text)
            .expect("fixture catalog parses")
            .into_iter()
            .map(|e| {
                let s = scheme_from_relation_matrix(&e.matrix, CheckMode::Spot)
                    .expect("fixture validates");
                (e.id, s)
            })
            .collect()
    })
}

fn subset_from_mask(s: &Scheme, mask: u64) -> RelationSubset {
    s.subset((0..s.relation_count()).filter(|i| mask >> i & 1 == 1))
        .expect("indices in range")
}

/// Non-empty subset derived from an arbitrary mask.
fn nonempty(s: &Scheme, mask: u64) -> RelationSubset {
    let t = subset_from_mask(s, mask);
    if t.is_empty() {
        s.singleton_subset(mask as usize % s.relation_count())
            .expect("in range")
    } else {
        t
    }
}

proptest! {
    #[test]
    fn complex_multiplication_is_associative(
        which in 0usize..31,
        a in 1u64..u64::MAX,
        b in 1u64..u64::MAX,
        c in 1u64..u64::MAX,
    ) {
        let (_, s) = &fixtures()[which % fixtures().len()];
        let u = nonempty(s, a);
        let v = nonempty(s, b);
        let w = nonempty(s, c);
        let left = s.complex_product(&s.complex_product(&u, &v)?, &w)?;
        let right = s.complex_product(&u, &s.complex_product(&v, &w)?)?;
        prop_assert_eq!(left, right);
    }

    #[test]
    fn complex_multiplication_is_monotone(
        which in 0usize..31,
        a in 1u64..u64::MAX,
        extra in 0u64..u64::MAX,
        c in 1u64..u64::MAX,
    ) {
        let (_, s) = &fixtures()[which % fixtures().len()];
        let u = nonempty(s, a);
        let v = u.union(&subset_from_mask(s, extra));
        let w = nonempty(s, c);
        prop_assert!(u.is_subset_of(&v));
        let uw = s.complex_product(&u, &w)?;
        let vw = s.complex_product(&v, &w)?;
        prop_assert!(uw.is_subset_of(&vw));
        let wu = s.complex_product(&w, &u)?;
        let wv = s.complex_product(&w, &v)?;
        prop_assert!(wu.is_subset_of(&wv));
    }

    #[test]
    fn closure_is_extensive_monotone_idempotent(
        which in 0usize..31,
        a in 1u64..u64::MAX,
        extra in 0u64..u64::MAX,
    ) {
        let (_, s) = &fixtures()[which % fixtures().len()];
        let h = nonempty(s, a);
        let bigger = h.union(&subset_from_mask(s, extra));
        let ch = s.closure(&h)?;
        prop_assert!(h.is_subset_of(&ch));
        prop_assert!(s.is_closed(&ch)?);
        prop_assert_eq!(s.closure(&ch)?, ch.clone());
        let cb = s.closure(&bigger)?;
        prop_assert!(ch.is_subset_of(&cb));
    }

    #[test]
    fn star_is_an_involution_preserving_products(
        which in 0usize..31,
        a in 1u64..u64::MAX,
        b in 1u64..u64::MAX,
    ) {
        let (_, s) = &fixtures()[which % fixtures().len()];
        let u = nonempty(s, a);
        let v = nonempty(s, b);
        prop_assert_eq!(s.star(&s.star(&u)), u.clone());
        // (UV)* = V* U*
        let lhs = s.star(&s.complex_product(&u, &v)?);
        let rhs = s.complex_product(&s.star(&v), &s.star(&u))?;
        prop_assert_eq!(lhs, rhs);
    }

    #[test]
    fn tensor_documents_roundtrip(
        d in 0usize..4,
        order in 1u64..1000,
        seed in any::<u64>(),
    ) {
        let width = d + 1;
        let mut state = seed;
        let mut next = || {
            state = state.wrapping_mul(6364136223846793005).wrapping_add(1442695040888963407);
            state >> 33
        };
        let flat: Vec<u64> = (0..width * width * width).map(|_| next() % 97).collect();
        let t = IntersectionTensor::new(order, d, flat).unwrap();
        let doc = emit_tensor(&t);
        prop_assert_eq!(parse_tensor(&doc)?, t);
    }

    #[test]
    fn digit_and_spaced_renderings_parse_identically(which in 0usize..31) {
        let (id, _) = &fixtures()[which % fixtures().len()];
        let path = concat!(env!("CARGO_MANIFEST_DIR"), "/../../fixtures/catalog.rm");
        let text = std::fs::read_to_string(path).unwrap();
        let entries = parse_catalog(&text).unwrap();
        let m = &entries.iter().find(|e| &e.id == id).unwrap().matrix;
        let digits: String = (0..m.n())
            .map(|x| {
                (0..m.n()).map(|y| m.cell(x, y).to_string()).collect::<String>() + "\n"
            })
            .collect();
        let spaced: String = (0..m.n())
            .map(|x| {
                (0..m.n())
                    .map(|y| m.cell(x, y).to_string())
                    .collect::<Vec<_>>()
                    .join(" ")
                    + "\n"
            })
            .collect();
        let a = parse_relation_matrix(&format!("{}\n{digits}", m.n()))?;
        let b = parse_relation_matrix(&format!("{}\n{spaced}", m.n()))?;
        prop_assert_eq!(&a, m);
        prop_assert_eq!(&b, m);
    }
}

#[test]
fn catalog_has_expected_size_and_orders() {
    let fx = fixtures();
    assert!(fx.len() >= 20, "need at least 20 fixtures, have {}", fx.len());
    for (id, s) in fx {
        assert!(s.order() <= 10, "{id} exceeds order 10");
    }
}
