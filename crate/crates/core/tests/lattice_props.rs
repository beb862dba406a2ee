use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Zero};
use proptest::prelude::*;

use toriclc::lattice::*;

fn matrix(rows: usize, cols: usize) -> impl Strategy<Value = IntMatrix> {
    prop::collection::vec(prop::collection::vec(-6i64..=6, cols), rows)
        .prop_map(move |r| IntMatrix::from_i64_rows(cols, &r))
}

fn shaped() -> impl Strategy<Value = IntMatrix> {
    (1usize..=4, 1usize..=5).prop_flat_map(|(r, c)| matrix(r, c))
}

fn is_echelon(h: &IntMatrix) -> bool {
    let mut last: Option<usize> = None;
    let mut zero_seen = false;
    for i in 0..h.rows() {
        match (0..h.cols()).find(|&j| !h.get(i, j).is_zero()) {
            None => zero_seen = true,
            Some(j) => {
                if zero_seen || last.is_some_and(|l| j <= l) || h.get(i, j) <= &BigInt::zero() {
                    return false;
                }
                if (0..i).any(|k| h.get(k, j) < &BigInt::zero() || h.get(k, j) >= h.get(i, j)) {
                    return false;
                }
                last = Some(j);
            }
        }
    }
    true
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(96))]

    #[test]
    fn hermite_form_is_reduced_and_reachable(m in shaped()) {
        let (h, u) = hermite_normal_form(&m);
        prop_assert!(u.is_unimodular());
        prop_assert_eq!(u.mul(&m), h.clone());
        prop_assert!(is_echelon(&h));
    }

    #[test]
    fn smith_form_is_diagonal_chain(m in shaped()) {
        let s = smith_normal_form(&m);
        prop_assert!(s.u.is_unimodular() && s.v.is_unimodular());
        prop_assert_eq!(s.u.mul(&m).mul(&s.v), s.d.clone());
        prop_assert_eq!(s.v.mul(&s.v_inv), IntMatrix::identity(m.cols()));
        for i in 0..s.d.rows() {
            for j in 0..s.d.cols() {
                prop_assert!(i == j || s.d.get(i, j).is_zero());
            }
        }
        let inv = s.invariants();
        prop_assert_eq!(inv.len(), m.rank());
        for w in inv.windows(2) {
            prop_assert!(w[0] > BigInt::zero() && w[1].is_multiple_of(&w[0]));
        }
    }

    #[test]
    fn saturation_is_idempotent_and_contains(m in shaped()) {
        let l = Sublattice::from_generators(m.cols(), &m.row_vectors());
        let s = saturate(&l);
        let again = saturate(&s);
        prop_assert_eq!(again.basis(), s.basis());
        prop_assert_eq!(s.rank(), l.rank());
        for v in l.basis_vectors() {
            prop_assert!(s.contains(&v));
        }
        prop_assert!(quotient(m.cols(), &s).torsion_order().is_one());
    }

    #[test]
    fn projection_kills_the_sublattice(m in shaped(), x in prop::collection::vec(-4i64..=4, 5)) {
        let n = m.cols();
        let l = Sublattice::from_generators(n, &m.row_vectors());
        let q = quotient(n, &l);
        for v in l.basis_vectors() {
            prop_assert!(q.is_trivial_class(&v));
        }
        // projection is additive modulo L
        let a = to_big(&x[..n]);
        let b: Vec<BigInt> = a.iter().zip(&l.basis_vectors().first().cloned().unwrap_or(vec![BigInt::zero(); n]))
            .map(|(x, y)| x + y).collect();
        prop_assert_eq!(q.project(&a), q.project(&b));
        let reps = torsion_coset_reps(&q);
        prop_assert_eq!(BigInt::from(reps.len()), q.torsion_order());
        let sat = saturate(&l);
        let mut seen = std::collections::HashSet::new();
        for r in &reps {
            prop_assert!(sat.contains(r));
            prop_assert!(seen.insert(q.project(r)));
        }
        prop_assert!(q.is_trivial_class(&reps[0]));
    }
}

#[test]
fn box_points_order_and_count() {
    let pts = box_points(&[-1, 0], &[1, 2]);
    assert_eq!(pts.len(), 9);
    assert_eq!(pts[0], vec![-1, 0]);
    assert_eq!(pts[1], vec![-1, 1]);
    assert!(box_points(&[1], &[0]).is_empty());
}
