use gradings::abgroup::{GroupElement, GroupSpec};
use gradings::classify::{canonical_form, canonical_key, iso_tuples, InvariantTuple};
use gradings::enumerate::{all_subgroups, enum_bicharacters};
use gradings::graded_matrix::{construct_matrix_grading, expected_component_dim, verify_associative_grading, MatrixGradingParams};
use gradings::lie_grading::LieGradingParams;
use proptest::prelude::*;
use proptest::sample::Index;

const GROUPS: &[&[u64]] = &[&[2], &[3], &[4], &[2, 2], &[6], &[2, 4], &[3, 3]];

/// A random matrix grading: group, subgroup with a nondegenerate β, and κ, γ
/// of total size at most 6.
fn arb_params() -> impl Strategy<Value = MatrixGradingParams> {
    (0..GROUPS.len(), any::<Index>(), proptest::collection::vec((1usize..3, any::<Index>()), 1..4))
        .prop_filter_map("no admissible subgroup", |(gi, bi, blocks)| {
            let g = GroupSpec::finite(GROUPS[gi]);
            let els = g.elements().ok()?;
            let pairs: Vec<_> = all_subgroups(&g)
                .ok()?
                .into_iter()
                .flat_map(|t| enum_bicharacters(&t).unwrap_or_default())
                .filter(|b| b.subgroup().order() <= 4)
                .collect();
            let beta = bi.get(&pairs).clone();
            let d = (beta.subgroup().order() as f64).sqrt() as usize;
            let kappa: Vec<usize> = blocks.iter().map(|b| b.0).collect();
            if kappa.iter().sum::<usize>() * d > 6 {
                return None;
            }
            let gamma = blocks.iter().map(|b| b.1.get(&els).clone()).collect();
            MatrixGradingParams::new(&g, beta, kappa, gamma).ok()
        })
}

/// The same class: shifted by `s`, permuted by rotation `r`, each γ moved by an element of `T`.
fn disguise(p: &MatrixGradingParams, s: Index, r: usize, ts: &[Index]) -> MatrixGradingParams {
    let g = p.group();
    let els = g.elements().unwrap();
    let shift = s.get(&els);
    let t = p.subgroup().elements();
    let k = p.kappa().len();
    let order: Vec<usize> = (0..k).map(|i| (i + r) % k).collect();
    let kappa = order.iter().map(|&i| p.kappa()[i]).collect();
    let gamma = order
        .iter()
        .enumerate()
        .map(|(j, &i)| g.mul(&g.mul(&p.gamma()[i], shift), ts[j % ts.len()].get(t)))
        .collect();
    MatrixGradingParams::new(g, p.beta().clone(), kappa, gamma).unwrap()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn constructed_gradings_verify(p in arb_params()) {
        let a = construct_matrix_grading(&p).unwrap();
        prop_assert!(verify_associative_grading(&a).passed);
        for g in p.group().elements().unwrap() {
            prop_assert_eq!(a.component_dimension(&g), expected_component_dim(&p, &g));
        }
    }

    #[test]
    fn keys_are_class_invariants(p in arb_params(), s in any::<Index>(), r in 0usize..3,
                                 ts in proptest::collection::vec(any::<Index>(), 1..4)) {
        let q = disguise(&p, s, r, &ts);
        let (a, b) = (InvariantTuple::Matrix(p.clone()), InvariantTuple::Matrix(q));
        prop_assert_eq!(canonical_key(&a).unwrap(), canonical_key(&b).unwrap());
        prop_assert!(iso_tuples(&a, &b).unwrap().is_some());
    }

    #[test]
    fn canonical_form_stays_in_class(p in arb_params()) {
        let a = InvariantTuple::Matrix(p);
        let c = canonical_form(&a).unwrap();
        prop_assert!(iso_tuples(&a, &c).unwrap().is_some());
        prop_assert_eq!(canonical_key(&a).unwrap(), canonical_key(&c).unwrap());
        let wire = |x: &InvariantTuple| serde_json::to_string(&x.to_wire()).unwrap();
        prop_assert_eq!(wire(&canonical_form(&c).unwrap()), wire(&c));
    }

    #[test]
    fn inverse_gamma_gives_the_same_type_i_class(p in arb_params()) {
        let g = p.group();
        let inv: Vec<GroupElement> = p.gamma().iter().map(|x| g.inv(x)).collect();
        let q = MatrixGradingParams::new(g, p.beta().clone(), p.kappa().to_vec(), inv).unwrap();
        if p.kappa().iter().sum::<usize>() * (p.subgroup().order() as f64).sqrt() as usize >= 2 {
            let (a, b) = (InvariantTuple::Lie(LieGradingParams::AI(p)), InvariantTuple::Lie(LieGradingParams::AI(q)));
            prop_assert_eq!(canonical_key(&a).unwrap(), canonical_key(&b).unwrap());
        }
    }

    #[test]
    fn bicharacters_are_alternating_and_multiplicative(gi in 0..GROUPS.len(), ti in any::<Index>(), bi in any::<Index>()) {
        let g = GroupSpec::finite(GROUPS[gi]);
        let subs = all_subgroups(&g).unwrap();
        let t = ti.get(&subs);
        let betas = enum_bicharacters(t).unwrap();
        prop_assume!(!betas.is_empty());
        let b = bi.get(&betas);
        prop_assert!(b.is_nondegenerate());
        for u in t.elements() {
            prop_assert!(b.eval(u, u).unwrap().is_one());
            for v in t.elements() {
                prop_assert!(b.eval(u, v).unwrap().mul(&b.eval(v, u).unwrap()).is_one());
                for w in t.elements() {
                    let lhs = b.eval(&g.mul(u, v), w).unwrap();
                    prop_assert_eq!(lhs, b.eval(u, w).unwrap().mul(&b.eval(v, w).unwrap()));
                }
            }
        }
    }
}
