use std::collections::BTreeSet;
use std::sync::OnceLock;

use latticeforge::cubical::{check_link, compose, cyclic_complex, double, CubeMorphism};
use latticeforge::ff_lattice::{kl, place_coset, present_gamma_ff, verify_word_ff, FfLetter};
use latticeforge::finite_field::{FieldCtx, Fq2, Zech};
use latticeforge::hurwitz::{present_gamma_hurwitz, Quaternion};
use latticeforge::spectral::{max_residual, symmetric_eigen, SymmetricIntMatrix};
use latticeforge::{Presentation, Square};
use proptest::prelude::*;

const FIELDS: &[(u32, u32)] = &[(2, 1), (3, 1), (2, 2), (5, 1), (7, 1), (2, 3), (3, 2), (11, 1)];

fn ctx(k: usize) -> &'static FieldCtx {
    static CTXS: OnceLock<Vec<FieldCtx>> = OnceLock::new();
    &CTXS.get_or_init(|| FIELDS.iter().map(|&(p, e)| FieldCtx::new(p, e).unwrap()).collect())[k]
}

fn elem(c: &FieldCtx, x: u32) -> Fq2 {
    if x == c.order() {
        Fq2::Zero
    } else {
        Fq2::Pow(x % c.order())
    }
}

fn samples() -> &'static Vec<Presentation> {
    static P: OnceLock<Vec<Presentation>> = OnceLock::new();
    P.get_or_init(|| {
        vec![
            present_gamma_ff(&FieldCtx::new(5, 1).unwrap(), &[2, 3, 4]).unwrap(),
            present_gamma_ff(&FieldCtx::new(2, 2).unwrap(), &[1, 2, 3]).unwrap(),
            present_gamma_hurwitz(&[3, 5, 7], true).unwrap(),
            cyclic_complex(&[4, 6, 2]).unwrap(),
        ]
    })
}

fn quaternion() -> impl Strategy<Value = Quaternion> {
    prop::array::uniform4(-6i64..=6).prop_map(|c| Quaternion::new(c[0], c[1], c[2], c[3]))
}

fn morphism(n: usize, m: usize) -> impl Strategy<Value = CubeMorphism> {
    prop::sample::select(CubeMorphism::all(n, m))
}

proptest! {
    #[test]
    fn zech_law(k in 0..FIELDS.len(), m in any::<u32>()) {
        let c = ctx(k);
        let m = m % c.order();
        let lhs = c.add(Fq2::ONE, Fq2::Pow(m));
        match c.zech(m) {
            Zech::MinusOne => prop_assert_eq!(lhs, Fq2::Zero),
            Zech::Log(z) => prop_assert_eq!(lhs, Fq2::Pow(z)),
        }
    }

    #[test]
    fn field_axioms(k in 0..FIELDS.len(), a in any::<u32>(), b in any::<u32>(), d in any::<u32>()) {
        let c = ctx(k);
        let (a, b, d) = (elem(c, a % (c.order() + 1)), elem(c, b % (c.order() + 1)), elem(c, d % (c.order() + 1)));
        prop_assert_eq!(c.add(a, b), c.add(b, a));
        prop_assert_eq!(c.add(c.add(a, b), d), c.add(a, c.add(b, d)));
        prop_assert_eq!(c.mul(a, c.add(b, d)), c.add(c.mul(a, b), c.mul(a, d)));
        prop_assert_eq!(c.add(a, c.neg(a)), Fq2::Zero);
        prop_assert_eq!(c.from_pair(c.to_pair(a)), a);
    }

    #[test]
    fn frobenius_and_norm(k in 0..FIELDS.len(), a in any::<u32>(), b in any::<u32>()) {
        let c = ctx(k);
        let (a, b) = (elem(c, a % (c.order() + 1)), elem(c, b % (c.order() + 1)));
        prop_assert_eq!(c.frob(c.mul(a, b)), c.mul(c.frob(a), c.frob(b)));
        prop_assert_eq!(c.frob(c.add(a, b)), c.add(c.frob(a), c.frob(b)));
        prop_assert_eq!(c.frob(c.frob(a)), a);
        prop_assert!(c.in_base(c.norm(a)));
        prop_assert_eq!(c.norm(c.mul(a, b)), c.mul(c.norm(a), c.norm(b)));
    }

    #[test]
    fn kl_stays_in_direction(k in 0..FIELDS.len(), s in any::<u32>(), t in any::<u32>(), x in 0u32..64, y in 0u32..64) {
        let c = ctx(k);
        let q = c.q();
        prop_assume!(q >= 3);
        let (s, t) = (1 + s % (q - 1), 1 + t % (q - 1));
        prop_assume!(s != t);
        let (cs, ct) = (place_coset(c, s).unwrap(), place_coset(c, t).unwrap());
        let i = cs.coset[(x % (q + 1)) as usize];
        let j = ct.coset[(y % (q + 1)) as usize];
        let (kk, l) = kl(c, i, j).unwrap();
        prop_assert!(ct.coset.contains(&kk));
        prop_assert!(cs.coset.contains(&l));
        let w = [FfLetter::A(i), FfLetter::A(j), FfLetter::AInv(l), FfLetter::AInv(kk)];
        prop_assert!(verify_word_ff(c, &w).unwrap().is_central());
    }

    #[test]
    fn orbit_is_closed(which in 0usize..4, pick in any::<prop::sample::Index>()) {
        let p = &samples()[which];
        let sq = *pick.get(&p.squares);
        let orbit: BTreeSet<Square> = p.orbit(&sq).unwrap().into_iter().collect();
        for o in &orbit {
            let again: BTreeSet<Square> = p.orbit(o).unwrap().into_iter().collect();
            prop_assert_eq!(&again, &orbit);
            prop_assert_eq!(p.canonicalize(o).unwrap(), sq);
        }
    }

    #[test]
    fn json_round_trip(which in 0usize..4) {
        let p = &samples()[which];
        let back = Presentation::from_json(&p.to_json()).unwrap();
        prop_assert_eq!(&back, p);
        prop_assert_eq!(back.to_json(), p.to_json());
    }

    #[test]
    fn ff_presentations_validate(k in 1..FIELDS.len(), mask in 1u32..255) {
        let c = ctx(k);
        let places: Vec<u32> = (1..c.q()).filter(|t| mask >> (t - 1) & 1 == 1).collect();
        prop_assume!(!places.is_empty() && places.len() <= 3);
        let p = present_gamma_ff(c, &places).unwrap();
        let report = p.validate();
        prop_assert!(report.valid, "{:?}", report.errors);
        for d in &p.directions {
            prop_assert_eq!(d.generators.len() as u32, c.q() + 1);
        }
    }

    #[test]
    fn composition_is_pointwise(f in morphism(2, 4), g in morphism(1, 2), x in prop::sample::select(vec![1i8, -1])) {
        let fg = compose(&f, &g).unwrap();
        prop_assert_eq!(fg.apply(&[x]), f.apply(&g.apply(&[x])));
    }

    #[test]
    fn composition_is_associative(f in morphism(3, 4), g in morphism(2, 3), h in morphism(1, 2)) {
        let left = compose(&compose(&f, &g).unwrap(), &h).unwrap();
        let right = compose(&f, &compose(&g, &h).unwrap()).unwrap();
        prop_assert_eq!(left, right);
    }

    #[test]
    fn nrd_is_multiplicative(x in quaternion(), y in quaternion()) {
        prop_assert_eq!(x.mul(&y).nrd(), x.nrd() * y.nrd());
        prop_assert_eq!(x.mul(&y).conj(), y.conj().mul(&x.conj()));
        let n = x.mul(&x.conj());
        prop_assert!(n.is_scalar());
    }

    #[test]
    fn cyclic_doubles_pass_the_link(a in 1usize..4, b in 1usize..4) {
        let p = cyclic_complex(&[2 * a, 2 * b]).unwrap();
        prop_assert!(check_link(&p).unwrap().pass);
        let d = double(&p).unwrap();
        prop_assert!(check_link(&d).unwrap().pass);
        prop_assert_eq!(d.directions[0].generators.len(), 4 * a * a);
        prop_assert_eq!(d.directions[1].generators.len(), 4 * b * b);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn eigenpairs_reconstruct(n in 1usize..16, entries in prop::collection::vec(-4i64..=4, 256)) {
        let mut a = vec![vec![0i64; n]; n];
        let mut it = entries.into_iter();
        for i in 0..n {
            for j in i..n {
                let v = it.next().unwrap();
                a[i][j] = v;
                a[j][i] = v;
            }
        }
        let m = SymmetricIntMatrix::from_dense(&a).unwrap();
        let (vals, vecs) = symmetric_eigen(m.to_dense_f64(), n).unwrap();
        prop_assert!(max_residual(&m, &vals, &vecs) < 1e-9);
        let trace: f64 = vals.iter().sum();
        prop_assert!((trace - m.trace() as f64).abs() < 1e-9);
        let frob: f64 = vals.iter().map(|l| l * l).sum();
        let want: i64 = a.iter().flatten().map(|x| x * x).sum();
        prop_assert!((frob - want as f64).abs() < 1e-8);
        prop_assert!(vals.windows(2).all(|w| w[0] >= w[1]));
    }
}
