use std::sync::Arc;

use filquiv::exactla::{Field, PrimeField, Rationals};
use filquiv::quiver::{build_ladder, normal_paths, LadderQuiver, PathElement, Quiver};
use filquiv::rep::random::{random_matrix, random_rep};
use filquiv::rep::Representation;
use filquiv::semiinv::Presentation;
use filquiv::stability::{Convention, RankWeights, StabilityParams, SubMode};
use filquiv_cli::doc::{
    LadderPayload, PresentationPayload, QuiverPayload, RepresentationPayload, StabilityPayload,
};
use filquiv_cli::{Document, Kind};
use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn ladders() -> Vec<Arc<LadderQuiver>> {
    vec![
        build_ladder(&Quiver::trivial(), 3).unwrap(),
        build_ladder(&Quiver::linear(2), 2).unwrap(),
        build_ladder(&Quiver::linear(3), 2).unwrap(),
        build_ladder(&Quiver::square(), 2).unwrap(),
    ]
}

/// Through JSON text and back, as the binary would see it.
fn via_json<T: serde::Serialize + for<'de> serde::Deserialize<'de>>(kind: Kind, x: &T) -> T {
    let text = Document::new(kind, x).to_json();
    Document::parse(&text).unwrap().expect(kind).unwrap()
}

fn rep_roundtrip<F: Field>(f: &F, m: &Representation<F>) {
    let back = via_json(Kind::Representation, &RepresentationPayload::from_rep(m))
        .to_rep(f)
        .unwrap();
    assert_eq!(&back, m);
}

/// Arbitrary matrices, relations not enforced.
fn random_arbitrary<F: Field>(l: &Arc<LadderQuiver>, f: &F, rng: &mut ChaCha8Rng) -> Representation<F> {
    let dims: Vec<usize> = (0..l.num_vertices()).map(|_| rng.gen_range(0..=2)).collect();
    let mats = l
        .arrows()
        .iter()
        .map(|a| random_matrix(f, rng, dims[a.tgt], dims[a.src], 9))
        .collect();
    Representation::new(l.clone(), f.clone(), dims, mats).unwrap()
}

fn random_presentation<F: Field>(l: &Arc<LadderQuiver>, f: &F, rng: &mut ChaCha8Rng) -> Presentation<F> {
    let n = l.num_vertices();
    let u0: Vec<usize> = (0..n).map(|_| rng.gen_range(0..=1)).collect();
    let u1: Vec<usize> = (0..n).map(|_| rng.gen_range(0..=1)).collect();
    let slots = |u: &[usize]| -> Vec<usize> {
        u.iter().enumerate().flat_map(|(w, &k)| std::iter::repeat_n(w, k)).collect()
    };
    let (rows, cols) = (slots(&u1), slots(&u0));
    let gamma = rows
        .iter()
        .map(|&r| {
            cols.iter()
                .map(|&c| {
                    let mut e = PathElement::zero(f, c, r);
                    for p in normal_paths(l, c, r) {
                        let term = PathElement::from_path(f, l, p, f.random(rng, 5));
                        e = e.add(&term).unwrap();
                    }
                    e
                })
                .collect()
        })
        .collect();
    Presentation::new(l.clone(), f.clone(), u0, u1, gamma).unwrap()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn representations_roundtrip_over_q(seed in any::<u64>(), which in 0usize..4) {
        let l = &ladders()[which];
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        rep_roundtrip(&Rationals, &random_rep(l, &Rationals, &mut rng, 2, 7));
        rep_roundtrip(&Rationals, &random_arbitrary(l, &Rationals, &mut rng));
    }

    #[test]
    fn representations_roundtrip_over_fp(seed in any::<u64>(), which in 0usize..4, pi in 0usize..4) {
        let f = PrimeField::new([2, 3, 7, 65521][pi]).unwrap();
        let l = &ladders()[which];
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        rep_roundtrip(&f, &random_rep(l, &f, &mut rng, 2, 7));
        rep_roundtrip(&f, &random_arbitrary(l, &f, &mut rng));
    }

    #[test]
    fn stability_roundtrips(
        seed in any::<u64>(),
        which in 0usize..4,
        subleq in any::<bool>(),
        strict in any::<bool>(),
    ) {
        let l = &ladders()[which];
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let degree: Vec<i64> = (0..l.num_vertices()).map(|_| rng.gen_range(-5..=5)).collect();
        let rank = if rng.gen_bool(0.5) { RankWeights::ones(l) } else { RankWeights::sink(l) };
        let p = StabilityParams::new(degree, rank)
            .with_convention(if subleq { Convention::SubNonpos } else { Convention::SubNonneg })
            .with_mode(if strict { SubMode::Strict } else { SubMode::All });
        let back = via_json(Kind::Stability, &StabilityPayload::from_params(l, &p)).to_params(l).unwrap();
        prop_assert_eq!(back, p);
    }

    #[test]
    fn presentations_roundtrip(seed in any::<u64>(), which in 0usize..4) {
        let l = &ladders()[which];
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let q = random_presentation(l, &Rationals, &mut rng);
        let back = via_json(Kind::Presentation, &PresentationPayload::from_presentation(&q)).to_presentation(&Rationals).unwrap();
        prop_assert_eq!(back, q);
        let f = PrimeField::new(5).unwrap();
        let p = random_presentation(l, &f, &mut rng);
        let back = via_json(Kind::Presentation, &PresentationPayload::from_presentation(&p)).to_presentation(&f).unwrap();
        prop_assert_eq!(back, p);
    }

    #[test]
    fn random_quivers_and_ladders_roundtrip(seed in any::<u64>(), nv in 1usize..6, na in 0usize..7, levels in 1usize..4) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let q = Quiver::random_acyclic(&mut rng, nv, na);
        let back = via_json(Kind::Quiver, &QuiverPayload::from_quiver(&q)).to_quiver().unwrap();
        prop_assert_eq!(&back, &q);
        let l = build_ladder(&q, levels).unwrap();
        let full = via_json(Kind::Ladder, &LadderPayload::full(&l)).to_ladder().unwrap();
        prop_assert_eq!(&*full, &*l);
        let compact = via_json(Kind::Ladder, &LadderPayload::compact(&l)).to_ladder().unwrap();
        prop_assert_eq!(&*compact, &*l);
    }

    #[test]
    fn serialization_is_deterministic(seed in any::<u64>(), which in 0usize..4) {
        let l = &ladders()[which];
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let m = random_rep(l, &Rationals, &mut rng, 2, 7);
        let a = Document::new(Kind::Representation, &RepresentationPayload::from_rep(&m)).to_json();
        let b = Document::new(Kind::Representation, &RepresentationPayload::from_rep(&m.clone())).to_json();
        prop_assert_eq!(a, b);
    }
}

#[test]
fn unknown_fields_are_rejected() {
    let doc = r#"{"kind":"stability","version":"1.0.0","payload":{"degree":[0],"rank":"ones","extra":1}}"#;
    let parsed = Document::parse(doc).unwrap();
    let err = parsed.expect::<StabilityPayload>(Kind::Stability).unwrap_err();
    assert_eq!(err.error, "parse");
    let envelope = r#"{"kind":"stability","version":"1.0.0","payload":{},"note":"x"}"#;
    assert_eq!(Document::parse(envelope).unwrap_err().error, "parse");
}

#[test]
fn incompatible_versions_are_rejected() {
    let doc = r#"{"kind":"quiver","version":"2.0.0","payload":{"vertices":[],"arrows":[]}}"#;
    assert_eq!(Document::parse(doc).unwrap_err().error, "validation");
}

#[test]
fn scalars_are_exact_strings() {
    let l = build_ladder(&Quiver::trivial(), 2).unwrap();
    let q = Rationals;
    let m = Representation::new(
        l.clone(),
        q,
        vec![1, 1],
        vec![filquiv::exactla::Matrix::from_vec(&q, 1, 1, vec![q.parse("-3/7").unwrap()]).unwrap()],
    )
    .unwrap();
    let p = RepresentationPayload::from_rep(&m);
    assert_eq!(p.maps["beta_1^q1"], vec![vec!["-3/7".to_string()]]);
    let f = PrimeField::new(5).unwrap();
    let n = Representation::new(l, f, vec![1, 1], vec![filquiv::exactla::Matrix::from_i64(&f, &[vec![7]])]).unwrap();
    assert_eq!(RepresentationPayload::from_rep(&n).maps["beta_1^q1"], vec![vec!["2 mod 5".to_string()]]);
}

#[test]
fn mismatched_echoes_are_rejected() {
    let l = build_ladder(&Quiver::linear(2), 2).unwrap();
    let mut full = LadderPayload::full(&l);
    full.vertex_order.as_mut().unwrap().swap(0, 1);
    assert_eq!(full.to_ladder().unwrap_err().error, "validation");
    let m = Representation::with_zero_maps(l.clone(), Rationals, vec![1, 0, 0, 1]);
    let mut p = RepresentationPayload::from_rep(&m);
    p.field = "fp:3".into();
    assert_eq!(p.to_rep(&Rationals).unwrap_err().error, "validation");
    let mut p = RepresentationPayload::from_rep(&m);
    p.maps.remove("alpha_1^a1");
    assert_eq!(p.to_rep(&Rationals).unwrap_err().error, "validation");
}
