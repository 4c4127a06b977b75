//! Acceptance suite. Prints one PASS/FAIL line per criterion and exits
//! nonzero if any criterion fails.

use std::collections::{BTreeMap, BTreeSet, HashMap};
use std::fmt::Write as _;
use std::ops::ControlFlow;
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::sync::Arc;
use std::time::Instant;

use filquiv::exactla::{Field, FiniteField, Matrix, PrimeField, Rationals};
use filquiv::filtr::{gr, gr_max, hn_filtration, hn_filtration_seeded, is_polystable, jh_filtration, s_equivalent};
use filquiv::git::oracle::{degeneration_closure, enumerate_points, Orbits, DEFAULT_ORBIT_CAP};
use filquiv::git::{hilbert_mumford_semistable, is_closed_orbit_point, Locus};
use filquiv::quiver::{build_ladder, normal_paths, LadderArrowKind, LadderQuiver, PathElement, Quiver};
use filquiv::rep::random::{random_filtered, random_group_element, random_rep};
use filquiv::rep::{
    hom_dim, indecomposable_projective, is_isomorphic, is_torsion, kappa, tf_resolution, torsion_part, Representation,
};
use filquiv::semiinv::{admissible_multiplicities, chi_u, theta_value, weight_check, weight_pairing, Presentation};
use filquiv::stability::{
    for_each_subrep, rank_of, rk_dim_filtered, theta_test, verdict, Convention, RankWeights, StabilityParams, SubMode,
    DEFAULT_SUBREP_CAP,
};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

type Outcome = Result<String, String>;

macro_rules! ensure {
    ($cond:expr, $($msg:tt)+) => {
        if !$cond {
            return Err(format!($($msg)+));
        }
    };
}

fn ok<T>(r: filquiv::Result<T>) -> Result<T, String> {
    r.map_err(|e| e.to_string())
}

fn ladder(q: Quiver, levels: usize) -> Arc<LadderQuiver> {
    build_ladder(&q, levels).expect("valid ladder")
}

/// `A_2 x A_2` with vertices in level-major order `(1,q1), (1,q2), (2,q1), (2,q2)`.
fn a2a2() -> Arc<LadderQuiver> {
    ladder(Quiver::linear(2), 2)
}

fn dim_vectors(n: usize, max: usize) -> Vec<Vec<usize>> {
    let mut out = vec![vec![]];
    for _ in 0..n {
        out = out
            .into_iter()
            .flat_map(|v| {
                (0..=max).map(move |x| {
                    let mut w = v.clone();
                    w.push(x);
                    w
                })
            })
            .collect();
    }
    out
}

fn points<F: FiniteField>(l: &Arc<LadderQuiver>, f: &F, d: &[usize]) -> Vec<Representation<F>> {
    enumerate_points(l, f, d, 1 << 22).expect("small sweep")
}

fn filtered<F: FiniteField>(pts: Vec<Representation<F>>) -> Vec<Representation<F>> {
    pts.into_iter().filter(|m| m.is_filtered().unwrap()).collect()
}

// 1 -----------------------------------------------------------------------

struct UnionFind(Vec<usize>);

impl UnionFind {
    fn find(&mut self, x: usize) -> usize {
        if self.0[x] != x {
            let r = self.find(self.0[x]);
            self.0[x] = r;
        }
        self.0[x]
    }
    fn union(&mut self, a: usize, b: usize) {
        let (a, b) = (self.find(a), self.find(b));
        self.0[a] = b;
    }
}

/// Number of arrow words `from -> to` modulo the commuting squares, by
/// rewriting every word at every position.
fn brute_force_path_classes(l: &LadderQuiver, from: usize, to: usize) -> usize {
    let mut words: Vec<Vec<usize>> = Vec::new();
    let mut stack = vec![(from, Vec::new())];
    while let Some((v, w)) = stack.pop() {
        if v == to {
            words.push(w.clone());
        }
        for &a in l.outgoing(v) {
            let mut w2 = w.clone();
            w2.push(a);
            stack.push((l.arrow(a).tgt, w2));
        }
    }
    let index: HashMap<Vec<usize>, usize> = words.iter().cloned().enumerate().map(|(i, w)| (w, i)).collect();
    // commuting squares: vertical x then horizontal y equals horizontal y' then vertical x'
    let arrows = l.arrows();
    let mut squares: Vec<([usize; 2], [usize; 2])> = Vec::new();
    for (x, ax) in arrows.iter().enumerate() {
        let LadderArrowKind::Vertical { level: k, base_arrow: a } = ax.kind else { continue };
        for (y, ay) in arrows.iter().enumerate() {
            if !ay.kind_is_horizontal() || ay.src != ax.tgt {
                continue;
            }
            for (y2, ay2) in arrows.iter().enumerate() {
                if !ay2.kind_is_horizontal() || ay2.src != ax.src {
                    continue;
                }
                for (x2, ax2) in arrows.iter().enumerate() {
                    if let LadderArrowKind::Vertical { level, base_arrow } = ax2.kind {
                        if level == k + 1 && base_arrow == a && ax2.src == ay2.tgt && ax2.tgt == ay.tgt {
                            squares.push(([x, y], [y2, x2]));
                        }
                    }
                }
            }
        }
    }
    let mut uf = UnionFind((0..words.len()).collect());
    for (i, w) in words.iter().enumerate() {
        for p in 0..w.len().saturating_sub(1) {
            for (lhs, rhs) in &squares {
                if w[p..p + 2] == lhs[..] {
                    let mut v = w.clone();
                    v[p..p + 2].copy_from_slice(rhs);
                    uf.union(i, index[&v]);
                }
            }
        }
    }
    (0..words.len()).filter(|&i| uf.find(i) == i).count()
}

trait KindExt {
    fn kind_is_horizontal(&self) -> bool;
}

impl KindExt for filquiv::quiver::LadderArrow {
    fn kind_is_horizontal(&self) -> bool {
        matches!(self.kind, LadderArrowKind::Horizontal { .. })
    }
}

fn c1_ladder_counting() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(1);
    let mut pairs = 0usize;
    for _ in 0..50 {
        let nv = rng.gen_range(1..=6);
        let na = if nv > 1 { rng.gen_range(0..=7) } else { 0 };
        let q = Quiver::random_acyclic(&mut rng, nv, na);
        let lv = rng.gen_range(1..=4);
        let l = ladder(q.clone(), lv);
        let (q0, q1) = (q.num_vertices(), q.num_arrows());
        ensure!(l.num_vertices() == lv * q0, "vertex count");
        ensure!(l.num_arrows() == lv * q1 + (lv - 1) * q0, "arrow count");
        ensure!(l.relations().len() == (lv - 1) * q1, "relation count");
        for u in 0..l.num_vertices() {
            for w in 0..l.num_vertices() {
                let expected = brute_force_path_classes(&l, u, w);
                ensure!(
                    normal_paths(&l, u, w).len() == expected && l.count_normal_paths(u, w) == expected,
                    "path basis {u}->{w}: expected {expected}"
                );
                pairs += 1;
            }
        }
    }
    Ok(format!("50 quivers, {pairs} vertex pairs"))
}

// 2, 3, 12 ---------------------------------------------------------------

fn suite_ladders() -> Vec<Arc<LadderQuiver>> {
    vec![
        ladder(Quiver::trivial(), 3),
        a2a2(),
        ladder(Quiver::linear(3), 2),
        ladder(Quiver::square(), 2),
    ]
}

fn c2_torsion_kappa() -> Outcome {
    let f = PrimeField::new(5).unwrap();
    let mut rng = ChaCha8Rng::seed_from_u64(2);
    let ls = suite_ladders();
    let mut nontrivial = 0;
    for i in 0..500 {
        let l = &ls[i % ls.len()];
        let b = random_rep(l, &f, &mut rng, 3, 4);
        let t = ok(torsion_part(&b))?;
        let trep = t.representation(&b);
        ensure!(is_torsion(&trep), "torsion part is not torsion");
        let k = ok(kappa(&b))?;
        ensure!(ok(k.is_filtered())?, "B/B_tor is not filtered");
        let sum: Vec<usize> = t.dims().iter().zip(k.dims()).map(|(a, b)| a + b).collect();
        ensure!(sum == *b.dims(), "dimensions are not additive");
        nontrivial += usize::from(!t.is_zero());
    }
    for i in 0..500 {
        let l = &ls[i % ls.len()];
        let m = random_filtered(l, &f, &mut rng, 3, 4);
        ensure!(ok(is_isomorphic(&ok(kappa(&m))?, &m))?, "κ∘ι is not the identity");
    }
    Ok(format!("500 B ({nontrivial} with nonzero torsion), 500 filtered M"))
}

fn c3_resolution() -> Outcome {
    let f = PrimeField::new(5).unwrap();
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    let ls = suite_ladders();
    for i in 0..500 {
        let l = &ls[i % ls.len()];
        let lv = l.levels();
        let b = random_rep(l, &f, &mut rng, 3, 4);
        let r = ok(tf_resolution(&b))?;
        let level_dim = |m: &Representation<PrimeField>, j: usize| -> usize {
            (0..l.base().num_vertices()).map(|v| m.dim(l.vertex_index(j, v))).sum()
        };
        let want_n: usize = (1..=lv).map(|j| (lv - j + 1) * level_dim(&b, j)).sum();
        let want_np: usize = (1..=lv).map(|j| (lv - j) * level_dim(&b, j)).sum();
        ensure!(r.n.total_dim() == want_n, "dim N = {} != {want_n}", r.n.total_dim());
        ensure!(r.nprime.total_dim() == want_np, "dim N' = {} != {want_np}", r.nprime.total_dim());
        ensure!(r.f.is_surjective(), "f is not surjective");
        ensure!(r.inclusion.is_injective(), "N' -> N is not injective");
        ensure!(ok(r.inclusion.then(&r.f))?.comps().iter().all(|c| c.is_zero()), "N' does not map to zero");
        ensure!(ok(r.n.is_filtered())? && ok(r.nprime.is_filtered())?, "N or N' not filtered");
    }
    Ok("500 random B".into())
}

fn c12_yoneda() -> Outcome {
    let f = PrimeField::new(5).unwrap();
    let mut rng = ChaCha8Rng::seed_from_u64(12);
    let mut ls = suite_ladders();
    ls.push(ladder(Quiver::random_acyclic(&mut rng, 3, 3), 3));
    for l in &ls {
        let projs: Vec<_> = (0..l.num_vertices())
            .map(|w| indecomposable_projective(l, &f, w).unwrap())
            .collect();
        for _ in 0..200 {
            let n = random_rep(l, &f, &mut rng, 3, 4);
            for (w, p) in projs.iter().enumerate() {
                ensure!(ok(hom_dim(p, &n))? == n.dim(w), "Hom(P'_{w}, N) has the wrong dimension");
            }
        }
    }
    Ok(format!("{} ladders x 200 N", ls.len()))
}

// 4 ----------------------------------------------------------------------

fn c4_rank() -> Outcome {
    let f = PrimeField::new(2).unwrap();
    let mut total = 0usize;
    let mut filt = 0usize;
    for l in [ladder(Quiver::trivial(), 3), a2a2()] {
        let sink = RankWeights::sink(&l);
        for d in dim_vectors(l.num_vertices(), 2) {
            for m in points(&l, &f, &d) {
                total += 1;
                if ok(m.is_filtered())? {
                    filt += 1;
                    ensure!(ok(rk_dim_filtered(&m))? == m.total_dim(), "rk_dim differs from dim on {d:?}");
                }
                ensure!((rank_of(&d, &sink) == 0) == is_torsion(&m), "rk_s = 0 and torsion disagree on {d:?}");
            }
        }
    }
    Ok(format!("{total} points, {filt} filtered"))
}

// 5 ----------------------------------------------------------------------

fn c5_mu_theta() -> Outcome {
    let f = PrimeField::new(2).unwrap();
    let l = a2a2();
    let configs: Vec<(Vec<i64>, RankWeights)> = vec![
        (vec![1, 1, 0, -1], RankWeights::ones(&l)),
        (vec![1, 0, 0, 0], RankWeights::sink(&l)),
        (vec![0, 1, -1, 0], RankWeights::ones(&l)),
        (vec![2, -1, 1, -1], RankWeights::new(&l, vec![1, 1, 2, 1]).unwrap()),
        (vec![-1, 2, 0, 1], RankWeights::sink(&l)),
    ];
    let agree = |pts: &[Representation<PrimeField>], tally: &mut BTreeMap<String, usize>| -> Result<(), String> {
        for (theta_deg, rk) in &configs {
            for c in Convention::BOTH {
                let p = StabilityParams::new(theta_deg.clone(), rk.clone()).with_convention(c);
                for m in pts {
                    if p.rank_of(m.dims()) == 0 {
                        continue;
                    }
                    let theta = p.theta(m.dims());
                    let v = ok(verdict(m, &p))?;
                    let t_ss = ok(theta_test(m, &theta, c, SubMode::All, DEFAULT_SUBREP_CAP, false))?;
                    let t_st = ok(theta_test(m, &theta, c, SubMode::All, DEFAULT_SUBREP_CAP, true))?;
                    ensure!(
                        v.semistable == t_ss && v.stable == t_st,
                        "Θ={theta_deg:?} {c} d={:?}: verdicts differ",
                        m.dims()
                    );
                    *tally.entry(format!("{theta_deg:?}/{c}")).or_default() += usize::from(v.semistable);
                }
            }
        }
        Ok(())
    };
    let core = filtered(points(&l, &f, &[1, 1, 1, 1]));
    let mut tally = BTreeMap::new();
    agree(&core, &mut tally)?;
    // the same check on every filtered point with dimensions at most 2
    let wide: Vec<_> = dim_vectors(4, 2).iter().flat_map(|d| filtered(points(&l, &f, d))).collect();
    let mut wide_tally = BTreeMap::new();
    agree(&wide, &mut wide_tally)?;
    Ok(format!(
        "{} points at d=(1,1,1,1), semistable counts {tally:?}; {} filtered points with dims <= 2 also agree",
        core.len(),
        wide.len()
    ))
}

// 6 ----------------------------------------------------------------------

fn c6_hilbert_mumford() -> Outcome {
    let f = PrimeField::new(2).unwrap();
    let cases: Vec<(Arc<LadderQuiver>, Vec<Vec<i64>>)> = vec![
        (ladder(Quiver::trivial(), 2), vec![vec![1, -1], vec![-1, 1], vec![0, 0]]),
        (ladder(Quiver::trivial(), 3), vec![vec![1, 0, -1], vec![-1, 2, 0]]),
        (a2a2(), vec![vec![1, 1, 0, -1], vec![0, 1, -1, 0]]),
    ];
    let mut checked = 0usize;
    let mut unstable = 0usize;
    for (l, thetas) in cases {
        let rk = RankWeights::ones(&l);
        for d in dim_vectors(l.num_vertices(), 2) {
            if d.iter().all(|&x| x == 0) {
                continue;
            }
            let pts = points(&l, &f, &d);
            for deg in &thetas {
                for c in Convention::BOTH {
                    let p = StabilityParams::new(deg.clone(), rk.clone()).with_convention(c);
                    let strict = p.clone().with_mode(SubMode::Strict);
                    for m in &pts {
                        let rel = ok(hilbert_mumford_semistable(m, &p, Locus::Rel))?.semistable;
                        let want = ok(verdict(m, &p))?.semistable;
                        ensure!(rel == want, "rel locus differs on {d:?} Θ={deg:?} {c}");
                        if ok(m.is_filtered())? {
                            let fil = ok(hilbert_mumford_semistable(m, &p, Locus::Fil))?.semistable;
                            let want = ok(verdict(m, &strict))?.semistable;
                            ensure!(fil == want, "fil locus differs on {d:?} Θ={deg:?} {c}");
                        }
                        checked += 1;
                        unstable += usize::from(!want);
                    }
                }
            }
        }
    }
    Ok(format!("{checked} verdicts ({unstable} unstable)"))
}

// 7 ----------------------------------------------------------------------

/// Associated graded of a θ-Jordan–Hölder filtration over all subobjects:
/// split off a nonzero subobject with `θ = 0` of least dimension (it is
/// θ-stable) and recurse on the quotient.
fn rel_jh_graded<F: FiniteField>(m: &Representation<F>, theta: &[i64]) -> Representation<F> {
    if m.is_zero() {
        return m.clone();
    }
    let mut best: Option<filquiv::rep::Subrep<F>> = None;
    for_each_subrep(m, SubMode::All, DEFAULT_SUBREP_CAP, |s| {
        let t: i64 = theta.iter().zip(s.dims()).map(|(a, b)| a * b as i64).sum();
        if !s.is_zero() && t == 0 && best.as_ref().is_none_or(|b| s.total_dim() < b.total_dim()) {
            best = Some(s.clone());
        }
        ControlFlow::Continue(())
    })
    .unwrap();
    let s = best.expect("the whole object qualifies");
    let piece = s.representation(m);
    let (q, _) = s.quotient(m);
    piece.direct_sum(&rel_jh_graded(&q, theta)).unwrap()
}

fn c7_hn_jh() -> Outcome {
    let f = PrimeField::new(3).unwrap();
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    let ls = [ladder(Quiver::trivial(), 2), ladder(Quiver::trivial(), 3), a2a2()];
    let (mut instances, mut jh_checked, mut multi_step) = (0, 0, 0);
    while instances < 240 {
        let l = &ls[instances % ls.len()];
        let m = random_filtered(l, &f, &mut rng, 2, 1);
        if m.is_zero() {
            continue;
        }
        instances += 1;
        // degree nonnegative below the sink level, as Harder–Narasimhan requires
        let deg: Vec<i64> = (0..l.num_vertices())
            .map(|w| if l.is_sink_level(w) { rng.gen_range(-2..=2) } else { rng.gen_range(0..=2) })
            .collect();
        let rk_is_sink = rng.gen_bool(0.5);
        let rk = if rk_is_sink { RankWeights::sink(l) } else { RankWeights::ones(l) };
        let p = StabilityParams::new(deg.clone(), rk);
        let hn = ok(hn_filtration(&m, &p))?;
        ensure!(hn.strict, "HN filtration is not strict");
        let slopes = ok(hn.slopes(&p))?;
        ensure!(slopes.windows(2).all(|w| w[0] > w[1]), "HN slopes {slopes:?} not decreasing");
        // Rank ones is positive on torsion, so pieces are only guaranteed
        // semistable against strict subobjects there.
        let piece_p = if rk_is_sink { p.clone() } else { p.clone().with_mode(SubMode::Strict) };
        for q in hn.quotients() {
            let v = ok(verdict(&q, &piece_p))?;
            ensure!(
                v.semistable,
                "HN piece {:?} of {:?} (maps {:?}) not semistable for Θ={deg:?}, rk={:?}; witness {:?}",
                q.dims(),
                m.dims(),
                m.mats(),
                p.rank.as_slice(),
                v.witness.map(|w| w.dims())
            );
        }
        multi_step += usize::from(hn.len() > 1);
        for seed in 1..=3 {
            let other = ok(hn_filtration_seeded(&m, &p, Some(seed)))?;
            ensure!(other.quotient_dims() == hn.quotient_dims(), "HN type depends on the search order");
        }
        let g = ok(gr_max(&m, None))?;
        ensure!(ok(is_isomorphic(&ok(gr_max(&g, None))?, &g))?, "gr_max not idempotent");
        if ok(verdict(&m, &p))?.semistable {
            let gp = ok(gr_max(&m, Some(&p)))?;
            ensure!(ok(is_isomorphic(&ok(gr_max(&gp, Some(&p)))?, &gp))?, "gr_max(μ) not idempotent");
            if let Some(jh) = ok(jh_filtration(&m, &p))? {
                let theta = p.theta(m.dims());
                let oriented: Vec<i64> = theta.iter().map(|t| t * p.convention.sign()).collect();
                let rel = rel_jh_graded(&m, &oriented);
                ensure!(ok(is_isomorphic(&ok(gr(&jh))?, &rel))?, "ι(gr M) and gr(ι M) differ");
                jh_checked += 1;
            }
        }
    }
    Ok(format!(
        "{instances} instances, {multi_step} with several HN steps, {jh_checked} JH comparisons"
    ))
}

// 8 ----------------------------------------------------------------------

fn c8_closed_orbits() -> Outcome {
    let f = PrimeField::new(3).unwrap();
    let cases: Vec<(Arc<LadderQuiver>, Vec<Vec<usize>>, Vec<Vec<i64>>)> = vec![
        (
            ladder(Quiver::trivial(), 2),
            vec![vec![1, 1], vec![1, 2], vec![2, 2], vec![1, 3]],
            vec![vec![0, 0], vec![1, -1], vec![-1, 1]],
        ),
        (
            a2a2(),
            vec![vec![1, 1, 1, 1], vec![1, 1, 1, 2], vec![0, 1, 1, 1], vec![1, 0, 1, 1]],
            vec![vec![0, 0, 0, 0], vec![1, 1, 0, -1], vec![0, 1, -1, 0]],
        ),
    ];
    let (mut checked, mut closed) = (0, 0);
    for (l, dims, degs) in cases {
        for d in dims {
            let pts = filtered(points(&l, &f, &d));
            let Some(first) = pts.first() else { continue };
            let mut orbits = ok(Orbits::new(first, DEFAULT_ORBIT_CAP))?;
            for deg in &degs {
                for c in Convention::BOTH {
                    let p = StabilityParams::new(deg.clone(), RankWeights::ones(&l)).with_convention(c);
                    for m in &pts {
                        if !ok(verdict(m, &p))?.semistable {
                            continue;
                        }
                        let literal = ok(degeneration_closure(&mut orbits, m, &p))?.len() == 1;
                        let criterion = ok(is_closed_orbit_point(m, &p))?;
                        ensure!(literal == criterion, "closed-orbit verdicts differ on {d:?} Θ={deg:?} {c}");
                        checked += 1;
                        closed += usize::from(literal);
                    }
                }
            }
        }
    }
    ensure!(closed > 0 && closed < checked, "population does not exercise both outcomes");
    Ok(format!("{checked} semistable points, {closed} with closed orbit"))
}

// 9 ----------------------------------------------------------------------

fn c9_moduli_point() -> Outcome {
    let f = PrimeField::new(3).unwrap();
    let l = ladder(Quiver::trivial(), 3);
    let pts = filtered(points(&l, &f, &[1, 2, 2]));
    ensure!(!pts.is_empty(), "no filtered points");
    let mut report = Vec::new();
    let mut saw_nonempty = false;
    for (deg, rk) in [
        (vec![0, 0, 0], RankWeights::sink(&l)),
        (vec![0, 0, 0], RankWeights::ones(&l)),
        (vec![1, 0, -1], RankWeights::ones(&l)),
        (vec![-1, 0, 1], RankWeights::ones(&l)),
        (vec![2, -1, 0], RankWeights::sink(&l)),
    ] {
        for c in Convention::BOTH {
            let p = StabilityParams::new(deg.clone(), rk.clone()).with_convention(c);
            let mut reps: Vec<Representation<PrimeField>> = Vec::new();
            for m in &pts {
                if !ok(verdict(m, &p))?.semistable {
                    continue;
                }
                let mut known = false;
                for r in &reps {
                    if ok(s_equivalent(m, r, Some(&p)))? {
                        known = true;
                        break;
                    }
                }
                if !known {
                    reps.push(m.clone());
                }
            }
            ensure!(reps.len() <= 1, "Θ={deg:?} {c}: {} S-equivalence classes", reps.len());
            saw_nonempty |= reps.len() == 1;
            report.push(reps.len());
        }
    }
    ensure!(saw_nonempty, "semistable locus empty for every parameter");
    let bad = filtered(points(&l, &f, &[2, 1, 2]));
    ensure!(bad.is_empty(), "filtered points exist for (2,1,2)");
    Ok(format!(
        "{} filtered points of (1,2,2); classes per parameter {report:?}; (2,1,2) empty",
        pts.len()
    ))
}

// 10 ---------------------------------------------------------------------

fn random_presentation<F: Field, R: Rng>(
    l: &Arc<LadderQuiver>,
    f: &F,
    rng: &mut R,
    theta: &[i64],
    c: Convention,
) -> Presentation<F> {
    let (mut u0, mut u1) = admissible_multiplicities(theta, c, 1);
    for w in 0..u0.len() {
        let extra = rng.gen_range(0..=1);
        u0[w] += extra;
        u1[w] += extra;
    }
    let rows: Vec<usize> = u1.iter().enumerate().flat_map(|(w, &k)| std::iter::repeat_n(w, k)).collect();
    let cols: Vec<usize> = u0.iter().enumerate().flat_map(|(w, &k)| std::iter::repeat_n(w, k)).collect();
    let gamma = rows
        .iter()
        .map(|&r| {
            cols.iter()
                .map(|&s| {
                    let mut e = PathElement::zero(f, s, r);
                    for p in normal_paths(l, s, r) {
                        let t = PathElement::from_path(f, l, p, f.from_i64(rng.gen_range(-2..=2)));
                        e = e.add(&t).unwrap();
                    }
                    e
                })
                .collect()
        })
        .collect();
    Presentation::new(l.clone(), f.clone(), u0, u1, gamma).unwrap()
}

fn invariance_trials<F: Field>(f: &F, seed: u64) -> Result<(usize, usize), String> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let ls = [ladder(Quiver::trivial(), 2), ladder(Quiver::trivial(), 3), a2a2()];
    let (mut trials, mut nonzero) = (0, 0);
    while trials < 500 {
        let l = &ls[trials % ls.len()];
        let m = random_rep(l, f, &mut rng, 2, 3);
        let deg: Vec<i64> = (0..l.num_vertices()).map(|_| rng.gen_range(-1..=1)).collect();
        let p = StabilityParams::new(deg, RankWeights::ones(l));
        if p.rank_of(m.dims()) == 0 {
            continue;
        }
        let c = if rng.gen_bool(0.5) { Convention::SubNonneg } else { Convention::SubNonpos };
        let theta = p.theta(m.dims());
        if theta.iter().map(|t| t.abs()).sum::<i64>() > 8 {
            continue;
        }
        trials += 1;
        let pres = random_presentation(l, f, &mut rng, &theta, c);
        ensure!(weight_pairing(&pres, m.dims()) == 0, "admissible multiplicities give a non-square matrix");
        let g = random_group_element(f, &mut rng, m.dims(), 3);
        let ginv: Vec<Matrix<F>> = g.iter().map(|x| x.inverse().unwrap()).collect();
        let base = ok(theta_value(&pres, &m))?;
        let chi = ok(chi_u(&pres, &g))?;
        let moved = ok(theta_value(&pres, &ok(m.act(&ginv))?))?;
        ensure!(moved == f.mul(&chi, &base), "Θ_γ(g⁻¹·M) != χ_U(g)Θ_γ(M)");
        let forward = ok(theta_value(&pres, &ok(m.act(&g))?))?;
        ensure!(f.mul(&chi, &forward) == base, "χ_U(g)Θ_γ(g·M) != Θ_γ(M)");
        // empty determinants are 1 and say nothing
        nonzero += usize::from(!f.is_zero(&base) && !pres.row_slots().is_empty());
    }
    Ok((trials, nonzero))
}

fn all_single_path_gammas<F: FiniteField>(
    l: &Arc<LadderQuiver>,
    f: &F,
    u0: Vec<usize>,
    u1: Vec<usize>,
    limit: usize,
) -> Option<Vec<Presentation<F>>> {
    let rows: Vec<usize> = u1.iter().enumerate().flat_map(|(w, &k)| std::iter::repeat_n(w, k)).collect();
    let cols: Vec<usize> = u0.iter().enumerate().flat_map(|(w, &k)| std::iter::repeat_n(w, k)).collect();
    let mut options: Vec<Vec<PathElement<F>>> = Vec::new();
    for &r in &rows {
        for &s in &cols {
            let mut o = vec![PathElement::zero(f, s, r)];
            for p in normal_paths(l, s, r) {
                for x in f.elements().into_iter().filter(|x| !f.is_zero(x)) {
                    o.push(PathElement::from_path(f, l, p.clone(), x));
                }
            }
            options.push(o);
        }
    }
    let total = options.iter().try_fold(1usize, |acc, o| acc.checked_mul(o.len()))?;
    if total > limit {
        return None;
    }
    let mut out = Vec::with_capacity(total);
    for code in 0..total {
        let mut c = code;
        let mut flat = Vec::with_capacity(options.len());
        for o in &options {
            flat.push(o[c % o.len()].clone());
            c /= o.len();
        }
        let gamma = (0..rows.len())
            .map(|r| flat[r * cols.len()..(r + 1) * cols.len()].to_vec())
            .collect();
        out.push(Presentation::new(l.clone(), f.clone(), u0.clone(), u1.clone(), gamma).unwrap());
    }
    Some(out)
}

fn c10_semi_invariants() -> Outcome {
    let (tq, nq) = invariance_trials(&Rationals, 100)?;
    let (tp, np) = invariance_trials(&PrimeField::new(7).unwrap(), 101)?;
    ensure!(nq > 0 && np > 0, "no nonvanishing values exercised");

    // soundness: every nonvanishing admissible Θ_γ sits on a semistable point
    let f2 = PrimeField::new(2).unwrap();
    let mut certified = 0;
    let mut evaluated = 0;
    let cases: Vec<(Arc<LadderQuiver>, Vec<Vec<usize>>, Vec<Vec<i64>>)> = vec![
        (
            ladder(Quiver::trivial(), 2),
            dim_vectors(2, 2).into_iter().filter(|d| d[1] > 0).collect(),
            vec![vec![1, -1], vec![-1, 1], vec![0, 0], vec![2, -1]],
        ),
        (a2a2(), vec![vec![1, 1, 1, 1]], vec![vec![1, 1, 0, -1], vec![0, 1, -1, 0], vec![1, 0, 0, -1]]),
    ];
    for (l, dims, degs) in cases {
        for d in dims {
            let pts = points(&l, &f2, &d);
            for deg in &degs {
                for c in Convention::BOTH {
                    let p = StabilityParams::new(deg.clone(), RankWeights::ones(&l)).with_convention(c);
                    let theta = p.theta(&d);
                    for n in 1..=2 {
                        let (u0, u1) = admissible_multiplicities(&theta, c, n);
                        let Some(gammas) = all_single_path_gammas(&l, &f2, u0, u1, 1 << 12) else { continue };
                        for g in &gammas {
                            ensure!(weight_check(g, &p, &d, n), "enumerated γ is not admissible");
                            for m in &pts {
                                evaluated += 1;
                                if !f2.is_zero(&ok(theta_value(g, m))?) {
                                    certified += 1;
                                    ensure!(ok(verdict(m, &p))?.semistable, "certificate on an unstable point");
                                }
                            }
                        }
                    }
                }
            }
        }
    }
    ensure!(certified > 0, "no certificate was exercised");

    // u_k = 0 for the summands of polystable objects
    let f3 = PrimeField::new(3).unwrap();
    let mut polys = 0;
    for (l, dims, deg) in [
        (ladder(Quiver::trivial(), 2), vec![vec![1, 1], vec![0, 1], vec![1, 2]], vec![1, -1]),
        (a2a2(), vec![vec![1, 1, 1, 1], vec![0, 0, 1, 1], vec![0, 1, 0, 1], vec![1, 0, 1, 1]], vec![1, 1, 0, -1]),
    ] {
        let p = StabilityParams::new(deg, RankWeights::ones(&l));
        let mut stable: Vec<Representation<PrimeField>> = Vec::new();
        for d in &dims {
            for m in filtered(points(&l, &f3, d)) {
                if ok(verdict(&m, &p))?.stable {
                    stable.push(m);
                }
            }
        }
        for (i, a) in stable.iter().enumerate() {
            for b in &stable[i..] {
                if ok(p.slope(a.dims()))? != ok(p.slope(b.dims()))? {
                    continue;
                }
                let m = ok(a.direct_sum(b))?;
                ensure!(ok(is_polystable(&m, &p))?, "sum of stables of one slope is not polystable");
                let theta = p.theta(m.dims());
                for c in Convention::BOTH {
                    for n in 1..=3 {
                        let (u0, u1) = admissible_multiplicities(&theta, c, n);
                        let pres = Presentation::new(l.clone(), f3, u0, u1, zero_gamma(&f3, &theta, c, n))
                            .map_err(|e| e.to_string())?;
                        for s in [a, b] {
                            ensure!(weight_pairing(&pres, s.dims()) == 0, "u_k != 0");
                        }
                    }
                }
                polys += 1;
            }
        }
    }
    ensure!(polys > 0, "no polystable instance was constructed");
    Ok(format!(
        "invariance {tq} over Q ({nq} nonzero), {tp} over F7 ({np} nonzero); \
         {certified} nonzero of {evaluated} evaluations all semistable; u_k on {polys} polystables"
    ))
}

fn zero_gamma<F: Field>(
    f: &F,
    theta: &[i64],
    c: Convention,
    n: i64,
) -> Vec<Vec<PathElement<F>>> {
    let (u0, u1) = admissible_multiplicities(theta, c, n);
    let rows: Vec<usize> = u1.iter().enumerate().flat_map(|(w, &k)| std::iter::repeat_n(w, k)).collect();
    let cols: Vec<usize> = u0.iter().enumerate().flat_map(|(w, &k)| std::iter::repeat_n(w, k)).collect();
    rows.iter()
        .map(|&r| cols.iter().map(|&s| PathElement::zero(f, s, r)).collect())
        .collect()
}

// 11 ---------------------------------------------------------------------

const FIXTURE: &str = concat!(env!("CARGO_MANIFEST_DIR"), "/tests/fixtures/a2xa2_verdicts.txt");

fn c11_adjudication() -> Outcome {
    let f = PrimeField::new(3).unwrap();
    let l = a2a2();
    let d = [1, 1, 1, 2];
    // paper order (v1, v2, w1, w2) is level-major (v1, w1, v2, w2) here
    let deg = vec![1, 1, 0, -1];
    let pts = points(&l, &f, &d);
    let b1 = l.beta(1, 0);
    let b2 = l.beta(1, 1);
    type Decide = Box<dyn Fn(&Representation<PrimeField>) -> filquiv::Result<bool>>;
    let mut configs: Vec<(String, Decide)> = Vec::new();
    for c in Convention::BOTH {
        for (rk_name, rk) in [("ones", RankWeights::ones(&l)), ("sink", RankWeights::sink(&l))] {
            let p = StabilityParams::new(deg.clone(), rk).with_convention(c);
            configs.push((format!("{c}/{rk_name}"), Box::new(move |m| Ok(verdict(m, &p)?.semistable))));
        }
    }
    // supplementary columns: strict subobjects only, and Θ itself used as King's θ
    for c in Convention::BOTH {
        let p = StabilityParams::new(deg.clone(), RankWeights::ones(&l))
            .with_convention(c)
            .with_mode(SubMode::Strict);
        configs.push((format!("{c}/ones/strict"), Box::new(move |m| Ok(verdict(m, &p)?.semistable))));
        let king = deg.clone();
        configs.push((
            format!("{c}/king"),
            Box::new(move |m| theta_test(m, &king, c, SubMode::All, DEFAULT_SUBREP_CAP, false)),
        ));
    }
    let mut table = String::new();
    let mut summary = String::new();
    let mut matching = Vec::new();
    let mut rows: Vec<(String, bool, Vec<bool>)> = Vec::new();
    for m in &pts {
        let inj = m.mat(b1).rank() == 1 && m.mat(b2).rank() == 1;
        let key: String = m
            .mats()
            .iter()
            .map(|a| a.entries().iter().map(|x| x.to_string()).collect::<Vec<_>>().join(""))
            .collect::<Vec<_>>()
            .join("|");
        let mut v = Vec::new();
        for (_, decide) in &configs {
            v.push(ok(decide(m))?);
        }
        rows.push((key, inj, v));
    }
    for (i, (name, _)) in configs.iter().enumerate() {
        let ss = rows.iter().filter(|r| r.2[i]).count();
        let mism = rows.iter().filter(|r| r.2[i] != r.1).count();
        writeln!(summary, "config {name}: semistable={ss} mismatches={mism}").unwrap();
        if mism == 0 {
            matching.push(name.clone());
        }
    }
    let inj = rows.iter().filter(|r| r.1).count();
    writeln!(table, "# A2xA2 over F3, d=(1,1,1,2) level-major, Θ=(1,1,0,-1) level-major").unwrap();
    let names: Vec<&str> = configs.iter().map(|c| c.0.as_str()).collect();
    writeln!(table, "# columns: arrow matrices | β1β2 injective | {}", names.join(" ")).unwrap();
    writeln!(table, "points={} injective={inj}", rows.len()).unwrap();
    table.push_str(&summary);
    writeln!(table, "matching={}", if matching.is_empty() { "none".into() } else { matching.join(",") }).unwrap();
    for (k, inj, v) in &rows {
        let flags: String = v.iter().map(|&b| if b { '1' } else { '0' }).collect();
        writeln!(table, "{k} {} {flags}", u8::from(*inj)).unwrap();
    }
    if std::env::var_os("FILQUIV_BLESS").is_some() {
        std::fs::create_dir_all(std::path::Path::new(FIXTURE).parent().unwrap()).unwrap();
        std::fs::write(FIXTURE, &table).unwrap();
    }
    let frozen = std::fs::read_to_string(FIXTURE).map_err(|e| format!("fixture missing: {e}"))?;
    ensure!(frozen == table, "verdict table differs from the frozen fixture");
    Ok(format!(
        "{} points, {inj} with β1, β2 injective; configurations reproducing the claim: {}",
        rows.len(),
        if matching.is_empty() { "none".into() } else { matching.join(", ") }
    ))
}

// ------------------------------------------------------------------------

fn main() {
    std::panic::set_hook(Box::new(|_| {}));
    let criteria: Vec<(&str, fn() -> Outcome)> = vec![
        ("ladder counting", c1_ladder_counting),
        ("torsion and kappa", c2_torsion_kappa),
        ("resolution identities", c3_resolution),
        ("rk_dim coincidence", c4_rank),
        ("mu/theta equivalence", c5_mu_theta),
        ("Hilbert-Mumford cross-check", c6_hilbert_mumford),
        ("HN/JH suite", c7_hn_jh),
        ("closed orbits", c8_closed_orbits),
        ("trivial-quiver moduli point", c9_moduli_point),
        ("semi-invariant laws", c10_semi_invariants),
        ("A2xA2 example adjudication", c11_adjudication),
        ("Yoneda property", c12_yoneda),
    ];
    let only: Option<BTreeSet<usize>> = std::env::args()
        .skip(1)
        .filter(|a| !a.starts_with('-'))
        .map(|a| a.parse().ok())
        .collect::<Option<BTreeSet<usize>>>()
        .filter(|s| !s.is_empty());
    let results: Vec<(usize, &str, Outcome, f64)> = std::thread::scope(|s| {
        let handles: Vec<_> = criteria
            .iter()
            .enumerate()
            .filter(|(i, _)| only.as_ref().is_none_or(|o| o.contains(&(i + 1))))
            .map(|(i, (name, run))| {
                s.spawn(move || {
                    let t = Instant::now();
                    let r = catch_unwind(AssertUnwindSafe(run)).unwrap_or_else(|e| {
                        Err(e
                            .downcast_ref::<String>()
                            .cloned()
                            .or_else(|| e.downcast_ref::<&str>().map(|s| s.to_string()))
                            .unwrap_or_else(|| "panic".into()))
                    });
                    (i + 1, *name, r, t.elapsed().as_secs_f64())
                })
            })
            .collect();
        handles.into_iter().map(|h| h.join().unwrap()).collect()
    });
    let mut failed = 0;
    for (i, name, r, secs) in &results {
        match r {
            Ok(detail) => println!("PASS criterion {i:>2} ({name}) [{secs:.1}s]: {detail}"),
            Err(why) => {
                failed += 1;
                println!("FAIL criterion {i:>2} ({name}) [{secs:.1}s]: {why}");
            }
        }
    }
    if failed > 0 {
        std::process::exit(1);
    }
}
