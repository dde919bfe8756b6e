//! Acceptance run: one PASS/FAIL line per criterion, nonzero exit on failure.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

mod common;

use std::collections::{BTreeSet, HashSet};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::time::{Duration, Instant};

use common::*;
use gzorbit_core::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

type C = Complex64;
type Outcome = std::result::Result<String, String>;

macro_rules! ensure {
    ($cond:expr, $($fmt:tt)+) => {
        if !$cond {
            return Err(format!($($fmt)+));
        }
    };
}

fn ok<T>(r: Result<T>, what: &str) -> std::result::Result<T, String> {
    r.map_err(|e| format!("{what}: {e}"))
}

fn fspec(s: &Spectrum<Q>) -> Spectrum<C> {
    Spectrum::new(s.roots().iter().map(|(r, m)| (r.to_c64(), *m)).collect(), &Tolerance::default()).unwrap()
}

fn frob<S: Scalar>(x: &Mat<S>) -> f64 {
    x.as_vector().iter().map(|v| v.magnitude().powi(2)).sum::<f64>().sqrt()
}

fn rand_c(rng: &mut impl Rng) -> C {
    C::new(rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0))
}

/// Three random flow steps, times scaled so `t j x_i^{j-1}` stays O(1).
fn rand_word(rng: &mut impl Rng, x: &Mat<C>, reach: f64) -> Vec<FlowStep<C>> {
    let n = x.n();
    (0..3)
        .map(|_| {
            let i = rng.random_range(1..n);
            let j = rng.random_range(1..=i);
            let size = frob(&x.cutoff(i).unwrap()).max(1.0).powi(j as i32 - 1) * j as f64;
            FlowStep::new(i, j, rand_c(rng) * (reach / size))
        })
        .collect()
}

fn x_generic() -> Mat<Q> {
    Mat::from_i64(&[&[1, 2, 16], &[1, 0, 4], &[0, 1, -3]])
}

fn nsreg(x2: Q, x3: Q, y1: Q) -> Mat<Q> {
    let mut x = Mat::<Q>::zeros(4);
    x.set(1, 0, q(1));
    x.set(2, 1, q(1));
    x.set(1, 3, x2);
    x.set(2, 3, x3);
    x.set(3, 0, y1);
    x
}

fn c1_generic_pipeline() -> Outcome {
    let tol = Tolerance::default();
    let x = x_generic();
    let c = phi(&x);
    let expect: Vec<Spectrum<Q>> = [vec![1], vec![2, -1], vec![3, -2, -3]]
        .iter()
        .map(|r| Spectrum::new(r.iter().map(|&v| (q(v), 1)).collect(), &tol).unwrap())
        .collect();
    ensure!(ok(c.spectra(&tol), "spectra")? == expect, "level spectra differ");
    let class = ok(fiber_class(&c, &tol), "fiber_class")?;
    ensure!(class.kind == FiberKind::Omega && class.j == vec![0, 0], "class {class:?}");
    ensure!(ok(orbit_count(&c, &tol), "orbit_count")? == 1, "orbit count");
    let r = sreg_report(&x, &tol);
    ensure!(r.via_differentials && r.via_centralizers && r.via_tangent(), "strong regularity {r:?}");
    ensure!(ok(hessenberg_from_spec(&c), "hessenberg")? == x, "Hessenberg section differs from x");
    ensure!(ok(classify(&x, &tol), "classify")?.label_count() == 0, "classify not empty");
    Ok("spectra {1} {2,-1} {3,-2,-3}; omega; 1 orbit; sreg x3; section = x".into())
}

fn c2_hessenberg_round_trip() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(2);
    let mut worst: f64 = 0.0;
    for trial in 0..100 {
        let n = rng.random_range(1..=6);
        let levels: Vec<MonicPoly<C>> = (1..=n)
            .map(|d| {
                if trial % 2 == 0 {
                    MonicPoly::new((0..d).map(|_| rand_c(&mut rng)).collect())
                } else {
                    // from roots in the unit box
                    (0..d).fold(MonicPoly::one(), |p, _| p.mul(&MonicPoly::linear(rand_c(&mut rng))))
                }
            })
            .collect();
        let c = GZSpec::new(levels).unwrap();
        let h = ok(hessenberg_from_spec(&c), "hessenberg")?;
        worst = worst.max(c.rel_error(&phi(&h)));
    }
    ensure!(worst <= 1e-8, "max relative error {worst:.3e}");
    Ok(format!("100 float labels, max relative error {worst:.2e}"))
}

fn rand_point(rng: &mut impl Rng) -> SolutionPoint<Q> {
    let tol = Tolerance::default();
    if rng.random_bool(0.2) {
        // one nilpotent block
        let m = rng.random_range(1..=5);
        let b = SolutionBlock {
            lambda: Q::zero(),
            mult: m,
            z: (0..m).map(|_| rand_q(rng, 3, 2, true)).collect(),
            y: (0..m).map(|_| rand_q(rng, 3, 2, true)).collect(),
        };
        return SolutionPoint::new(vec![b], rand_q(rng, 3, 2, true)).unwrap();
    }
    loop {
        let k = rng.random_range(1..=3);
        let roots: Vec<(Q, usize)> = (0..k).map(|_| (rand_q(rng, 4, 3, true), rng.random_range(1..=5))).collect();
        let s = Spectrum::new(roots, &tol).unwrap();
        if s.degree() > 9 || s.max_mult() > 5 {
            continue;
        }
        let blocks = s
            .roots()
            .iter()
            .map(|(l, m)| SolutionBlock {
                lambda: l.clone(),
                mult: *m,
                z: (0..*m).map(|_| if rng.random_bool(0.2) { Q::zero() } else { rand_q(rng, 3, 2, true) }).collect(),
                y: (0..*m).map(|_| if rng.random_bool(0.2) { Q::zero() } else { rand_q(rng, 3, 2, true) }).collect(),
            })
            .collect();
        return SolutionPoint::new(blocks, rand_q(rng, 3, 2, true)).unwrap();
    }
}

fn c3_charpoly_formula() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    let mut max_block = 0;
    let mut max_level = 0;
    for k in 0..200 {
        let p = rand_point(&mut rng);
        max_block = max_block.max(p.blocks.iter().map(|b| b.mult).max().unwrap());
        max_level = max_level.max(p.level);
        let oracle = cofactor_charpoly(&assemble(&p));
        ensure!(xi_charpoly(&p).full() == oracle, "point {k} (level {}) disagrees with the oracle", p.level);
    }
    Ok(format!("200 exact points, blocks up to {max_block}, bordered size up to {}", max_level + 1))
}

fn c4_nilfibre() -> Outcome {
    use Side::{Lower as L, Upper as U};
    let tol = Tolerance::default();
    let c = GZSpec::<Q>::zero(4);
    let reps = ok(enumerate_orbits(&c, &tol), "enumerate")?;
    ensure!(reps.len() == 8, "{} representatives", reps.len());
    let lower = lower_pattern(4);
    for (v, x) in &reps {
        let sides = v.sides();
        ensure!(phi(x) == c, "phi != 0 for {v}");
        ensure!(ok(is_strongly_regular(x, &tol), "sreg")?, "{v} not strongly regular");
        ensure!(within_pattern(x, &nil_pattern(&sides), &tol), "{v} leaves its pattern");
        ensure!(ok(classify(x, &tol), "classify")? == *v, "classify({v}) differs");
        ensure!(permute_pattern(&lower, &nil_permutation(&sides)) == nil_pattern(&sides), "{v} permutation");
    }
    let llu = nil_permutation(&[L, L, U]);
    ensure!(llu.one_line() == [4, 1, 2, 3] && llu.cycles() == "(1432)", "LLU permutation {:?}", llu.one_line());
    let expect: BTreeSet<(usize, usize)> = [(1, 4), (2, 1), (2, 4), (3, 1), (3, 2), (3, 4)].into();
    ensure!(nil_pattern(&[L, L, U]) == expect, "LLU pattern");
    ensure!(nil_permutation(&[L, L, L]).is_identity(), "LLL permutation");
    let v = ChoiceVector::from_sides(&vec![vec![Q::zero()]; 3], &[L, L, U]).unwrap();
    let x = ok(orbit_representative(&c, &v, &tol), "representative")?;
    ensure!(x == Mat::from_i64(&[&[0, 0, 0, 1], &[1, 0, 0, 0], &[0, 1, 0, 0], &[0, 0, 0, 0]]), "LLU representative");
    Ok("8 representatives: phi = 0, sreg, in pattern, round trip; LLU -> (1432)".into())
}

fn round_trip_fibre(spectra: Vec<Spectrum<Q>>, tol: &Tolerance) -> std::result::Result<usize, String> {
    let n = spectra.len();
    let c = GZSpec::from_spectra(spectra).unwrap();
    let count = ok(orbit_count(&c, tol), "orbit_count")?;
    let reps = ok(enumerate_orbits(&c, tol), "enumerate")?;
    ensure!(reps.len() as u128 == count, "{} representatives for {count} orbits", reps.len());
    let mut seen = HashSet::new();
    for (v, x) in &reps {
        ensure!(phi(x) == c, "phi mismatch for {v}");
        let r = sreg_report(x, tol);
        ensure!(r.via_differentials && r.agree(), "{v} not strongly regular");
        ensure!(r.tangent_dim == n * (n - 1) / 2, "{v} tangent dim {}", r.tangent_dim);
        let back = ok(classify(x, tol), "classify")?;
        ensure!(back == *v, "classify gave {back} for {v}");
        ensure!(seen.insert(back.to_string()), "duplicate label {v}");
    }
    Ok(reps.len())
}

fn c5_degenerate_census() -> Outcome {
    let tol = Tolerance::default();
    let first = round_trip_fibre(staircase(), &tol)?;
    ensure!(first == 8, "staircase has {first} orbits");
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    let mut total = 0;
    for _ in 0..10 {
        let n = rng.random_range(2..=5);
        total += round_trip_fibre(degenerate_spectra(&mut rng, n, 5), &tol)?;
    }
    Ok(format!("staircase 8 orbits; 10 random fibres, {total} orbits, all round trips distinct"))
}

fn c6_flows() -> Outcome {
    let tol = Tolerance::default();
    let mut rng = ChaCha8Rng::seed_from_u64(6);
    let (mut drift, mut comm, mut fd): (f64, f64, f64) = (0.0, 0.0, 0.0);
    let h = 1e-4;
    for _ in 0..100 {
        let n = rng.random_range(2..=5);
        let raw = Mat::from_fn(n, |_, _| rand_c(&mut rng));
        let x = raw.scaled(&C::new(1.0 / frob(&raw), 0.0));
        let w = rand_word(&mut rng, &x, 0.5);
        let y = ok(flow_word(&x, &w), "flow")?;
        let c = phi(&x);
        drift = drift.max(c.rel_error(&phi(&y)));
        let rev: Vec<FlowStep<C>> = w.iter().rev().cloned().collect();
        let y2 = ok(flow_word(&x, &rev), "flow")?;
        comm = comm.max(y.max_abs_diff(&y2) / y.scale());
        for s in &w {
            let plus = ok(flow(&x, &FlowStep::new(s.i, s.j, C::new(h, 0.0))), "flow")?;
            let minus = ok(flow(&x, &FlowStep::new(s.i, s.j, C::new(-h, 0.0))), "flow")?;
            let diff = (&plus - &minus).scaled(&C::new(0.5 / h, 0.0));
            let v = ok(vector_field(&x, s.i, s.j), "vector_field")?;
            fd = fd.max(diff.max_abs_diff(&v) / x.scale());
        }
    }
    ensure!(drift <= 1e-8, "phi drift {drift:.3e}");
    ensure!(comm <= 1e-8, "commutativity residual {comm:.3e}");
    ensure!(fd <= 1e-6, "finite difference error {fd:.3e}");

    // classification along flows, seeded by representatives with simple roots
    let mut seeds: Vec<Vec<Spectrum<Q>>> = vec![staircase()];
    while seeds.len() < 6 {
        let n = rng.random_range(3..=4);
        let s = degenerate_spectra(&mut rng, n, 3);
        if s.iter().all(|l| l.is_squarefree()) {
            seeds.push(s);
        }
    }
    let mut checked = 0;
    for spectra in seeds {
        let c = GZSpec::from_spectra(spectra.clone()).unwrap();
        let fs: Vec<Spectrum<C>> = spectra.iter().map(fspec).collect();
        for (v, x) in ok(enumerate_orbits(&c, &tol), "enumerate")? {
            let xf = x.to_float();
            let base = ok(classify_with_spectra(&xf, &fs, &tol), "classify seed")?;
            ensure!(base.sides() == v.sides(), "float classify of seed {v} gave {base}");
            for _ in 0..3 {
                let w = rand_word(&mut rng, &xf, 0.5);
                let y = ok(flow_word(&xf, &w), "flow")?;
                let got = ok(classify_with_spectra(&y, &fs, &tol), "classify along flow")?;
                ensure!(got == base, "label changed along a flow: {base} -> {got}");
                checked += 1;
            }
        }
    }
    Ok(format!(
        "drift {drift:.1e}, commutativity {comm:.1e}, finite difference {fd:.1e}; {checked} flowed labels unchanged"
    ))
}

fn c7_sreg_equivalence() -> Outcome {
    let tol = Tolerance::default();
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    let mut nil_reps: Vec<Mat<Q>> = Vec::new();
    for n in 2..=5 {
        nil_reps.extend(enumerate_orbits(&GZSpec::<Q>::zero(n), &tol).unwrap().into_iter().map(|(_, x)| x));
    }
    let (mut yes, mut no, mut fam) = (0, 0, 0);
    for k in 0..500 {
        let n = rng.random_range(2..=5);
        let x = match k % 6 {
            0 => {
                let c = GZSpec::from_spectra((1..=n).map(|i| rand_int_spectrum(&mut rng, i, 2)).collect()).unwrap();
                hessenberg_from_spec(&c).unwrap()
            }
            1 => nil_reps[rng.random_range(0..nil_reps.len())].clone(),
            2 => {
                let nz = |rng: &mut ChaCha8Rng| loop {
                    let v = rand_q(rng, 4, 3, true);
                    if !v.is_exact_zero() {
                        break v;
                    }
                };
                let (x2, y1) = (nz(&mut rng), nz(&mut rng));
                let x = nsreg(x2, rand_q(&mut rng, 4, 3, true), y1);
                let r = sreg_report(&x, &tol);
                ensure!(
                    r.centralizers.cutoff_regular.iter().all(|&b| b)
                        && r.centralizers.first_intersection_failure() == Some(4),
                    "family member {k} does not fail only at level 4: {r:?}"
                );
                fam += 1;
                x
            }
            3 => {
                let c = GZSpec::from_spectra(degenerate_spectra(&mut rng, n, 3)).unwrap();
                let reps = enumerate_orbits(&c, &tol).unwrap();
                let mut x = reps[rng.random_range(0..reps.len())].1.clone();
                let (r, col) = (rng.random_range(0..n), rng.random_range(0..n));
                x.set(r, col, x.get(r, col).clone() + q(rng.random_range(-1..=1)));
                x
            }
            4 => Mat::from_fn(n, |_, _| if rng.random_bool(0.5) { Q::zero() } else { q(rng.random_range(-1..=1)) }),
            _ => rand_int_mat(&mut rng, n, 2),
        };
        let r = sreg_report(&x, &tol);
        ensure!(r.agree(), "matrix {k} ({n}x{n}): tests disagree {r:?}");
        if r.via_differentials {
            yes += 1;
        } else {
            no += 1;
        }
    }
    Ok(format!("500 matrices agree ({yes} sreg, {no} not); {fam} family members fail only at level 4"))
}

fn c8_stabilizers() -> Outcome {
    let tol = Tolerance::default();
    let mut rng = ChaCha8Rng::seed_from_u64(8);
    for _ in 0..20 {
        let i = rng.random_range(1..=6);
        let s = rand_int_spectrum(&mut rng, i, 2);
        let st = stabilizer_pattern(&SolutionPoint::zero_border(&s), &tol);
        ensure!(st.blocks.iter().all(|b| matches!(b, BlockStabilizer::Full(_))) && st.dim() == i, "zero border {st:?}");
    }
    for m in 2..=5 {
        for _ in 0..5 {
            let mut z: Vec<Q> = (0..m).map(|_| rand_q(&mut rng, 3, 2, true)).collect();
            let mut y: Vec<Q> = (0..m).map(|_| rand_q(&mut rng, 3, 2, true)).collect();
            z[0] = Q::zero();
            y[m - 1] = Q::zero();
            if z.iter().chain(&y).all(|v| v.is_exact_zero()) {
                y[0] = q(1);
            }
            let p = SolutionPoint::new(vec![SolutionBlock { lambda: Q::zero(), mult: m, z, y }], Q::zero()).unwrap();
            let st = stabilizer_pattern(&p, &tol);
            ensure!(matches!(st.blocks[0], BlockStabilizer::Unipotent(d) if d >= 1), "z1 = ym = 0 gave {st:?}");
        }
    }
    let (mut solved, mut shared_total) = (0, 0);
    while solved < 100 {
        let i = rng.random_range(1..=5);
        let spec = rand_int_spectrum(&mut rng, i, 2);
        let target = rand_int_spectrum(&mut rng, i + 1, 2).poly();
        let shared = common_roots(&spec, &ok(target_spectrum(&target, &tol), "split")?, &tol);
        let choice = BlockChoice::new(
            shared
                .iter()
                .map(|r| (r.clone(), if rng.random_bool(0.5) { Side::Upper } else { Side::Lower }))
                .collect(),
        );
        let params: Vec<Option<Vec<Q>>> = spec
            .roots()
            .iter()
            .map(|(l, m)| {
                let side = choice.entries.iter().find(|(r, _)| r == l).map(|e| e.1).unwrap_or(Side::Lower);
                let mut v: Vec<Q> = (0..*m).map(|_| rand_q(&mut rng, 3, 2, true)).collect();
                let lead = if side == Side::Lower { 0 } else { m - 1 };
                if v[lead].is_exact_zero() {
                    v[lead] = q(1);
                }
                Some(v)
            })
            .collect();
        let p = ok(xi_solve(&spec, &target, &choice, &params, &tol), "xi_solve")?;
        ensure!(xi_charpoly(&p) == target, "solved point misses its target");
        let st = stabilizer_pattern(&p, &tol);
        ensure!(st.dim() == 0 && is_free(&p, &tol), "solved point not free: {st:?}");
        ensure!(assemble(&p).is_regular(&tol), "free point with irregular bordered matrix");
        shared_total += shared.len();
        solved += 1;
    }
    Ok(format!("zero borders full; z1 = ym = 0 unipotent; 100 solved points free and regular ({shared_total} shared roots)"))
}

fn target_spectrum(p: &MonicPoly<Q>, tol: &Tolerance) -> Result<Spectrum<Q>> {
    spectrum_from_poly(p, tol)
}

fn c9_poisson() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(9);
    let idx: Vec<(usize, usize)> = (1..=4).flat_map(|i| (1..=i).map(move |j| (i, j))).collect();
    let mut pairs = 0;
    for _ in 0..50 {
        let x = Mat::from_fn(4, |_, _| rand_q(&mut rng, 5, 3, true));
        for a in &idx {
            for b in &idx {
                let r = ok(poisson_bracket_residual(&x, *a, *b), "bracket")?;
                ensure!(r.is_exact_zero(), "bracket {a:?} {b:?} = {r}");
                pairs += 1;
            }
        }
    }
    Ok(format!("{pairs} brackets exactly zero"))
}

fn c10_theta() -> Outcome {
    let tol = Tolerance::default();
    let mut rng = ChaCha8Rng::seed_from_u64(10);
    let mut tested = 0;
    for _ in 0..10 {
        let n = rng.random_range(2..=5);
        let exact = GZSpec::from_spectra(theta_spectra(&mut rng, n)).unwrap();
        let c = exact.to_float();
        let class = ok(fiber_class(&c, &tol), "fiber_class")?;
        ensure!(class.kind == FiberKind::ThetaOnly, "class {class:?}");
        ensure!(ok(orbit_count(&c, &tol), "orbit_count")? == 1, "orbit count");
        let hx = ok(hessenberg_from_spec(&c), "hessenberg")?;
        for k in 0..6 {
            let y = if k == 0 {
                hx.clone()
            } else {
                let w = rand_word(&mut rng, &hx, 0.5);
                ok(flow_word(&hx, &w), "flow")?
            };
            ensure!(ok(is_strongly_regular(&y, &tol), "sreg")?, "fibre element not strongly regular");
            ensure!(ok(classify(&y, &tol), "classify")?.label_count() == 0, "nonempty label");
            tested += 1;
        }
    }
    Ok(format!("10 fibres, {tested} elements strongly regular with the unique label"))
}

type Criterion = (&'static str, fn() -> Outcome, Duration);

fn main() {
    let criteria: [Criterion; 10] = [
        ("generic 3x3 pipeline", c1_generic_pipeline, Duration::from_secs(1)),
        ("Hessenberg round trip", c2_hessenberg_round_trip, Duration::from_secs(10)),
        ("bordered charpoly formula", c3_charpoly_formula, Duration::from_secs(10)),
        ("nilfibre n = 4", c4_nilfibre, Duration::from_secs(1)),
        ("degenerate census", c5_degenerate_census, Duration::from_secs(30)),
        ("flow conservation", c6_flows, Duration::from_secs(30)),
        ("strong-regularity equivalence", c7_sreg_equivalence, Duration::from_secs(60)),
        ("stabilizer structure", c8_stabilizers, Duration::from_secs(10)),
        ("Poisson commutativity", c9_poisson, Duration::from_secs(10)),
        ("transitivity on disjoint fibres", c10_theta, Duration::from_secs(30)),
    ];
    let mut failed = 0;
    for (k, (name, run, limit)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let outcome = catch_unwind(AssertUnwindSafe(run)).unwrap_or_else(|_| Err("panicked".into()));
        let took = start.elapsed();
        let (ok, detail) = match outcome {
            Ok(d) if took <= *limit => (true, d),
            Ok(d) => (false, format!("{d}; too slow")),
            Err(e) => (false, e),
        };
        if !ok {
            failed += 1;
        }
        println!(
            "criterion {:>2} {} {name} ({:.2}s / {}s): {detail}",
            k + 1,
            if ok { "PASS" } else { "FAIL" },
            took.as_secs_f64(),
            limit.as_secs()
        );
    }
    if failed > 0 {
        println!("{failed} criteria failed");
        std::process::exit(1);
    }
    println!("all 10 criteria passed");
}
