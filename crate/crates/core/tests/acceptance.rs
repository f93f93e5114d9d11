//! Acceptance gate. Prints one `PASS`/`FAIL` line per criterion and exits
//! non-zero if any criterion fails.
//!
//! Expected values come from closed forms or from brute-force oracles written
//! here, never from the code under test.

use std::panic::{catch_unwind, AssertUnwindSafe};
use std::time::{Duration, Instant};

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use regroup::dynamics::{bijection_check, periodic_point_scan};
use regroup::maps::random::random_homeo;
use regroup::maps::{Bound, PartitionScheme, Piece};
use regroup::{
    check_conjugacy, example_map, monotone_to_shift, normalize, q, round_trip, shift_obstruction, three_piece_map,
    unique_fixed_point, Bijection, Error, GroupDescriptor, GroupMap, HPolicy, Homeo, Rational, Role, TransportedGroup,
    Valuation, Verdict, Window,
};

type Outcome = Result<String, String>;
type Criterion = (&'static str, fn() -> Outcome);

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn z() -> GroupDescriptor {
    GroupDescriptor::integers()
}

fn dyadic_k4() -> Window {
    Window::with_exponent(q("-2"), q("2"), 4).unwrap()
}

/// For affine `h(x) = a·x + b` the transported sum is `x + y + b/a`.
fn affine_sum(a: &Rational, b: &Rational, x: &Rational, y: &Rational) -> Rational {
    x + y + b.checked_div(a).unwrap()
}

fn axioms() -> Outcome {
    let start = Instant::now();
    let zw = Window::symmetric(20);
    let cases = [
        (z(), zw.clone(), "1", "0"),
        (z(), zw.clone(), "1", "-1"),
        (z(), zw, "-1", "0"),
        (GroupDescriptor::dyadic(), dyadic_k4(), "1", "0"),
        (GroupDescriptor::dyadic(), dyadic_k4(), "1", "-1"),
        (GroupDescriptor::dyadic(), dyadic_k4(), "-1", "0"),
        (GroupDescriptor::dyadic(), dyadic_k4(), "2", "0"),
    ];
    let mut triples = 0u64;
    for (g, w, a, b) in cases {
        let (a, b) = (q(a), q(b));
        let xs = g.enumerate_window(&w).unwrap();
        let min = if g.is_dense() { 65 } else { 41 };
        ensure(xs.len() >= min, || format!("{g} window has {} elements", xs.len()))?;
        let t = TransportedGroup::new(Homeo::affine(&g, a.clone(), b.clone()).unwrap()).unwrap();
        let suite = t.verify_axioms(&w).unwrap();
        ensure(suite.passed(), || format!("h = {a}x+{b} on {g}: {:?}", suite.first_counterexample()))?;
        let assoc = suite.checks.iter().find(|c| c.law == "associativity").unwrap();
        ensure(assoc.checked == (xs.len() as u64).pow(3), || "associativity was not exhaustive".into())?;
        triples += assoc.checked;
        for x in xs.iter().step_by(7) {
            for y in xs.iter().step_by(5) {
                let found = t.add(x, y).unwrap();
                ensure(found == affine_sum(&a, &b, x, y), || format!("h = {a}x+{b}: {x} ⊕ {y} = {found}"))?;
            }
        }
    }
    let elapsed = start.elapsed();
    ensure(elapsed < Duration::from_secs(10), || format!("took {elapsed:?}"))?;
    Ok(format!("{triples} triples, 0 failures, {:.2}s", elapsed.as_secs_f64()))
}

fn normal_form() -> Outcome {
    let f = Homeo::affine(&z(), q("-1"), q("2")).unwrap();
    let w = Window::symmetric(50);
    let nf = normalize(&f, &w, HPolicy::Canonical).unwrap();
    ensure(nf.passed(), || format!("{:?}", nf.checks))?;
    ensure(nf.e == q("1"), || format!("fixed point {}", nf.e))?;
    ensure(nf.transported.neutral() == &q("1"), || "neutral is not 1".into())?;
    let xs = z().enumerate_window(&w).unwrap();
    ensure(xs.len() == 101, || "window size".into())?;
    for x in &xs {
        for y in &xs {
            let s = nf.transported.add(x, y).unwrap();
            ensure(s == x + y - q("1"), || format!("{x} ⊕ {y} = {s}"))?;
        }
        let n = nf.transported.neg(x).unwrap();
        ensure(n == q("2") - x, || format!("⊖{x} = {n}"))?;
    }
    ensure(nf.inversion_check().checked == 101, || "inversion check count".into())?;

    let fold = Homeo::Pl(
        regroup::PLMap::new(
            GroupDescriptor::dyadic(),
            vec![
                Piece::new(Bound::NegInf, Bound::Finite(q("0")), q("-2"), q("0")),
                Piece::new(Bound::Finite(q("0")), Bound::PosInf, q("-1/2"), q("0")),
            ],
        )
        .unwrap(),
    );
    let w = dyadic_k4();
    let nf = normalize(&fold, &w, HPolicy::Canonical).unwrap();
    ensure(nf.passed(), || format!("{:?}", nf.checks))?;
    let pts = GroupDescriptor::dyadic().enumerate_window(&w).unwrap();
    for x in &pts {
        let expected = if x.is_negative() { q("-2") * x } else { q("-1/2") * x };
        ensure(nf.transported.neg(x).unwrap() == expected, || format!("⊖{x}"))?;
    }
    ensure(nf.inversion_check().checked == 65 && pts.len() == 65, || "fold inversion check count".into())?;
    Ok("2-x: x⊕y = x+y-1 on 101², ⊖ = f at 101 points; fold: 65 points".into())
}

fn round_trips() -> Outcome {
    let groups = [
        (z(), Window::symmetric(8)),
        (GroupDescriptor::dyadic(), Window::with_exponent(q("-1"), q("1"), 2).unwrap()),
        (GroupDescriptor::Rationals, Window::with_max_denominator(q("-1"), q("1"), 3).unwrap()),
    ];
    let mut n = 0;
    for seed in 0..3u64 {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        for (g, w) in &groups {
            let h = random_homeo(g, &mut rng).unwrap();
            let t = TransportedGroup::new(h.clone()).unwrap();
            let d = t.shift_constant(&g.generator()).unwrap();
            for role in [Role::Inversion, Role::Shift(d)] {
                let rt = round_trip(&t, &role, w).unwrap();
                ensure(rt.status.passed(), || format!("seed {seed}, {g}, {role:?}: {rt:?}"))?;
                n += 1;
            }
            // Oracle: the operation rebuilt from h alone, pointwise.
            let xs = g.enumerate_window(w).unwrap();
            for x in &xs {
                for y in &xs {
                    let direct = h.preimage(&(h.image(x).unwrap() + h.image(y).unwrap())).unwrap();
                    ensure(t.add(x, y).unwrap() == direct, || format!("seed {seed}: {x} ⊕ {y}"))?;
                }
            }
        }
    }
    Ok(format!("{n} round trips over 3 seeds, 0 failures"))
}

/// Distinct 2-adic valuations met by `[-n, n]`; zero shares class 0.
fn valuation_classes(n: i64) -> u64 {
    let mut classes = std::collections::BTreeSet::new();
    for x in -n..=n {
        let v = match Rational::from(x).valuation(2).unwrap() {
            Valuation::Infinite => 0,
            Valuation::Finite(v) => v,
        };
        classes.insert(v);
    }
    classes.len() as u64
}

fn obstruction() -> Outcome {
    let f = example_map(PartitionScheme::madic(2));
    let w = Window::symmetric(1024);
    ensure(bijection_check(&f, &w).unwrap().passed(), || "not a bijection on the window".into())?;
    let periodic = periodic_point_scan(&f, &w, 256).unwrap();
    ensure(periodic.passed(), || format!("periodic point: {:?}", periodic.counterexample))?;

    let widths: Vec<u64> = (4..=12).map(|j| 1u64 << j).collect();
    let report = shift_obstruction(&f, &widths).unwrap();
    let counts = report.counts();
    let oracle: Vec<u64> = widths.iter().map(|&n| valuation_classes(n as i64)).collect();
    ensure(counts == oracle, || format!("counts {counts:?}, oracle {oracle:?}"))?;
    ensure(counts == (5..=13).collect::<Vec<u64>>(), || format!("frozen sequence changed: {counts:?}"))?;
    ensure(counts.windows(2).all(|p| p[0] < p[1]), || "not strictly increasing".into())?;
    ensure(report.verdict == Verdict::UnboundedEvidence, || report.label())?;

    for c in 1..=8i64 {
        let s = Homeo::shift(&z(), Rational::from(c)).unwrap();
        let r = shift_obstruction(&s, &widths).unwrap();
        ensure(r.counts().iter().all(|&k| k == c as u64), || format!("x+{c}: {:?}", r.counts()))?;
        ensure(r.verdict == Verdict::Bounded && r.bound == Some(c as u64), || format!("x+{c}: {}", r.label()))?;
    }
    Ok(format!("no periodic point to iterate 256 on [-1024, 1024]; counts {counts:?}; shifts stable at c"))
}

fn fundamental_domain() -> Outcome {
    let f = three_piece_map();
    let w = Window::with_exponent(q("-4"), q("4"), 5).unwrap();
    let attempt = monotone_to_shift(&f, &w).unwrap();
    ensure(attempt.succeeded(), || format!("{:?}", attempt.failure))?;
    ensure(attempt.shift == q("1"), || format!("shift {}", attempt.shift))?;
    let t = attempt.t.as_ref().unwrap();
    let xs = GroupDescriptor::dyadic().enumerate_window(&w).unwrap();
    for x in &xs {
        let lhs = t.image(&f.image(x).unwrap()).unwrap();
        let rhs = t.image(x).unwrap() + q("1");
        ensure(lhs == rhs, || format!("t(f({x})) = {lhs}, t({x}) + 1 = {rhs}"))?;
    }
    let check = attempt.check.as_ref().unwrap();
    ensure(check.passed() && check.checked == xs.len() as u64, || format!("{check:?}"))?;
    Ok(format!("t∘f = (x+1)∘t at {} points", xs.len()))
}

fn negative_controls() -> Outcome {
    ensure(!Homeo::shift(&z(), q("1")).unwrap().is_involution(), || "x+1 accepted as an involution".into())?;
    let identity = unique_fixed_point(&Homeo::identity(&GroupDescriptor::Rationals));
    ensure(matches!(identity, Err(Error::ContinuumOfFixedPoints { .. })), || format!("x: {identity:?}"))?;
    let half = unique_fixed_point(&Homeo::affine(&z(), q("-1"), q("1")).unwrap());
    ensure(matches!(half, Err(Error::NoFixedPoint(_))), || format!("-x+1: {half:?}"))?;
    let r = check_conjugacy(
        &Homeo::identity(&z()),
        &Homeo::shift(&z(), q("1")).unwrap(),
        &Homeo::shift(&z(), q("2")).unwrap(),
        &Window::new(q("0"), q("3")).unwrap(),
    )
    .unwrap();
    let cx = r.counterexample.as_ref().ok_or("no counterexample")?;
    ensure(cx.at == vec![q("0")] && cx.expected == q("2") && cx.found == q("1"), || format!("{cx:?}"))?;
    Ok("x+1, x, -x+1 rejected; id∘(x+1) ≠ (x+2)∘id at x = 0".into())
}

fn selftest_bytes(seed: &str) -> (i32, Vec<u8>) {
    let (mut out, mut err) = (Vec::new(), Vec::new());
    let code = regroup::cli::run(["regroup", "selftest", "--seed", seed], &mut out, &mut err);
    (code, out)
}

fn determinism() -> Outcome {
    let (c1, a) = selftest_bytes("7");
    let (c2, b) = selftest_bytes("7");
    ensure(c1 == 0 && c2 == 0, || format!("selftest exit codes {c1}, {c2}"))?;
    ensure(a == b, || "reports differ".into())?;
    Ok(format!("two seed-7 reports identical ({} bytes)", a.len()))
}

fn main() {
    std::env::remove_var(regroup::cli::REPORT_DIR_ENV);
    let criteria: [Criterion; 7] = [
        ("transported-group axioms", axioms),
        ("involution normal form", normal_form),
        ("regroup/conjugacy round trips", round_trips),
        ("orbit obstruction", obstruction),
        ("fundamental-domain conjugacy", fundamental_domain),
        ("negative controls", negative_controls),
        ("selftest determinism", determinism),
    ];
    let mut failed = 0;
    for (i, (name, run)) in criteria.iter().enumerate() {
        let outcome = catch_unwind(AssertUnwindSafe(run)).unwrap_or_else(|p| {
            Err(p.downcast_ref::<String>().cloned().or(p.downcast_ref::<&str>().map(|s| s.to_string())).unwrap_or_default())
        });
        match outcome {
            Ok(detail) => println!("criterion {}: PASS {name}: {detail}", i + 1),
            Err(detail) => {
                failed += 1;
                println!("criterion {}: FAIL {name}: {detail}", i + 1);
            }
        }
    }
    if failed > 0 {
        std::process::exit(1);
    }
}
