//! Acceptance runner: one PASS/FAIL line per criterion, with its runtime
//! budget. Exits non-zero if any criterion fails.

mod common;

use std::collections::{BTreeMap, BTreeSet};
use std::path::PathBuf;
use std::time::{Duration, Instant};

use num_bigint::BigInt;
use num_traits::{One, Zero};
use trilab::analysis::{DetectOptions, Patch};
use trilab::generators::{generate_family, generate_figure3, generate_graded, generate_hexagonal, FamilyParams};
use trilab::io::{tiling_from_json, tiling_to_json};
use trilab::lattice::{int, rat, Rational};
use trilab::render::{fills_by_size, render_svg};
use trilab::tlr::{extract_from_patch, infer_alpha, Index};
use trilab::walk::{self, GreenMode, GreenValue, IndexWindow, State};

type Outcome = Result<String, String>;

fn check(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn alphas() -> [Rational; 5] {
    [rat(1, 5), rat(1, 4), rat(1, 3), rat(2, 5), rat(1, 2)]
}

fn c1() -> Outcome {
    for m in 0..=12u64 {
        let n = 3 * m;
        let p = walk::return_probability(n as i64).map_err(|e| e.to_string())?;
        let dp = walk::path_count_dp(n).map_err(|e| e.to_string())?;
        let q = Rational::new(BigInt::from(dp), BigInt::from(3u32).pow(n as u32));
        check(p == q, || format!("n = {n}: {p} vs {q}"))?;
    }
    for n in (1..=36i64).filter(|n| n % 3 != 0) {
        check(walk::return_probability(n).unwrap().is_zero(), || format!("p({n}) != 0"))?;
    }
    Ok("p(3m) = DP(3m)/3^(3m) for m <= 12; zero off multiples of 3 up to 36".into())
}

fn c2() -> Outcome {
    let p3 = walk::return_probability(3).unwrap();
    let p6 = walk::return_probability(6).unwrap();
    let g2 = walk::green_partial(2, GreenMode::Exact);
    check(p3 == rat(2, 9), || format!("p(3) = {p3}"))?;
    check(p6 == rat(10, 81), || format!("p(6) = {p6}"))?;
    check(g2 == GreenValue::Exact(rat(109, 81)), || format!("G(2) = {g2:?}"))?;
    Ok("p(3) = 2/9, p(6) = 10/81, G(2) = 109/81".into())
}

fn c3() -> Outcome {
    let c = walk::stirling_constant();
    let mut worst = f64::INFINITY;
    for m in 1..=10_000u64 {
        let t = walk::term_f64(m);
        let slack = t - c / m as f64;
        worst = worst.min(slack);
        check(slack >= -1e-12, || format!("m = {m}: {t} < {}", c / m as f64))?;
    }
    let dev = (1000.0 * walk::term_f64(1000) - walk::asymptote()).abs();
    check(dev <= 1e-3, || format!("|1000 p - sqrt3/2pi| = {dev}"))?;
    Ok(format!("min slack {worst:.3e}; |m p - sqrt(3)/(2 pi)| = {dev:.3e} at m = 1000"))
}

fn c4() -> Outcome {
    let runs: Vec<f64> = [1, 4, 8].into_iter().map(|k| walk::estimate_return_frequency_with(42, 100_000, 3, k)).collect::<Result<_, _>>().map_err(|e| e.to_string())?;
    let f = runs[0];
    check(runs.iter().all(|x| x.to_bits() == f.to_bits()), || format!("worker counts disagree: {runs:?}"))?;
    let dev = (f - 2.0 / 9.0).abs();
    check(dev <= 0.0053, || format!("frequency {f}, deviation {dev}"))?;
    Ok(format!("frequency {f} (|dev| = {dev:.5}), identical on 1/4/8 workers"))
}

fn c5(fields: &mut Vec<BTreeMap<Index, Rational>>) -> Outcome {
    for a in alphas() {
        let f = FamilyParams::new(a.clone()).unwrap();
        let t = generate_family(&f, 4).unwrap();
        let rep = t.validate().map_err(|e| e.to_string())?;
        check(rep.valid, || format!("alpha {a}: {:?}", rep.failure))?;
        let want: BTreeSet<Rational> = [int(1), a.clone(), Rational::one() - &a].into_iter().collect();
        let got: BTreeSet<Rational> = t.diameter_values().into_iter().collect();
        check(got == want, || format!("alpha {a}: diameters {got:?}"))?;
        check(t.shared_side_pairs().is_empty(), || format!("alpha {a}: shared sides"))?;
        let patch = Patch::new(&t, &int(2)).map_err(|e| e.to_string())?;
        let es = patch.e_configurations(DetectOptions::default());
        check(es.is_empty(), || format!("alpha {a}: {} E-configurations", es.len()))?;
        let idx = extract_from_patch(&patch).map_err(|e| format!("alpha {a}: {e}"))?;
        let inferred = infer_alpha(&idx).map_err(|e| format!("alpha {a}: {e}"))?;
        check(inferred.alpha() == &a, || format!("alpha {a}: inferred {}", inferred.alpha()))?;
        fields.push(idx.diameter_field());
    }
    Ok("alpha in {1/5, 1/4, 1/3, 2/5, 1/2}: valid, sizes {1, a, 1-a}, no shared sides, no E-configurations, alpha recovered".into())
}

fn c6() -> Outcome {
    for v in 1..=5 {
        let t = generate_figure3(v).unwrap();
        let rep = t.validate().map_err(|e| e.to_string())?;
        check(rep.valid, || format!("variant {v}: {:?}", rep.failure))?;
        let patch = Patch::new(&t, &int(0)).map_err(|e| e.to_string())?;
        check(patch.e_configurations(DetectOptions::default()).is_empty(), || format!("variant {v} has an E-configuration"))?;
        check(!t.is_perfect(), || format!("variant {v} is perfect"))?;
    }
    Ok("all five valid, E-configuration-free, with a repeated size".into())
}

fn descent_gaps(patch: &Patch, min_len: Rational, label: &str) -> Result<(usize, String), String> {
    let es = patch.e_configurations(DetectOptions::default());
    let starts: Vec<_> = es.iter().filter(|e| e.length() >= min_len).collect();
    check(!starts.is_empty(), || format!("{label}: no E-configuration of length >= {min_len}"))?;
    let mut steps = 0;
    let mut longest: Vec<Rational> = Vec::new();
    let mut halts = BTreeSet::new();
    for e in starts {
        let trace = patch.descend(e, 64).map_err(|x| x.to_string())?;
        for w in trace.lengths.windows(2) {
            check(w[1] <= &w[0] - &patch.inf_diameter, || format!("{label}: {} -> {}", w[0], w[1]))?;
        }
        steps += trace.cases.len();
        if trace.lengths.len() > longest.len() {
            longest = trace.lengths.clone();
        }
        if let Some(h) = &trace.halted {
            halts.insert(format!("{h:?}").split('(').next().unwrap_or("").to_string());
        }
    }
    let longest: Vec<String> = longest.iter().map(|x| x.to_string()).collect();
    Ok((steps, format!("{label}: {steps} steps, longest {}, halts {halts:?}", longest.join(">"))))
}

fn c7() -> Outcome {
    let hex = Patch::new(&generate_hexagonal(8).unwrap(), &int(2)).map_err(|e| e.to_string())?;
    let (_, a) = descent_gaps(&hex, int(3), "hexagonal 8x8")?;
    let graded = Patch::new(&generate_graded(173, 2), &int(4)).map_err(|e| e.to_string())?;
    let (steps, b) = descent_gaps(&graded, int(3), "graded seed 173")?;
    check(steps > 0, || "graded fixture made no descent step".into())?;
    Ok(format!("{a}; {b}"))
}

fn c8(fields: &[BTreeMap<Index, Rational>]) -> Outcome {
    let w = IndexWindow { i_min: -20, i_max: 20, j_min: -20, j_max: 20 };
    let all = |f: &dyn Fn(State) -> Rational, want: Rational, name: &str| -> Result<(), String> {
        let r = walk::harmonic_residual(|s| Some(f(s)), &w).map_err(|e| e.to_string())?;
        check(r.len() == w.states().count() && r.values().all(|x| *x == want), || format!("{name}: residual not {want}"))
    };
    all(&|_| int(7), int(0), "constant")?;
    all(&|s| int(s.i), int(0), "f = i")?;
    all(&|s| int(s.j), int(0), "f = j")?;
    all(&|s| int(s.i * s.i), rat(-2, 3), "f = i^2")?;
    let mut checked = 0;
    for field in fields {
        let first = field.values().next().ok_or("empty diameter field")?;
        check(field.values().all(|x| x == first), || "diameter field is not constant".into())?;
        let get = |s: State| field.get(&(s.i, s.j)).cloned();
        for &(i, j) in field.keys() {
            let s = State { i, j };
            if walk::successors(s).unwrap().iter().all(|n| get(*n).is_some()) {
                let r = walk::harmonic_residual(get, &IndexWindow { i_min: i, i_max: i, j_min: j, j_max: j }).map_err(|e| e.to_string())?;
                check(r.values().all(|x| x.is_zero()), || format!("diameter residual at {:?}", (i, j)))?;
                checked += 1;
            }
        }
    }
    Ok(format!("41x41 window: 0 for 1, i, j; -2/3 for i^2; diameter fields constant, zero residual at {checked} states"))
}

fn c9() -> Outcome {
    let mut windows: Vec<(String, trilab::tiling::Tiling)> = [5, 6].into_iter().map(|n| (format!("hexagonal {n}x{n}"), generate_hexagonal(n).unwrap())).collect();
    for a in alphas() {
        windows.push((format!("family alpha {a}"), generate_family(&FamilyParams::new(a).unwrap(), 6).unwrap()));
    }
    let mut total = 0;
    for (name, t) in &windows {
        let patch = Patch::new(t, &int(2)).map_err(|e| e.to_string())?;
        let brute = common::all_triples(&patch);
        let fast: BTreeSet<_> = patch.e_configurations(DetectOptions { all_interior: true }).into_iter().collect();
        check(fast == brute, || format!("{name}: detector {} vs brute force {}", fast.len(), brute.len()))?;
        let canon: BTreeSet<_> = patch.e_configurations(DetectOptions::default()).into_iter().collect();
        check(canon == common::canonical(&brute), || format!("{name}: canonical witnesses differ"))?;
        total += brute.len();
    }
    Ok(format!("{} windows agree ({total} configurations in total)", windows.len()))
}

fn c10() -> Outcome {
    let dir = PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("tests/fixtures");
    let mut n = 0;
    let mut entries: Vec<_> = std::fs::read_dir(&dir).map_err(|e| e.to_string())?.filter_map(|e| e.ok()).map(|e| e.path()).collect();
    entries.sort();
    for p in entries.iter().filter(|p| p.extension().is_some_and(|x| x == "json")) {
        let s = std::fs::read_to_string(p).map_err(|e| e.to_string())?;
        let t = tiling_from_json(&s).map_err(|e| format!("{}: {e}", p.display()))?;
        check(tiling_to_json(&t) == s, || format!("{} does not round-trip", p.display()))?;
        let a = render_svg(&t.tiles, &fills_by_size(&t.tiles));
        let b = render_svg(&t.tiles, &fills_by_size(&t.tiles));
        check(a == b, || format!("{}: SVG differs between runs", p.display()))?;
        n += 1;
    }
    let t = tiling_from_json(&std::fs::read_to_string(dir.join("figure3_3.json")).unwrap()).unwrap();
    let golden = std::fs::read_to_string(dir.join("figure3_3.svg")).map_err(|e| e.to_string())?;
    check(render_svg(&t.tiles, &fills_by_size(&t.tiles)) == golden, || "SVG differs from golden".into())?;
    Ok(format!("{n} fixtures round-trip; SVG stable and equal to golden"))
}

fn main() {
    let mut fields = Vec::new();
    let mut failed = 0;
    let mut report = |k: u32, budget: Option<Duration>, f: &mut dyn FnMut() -> Outcome| {
        let start = Instant::now();
        let out = f();
        let dt = start.elapsed();
        let over = budget.is_some_and(|b| dt > b);
        let limit = budget.map_or(String::new(), |b| format!(" / {}s", b.as_secs()));
        let ok = out.is_ok() && !over;
        let detail = match &out {
            Ok(s) if over => format!("{s}; over budget"),
            Ok(s) => s.clone(),
            Err(e) => e.clone(),
        };
        println!("criterion {k:>2}: {} ({:.2}s{limit}) {detail}", if ok { "PASS" } else { "FAIL" }, dt.as_secs_f64());
        if !ok {
            failed += 1;
        }
    };
    let s = Some;
    report(1, s(Duration::from_secs(5)), &mut c1);
    report(2, None, &mut c2);
    report(3, s(Duration::from_secs(10)), &mut c3);
    report(4, s(Duration::from_secs(5)), &mut c4);
    report(5, s(Duration::from_secs(10)), &mut || c5(&mut fields));
    report(6, s(Duration::from_secs(1)), &mut c6);
    report(7, s(Duration::from_secs(2)), &mut c7);
    report(8, s(Duration::from_secs(1)), &mut || c8(&fields));
    report(9, s(Duration::from_secs(10)), &mut c9);
    report(10, None, &mut c10);
    if failed > 0 {
        println!("{failed} criteria failed");
        std::process::exit(1);
    }
}
