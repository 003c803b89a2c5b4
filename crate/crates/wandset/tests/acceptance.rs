//! The acceptance gate: one line per criterion, then a hard assert.
//!
//! The lines go straight to the stderr handle, past the test harness's
//! capture, so they show up in a plain `cargo test` run.

use std::io::Write;
use std::sync::Arc;
use std::time::{Duration, Instant};

use rand::rngs::StdRng;
use rand::SeedableRng;
use wandset::conch::{gen_stages, verify_roundtrip};
use wandset::formula::{
    check_formulas, check_translation, parse_labeled, random_sentence, Formula, Signature, Translation, CUS_AXIOMS,
    LT_AXIOMS, WS_AXIOMS,
};
use wandset::instances::check_cus_axioms;
use wandset::instances::fixtures::PeeksAheadSpec;
use wandset::pureset::{mk_set, ulev};
use wandset::suites::check_core;
use wandset::wandspec::{check_stage_stability, SHIPPED_SPECS};
use wandset::{build, spec_by_name, Caps, Error, Fragment, Report};

type Outcome = Result<String, String>;
type Criterion = (&'static str, fn() -> Outcome, Duration);

fn frag(spec: &str, depth: usize) -> Fragment {
    build(spec_by_name(spec).unwrap(), depth, Caps::default()).unwrap()
}

fn require(r: &Report, what: &str) -> Result<(), String> {
    if r.passed() {
        Ok(())
    } else {
        let names: Vec<&str> = r.failures().iter().map(|c| c.name.as_str()).collect();
        Err(format!("{what}: failed {}", names.join(", ")))
    }
}

fn ulev_rank() -> Outcome {
    let mut ranks = Vec::new();
    for n in 0..=4 {
        let lev = mk_set(ulev(n, &[], 1 << 17).map_err(|e| e.to_string())?);
        if lev.rank() != 4 * n {
            return Err(format!("rank of level {n} is {}, want {}", lev.rank(), 4 * n));
        }
        ranks.push(lev.rank().to_string());
    }
    Ok(format!("ranks {}", ranks.join(",")))
}

fn conch_rank_bound() -> Outcome {
    let mut notes = Vec::new();
    for spec in ["church:2", "conway"] {
        let cs = gen_stages(spec_by_name(spec).unwrap(), 4, 1 << 20).map_err(|e| e.to_string())?;
        let mut slack = Vec::new();
        for (n, rk, bound) in cs.rank_bounds() {
            if rk > bound {
                return Err(format!("{spec}: rank(C_{n}) = {rk} exceeds {bound}"));
            }
            slack.push(format!("C_{n}:{}", bound - rk));
        }
        if slack.len() != 4 {
            return Err(format!("{spec}: {} stages", slack.len()));
        }
        notes.push(format!("{spec} (omega {}) slack {}", cs.omega(), slack.join(" ")));
    }
    Ok(notes.join("; "))
}

fn pure_sizes() -> Outcome {
    let sizes: Vec<usize> = (0..=5).map(|d| frag("pure", d).len()).collect();
    if sizes != [0, 1, 2, 4, 16, 65536] {
        return Err(format!("sizes {sizes:?}"));
    }
    Ok(format!("sizes {sizes:?}"))
}

fn church_census() -> Outcome {
    let f = frag("church:2", 3);
    // by hand: stage 0 finds {}; stage 1 finds {{}} and the complement of {};
    // stage 2 finds the other six subsets of those three and two taps of {{}}
    let mut want = vec![
        "{}",
        "{{}}",
        "*0({})",
        "{{{}}}",
        "{*0({})}",
        "{{},{{}}}",
        "{{},*0({})}",
        "{{{}},*0({})}",
        "{{},{{}},*0({})}",
        "*0({{}})",
        "*1({{}})",
    ];
    let mut got: Vec<String> = (0..f.len()).map(|i| f.render(i)).collect();
    want.sort();
    got.sort();
    if got != want {
        return Err(format!("objects {got:?}"));
    }
    if (0..f.len()).any(|i| f.obj(i).ordrank > 2) {
        return Err("an object has ordrank above 2".into());
    }
    Ok(format!("{} objects of ordrank <= 2", f.len()))
}

fn core_suites() -> Outcome {
    let mut n = 0;
    for spec in SHIPPED_SPECS {
        let r = check_core(&frag(spec, 3));
        require(&r, spec)?;
        n += r.checks.len();
    }
    Ok(format!("{n} checks over {} specs", SHIPPED_SPECS.len()))
}

fn roundtrip() -> Outcome {
    let mut n = 0;
    for spec in ["pure", "conway", "church:2"] {
        let f = frag(spec, 3);
        let cs = gen_stages(f.spec_ref(), 3, 1 << 20).map_err(|e| e.to_string())?;
        let r = verify_roundtrip(&f, &cs).map_err(|e| e.to_string())?;
        require(&r, spec)?;
        n += r.checks.len();
    }
    Ok(format!("{n} checks"))
}

fn cus_suite() -> Outcome {
    let mut instances = 0;
    for depth in [3, 4] {
        let f = frag("church:2", depth);
        let r = check_cus_axioms(&f, 4096);
        require(&r, &format!("depth {depth}"))?;
        instances += r.checks.iter().map(|c| c.instances).sum::<usize>();
    }
    let r = check_formulas(&frag("church:2", 3)).map_err(|e| e.to_string())?;
    require(&r, "axiom sentences")?;
    let sentences = r.checks.iter().filter(|c| c.name.starts_with("cus:")).count();
    Ok(format!("{instances} instances at depths 3 and 4, {sentences} axiom sentences true"))
}

fn axioms(text: &str) -> Vec<(String, Formula)> {
    parse_labeled(text).unwrap()
}

fn random(seed: u64, sig: Signature) -> Vec<(String, Formula)> {
    let mut rng = StdRng::seed_from_u64(seed);
    (0..100).map(|i| (format!("random {i}"), random_sentence(&mut rng, sig, 3))).collect()
}

fn uses_dom_or_equiv(f: &Formula) -> bool {
    f.preds().iter().any(|(n, _)| n == "Dom" || n == "Equiv")
}

fn interpretation() -> Outcome {
    let mut total = 0;
    let mut run = |t: Translation, f: &Fragment, sentences: &[(String, Formula)]| -> Result<(), String> {
        let r = check_translation(t, f, f, sentences).map_err(|e| format!("{t} on {}: {e}", f.spec().name()))?;
        require(&r, &format!("{t} on {}", f.spec().name()))?;
        total += r.checks.len();
        Ok(())
    };
    let lt = axioms(LT_AXIOMS);
    let ws = axioms(WS_AXIOMS);
    // Dom and Equiv have no counterpart in the membership-only signature
    let mut church_ws: Vec<_> = ws.iter().filter(|(_, f)| !uses_dom_or_equiv(f)).cloned().collect();
    church_ws.extend(axioms(CUS_AXIOMS));
    for spec in SHIPPED_SPECS {
        let f = frag(spec, 3);
        run(Translation::Tau, &f, &lt)?;
        run(Translation::Tau, &f, &random(1, Signature::Lt))?;
    }
    for spec in ["pure", "conway", "church:2"] {
        let f = frag(spec, 3);
        run(Translation::ToLt, &f, &ws)?;
        run(Translation::ToLt, &f, &random(2, Signature::Ws))?;
    }
    let c = frag("church:2", 3);
    for t in [Translation::Bullet, Translation::BulletCircle] {
        run(t, &c, &church_ws)?;
        run(t, &c, &random(3, Signature::Ws))?;
    }
    for t in [Translation::Circle, Translation::CircleBullet] {
        run(t, &c, &random(4, Signature::E))?;
    }
    Ok(format!("{total} sentences preserved"))
}

fn stability() -> Outcome {
    let mut n = 0;
    for spec in SHIPPED_SPECS {
        let r = check_stage_stability(&frag(spec, 2), &frag(spec, 4)).map_err(|e| format!("{spec}: {e}"))?;
        require(&r, spec)?;
        n += r.checks.iter().map(|c| c.instances).sum::<usize>();
    }
    let peek = Arc::new(PeeksAheadSpec::new());
    let small = build(peek.clone(), 2, Caps::default()).map_err(|e| e.to_string())?;
    let big = build(peek, 4, Caps::default()).map_err(|e| e.to_string())?;
    match check_stage_stability(&small, &big) {
        Err(Error::StabilityViolation(why)) => Ok(format!("{n} answers stable; peeks-ahead flagged: {why}")),
        other => Err(format!("peeks-ahead not flagged: {other:?}")),
    }
}

#[test]
fn acceptance() {
    let criteria: [Criterion; 9] = [
        ("ulev rank law", ulev_rank, Duration::from_secs(1)),
        ("conch stage rank bound", conch_rank_bound, Duration::from_secs(30)),
        ("pure hierarchy sizes", pure_sizes, Duration::from_secs(60)),
        ("church(2) depth-3 census", church_census, Duration::from_secs(5)),
        ("core suites at depth 3", core_suites, Duration::from_secs(120)),
        ("conch round trip", roundtrip, Duration::from_secs(300)),
        ("church axioms", cus_suite, Duration::from_secs(120)),
        ("interpretations", interpretation, Duration::from_secs(300)),
        ("stage stability", stability, Duration::from_secs(300)),
    ];
    let mut failed = Vec::new();
    for (i, (name, f, budget)) in criteria.iter().enumerate() {
        let t = Instant::now();
        let mut outcome = f();
        let took = t.elapsed();
        if outcome.is_ok() && took > *budget {
            outcome = Err(format!("took {took:.1?}, budget {budget:?}"));
        }
        let line = match &outcome {
            Ok(detail) => format!("criterion {}: PASS {name} ({took:.2?}): {detail}\n", i + 1),
            Err(why) => {
                failed.push(i + 1);
                format!("criterion {}: FAIL {name} ({took:.2?}): {why}\n", i + 1)
            }
        };
        std::io::stderr().write_all(line.as_bytes()).unwrap();
    }
    assert!(failed.is_empty(), "failed criteria {failed:?}");
}
