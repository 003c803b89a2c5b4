//! Random sentences for interpretation checks.

use super::*;
use rand::Rng;

/// A random sentence over the primitives of `sig` with quantifier depth at
/// most `max_depth` (at least 1).
pub fn random_sentence(rng: &mut impl Rng, sig: Signature, max_depth: usize) -> Formula {
    let mut bound = Vec::new();
    gen(rng, sig, &mut bound, max_depth.max(1), 3)
}

fn gen(rng: &mut impl Rng, sig: Signature, bound: &mut Vec<String>, qleft: usize, size: usize) -> Formula {
    if qleft > 0 && (bound.is_empty() || rng.gen_bool(0.4)) {
        let x = format!("v{}", bound.len());
        bound.push(x.clone());
        let body = gen(rng, sig, bound, qleft - 1, size);
        bound.pop();
        return if rng.gen_bool(0.5) { forall(&x, body) } else { exists(&x, body) };
    }
    if size > 0 && rng.gen_bool(0.5) {
        if rng.gen_bool(0.25) {
            return not(gen(rng, sig, bound, qleft, size - 1));
        }
        let l = gen(rng, sig, bound, qleft, (size - 1) / 2);
        let r = gen(rng, sig, bound, qleft, (size - 1) / 2);
        return match rng.gen_range(0..4) {
            0 => and(l, r),
            1 => or(l, r),
            2 => implies(l, r),
            _ => iff(l, r),
        };
    }
    random_atom(rng, sig, bound)
}

fn random_atom(rng: &mut impl Rng, sig: Signature, bound: &[String]) -> Formula {
    let kinds = match sig {
        Signature::E => 2,
        Signature::Lt => 3,
        Signature::Ws => 5,
    };
    let pick = rng.gen_range(0..=kinds);
    let mut v = || bound[rng.gen_range(0..bound.len())].clone();
    // membership is drawn twice as often as the rest
    let a = match pick {
        0 | 1 => Atom::In(v(), v()),
        2 if kinds == 2 => Atom::Eq(v(), v()),
        2 => Atom::Wand(v()),
        3 => Atom::Eq(v(), v()),
        4 => Atom::Bland(v()),
        _ => Atom::Tap(v(), v(), v()),
    };
    atom(a)
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::rngs::StdRng;
    use rand::SeedableRng;

    #[test]
    fn sentences_respect_signature_and_depth() {
        let mut rng = StdRng::seed_from_u64(7);
        for sig in [Signature::E, Signature::Lt, Signature::Ws] {
            let mut seen = BTreeSet::new();
            for _ in 0..200 {
                let f = random_sentence(&mut rng, sig, 3);
                assert!(f.is_sentence());
                assert!(f.signature() <= sig);
                assert!((1..=3).contains(&f.quantifier_depth()));
                assert_eq!(parse(&f.to_string()).unwrap(), f);
                seen.insert(f.signature());
            }
            assert!(seen.contains(&sig), "{sig} never drawn at full signature");
        }
    }
}
