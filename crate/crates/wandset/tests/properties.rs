use std::sync::OnceLock;

use proptest::prelude::*;
use rand::rngs::StdRng;
use rand::SeedableRng;
use wandset::formula::{check_translation, eval_sentence, not, parse, random_sentence, Signature, Translation, WsModel};
use wandset::pureset::{carrier, kpair, kunpair, mk_set, theta, theta_inv, uncarrier};
use wandset::{build, spec_by_name, Caps, Fragment, PureSet, SetQuery};

fn pure_set() -> impl Strategy<Value = PureSet> {
    let leaf = Just(PureSet::empty());
    leaf.prop_recursive(4, 24, 4, |inner| prop::collection::vec(inner, 0..4).prop_map(mk_set))
}

fn church4() -> &'static Fragment {
    static F: OnceLock<Fragment> = OnceLock::new();
    F.get_or_init(|| build(spec_by_name("church:2").unwrap(), 4, Caps::default()).unwrap())
}

fn church3() -> &'static Fragment {
    static F: OnceLock<Fragment> = OnceLock::new();
    F.get_or_init(|| build(spec_by_name("church:2").unwrap(), 3, Caps::default()).unwrap())
}

proptest! {
    #![proptest_config(ProptestConfig { failure_persistence: None, ..ProptestConfig::default() })]

    #[test]
    fn pairs_unpair(a in pure_set(), b in pure_set()) {
        prop_assert_eq!(kunpair(&kpair(&a, &b)).unwrap(), (a, b));
    }

    #[test]
    fn carriers_uncarry(a in pure_set()) {
        prop_assert_eq!(uncarrier(&carrier(&a)).unwrap(), a);
    }

    #[test]
    fn theta_is_injective_and_inverted(a in pure_set(), b in pure_set()) {
        let (ta, tb) = (theta(&a), theta(&b));
        prop_assert_eq!(theta_inv(&ta).unwrap(), a.clone());
        prop_assert_eq!(ta == tb, a == b);
        // membership moves one carrier down
        prop_assert_eq!(uncarrier(&tb).unwrap().contains(&ta), b.contains(&a));
    }

    #[test]
    fn text_form_round_trips(a in pure_set()) {
        prop_assert_eq!(a.to_string().parse::<PureSet>().unwrap(), a);
    }

    #[test]
    fn references_resolve_to_themselves(id in 0usize..2061) {
        let f = church4();
        prop_assert_eq!(f.resolve_ref(&f.render(id)).unwrap(), id);
    }

    #[test]
    fn decompose_then_bigtap(id in 0usize..2061) {
        let f = church4();
        let (base, path) = f.decompose(id);
        prop_assert!(f.is_bland(base));
        prop_assert!(path.len() <= f.obj(id).ordrank);
        prop_assert_eq!(f.bigtap(base, &path).unwrap(), id);
    }

    #[test]
    fn printed_sentences_parse_back(seed in any::<u64>()) {
        let mut rng = StdRng::seed_from_u64(seed);
        for sig in [Signature::E, Signature::Lt, Signature::Ws] {
            let f = random_sentence(&mut rng, sig, 4);
            prop_assert_eq!(parse(&f.to_string()).unwrap(), f);
        }
    }

    #[test]
    fn negation_flips_truth(seed in any::<u64>()) {
        let mut rng = StdRng::seed_from_u64(seed);
        let m = WsModel::new(church3());
        let f = random_sentence(&mut rng, Signature::Ws, 3);
        prop_assert_eq!(eval_sentence(&m, &not(f.clone())).unwrap(), !eval_sentence(&m, &f).unwrap());
    }

    #[test]
    fn translations_preserve_truth(seed in any::<u64>()) {
        let mut rng = StdRng::seed_from_u64(seed);
        let f = church3();
        for t in Translation::ALL {
            let s = vec![("s".to_string(), random_sentence(&mut rng, t.source(), 3))];
            let r = check_translation(t, f, f, &s).unwrap();
            prop_assert!(r.passed(), "{}", r);
        }
    }
}
