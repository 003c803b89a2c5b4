//! The shipped axiom lists, run against a fragment.

use super::*;
use crate::error::{Error, Result};
use crate::report::{Check, Report};
use crate::universe::Fragment;

/// Largest fragment the axiom lists are evaluated on. Three nested
/// quantifiers over a bigger carrier take minutes.
pub const FORMULA_LIMIT: usize = 512;

/// Truth of every WS axiom in the fragment, truth of the Church axioms when
/// the spec is a Church spec, and preservation of the LT axioms under `tau`.
pub fn check_formulas(frag: &Fragment) -> Result<Report> {
    if frag.len() > FORMULA_LIMIT {
        return Err(Error::CapExceeded {
            needed: frag.len() as u128,
            cap: FORMULA_LIMIT,
        });
    }
    let mut r = Report::new("formula");
    let ws = WsModel::new(frag);
    let mut lists = vec![("ws", WS_AXIOMS)];
    if frag.spec().name().starts_with("church") {
        lists.push(("cus", CUS_AXIOMS));
    }
    for (tag, text) in lists {
        for (label, f) in parse_labeled(text)? {
            let mut c = Check::new(&format!("{tag}:{label}"));
            c.case(eval_sentence(&ws, &f)?, || format!("false: {f}"));
            r.push(c);
        }
    }
    let tau = check_translation(Translation::Tau, frag, frag, &parse_labeled(LT_AXIOMS)?)?;
    for mut c in tau.checks {
        c.name = format!("tau:{}", c.name);
        r.push(c);
    }
    Ok(r)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::universe::{build, Caps};
    use crate::wandspec::spec_by_name;

    #[test]
    fn axioms_hold_on_small_fragments() {
        for name in ["pure", "conway", "church:2"] {
            let f = build(spec_by_name(name).unwrap(), 3, Caps::default()).unwrap();
            let r = check_formulas(&f).unwrap();
            assert!(r.passed(), "{name}: {r}");
            assert_eq!(r.checks.iter().any(|c| c.name.starts_with("cus:")), name == "church:2");
        }
    }

    #[test]
    fn large_fragments_are_refused() {
        let f = build(spec_by_name("church:2").unwrap(), 4, Caps::default()).unwrap();
        assert!(matches!(check_formulas(&f), Err(Error::CapExceeded { .. })));
    }
}
