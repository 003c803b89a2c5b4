//! Deliberately badly-behaved specs for exercising the wrapper and the
//! stability check. Not registered by name.

use crate::pureset::PureSet;
use crate::wandspec::{SetQuery, WandId, WandSpec};

/// `E` relates each bland object to every later bland object but not back.
pub struct AsymmetricSpec {
    wands: Vec<WandId>,
}

impl AsymmetricSpec {
    pub fn new() -> AsymmetricSpec {
        AsymmetricSpec {
            wands: vec![WandId { index: 0, code: PureSet::empty() }],
        }
    }
}

impl Default for AsymmetricSpec {
    fn default() -> Self {
        AsymmetricSpec::new()
    }
}

impl WandSpec for AsymmetricSpec {
    fn name(&self) -> String {
        "asymmetric".into()
    }

    fn wands(&self) -> &[WandId] {
        &self.wands
    }

    fn raw_dom(&self, _w: usize, a: usize, q: &dyn SetQuery) -> bool {
        q.is_bland(a)
    }

    fn raw_equiv(&self, w: usize, a: usize, u: usize, b: usize, q: &dyn SetQuery) -> bool {
        w == 0 && u == 0 && q.is_bland(a) && q.is_bland(b) && a <= b
    }
}

/// `D` holds only while the whole universe built so far is small, so its
/// answers change as later stages arrive.
pub struct PeeksAheadSpec {
    wands: Vec<WandId>,
}

impl PeeksAheadSpec {
    pub fn new() -> PeeksAheadSpec {
        PeeksAheadSpec {
            wands: vec![WandId { index: 0, code: PureSet::empty() }],
        }
    }
}

impl Default for PeeksAheadSpec {
    fn default() -> Self {
        PeeksAheadSpec::new()
    }
}

impl WandSpec for PeeksAheadSpec {
    fn name(&self) -> String {
        "peeks-ahead".into()
    }

    fn wands(&self) -> &[WandId] {
        &self.wands
    }

    fn raw_dom(&self, _w: usize, a: usize, q: &dyn SetQuery) -> bool {
        q.is_bland(a) && q.below(usize::MAX) < 5
    }

    fn raw_equiv(&self, w: usize, a: usize, u: usize, b: usize, _q: &dyn SetQuery) -> bool {
        w == u && a == b
    }
}
