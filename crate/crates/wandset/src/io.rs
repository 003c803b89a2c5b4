//! The JSON universe file.
//!
//! Layout is fixed so that exporting a re-imported file reproduces it byte
//! for byte: a header, one object record per line in id order, and each
//! wevel as the list of its member ids.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::universe::{Fragment, Obj, ObjKind};
use crate::wandspec::{spec_by_name, SetQuery};

pub const FORMAT_VERSION: u32 = 1;

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Header {
    pub format_version: u32,
    pub spec_name: String,
    pub depth: usize,
    pub exhaustive: bool,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase", deny_unknown_fields)]
pub enum ObjRecord {
    Bland { id: usize, members: Vec<usize>, ordrank: usize },
    Tapped { id: usize, class: Vec<(usize, usize)>, ordrank: usize },
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct UniverseFile {
    pub header: Header,
    pub objects: Vec<ObjRecord>,
    pub wevels: Vec<Vec<usize>>,
}

impl UniverseFile {
    pub fn from_fragment(frag: &Fragment) -> UniverseFile {
        let objects = frag
            .objs()
            .iter()
            .enumerate()
            .map(|(id, o)| match &o.kind {
                ObjKind::Bland(m) => ObjRecord::Bland {
                    id,
                    members: m.clone(),
                    ordrank: o.ordrank,
                },
                ObjKind::Tapped(c) => ObjRecord::Tapped {
                    id,
                    class: c.clone(),
                    ordrank: o.ordrank,
                },
            })
            .collect();
        UniverseFile {
            header: Header {
                format_version: FORMAT_VERSION,
                spec_name: frag.spec().name(),
                depth: frag.depth(),
                exhaustive: frag.exhaustive(),
            },
            objects,
            wevels: frag.wevels().iter().map(|&s| frag.members(s).to_vec()).collect(),
        }
    }

    /// Rebuild the fragment, checking every record against the spec.
    pub fn to_fragment(&self) -> Result<Fragment> {
        let h = &self.header;
        if h.format_version != FORMAT_VERSION {
            return Err(Error::Data(format!("unsupported format version {}", h.format_version)));
        }
        let spec = spec_by_name(&h.spec_name).map_err(|e| Error::Data(e.to_string()))?;
        let mut objs = Vec::with_capacity(self.objects.len());
        for (i, r) in self.objects.iter().enumerate() {
            let (id, kind, ordrank) = match r {
                ObjRecord::Bland { id, members, ordrank } => (*id, ObjKind::Bland(members.clone()), *ordrank),
                ObjRecord::Tapped { id, class, ordrank } => (*id, ObjKind::Tapped(class.clone()), *ordrank),
            };
            if id != i {
                return Err(Error::Data(format!("object {i} is labelled {id}")));
            }
            objs.push(Obj { kind, ordrank });
        }
        let frag = Fragment::from_objects(spec, h.depth, h.exhaustive, objs)?;
        let wevels: Vec<Vec<usize>> = frag.wevels().iter().map(|&s| frag.members(s).to_vec()).collect();
        if wevels != self.wevels {
            return Err(Error::Data("stored wevels disagree with the objects".into()));
        }
        Ok(frag)
    }

    pub fn parse(text: &str) -> Result<UniverseFile> {
        serde_json::from_str(text).map_err(|e| Error::Data(format!("universe file: {e}")))
    }

    /// Canonical text: pretty at the top level, one record per line.
    pub fn render(&self) -> String {
        let mut s = String::from("{\n");
        s += &format!("  \"header\": {},\n", line(&self.header));
        s += "  \"objects\": [";
        push_lines(&mut s, self.objects.iter().map(line));
        s += "],\n  \"wevels\": [";
        push_lines(&mut s, self.wevels.iter().map(line));
        s += "]\n}\n";
        s
    }
}

fn push_lines(s: &mut String, items: impl Iterator<Item = String>) {
    let items: Vec<String> = items.collect();
    if items.is_empty() {
        return;
    }
    s.push('\n');
    s.push_str(&items.iter().map(|i| format!("    {i}")).collect::<Vec<_>>().join(",\n"));
    s.push_str("\n  ");
}

fn line<T: Serialize>(v: &T) -> String {
    serde_json::to_string(v).expect("plain data serializes")
}

pub fn export_fragment(frag: &Fragment) -> String {
    UniverseFile::from_fragment(frag).render()
}

pub fn import_fragment(text: &str) -> Result<Fragment> {
    UniverseFile::parse(text)?.to_fragment()
}
