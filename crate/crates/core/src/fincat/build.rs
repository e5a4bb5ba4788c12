use std::collections::HashMap;

use super::{AxiomViolation, FinCategory, ViolationKind, NONE};
use crate::error::{Error, Result};

/// Assembles a category from named objects, arrows and composition entries.
///
/// Composites with an identity may be omitted; they are filled in. Every other
/// composable pair must be listed exactly once (repeats must agree).
#[derive(Clone, Debug, Default)]
pub struct CategoryBuilder {
    objects: Vec<String>,
    arrows: Vec<(String, String, String)>,
    identities: Vec<(String, String)>,
    entries: Vec<(String, String, String)>,
}

impl CategoryBuilder {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn object(mut self, name: &str) -> Self {
        self.objects.push(name.to_string());
        self
    }

    pub fn arrow(mut self, name: &str, src: &str, tgt: &str) -> Self {
        self.arrows.push((name.to_string(), src.to_string(), tgt.to_string()));
        self
    }

    pub fn identity(mut self, obj: &str, arrow: &str) -> Self {
        self.identities.push((obj.to_string(), arrow.to_string()));
        self
    }

    /// Declares `f ∘ g = h`.
    pub fn compose(mut self, f: &str, g: &str, h: &str) -> Self {
        self.entries.push((f.to_string(), g.to_string(), h.to_string()));
        self
    }

    pub fn build(self) -> Result<FinCategory> {
        let mut out = Vec::new();
        let viol = |kind, witness: Vec<usize>, detail: String| AxiomViolation { kind, witness, detail };
        let obj_idx: HashMap<&str, usize> = self.objects.iter().enumerate().map(|(i, s)| (s.as_str(), i)).collect();
        let arr_idx: HashMap<&str, usize> = self.arrows.iter().enumerate().map(|(i, a)| (a.0.as_str(), i)).collect();
        if obj_idx.len() != self.objects.len() || arr_idx.len() != self.arrows.len() {
            out.push(viol(ViolationKind::Contradiction, vec![], "duplicate names".into()));
        }
        let mut src = Vec::new();
        let mut tgt = Vec::new();
        for (name, s, t) in &self.arrows {
            match (obj_idx.get(s.as_str()), obj_idx.get(t.as_str())) {
                (Some(&s), Some(&t)) => {
                    src.push(s);
                    tgt.push(t);
                }
                _ => {
                    out.push(viol(ViolationKind::UnknownName, vec![], format!("endpoints of {name}")));
                    src.push(0);
                    tgt.push(0);
                }
            }
        }
        let mut ids = vec![usize::MAX; self.objects.len()];
        for (o, a) in &self.identities {
            match (obj_idx.get(o.as_str()), arr_idx.get(a.as_str())) {
                (Some(&o), Some(&a)) => {
                    if ids[o] != usize::MAX && ids[o] != a {
                        out.push(viol(ViolationKind::Contradiction, vec![ids[o], a], "two identities".into()));
                    }
                    ids[o] = a;
                }
                _ => out.push(viol(ViolationKind::UnknownName, vec![], format!("identity {o}:{a}"))),
            }
        }
        for (o, &i) in ids.iter().enumerate() {
            if i == usize::MAX {
                out.push(viol(ViolationKind::MissingIdentity, vec![], format!("object {}", self.objects[o])));
            } else if src[i] != o || tgt[i] != o {
                out.push(viol(ViolationKind::BadIdentity, vec![i], format!("object {}", self.objects[o])));
            }
        }
        if !out.is_empty() {
            return Err(Error::Axioms(out));
        }
        let n = self.arrows.len();
        let mut table = vec![NONE; n * n];
        for (f, g, h) in &self.entries {
            let (Some(&f), Some(&g), Some(&h)) =
                (arr_idx.get(f.as_str()), arr_idx.get(g.as_str()), arr_idx.get(h.as_str()))
            else {
                out.push(viol(ViolationKind::UnknownName, vec![], format!("entry {f}∘{g}={h}")));
                continue;
            };
            if src[f] != tgt[g] {
                out.push(viol(ViolationKind::Partiality, vec![f, g], String::new()));
                continue;
            }
            let slot = &mut table[f * n + g];
            if *slot != NONE && *slot as usize != h {
                out.push(viol(ViolationKind::Contradiction, vec![f, g, *slot as usize, h], String::new()));
            }
            *slot = h as u32;
        }
        for f in 0..n {
            let g = ids[src[f]];
            let slot = &mut table[f * n + g];
            if *slot == NONE {
                *slot = f as u32;
            }
            let g = ids[tgt[f]];
            let slot = &mut table[g * n + f];
            if *slot == NONE {
                *slot = f as u32;
            }
        }
        if !out.is_empty() {
            return Err(Error::Axioms(out));
        }
        let arr_names = self.arrows.iter().map(|a| a.0.clone()).collect();
        let c = FinCategory::assemble(self.objects, arr_names, src, tgt, ids, table);
        let v = c.violations();
        if v.is_empty() {
            Ok(c)
        } else {
            Err(Error::Axioms(v))
        }
    }
}
