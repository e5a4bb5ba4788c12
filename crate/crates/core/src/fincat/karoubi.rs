use std::collections::HashMap;

use super::{Arr, FinCategory, Functor};

/// Idempotent completion with its embedding `o ↦ id_o`.
#[derive(Clone, Debug)]
pub struct Karoubi {
    pub category: FinCategory,
    /// Idempotent of the base category behind each object.
    pub idempotents: Vec<Arr>,
    /// `(target idempotent, underlying arrow, source idempotent)` for each arrow.
    pub arrows: Vec<(Arr, Arr, Arr)>,
    pub embedding: Functor,
}

/// Objects are idempotents `e`; arrows `e → e'` are arrows `f` with `e' ∘ f ∘ e = f`.
pub fn karoubi_envelope(c: &FinCategory) -> Karoubi {
    let idempotents: Vec<Arr> = c.arrows().filter(|&e| c.is_idempotent(e)).collect();
    let mut arrows = Vec::new();
    for (si, &e) in idempotents.iter().enumerate() {
        for (ti, &e2) in idempotents.iter().enumerate() {
            for &f in c.hom(c.src(e), c.src(e2)) {
                if c.comp(e2, c.comp(f, e)) == f {
                    arrows.push((ti, f, si));
                }
            }
        }
    }
    let index: HashMap<(usize, Arr, usize), usize> =
        arrows.iter().enumerate().map(|(k, &(t, f, s))| ((t, f, s), k)).collect();
    let ids: Vec<usize> = (0..idempotents.len()).map(|i| index[&(i, idempotents[i], i)]).collect();
    let names = idempotents.iter().map(|&e| c.arr_name(e).to_string()).collect();
    let arr_list = arrows
        .iter()
        .map(|&(t, f, s)| {
            (format!("{}:{}>{}", c.arr_name(f), c.arr_name(idempotents[s]), c.arr_name(idempotents[t])), s, t)
        })
        .collect();
    let category = FinCategory::from_fn_unchecked(names, arr_list, ids, |a, b| {
        let (t, f, _) = arrows[a];
        let (_, g, s) = arrows[b];
        index[&(t, c.comp(f, g), s)]
    });
    let obj_of_id: HashMap<Arr, usize> = idempotents.iter().enumerate().map(|(i, &e)| (e, i)).collect();
    let embedding = Functor {
        obj: c.objects().map(|o| obj_of_id[&c.id(o)]).collect(),
        arr: c.arrows().map(|f| index[&(obj_of_id[&c.id(c.tgt(f))], f, obj_of_id[&c.id(c.src(f))])]).collect(),
    };
    Karoubi {
        category,
        idempotents: idempotents.clone(),
        arrows: arrows.iter().map(|&(t, f, s)| (idempotents[t], f, idempotents[s])).collect(),
        embedding,
    }
}
