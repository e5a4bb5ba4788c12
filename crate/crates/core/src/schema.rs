//! Versioned JSON documents. Unknown fields are rejected; maps serialize with sorted keys.

use std::collections::BTreeMap;

use serde::de::DeserializeOwned;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::fieldgalois::{Fq, FqAlgebra, GAlgebra, Mat};
use crate::fincat::{Arr, CategoryBuilder, FinCategory, FinGroup, Functor};
use crate::limits::LimitDiagram;
use crate::topos::{CartRing, FinLattice, Presheaf};
use crate::torsors::{RepData, RightGRep};

pub const CATEGORY: &str = "category/v1";
pub const FUNCTOR: &str = "functor/v1";
pub const DIAGRAM: &str = "diagram/v1";
pub const PRESHEAF: &str = "presheaf/v1";
pub const LATTICE: &str = "lattice/v1";
pub const RING: &str = "ring/v1";
pub const TORSOR: &str = "torsor/v1";
pub const ALGEBRA: &str = "algebra/v1";

/// Parses JSON, reporting serde failures as schema errors located by line and column.
pub fn parse<T: DeserializeOwned>(text: &str) -> Result<T> {
    serde_json::from_str(text)
        .map_err(|e| Error::schema(format!("line {} column {}", e.line(), e.column()), e.to_string()))
}

pub fn to_json<T: Serialize>(doc: &T) -> String {
    // round-trip through Value so that object keys come out sorted
    let v = serde_json::to_value(doc).expect("documents serialize");
    serde_json::to_string_pretty(&v).expect("values serialize")
}

fn expect_schema(found: &str, want: &str, path: &str) -> Result<()> {
    if found == want {
        Ok(())
    } else {
        Err(Error::schema(format!("{path}schema"), format!("expected \"{want}\", found \"{found}\"")))
    }
}

fn lookup(names: &[String], name: &str, path: &str) -> Result<usize> {
    names.iter().position(|n| n == name).ok_or_else(|| Error::schema(path, format!("unknown name \"{name}\"")))
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ArrowDoc {
    pub id: String,
    pub src: String,
    pub tgt: String,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CategoryDoc {
    pub schema: String,
    pub objects: Vec<String>,
    pub arrows: Vec<ArrowDoc>,
    /// Entries `[f, g, f∘g]`; composites with identities may be omitted.
    #[serde(default)]
    pub compose: Vec<[String; 3]>,
    pub identities: BTreeMap<String, String>,
}

impl CategoryDoc {
    pub fn from_category(c: &FinCategory) -> CategoryDoc {
        let mut compose = Vec::new();
        for f in c.arrows().filter(|&f| !c.is_identity(f)) {
            for g in c.arrows().filter(|&g| !c.is_identity(g)) {
                if let Some(h) = c.compose(f, g) {
                    compose.push([c.arr_name(f), c.arr_name(g), c.arr_name(h)].map(String::from));
                }
            }
        }
        CategoryDoc {
            schema: CATEGORY.into(),
            objects: c.obj_names().to_vec(),
            arrows: c
                .arrows()
                .map(|a| ArrowDoc {
                    id: c.arr_name(a).into(),
                    src: c.obj_name(c.src(a)).into(),
                    tgt: c.obj_name(c.tgt(a)).into(),
                })
                .collect(),
            compose,
            identities: c.objects().map(|o| (c.obj_name(o).to_string(), c.arr_name(c.id(o)).to_string())).collect(),
        }
    }

    pub fn to_category(&self) -> Result<FinCategory> {
        self.to_category_at("")
    }

    fn to_category_at(&self, path: &str) -> Result<FinCategory> {
        expect_schema(&self.schema, CATEGORY, path)?;
        let mut b = CategoryBuilder::new();
        for o in &self.objects {
            b = b.object(o);
        }
        for a in &self.arrows {
            b = b.arrow(&a.id, &a.src, &a.tgt);
        }
        for (o, a) in &self.identities {
            b = b.identity(o, a);
        }
        for [f, g, h] in &self.compose {
            b = b.compose(f, g, h);
        }
        b.build()
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FunctorDoc {
    pub schema: String,
    pub object_map: BTreeMap<String, String>,
    pub arrow_map: BTreeMap<String, String>,
}

impl FunctorDoc {
    pub fn from_functor(dom: &FinCategory, cod: &FinCategory, f: &Functor) -> FunctorDoc {
        FunctorDoc {
            schema: FUNCTOR.into(),
            object_map: dom.objects().map(|o| (dom.obj_name(o).into(), cod.obj_name(f.obj[o]).into())).collect(),
            arrow_map: dom.arrows().map(|a| (dom.arr_name(a).into(), cod.arr_name(f.arr[a]).into())).collect(),
        }
    }

    pub fn to_functor(&self, dom: &FinCategory, cod: &FinCategory) -> Result<Functor> {
        self.to_functor_at(dom, cod, "")
    }

    fn to_functor_at(&self, dom: &FinCategory, cod: &FinCategory, path: &str) -> Result<Functor> {
        expect_schema(&self.schema, FUNCTOR, path)?;
        let mut obj = Vec::new();
        for o in dom.objects() {
            let p = format!("{path}object_map.{}", dom.obj_name(o));
            let img = self.object_map.get(dom.obj_name(o)).ok_or_else(|| Error::schema(&p, "missing"))?;
            obj.push(lookup(cod.obj_names(), img, &p)?);
        }
        let mut arr = Vec::new();
        for a in dom.arrows() {
            let p = format!("{path}arrow_map.{}", dom.arr_name(a));
            let img = self.arrow_map.get(dom.arr_name(a)).ok_or_else(|| Error::schema(&p, "missing"))?;
            arr.push(lookup(cod.arr_names(), img, &p)?);
        }
        if self.object_map.len() != dom.num_objects() || self.arrow_map.len() != dom.num_arrows() {
            return Err(Error::schema(path, "maps mention names outside the domain"));
        }
        let f = Functor { obj, arr };
        f.check(dom, cod).map_err(|e| Error::schema(path, format!("not a functor: {e}")))?;
        Ok(f)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum DiagramKind {
    Product,
    Equalizer,
    Equifier,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct DiagramDoc {
    pub schema: String,
    pub kind: DiagramKind,
    pub g: CategoryDoc,
    pub h: CategoryDoc,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub phi: Option<FunctorDoc>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub psi: Option<FunctorDoc>,
    /// Components of the two 2-cells `φ ⇒ ψ` of an equifier, by object of `g`.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub xi: Option<BTreeMap<String, String>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub xi2: Option<BTreeMap<String, String>>,
}

impl DiagramDoc {
    pub fn from_diagram(d: &LimitDiagram) -> DiagramDoc {
        let comps = |g: &FinCategory, h: &FinCategory, xi: &[Arr]| -> BTreeMap<String, String> {
            g.objects().map(|o| (g.obj_name(o).to_string(), h.arr_name(xi[o]).to_string())).collect()
        };
        match d {
            LimitDiagram::Product { g, h } => DiagramDoc {
                schema: DIAGRAM.into(),
                kind: DiagramKind::Product,
                g: CategoryDoc::from_category(g),
                h: CategoryDoc::from_category(h),
                phi: None,
                psi: None,
                xi: None,
                xi2: None,
            },
            LimitDiagram::Equalizer { g, h, phi, psi } => DiagramDoc {
                schema: DIAGRAM.into(),
                kind: DiagramKind::Equalizer,
                g: CategoryDoc::from_category(g),
                h: CategoryDoc::from_category(h),
                phi: Some(FunctorDoc::from_functor(g, h, phi)),
                psi: Some(FunctorDoc::from_functor(g, h, psi)),
                xi: None,
                xi2: None,
            },
            LimitDiagram::Equifier { g, h, phi, psi, xi, xi2 } => DiagramDoc {
                schema: DIAGRAM.into(),
                kind: DiagramKind::Equifier,
                g: CategoryDoc::from_category(g),
                h: CategoryDoc::from_category(h),
                phi: Some(FunctorDoc::from_functor(g, h, phi)),
                psi: Some(FunctorDoc::from_functor(g, h, psi)),
                xi: Some(comps(g, h, xi)),
                xi2: Some(comps(g, h, xi2)),
            },
        }
    }

    pub fn to_diagram(&self) -> Result<LimitDiagram> {
        expect_schema(&self.schema, DIAGRAM, "")?;
        let g = self.g.to_category_at("g.")?.into_groupoid().map_err(|e| Error::schema("g", e.to_string()))?;
        let h = self.h.to_category_at("h.")?.into_groupoid().map_err(|e| Error::schema("h", e.to_string()))?;
        if self.kind == DiagramKind::Product {
            return Ok(LimitDiagram::Product { g, h });
        }
        let phi = need(&self.phi, "phi")?.to_functor_at(&g, &h, "phi.")?;
        let psi = need(&self.psi, "psi")?.to_functor_at(&g, &h, "psi.")?;
        if self.kind == DiagramKind::Equalizer {
            return Ok(LimitDiagram::Equalizer { g, h, phi, psi });
        }
        let comps = |m: &Option<BTreeMap<String, String>>, p: &str| -> Result<Vec<Arr>> {
            let m = m.as_ref().ok_or_else(|| Error::schema(p, "required for an equifier"))?;
            let v = g
                .objects()
                .map(|o| {
                    let q = format!("{p}.{}", g.obj_name(o));
                    let a = m.get(g.obj_name(o)).ok_or_else(|| Error::schema(&q, "missing"))?;
                    let a = lookup(h.arr_names(), a, &q)?;
                    if h.src(a) != phi.obj[o] || h.tgt(a) != psi.obj[o] {
                        return Err(Error::schema(&q, "component is not an arrow φ(o) → ψ(o)"));
                    }
                    Ok(a)
                })
                .collect::<Result<Vec<_>>>()?;
            if !crate::fincat::is_natural(&g, &h, &phi, &psi, &v) {
                return Err(Error::schema(p, "components are not natural"));
            }
            Ok(v)
        };
        let xi = comps(&self.xi, "xi")?;
        let xi2 = comps(&self.xi2, "xi2")?;
        Ok(LimitDiagram::Equifier { g, h, phi, psi, xi, xi2 })
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct LatticeDoc {
    pub schema: String,
    pub elements: Vec<String>,
    /// Pairs `[a, b]` with `b` covering `a`.
    pub covers: Vec<[String; 2]>,
}

impl LatticeDoc {
    pub fn from_lattice(l: &FinLattice) -> LatticeDoc {
        LatticeDoc {
            schema: LATTICE.into(),
            elements: (0..l.size()).map(|a| l.name(a).to_string()).collect(),
            covers: l.covers().iter().map(|&(a, b)| [l.name(a).to_string(), l.name(b).to_string()]).collect(),
        }
    }

    pub fn to_lattice(&self) -> Result<FinLattice> {
        self.to_lattice_at("")
    }

    fn to_lattice_at(&self, path: &str) -> Result<FinLattice> {
        expect_schema(&self.schema, LATTICE, path)?;
        let covers = self
            .covers
            .iter()
            .map(|[a, b]| Ok((lookup(&self.elements, a, path)?, lookup(&self.elements, b, path)?)))
            .collect::<Result<Vec<_>>>()?;
        FinLattice::from_covers(self.elements.clone(), &covers)
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PresheafDoc {
    pub schema: String,
    pub base: CategoryDoc,
    pub sets: BTreeMap<String, Vec<String>>,
    /// Per arrow `f: a → b`, the image in `sets[b]` of each element of `sets[a]`, in order.
    pub maps: BTreeMap<String, Vec<String>>,
}

impl PresheafDoc {
    pub fn from_presheaf(c: &FinCategory, p: &Presheaf) -> PresheafDoc {
        let name = |o: usize, x: usize| format!("{}{}", c.obj_name(o), x);
        PresheafDoc {
            schema: PRESHEAF.into(),
            base: CategoryDoc::from_category(c),
            sets: c
                .objects()
                .map(|o| (c.obj_name(o).to_string(), (0..p.sets[o]).map(|x| name(o, x)).collect()))
                .collect(),
            maps: c
                .arrows()
                .map(|f| (c.arr_name(f).to_string(), p.maps[f].iter().map(|&y| name(c.tgt(f), y)).collect()))
                .collect(),
        }
    }

    pub fn to_presheaf(&self) -> Result<(FinCategory, Presheaf)> {
        expect_schema(&self.schema, PRESHEAF, "")?;
        let c = self.base.to_category_at("base.")?;
        let elems = |o: usize| -> Result<&Vec<String>> {
            self.sets.get(c.obj_name(o)).ok_or_else(|| Error::schema(format!("sets.{}", c.obj_name(o)), "missing"))
        };
        let sets = c.objects().map(|o| elems(o).map(|v| v.len())).collect::<Result<Vec<_>>>()?;
        let mut maps = Vec::new();
        for f in c.arrows() {
            let p = format!("maps.{}", c.arr_name(f));
            let m = self.maps.get(c.arr_name(f)).ok_or_else(|| Error::schema(&p, "missing"))?;
            maps.push(m.iter().map(|y| lookup(elems(c.tgt(f))?, y, &p)).collect::<Result<Vec<_>>>()?);
        }
        let ps = Presheaf { sets, maps };
        ps.check(&c).map_err(|e| Error::schema("maps", e))?;
        Ok((c, ps))
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum RingKind {
    Finset,
    Presheaf,
    Lattice,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RingDoc {
    pub schema: String,
    pub kind: RingKind,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub base: Option<CategoryDoc>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub lattice: Option<LatticeDoc>,
}

impl RingDoc {
    pub fn from_ring(r: &CartRing) -> RingDoc {
        let (kind, base, lattice) = match r {
            CartRing::FinSet => (RingKind::Finset, None, None),
            CartRing::Presheaf(c) => (RingKind::Presheaf, Some(CategoryDoc::from_category(c)), None),
            CartRing::Lattice(l) => (RingKind::Lattice, None, Some(LatticeDoc::from_lattice(l))),
        };
        RingDoc { schema: RING.into(), kind, base, lattice }
    }

    pub fn to_ring(&self) -> Result<CartRing> {
        self.to_ring_at("")
    }

    fn to_ring_at(&self, path: &str) -> Result<CartRing> {
        expect_schema(&self.schema, RING, path)?;
        match (self.kind, &self.base, &self.lattice) {
            (RingKind::Finset, None, None) => Ok(CartRing::FinSet),
            (RingKind::Presheaf, Some(b), None) => Ok(CartRing::Presheaf(b.to_category_at(&format!("{path}base."))?)),
            (RingKind::Lattice, None, Some(l)) => Ok(CartRing::Lattice(l.to_lattice_at(&format!("{path}lattice."))?)),
            _ => Err(Error::schema(format!("{path}kind"), "kind does not match the fields present")),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TorsorDoc {
    pub schema: String,
    pub ring: RingDoc,
    pub groupoid: CategoryDoc,
    /// Carriers per object and action maps per arrow (per base object for presheaves).
    pub data: RepData,
}

impl TorsorDoc {
    pub fn from_rep(x: &RightGRep) -> TorsorDoc {
        TorsorDoc {
            schema: TORSOR.into(),
            ring: RingDoc::from_ring(&x.ring),
            groupoid: CategoryDoc::from_category(&x.g),
            data: x.data.clone(),
        }
    }

    pub fn to_rep(&self) -> Result<RightGRep> {
        expect_schema(&self.schema, TORSOR, "")?;
        let ring = self.ring.to_ring_at("ring.")?;
        let g = self
            .groupoid
            .to_category_at("groupoid.")?
            .into_groupoid()
            .map_err(|e| Error::schema("groupoid", e.to_string()))?;
        let x = RightGRep { ring, g, data: self.data.clone() };
        x.check().map_err(|e| Error::schema("data", e.to_string()))?;
        Ok(x)
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct AlgebraDoc {
    pub schema: String,
    pub p: usize,
    /// Monic modulus of `F_q` over `F_p`, low to high; `[0, 1]` for the prime field.
    pub modulus: Vec<usize>,
    pub dim: usize,
    /// `structure_constants[i][j]` is the coordinate vector of `bᵢ·bⱼ`.
    pub structure_constants: Vec<Vec<Vec<usize>>>,
    pub unit: Vec<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub group: Option<String>,
    /// Row-major action matrices, one per group element.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub action: Option<Vec<Vec<Vec<usize>>>>,
}

impl AlgebraDoc {
    pub fn from_algebra(r: &FqAlgebra) -> AlgebraDoc {
        let n = r.dim();
        AlgebraDoc {
            schema: ALGEBRA.into(),
            p: r.field().characteristic(),
            modulus: r.field().modulus().to_vec(),
            dim: n,
            structure_constants: (0..n)
                .map(|i| (0..n).map(|j| r.structure_constants()[i * n + j].clone()).collect())
                .collect(),
            unit: r.unit().to_vec(),
            group: None,
            action: None,
        }
    }

    pub fn from_g_algebra(r: &GAlgebra) -> AlgebraDoc {
        let n = r.algebra.dim();
        AlgebraDoc {
            group: Some(r.group.label().to_string()),
            action: Some(r.action.iter().map(|m| m.data.chunks(n).map(|row| row.to_vec()).collect()).collect()),
            ..AlgebraDoc::from_algebra(&r.algebra)
        }
    }

    pub fn to_algebra(&self) -> Result<FqAlgebra> {
        expect_schema(&self.schema, ALGEBRA, "")?;
        let field =
            Fq::with_modulus(self.p, self.modulus.clone()).map_err(|e| Error::schema("modulus", e.to_string()))?;
        let n = self.dim;
        if self.structure_constants.len() != n || self.structure_constants.iter().any(|r| r.len() != n) {
            return Err(Error::schema("structure_constants", format!("expected {n}×{n} vectors")));
        }
        let consts = self.structure_constants.iter().flatten().cloned().collect();
        FqAlgebra::new(field, n, consts, self.unit.clone())
            .map_err(|e| Error::schema("structure_constants", e.to_string()))
    }

    /// The algebra with its action; a missing action is trivial, a missing group is `1`.
    pub fn to_g_algebra(&self) -> Result<GAlgebra> {
        let algebra = self.to_algebra()?;
        let label = self.group.as_deref().unwrap_or("1");
        let group =
            FinGroup::by_name(label).ok_or_else(|| Error::schema("group", format!("unknown group \"{label}\"")))?;
        let Some(action) = &self.action else {
            return Ok(GAlgebra::trivial(algebra, group));
        };
        let n = self.dim;
        if action.len() != group.order() || action.iter().any(|m| m.len() != n || m.iter().any(|r| r.len() != n)) {
            return Err(Error::schema("action", format!("expected {} matrices of size {n}×{n}", group.order())));
        }
        let action = action.iter().map(|m| Mat { rows: n, cols: n, data: m.concat() }).collect();
        let r = GAlgebra { algebra, group, action };
        r.check().map_err(|e| Error::schema("action", e.to_string()))?;
        Ok(r)
    }
}

fn need<'a>(f: &'a Option<FunctorDoc>, path: &str) -> Result<&'a FunctorDoc> {
    f.as_ref().ok_or_else(|| Error::schema(path, "required for this kind"))
}

/// The `schema` tag of a document, read without validating the rest.
pub fn schema_of(text: &str) -> Result<String> {
    #[derive(Deserialize)]
    struct Tag {
        schema: String,
    }
    let t: Tag = serde_json::from_str(text).map_err(|e| Error::schema("schema", e.to_string()))?;
    Ok(t.schema)
}

/// Parses and fully validates any known document; returns its schema tag.
pub fn validate(text: &str) -> Result<String> {
    let tag = schema_of(text)?;
    match tag.as_str() {
        CATEGORY => drop(parse::<CategoryDoc>(text)?.to_category()?),
        DIAGRAM => drop(parse::<DiagramDoc>(text)?.to_diagram()?),
        PRESHEAF => drop(parse::<PresheafDoc>(text)?.to_presheaf()?),
        LATTICE => drop(parse::<LatticeDoc>(text)?.to_lattice()?),
        RING => drop(parse::<RingDoc>(text)?.to_ring()?),
        TORSOR => drop(parse::<TorsorDoc>(text)?.to_rep()?),
        ALGEBRA => drop(parse::<AlgebraDoc>(text)?.to_g_algebra()?),
        FUNCTOR => {
            parse::<FunctorDoc>(text)?;
        }
        other => return Err(Error::schema("schema", format!("unknown schema \"{other}\""))),
    }
    Ok(tag)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::corpus::get;
    use proptest::prelude::*;

    fn schema_path(r: Result<impl std::fmt::Debug>) -> String {
        match r {
            Err(Error::Schema { path, .. }) => path,
            other => panic!("expected a schema error, got {other:?}"),
        }
    }

    #[test]
    fn unknown_fields_and_tags_are_rejected() {
        let text = get("category/terminal").unwrap().replacen('{', "{\"extra\": 1,", 1);
        assert!(schema_path(validate(&text)).starts_with("line"));
        let text = get("category/terminal").unwrap().replace("category/v1", "category/v9");
        assert_eq!(schema_path(validate(&text)), "schema");
        assert_eq!(schema_path(validate("[1]")), "schema");
    }

    #[test]
    fn semantic_failures_carry_paths() {
        let g = FinCategory::from_group(&FinGroup::cyclic(2));
        let mut doc: FunctorDoc = parse(get("functor/bz2_identity").unwrap()).unwrap();
        doc.arrow_map.insert("1".into(), "7".into());
        assert_eq!(schema_path(doc.to_functor(&g, &g)), "arrow_map.1");

        let mut doc: AlgebraDoc = parse(get("algebra/galois_z2").unwrap()).unwrap();
        doc.action.as_mut().unwrap()[1][0][0] ^= 1;
        assert_eq!(schema_path(doc.to_g_algebra()), "action");

        let mut doc: RingDoc = parse(get("ring/finset").unwrap()).unwrap();
        doc.kind = RingKind::Lattice;
        assert_eq!(schema_path(doc.to_ring()), "kind");

        let mut doc: DiagramDoc = parse(get("diagram/equalizer_bz2").unwrap()).unwrap();
        doc.psi = None;
        assert_eq!(schema_path(doc.to_diagram()), "psi");

        // non-identity composites must be listed
        let mut doc: CategoryDoc = parse(get("category/bz2").unwrap()).unwrap();
        doc.compose.clear();
        assert!(doc.to_category().is_err());
    }

    #[test]
    fn algebra_and_torsor_round_trips() {
        for name in ["algebra/f4", "algebra/f2_split", "algebra/f2_dual_numbers", "algebra/galois_z2"] {
            let doc: AlgebraDoc = parse(get(name).unwrap()).unwrap();
            let r = doc.to_g_algebra().unwrap();
            let back = if doc.action.is_some() {
                AlgebraDoc::from_g_algebra(&r)
            } else {
                AlgebraDoc::from_algebra(&r.algebra)
            };
            assert_eq!(back, doc, "{name}");
        }
        let doc: TorsorDoc = parse(get("torsor/regular_bz2").unwrap()).unwrap();
        assert_eq!(TorsorDoc::from_rep(&doc.to_rep().unwrap()), doc);
        let doc: PresheafDoc = parse(get("presheaf/parallel_pair").unwrap()).unwrap();
        let (c, p) = doc.to_presheaf().unwrap();
        assert_eq!(PresheafDoc::from_presheaf(&c, &p), doc);
    }

    proptest! {
        #[test]
        fn category_documents_round_trip(k in 1usize..7, n in 1usize..4, which in 0usize..3) {
            let c = match which {
                0 => FinCategory::from_group(&FinGroup::cyclic(k)),
                1 => FinCategory::codiscrete(n),
                _ => FinCategory::from_group(&FinGroup::dihedral(k.max(3))).disjoint_union(&FinCategory::discrete(n)),
            };
            let text = to_json(&CategoryDoc::from_category(&c));
            prop_assert_eq!(validate(&text).unwrap(), CATEGORY);
            prop_assert_eq!(parse::<CategoryDoc>(&text).unwrap().to_category().unwrap(), c);
        }
    }
}
