//! Hopf categories: data, the axiom checker, and the constructors from a
//! comonoidal functor and a family of adapted cocommutative comonoids.

use std::collections::BTreeMap;

use serde_json::{json, Value};

use crate::coalg::{check_comonoid, check_comonoid_morphism, tensor_comonoid, Comonoid, HopfMonoidData};
use crate::cofunctor::{certify_adapted, mult_along, AdaptednessCertificate, ComonoidalFunctor};
use crate::error::{Error, Result};
use crate::morphism::{Kind, Morphism, ObjectRef};
use crate::scalar::{Rational, Scalar};
use crate::verdict::Verdict;

type Pair = (String, String);
type Triple = (String, String, String);

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct HopfCategoryData<S> {
    pub labels: Vec<String>,
    pub homs: BTreeMap<Pair, Comonoid<S>>,
    pub m: BTreeMap<Triple, Morphism<S>>,
    pub u: BTreeMap<String, Morphism<S>>,
    pub s: Option<BTreeMap<Pair, Morphism<S>>>,
}

fn pair(x: &str, y: &str) -> Pair {
    (x.to_string(), y.to_string())
}

fn triple(x: &str, y: &str, z: &str) -> Triple {
    (x.to_string(), y.to_string(), z.to_string())
}

impl<S: Scalar> HopfCategoryData<S> {
    pub fn hom(&self, x: &str, y: &str) -> Result<&Comonoid<S>> {
        self.homs
            .get(&pair(x, y))
            .ok_or_else(|| Error::ShapeMismatch(format!("no hom object A[{x},{y}]")))
    }

    pub fn mult(&self, x: &str, y: &str, z: &str) -> Result<&Morphism<S>> {
        self.m
            .get(&triple(x, y, z))
            .ok_or_else(|| Error::ShapeMismatch(format!("no composition m[{x},{y},{z}]")))
    }

    pub fn unit(&self, x: &str) -> Result<&Morphism<S>> {
        self.u
            .get(x)
            .ok_or_else(|| Error::ShapeMismatch(format!("no unit u[{x}]")))
    }

    pub fn antipode(&self, x: &str, y: &str) -> Result<&Morphism<S>> {
        self.s
            .as_ref()
            .and_then(|s| s.get(&pair(x, y)))
            .ok_or_else(|| Error::ShapeMismatch(format!("no antipode S[{x},{y}]")))
    }

    pub fn kind(&self) -> Option<Kind> {
        self.homs.values().next().map(Comonoid::kind)
    }

    /// Reduction modulo ℏ.
    pub fn constant_term(&self) -> HopfCategoryData<Rational> {
        let c = |m: &Morphism<S>| m.constant_term();
        HopfCategoryData {
            labels: self.labels.clone(),
            homs: self
                .homs
                .iter()
                .map(|(k, h)| {
                    (
                        k.clone(),
                        Comonoid {
                            obj: h.obj.clone(),
                            delta: c(&h.delta),
                            eps: c(&h.eps),
                        },
                    )
                })
                .collect(),
            m: self.m.iter().map(|(k, v)| (k.clone(), c(v))).collect(),
            u: self.u.iter().map(|(k, v)| (k.clone(), c(v))).collect(),
            s: self
                .s
                .as_ref()
                .map(|s| s.iter().map(|(k, v)| (k.clone(), c(v))).collect()),
        }
    }

    pub fn to_json(&self) -> Value {
        json!({
            "labels": self.labels,
            "homs": self.homs.iter().map(|((x, y), h)| json!({"x": x, "y": y, "comonoid": h.to_json()})).collect::<Vec<_>>(),
            "m": self.m.iter().map(|((x, y, z), m)| json!({"x": x, "y": y, "z": z, "map": m.to_json()})).collect::<Vec<_>>(),
            "u": self.u.iter().map(|(x, m)| json!({"x": x, "map": m.to_json()})).collect::<Vec<_>>(),
            "s": self.s.as_ref().map(|s| s.iter().map(|((x, y), m)| json!({"x": x, "y": y, "map": m.to_json()})).collect::<Vec<_>>()),
        })
    }
}

impl HopfCategoryData<Rational> {
    pub fn lift<T: Scalar>(&self) -> HopfCategoryData<T> {
        let l = |m: &Morphism<Rational>| m.lift::<T>();
        HopfCategoryData {
            labels: self.labels.clone(),
            homs: self
                .homs
                .iter()
                .map(|(k, h)| {
                    (
                        k.clone(),
                        Comonoid {
                            obj: h.obj.clone(),
                            delta: l(&h.delta),
                            eps: l(&h.eps),
                        },
                    )
                })
                .collect(),
            m: self.m.iter().map(|(k, v)| (k.clone(), l(v))).collect(),
            u: self.u.iter().map(|(k, v)| (k.clone(), l(v))).collect(),
            s: self
                .s
                .as_ref()
                .map(|s| s.iter().map(|(k, v)| (k.clone(), l(v))).collect()),
        }
    }
}

/// Every Hopf-category axiom on every tuple of labels.
pub fn check_hopf_category<S: Scalar>(h: &HopfCategoryData<S>) -> Verdict {
    let mut v = Verdict::new();
    let Some(kind) = h.kind() else {
        return v;
    };
    let labels = &h.labels;
    let id = |x: &str, y: &str| h.hom(x, y).map(|c| Morphism::<S>::identity(kind, &c.obj));

    for x in labels {
        for y in labels {
            match h.hom(x, y) {
                Ok(c) => v.extend_prefixed(&format!("hom[{x},{y}]"), check_comonoid(c, false)),
                Err(e) => {
                    v.check_bool(format!("hom[{x},{y}]"), "A[x,y] is present", false, Some(e.to_string()));
                }
            }
        }
    }

    for x in labels {
        match h.unit(x).and_then(|u| Ok((u, h.hom(x, x)?))) {
            Ok((u, axx)) => match check_comonoid_morphism(u, &Comonoid::unit(kind), axx) {
                Ok(r) => v.extend_prefixed(&format!("u-comonoid[{x}]"), r),
                Err(e) => {
                    v.check_bool(format!("u-comonoid[{x}]"), "u is a comonoid morphism", false, Some(e.to_string()));
                }
            },
            Err(e) => {
                v.check_bool(format!("u-comonoid[{x}]"), "u is a comonoid morphism", false, Some(e.to_string()));
            }
        }
        for y in labels {
            v.check_eq(
                format!("unit-left[{x},{y}]"),
                "m[x,x,y]∘(u_x⊗id) = id",
                (|| h.mult(x, x, y)?.compose(&h.unit(x)?.tensor(&id(x, y)?)?))(),
                id(x, y),
            );
            v.check_eq(
                format!("unit-right[{x},{y}]"),
                "m[x,y,y]∘(id⊗u_y) = id",
                (|| h.mult(x, y, y)?.compose(&id(x, y)?.tensor(h.unit(y)?)?))(),
                id(x, y),
            );
        }
    }

    for x in labels {
        for y in labels {
            for z in labels {
                let name = format!("m-comonoid[{x},{y},{z}]");
                let r = (|| {
                    let src = tensor_comonoid(h.hom(x, y)?, h.hom(y, z)?)?;
                    check_comonoid_morphism(h.mult(x, y, z)?, &src, h.hom(x, z)?)
                })();
                match r {
                    Ok(r) => v.extend_prefixed(&name, r),
                    Err(e) => {
                        v.check_bool(name, "m is a comonoid morphism", false, Some(e.to_string()));
                    }
                }
                for w in labels {
                    v.check_eq(
                        format!("assoc[{x},{y},{z},{w}]"),
                        "m[x,z,w]∘(m[x,y,z]⊗id) = m[x,y,w]∘(id⊗m[y,z,w])",
                        (|| h.mult(x, z, w)?.compose(&h.mult(x, y, z)?.tensor(&id(z, w)?)?))(),
                        (|| h.mult(x, y, w)?.compose(&id(x, y)?.tensor(h.mult(y, z, w)?)?))(),
                    );
                }
            }
        }
    }

    if h.s.is_some() {
        for x in labels {
            for y in labels {
                v.check_eq(
                    format!("antipode-left[{x},{y}]"),
                    "m[x,y,x]∘(id⊗S[x,y])∘Δ[x,y] = u_x∘ε[x,y]",
                    (|| {
                        let a = h.hom(x, y)?;
                        let s = id(x, y)?.tensor(h.antipode(x, y)?)?;
                        Morphism::chain(&[&a.delta, &s, h.mult(x, y, x)?])
                    })(),
                    (|| h.unit(x)?.compose(&h.hom(x, y)?.eps))(),
                );
                v.check_eq(
                    format!("antipode-right[{x},{y}]"),
                    "m[y,x,y]∘(S[x,y]⊗id)∘Δ[x,y] = u_y∘ε[x,y]",
                    (|| {
                        let a = h.hom(x, y)?;
                        let s = h.antipode(x, y)?.tensor(&id(x, y)?)?;
                        Morphism::chain(&[&a.delta, &s, h.mult(y, x, y)?])
                    })(),
                    (|| h.unit(y)?.compose(&h.hom(x, y)?.eps))(),
                );
            }
        }
    }
    v
}

/// The braiding used by the constructor; the plain symmetry or a deformation of it.
pub type Braiding<'a, S> = dyn Fn(&ObjectRef, &ObjectRef) -> Result<Morphism<S>> + 'a;

/// The symmetry of the source category.
pub fn symmetry<S: Scalar>(kind: Kind) -> impl Fn(&ObjectRef, &ObjectRef) -> Result<Morphism<S>> {
    move |x, y| Ok(Morphism::braiding(kind, x, y))
}

/// Builds the Hopf category on the given labelled comonoids with the symmetry of the source.
pub fn build_hopf_category<S: Scalar>(
    f: &dyn ComonoidalFunctor<S>,
    comonoids: &[(String, Comonoid<S>)],
) -> Result<HopfCategoryData<S>> {
    build_hopf_category_with(f, comonoids, &symmetry(f.source_kind()))
}

/// The constructor with an explicit braiding `σ`:
/// `Δ[x,y] = F²∘F(id⊗σ⊗id)∘F(Δx⊗Δy)`, `ε[x,y] = F⁰∘F(εx⊗εy)`,
/// `m[x,y,z] = F(id⊗ε_y⊗id)∘(γ^y_{x,z})⁻¹`, `u_x = F(Δx)∘χ_x⁻¹`, `S[x,y] = F(σ_{x,y})`.
pub fn build_hopf_category_with<S: Scalar>(
    f: &dyn ComonoidalFunctor<S>,
    comonoids: &[(String, Comonoid<S>)],
    sigma: &Braiding<'_, S>,
) -> Result<HopfCategoryData<S>> {
    let k = f.source_kind();
    for (i, (label, c)) in comonoids.iter().enumerate() {
        if comonoids[..i].iter().any(|(l, _)| l == label) {
            return Err(Error::Parse(format!("duplicate label `{label}`")));
        }
        let mut v = check_comonoid(c, false);
        v.check_eq("comonoid.cocomm", "σ∘Δ = Δ", sigma(&c.obj, &c.obj)?.compose(&c.delta), Ok(c.delta.clone()));
        if !v.passed() {
            let failed = v.first_failure().map(|r| r.check.clone()).unwrap_or_default();
            return Err(Error::NotCocommutative(format!("{label} ({failed})")));
        }
    }
    let pairs: Vec<(ObjectRef, ObjectRef)> = comonoids
        .iter()
        .flat_map(|(_, x)| comonoids.iter().map(move |(_, z)| (x.obj.clone(), z.obj.clone())))
        .collect();
    let mut certs: BTreeMap<String, AdaptednessCertificate<S>> = BTreeMap::new();
    for (label, c) in comonoids {
        let cert = certify_adapted(f, c, &pairs);
        if let Some(fail) = cert.failures.first() {
            return Err(Error::NotAdapted(format!("{label}: {} ({})", fail.map, fail.reason)));
        }
        certs.insert(label.clone(), cert);
    }

    let id = |o: &ObjectRef| Morphism::<S>::identity(k, o);
    let mut homs = BTreeMap::new();
    let mut s = BTreeMap::new();
    for (lx, x) in comonoids {
        for (ly, y) in comonoids {
            let twist = Morphism::tensor_all(&[&id(&x.obj), &sigma(&x.obj, &y.obj)?, &id(&y.obj)])?;
            let xy = x.obj.tensor(&y.obj);
            let delta = Morphism::chain(&[
                &f.apply_mor(&x.delta.tensor(&y.delta)?)?,
                &f.apply_mor(&twist)?,
                &f.f2(&xy, &xy)?,
            ])?;
            let eps = f.f0()?.compose(&f.apply_mor(&x.eps.tensor(&y.eps)?)?)?;
            homs.insert(
                pair(lx, ly),
                Comonoid {
                    obj: f.apply_obj(&xy)?,
                    delta,
                    eps,
                },
            );
            s.insert(pair(lx, ly), f.apply_mor(&sigma(&x.obj, &y.obj)?)?);
        }
    }
    let mut m = BTreeMap::new();
    for (lx, x) in comonoids {
        for (ly, y) in comonoids {
            for (lz, z) in comonoids {
                m.insert(triple(lx, ly, lz), mult_along(f, y, &x.obj, &z.obj, &certs[ly])?);
            }
        }
    }
    let mut u = BTreeMap::new();
    for (lx, x) in comonoids {
        let chi_inv = certs[lx].chi_inverse.as_ref().expect("complete certificate");
        u.insert(lx.clone(), f.apply_mor(&x.delta)?.compose(chi_inv)?);
    }
    Ok(HopfCategoryData {
        labels: comonoids.iter().map(|(l, _)| l.clone()).collect(),
        homs,
        m,
        u,
        s: Some(s),
    })
}

/// The one-object case: a Hopf monoid on `F(M⊗M)`.
pub fn build_hopf_monoid<S: Scalar>(f: &dyn ComonoidalFunctor<S>, m: &Comonoid<S>) -> Result<HopfMonoidData<S>> {
    build_hopf_monoid_with(f, m, &symmetry(f.source_kind()))
}

pub fn build_hopf_monoid_with<S: Scalar>(
    f: &dyn ComonoidalFunctor<S>,
    m: &Comonoid<S>,
    sigma: &Braiding<'_, S>,
) -> Result<HopfMonoidData<S>> {
    let label = "M".to_string();
    let h = build_hopf_category_with(f, &[(label.clone(), m.clone())], sigma)?;
    hopf_monoid_of(&h, &label)
}

/// Reads the endomorphism Hopf monoid `A[x,x]` off a Hopf category.
pub fn hopf_monoid_of<S: Scalar>(h: &HopfCategoryData<S>, x: &str) -> Result<HopfMonoidData<S>> {
    let a = h.hom(x, x)?;
    Ok(HopfMonoidData {
        obj: a.obj.clone(),
        mu: h.mult(x, x, x)?.clone(),
        eta: h.unit(x)?.clone(),
        delta: a.delta.clone(),
        eps: a.eps.clone(),
        antipode: h.antipode(x, x)?.clone(),
    })
}

/// A finite groupoid by tables. `compose[(x,y,z)][a][b]` is the composite of
/// `a ∈ hom(x,y)` followed by `b ∈ hom(y,z)`.
#[derive(Clone, Debug, PartialEq, Eq, Default)]
pub struct GroupoidTable {
    pub objects: Vec<String>,
    pub hom_sizes: BTreeMap<Pair, usize>,
    pub compose: BTreeMap<Triple, Vec<Vec<usize>>>,
    pub identity: BTreeMap<String, usize>,
    pub inverse: BTreeMap<Pair, Vec<usize>>,
}

impl GroupoidTable {
    /// Associativity, identities, and inverses.
    pub fn check(&self) -> Verdict {
        let mut v = Verdict::new();
        let obj = &self.objects;
        let size = |x: &str, y: &str| self.hom_sizes[&pair(x, y)];
        let c = |x: &str, y: &str, z: &str| &self.compose[&triple(x, y, z)];
        for x in obj {
            for y in obj {
                let ok = (0..size(x, y)).all(|a| {
                    c(x, x, y)[self.identity[x]][a] == a && c(x, y, y)[a][self.identity[y]] == a
                });
                v.check_bool(format!("groupoid.identity[{x},{y}]"), "1_x·a = a = a·1_y", ok, None);
                let inv = &self.inverse[&pair(x, y)];
                let ok = (0..size(x, y))
                    .all(|a| c(x, y, x)[a][inv[a]] == self.identity[x] && c(y, x, y)[inv[a]][a] == self.identity[y]);
                v.check_bool(format!("groupoid.inverse[{x},{y}]"), "a·a⁻¹ = 1_x, a⁻¹·a = 1_y", ok, None);
                for z in obj {
                    for w in obj {
                        let ok = (0..size(x, y)).all(|a| {
                            (0..size(y, z)).all(|b| {
                                (0..size(z, w)).all(|d| {
                                    c(x, z, w)[c(x, y, z)[a][b]][d] == c(x, y, w)[a][c(y, z, w)[b][d]]
                                })
                            })
                        });
                        v.check_bool(format!("groupoid.assoc[{x},{y},{z},{w}]"), "(ab)c = a(bc)", ok, None);
                    }
                }
            }
        }
        v
    }

    pub fn to_json(&self) -> Value {
        json!({
            "objects": self.objects,
            "homs": self.hom_sizes.iter().map(|((x, y), n)| json!({
                "x": x, "y": y, "size": n, "inverse": self.inverse[&pair(x, y)],
            })).collect::<Vec<_>>(),
            "compose": self.compose.iter().map(|((x, y, z), t)| json!({"x": x, "y": y, "z": z, "table": t})).collect::<Vec<_>>(),
            "identity": self.identity,
        })
    }
}

/// Reads a groupoid off a Hopf category in finite sets with diagonal homs.
pub fn extract_set_groupoid<S: Scalar>(h: &HopfCategoryData<S>) -> Result<GroupoidTable> {
    let mut out = GroupoidTable {
        objects: h.labels.clone(),
        ..Default::default()
    };
    if h.labels.is_empty() {
        return Ok(out);
    }
    if h.kind() != Some(Kind::Set) {
        return Err(Error::NotSetBacked);
    }
    let table = |m: &Morphism<S>| m.as_table().map(<[usize]>::to_vec).ok_or(Error::NotSetBacked);
    for x in &h.labels {
        for y in &h.labels {
            let a = h.hom(x, y)?;
            if *a != Comonoid::diagonal(&a.obj) {
                return Err(Error::NotDiagonal(x.clone(), y.clone()));
            }
            out.hom_sizes.insert(pair(x, y), a.obj.size());
            out.inverse.insert(pair(x, y), table(h.antipode(x, y)?)?);
        }
        out.identity.insert(x.clone(), table(h.unit(x)?)?[0]);
    }
    for x in &h.labels {
        for y in &h.labels {
            for z in &h.labels {
                let t = table(h.mult(x, y, z)?)?;
                let nb = out.hom_sizes[&pair(y, z)];
                out.compose
                    .insert(triple(x, y, z), t.chunks(nb.max(1)).map(<[usize]>::to_vec).collect());
            }
        }
    }
    let v = out.check();
    if let Some(f) = v.first_failure() {
        return Err(Error::VerificationFailed(format!("extracted groupoid fails {}", f.check)));
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use std::sync::Arc;

    use super::*;
    use crate::backend::{Atom, Backend, BackendKind};
    use crate::coalg::check_hopf_monoid;
    use crate::cofunctor::OrbitFunctor;
    use crate::group::GroupTable;

    fn torsors(g: &GroupTable) -> (OrbitFunctor, Vec<(String, Comonoid<Rational>)>) {
        let mut s = Atom::plain("S", g.order());
        s.permutations = Some(g.left_regular());
        let mut t = Atom::plain("T", g.order());
        t.permutations = Some(g.right_inverse_regular());
        let b = Arc::new(Backend::new(BackendKind::FinSetGSet, Some(g.clone()), None, vec![s, t]).unwrap());
        let comonoids = ["S", "T"]
            .iter()
            .map(|n| (n.to_string(), Comonoid::diagonal(&b.obj(&[n]).unwrap())))
            .collect();
        (OrbitFunctor::new(b).unwrap(), comonoids)
    }

    #[test]
    fn z2_torsor_category_passes() {
        let (f, cs) = torsors(&GroupTable::cyclic(2));
        let h = build_hopf_category(&f, &cs).unwrap();
        let v = check_hopf_category(&h);
        assert!(v.passed(), "{:?}", v.first_failure());
        assert!(h.homs.values().all(|c| c.obj.size() == 2));
        let g = extract_set_groupoid(&h).unwrap();
        assert_eq!(g.objects.len(), 2);
    }

    #[test]
    fn singleton_matches_hopf_monoid() {
        let (f, cs) = torsors(&GroupTable::symmetric3());
        let h = build_hopf_category(&f, &cs[..1]).unwrap();
        let hm = build_hopf_monoid(&f, &cs[0].1).unwrap();
        assert_eq!(hopf_monoid_of(&h, "S").unwrap(), hm);
        assert!(check_hopf_monoid(&hm).passed());
    }

    #[test]
    fn mutated_composition_fails() {
        let (f, cs) = torsors(&GroupTable::cyclic(3));
        let mut h = build_hopf_category(&f, &cs).unwrap();
        let key = triple("S", "T", "S");
        let m = h.m[&key].clone();
        let mut t = m.as_table().unwrap().to_vec();
        t[0] = (t[0] + 1) % m.cod.size();
        h.m.insert(key, Morphism::table(m.dom.clone(), m.cod.clone(), t).unwrap());
        let v = check_hopf_category(&h);
        let fail = v.first_failure().unwrap();
        assert!(fail.witness.is_some() || fail.note.is_some());
    }

    #[test]
    fn hand_built_pair_groupoid() {
        // Two objects, one arrow between each ordered pair.
        let labels = vec!["a".to_string(), "b".to_string()];
        let mut h = HopfCategoryData::<Rational> {
            labels: labels.clone(),
            homs: BTreeMap::new(),
            m: BTreeMap::new(),
            u: BTreeMap::new(),
            s: Some(BTreeMap::new()),
        };
        let obj = |x: &str, y: &str| ObjectRef::atom(format!("H{x}{y}"), 1);
        for x in &labels {
            h.u.insert(x.clone(), Morphism::table(ObjectRef::unit(), obj(x, x), vec![0]).unwrap());
            for y in &labels {
                h.homs.insert(pair(x, y), Comonoid::diagonal(&obj(x, y)));
                h.s.as_mut()
                    .unwrap()
                    .insert(pair(x, y), Morphism::table(obj(x, y), obj(y, x), vec![0]).unwrap());
                for z in &labels {
                    h.m.insert(
                        triple(x, y, z),
                        Morphism::table(obj(x, y).tensor(&obj(y, z)), obj(x, z), vec![0]).unwrap(),
                    );
                }
            }
        }
        assert!(check_hopf_category(&h).passed());
        let g = extract_set_groupoid(&h).unwrap();
        assert!(g.hom_sizes.values().all(|&n| n == 1));
    }

    #[test]
    fn empty_category() {
        let h = HopfCategoryData::<Rational> {
            labels: vec![],
            homs: BTreeMap::new(),
            m: BTreeMap::new(),
            u: BTreeMap::new(),
            s: None,
        };
        assert!(check_hopf_category(&h).is_empty());
        assert_eq!(extract_set_groupoid(&h).unwrap(), GroupoidTable::default());
    }

    #[test]
    fn non_transitive_comonoid_is_not_adapted() {
        let g = GroupTable::cyclic(2);
        let mut p = Atom::plain("P", 2);
        p.permutations = Some(vec![vec![0, 1], vec![0, 1]]);
        let b = Arc::new(Backend::new(BackendKind::FinSetGSet, Some(g), None, vec![p]).unwrap());
        let f = OrbitFunctor::new(b.clone()).unwrap();
        let c = Comonoid::<Rational>::diagonal(&b.obj(&["P"]).unwrap());
        assert!(matches!(build_hopf_monoid(&f, &c), Err(Error::NotAdapted(_))));
    }

    #[test]
    fn linear_category_is_not_a_groupoid() {
        let (f, cs) = torsors(&GroupTable::cyclic(2));
        let h = build_hopf_category(&f, &cs).unwrap();
        let mut lin = h.clone();
        for c in lin.homs.values_mut() {
            *c = c.linearize();
        }
        assert!(matches!(extract_set_groupoid(&lin), Err(Error::NotSetBacked)));
    }
}
