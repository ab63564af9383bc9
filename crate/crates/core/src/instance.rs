//! Instance files: a backend, a functor choice, labelled comonoids and the
//! optional Lie bialgebra, deformation and truncated-UEA blocks.

use std::collections::BTreeMap;
use std::path::Path;
use std::sync::Arc;

use serde::Deserialize;
use serde_json::Value;

use crate::backend::{Atom, Backend, BackendKind};
use crate::coalg::Comonoid;
use crate::cofunctor::{ComonoidalFunctor, IdentityFunctor, OrbitFunctor, QuotientFunctor};
use crate::deform::{InfCocommutativity, PreCartierData};
use crate::error::{Error, Result};
use crate::group::GroupTable;
use crate::liebialg::{LieBialgebra, TwistElement};
use crate::matrix::Matrix;
use crate::morphism::{Kind, Morphism, ObjectRef};
use crate::scalar::{parse_rational, Rational, Scalar};

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct RawInstance {
    name: Option<String>,
    backend: Option<String>,
    scalar_ring: Option<RawRing>,
    group: Option<RawGroup>,
    lie_bialgebra: Option<RawLie>,
    functor: Option<String>,
    #[serde(default)]
    atoms: Vec<RawAtom>,
    #[serde(default)]
    comonoids: Vec<RawComonoid>,
    sample: Option<Vec<Vec<String>>>,
    deformation: Option<RawDeformation>,
    uea: Option<RawUea>,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct RawRing {
    kind: String,
    order: Option<usize>,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct RawGroup {
    table: Option<Vec<Vec<usize>>>,
    generators: Option<Vec<Vec<usize>>>,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct RawLie {
    dim: usize,
    #[serde(default)]
    bracket: Vec<(usize, usize, usize, Value)>,
    #[serde(default)]
    cobracket: Vec<(usize, usize, usize, Value)>,
    #[serde(default)]
    twists: Vec<Value>,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct RawAtom {
    name: String,
    size: usize,
    permutations: Option<Vec<Vec<usize>>>,
    /// `"natural"`, `"left-regular"` or `"right-inverse-regular"`.
    action: Option<String>,
    rho: Option<Vec<Value>>,
    pi: Option<Value>,
    pistar: Option<Value>,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct RawComonoid {
    label: String,
    obj: Vec<String>,
    kind: Option<String>,
    delta: Option<Value>,
    eps: Option<Value>,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct RawDeformation {
    order: usize,
    r: Option<Value>,
    #[serde(default)]
    t: Vec<RawT>,
    #[serde(default)]
    overrides: Vec<RawOverride>,
    inf_cocommutative: Option<String>,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct RawT {
    x: String,
    y: String,
    matrix: Value,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct RawOverride {
    x: Vec<String>,
    y: Vec<String>,
    matrix: Value,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct RawUea {
    degree: usize,
    check_degree: Option<usize>,
}

/// Which comonoidal functor an instance uses.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum FunctorChoice {
    Identity,
    Orbits,
    GroupCoinvariants,
    DyCoinvariants,
}

impl FunctorChoice {
    fn parse(s: &str) -> Result<Self> {
        Ok(match s {
            "identity" => Self::Identity,
            "orbits" => Self::Orbits,
            "group-coinvariants" => Self::GroupCoinvariants,
            "dy-coinvariants" => Self::DyCoinvariants,
            other => return Err(Error::Parse(format!("unknown functor `{other}`"))),
        })
    }

    pub fn label(self) -> &'static str {
        match self {
            Self::Identity => "identity",
            Self::Orbits => "orbits",
            Self::GroupCoinvariants => "group-coinvariants",
            Self::DyCoinvariants => "dy-coinvariants",
        }
    }
}

/// A concrete functor of one of the shipped kinds.
pub enum AnyFunctor {
    Identity(IdentityFunctor),
    Orbits(OrbitFunctor),
    Quotient(QuotientFunctor),
}

impl AnyFunctor {
    pub fn as_quotient(&self) -> Option<&QuotientFunctor> {
        match self {
            Self::Quotient(q) => Some(q),
            _ => None,
        }
    }
}

macro_rules! delegate {
    ($self:ident, $f:ident => $body:expr) => {
        match $self {
            AnyFunctor::Identity($f) => $body,
            AnyFunctor::Orbits($f) => $body,
            AnyFunctor::Quotient($f) => $body,
        }
    };
}

impl<S: Scalar> ComonoidalFunctor<S> for AnyFunctor {
    fn name(&self) -> &str {
        delegate!(self, f => ComonoidalFunctor::<S>::name(f))
    }
    fn source_kind(&self) -> Kind {
        delegate!(self, f => ComonoidalFunctor::<S>::source_kind(f))
    }
    fn target_kind(&self) -> Kind {
        delegate!(self, f => ComonoidalFunctor::<S>::target_kind(f))
    }
    fn apply_obj(&self, x: &ObjectRef) -> Result<ObjectRef> {
        delegate!(self, f => ComonoidalFunctor::<S>::apply_obj(f, x))
    }
    fn apply_mor(&self, m: &Morphism<S>) -> Result<Morphism<S>> {
        delegate!(self, f => f.apply_mor(m))
    }
    fn f2(&self, x: &ObjectRef, y: &ObjectRef) -> Result<Morphism<S>> {
        delegate!(self, f => ComonoidalFunctor::<S>::f2(f, x, y))
    }
    fn f0(&self) -> Result<Morphism<S>> {
        delegate!(self, f => ComonoidalFunctor::<S>::f0(f))
    }
}

pub struct LieConfig {
    pub bialgebra: LieBialgebra,
    pub twists: Vec<TwistElement>,
}

pub struct DeformationConfig {
    pub order: usize,
    pub pre_cartier: PreCartierData,
    pub mode: InfCocommutativity,
}

#[derive(Clone, Copy, Debug)]
pub struct UeaConfig {
    pub degree: usize,
    pub check_degree: usize,
}

pub struct Instance {
    pub name: String,
    pub backend: Arc<Backend>,
    /// `Some(K)` for an ℏ-series scalar ring.
    pub hseries_order: Option<usize>,
    pub functor_choice: Option<FunctorChoice>,
    pub comonoids: Vec<(String, Comonoid<Rational>)>,
    pub sample: Vec<ObjectRef>,
    pub lie: Option<LieConfig>,
    pub deformation: Option<DeformationConfig>,
    pub uea: Option<UeaConfig>,
}

fn parse_matrix(v: &Value, rows: usize, cols: usize, what: &str) -> Result<Matrix<Rational>> {
    let m = Matrix::<Rational>::from_json(v, Some(cols))?;
    if m.shape() != (rows, cols) {
        return Err(Error::Parse(format!(
            "{what}: expected {rows}×{cols} matrix, found {}×{}",
            m.rows(),
            m.cols()
        )));
    }
    Ok(m)
}

fn parse_entries(entries: &[(usize, usize, usize, Value)]) -> Result<Vec<(usize, usize, usize, Rational)>> {
    entries
        .iter()
        .map(|(i, j, k, c)| Ok((*i, *j, *k, parse_rational(c)?)))
        .collect()
}

fn parse_morphism(v: &Value, dom: &ObjectRef, cod: &ObjectRef, kind: Kind, what: &str) -> Result<Morphism<Rational>> {
    let obj = v
        .as_object()
        .ok_or_else(|| Error::Parse(format!("{what}: expected {{\"table\"}} or {{\"matrix\"}}")))?;
    match (obj.get("table"), obj.get("matrix"), kind) {
        (Some(t), None, Kind::Set) => {
            let table: Vec<usize> = serde_json::from_value(t.clone())
                .map_err(|e| Error::Parse(format!("{what}: {e}")))?;
            Morphism::table(dom.clone(), cod.clone(), table)
        }
        (None, Some(m), Kind::Linear) => {
            Morphism::matrix(dom.clone(), cod.clone(), parse_matrix(m, cod.size(), dom.size(), what)?)
        }
        _ => Err(Error::Parse(format!(
            "{what}: {} backends take {}",
            if kind == Kind::Set { "set" } else { "linear" },
            if kind == Kind::Set { "a table" } else { "a matrix" }
        ))),
    }
    .map_err(|e| match e {
        Error::Parse(_) => e,
        other => Error::Parse(format!("{what}: {other}")),
    })
}

impl Instance {
    pub fn from_path(path: impl AsRef<Path>) -> Result<Self> {
        Self::from_bytes(&std::fs::read(path)?)
    }

    pub fn from_bytes(bytes: &[u8]) -> Result<Self> {
        let raw: RawInstance = serde_json::from_slice(bytes).map_err(|e| Error::Parse(e.to_string()))?;
        Self::from_raw(raw).map_err(|e| match e {
            Error::Parse(_) | Error::Io(_) => e,
            other => Error::Parse(other.to_string()),
        })
    }

    fn from_raw(raw: RawInstance) -> Result<Self> {
        let kind = match raw.backend.as_deref().unwrap_or("finset-gset") {
            "finset-gset" => BackendKind::FinSetGSet,
            "linrep" => BackendKind::LinRep,
            "dy" => BackendKind::Dy,
            other => return Err(Error::Parse(format!("unknown backend `{other}`"))),
        };
        let hseries_order = match &raw.scalar_ring {
            None => None,
            Some(r) => match r.kind.as_str() {
                "rational" => None,
                "hseries" => Some(r.order.ok_or_else(|| Error::Parse("hseries ring needs an order".into()))?),
                other => return Err(Error::Parse(format!("unsupported scalar ring `{other}`"))),
            },
        };
        if hseries_order.is_some() && raw.deformation.is_none() {
            return Err(Error::Parse("an hseries scalar ring needs a deformation block".into()));
        }

        let (group, natural) = match raw.group {
            None => (None, None),
            Some(RawGroup {
                table: Some(t),
                generators: None,
            }) => (Some(GroupTable::from_table(t)?), None),
            Some(RawGroup {
                table: None,
                generators: Some(g),
            }) => {
                let (table, perms) = GroupTable::from_permutation_generators(&g)?;
                (Some(table), Some(perms))
            }
            Some(_) => return Err(Error::Parse("group needs exactly one of `table`, `generators`".into())),
        };

        let lie = match &raw.lie_bialgebra {
            None => None,
            Some(l) => {
                let b = LieBialgebra::from_entries(l.dim, &parse_entries(&l.bracket)?, &parse_entries(&l.cobracket)?)?;
                let twists = l
                    .twists
                    .iter()
                    .map(|t| TwistElement::new(parse_matrix(t, l.dim, l.dim, "twist")?))
                    .collect::<Result<Vec<_>>>()?;
                Some(LieConfig { bialgebra: b, twists })
            }
        };
        let n = lie.as_ref().map_or(0, |l| l.bialgebra.dim());

        let mut atoms = Vec::new();
        for a in &raw.atoms {
            let mut atom = Atom::plain(a.name.clone(), a.size);
            let what = |f: &str| format!("atom {} {f}", a.name);
            atom.permutations = match (&a.permutations, a.action.as_deref()) {
                (Some(p), None) => Some(p.clone()),
                (None, None) => None,
                (None, Some(act)) => {
                    let g = group.as_ref().ok_or_else(|| Error::Parse(what("action needs a group")))?;
                    Some(match act {
                        "left-regular" => g.left_regular(),
                        "right-inverse-regular" => g.right_inverse_regular(),
                        "natural" => natural
                            .clone()
                            .ok_or_else(|| Error::Parse(what("natural action needs group generators")))?,
                        other => return Err(Error::Parse(what(&format!("unknown action `{other}`")))),
                    })
                }
                (Some(_), Some(_)) => return Err(Error::Parse(what("gives both permutations and action"))),
            };
            atom.rho = a
                .rho
                .as_ref()
                .map(|ms| ms.iter().map(|m| parse_matrix(m, a.size, a.size, &what("rho"))).collect())
                .transpose()?;
            atom.pi = a.pi.as_ref().map(|m| parse_matrix(m, a.size, n * a.size, &what("pi"))).transpose()?;
            atom.pistar = a
                .pistar
                .as_ref()
                .map(|m| parse_matrix(m, n * a.size, a.size, &what("pistar")))
                .transpose()?;
            atoms.push(atom);
        }
        let backend = Arc::new(Backend::new(kind, group, lie.as_ref().map(|l| l.bialgebra.clone()), atoms)?);
        let mkind = backend.kind();

        let obj_of = |names: &[String]| -> Result<ObjectRef> {
            backend.obj(&names.iter().map(String::as_str).collect::<Vec<_>>())
        };

        let mut comonoids = Vec::new();
        for c in &raw.comonoids {
            if comonoids.iter().any(|(l, _): &(String, _)| *l == c.label) {
                return Err(Error::Parse(format!("duplicate comonoid label `{}`", c.label)));
            }
            let obj = obj_of(&c.obj)?;
            let what = |f: &str| format!("comonoid {} {f}", c.label);
            let com = match (c.kind.as_deref(), &c.delta, &c.eps) {
                (Some("diagonal"), None, None) if mkind == Kind::Set => Comonoid::diagonal(&obj),
                (Some("grouplike"), None, None) if mkind == Kind::Linear => Comonoid::grouplike(&obj),
                (Some("unit"), None, None) => Comonoid::unit(mkind),
                (None, Some(d), Some(e)) => Comonoid {
                    delta: parse_morphism(d, &obj, &obj.tensor(&obj), mkind, &what("delta"))?,
                    eps: parse_morphism(e, &obj, &ObjectRef::unit(), mkind, &what("eps"))?,
                    obj,
                },
                _ => {
                    return Err(Error::Parse(what(
                        "needs delta and eps, or kind diagonal (set) / grouplike (linear) / unit",
                    )))
                }
            };
            comonoids.push((c.label.clone(), com));
        }

        let sample = match &raw.sample {
            Some(s) => s.iter().map(|names| obj_of(names)).collect::<Result<Vec<_>>>()?,
            None => {
                let mut s = vec![ObjectRef::unit()];
                for a in backend.atoms() {
                    s.push(a.object());
                }
                for (_, c) in &comonoids {
                    if !s.contains(&c.obj) {
                        s.push(c.obj.clone());
                    }
                }
                s
            }
        };

        let functor_choice = raw.functor.as_deref().map(FunctorChoice::parse).transpose()?;
        match (functor_choice, kind) {
            (Some(FunctorChoice::Orbits), k) if k != BackendKind::FinSetGSet => {
                return Err(Error::Parse("the orbit functor needs a finset-gset backend".into()))
            }
            (Some(FunctorChoice::GroupCoinvariants), k) if k == BackendKind::FinSetGSet || backend.group().is_none() => {
                return Err(Error::Parse("group coinvariants need a linear backend with a group".into()))
            }
            (Some(FunctorChoice::DyCoinvariants), k) if k != BackendKind::Dy => {
                return Err(Error::Parse("DY coinvariants need a dy backend".into()))
            }
            _ => {}
        }

        let deformation = match raw.deformation {
            None => None,
            Some(d) => {
                if kind == BackendKind::FinSetGSet {
                    return Err(Error::Parse("deformations need a linear backend".into()));
                }
                if let Some(k) = hseries_order {
                    if k != d.order {
                        return Err(Error::Parse("scalar ring order and deformation order differ".into()));
                    }
                }
                let mut pc = match (&d.r, d.t.is_empty()) {
                    (Some(r), true) => PreCartierData::from_r_matrix(backend.clone(), &parse_matrix(r, n, n, "r")?)?,
                    (None, _) => {
                        let mut map = BTreeMap::new();
                        for t in &d.t {
                            let (x, y) = (backend.atom(&t.x)?, backend.atom(&t.y)?);
                            let s = x.size * y.size;
                            map.insert((t.x.clone(), t.y.clone()), parse_matrix(&t.matrix, s, s, "t")?);
                        }
                        PreCartierData::new(backend.clone(), map)?
                    }
                    (Some(_), false) => return Err(Error::Parse("deformation takes `r` or `t`, not both".into())),
                };
                for o in &d.overrides {
                    let (x, y) = (obj_of(&o.x)?, obj_of(&o.y)?);
                    let s = x.size() * y.size();
                    pc = pc.with_override(x, y, parse_matrix(&o.matrix, s, s, "override")?)?;
                }
                let mode = match d.inf_cocommutative.as_deref().unwrap_or("t-delta-zero") {
                    "t-delta-zero" => InfCocommutativity::TDeltaZero,
                    "literal" => InfCocommutativity::Literal,
                    other => return Err(Error::Parse(format!("unknown inf_cocommutative reading `{other}`"))),
                };
                Some(DeformationConfig {
                    order: d.order,
                    pre_cartier: pc,
                    mode,
                })
            }
        };

        let uea = match raw.uea {
            None => None,
            Some(u) => {
                if lie.is_none() {
                    return Err(Error::Parse("uea block needs a Lie bialgebra".into()));
                }
                if u.degree == 0 {
                    return Err(Error::Parse("uea degree must be at least 1".into()));
                }
                Some(UeaConfig {
                    degree: u.degree,
                    check_degree: u.check_degree.unwrap_or(u.degree.saturating_sub(2)),
                })
            }
        };

        Ok(Self {
            name: raw.name.unwrap_or_default(),
            backend,
            hseries_order,
            functor_choice,
            comonoids,
            sample,
            lie,
            deformation,
            uea,
        })
    }

    /// True when there is nothing to check.
    pub fn is_empty(&self) -> bool {
        self.backend.atoms().is_empty() && self.comonoids.is_empty() && self.lie.is_none()
    }

    pub fn functor(&self) -> Result<Option<AnyFunctor>> {
        let b = self.backend.clone();
        Ok(match self.functor_choice {
            None => None,
            Some(FunctorChoice::Identity) => Some(AnyFunctor::Identity(IdentityFunctor::new(b.kind()))),
            Some(FunctorChoice::Orbits) => Some(AnyFunctor::Orbits(OrbitFunctor::new(b)?)),
            Some(FunctorChoice::GroupCoinvariants) => Some(AnyFunctor::Quotient(QuotientFunctor::group_coinvariants(b)?)),
            Some(FunctorChoice::DyCoinvariants) => Some(AnyFunctor::Quotient(QuotientFunctor::dy_coinvariants(b)?)),
        })
    }

    pub fn comonoid(&self, label: &str) -> Option<&Comonoid<Rational>> {
        self.comonoids.iter().find(|(l, _)| l == label).map(|(_, c)| c)
    }
}
