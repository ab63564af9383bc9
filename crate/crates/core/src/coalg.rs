//! Comonoids and Hopf monoids with law checkers.

use serde_json::{json, Value};

use crate::error::{Error, Result};
use crate::morphism::{Kind, Morphism, ObjectRef};
use crate::scalar::Scalar;
use crate::verdict::Verdict;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Comonoid<S> {
    pub obj: ObjectRef,
    pub delta: Morphism<S>,
    pub eps: Morphism<S>,
}

impl<S: Scalar> Comonoid<S> {
    /// `(I, id, id)`.
    pub fn unit(kind: Kind) -> Self {
        let i = ObjectRef::unit();
        Self {
            obj: i.clone(),
            delta: Morphism::identity(kind, &i),
            eps: Morphism::identity(kind, &i),
        }
    }

    /// The cartesian diagonal `a ↦ (a, a)` on a finite set.
    pub fn diagonal(obj: &ObjectRef) -> Self {
        let n = obj.size();
        Self {
            obj: obj.clone(),
            delta: Morphism::table(obj.clone(), obj.tensor(obj), (0..n).map(|i| i * n + i).collect())
                .expect("diagonal table"),
            eps: Morphism::table(obj.clone(), ObjectRef::unit(), vec![0; n]).expect("terminal map"),
        }
    }

    /// `Δ(e_i) = e_i⊗e_i`, `ε(e_i) = 1` on the basis of a linear object.
    pub fn grouplike(obj: &ObjectRef) -> Self {
        Self::diagonal(obj).linearize()
    }

    pub fn kind(&self) -> Kind {
        self.delta.kind()
    }

    pub fn linearize(&self) -> Self {
        Self {
            obj: self.obj.clone(),
            delta: self.delta.linearize(),
            eps: self.eps.linearize(),
        }
    }

    pub fn to_json(&self) -> Value {
        json!({
            "obj": self.obj.names(),
            "delta": self.delta.to_json(),
            "eps": self.eps.to_json(),
        })
    }

    fn check_shapes(&self) -> Result<()> {
        let x = &self.obj;
        if self.delta.dom != *x || self.delta.cod != x.tensor(x) {
            return Err(Error::ShapeMismatch(format!("Δ must map {x} → {x}⊗{x}")));
        }
        if self.eps.dom != *x || !self.eps.cod.is_unit() {
            return Err(Error::ShapeMismatch(format!("ε must map {x} → I")));
        }
        if self.delta.kind() != self.eps.kind() {
            return Err(Error::BackendMismatch("Δ and ε live in different backends".into()));
        }
        Ok(())
    }
}

/// Coassociativity, both counit laws and optionally cocommutativity.
pub fn check_comonoid<S: Scalar>(c: &Comonoid<S>, require_cocommutative: bool) -> Verdict {
    let mut v = Verdict::new();
    if let Err(e) = c.check_shapes() {
        v.check_bool("comonoid.shape", "Δ: M → M⊗M, ε: M → I", false, Some(e.to_string()));
        return v;
    }
    let k = c.kind();
    let x = &c.obj;
    let id = Morphism::identity(k, x);
    v.check_eq(
        "comonoid.coassoc",
        "(Δ⊗id)∘Δ = (id⊗Δ)∘Δ",
        c.delta.tensor(&id).and_then(|d| d.compose(&c.delta)),
        id.tensor(&c.delta).and_then(|d| d.compose(&c.delta)),
    );
    v.check_eq(
        "comonoid.counit-left",
        "(ε⊗id)∘Δ = id",
        c.eps.tensor(&id).and_then(|d| d.compose(&c.delta)),
        Ok(id.clone()),
    );
    v.check_eq(
        "comonoid.counit-right",
        "(id⊗ε)∘Δ = id",
        id.tensor(&c.eps).and_then(|d| d.compose(&c.delta)),
        Ok(id.clone()),
    );
    if require_cocommutative {
        v.check_eq(
            "comonoid.cocomm",
            "σ∘Δ = Δ",
            Morphism::braiding(k, x, x).compose(&c.delta),
            Ok(c.delta.clone()),
        );
    }
    v
}

/// `(C⊗D, (id⊗σ⊗id)∘(Δ⊗Δ′), ε⊗ε′)`.
pub fn tensor_comonoid<S: Scalar>(c: &Comonoid<S>, d: &Comonoid<S>) -> Result<Comonoid<S>> {
    if c.kind() != d.kind() {
        return Err(Error::BackendMismatch("tensoring comonoids from different backends".into()));
    }
    let k = c.kind();
    let mid = Morphism::tensor_all(&[
        &Morphism::identity(k, &c.obj),
        &Morphism::braiding(k, &c.obj, &d.obj),
        &Morphism::identity(k, &d.obj),
    ])?;
    Ok(Comonoid {
        obj: c.obj.tensor(&d.obj),
        delta: mid.compose(&c.delta.tensor(&d.delta)?)?,
        eps: c.eps.tensor(&d.eps)?,
    })
}

/// `(f⊗f)∘Δ = Δ′∘f` and `ε′∘f = ε`.
pub fn check_comonoid_morphism<S: Scalar>(f: &Morphism<S>, c: &Comonoid<S>, d: &Comonoid<S>) -> Result<Verdict> {
    if f.dom != c.obj || f.cod != d.obj {
        return Err(Error::ShapeMismatch(format!(
            "{} → {} is not a map {} → {}",
            f.dom, f.cod, c.obj, d.obj
        )));
    }
    let mut v = Verdict::new();
    v.check_eq(
        "comonoid-morphism.delta",
        "(f⊗f)∘Δ = Δ′∘f",
        f.tensor(f).and_then(|ff| ff.compose(&c.delta)),
        d.delta.compose(f),
    );
    v.check_eq("comonoid-morphism.eps", "ε′∘f = ε", d.eps.compose(f), Ok(c.eps.clone()));
    Ok(v)
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct HopfMonoidData<S> {
    pub obj: ObjectRef,
    pub mu: Morphism<S>,
    pub eta: Morphism<S>,
    pub delta: Morphism<S>,
    pub eps: Morphism<S>,
    pub antipode: Morphism<S>,
}

impl<S: Scalar> HopfMonoidData<S> {
    pub fn kind(&self) -> Kind {
        self.delta.kind()
    }

    pub fn comonoid(&self) -> Comonoid<S> {
        Comonoid {
            obj: self.obj.clone(),
            delta: self.delta.clone(),
            eps: self.eps.clone(),
        }
    }

    pub fn to_json(&self) -> Value {
        json!({
            "obj": self.obj.names(),
            "mu": self.mu.to_json(),
            "eta": self.eta.to_json(),
            "delta": self.delta.to_json(),
            "eps": self.eps.to_json(),
            "antipode": self.antipode.to_json(),
        })
    }
}

/// Monoid, comonoid and bimonoid laws plus both antipode equations.
pub fn check_hopf_monoid<S: Scalar>(h: &HopfMonoidData<S>) -> Verdict {
    let mut v = Verdict::new();
    let k = h.kind();
    let x = &h.obj;
    let i = ObjectRef::unit();
    let id = Morphism::identity(k, x);
    let xx = x.tensor(x);
    let shapes = [
        (&h.mu, xx.clone(), x.clone(), "μ"),
        (&h.eta, i.clone(), x.clone(), "η"),
        (&h.antipode, x.clone(), x.clone(), "S"),
    ];
    for (m, dom, cod, name) in shapes {
        if m.dom != dom || m.cod != cod {
            v.check_bool(
                "hopf.shape",
                "structure maps have the right (co)domains",
                false,
                Some(format!("{name} maps {} → {}, expected {dom} → {cod}", m.dom, m.cod)),
            );
            return v;
        }
    }
    v.check_eq(
        "hopf.assoc",
        "μ∘(μ⊗id) = μ∘(id⊗μ)",
        h.mu.tensor(&id).and_then(|m| h.mu.compose(&m)),
        id.tensor(&h.mu).and_then(|m| h.mu.compose(&m)),
    );
    v.check_eq(
        "hopf.unit-left",
        "μ∘(η⊗id) = id",
        h.eta.tensor(&id).and_then(|m| h.mu.compose(&m)),
        Ok(id.clone()),
    );
    v.check_eq(
        "hopf.unit-right",
        "μ∘(id⊗η) = id",
        id.tensor(&h.eta).and_then(|m| h.mu.compose(&m)),
        Ok(id.clone()),
    );
    let c = h.comonoid();
    v.extend(check_comonoid(&c, false));
    match tensor_comonoid(&c, &c).and_then(|cc| check_comonoid_morphism(&h.mu, &cc, &c)) {
        Ok(r) => v.extend_prefixed("hopf.mu", r),
        Err(e) => {
            v.check_bool("hopf.mu", "μ is a comonoid morphism", false, Some(e.to_string()));
        }
    }
    match check_comonoid_morphism(&h.eta, &Comonoid::unit(k), &c) {
        Ok(r) => v.extend_prefixed("hopf.eta", r),
        Err(e) => {
            v.check_bool("hopf.eta", "η is a comonoid morphism", false, Some(e.to_string()));
        }
    }
    let target = || h.eta.compose(&h.eps);
    v.check_eq(
        "hopf.antipode-left",
        "μ∘(S⊗id)∘Δ = η∘ε",
        h.antipode
            .tensor(&id)
            .and_then(|s| Morphism::chain(&[&h.delta, &s, &h.mu])),
        target(),
    );
    v.check_eq(
        "hopf.antipode-right",
        "μ∘(id⊗S)∘Δ = η∘ε",
        id.tensor(&h.antipode)
            .and_then(|s| Morphism::chain(&[&h.delta, &s, &h.mu])),
        target(),
    );
    v
}
