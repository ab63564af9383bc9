//! Objects and morphisms of the concrete strict symmetric monoidal categories.
//!
//! An object is a list of factors; the empty list is the monoidal unit and
//! tensoring is concatenation, so associators and unitors are identities.
//! Morphisms are either function tables (finite sets under cartesian product)
//! or matrices (finite-dimensional modules under the tensor product).

use std::fmt;

use serde_json::{json, Value};

use crate::error::{Error, Result, SingularWitness};
use crate::matrix::Matrix;
use crate::scalar::{Rational, Scalar};

#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Debug)]
pub struct Factor {
    pub name: String,
    pub size: usize,
}

#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Debug, Default)]
pub struct ObjectRef {
    factors: Vec<Factor>,
}

impl ObjectRef {
    pub fn unit() -> Self {
        Self::default()
    }

    pub fn atom(name: impl Into<String>, size: usize) -> Self {
        Self {
            factors: vec![Factor {
                name: name.into(),
                size,
            }],
        }
    }

    pub fn from_factors(factors: Vec<Factor>) -> Self {
        Self { factors }
    }

    pub fn tensor(&self, other: &Self) -> Self {
        let mut factors = self.factors.clone();
        factors.extend(other.factors.iter().cloned());
        Self { factors }
    }

    pub fn tensor_all<'a>(objs: impl IntoIterator<Item = &'a ObjectRef>) -> Self {
        objs.into_iter().fold(Self::unit(), |acc, o| acc.tensor(o))
    }

    pub fn factors(&self) -> &[Factor] {
        &self.factors
    }

    pub fn is_unit(&self) -> bool {
        self.factors.is_empty()
    }

    /// Cardinality or dimension: the product of the factor sizes.
    pub fn size(&self) -> usize {
        self.factors.iter().map(|f| f.size).product()
    }

    pub fn names(&self) -> Vec<String> {
        self.factors.iter().map(|f| f.name.clone()).collect()
    }

    /// Splits off the first factor.
    pub fn split_first(&self) -> Option<(ObjectRef, ObjectRef)> {
        let (head, rest) = self.factors.split_first()?;
        Some((
            Self {
                factors: vec![head.clone()],
            },
            Self {
                factors: rest.to_vec(),
            },
        ))
    }
}

impl fmt::Display for ObjectRef {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.factors.is_empty() {
            return write!(f, "I");
        }
        let names: Vec<&str> = self.factors.iter().map(|x| x.name.as_str()).collect();
        write!(f, "{}", names.join("⊗"))
    }
}

/// Which concrete category a morphism lives in.
#[derive(Clone, Copy, PartialEq, Eq, Hash, Debug)]
pub enum Kind {
    Set,
    Linear,
}

#[derive(Clone, PartialEq, Eq, Debug)]
pub enum Body<S> {
    /// `table[i]` is the image of element `i`.
    Table(Vec<usize>),
    /// `dim(cod) × dim(dom)` matrix.
    Mat(Matrix<S>),
}

#[derive(Clone, PartialEq, Eq, Debug)]
pub struct Morphism<S> {
    pub dom: ObjectRef,
    pub cod: ObjectRef,
    pub body: Body<S>,
}

impl<S: Scalar> Morphism<S> {
    pub fn table(dom: ObjectRef, cod: ObjectRef, table: Vec<usize>) -> Result<Self> {
        if table.len() != dom.size() {
            return Err(Error::ShapeMismatch(format!(
                "table of length {} on domain {dom} of size {}",
                table.len(),
                dom.size()
            )));
        }
        if let Some(&bad) = table.iter().find(|&&t| t >= cod.size()) {
            return Err(Error::ShapeMismatch(format!(
                "table entry {bad} out of range for codomain {cod} of size {}",
                cod.size()
            )));
        }
        Ok(Self {
            dom,
            cod,
            body: Body::Table(table),
        })
    }

    pub fn matrix(dom: ObjectRef, cod: ObjectRef, m: Matrix<S>) -> Result<Self> {
        if m.shape() != (cod.size(), dom.size()) {
            return Err(Error::ShapeMismatch(format!(
                "{}x{} matrix for {dom} → {cod}",
                m.rows(),
                m.cols()
            )));
        }
        Ok(Self {
            dom,
            cod,
            body: Body::Mat(m),
        })
    }

    pub fn identity(kind: Kind, obj: &ObjectRef) -> Self {
        let body = match kind {
            Kind::Set => Body::Table((0..obj.size()).collect()),
            Kind::Linear => Body::Mat(Matrix::identity(obj.size())),
        };
        Self {
            dom: obj.clone(),
            cod: obj.clone(),
            body,
        }
    }

    /// The symmetry `σ_{X,Y}: X⊗Y → Y⊗X`, `(i, j) ↦ (j, i)`.
    pub fn braiding(kind: Kind, x: &ObjectRef, y: &ObjectRef) -> Self {
        let (nx, ny) = (x.size(), y.size());
        let mut table = vec![0; nx * ny];
        for i in 0..nx {
            for j in 0..ny {
                table[i * ny + j] = j * nx + i;
            }
        }
        let dom = x.tensor(y);
        let cod = y.tensor(x);
        let body = match kind {
            Kind::Set => Body::Table(table),
            Kind::Linear => Body::Mat(Matrix::from_table(&table, nx * ny)),
        };
        Self { dom, cod, body }
    }

    /// The zero map between linear objects.
    pub fn zero(dom: &ObjectRef, cod: &ObjectRef) -> Self {
        Self {
            dom: dom.clone(),
            cod: cod.clone(),
            body: Body::Mat(Matrix::zeros(cod.size(), dom.size())),
        }
    }

    pub fn kind(&self) -> Kind {
        match self.body {
            Body::Table(_) => Kind::Set,
            Body::Mat(_) => Kind::Linear,
        }
    }

    pub fn as_table(&self) -> Option<&[usize]> {
        match &self.body {
            Body::Table(t) => Some(t),
            Body::Mat(_) => None,
        }
    }

    /// The linearization: tables become 0/1 matrices.
    pub fn to_matrix(&self) -> Matrix<S> {
        match &self.body {
            Body::Table(t) => Matrix::from_table(t, self.cod.size()),
            Body::Mat(m) => m.clone(),
        }
    }

    pub fn linearize(&self) -> Self {
        Self {
            dom: self.dom.clone(),
            cod: self.cod.clone(),
            body: Body::Mat(self.to_matrix()),
        }
    }

    /// `self ∘ first`.
    pub fn compose(&self, first: &Self) -> Result<Self> {
        if first.cod != self.dom {
            return Err(Error::ShapeMismatch(format!(
                "cannot compose {} → {} after {} → {}",
                self.dom, self.cod, first.dom, first.cod
            )));
        }
        let body = match (&self.body, &first.body) {
            (Body::Table(g), Body::Table(f)) => Body::Table(f.iter().map(|&i| g[i]).collect()),
            (Body::Mat(g), Body::Mat(f)) => Body::Mat(g.mul(f)?),
            _ => return Err(Error::BackendMismatch("composing a table with a matrix".into())),
        };
        Ok(Self {
            dom: first.dom.clone(),
            cod: self.cod.clone(),
            body,
        })
    }

    /// Composes a chain given in application order: `chain[n-1] ∘ … ∘ chain[0]`.
    pub fn chain(steps: &[&Self]) -> Result<Self> {
        let (first, rest) = steps
            .split_first()
            .ok_or_else(|| Error::ShapeMismatch("empty composite".into()))?;
        rest.iter().try_fold((*first).clone(), |acc, g| g.compose(&acc))
    }

    pub fn tensor(&self, other: &Self) -> Result<Self> {
        let body = match (&self.body, &other.body) {
            (Body::Table(f), Body::Table(g)) => {
                let (ny, ny2) = (other.dom.size(), other.cod.size());
                let mut out = Vec::with_capacity(f.len() * g.len());
                for &fi in f {
                    for &gk in g {
                        out.push(fi * ny2 + gk);
                    }
                }
                debug_assert_eq!(out.len(), self.dom.size() * ny);
                Body::Table(out)
            }
            (Body::Mat(a), Body::Mat(b)) => Body::Mat(a.kron(b)),
            _ => return Err(Error::BackendMismatch("tensoring a table with a matrix".into())),
        };
        Ok(Self {
            dom: self.dom.tensor(&other.dom),
            cod: self.cod.tensor(&other.cod),
            body,
        })
    }

    /// Tensor product of a list of morphisms, left to right.
    pub fn tensor_all(parts: &[&Self]) -> Result<Self> {
        let (first, rest) = parts
            .split_first()
            .ok_or_else(|| Error::ShapeMismatch("empty tensor product".into()))?;
        rest.iter().try_fold((*first).clone(), |acc, g| acc.tensor(g))
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        self.check_parallel(other)?;
        Ok(Self {
            dom: self.dom.clone(),
            cod: self.cod.clone(),
            body: Body::Mat(self.to_matrix().add(&other.to_matrix())?),
        })
    }

    pub fn sub(&self, other: &Self) -> Result<Self> {
        self.check_parallel(other)?;
        Ok(Self {
            dom: self.dom.clone(),
            cod: self.cod.clone(),
            body: Body::Mat(self.to_matrix().sub(&other.to_matrix())?),
        })
    }

    pub fn scale(&self, c: &S) -> Self {
        Self {
            dom: self.dom.clone(),
            cod: self.cod.clone(),
            body: Body::Mat(self.to_matrix().scale(c)),
        }
    }

    fn check_parallel(&self, other: &Self) -> Result<()> {
        if self.dom != other.dom || self.cod != other.cod {
            return Err(Error::ShapeMismatch(format!(
                "{} → {} and {} → {} are not parallel",
                self.dom, self.cod, other.dom, other.cod
            )));
        }
        Ok(())
    }

    /// Two-sided inverse, or the reason none exists.
    pub fn invert(&self) -> Result<Self> {
        let body = match &self.body {
            Body::Table(t) => Body::Table(invert_table(t, self.cod.size())?),
            Body::Mat(m) => Body::Mat(m.invert()?),
        };
        Ok(Self {
            dom: self.cod.clone(),
            cod: self.dom.clone(),
            body,
        })
    }

    pub fn is_identity(&self) -> bool {
        self.dom == self.cod && *self == Self::identity(self.kind(), &self.dom)
    }

    /// Replaces domain and codomain by objects of equal size.
    pub fn retype(&self, dom: ObjectRef, cod: ObjectRef) -> Result<Self> {
        if dom.size() != self.dom.size() || cod.size() != self.cod.size() {
            return Err(Error::ShapeMismatch(format!(
                "cannot retype {} → {} as {dom} → {cod}",
                self.dom, self.cod
            )));
        }
        Ok(Self {
            dom,
            cod,
            body: self.body.clone(),
        })
    }

    pub fn constant_term(&self) -> Morphism<Rational> {
        Morphism {
            dom: self.dom.clone(),
            cod: self.cod.clone(),
            body: match &self.body {
                Body::Table(t) => Body::Table(t.clone()),
                Body::Mat(m) => Body::Mat(m.constant_term()),
            },
        }
    }

    pub fn to_json(&self) -> Value {
        match &self.body {
            Body::Table(t) => json!({
                "dom": self.dom.names(),
                "cod": self.cod.names(),
                "table": t,
            }),
            Body::Mat(m) => json!({
                "dom": self.dom.names(),
                "cod": self.cod.names(),
                "matrix": m.to_json(),
            }),
        }
    }
}

impl Morphism<Rational> {
    pub fn lift<T: Scalar>(&self) -> Morphism<T> {
        Morphism {
            dom: self.dom.clone(),
            cod: self.cod.clone(),
            body: match &self.body {
                Body::Table(t) => Body::Table(t.clone()),
                Body::Mat(m) => Body::Mat(m.lift()),
            },
        }
    }
}

fn invert_table(table: &[usize], cod_size: usize) -> Result<Vec<usize>> {
    if table.len() != cod_size {
        return Err(Error::Singular(SingularWitness::NotSquare {
            rows: cod_size,
            cols: table.len(),
        }));
    }
    let mut inv: Vec<Option<usize>> = vec![None; cod_size];
    for (i, &t) in table.iter().enumerate() {
        if let Some(prev) = inv[t] {
            return Err(Error::Singular(SingularWitness::NotInjective {
                first: prev,
                second: i,
            }));
        }
        inv[t] = Some(i);
    }
    inv.into_iter()
        .enumerate()
        .map(|(c, i)| i.ok_or(Error::Singular(SingularWitness::NotSurjective { missing: c })))
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    type M = Morphism<Rational>;

    fn set(name: &str, n: usize) -> ObjectRef {
        ObjectRef::atom(name, n)
    }

    #[test]
    fn identities_tensor_to_identity() {
        let (x, y) = (set("X", 2), set("Y", 3));
        let t = M::identity(Kind::Set, &x).tensor(&M::identity(Kind::Set, &y)).unwrap();
        assert_eq!(t, M::identity(Kind::Set, &x.tensor(&y)));
        let l = M::identity(Kind::Linear, &x).tensor(&M::identity(Kind::Linear, &y)).unwrap();
        assert_eq!(l, M::identity(Kind::Linear, &x.tensor(&y)));
    }

    #[test]
    fn swap_tensor_identity_enumerates_pairs() {
        let (x, y) = (set("X", 2), set("Y", 3));
        let swap = M::table(x.clone(), x.clone(), vec![1, 0]).unwrap();
        let t = swap.tensor(&M::identity(Kind::Set, &y)).unwrap();
        let expected: Vec<usize> = (0..2)
            .flat_map(|i| (0..3).map(move |j| (1 - i) * 3 + j))
            .collect();
        assert_eq!(t.as_table().unwrap(), expected.as_slice());
    }

    #[test]
    fn matrix_tensor_is_kron() {
        let x = set("X", 2);
        let a = Matrix::from_table(&[1, 0], 2);
        let f = M::matrix(x.clone(), x.clone(), a.clone()).unwrap();
        let g = f.tensor(&f).unwrap();
        assert_eq!(g.to_matrix(), a.kron(&a));
    }

    #[test]
    fn braiding_enumerates_pairs() {
        let (x, y) = (set("X", 2), set("Y", 3));
        let s = M::braiding(Kind::Set, &x, &y);
        for i in 0..2 {
            for j in 0..3 {
                assert_eq!(s.as_table().unwrap()[3 * i + j], 2 * j + i);
            }
        }
        let back = M::braiding(Kind::Set, &y, &x).compose(&s).unwrap();
        assert!(back.is_identity());
        let unit = M::braiding(Kind::Linear, &ObjectRef::unit(), &y);
        assert!(unit.is_identity());
    }

    #[test]
    fn table_inversion_witnesses() {
        let x = set("X", 2);
        let c = M::table(x.clone(), x.clone(), vec![0, 0]).unwrap();
        assert!(matches!(
            c.invert(),
            Err(Error::Singular(SingularWitness::NotInjective { first: 0, second: 1 }))
        ));
        let to_one = M::table(x.clone(), set("P", 1), vec![0, 0]).unwrap();
        assert!(matches!(to_one.invert(), Err(Error::Singular(SingularWitness::NotSquare { .. }))));
    }

    #[test]
    fn composition_checks_types() {
        let (x, y) = (set("X", 2), set("Y", 2));
        let f = M::identity(Kind::Set, &x);
        let g = M::identity(Kind::Set, &y);
        assert!(g.compose(&f).is_err());
        assert!(M::identity(Kind::Linear, &x).compose(&f).is_err());
    }
}
