//! Concrete strict symmetric monoidal categories.
//!
//! * `FinSetGSet`: finite sets with a permutation action of a finite group,
//!   tensored by cartesian product.
//! * `LinRep`: finite-dimensional rational representations of a finite group,
//!   optionally also carrying a Lie algebra action.
//! * `Dy`: Drinfeld–Yetter modules over a Lie bialgebra (action `π` and
//!   coaction `π*`).
//!
//! Actions on tensor objects are diagonal. Lie actions and coactions extend
//! to tensor products as sums over the factors.

use std::collections::HashMap;

use crate::error::{Error, Result};
use crate::group::GroupTable;
use crate::liebialg::LieBialgebra;
use crate::matrix::Matrix;
use crate::morphism::{Factor, Kind, Morphism, ObjectRef};
use crate::scalar::{Rational, Scalar};
use crate::verdict::Verdict;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum BackendKind {
    FinSetGSet,
    LinRep,
    Dy,
}

impl BackendKind {
    pub fn kind(self) -> Kind {
        match self {
            BackendKind::FinSetGSet => Kind::Set,
            BackendKind::LinRep | BackendKind::Dy => Kind::Linear,
        }
    }

    pub fn label(self) -> &'static str {
        match self {
            BackendKind::FinSetGSet => "finset-gset",
            BackendKind::LinRep => "linrep",
            BackendKind::Dy => "dy",
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct Atom {
    pub name: String,
    pub size: usize,
    /// Permutation of `0..size` for every group element (set atoms).
    pub permutations: Option<Vec<Vec<usize>>>,
    /// Matrix for every group element (linear atoms).
    pub rho: Option<Vec<Matrix<Rational>>>,
    /// Lie action `b⊗V → V` as a `dim × (n·dim)` matrix; column `a·dim + v` is `e_a·v`.
    pub pi: Option<Matrix<Rational>>,
    /// Coaction `V → b⊗V` as an `(n·dim) × dim` matrix.
    pub pistar: Option<Matrix<Rational>>,
}

impl Atom {
    pub fn plain(name: impl Into<String>, size: usize) -> Self {
        Self {
            name: name.into(),
            size,
            permutations: None,
            rho: None,
            pi: None,
            pistar: None,
        }
    }

    pub fn object(&self) -> ObjectRef {
        ObjectRef::atom(self.name.clone(), self.size)
    }

    /// `π(e_a)` as a `dim × dim` matrix.
    pub fn pi_block(&self, a: usize) -> Option<Matrix<Rational>> {
        let pi = self.pi.as_ref()?;
        let d = self.size;
        Some(Matrix::from_fn(d, d, |i, j| pi.get(i, a * d + j).clone()))
    }

    /// The `e_a` component of `π*`, a `dim × dim` matrix.
    pub fn pistar_block(&self, a: usize) -> Option<Matrix<Rational>> {
        let ps = self.pistar.as_ref()?;
        let d = self.size;
        Some(Matrix::from_fn(d, d, |i, j| ps.get(a * d + i, j).clone()))
    }
}

#[derive(Clone, Debug)]
pub struct Backend {
    kind: BackendKind,
    group: Option<GroupTable>,
    lie: Option<LieBialgebra>,
    atoms: Vec<Atom>,
    index: HashMap<String, usize>,
}

impl Backend {
    /// Validates shapes and checks that every group action is a homomorphism.
    pub fn new(
        kind: BackendKind,
        group: Option<GroupTable>,
        lie: Option<LieBialgebra>,
        atoms: Vec<Atom>,
    ) -> Result<Self> {
        let mut index = HashMap::new();
        for (i, a) in atoms.iter().enumerate() {
            if index.insert(a.name.clone(), i).is_some() {
                return Err(Error::Parse(format!("duplicate atom `{}`", a.name)));
            }
        }
        if kind == BackendKind::Dy && lie.is_none() {
            return Err(Error::Parse("dy backend requires a Lie bialgebra".into()));
        }
        let backend = Self {
            kind,
            group,
            lie,
            atoms,
            index,
        };
        for atom in &backend.atoms {
            backend.validate_atom(atom)?;
        }
        Ok(backend)
    }

    fn validate_atom(&self, atom: &Atom) -> Result<()> {
        let bad = |reason: String| Error::InvalidAction {
            atom: atom.name.clone(),
            reason,
        };
        let d = atom.size;
        if self.kind == BackendKind::FinSetGSet && (atom.rho.is_some() || atom.pi.is_some() || atom.pistar.is_some()) {
            return Err(bad("set atoms carry only permutation actions".into()));
        }
        if self.kind != BackendKind::FinSetGSet && atom.permutations.is_some() {
            return Err(bad("linear atoms carry matrix actions".into()));
        }
        if let Some(perms) = &atom.permutations {
            let g = self.group.as_ref().ok_or_else(|| bad("action given but no group".into()))?;
            if perms.len() != g.order() {
                return Err(bad(format!("{} permutations for a group of order {}", perms.len(), g.order())));
            }
            for p in perms {
                let mut seen = vec![false; d];
                if p.len() != d || p.iter().any(|&x| x >= d || std::mem::replace(&mut seen[x], true)) {
                    return Err(bad("not a permutation".into()));
                }
            }
            if perms[0].iter().enumerate().any(|(i, &x)| i != x) {
                return Err(bad("identity does not act trivially".into()));
            }
            for a in g.elements() {
                for b in g.elements() {
                    let composed: Vec<usize> = perms[b].iter().map(|&x| perms[a][x]).collect();
                    if composed != perms[g.mul(a, b)] {
                        return Err(bad(format!("ρ({a})ρ({b}) ≠ ρ({a}·{b})")));
                    }
                }
            }
        }
        if let Some(rho) = &atom.rho {
            let g = self.group.as_ref().ok_or_else(|| bad("action given but no group".into()))?;
            if rho.len() != g.order() || rho.iter().any(|m| m.shape() != (d, d)) {
                return Err(bad("need one dim×dim matrix per group element".into()));
            }
            if rho[0] != Matrix::identity(d) {
                return Err(bad("identity does not act trivially".into()));
            }
            for a in g.elements() {
                for b in g.elements() {
                    if rho[a].mul(&rho[b])? != rho[g.mul(a, b)] {
                        return Err(bad(format!("ρ({a})ρ({b}) ≠ ρ({a}·{b})")));
                    }
                }
            }
        }
        let n = self.lie.as_ref().map_or(0, LieBialgebra::dim);
        if let Some(pi) = &atom.pi {
            if self.lie.is_none() || pi.shape() != (d, n * d) {
                return Err(bad(format!("π must be {d}x{} over a Lie algebra", n * d)));
            }
        }
        if let Some(ps) = &atom.pistar {
            if self.lie.is_none() || ps.shape() != (n * d, d) {
                return Err(bad(format!("π* must be {}x{d} over a Lie bialgebra", n * d)));
            }
        }
        Ok(())
    }

    pub fn backend_kind(&self) -> BackendKind {
        self.kind
    }

    pub fn kind(&self) -> Kind {
        self.kind.kind()
    }

    pub fn group(&self) -> Option<&GroupTable> {
        self.group.as_ref()
    }

    pub fn lie(&self) -> Option<&LieBialgebra> {
        self.lie.as_ref()
    }

    pub fn atoms(&self) -> &[Atom] {
        &self.atoms
    }

    pub fn atom(&self, name: &str) -> Result<&Atom> {
        self.index
            .get(name)
            .map(|&i| &self.atoms[i])
            .ok_or_else(|| Error::UnknownAtom(name.to_string()))
    }

    /// Replaces (or adds) an atom, revalidating it.
    pub fn with_atom(&self, atom: Atom) -> Result<Self> {
        self.validate_atom(&atom)?;
        let mut out = self.clone();
        match out.index.get(&atom.name) {
            Some(&i) => out.atoms[i] = atom,
            None => {
                out.index.insert(atom.name.clone(), out.atoms.len());
                out.atoms.push(atom);
            }
        }
        Ok(out)
    }

    pub fn obj(&self, names: &[&str]) -> Result<ObjectRef> {
        let factors = names
            .iter()
            .map(|n| {
                self.atom(n).map(|a| Factor {
                    name: a.name.clone(),
                    size: a.size,
                })
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(ObjectRef::from_factors(factors))
    }

    fn factor_atoms(&self, obj: &ObjectRef) -> Result<Vec<&Atom>> {
        obj.factors()
            .iter()
            .map(|f| {
                let a = self.atom(&f.name)?;
                if a.size != f.size {
                    return Err(Error::ShapeMismatch(format!("factor {} has size {}", f.name, f.size)));
                }
                Ok(a)
            })
            .collect()
    }

    /// The diagonal action of group element `g` on an object.
    pub fn group_action<S: Scalar>(&self, obj: &ObjectRef, g: usize) -> Result<Morphism<S>> {
        let atoms = self.factor_atoms(obj)?;
        let mut out = Morphism::identity(self.kind(), &ObjectRef::unit());
        for a in atoms {
            let part = match self.kind {
                BackendKind::FinSetGSet => {
                    let perms = a.permutations.as_ref().ok_or_else(|| Error::MissingAction(a.name.clone()))?;
                    Morphism::table(a.object(), a.object(), perms[g].clone())?
                }
                _ => {
                    let rho = a.rho.as_ref().ok_or_else(|| Error::MissingAction(a.name.clone()))?;
                    Morphism::matrix(a.object(), a.object(), rho[g].lift())?
                }
            };
            out = out.tensor(&part)?;
        }
        Ok(out)
    }

    /// Sums `id ⊗ … ⊗ block_k ⊗ … ⊗ id` over the factors.
    fn derivation_extension(
        &self,
        obj: &ObjectRef,
        block: impl Fn(&Atom) -> Result<Matrix<Rational>>,
    ) -> Result<Matrix<Rational>> {
        let atoms = self.factor_atoms(obj)?;
        let sizes: Vec<usize> = atoms.iter().map(|a| a.size).collect();
        let mut total = Matrix::zeros(obj.size(), obj.size());
        for (k, a) in atoms.iter().enumerate() {
            let left: usize = sizes[..k].iter().product();
            let right: usize = sizes[k + 1..].iter().product();
            let term = Matrix::identity(left).kron(&block(a)?).kron(&Matrix::identity(right));
            total = total.add(&term)?;
        }
        Ok(total)
    }

    /// `π_X(e_a)` for the Lie action extended to tensor products as a derivation.
    pub fn lie_action(&self, obj: &ObjectRef, a: usize) -> Result<Matrix<Rational>> {
        self.derivation_extension(obj, |atom| {
            atom.pi_block(a).ok_or_else(|| Error::MissingAction(atom.name.clone()))
        })
    }

    /// `π_X: b⊗X → X` as a matrix.
    pub fn pi_on(&self, obj: &ObjectRef) -> Result<Matrix<Rational>> {
        let n = self.lie_dim()?;
        let d = obj.size();
        let blocks = (0..n).map(|a| self.lie_action(obj, a)).collect::<Result<Vec<_>>>()?;
        Ok(Matrix::from_fn(d, n * d, |i, c| blocks[c / d].get(i, c % d).clone()))
    }

    /// `π*_X: X → b⊗X`, the sum of the factor coactions with `b` moved to the front.
    pub fn pistar_on(&self, obj: &ObjectRef) -> Result<Matrix<Rational>> {
        let n = self.lie_dim()?;
        let d = obj.size();
        let blocks = (0..n)
            .map(|a| {
                self.derivation_extension(obj, |atom| {
                    atom.pistar_block(a).ok_or_else(|| Error::MissingAction(atom.name.clone()))
                })
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(Matrix::from_fn(n * d, d, |r, j| blocks[r / d].get(r % d, j).clone()))
    }

    fn lie_dim(&self) -> Result<usize> {
        self.lie
            .as_ref()
            .map(LieBialgebra::dim)
            .ok_or_else(|| Error::MissingAction("backend has no Lie algebra".into()))
    }

    fn has_lie_action(&self, obj: &ObjectRef) -> Result<bool> {
        Ok(self.lie.is_some() && self.factor_atoms(obj)?.iter().all(|a| a.pi.is_some()))
    }

    fn has_coaction(&self, obj: &ObjectRef) -> Result<bool> {
        Ok(self.lie.is_some() && self.factor_atoms(obj)?.iter().all(|a| a.pistar.is_some()))
    }

    /// Whether `f` commutes with every structure this backend carries: the
    /// group action, the Lie action, and (for Drinfeld–Yetter modules) the coaction.
    pub fn check_equivariant<S: Scalar>(&self, f: &Morphism<S>) -> Result<bool> {
        let mut checked_any = false;
        if let Some(g) = self.group.as_ref() {
            for el in g.elements() {
                let left = self.group_action::<S>(&f.cod, el)?.compose(f)?;
                let right = f.compose(&self.group_action::<S>(&f.dom, el)?)?;
                if left != right {
                    return Ok(false);
                }
            }
            checked_any = true;
        }
        if self.kind() == Kind::Linear {
            let m = f.to_matrix();
            let lie_dom = self.has_lie_action(&f.dom)?;
            let lie_cod = self.has_lie_action(&f.cod)?;
            if lie_dom && lie_cod {
                let n = self.lie_dim()?;
                for a in 0..n {
                    let left = self.lie_action(&f.cod, a)?.lift::<S>().mul(&m)?;
                    let right = m.mul(&self.lie_action(&f.dom, a)?.lift())?;
                    if left != right {
                        return Ok(false);
                    }
                }
                checked_any = true;
            } else if lie_dom != lie_cod {
                let missing = if lie_dom { &f.cod } else { &f.dom };
                return Err(Error::MissingAction(missing.to_string()));
            }
            if self.has_coaction(&f.dom)? && self.has_coaction(&f.cod)? {
                let n = self.lie_dim()?;
                let left = self.pistar_on(&f.cod)?.lift::<S>().mul(&m)?;
                let right = Matrix::<S>::identity(n).kron(&m).mul(&self.pistar_on(&f.dom)?.lift())?;
                if left != right {
                    return Ok(false);
                }
                checked_any = true;
            }
        }
        if !checked_any {
            return Err(Error::MissingAction(format!("{} → {}", f.dom, f.cod)));
        }
        Ok(true)
    }

    /// Symmetry and both hexagon identities on every triple of atoms (the first
    /// four atoms when there are more).
    pub fn check_hexagons(&self) -> Verdict {
        let kind = self.kind();
        let objs: Vec<ObjectRef> = self.atoms.iter().take(4).map(Atom::object).collect();
        let mut v = Verdict::new();
        let sigma = |a: &ObjectRef, b: &ObjectRef| Morphism::<Rational>::braiding(kind, a, b);
        let id = |a: &ObjectRef| Morphism::<Rational>::identity(kind, a);
        for x in &objs {
            for y in &objs {
                v.check_eq(
                    format!("braiding.symmetry[{x},{y}]"),
                    "σ_{Y,X}∘σ_{X,Y} = id",
                    sigma(y, x).compose(&sigma(x, y)),
                    Ok(id(&x.tensor(y))),
                );
                for z in &objs {
                    v.check_eq(
                        format!("braiding.hexagon1[{x},{y},{z}]"),
                        "σ_{X,Y⊗Z} = (id_Y⊗σ_{X,Z})∘(σ_{X,Y}⊗id_Z)",
                        Ok(sigma(x, &y.tensor(z))),
                        sigma(x, y)
                            .tensor(&id(z))
                            .and_then(|first| id(y).tensor(&sigma(x, z))?.compose(&first)),
                    );
                    v.check_eq(
                        format!("braiding.hexagon2[{x},{y},{z}]"),
                        "σ_{X⊗Y,Z} = (σ_{X,Z}⊗id_Y)∘(id_X⊗σ_{Y,Z})",
                        Ok(sigma(&x.tensor(y), z)),
                        id(x)
                            .tensor(&sigma(y, z))
                            .and_then(|first| sigma(x, z).tensor(&id(y))?.compose(&first)),
                    );
                }
            }
        }
        v
    }
}
