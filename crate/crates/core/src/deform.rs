//! Infinitesimal braidings, the deformed braiding `σ̂ = σ∘e^{ℏt}` and the
//! deformed Hopf-category constructor.

use std::collections::{BTreeMap, HashMap};
use std::sync::{Arc, Mutex};

use num_traits::Zero;

use crate::backend::Backend;
use crate::coalg::Comonoid;
use crate::cofunctor::{ComonoidalFunctor, QuotientFunctor};
use crate::error::{Error, Result};
use crate::hopfcat::{build_hopf_category_with, HopfCategoryData};
use crate::liebialg::TwistElement;
use crate::matrix::Matrix;
use crate::morphism::{Kind, Morphism, ObjectRef};
use crate::scalar::{HSeries, Rational};
use crate::verdict::Verdict;

type TKey = (ObjectRef, ObjectRef);

/// An infinitesimal braiding given on pairs of atoms and extended to
/// composite objects by
///
/// ```text
/// t_{X⊗Y,Z} = id_X⊗t_{Y,Z} + (id_X⊗σ⁻¹_{Y,Z})∘(t_{X,Z}⊗id_Y)∘(id_X⊗σ_{Y,Z})
/// t_{X,Y⊗Z} = t_{X,Y}⊗id_Z + (σ⁻¹_{X,Y}⊗id_Z)∘(id_Y⊗t_{X,Z})∘(σ_{X,Y}⊗id_Z)
/// ```
///
/// splitting off the first atom of the left argument first. Explicit values
/// on composite pairs override the extension (and may violate it).
#[derive(Debug)]
pub struct PreCartierData {
    backend: Arc<Backend>,
    atoms: BTreeMap<(String, String), Matrix<Rational>>,
    overrides: HashMap<TKey, Matrix<Rational>>,
    memo: Mutex<HashMap<TKey, Matrix<Rational>>>,
}

impl Clone for PreCartierData {
    fn clone(&self) -> Self {
        Self {
            backend: self.backend.clone(),
            atoms: self.atoms.clone(),
            overrides: self.overrides.clone(),
            memo: Mutex::new(HashMap::new()),
        }
    }
}

impl PreCartierData {
    pub fn new(backend: Arc<Backend>, atoms: BTreeMap<(String, String), Matrix<Rational>>) -> Result<Self> {
        if backend.kind() != Kind::Linear {
            return Err(Error::BackendMismatch("an infinitesimal braiding needs a linear backend".into()));
        }
        for ((x, y), m) in &atoms {
            let n = backend.atom(x)?.size * backend.atom(y)?.size;
            if m.shape() != (n, n) {
                return Err(Error::ShapeMismatch(format!("t[{x},{y}] must be {n}×{n}")));
            }
        }
        Ok(Self {
            backend,
            atoms,
            overrides: HashMap::new(),
            memo: Mutex::new(HashMap::new()),
        })
    }

    pub fn zero(backend: Arc<Backend>) -> Result<Self> {
        Self::new(backend, BTreeMap::new())
    }

    /// `t_{X,Y} = Σ r^{ij} π_X(e_i)⊗π_Y(e_j)` from a 2-tensor `r` over the backend's Lie algebra.
    pub fn from_r_matrix(backend: Arc<Backend>, r: &Matrix<Rational>) -> Result<Self> {
        let lie = backend
            .lie()
            .ok_or_else(|| Error::MissingAction("backend has no Lie algebra".into()))?;
        let n = lie.dim();
        if r.shape() != (n, n) {
            return Err(Error::ShapeMismatch(format!("r must be {n}×{n}")));
        }
        let mut atoms = BTreeMap::new();
        for x in backend.atoms() {
            for y in backend.atoms() {
                let (ox, oy) = (x.object(), y.object());
                let mut t = Matrix::zeros(ox.size() * oy.size(), ox.size() * oy.size());
                for i in 0..n {
                    for j in 0..n {
                        let c = r.get(i, j);
                        if c.is_zero() {
                            continue;
                        }
                        let term = backend.lie_action(&ox, i)?.kron(&backend.lie_action(&oy, j)?).scale(c);
                        t = t.add(&term)?;
                    }
                }
                atoms.insert((x.name.clone(), y.name.clone()), t);
            }
        }
        Self::new(backend, atoms)
    }

    /// `r` must be antisymmetric when it comes from a twist-like element.
    pub fn from_twist(backend: Arc<Backend>, r: &TwistElement) -> Result<Self> {
        Self::from_r_matrix(backend, r.coeffs())
    }

    pub fn with_override(mut self, x: ObjectRef, y: ObjectRef, t: Matrix<Rational>) -> Result<Self> {
        let n = x.size() * y.size();
        if t.shape() != (n, n) {
            return Err(Error::ShapeMismatch(format!("t[{x},{y}] must be {n}×{n}")));
        }
        self.overrides.insert((x, y), t);
        self.memo.lock().unwrap().clear();
        Ok(self)
    }

    pub fn backend(&self) -> &Backend {
        &self.backend
    }

    pub fn is_zero(&self) -> bool {
        self.atoms.values().chain(self.overrides.values()).all(Matrix::is_zero)
    }

    /// `t_{X,Y}` as a matrix on `X⊗Y`.
    pub fn t_matrix(&self, x: &ObjectRef, y: &ObjectRef) -> Result<Matrix<Rational>> {
        let key = (x.clone(), y.clone());
        if let Some(m) = self.overrides.get(&key) {
            return Ok(m.clone());
        }
        if let Some(m) = self.memo.lock().unwrap().get(&key) {
            return Ok(m.clone());
        }
        let n = x.size() * y.size();
        let m = if x.is_unit() || y.is_unit() {
            Matrix::zeros(n, n)
        } else if x.factors().len() > 1 {
            let (x1, xr) = x.split_first().expect("composite");
            self.rule_split_left(&x1, &xr, y)?
        } else if y.factors().len() > 1 {
            let (y1, yr) = y.split_first().expect("composite");
            self.rule_split_right(x, &y1, &yr)?
        } else {
            let key = (x.factors()[0].name.clone(), y.factors()[0].name.clone());
            self.atoms.get(&key).cloned().unwrap_or_else(|| Matrix::zeros(n, n))
        };
        self.memo.lock().unwrap().insert(key, m.clone());
        Ok(m)
    }

    pub fn t(&self, x: &ObjectRef, y: &ObjectRef) -> Result<Morphism<Rational>> {
        let xy = x.tensor(y);
        Morphism::matrix(xy.clone(), xy, self.t_matrix(x, y)?)
    }

    /// Right-hand side of the rule for `t_{X⊗Y,Z}`.
    fn rule_split_left(&self, x: &ObjectRef, y: &ObjectRef, z: &ObjectRef) -> Result<Matrix<Rational>> {
        let sigma = |a: &ObjectRef, b: &ObjectRef| Morphism::<Rational>::braiding(Kind::Linear, a, b).to_matrix();
        let id = |a: &ObjectRef| Matrix::<Rational>::identity(a.size());
        let first = id(x).kron(&self.t_matrix(y, z)?);
        let conj = id(x)
            .kron(&sigma(z, y))
            .mul(&self.t_matrix(x, z)?.kron(&id(y)))?
            .mul(&id(x).kron(&sigma(y, z)))?;
        first.add(&conj)
    }

    /// Right-hand side of the rule for `t_{X,Y⊗Z}`.
    fn rule_split_right(&self, x: &ObjectRef, y: &ObjectRef, z: &ObjectRef) -> Result<Matrix<Rational>> {
        let sigma = |a: &ObjectRef, b: &ObjectRef| Morphism::<Rational>::braiding(Kind::Linear, a, b).to_matrix();
        let id = |a: &ObjectRef| Matrix::<Rational>::identity(a.size());
        let first = self.t_matrix(x, y)?.kron(&id(z));
        let conj = sigma(y, x)
            .kron(&id(z))
            .mul(&id(y).kron(&self.t_matrix(x, z)?))?
            .mul(&sigma(x, y).kron(&id(z)))?;
        first.add(&conj)
    }
}

/// How to read "infinitesimally cocommutative".
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum InfCocommutativity {
    /// `t∘Δ = σ∘Δ = Δ`, as written.
    Literal,
    /// `t∘Δ = 0` and `σ∘Δ = Δ`.
    TDeltaZero,
}

/// The target side of the infinitesimal-braiding square: a functor and the
/// infinitesimal braiding `t_{F(X),F(Y)}` of its target.
pub struct InfBraidedCheck<'a> {
    pub functor: &'a dyn ComonoidalFunctor<Rational>,
    pub target_t: &'a dyn Fn(&ObjectRef, &ObjectRef) -> Result<Morphism<Rational>>,
}

#[derive(Default)]
pub struct PreCartierChecks<'a> {
    pub commutation: bool,
    pub antisymmetry: bool,
    /// Morphisms along which naturality of `t` is checked (tensored with identities of sample objects).
    pub naturality: Vec<Morphism<Rational>>,
    pub inf_cocommutative: Vec<(String, Comonoid<Rational>)>,
    pub inf_cocommutative_mode: Option<InfCocommutativity>,
    pub inf_braided: Option<InfBraidedCheck<'a>>,
}

/// The extension rules on every triple from `sample`, plus whichever optional laws are requested.
pub fn check_pre_cartier(pc: &PreCartierData, sample: &[ObjectRef], flags: &PreCartierChecks<'_>) -> Result<Verdict> {
    if sample.is_empty() {
        return Err(Error::ShapeMismatch("empty object sample".into()));
    }
    let mut v = Verdict::new();
    let sigma = |a: &ObjectRef, b: &ObjectRef| Morphism::<Rational>::braiding(Kind::Linear, a, b);
    let id = |a: &ObjectRef| Morphism::<Rational>::identity(Kind::Linear, a);
    let as_mor = |dom: ObjectRef, m: Result<Matrix<Rational>>| m.and_then(|m| Morphism::matrix(dom.clone(), dom, m));

    for x in sample {
        for y in sample {
            for z in sample {
                let xyz = x.tensor(y).tensor(z);
                v.check_eq(
                    format!("precartier.extension-right[{x},{y},{z}]"),
                    "t_{X,Y⊗Z} = t_{X,Y}⊗id + (σ⁻¹_{X,Y}⊗id)∘(id⊗t_{X,Z})∘(σ_{X,Y}⊗id)",
                    as_mor(xyz.clone(), pc.t_matrix(x, &y.tensor(z))),
                    as_mor(xyz.clone(), pc.rule_split_right(x, y, z)),
                );
                v.check_eq(
                    format!("precartier.extension-left[{x},{y},{z}]"),
                    "t_{X⊗Y,Z} = id⊗t_{Y,Z} + (id⊗σ⁻¹_{Y,Z})∘(t_{X,Z}⊗id)∘(id⊗σ_{Y,Z})",
                    as_mor(xyz.clone(), pc.t_matrix(&x.tensor(y), z)),
                    as_mor(xyz.clone(), pc.rule_split_left(x, y, z)),
                );
                if flags.commutation {
                    let a = pc.t(x, y).and_then(|t| t.tensor(&id(z)));
                    let b = pc.t(y, z).and_then(|t| id(x).tensor(&t));
                    let (ab, ba) = match (a, b) {
                        (Ok(a), Ok(b)) => (a.compose(&b), b.compose(&a)),
                        (Err(e), _) | (_, Err(e)) => (Err(e), Err(Error::VerificationFailed("see left side".into()))),
                    };
                    v.check_eq(
                        format!("precartier.commutation[{x},{y},{z}]"),
                        "(t⊗id)∘(id⊗t) = (id⊗t)∘(t⊗id)",
                        ab,
                        ba,
                    );
                }
            }
            if flags.antisymmetry {
                v.check_eq(
                    format!("precartier.antisymmetry[{x},{y}]"),
                    "t_{Y,X}∘σ_{X,Y} = −σ_{X,Y}∘t_{X,Y}",
                    pc.t(y, x).and_then(|t| t.compose(&sigma(x, y))),
                    pc.t(x, y).and_then(|t| sigma(x, y).compose(&t)).map(|m| m.scale(&Rational::from_integer((-1).into()))),
                );
            }
            for f in &flags.naturality {
                if f.kind() != Kind::Linear {
                    continue;
                }
                v.check_eq(
                    format!("precartier.naturality-left[{}→{},{y}]", f.dom, f.cod),
                    "t_{X′,Y}∘(f⊗id) = (f⊗id)∘t_{X,Y}",
                    f.tensor(&id(y)).and_then(|fy| pc.t(&f.cod, y)?.compose(&fy)),
                    f.tensor(&id(y)).and_then(|fy| fy.compose(&pc.t(&f.dom, y)?)),
                );
                v.check_eq(
                    format!("precartier.naturality-right[{y},{}→{}]", f.dom, f.cod),
                    "t_{Y,X′}∘(id⊗f) = (id⊗f)∘t_{Y,X}",
                    id(y).tensor(f).and_then(|yf| pc.t(y, &f.cod)?.compose(&yf)),
                    id(y).tensor(f).and_then(|yf| yf.compose(&pc.t(y, &f.dom)?)),
                );
            }
            if let Some(ib) = &flags.inf_braided {
                let f = ib.functor;
                v.check_eq(
                    format!("precartier.inf-braided[{x},{y}]"),
                    "F²∘F(t_{X,Y}) = t_{FX,FY}∘F²",
                    pc.t(x, y).and_then(|t| f.f2(x, y)?.compose(&f.apply_mor(&t)?)),
                    f.f2(x, y).and_then(|f2| (ib.target_t)(x, y)?.compose(&f2)),
                );
            }
        }
    }
    if let Some(mode) = flags.inf_cocommutative_mode {
        for (label, c) in &flags.inf_cocommutative {
            let x = &c.obj;
            let t_delta = pc.t(x, x).and_then(|t| t.compose(&c.delta));
            let (name, diagram, rhs) = match mode {
                InfCocommutativity::Literal => ("literal", "t∘Δ = Δ", Ok(c.delta.clone())),
                InfCocommutativity::TDeltaZero => ("t-delta-zero", "t∘Δ = 0", Ok(Morphism::zero(x, &x.tensor(x)))),
            };
            v.check_eq(format!("precartier.inf-cocomm-{name}[{label}]"), diagram, t_delta, rhs);
            v.check_eq(
                format!("precartier.cocomm[{label}]"),
                "σ∘Δ = Δ",
                sigma(x, x).compose(&c.delta),
                Ok(c.delta.clone()),
            );
        }
    }
    Ok(v)
}

/// `t_{F(X),F(Y)} = (p_X⊗p_Y)∘t_{X,Y}∘(s_X⊗s_Y)`, the infinitesimal braiding
/// induced on coinvariants.
pub fn induced_target_t<'a>(
    q: &'a QuotientFunctor,
    pc: &'a PreCartierData,
) -> impl Fn(&ObjectRef, &ObjectRef) -> Result<Morphism<Rational>> + 'a {
    move |x, y| {
        let (px, py) = (q.projection(x)?, q.projection(y)?);
        let m = px.0.kron(&py.0).mul(&pc.t_matrix(x, y)?)?.mul(&px.1.kron(&py.1))?;
        let fxy = q.image(x)?.tensor(&q.image(y)?);
        Morphism::matrix(fxy.clone(), fxy, m)
    }
}

/// `Σ_{m≤K} (ℏt)^m / m!` as a matrix over `HSeries<K>`.
pub fn exp_hbar<const K: usize>(t: &Matrix<Rational>) -> Result<Matrix<HSeries<K>>> {
    let n = t.rows();
    let mut coeffs: Vec<Vec<Rational>> = vec![vec![Rational::zero(); K + 1]; n * n];
    let mut power = Matrix::<Rational>::identity(n);
    let mut factorial = Rational::from_integer(1.into());
    for m in 0..=K {
        if m > 0 {
            power = power.mul(t)?;
            factorial *= Rational::from_integer((m as i64).into());
        }
        for (idx, c) in power.entries().iter().enumerate() {
            if !c.is_zero() {
                coeffs[idx][m] = c / &factorial;
            }
        }
    }
    Matrix::new(n, n, coeffs.into_iter().map(HSeries::new).collect())
}

/// `σ̂_{X,Y} = σ_{X,Y}∘e^{ℏ t_{X,Y}}` over `HSeries<K>`.
pub fn deformed_braiding<const K: usize>(
    pc: &PreCartierData,
    x: &ObjectRef,
    y: &ObjectRef,
) -> Result<Morphism<HSeries<K>>> {
    let e = exp_hbar::<K>(&pc.t_matrix(x, y)?)?;
    let xy = x.tensor(y);
    Morphism::<HSeries<K>>::braiding(Kind::Linear, x, y).compose(&Morphism::matrix(xy.clone(), xy, e)?)
}

/// Symmetry and both hexagons for `σ̂` on all triples from `objs`.
pub fn check_deformed_braiding<const K: usize>(pc: &PreCartierData, objs: &[ObjectRef]) -> Verdict {
    let mut v = Verdict::new();
    let sh = |a: &ObjectRef, b: &ObjectRef| deformed_braiding::<K>(pc, a, b);
    let id = |a: &ObjectRef| Morphism::<HSeries<K>>::identity(Kind::Linear, a);
    for x in objs {
        for y in objs {
            v.check_eq(
                format!("deformed.symmetry[{x},{y}]"),
                "σ̂_{Y,X}∘σ̂_{X,Y} = id",
                sh(x, y).and_then(|a| sh(y, x)?.compose(&a)),
                Ok(id(&x.tensor(y))),
            );
            for z in objs {
                v.check_eq(
                    format!("deformed.hexagon1[{x},{y},{z}]"),
                    "σ̂_{X,Y⊗Z} = (id_Y⊗σ̂_{X,Z})∘(σ̂_{X,Y}⊗id_Z)",
                    sh(x, &y.tensor(z)),
                    sh(x, y).and_then(|a| id(y).tensor(&sh(x, z)?)?.compose(&a.tensor(&id(z))?)),
                );
                v.check_eq(
                    format!("deformed.hexagon2[{x},{y},{z}]"),
                    "σ̂_{X⊗Y,Z} = (σ̂_{X,Z}⊗id_Y)∘(id_X⊗σ̂_{Y,Z})",
                    sh(&x.tensor(y), z),
                    sh(y, z).and_then(|a| sh(x, z)?.tensor(&id(y))?.compose(&id(x).tensor(&a)?)),
                );
            }
        }
    }
    v
}

/// The Hopf-category constructor with `σ̂` in place of `σ`, over `HSeries<K>`.
///
/// Refuses to build unless the pre-Cartier data passes the extension rules,
/// commutation and antisymmetry on `sample`, and every comonoid passes the
/// chosen infinitesimal-cocommutativity check.
pub fn build_deformed_hopf_category<const K: usize, F>(
    f: &F,
    comonoids: &[(String, Comonoid<Rational>)],
    pc: &PreCartierData,
    sample: &[ObjectRef],
    mode: InfCocommutativity,
) -> Result<HopfCategoryData<HSeries<K>>>
where
    F: ComonoidalFunctor<Rational> + ComonoidalFunctor<HSeries<K>>,
{
    let checks = PreCartierChecks {
        commutation: true,
        antisymmetry: true,
        inf_cocommutative: comonoids.to_vec(),
        inf_cocommutative_mode: Some(mode),
        ..Default::default()
    };
    let v = check_pre_cartier(pc, sample, &checks)?;
    if let Some(fail) = v.first_failure() {
        if fail.check.starts_with("precartier.inf-cocomm") || fail.check.starts_with("precartier.cocomm") {
            return Err(Error::NotCocommutative(fail.check.clone()));
        }
        return Err(Error::PreCartierViolation(fail.check.clone()));
    }
    let lifted: Vec<(String, Comonoid<HSeries<K>>)> = comonoids
        .iter()
        .map(|(l, c)| {
            (
                l.clone(),
                Comonoid {
                    obj: c.obj.clone(),
                    delta: c.delta.lift(),
                    eps: c.eps.lift(),
                },
            )
        })
        .collect();
    let sigma = |x: &ObjectRef, y: &ObjectRef| deformed_braiding::<K>(pc, x, y);
    build_hopf_category_with::<HSeries<K>>(f, &lifted, &sigma)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::backend::{Atom, BackendKind};
    use crate::group::GroupTable;
    use crate::hopfcat::{build_hopf_category, check_hopf_category};
    use crate::liebialg::LieBialgebra;
    use crate::scalar::{q, qi};

    /// Z2 acting by swap on `R` (no Lie action) and trivially on `V`, `W`,
    /// where the abelian Lie algebra Q² acts by commuting nilpotents.
    fn instance() -> Arc<Backend> {
        let g = GroupTable::cyclic(2);
        let swap = Matrix::from_table(&[1, 0], 2);
        let id2 = Matrix::<Rational>::identity(2);
        let n = |a: i64, b: i64| Matrix::from_rows(vec![vec![qi(0), qi(a)], vec![qi(0), qi(0)]]).unwrap().scale(&q(b, 1));
        let mk = |name: &str, rho: Vec<Matrix<Rational>>, pi: Option<(Matrix<Rational>, Matrix<Rational>)>| {
            let mut a = Atom::plain(name, 2);
            a.rho = Some(rho);
            a.pi = Some(match pi {
                Some((p0, p1)) => Matrix::from_fn(2, 4, |i, c| if c < 2 { p0.get(i, c).clone() } else { p1.get(i, c - 2).clone() }),
                None => Matrix::zeros(2, 4),
            });
            a
        };
        let atoms = vec![
            mk("R", vec![id2.clone(), swap], None),
            mk("V", vec![id2.clone(), id2.clone()], Some((n(1, 1), n(1, 2)))),
            mk("W", vec![id2.clone(), id2.clone()], Some((n(1, 3), n(1, -1)))),
        ];
        Arc::new(Backend::new(BackendKind::LinRep, Some(g), Some(LieBialgebra::abelian(2)), atoms).unwrap())
    }

    fn pc(b: &Arc<Backend>) -> PreCartierData {
        PreCartierData::from_twist(b.clone(), &TwistElement::wedge(2, 0, 1, q(1, 2))).unwrap()
    }

    fn atoms(b: &Backend) -> Vec<ObjectRef> {
        b.atoms().iter().map(Atom::object).collect()
    }

    #[test]
    fn zero_t_passes_all_but_literal() {
        let b = instance();
        let z = PreCartierData::zero(b.clone()).unwrap();
        let r = b.obj(&["R"]).unwrap();
        let c = Comonoid::<Rational>::grouplike(&r);
        let checks = PreCartierChecks {
            commutation: true,
            antisymmetry: true,
            naturality: vec![c.delta.clone(), c.eps.clone()],
            inf_cocommutative: vec![("R".into(), c)],
            inf_cocommutative_mode: Some(InfCocommutativity::Literal),
            ..Default::default()
        };
        let v = check_pre_cartier(&z, &atoms(&b), &checks).unwrap();
        let failing: Vec<_> = v.failures().map(|r| r.check.clone()).collect();
        assert_eq!(failing, vec!["precartier.inf-cocomm-literal[R]".to_string()]);
    }

    #[test]
    fn commuting_nilpotents_pass() {
        let b = instance();
        let p = pc(&b);
        let r = b.obj(&["R"]).unwrap();
        let c = Comonoid::<Rational>::grouplike(&r);
        let q = QuotientFunctor::group_coinvariants(b.clone()).unwrap();
        let target = induced_target_t(&q, &p);
        let mut sample = atoms(&b);
        sample.push(ObjectRef::unit());
        let checks = PreCartierChecks {
            commutation: true,
            antisymmetry: true,
            naturality: vec![c.delta.clone(), c.eps.clone()],
            inf_cocommutative: vec![("R".into(), c)],
            inf_cocommutative_mode: Some(InfCocommutativity::TDeltaZero),
            inf_braided: Some(InfBraidedCheck {
                functor: &q,
                target_t: &target,
            }),
        };
        let v = check_pre_cartier(&p, &sample, &checks).unwrap();
        assert!(v.passed(), "{:?}", v.first_failure());
        assert!(!p.t_matrix(&sample[1], &sample[2]).unwrap().is_zero());
    }

    #[test]
    fn override_breaks_extension_rule() {
        let b = instance();
        let v_ = b.obj(&["V"]).unwrap();
        let w = b.obj(&["W"]).unwrap();
        let bad = pc(&b)
            .with_override(v_.clone(), v_.tensor(&w), Matrix::identity(8))
            .unwrap();
        let v = check_pre_cartier(&bad, &[v_.clone(), w.clone()], &PreCartierChecks::default()).unwrap();
        let f = v.find("precartier.extension-right[V,V,W]").unwrap();
        assert!(!f.passed);
        assert!(f.witness.is_some());
    }

    #[test]
    fn deformed_braiding_examples() {
        let b = instance();
        let v_ = b.obj(&["V"]).unwrap();
        let z = PreCartierData::zero(b.clone()).unwrap();
        let plain = Morphism::<Rational>::braiding(Kind::Linear, &v_, &v_).lift::<HSeries<2>>();
        assert_eq!(deformed_braiding::<2>(&z, &v_, &v_).unwrap(), plain);
        // K = 1: σ∘(id + ℏt).
        let p = pc(&b);
        let t = p.t_matrix(&v_, &v_).unwrap();
        let expected = Morphism::<Rational>::braiding(Kind::Linear, &v_, &v_)
            .to_matrix()
            .mul(&Matrix::identity(4).add(&t).unwrap())
            .unwrap();
        let got = deformed_braiding::<1>(&p, &v_, &v_).unwrap().to_matrix();
        for (g, e) in got.entries().iter().zip(expected.entries()) {
            assert_eq!(g.coeff(0) + g.coeff(1), e.clone());
        }
    }

    #[test]
    fn scalar_exponential() {
        let lam = q(3, 2);
        let m = Matrix::from_rows(vec![vec![lam.clone()]]).unwrap();
        let e = exp_hbar::<2>(&m).unwrap();
        assert_eq!(e.get(0, 0).coeffs(), &[qi(1), lam.clone(), &lam * &lam / qi(2)]);
    }

    #[test]
    fn deformed_hexagons_and_symmetry() {
        let b = instance();
        let p = pc(&b);
        let objs = atoms(&b);
        assert!(check_deformed_braiding::<1>(&p, &objs).passed());
        assert!(check_deformed_braiding::<2>(&p, &objs).passed());
        assert!(check_deformed_braiding::<3>(&p, &objs).passed());
    }

    #[test]
    fn deformed_build_reduces_to_undeformed() {
        let b = instance();
        let p = pc(&b);
        let q = QuotientFunctor::group_coinvariants(b.clone()).unwrap();
        let r = b.obj(&["R"]).unwrap();
        let cs = vec![("R".to_string(), Comonoid::<Rational>::grouplike(&r))];
        let plain = build_hopf_category(&q, &cs).unwrap();
        let sample = atoms(&b);
        let d2 = build_deformed_hopf_category::<2, _>(&q, &cs, &p, &sample, InfCocommutativity::TDeltaZero).unwrap();
        assert!(check_hopf_category(&d2).passed());
        assert_eq!(d2.constant_term(), plain);
        let d0 = build_deformed_hopf_category::<0, _>(&q, &cs, &p, &sample, InfCocommutativity::TDeltaZero).unwrap();
        assert_eq!(d0.constant_term(), plain);
        let z = PreCartierData::zero(b.clone()).unwrap();
        let dz = build_deformed_hopf_category::<2, _>(&q, &cs, &z, &sample, InfCocommutativity::TDeltaZero).unwrap();
        assert_eq!(dz, plain.lift());
        assert!(matches!(
            build_deformed_hopf_category::<2, _>(&q, &cs, &z, &sample, InfCocommutativity::Literal),
            Err(Error::NotCocommutative(_))
        ));
    }
}
