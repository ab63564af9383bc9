//! Law suites over a loaded instance and the build targets.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde_json::{json, Value};

use crate::backend::{Atom, BackendKind};
use crate::coalg::{check_comonoid, check_hopf_monoid, Comonoid};
use crate::cofunctor::{
    certify_adapted, check_comonoidal, check_mixed_associativity, check_structure_maps_comonoidal, AdaptednessCertificate,
    ComonoidalFunctor,
};
use crate::deform::{
    build_deformed_hopf_category, check_deformed_braiding, check_pre_cartier, induced_target_t, InfBraidedCheck,
    PreCartierChecks, PreCartierData,
};
use crate::error::{Error, Result};
use crate::hopfcat::{
    build_hopf_category, build_hopf_monoid, check_hopf_category, extract_set_groupoid, hopf_monoid_of, HopfCategoryData,
};
use crate::instance::{AnyFunctor, Instance};
use crate::liebialg::{
    check_dy_module, check_lie_bialgebra, check_twist, truncated_uea_dy, twist_bialgebra, twist_dy_module, TwistElement,
};
use crate::matrix::Matrix;
use crate::morphism::{Kind, Morphism, ObjectRef};
use crate::scalar::{HSeries, Rational};
use crate::verdict::Verdict;

/// Highest truncation order the command line dispatches to.
pub const MAX_ORDER: usize = 8;

/// Seed used when `HOPFCAT_SEED` is unset.
pub const DEFAULT_SEED: u64 = 20240917;

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub enum Suite {
    Backend,
    Comonoids,
    Functor,
    Adapted,
    Hopf,
    Groupoid,
    Lie,
    Dy,
    Uea,
    Deform,
}

impl Suite {
    pub const ALL: [Suite; 10] = [
        Suite::Backend,
        Suite::Comonoids,
        Suite::Functor,
        Suite::Adapted,
        Suite::Hopf,
        Suite::Groupoid,
        Suite::Lie,
        Suite::Dy,
        Suite::Uea,
        Suite::Deform,
    ];

    pub fn label(self) -> &'static str {
        match self {
            Suite::Backend => "backend",
            Suite::Comonoids => "comonoids",
            Suite::Functor => "functor",
            Suite::Adapted => "adapted",
            Suite::Hopf => "hopf",
            Suite::Groupoid => "groupoid",
            Suite::Lie => "lie",
            Suite::Dy => "dy",
            Suite::Uea => "uea",
            Suite::Deform => "deform",
        }
    }

    /// `"all"` or a comma-separated list of suite names.
    pub fn parse_list(s: &str) -> Result<Vec<Suite>> {
        if s.trim() == "all" {
            return Ok(Self::ALL.to_vec());
        }
        let mut out = Vec::new();
        for part in s.split(',').map(str::trim).filter(|p| !p.is_empty()) {
            let suite = Self::ALL
                .into_iter()
                .find(|x| x.label() == part)
                .ok_or_else(|| Error::Parse(format!("unknown check suite `{part}`")))?;
            if !out.contains(&suite) {
                out.push(suite);
            }
        }
        out.sort();
        Ok(out)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Target {
    HopfMonoid,
    HopfCategory,
    Deformed,
    Groupoid,
}

impl Target {
    pub fn parse(s: &str) -> Result<Self> {
        Ok(match s {
            "hopf-monoid" => Target::HopfMonoid,
            "hopf-category" => Target::HopfCategory,
            "deformed" => Target::Deformed,
            "groupoid" => Target::Groupoid,
            other => return Err(Error::Parse(format!("unknown target `{other}`"))),
        })
    }

    pub fn label(self) -> &'static str {
        match self {
            Target::HopfMonoid => "hopf-monoid",
            Target::HopfCategory => "hopf-category",
            Target::Deformed => "deformed",
            Target::Groupoid => "groupoid",
        }
    }
}

/// Calls `$f::<K>(args)` for a runtime order `K ≤ MAX_ORDER`.
macro_rules! dispatch_order {
    ($k:expr, $f:ident ( $($arg:expr),* )) => {
        match $k {
            0 => $f::<0>($($arg),*),
            1 => $f::<1>($($arg),*),
            2 => $f::<2>($($arg),*),
            3 => $f::<3>($($arg),*),
            4 => $f::<4>($($arg),*),
            5 => $f::<5>($($arg),*),
            6 => $f::<6>($($arg),*),
            7 => $f::<7>($($arg),*),
            8 => $f::<8>($($arg),*),
            k => Err(Error::Parse(format!("order {k} exceeds the supported maximum {MAX_ORDER}"))),
        }
    };
}

fn record_error(v: &mut Verdict, check: impl Into<String>, diagram: &str, e: &Error) {
    v.check_bool(check, diagram, false, Some(e.to_string()));
}

/// Objects the adaptedness certificates and the constructor need: `I` and every comonoid object.
fn comonoid_objects(inst: &Instance) -> Vec<ObjectRef> {
    let mut out = vec![ObjectRef::unit()];
    for (_, c) in &inst.comonoids {
        if !out.contains(&c.obj) {
            out.push(c.obj.clone());
        }
    }
    out
}

fn all_pairs(objs: &[ObjectRef]) -> Vec<(ObjectRef, ObjectRef)> {
    objs.iter()
        .flat_map(|x| objs.iter().map(move |y| (x.clone(), y.clone())))
        .collect()
}

/// Runs the selected suites. Suites that do not apply to the instance record nothing.
pub fn run_verify(inst: &Instance, suites: &[Suite], seed: u64) -> Result<Verdict> {
    let functor = inst.functor()?;
    let mut v = Verdict::new();
    for &s in suites {
        let part = match s {
            Suite::Backend => suite_backend(inst),
            Suite::Comonoids => suite_comonoids(inst),
            Suite::Functor => suite_functor(inst, functor.as_ref(), seed),
            Suite::Adapted => suite_adapted(inst, functor.as_ref()),
            Suite::Hopf => suite_hopf(inst, functor.as_ref()),
            Suite::Groupoid => suite_groupoid(inst, functor.as_ref()),
            Suite::Lie => suite_lie(inst),
            Suite::Dy => suite_dy(inst),
            Suite::Uea => suite_uea(inst),
            Suite::Deform => suite_deform(inst, functor.as_ref()),
        };
        v.extend_prefixed(s.label(), part);
    }
    Ok(v)
}

fn suite_backend(inst: &Instance) -> Verdict {
    let b = &inst.backend;
    let mut v = Verdict::new();
    if b.atoms().is_empty() {
        return v;
    }
    v.extend(b.check_hexagons());
    let has_actions = b.group().is_some() || b.backend_kind() == BackendKind::Dy;
    if has_actions {
        for (label, c) in &inst.comonoids {
            for (name, f) in [("delta", &c.delta), ("eps", &c.eps)] {
                let check = format!("equivariant[{label}].{name}");
                match b.check_equivariant(f) {
                    Ok(ok) => v.check_bool(check, "f commutes with every action", ok, None),
                    Err(e) => v.check_bool(check, "f commutes with every action", false, Some(e.to_string())),
                };
            }
        }
    }
    v
}

fn suite_comonoids(inst: &Instance) -> Verdict {
    let mut v = Verdict::new();
    for (label, c) in &inst.comonoids {
        v.extend_prefixed(&format!("comonoid[{label}]"), check_comonoid(c, true));
    }
    v
}

/// `(1/|G|) Σ_g ρ(g)·A·ρ(g)⁻¹` for a random integer matrix `A`.
fn random_equivariant(inst: &Instance, x: &ObjectRef, rng: &mut ChaCha8Rng) -> Result<Morphism<Rational>> {
    let b = &inst.backend;
    let g = b.group().ok_or_else(|| Error::MissingAction("no group".into()))?;
    let n = x.size();
    let a = Matrix::from_fn(n, n, |_, _| Rational::from_integer(rng.gen_range(-3i64..=3).into()));
    let mut sum = Matrix::<Rational>::zeros(n, n);
    for el in g.elements() {
        let r = b.group_action::<Rational>(x, el)?.to_matrix();
        let ri = b.group_action::<Rational>(x, g.inv(el))?.to_matrix();
        sum = sum.add(&r.mul(&a)?.mul(&ri)?)?;
    }
    let avg = sum.scale(&Rational::new(1.into(), (g.order() as i64).into()));
    Morphism::matrix(x.clone(), x.clone(), avg)
}

fn suite_functor(inst: &Instance, functor: Option<&AnyFunctor>, seed: u64) -> Verdict {
    let mut v = Verdict::new();
    let Some(f) = functor else { return v };
    if inst.backend.atoms().is_empty() {
        return v;
    }
    match check_comonoidal::<Rational>(f, &inst.sample) {
        Ok(c) => v.extend(c),
        Err(e) => record_error(&mut v, "comonoidal", "F is a braided comonoidal functor", &e),
    }
    for (lm, m) in &inst.comonoids {
        for (ln, n) in &inst.comonoids {
            match check_structure_maps_comonoidal::<Rational>(f, m, n) {
                Ok(c) => v.extend_prefixed(&format!("structure-maps[{lm},{ln}]"), c),
                Err(e) => record_error(&mut v, format!("structure-maps[{lm},{ln}]"), "F², F⁰ are comonoid morphisms", &e),
            }
        }
    }
    // Functoriality and descent on random equivariant endomorphisms.
    if let (Some(q), Some(_)) = (f.as_quotient(), inst.backend.group()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let lie_dim = inst.backend.lie().map_or(0, |l| l.dim());
        // Averaging only enforces the group action, so skip objects with a nonzero Lie action.
        let group_only = |x: &ObjectRef| {
            (0..lie_dim).all(|a| inst.backend.lie_action(x, a).map_or(true, |m| m.is_zero()))
        };
        for x in inst.sample.iter().filter(|x| !x.is_unit() && group_only(x)) {
            let res = (|| -> Result<(Morphism<Rational>, Morphism<Rational>)> {
                Ok((random_equivariant(inst, x, &mut rng)?, random_equivariant(inst, x, &mut rng)?))
            })();
            let (a, b) = match res {
                Ok(p) => p,
                Err(e) => {
                    record_error(&mut v, format!("random[{x}]"), "random equivariant sample", &e);
                    continue;
                }
            };
            v.check_bool(
                format!("random-equivariant[{x}]"),
                "Reynolds average commutes with the action",
                inst.backend.check_equivariant(&a).unwrap_or(false),
                None,
            );
            v.check_eq(
                format!("random-composition[{x}]"),
                "F(b∘a) = F(b)∘F(a)",
                b.compose(&a).and_then(|ba| f.apply_mor(&ba)),
                f.apply_mor(&b).and_then(|fb| fb.compose(&f.apply_mor(&a)?)),
            );
            let descent = (|| -> Result<(Morphism<Rational>, Morphism<Rational>)> {
                let p = q.projection(x)?;
                let fx = q.image(x)?;
                let pm = Morphism::matrix(x.clone(), fx.clone(), p.0.clone())?;
                Ok((pm.compose(&a)?, f.apply_mor(&a)?.compose(&pm)?))
            })();
            match descent {
                Ok((l, r)) => {
                    v.check_eq(format!("descent[{x}]"), "p∘a = F(a)∘p", Ok(l), Ok(r));
                }
                Err(e) => record_error(&mut v, format!("descent[{x}]"), "p∘a = F(a)∘p", &e),
            }
        }
    }
    v
}

/// Certificates for every comonoid on every pair drawn from `I` and the comonoid objects.
pub fn certify_all(
    f: &dyn ComonoidalFunctor<Rational>,
    inst: &Instance,
) -> Vec<(String, AdaptednessCertificate<Rational>)> {
    let pairs = all_pairs(&comonoid_objects(inst));
    inst.comonoids
        .iter()
        .map(|(l, c)| (l.clone(), certify_adapted(f, c, &pairs)))
        .collect()
}

fn suite_adapted(inst: &Instance, functor: Option<&AnyFunctor>) -> Verdict {
    let mut v = Verdict::new();
    let Some(f) = functor else { return v };
    if inst.comonoids.is_empty() {
        return v;
    }
    let unit_cert = certify_adapted::<Rational>(f, &Comonoid::unit(ComonoidalFunctor::<Rational>::source_kind(f)), &[]);
    v.check_bool("unit.chi", "χ_I = F⁰ is invertible", unit_cert.is_complete(), None);
    let certs = certify_all(f, inst);
    for (label, cert) in &certs {
        let chi_fail = cert.failures.iter().find(|x| x.pair.is_none());
        v.check_bool(
            format!("[{label}].chi"),
            "χ_M = F⁰∘F(ε) is invertible",
            cert.chi_inverse.is_some(),
            chi_fail.map(|x| x.reason.clone()),
        );
        for ((x, y), _) in &cert.gamma_inverses {
            v.check_bool(
                format!("[{label}].gamma[{x},{y}]"),
                "γ^M_{X,Y} = F²∘F(id⊗Δ⊗id) is invertible",
                true,
                None,
            );
        }
        for fail in cert.failures.iter().filter(|x| x.pair.is_some()) {
            v.check_bool(
                format!("[{label}].{}", fail.map),
                "γ^M_{X,Y} = F²∘F(id⊗Δ⊗id) is invertible",
                false,
                Some(fail.reason.clone()),
            );
        }
    }
    if certs.iter().any(|(_, c)| !c.failures.is_empty()) {
        return v;
    }
    let objs = comonoid_objects(inst);
    for ((_, m), (_, cm)) in inst.comonoids.iter().zip(&certs) {
        for ((_, n), (_, cn)) in inst.comonoids.iter().zip(&certs) {
            for x in &objs {
                for y in &objs {
                    match check_mixed_associativity::<Rational>(f, (m, cm), (n, cn), x, y) {
                        Ok(c) => v.extend(c),
                        Err(e) => record_error(&mut v, format!("mult-along.assoc[{},{};{x},{y}]", m.obj, n.obj), "", &e),
                    }
                }
            }
        }
    }
    v
}

fn suite_hopf(inst: &Instance, functor: Option<&AnyFunctor>) -> Verdict {
    let mut v = Verdict::new();
    let Some(f) = functor else { return v };
    if inst.comonoids.is_empty() {
        return v;
    }
    let h = match build_hopf_category::<Rational>(f, &inst.comonoids) {
        Ok(h) => h,
        Err(e) => {
            record_error(&mut v, "build", "the constructor applies", &e);
            return v;
        }
    };
    v.extend(check_hopf_category(&h));
    for (label, c) in &inst.comonoids {
        match (build_hopf_monoid::<Rational>(f, c), hopf_monoid_of(&h, label)) {
            (Ok(single), Ok(from_cat)) => {
                v.check_bool(
                    format!("one-object[{label}]"),
                    "A[x,x] equals the one-object construction",
                    single == from_cat,
                    None,
                );
                v.extend_prefixed(&format!("monoid[{label}]"), check_hopf_monoid(&single));
            }
            (Err(e), _) | (_, Err(e)) => record_error(&mut v, format!("one-object[{label}]"), "", &e),
        }
    }
    v
}

fn suite_groupoid(inst: &Instance, functor: Option<&AnyFunctor>) -> Verdict {
    let mut v = Verdict::new();
    let Some(f) = functor else { return v };
    if inst.backend.kind() != Kind::Set || inst.comonoids.is_empty() {
        return v;
    }
    let table = build_hopf_category::<Rational>(f, &inst.comonoids).and_then(|h| extract_set_groupoid(&h));
    match table {
        Ok(t) => {
            v.extend(t.check());
            for ((x, y), inv) in &t.inverse {
                let back = &t.inverse[&(y.clone(), x.clone())];
                v.check_bool(
                    format!("involutive[{x},{y}]"),
                    "S∘S = id",
                    inv.iter().enumerate().all(|(a, &b)| back[b] == a),
                    None,
                );
            }
        }
        Err(e) => record_error(&mut v, "extract", "the Hopf category is a groupoid", &e),
    }
    v
}

fn suite_lie(inst: &Instance) -> Verdict {
    let mut v = Verdict::new();
    let Some(lie) = &inst.lie else { return v };
    let b = &lie.bialgebra;
    v.extend(check_lie_bialgebra(b));
    for (i, j) in lie.twists.iter().enumerate() {
        let p = format!("twist[{i}]");
        v.check_bool(
            format!("{p}.equation"),
            "Alt(δ⊗id)(j) = [j12,j23] + [j12,j13] + [j13,j23]",
            check_twist(b, j),
            None,
        );
        match twist_bialgebra(b, j) {
            Ok(bj) => {
                v.extend_prefixed(&p, check_lie_bialgebra(&bj));
                let back = twist_bialgebra(&bj, &j.neg());
                v.check_bool(
                    format!("{p}.inverse"),
                    "twisting by j then −j restores δ",
                    back.map(|bb| bb == *b).unwrap_or(false),
                    None,
                );
            }
            Err(e) => record_error(&mut v, format!("{p}.twisted"), "δ_j is a Lie bialgebra", &e),
        }
    }
    v
}

fn dy_atoms(inst: &Instance) -> Vec<Atom> {
    let b = &inst.backend;
    let atoms: Vec<&Atom> = b.atoms().iter().filter(|a| a.pi.is_some() && a.pistar.is_some()).collect();
    let mut out: Vec<Atom> = atoms.iter().map(|a| (*a).clone()).collect();
    // Tensor products of pairs, with the structure the backend assigns to them.
    for x in &atoms {
        for y in &atoms {
            let obj = x.object().tensor(&y.object());
            let mut t = Atom::plain(format!("{}⊗{}", x.name, y.name), obj.size());
            t.pi = b.pi_on(&obj).ok();
            t.pistar = b.pistar_on(&obj).ok();
            out.push(t);
        }
    }
    out
}

fn suite_dy(inst: &Instance) -> Verdict {
    let mut v = Verdict::new();
    let Some(lie) = &inst.lie else { return v };
    if inst.backend.backend_kind() != BackendKind::Dy {
        return v;
    }
    let b = &lie.bialgebra;
    let atoms = dy_atoms(inst);
    for a in &atoms {
        match check_dy_module(b, a) {
            Ok(c) => v.extend_prefixed(&format!("module[{}]", a.name), c),
            Err(e) => record_error(&mut v, format!("module[{}]", a.name), "", &e),
        }
    }
    for (i, j) in lie.twists.iter().enumerate() {
        let bj = match twist_bialgebra(b, j) {
            Ok(bj) => bj,
            Err(e) => {
                record_error(&mut v, format!("twist[{i}]"), "", &e);
                continue;
            }
        };
        for a in &atoms {
            let p = format!("twist[{i}][{}]", a.name);
            match twist_dy_module(b, j, a) {
                Ok(aj) => {
                    match check_dy_module(&bj, &aj) {
                        Ok(c) => v.extend_prefixed(&p, c),
                        Err(e) => record_error(&mut v, p.clone(), "", &e),
                    }
                    v.check_bool(
                        format!("{p}.inverse"),
                        "twisting by j then −j restores π*",
                        twist_dy_module(&bj, &j.neg(), &aj).map(|x| x == *a).unwrap_or(false),
                        None,
                    );
                }
                Err(e) => record_error(&mut v, p, "", &e),
            }
        }
    }
    v
}

fn suite_uea(inst: &Instance) -> Verdict {
    let mut v = Verdict::new();
    let (Some(lie), Some(uea)) = (&inst.lie, inst.uea) else { return v };
    let b = &lie.bialgebra;
    let mut twists = vec![TwistElement::zero(b.dim())];
    twists.extend(lie.twists.iter().cloned());
    let mut base: Option<Comonoid<Rational>> = None;
    for (i, j) in twists.iter().enumerate() {
        let p = if i == 0 { "j=0".to_string() } else { format!("twist[{}]", i - 1) };
        let u = match truncated_uea_dy(b, uea.degree, j) {
            Ok(u) => u,
            Err(e) => {
                record_error(&mut v, format!("{p}.build"), "", &e);
                continue;
            }
        };
        let c = u.comonoid();
        v.extend_prefixed(&p, check_comonoid(&c, true));
        let want: Vec<Value> = j.as_tensor().iter().map(|x| x.to_string().into()).collect();
        // π*(1) has its `e_a⊗e_b` coefficient at row `a·dim + index(e_b)`.
        let got: Vec<Value> = (0..b.dim())
            .flat_map(|a| {
                (0..b.dim()).map(move |bb| {
                    let mut e = vec![0; b.dim()];
                    e[bb] = 1;
                    (a, e)
                })
            })
            .map(|(a, e)| {
                u.index_of(&e)
                    .map(|idx| u.pistar().get(a * u.dim() + idx, 0).to_string().into())
                    .unwrap_or(Value::Null)
            })
            .collect();
        v.check_values(format!("{p}.seed"), "π*(1) = j", Value::Array(got), Value::Array(want));
        match u.check_dy_identities(uea.check_degree) {
            Ok(c) => v.extend_prefixed(&p, c),
            Err(e) => record_error(&mut v, format!("{p}.dy"), "DY identities on degree ≤ d", &e),
        }
        match &base {
            None => base = Some(c),
            Some(c0) => {
                v.check_bool(
                    format!("{p}.same-comonoid"),
                    "twisted and untwisted Δ, ε agree",
                    c0.delta == c.delta && c0.eps == c.eps,
                    None,
                );
            }
        }
    }
    v
}

fn atom_objects(inst: &Instance) -> Vec<ObjectRef> {
    inst.backend.atoms().iter().map(Atom::object).collect()
}

fn deform_checks_at<const K: usize>(
    inst: &Instance,
    f: &AnyFunctor,
    pc: &PreCartierData,
    plain: Option<&HopfCategoryData<Rational>>,
) -> Result<Verdict> {
    let def = inst.deformation.as_ref().expect("deformation block");
    let mut v = Verdict::new();
    v.extend(check_deformed_braiding::<K>(pc, &atom_objects(inst)));
    if let Some(plain) = plain {
        let sample = atom_objects(inst);
        match build_deformed_hopf_category::<K, _>(f, &inst.comonoids, pc, &sample, def.mode) {
            Ok(h) => {
                v.extend(check_hopf_category(&h));
                v.check_bool(
                    "degree-zero",
                    "the ℏ⁰ part equals the undeformed construction",
                    h.constant_term() == *plain,
                    None,
                );
                let zero = PreCartierData::zero(inst.backend.clone())?;
                let z = build_deformed_hopf_category::<K, _>(f, &inst.comonoids, &zero, &sample, def.mode);
                v.check_bool(
                    "zero-t",
                    "t = 0 reproduces the undeformed construction",
                    z.map(|z| z == plain.lift::<HSeries<K>>()).unwrap_or(false),
                    None,
                );
            }
            Err(e) => record_error(&mut v, "build", "the deformed constructor applies", &e),
        }
    }
    Ok(v)
}

fn suite_deform(inst: &Instance, functor: Option<&AnyFunctor>) -> Verdict {
    let mut v = Verdict::new();
    let Some(def) = &inst.deformation else { return v };
    let pc = &def.pre_cartier;
    let mut sample = atom_objects(inst);
    sample.push(ObjectRef::unit());
    let naturality: Vec<Morphism<Rational>> = inst
        .comonoids
        .iter()
        .flat_map(|(_, c)| [c.delta.clone(), c.eps.clone()])
        .collect();
    let target = functor
        .and_then(AnyFunctor::as_quotient)
        .map(|q| (q, induced_target_t(q, pc)));
    let checks = PreCartierChecks {
        commutation: true,
        antisymmetry: true,
        naturality,
        inf_cocommutative: inst.comonoids.clone(),
        inf_cocommutative_mode: Some(def.mode),
        inf_braided: target.as_ref().map(|(q, t)| InfBraidedCheck {
            functor: *q,
            target_t: t,
        }),
    };
    match check_pre_cartier(pc, &sample, &checks) {
        Ok(c) => v.extend(c),
        Err(e) => record_error(&mut v, "precartier", "", &e),
    }
    let Some(f) = functor else {
        return v;
    };
    let plain = if inst.comonoids.is_empty() {
        None
    } else {
        match build_hopf_category::<Rational>(f, &inst.comonoids) {
            Ok(h) => Some(h),
            Err(e) => {
                record_error(&mut v, "undeformed", "the undeformed constructor applies", &e);
                None
            }
        }
    };
    for k in 1..=def.order.max(1) {
        match dispatch_order!(k, deform_checks_at(inst, f, pc, plain.as_ref())) {
            Ok(c) => v.extend_prefixed(&format!("K={k}"), c),
            Err(e) => record_error(&mut v, format!("K={k}"), "", &e),
        }
    }
    v
}

/// A verified construction. `structure` is `None` whenever `verdict` fails.
pub struct BuildOutput {
    pub structure: Option<Value>,
    pub verdict: Verdict,
}

fn finish(structure: Value, verdict: Verdict) -> BuildOutput {
    BuildOutput {
        structure: verdict.passed().then_some(structure),
        verdict,
    }
}

fn build_deformed_at<const K: usize>(inst: &Instance, f: &AnyFunctor) -> Result<BuildOutput> {
    let def = inst
        .deformation
        .as_ref()
        .ok_or_else(|| Error::Parse("instance has no deformation block".into()))?;
    let h = build_deformed_hopf_category::<K, _>(f, &inst.comonoids, &def.pre_cartier, &atom_objects(inst), def.mode)?;
    let verdict = check_hopf_category(&h);
    // At order 0 the series ring is the rationals; emit it in the undeformed format.
    let structure = if K == 0 { h.constant_term().to_json() } else { h.to_json() };
    Ok(finish(json!({ "order": K, "hopf_category": structure }), verdict))
}

/// Runs a constructor and re-verifies its output.
pub fn run_build(inst: &Instance, target: Target, order: Option<usize>) -> Result<BuildOutput> {
    let f = inst
        .functor()?
        .ok_or_else(|| Error::Parse("instance names no functor".into()))?;
    if inst.comonoids.is_empty() {
        return Err(Error::Parse("instance lists no comonoids".into()));
    }
    match target {
        Target::HopfMonoid => {
            let (label, c) = &inst.comonoids[0];
            let h = build_hopf_monoid::<Rational>(&f, c)?;
            let v = check_hopf_monoid(&h);
            Ok(finish(json!({ "label": label, "hopf_monoid": h.to_json() }), v))
        }
        Target::HopfCategory => {
            let h = build_hopf_category::<Rational>(&f, &inst.comonoids)?;
            let v = check_hopf_category(&h);
            Ok(finish(json!({ "hopf_category": h.to_json() }), v))
        }
        Target::Groupoid => {
            let h = build_hopf_category::<Rational>(&f, &inst.comonoids)?;
            let mut v = check_hopf_category(&h);
            let t = extract_set_groupoid(&h)?;
            v.extend(t.check());
            Ok(finish(json!({ "groupoid": t.to_json() }), v))
        }
        Target::Deformed => {
            let k = order
                .or(inst.deformation.as_ref().map(|d| d.order))
                .ok_or_else(|| Error::Parse("no truncation order given".into()))?;
            dispatch_order!(k, build_deformed_at(inst, &f))
        }
    }
}
