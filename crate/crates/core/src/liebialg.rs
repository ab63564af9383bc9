//! Lie bialgebras by structure constants, twists, Drinfeld–Yetter modules and
//! degree-truncated enveloping algebras.
//!
//! Tensors over `b` are dense coefficient vectors in row-major order: the
//! coefficient of `e_a⊗e_b⊗e_c` sits at `(a·n + b)·n + c`.
//!
//! Bracket convention for the classical Yang–Baxter terms of a twist
//! `j = Σ j^{ab} e_a⊗e_b`: the bracket is taken in the shared tensor slot,
//!
//! ```text
//! [j₁₂, j₂₃] = Σ j^{ab} j^{cd} e_a ⊗ [e_b, e_c] ⊗ e_d
//! [j₁₂, j₁₃] = Σ j^{ab} j^{cd} [e_a, e_c] ⊗ e_b ⊗ e_d
//! [j₁₃, j₂₃] = Σ j^{ab} j^{cd} e_a ⊗ e_c ⊗ [e_b, e_d]
//! ```

use std::collections::{BTreeMap, HashMap};
use std::sync::Arc;

use num_traits::{One, Zero};
use serde_json::{json, Value};

use crate::backend::{Atom, Backend};
use crate::coalg::Comonoid;
use crate::cofunctor::QuotientFunctor;
use crate::error::{Error, Result};
use crate::matrix::Matrix;
use crate::morphism::{Morphism, ObjectRef};
use crate::scalar::{rational_to_string, Rational};
use crate::verdict::{LawRecord, Verdict, Witness};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LieBialgebra {
    dim: usize,
    /// `bracket[(i·n + j)·n + k]`: coefficient of `e_k` in `[e_i, e_j]`.
    bracket: Vec<Rational>,
    /// `cobracket[(i·n + j)·n + k]`: coefficient of `e_j⊗e_k` in `δ(e_i)`.
    cobracket: Vec<Rational>,
}

impl LieBialgebra {
    pub fn new(dim: usize, bracket: Vec<Rational>, cobracket: Vec<Rational>) -> Result<Self> {
        let n3 = dim * dim * dim;
        if bracket.len() != n3 || cobracket.len() != n3 {
            return Err(Error::ShapeMismatch(format!("structure constants need {n3} entries")));
        }
        Ok(Self {
            dim,
            bracket,
            cobracket,
        })
    }

    /// Builds from sparse `(i, j, k, value)` entries.
    pub fn from_entries(
        dim: usize,
        bracket: &[(usize, usize, usize, Rational)],
        cobracket: &[(usize, usize, usize, Rational)],
    ) -> Result<Self> {
        let fill = |entries: &[(usize, usize, usize, Rational)]| -> Result<Vec<Rational>> {
            let mut out = vec![Rational::zero(); dim * dim * dim];
            for (i, j, k, c) in entries {
                if *i >= dim || *j >= dim || *k >= dim {
                    return Err(Error::ShapeMismatch(format!("index ({i},{j},{k}) out of range")));
                }
                out[(i * dim + j) * dim + k] += c;
            }
            Ok(out)
        };
        Self::new(dim, fill(bracket)?, fill(cobracket)?)
    }

    pub fn abelian(dim: usize) -> Self {
        Self::from_entries(dim, &[], &[]).expect("abelian")
    }

    /// Basis `{x, y}` with `[x, y] = y`, `δ(x) = 0`, `δ(y) = x⊗y − y⊗x`.
    pub fn b2() -> Self {
        let one = Rational::one();
        Self::from_entries(
            2,
            &[(0, 1, 1, one.clone()), (1, 0, 1, -one.clone())],
            &[(1, 0, 1, one.clone()), (1, 1, 0, -one)],
        )
        .expect("b2")
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn bracket_coeff(&self, i: usize, j: usize, k: usize) -> &Rational {
        &self.bracket[(i * self.dim + j) * self.dim + k]
    }

    pub fn cobracket_coeff(&self, i: usize, j: usize, k: usize) -> &Rational {
        &self.cobracket[(i * self.dim + j) * self.dim + k]
    }

    pub fn bracket_entries(&self) -> &[Rational] {
        &self.bracket
    }

    pub fn cobracket_entries(&self) -> &[Rational] {
        &self.cobracket
    }

    /// Overwrites a single structure constant; used for perturbation testing.
    pub fn with_bracket_coeff(&self, i: usize, j: usize, k: usize, value: Rational) -> Self {
        let mut out = self.clone();
        out.bracket[(i * self.dim + j) * self.dim + k] = value;
        out
    }

    pub fn with_cobracket_coeff(&self, i: usize, j: usize, k: usize, value: Rational) -> Self {
        let mut out = self.clone();
        out.cobracket[(i * self.dim + j) * self.dim + k] = value;
        out
    }

    /// `[·,·]: b⊗b → b` as an `n × n²` matrix.
    pub fn bracket_matrix(&self) -> Matrix<Rational> {
        let n = self.dim;
        Matrix::from_fn(n, n * n, |k, c| self.bracket_coeff(c / n, c % n, k).clone())
    }

    /// `δ: b → b⊗b` as an `n² × n` matrix.
    pub fn cobracket_matrix(&self) -> Matrix<Rational> {
        let n = self.dim;
        Matrix::from_fn(n * n, n, |r, i| self.cobracket_coeff(i, r / n, r % n).clone())
    }

    pub fn bracket(&self, u: &[Rational], v: &[Rational]) -> Vec<Rational> {
        let n = self.dim;
        let mut out = vec![Rational::zero(); n];
        for i in 0..n {
            if u[i].is_zero() {
                continue;
            }
            for j in 0..n {
                if v[j].is_zero() {
                    continue;
                }
                let uv = &u[i] * &v[j];
                for (k, o) in out.iter_mut().enumerate() {
                    let c = self.bracket_coeff(i, j, k);
                    if !c.is_zero() {
                        *o += &uv * c;
                    }
                }
            }
        }
        out
    }

    pub fn cobracket(&self, u: &[Rational]) -> Vec<Rational> {
        let n = self.dim;
        let mut out = vec![Rational::zero(); n * n];
        for (i, ui) in u.iter().enumerate() {
            if ui.is_zero() {
                continue;
            }
            for (r, o) in out.iter_mut().enumerate() {
                let c = self.cobracket_coeff(i, r / n, r % n);
                if !c.is_zero() {
                    *o += ui * c;
                }
            }
        }
        out
    }

    fn basis(&self, i: usize) -> Vec<Rational> {
        let mut v = vec![Rational::zero(); self.dim];
        v[i] = Rational::one();
        v
    }

    /// Adjoint action of `x` on a tensor of any rank: `x·(a⊗b⊗…) = [x,a]⊗b⊗… + a⊗[x,b]⊗… + …`.
    pub fn adjoint_on_tensor(&self, x: &[Rational], t: &[Rational], rank: usize) -> Vec<Rational> {
        let n = self.dim;
        let ad: Vec<Vec<Rational>> = (0..n).map(|a| self.bracket(x, &self.basis(a))).collect();
        let mut out = vec![Rational::zero(); t.len()];
        for (idx, coef) in t.iter().enumerate() {
            if coef.is_zero() {
                continue;
            }
            let digits = to_digits(idx, n, rank);
            for slot in 0..rank {
                for (k, c) in ad[digits[slot]].iter().enumerate() {
                    if c.is_zero() {
                        continue;
                    }
                    let mut d = digits.clone();
                    d[slot] = k;
                    out[from_digits(&d, n)] += coef * c;
                }
            }
        }
        out
    }

    pub fn to_json(&self) -> Value {
        let sparse = |data: &[Rational]| -> Vec<Value> {
            data.iter()
                .enumerate()
                .filter(|(_, c)| !c.is_zero())
                .map(|(idx, c)| {
                    let d = to_digits(idx, self.dim, 3);
                    json!([d[0], d[1], d[2], rational_to_string(c)])
                })
                .collect()
        };
        json!({
            "dim": self.dim,
            "bracket": sparse(&self.bracket),
            "cobracket": sparse(&self.cobracket),
        })
    }
}

fn to_digits(mut idx: usize, n: usize, rank: usize) -> Vec<usize> {
    let mut d = vec![0; rank];
    for slot in (0..rank).rev() {
        d[slot] = idx % n;
        idx /= n;
    }
    d
}

fn from_digits(d: &[usize], n: usize) -> usize {
    d.iter().fold(0, |acc, &x| acc * n + x)
}

fn is_zero_vec(v: &[Rational]) -> bool {
    v.iter().all(Zero::is_zero)
}

fn sub_vec(a: &[Rational], b: &[Rational]) -> Vec<Rational> {
    a.iter().zip(b).map(|(x, y)| x - y).collect()
}

fn add_vec(a: &[Rational], b: &[Rational]) -> Vec<Rational> {
    a.iter().zip(b).map(|(x, y)| x + y).collect()
}

fn vec_json(v: &[Rational]) -> Value {
    Value::Array(v.iter().map(|c| Value::String(rational_to_string(c))).collect())
}

/// Records an identity whose residual must vanish on every listed input.
fn record_residuals(
    verdict: &mut Verdict,
    check: &str,
    diagram: &str,
    residuals: impl IntoIterator<Item = (String, Vec<Rational>)>,
) -> bool {
    let failure = residuals.into_iter().find(|(_, r)| !is_zero_vec(r));
    let passed = failure.is_none();
    verdict.records.push(LawRecord {
        check: check.to_string(),
        diagram: diagram.to_string(),
        passed,
        witness: failure.map(|(input, r)| Witness {
            lhs: json!({ "input": input, "residual": vec_json(&r) }),
            rhs: json!({ "input": input, "residual": vec_json(&vec![Rational::zero(); r.len()]) }),
        }),
        note: None,
    });
    passed
}

/// Antisymmetry, Jacobi, co-antisymmetry, co-Jacobi and the cocycle condition.
pub fn check_lie_bialgebra(b: &LieBialgebra) -> Verdict {
    let n = b.dim;
    let e = |i| b.basis(i);
    let mut v = Verdict::new();
    let pairs: Vec<(usize, usize)> = (0..n).flat_map(|i| (0..n).map(move |j| (i, j))).collect();

    record_residuals(
        &mut v,
        "lie.antisymmetry",
        "[x,y] + [y,x] = 0",
        pairs
            .iter()
            .map(|&(i, j)| (format!("e{i},e{j}"), add_vec(&b.bracket(&e(i), &e(j)), &b.bracket(&e(j), &e(i))))),
    );

    record_residuals(
        &mut v,
        "lie.jacobi",
        "[x,[y,z]] + [y,[z,x]] + [z,[x,y]] = 0",
        (0..n).flat_map(|i| (0..n).flat_map(move |j| (0..n).map(move |k| (i, j, k)))).map(|(i, j, k)| {
            let t1 = b.bracket(&e(i), &b.bracket(&e(j), &e(k)));
            let t2 = b.bracket(&e(j), &b.bracket(&e(k), &e(i)));
            let t3 = b.bracket(&e(k), &b.bracket(&e(i), &e(j)));
            (format!("e{i},e{j},e{k}"), add_vec(&add_vec(&t1, &t2), &t3))
        }),
    );

    record_residuals(
        &mut v,
        "lie.co-antisymmetry",
        "δ(x) + τ(δ(x)) = 0",
        (0..n).map(|i| {
            let d = b.cobracket(&e(i));
            let res: Vec<Rational> = (0..n * n).map(|r| &d[r] + &d[(r % n) * n + r / n]).collect();
            (format!("e{i}"), res)
        }),
    );

    record_residuals(
        &mut v,
        "lie.co-jacobi",
        "Alt∘(id⊗δ)∘δ = 0",
        (0..n).map(|i| {
            let d = b.cobracket(&e(i));
            let mut t = vec![Rational::zero(); n * n * n];
            for (r, c) in d.iter().enumerate() {
                if c.is_zero() {
                    continue;
                }
                let (a, k) = (r / n, r % n);
                for (s, c2) in b.cobracket(&e(k)).iter().enumerate() {
                    if !c2.is_zero() {
                        t[a * n * n + s] += c * c2;
                    }
                }
            }
            (format!("e{i}"), alt3(&t, n))
        }),
    );

    record_residuals(
        &mut v,
        "lie.cocycle",
        "δ([x,y]) − x·δ(y) + y·δ(x) = 0",
        pairs.iter().map(|&(i, j)| {
            let lhs = b.cobracket(&b.bracket(&e(i), &e(j)));
            let xd = b.adjoint_on_tensor(&e(i), &b.cobracket(&e(j)), 2);
            let yd = b.adjoint_on_tensor(&e(j), &b.cobracket(&e(i)), 2);
            (format!("e{i},e{j}"), add_vec(&sub_vec(&lhs, &xd), &yd))
        }),
    );
    v
}

/// `Alt(x⊗y⊗z) = x⊗y⊗z + y⊗z⊗x + z⊗x⊗y` on a rank-3 tensor.
fn alt3(t: &[Rational], n: usize) -> Vec<Rational> {
    let mut out = vec![Rational::zero(); t.len()];
    for (idx, c) in t.iter().enumerate() {
        if c.is_zero() {
            continue;
        }
        let d = to_digits(idx, n, 3);
        for perm in [[d[0], d[1], d[2]], [d[1], d[2], d[0]], [d[2], d[0], d[1]]] {
            out[from_digits(&perm, n)] += c;
        }
    }
    out
}

/// An element of `Λ²(b)`, stored as an antisymmetric coefficient matrix.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TwistElement {
    coeffs: Matrix<Rational>,
}

impl TwistElement {
    pub fn new(coeffs: Matrix<Rational>) -> Result<Self> {
        if !coeffs.is_square() || coeffs.transpose() != coeffs.neg() {
            return Err(Error::NotATwist);
        }
        Ok(Self { coeffs })
    }

    pub fn zero(n: usize) -> Self {
        Self {
            coeffs: Matrix::zeros(n, n),
        }
    }

    /// `c·(e_a⊗e_b − e_b⊗e_a)` in dimension `n`.
    pub fn wedge(n: usize, a: usize, b: usize, c: Rational) -> Self {
        let mut m = Matrix::zeros(n, n);
        m.set(a, b, c.clone());
        m.set(b, a, -c);
        Self { coeffs: m }
    }

    pub fn coeffs(&self) -> &Matrix<Rational> {
        &self.coeffs
    }

    pub fn dim(&self) -> usize {
        self.coeffs.rows()
    }

    pub fn neg(&self) -> Self {
        Self {
            coeffs: self.coeffs.neg(),
        }
    }

    /// The coefficient vector in `b⊗b`.
    pub fn as_tensor(&self) -> Vec<Rational> {
        self.coeffs.entries().to_vec()
    }
}

/// `Alt(δ⊗id)(j) − ([j₁₂,j₂₃] + [j₁₂,j₁₃] + [j₁₃,j₂₃])`.
pub fn twist_residual(b: &LieBialgebra, j: &TwistElement) -> Vec<Rational> {
    let n = b.dim;
    let jt = j.as_tensor();
    let mut lhs = vec![Rational::zero(); n * n * n];
    for a in 0..n {
        for bb in 0..n {
            let c = &jt[a * n + bb];
            if c.is_zero() {
                continue;
            }
            for (r, d) in b.cobracket(&b.basis(a)).iter().enumerate() {
                if !d.is_zero() {
                    lhs[r * n + bb] += c * d;
                }
            }
        }
    }
    let lhs = alt3(&lhs, n);
    let mut rhs = vec![Rational::zero(); n * n * n];
    for a in 0..n {
        for bb in 0..n {
            let j1 = &jt[a * n + bb];
            if j1.is_zero() {
                continue;
            }
            for c in 0..n {
                for d in 0..n {
                    let j2 = &jt[c * n + d];
                    if j2.is_zero() {
                        continue;
                    }
                    let w = j1 * j2;
                    for k in 0..n {
                        let bc = b.bracket_coeff(bb, c, k);
                        if !bc.is_zero() {
                            rhs[from_digits(&[a, k, d], n)] += &w * bc;
                        }
                        let ac = b.bracket_coeff(a, c, k);
                        if !ac.is_zero() {
                            rhs[from_digits(&[k, bb, d], n)] += &w * ac;
                        }
                        let bd = b.bracket_coeff(bb, d, k);
                        if !bd.is_zero() {
                            rhs[from_digits(&[a, c, k], n)] += &w * bd;
                        }
                    }
                }
            }
        }
    }
    sub_vec(&lhs, &rhs)
}

pub fn check_twist(b: &LieBialgebra, j: &TwistElement) -> bool {
    j.dim() == b.dim && is_zero_vec(&twist_residual(b, j))
}

/// The twisted Lie bialgebra: same bracket, `δ_j(x) = δ(x) + [1⊗x + x⊗1, j]`.
pub fn twist_bialgebra(b: &LieBialgebra, j: &TwistElement) -> Result<LieBialgebra> {
    if !check_twist(b, j) {
        return Err(Error::NotATwist);
    }
    let n = b.dim;
    let jt = j.as_tensor();
    let mut cobracket = b.cobracket.clone();
    for i in 0..n {
        let ad = b.adjoint_on_tensor(&b.basis(i), &jt, 2);
        for (r, c) in ad.into_iter().enumerate() {
            cobracket[i * n * n + r] += c;
        }
    }
    LieBialgebra::new(n, b.bracket.clone(), cobracket)
}

fn b_obj(n: usize) -> ObjectRef {
    ObjectRef::atom("b", n)
}

/// The three Drinfeld–Yetter compatibility identities as matrix equations.
pub fn check_dy_module(b: &LieBialgebra, v: &Atom) -> Result<Verdict> {
    let pi = v.pi.as_ref().ok_or_else(|| Error::MissingAction(v.name.clone()))?;
    let ps = v.pistar.as_ref().ok_or_else(|| Error::MissingAction(v.name.clone()))?;
    let n = b.dim;
    let d = v.size;
    if pi.shape() != (d, n * d) || ps.shape() != (n * d, d) {
        return Err(Error::ShapeMismatch(format!("DY data on `{}` has the wrong shape", v.name)));
    }
    let vo = v.object();
    let bo = b_obj(n);
    let id_v = Matrix::<Rational>::identity(d);
    let id_b = Matrix::<Rational>::identity(n);
    let tau = Matrix::from_table(
        Morphism::<Rational>::braiding(crate::morphism::Kind::Set, &bo, &bo)
            .as_table()
            .unwrap(),
        n * n,
    );
    let br = b.bracket_matrix();
    let de = b.cobracket_matrix();
    let id_pi = id_b.kron(pi);
    let id_ps = id_b.kron(ps);
    let tau_v = tau.kron(&id_v);
    let mor = |dom: &ObjectRef, cod: &ObjectRef, m: Result<Matrix<Rational>>| {
        m.and_then(|m| Morphism::matrix(dom.clone(), cod.clone(), m))
    };
    let bv = bo.tensor(&vo);
    let bbv = bo.tensor(&bv);

    let mut out = Verdict::new();
    out.check_eq(
        "dy.module",
        "π∘([,]⊗id) = π∘(id⊗π) − π∘(id⊗π)∘(τ⊗id)",
        mor(&bbv, &vo, pi.mul(&br.kron(&id_v))),
        mor(&bbv, &vo, (|| {
            let a = pi.mul(&id_pi)?;
            a.sub(&a.mul(&tau_v)?)
        })()),
    );
    out.check_eq(
        "dy.comodule",
        "(δ⊗id)∘π* = (τ⊗id)∘(id⊗π*)∘π* − (id⊗π*)∘π*",
        mor(&vo, &bbv, de.kron(&id_v).mul(ps)),
        mor(&vo, &bbv, (|| {
            let a = id_ps.mul(ps)?;
            tau_v.mul(&a)?.sub(&a)
        })()),
    );
    out.check_eq(
        "dy.compatibility",
        "π*∘π = (id⊗π)∘(τ⊗id)∘(id⊗π*) + ([,]⊗id)∘(id⊗π*) − (id⊗π)∘(δ⊗id)",
        mor(&bv, &bv, ps.mul(pi)),
        mor(&bv, &bv, (|| {
            let t1 = id_pi.mul(&tau_v)?.mul(&id_ps)?;
            let t2 = br.kron(&id_v).mul(&id_ps)?;
            let t3 = id_pi.mul(&de.kron(&id_v))?;
            t1.add(&t2)?.sub(&t3)
        })()),
    );
    Ok(out)
}

/// Twists the coaction: `π*_j(v) = π*(v) + (id⊗π)(j⊗v)`.
pub fn twist_dy_module(b: &LieBialgebra, j: &TwistElement, v: &Atom) -> Result<Atom> {
    if !check_twist(b, j) {
        return Err(Error::NotATwist);
    }
    let pi = v.pi.as_ref().ok_or_else(|| Error::MissingAction(v.name.clone()))?;
    let ps = v.pistar.as_ref().ok_or_else(|| Error::MissingAction(v.name.clone()))?;
    let n = b.dim;
    let id_v = Matrix::<Rational>::identity(v.size);
    let j_col = Matrix::column(j.as_tensor());
    let shift = Matrix::<Rational>::identity(n).kron(pi).mul(&j_col.kron(&id_v))?;
    let mut out = v.clone();
    out.pistar = Some(ps.add(&shift)?);
    Ok(out)
}

/// `V ↦ V/(b·V)` on Drinfeld–Yetter modules.
pub fn dy_coinvariants_functor(backend: Arc<Backend>) -> Result<QuotientFunctor> {
    QuotientFunctor::dy_coinvariants(backend)
}

/// A linear combination of PBW monomials keyed by exponent vectors.
type Poly = BTreeMap<Vec<usize>, Rational>;

/// `U(b)` truncated at total degree `N`, with its Drinfeld–Yetter structure
/// `π(x⊗u) = xu`, `π*(1) = j`.
#[derive(Clone, Debug)]
pub struct TruncatedUea {
    base: LieBialgebra,
    degree: usize,
    twist: TwistElement,
    basis: Vec<Vec<usize>>,
    index: HashMap<Vec<usize>, usize>,
    delta: Matrix<Rational>,
    eps: Matrix<Rational>,
    /// `dim × (n·dim)`; columns flagged in `pi_overflow` would need degree `N + 1`.
    pi: Matrix<Rational>,
    pi_overflow: Vec<bool>,
    /// `(n·dim) × dim`; columns with `pistar_defined[u] == false` need degree > `N`.
    pistar: Matrix<Rational>,
    pistar_defined: Vec<bool>,
}

/// Normal-orders words in the generators by commutator rewriting.
struct PbwRewriter<'a> {
    b: &'a LieBialgebra,
    memo: HashMap<Vec<usize>, Poly>,
}

impl<'a> PbwRewriter<'a> {
    fn new(b: &'a LieBialgebra) -> Self {
        Self { b, memo: HashMap::new() }
    }

    fn exponents(&self, word: &[usize]) -> Vec<usize> {
        let mut e = vec![0; self.b.dim];
        for &g in word {
            e[g] += 1;
        }
        e
    }

    fn normal_order(&mut self, word: &[usize]) -> Poly {
        if let Some(p) = self.memo.get(word) {
            return p.clone();
        }
        let out = match word.windows(2).position(|w| w[0] > w[1]) {
            None => Poly::from([(self.exponents(word), Rational::one())]),
            Some(p) => {
                let (hi, lo) = (word[p], word[p + 1]);
                let mut swapped = word.to_vec();
                swapped.swap(p, p + 1);
                let mut acc = self.normal_order(&swapped);
                for k in 0..self.b.dim {
                    let c = self.b.bracket_coeff(hi, lo, k).clone();
                    if c.is_zero() {
                        continue;
                    }
                    let mut shorter = word[..p].to_vec();
                    shorter.push(k);
                    shorter.extend_from_slice(&word[p + 2..]);
                    for (m, v) in self.normal_order(&shorter) {
                        *acc.entry(m).or_insert_with(Rational::zero) += v * &c;
                    }
                }
                acc.retain(|_, v| !v.is_zero());
                acc
            }
        };
        self.memo.insert(word.to_vec(), out.clone());
        out
    }

    fn word_of(exps: &[usize]) -> Vec<usize> {
        exps.iter().enumerate().flat_map(|(g, &k)| std::iter::repeat_n(g, k)).collect()
    }

    /// Product of two PBW monomials.
    fn product(&mut self, u: &[usize], v: &[usize]) -> Poly {
        let mut w = Self::word_of(u);
        w.extend(Self::word_of(v));
        self.normal_order(&w)
    }
}

fn monomials(n: usize, max_degree: usize) -> Vec<Vec<usize>> {
    fn rec(n: usize, remaining: usize, prefix: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if prefix.len() == n {
            out.push(prefix.clone());
            return;
        }
        for k in 0..=remaining {
            prefix.push(k);
            rec(n, remaining - k, prefix, out);
            prefix.pop();
        }
    }
    let mut all = Vec::new();
    rec(n, max_degree, &mut Vec::new(), &mut all);
    // Degree first, then reverse-lexicographic so that e₁ precedes e₂.
    all.sort_by(|a, b| {
        let (da, db): (usize, usize) = (a.iter().sum(), b.iter().sum());
        da.cmp(&db).then_with(|| b.cmp(a))
    });
    all
}

impl TruncatedUea {
    pub fn dim(&self) -> usize {
        self.basis.len()
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn base(&self) -> &LieBialgebra {
        &self.base
    }

    pub fn twist(&self) -> &TwistElement {
        &self.twist
    }

    pub fn basis(&self) -> &[Vec<usize>] {
        &self.basis
    }

    pub fn index_of(&self, exps: &[usize]) -> Option<usize> {
        self.index.get(exps).copied()
    }

    pub fn monomial_degree(&self, u: usize) -> usize {
        self.basis[u].iter().sum()
    }

    pub fn delta(&self) -> &Matrix<Rational> {
        &self.delta
    }

    pub fn eps(&self) -> &Matrix<Rational> {
        &self.eps
    }

    pub fn pi(&self) -> &Matrix<Rational> {
        &self.pi
    }

    pub fn pi_overflow(&self) -> &[bool] {
        &self.pi_overflow
    }

    pub fn pistar(&self) -> &Matrix<Rational> {
        &self.pistar
    }

    pub fn pistar_defined(&self) -> &[bool] {
        &self.pistar_defined
    }

    pub fn object(&self) -> ObjectRef {
        ObjectRef::atom(format!("U≤{}", self.degree), self.dim())
    }

    /// `(U≤N, Δ, ε)` as a comonoid in vector spaces.
    pub fn comonoid(&self) -> Comonoid<Rational> {
        let u = self.object();
        Comonoid {
            obj: u.clone(),
            delta: Morphism::matrix(u.clone(), u.tensor(&u), self.delta.clone()).expect("Δ shape"),
            eps: Morphism::matrix(u, ObjectRef::unit(), self.eps.clone()).expect("ε shape"),
        }
    }

    fn unit_vec(&self, u: usize) -> Vec<Rational> {
        let mut v = vec![Rational::zero(); self.dim()];
        v[u] = Rational::one();
        v
    }

    /// `e_a · v`, or `None` if some term would need degree `N + 1`.
    pub fn left_mul(&self, a: usize, v: &[Rational]) -> Option<Vec<Rational>> {
        let d = self.dim();
        let mut out = vec![Rational::zero(); d];
        for (u, c) in v.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            if self.pi_overflow[a * d + u] {
                return None;
            }
            for (w, o) in out.iter_mut().enumerate() {
                let p = self.pi.get(w, a * d + u);
                if !p.is_zero() {
                    *o += c * p;
                }
            }
        }
        Some(out)
    }

    /// `π*(v)` in `b⊗U`, or `None` if undefined within the truncation.
    pub fn pistar_apply(&self, v: &[Rational]) -> Option<Vec<Rational>> {
        let n = self.base.dim;
        let d = self.dim();
        let mut out = vec![Rational::zero(); n * d];
        for (u, c) in v.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            if !self.pistar_defined[u] {
                return None;
            }
            for (r, o) in out.iter_mut().enumerate() {
                let p = self.pistar.get(r, u);
                if !p.is_zero() {
                    *o += c * p;
                }
            }
        }
        Some(out)
    }

    /// Right-hand side of the third identity on `e_a ⊗ u`, given `π*(u)`:
    /// `(id⊗π)(τ⊗id)(e_a⊗π*(u)) + ([,]⊗id)(e_a⊗π*(u)) − (id⊗π)(δ(e_a)⊗u)`.
    fn compatibility_rhs(&self, a: usize, u: &[Rational], pistar_u: &[Rational]) -> Option<Vec<Rational>> {
        let n = self.base.dim;
        let d = self.dim();
        let mut out = vec![Rational::zero(); n * d];
        for c in 0..n {
            let slice = &pistar_u[c * d..(c + 1) * d];
            if is_zero_vec(slice) {
                continue;
            }
            let moved = self.left_mul(a, slice)?;
            for (w, x) in moved.into_iter().enumerate() {
                out[c * d + w] += x;
            }
            for k in 0..n {
                let br = self.base.bracket_coeff(a, c, k);
                if br.is_zero() {
                    continue;
                }
                for (w, x) in slice.iter().enumerate() {
                    if !x.is_zero() {
                        out[k * d + w] += br * x;
                    }
                }
            }
        }
        for l in 0..n {
            for m in 0..n {
                let dc = self.base.cobracket_coeff(a, l, m);
                if dc.is_zero() {
                    continue;
                }
                let prod = self.left_mul(m, u)?;
                for (w, x) in prod.into_iter().enumerate() {
                    out[l * d + w] -= dc * x;
                }
            }
        }
        Some(out)
    }

    /// Checks the three Drinfeld–Yetter identities on every basis element of
    /// degree at most `max_degree` (and every generator of `b`).
    ///
    /// Fails with [`Error::DegreeOverflow`] when some term of an identity on
    /// those inputs would need degree greater than `N`.
    pub fn check_dy_identities(&self, max_degree: usize) -> Result<Verdict> {
        let n = self.base.dim;
        let d = self.dim();
        let overflow = |what: &str, u: usize| {
            Error::DegreeOverflow(format!(
                "{what} on {:?} needs degree > {} (checking degree ≤ {max_degree})",
                self.basis[u], self.degree
            ))
        };
        let inputs: Vec<usize> = (0..d).filter(|&u| self.monomial_degree(u) <= max_degree).collect();
        let mut module = Vec::new();
        let mut comodule = Vec::new();
        let mut compat = Vec::new();
        for &u in &inputs {
            let uv = self.unit_vec(u);
            for a in 0..n {
                for bb in 0..n {
                    let br: Vec<Rational> = (0..n).map(|k| self.base.bracket_coeff(a, bb, k).clone()).collect();
                    let mut lhs = vec![Rational::zero(); d];
                    for (k, c) in br.iter().enumerate() {
                        if c.is_zero() {
                            continue;
                        }
                        let t = self.left_mul(k, &uv).ok_or_else(|| overflow("π([x,y]⊗u)", u))?;
                        lhs = add_vec(&lhs, &t.iter().map(|x| x * c).collect::<Vec<_>>());
                    }
                    let bu = self.left_mul(bb, &uv).ok_or_else(|| overflow("y·u", u))?;
                    let abu = self.left_mul(a, &bu).ok_or_else(|| overflow("x·(y·u)", u))?;
                    let au = self.left_mul(a, &uv).ok_or_else(|| overflow("x·u", u))?;
                    let bau = self.left_mul(bb, &au).ok_or_else(|| overflow("y·(x·u)", u))?;
                    module.push((format!("e{a},e{bb},{:?}", self.basis[u]), sub_vec(&lhs, &sub_vec(&abu, &bau))));
                }
            }

            let ps = self.pistar_apply(&uv).ok_or_else(|| overflow("π*(u)", u))?;
            // (id⊗π*)∘π*(u) in b⊗b⊗U
            let mut nested = vec![Rational::zero(); n * n * d];
            for c in 0..n {
                let inner = self
                    .pistar_apply(&ps[c * d..(c + 1) * d])
                    .ok_or_else(|| overflow("(id⊗π*)∘π*(u)", u))?;
                for (r, x) in inner.into_iter().enumerate() {
                    nested[c * n * d + r] += x;
                }
            }
            let mut swapped = vec![Rational::zero(); n * n * d];
            for (idx, x) in nested.iter().enumerate() {
                if x.is_zero() {
                    continue;
                }
                let (c1, rest) = (idx / (n * d), idx % (n * d));
                let (c2, w) = (rest / d, rest % d);
                swapped[(c2 * n + c1) * d + w] += x;
            }
            let mut lhs = vec![Rational::zero(); n * n * d];
            for c in 0..n {
                for (r, dc) in self.base.cobracket(&self.base.basis(c)).iter().enumerate() {
                    if dc.is_zero() {
                        continue;
                    }
                    for w in 0..d {
                        let x = &ps[c * d + w];
                        if !x.is_zero() {
                            lhs[r * d + w] += dc * x;
                        }
                    }
                }
            }
            comodule.push((format!("{:?}", self.basis[u]), sub_vec(&lhs, &sub_vec(&swapped, &nested))));

            for a in 0..n {
                let au = self.left_mul(a, &uv).ok_or_else(|| overflow("x·u", u))?;
                let lhs = self.pistar_apply(&au).ok_or_else(|| overflow("π*(x·u)", u))?;
                let rhs = self
                    .compatibility_rhs(a, &uv, &ps)
                    .ok_or_else(|| overflow("compatibility right-hand side", u))?;
                compat.push((format!("e{a},{:?}", self.basis[u]), sub_vec(&lhs, &rhs)));
            }
        }
        let mut v = Verdict::new();
        record_residuals(&mut v, "uea.dy.module", "π([x,y]⊗u) = x·(y·u) − y·(x·u)", module);
        record_residuals(
            &mut v,
            "uea.dy.comodule",
            "(δ⊗id)∘π* = (τ⊗id)∘(id⊗π*)∘π* − (id⊗π*)∘π*",
            comodule,
        );
        record_residuals(
            &mut v,
            "uea.dy.compatibility",
            "π*∘π = (id⊗π)∘(τ⊗id)∘(id⊗π*) + ([,]⊗id)∘(id⊗π*) − (id⊗π)∘(δ⊗id)",
            compat,
        );
        Ok(v)
    }
}

/// Builds `U(b)` truncated at degree `N` with the Drinfeld–Yetter structure
/// seeded at `π*(1) = j` and extended by the compatibility identity.
pub fn truncated_uea_dy(b: &LieBialgebra, degree: usize, j: &TwistElement) -> Result<TruncatedUea> {
    if degree == 0 {
        return Err(Error::DegreeOverflow("truncation degree must be at least 1".into()));
    }
    if j.dim() != b.dim || !check_twist(b, j) {
        return Err(Error::NotATwist);
    }
    let n = b.dim;
    let basis = monomials(n, degree);
    let index: HashMap<Vec<usize>, usize> = basis.iter().cloned().enumerate().map(|(i, m)| (m, i)).collect();
    let d = basis.len();
    let deg = |m: &[usize]| -> usize { m.iter().sum() };
    let mut rw = PbwRewriter::new(b);

    // π: left multiplication by generators.
    let mut pi = Matrix::zeros(d, n * d);
    let mut pi_overflow = vec![false; n * d];
    for a in 0..n {
        let mut gen = vec![0; n];
        gen[a] = 1;
        for (u, m) in basis.iter().enumerate() {
            if deg(m) + 1 > degree {
                pi_overflow[a * d + u] = true;
                continue;
            }
            for (w, c) in rw.product(&gen, m) {
                pi.set(index[&w], a * d + u, c);
            }
        }
    }

    // Δ multiplicatively from Δ(e_i) = e_i⊗1 + 1⊗e_i.
    let mut delta = Matrix::zeros(d * d, d);
    let unit = vec![0; n];
    for (u, m) in basis.iter().enumerate() {
        let mut acc: BTreeMap<(Vec<usize>, Vec<usize>), Rational> =
            BTreeMap::from([((unit.clone(), unit.clone()), Rational::one())]);
        for g in PbwRewriter::word_of(m) {
            let mut gen = vec![0; n];
            gen[g] = 1;
            let mut next = BTreeMap::new();
            for ((l, r), c) in &acc {
                for (w, x) in rw.product(l, &gen) {
                    *next.entry((w, r.clone())).or_insert_with(Rational::zero) += c * &x;
                }
                for (w, x) in rw.product(r, &gen) {
                    *next.entry((l.clone(), w)).or_insert_with(Rational::zero) += c * &x;
                }
            }
            acc = next;
        }
        for ((l, r), c) in acc {
            if !c.is_zero() {
                delta.set(index[&l] * d + index[&r], u, c);
            }
        }
    }
    let eps = Matrix::from_fn(1, d, |_, u| if u == 0 { Rational::one() } else { Rational::zero() });

    let mut uea = TruncatedUea {
        base: b.clone(),
        degree,
        twist: j.clone(),
        basis,
        index,
        delta,
        eps,
        pi,
        pi_overflow,
        pistar: Matrix::zeros(n * d, d),
        pistar_defined: vec![false; d],
    };

    // π*(1) = j, viewing b ⊂ U in degree one.
    let jt = j.as_tensor();
    for a in 0..n {
        for c in 0..n {
            let x = &jt[a * n + c];
            if !x.is_zero() {
                let mut gen = vec![0; n];
                gen[c] = 1;
                uea.pistar.set(a * d + uea.index[&gen], 0, x.clone());
            }
        }
    }
    uea.pistar_defined[0] = true;

    // π*(e_i·u) from the compatibility identity, in order of increasing degree.
    for w in 1..d {
        let m = uea.basis[w].clone();
        let first = m.iter().position(|&k| k > 0).expect("nonconstant monomial");
        let mut rest = m.clone();
        rest[first] -= 1;
        let u = uea.index[&rest];
        let uv = uea.unit_vec(u);
        let Some(ps_u) = uea.pistar_apply(&uv) else {
            continue;
        };
        if let Some(val) = uea.compatibility_rhs(first, &uv, &ps_u) {
            for (r, x) in val.into_iter().enumerate() {
                uea.pistar.set(r, w, x);
            }
            uea.pistar_defined[w] = true;
        }
    }
    Ok(uea)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::coalg::check_comonoid;
    use crate::scalar::{q, qi};

    fn one_dim_dy(name: &str, lambda: Rational) -> Atom {
        // π(x) = λ, π(y) = 0, π*(v) = λ x⊗v: a one-dimensional DY module over b2.
        let mut a = Atom::plain(name, 1);
        a.pi = Some(Matrix::from_rows(vec![vec![lambda.clone(), qi(0)]]).unwrap());
        a.pistar = Some(Matrix::from_rows(vec![vec![lambda], vec![qi(0)]]).unwrap());
        a
    }

    #[test]
    fn abelian_and_b2_pass() {
        assert!(check_lie_bialgebra(&LieBialgebra::abelian(2)).passed());
        let v = check_lie_bialgebra(&LieBialgebra::b2());
        assert!(v.passed(), "{v:?}");
    }

    #[test]
    fn symmetric_cobracket_breaks_co_antisymmetry() {
        let bad = LieBialgebra::b2().with_cobracket_coeff(1, 1, 0, qi(1));
        let v = check_lie_bialgebra(&bad);
        assert!(!v.find("lie.co-antisymmetry").unwrap().passed);
    }

    #[test]
    fn twists_of_b2() {
        let b = LieBialgebra::b2();
        assert!(check_twist(&b, &TwistElement::zero(2)));
        for c in [qi(1), qi(-2), q(5, 3)] {
            assert!(check_twist(&b, &TwistElement::wedge(2, 0, 1, c)));
        }
        let ab = LieBialgebra::abelian(3);
        assert!(check_twist(&ab, &TwistElement::wedge(3, 0, 2, q(7, 2))));
    }

    #[test]
    fn twisted_cobracket_of_b2() {
        let b = LieBialgebra::b2();
        let bj = twist_bialgebra(&b, &TwistElement::wedge(2, 0, 1, qi(1))).unwrap();
        // δ_j(x) = x⊗y − y⊗x
        assert_eq!(bj.cobracket(&[qi(1), qi(0)]), vec![qi(0), qi(1), qi(-1), qi(0)]);
        assert!(check_lie_bialgebra(&bj).passed());
        assert_eq!(twist_bialgebra(&b, &TwistElement::zero(2)).unwrap(), b);
        let ab = LieBialgebra::abelian(2);
        assert_eq!(twist_bialgebra(&ab, &TwistElement::wedge(2, 0, 1, qi(3))).unwrap(), ab);
    }

    #[test]
    fn non_antisymmetric_twist_rejected() {
        let m = Matrix::from_rows(vec![vec![qi(1), qi(0)], vec![qi(0), qi(0)]]).unwrap();
        assert!(matches!(TwistElement::new(m), Err(Error::NotATwist)));
    }

    #[test]
    fn dy_module_checks() {
        let b = LieBialgebra::b2();
        let v = one_dim_dy("V", qi(3));
        assert!(check_dy_module(&b, &v).unwrap().passed());
        let mut zero = Atom::plain("Q", 1);
        zero.pi = Some(Matrix::zeros(1, 2));
        zero.pistar = Some(Matrix::zeros(2, 1));
        assert!(check_dy_module(&b, &zero).unwrap().passed());
        let mut bad = v.clone();
        bad.pistar = Some(Matrix::from_rows(vec![vec![qi(2)], vec![qi(0)]]).unwrap());
        let verdict = check_dy_module(&b, &bad).unwrap();
        assert!(!verdict.find("dy.compatibility").unwrap().passed);
        assert!(matches!(check_dy_module(&b, &Atom::plain("W", 1)), Err(Error::MissingAction(_))));
    }

    #[test]
    fn twisting_modules_round_trips() {
        let b = LieBialgebra::b2();
        let j = TwistElement::wedge(2, 0, 1, qi(1));
        let bj = twist_bialgebra(&b, &j).unwrap();
        let v = one_dim_dy("V", q(1, 2));
        let vj = twist_dy_module(&b, &j, &v).unwrap();
        assert!(check_dy_module(&bj, &vj).unwrap().passed());
        let back = twist_dy_module(&bj, &j.neg(), &vj).unwrap();
        assert_eq!(back.pistar, v.pistar);
        assert_eq!(twist_bialgebra(&bj, &j.neg()).unwrap(), b);
    }

    #[test]
    fn binomial_coproduct_in_one_variable() {
        let b = LieBialgebra::abelian(1);
        let u = truncated_uea_dy(&b, 3, &TwistElement::zero(1)).unwrap();
        let x2 = u.index_of(&[2]).unwrap();
        let col = u.delta().col_vec(x2);
        let d = u.dim();
        let at = |l: usize, r: usize| col[u.index_of(&[l]).unwrap() * d + u.index_of(&[r]).unwrap()].clone();
        assert_eq!(at(2, 0), qi(1));
        assert_eq!(at(1, 1), qi(2));
        assert_eq!(at(0, 2), qi(1));
        assert!(u.pistar().is_zero());
        assert!(check_comonoid(&u.comonoid(), true).passed());
    }

    #[test]
    fn pbw_product_commutes_generators() {
        // In b2, y·x = x·y − y.
        let b = LieBialgebra::b2();
        let mut rw = PbwRewriter::new(&b);
        let p = rw.normal_order(&[1, 0]);
        assert_eq!(p.get(&vec![1, 1]), Some(&qi(1)));
        assert_eq!(p.get(&vec![0, 1]), Some(&qi(-1)));
    }

    #[test]
    fn seed_is_the_twist() {
        let b = LieBialgebra::b2();
        let j = TwistElement::wedge(2, 0, 1, qi(1));
        let u = truncated_uea_dy(&b, 2, &j).unwrap();
        let ps = u.pistar_apply(&u.unit_vec(0)).unwrap();
        let d = u.dim();
        let x = u.index_of(&[1, 0]).unwrap();
        let y = u.index_of(&[0, 1]).unwrap();
        assert_eq!(ps[y], qi(1)); // x ⊗ y
        assert_eq!(ps[d + x], qi(-1)); // −y ⊗ x
    }

    #[test]
    fn overflow_is_reported() {
        let b = LieBialgebra::b2();
        let u = truncated_uea_dy(&b, 2, &TwistElement::wedge(2, 0, 1, qi(1))).unwrap();
        assert!(matches!(u.check_dy_identities(2), Err(Error::DegreeOverflow(_))));
        assert!(u.check_dy_identities(0).unwrap().passed());
    }
}
