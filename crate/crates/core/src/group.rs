//! Finite groups given by multiplication tables.

use std::collections::HashMap;

use crate::error::{Error, Result};

/// Element `0` is the identity; `mul[g][h]` is the product `gh`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GroupTable {
    mul: Vec<Vec<usize>>,
    inv: Vec<usize>,
}

impl GroupTable {
    /// Validates identity, closure, associativity and inverses.
    pub fn from_table(mul: Vec<Vec<usize>>) -> Result<Self> {
        let n = mul.len();
        if n == 0 {
            return Err(Error::InvalidGroup("empty table".into()));
        }
        if mul.iter().any(|row| row.len() != n || row.iter().any(|&x| x >= n)) {
            return Err(Error::InvalidGroup("table is not an n×n array over 0..n".into()));
        }
        for g in 0..n {
            if mul[0][g] != g || mul[g][0] != g {
                return Err(Error::InvalidGroup(format!("0 is not a two-sided identity at {g}")));
            }
        }
        for a in 0..n {
            for b in 0..n {
                for c in 0..n {
                    if mul[mul[a][b]][c] != mul[a][mul[b][c]] {
                        return Err(Error::InvalidGroup(format!("({a}{b}){c} ≠ {a}({b}{c})")));
                    }
                }
            }
        }
        let mut inv = Vec::with_capacity(n);
        for g in 0..n {
            let h = (0..n)
                .find(|&h| mul[g][h] == 0 && mul[h][g] == 0)
                .ok_or_else(|| Error::InvalidGroup(format!("{g} has no inverse")))?;
            inv.push(h);
        }
        Ok(Self { mul, inv })
    }

    /// Closes a set of permutations under composition. Elements are numbered
    /// in breadth-first discovery order starting from the identity, and the
    /// product `gh` means "apply `h`, then `g`".
    pub fn from_permutation_generators(gens: &[Vec<usize>]) -> Result<(Self, Vec<Vec<usize>>)> {
        let degree = gens.first().map_or(0, Vec::len);
        for g in gens {
            let mut seen = vec![false; degree];
            if g.len() != degree || g.iter().any(|&x| x >= degree || std::mem::replace(&mut seen[x], true)) {
                return Err(Error::InvalidGroup("generator is not a permutation".into()));
            }
        }
        let id: Vec<usize> = (0..degree).collect();
        let mut elements = vec![id.clone()];
        let mut index: HashMap<Vec<usize>, usize> = HashMap::from([(id, 0)]);
        let mut frontier = 0;
        while frontier < elements.len() {
            let current = elements[frontier].clone();
            for g in gens {
                let prod: Vec<usize> = current.iter().map(|&x| g[x]).collect();
                if !index.contains_key(&prod) {
                    index.insert(prod.clone(), elements.len());
                    elements.push(prod);
                }
            }
            frontier += 1;
        }
        let n = elements.len();
        let mut mul = vec![vec![0; n]; n];
        for (a, pa) in elements.iter().enumerate() {
            for (b, pb) in elements.iter().enumerate() {
                let prod: Vec<usize> = pb.iter().map(|&x| pa[x]).collect();
                mul[a][b] = index[&prod];
            }
        }
        Ok((Self::from_table(mul)?, elements))
    }

    pub fn cyclic(n: usize) -> Self {
        let mul = (0..n).map(|a| (0..n).map(|b| (a + b) % n).collect()).collect();
        Self::from_table(mul).expect("cyclic table is a group")
    }

    /// The symmetric group on three letters, generated by a transposition and a 3-cycle.
    pub fn symmetric3() -> Self {
        Self::from_permutation_generators(&[vec![1, 0, 2], vec![1, 2, 0]])
            .expect("S3 generators")
            .0
    }

    pub fn order(&self) -> usize {
        self.mul.len()
    }

    pub fn mul(&self, g: usize, h: usize) -> usize {
        self.mul[g][h]
    }

    pub fn inv(&self, g: usize) -> usize {
        self.inv[g]
    }

    pub fn table(&self) -> &[Vec<usize>] {
        &self.mul
    }

    pub fn elements(&self) -> std::ops::Range<usize> {
        0..self.order()
    }

    /// The left regular action `g·a = ga` as permutations.
    pub fn left_regular(&self) -> Vec<Vec<usize>> {
        self.elements().map(|g| self.elements().map(|a| self.mul(g, a)).collect()).collect()
    }

    /// The action `g·a = a g⁻¹`, a second torsor structure on the same set.
    pub fn right_inverse_regular(&self) -> Vec<Vec<usize>> {
        self.elements()
            .map(|g| self.elements().map(|a| self.mul(a, self.inv(g))).collect())
            .collect()
    }
}
