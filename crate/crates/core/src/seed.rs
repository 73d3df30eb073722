//! Seeds, matrix mutation, labeled exchange-graph paths, C- and G-matrices,
//! and exchange matrices of ideal triangulations.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use num_bigint::BigInt;
use num_traits::{Signed, Zero};
use serde::{Deserialize, Serialize};

use crate::arith::{int_pos, Sign};
use crate::matrix::{IntMatrix, MatrixError};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum SeedError {
    #[error("exchange matrix is not skew-symmetric (entry ({0},{1}))")]
    NotSkewSymmetric(usize, usize),
    #[error("exchange matrix must be square of size n = {0}")]
    BadShape(usize),
    #[error("the unfrozen index set is empty")]
    EmptyUnfrozen,
    #[error("index {0} is out of range")]
    IndexOutOfRange(usize),
    #[error("index {0} is listed twice")]
    DuplicateIndex(usize),
    #[error("index {0} is frozen and cannot be mutated")]
    FrozenIndex(usize),
    #[error("invalid permutation: {0}")]
    InvalidPermutation(String),
    #[error("permutation does not preserve the unfrozen/frozen split at index {0}")]
    SplitViolation(usize),
    #[error("step {step}: C-matrix column {column} is not sign-coherent")]
    SignIncoherent { step: usize, column: usize },
    #[error("triangulation: {0}")]
    Triangulation(String),
    #[error("self-folded triangle {0:?} is not supported")]
    SelfFolded([String; 3]),
    #[error(transparent)]
    Matrix(#[from] MatrixError),
}

/// An exchange matrix over `{0..n-1}` with a nonempty set of unfrozen
/// (mutable) indices.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize)]
pub struct Seed {
    n: usize,
    unfrozen: Vec<usize>,
    #[serde(rename = "B")]
    b: IntMatrix,
}

impl Seed {
    pub fn new(b: IntMatrix, unfrozen: Vec<usize>) -> Result<Seed, SeedError> {
        let n = b.rows();
        if !b.is_square() {
            return Err(SeedError::BadShape(n));
        }
        for i in 0..n {
            for j in i..n {
                if b[(i, j)] != -&b[(j, i)] {
                    return Err(SeedError::NotSkewSymmetric(i, j));
                }
            }
        }
        if unfrozen.is_empty() {
            return Err(SeedError::EmptyUnfrozen);
        }
        let mut seen = BTreeSet::new();
        for &k in &unfrozen {
            if k >= n {
                return Err(SeedError::IndexOutOfRange(k));
            }
            if !seen.insert(k) {
                return Err(SeedError::DuplicateIndex(k));
            }
        }
        Ok(Seed {
            n,
            unfrozen: seen.into_iter().collect(),
            b,
        })
    }

    /// Seed with every index unfrozen.
    pub fn full(b: IntMatrix) -> Result<Seed, SeedError> {
        let n = b.rows();
        Seed::new(b, (0..n).collect())
    }

    pub fn from_i64(rows: &[Vec<i64>], unfrozen: Vec<usize>) -> Result<Seed, SeedError> {
        Seed::new(IntMatrix::from_i64_rows(rows)?, unfrozen)
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn unfrozen(&self) -> &[usize] {
        &self.unfrozen
    }

    pub fn rank(&self) -> usize {
        self.unfrozen.len()
    }

    pub fn frozen(&self) -> Vec<usize> {
        (0..self.n).filter(|i| !self.is_unfrozen(*i)).collect()
    }

    pub fn b(&self) -> &IntMatrix {
        &self.b
    }

    pub fn entry(&self, i: usize, j: usize) -> &BigInt {
        &self.b[(i, j)]
    }

    pub fn is_unfrozen(&self, k: usize) -> bool {
        self.unfrozen.binary_search(&k).is_ok()
    }

    /// Position of index `k` inside the unfrozen list, i.e. the coordinate
    /// slot of `k` in a tropical point.
    pub fn position(&self, k: usize) -> Option<usize> {
        self.unfrozen.binary_search(&k).ok()
    }

    /// The unfrozen block of the exchange matrix.
    pub fn b_uf(&self) -> IntMatrix {
        self.b.select(&self.unfrozen, &self.unfrozen)
    }

    fn check_mutable(&self, k: usize) -> Result<usize, SeedError> {
        if k >= self.n {
            return Err(SeedError::IndexOutOfRange(k));
        }
        self.position(k).ok_or(SeedError::FrozenIndex(k))
    }

    pub fn mutate(&self, k: usize) -> Result<Seed, SeedError> {
        self.check_mutable(k)?;
        let b = &self.b;
        let nb = IntMatrix::from_fn(self.n, self.n, |i, j| {
            if i == k || j == k {
                -&b[(i, j)]
            } else {
                let bik = &b[(i, k)];
                let bkj = &b[(k, j)];
                &b[(i, j)] + int_pos(bik) * int_pos(bkj) - int_pos(&-bik) * int_pos(&-bkj)
            }
        });
        Ok(Seed {
            n: self.n,
            unfrozen: self.unfrozen.clone(),
            b: nb,
        })
    }

    pub fn permute(&self, sigma: &Permutation) -> Result<Seed, SeedError> {
        self.check_perm(sigma)?;
        let inv = sigma.inverse();
        let b = IntMatrix::from_fn(self.n, self.n, |i, j| {
            self.b[(inv.image(i), inv.image(j))].clone()
        });
        Ok(Seed {
            n: self.n,
            unfrozen: self.unfrozen.clone(),
            b,
        })
    }

    fn check_perm(&self, sigma: &Permutation) -> Result<(), SeedError> {
        if sigma.len() != self.n {
            return Err(SeedError::InvalidPermutation(format!(
                "length {} for a seed of size {}",
                sigma.len(),
                self.n
            )));
        }
        for i in 0..self.n {
            if self.is_unfrozen(i) != self.is_unfrozen(sigma.image(i)) {
                return Err(SeedError::SplitViolation(i));
            }
        }
        Ok(())
    }

    /// The permutation of coordinate slots induced by `sigma` on the
    /// unfrozen indices.
    pub fn slot_permutation(&self, sigma: &Permutation) -> Vec<usize> {
        self.unfrozen
            .iter()
            .map(|&k| self.position(sigma.image(k)).expect("split preserved"))
            .collect()
    }

    /// Same matrix with the indices in `k` frozen.
    pub fn freeze(&self, k: &[usize]) -> Result<Seed, SeedError> {
        for &i in k {
            if i >= self.n {
                return Err(SeedError::IndexOutOfRange(i));
            }
            if !self.is_unfrozen(i) {
                return Err(SeedError::FrozenIndex(i));
            }
        }
        let unfrozen: Vec<usize> = self
            .unfrozen
            .iter()
            .copied()
            .filter(|i| !k.contains(i))
            .collect();
        Seed::new(self.b.clone(), unfrozen)
    }
}

impl<'de> Deserialize<'de> for Seed {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> Result<Seed, D::Error> {
        #[derive(Deserialize)]
        #[serde(deny_unknown_fields)]
        struct Raw {
            n: usize,
            unfrozen: Vec<usize>,
            #[serde(rename = "B")]
            b: IntMatrix,
        }
        let raw = Raw::deserialize(d)?;
        if raw.b.rows() != raw.n {
            return Err(serde::de::Error::custom(SeedError::BadShape(raw.n)));
        }
        Seed::new(raw.b, raw.unfrozen).map_err(serde::de::Error::custom)
    }
}

/// A permutation of `{0..n-1}` stored by its images: `i ↦ images[i]`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize)]
#[serde(transparent)]
pub struct Permutation {
    images: Vec<usize>,
}

impl Permutation {
    pub fn new(images: Vec<usize>) -> Result<Permutation, SeedError> {
        let mut seen = vec![false; images.len()];
        for &v in &images {
            if v >= images.len() {
                return Err(SeedError::InvalidPermutation(format!(
                    "image {v} out of range"
                )));
            }
            if std::mem::replace(&mut seen[v], true) {
                return Err(SeedError::InvalidPermutation(format!("image {v} repeated")));
            }
        }
        Ok(Permutation { images })
    }

    pub fn identity(n: usize) -> Permutation {
        Permutation {
            images: (0..n).collect(),
        }
    }

    /// Builds a permutation from disjoint cycles; `(a b c)` sends a to b,
    /// b to c and c to a.
    pub fn from_cycles(n: usize, cycles: &[Vec<usize>]) -> Result<Permutation, SeedError> {
        let mut images: Vec<usize> = (0..n).collect();
        let mut used = BTreeSet::new();
        for cyc in cycles {
            for (i, &a) in cyc.iter().enumerate() {
                if a >= n {
                    return Err(SeedError::InvalidPermutation(format!(
                        "cycle entry {a} out of range"
                    )));
                }
                if !used.insert(a) {
                    return Err(SeedError::InvalidPermutation(format!(
                        "cycles are not disjoint at {a}"
                    )));
                }
                images[a] = cyc[(i + 1) % cyc.len()];
            }
        }
        Permutation::new(images)
    }

    pub fn len(&self) -> usize {
        self.images.len()
    }

    pub fn is_empty(&self) -> bool {
        self.images.is_empty()
    }

    pub fn image(&self, i: usize) -> usize {
        self.images[i]
    }

    pub fn images(&self) -> &[usize] {
        &self.images
    }

    pub fn inverse(&self) -> Permutation {
        let mut inv = vec![0; self.images.len()];
        for (i, &v) in self.images.iter().enumerate() {
            inv[v] = i;
        }
        Permutation { images: inv }
    }

    pub fn is_identity(&self) -> bool {
        self.images.iter().enumerate().all(|(i, &v)| i == v)
    }

    /// Lengths of all cycles, fixed points included, in ascending order.
    pub fn cycle_lengths(&self) -> Vec<usize> {
        let mut seen = vec![false; self.images.len()];
        let mut out = Vec::new();
        for start in 0..self.images.len() {
            if seen[start] {
                continue;
            }
            let mut len = 0;
            let mut i = start;
            while !seen[i] {
                seen[i] = true;
                i = self.images[i];
                len += 1;
            }
            out.push(len);
        }
        out.sort_unstable();
        out
    }
}

impl<'de> Deserialize<'de> for Permutation {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> Result<Permutation, D::Error> {
        Permutation::new(Vec::deserialize(d)?).map_err(serde::de::Error::custom)
    }
}

impl fmt::Display for Permutation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut seen = vec![false; self.images.len()];
        let mut wrote = false;
        for start in 0..self.images.len() {
            if seen[start] || self.images[start] == start {
                continue;
            }
            let mut cyc = Vec::new();
            let mut i = start;
            while !seen[i] {
                seen[i] = true;
                cyc.push(i.to_string());
                i = self.images[i];
            }
            write!(f, "({})", cyc.join(" "))?;
            wrote = true;
        }
        if !wrote {
            write!(f, "()")?;
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase", deny_unknown_fields)]
pub enum PathStep {
    Flip(usize),
    #[serde(rename = "perm")]
    Permute(Permutation),
}

/// An initial seed together with a sequence of flips and relabelings.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MutationPath {
    initial: Seed,
    steps: Vec<PathStep>,
    seeds: Vec<Seed>,
}

impl MutationPath {
    /// Validates every step against the seed it is applied to.
    pub fn new(initial: Seed, steps: Vec<PathStep>) -> Result<MutationPath, SeedError> {
        let mut seeds = Vec::with_capacity(steps.len() + 1);
        seeds.push(initial.clone());
        for step in &steps {
            let cur = seeds.last().expect("nonempty");
            let next = match step {
                PathStep::Flip(k) => cur.mutate(*k)?,
                PathStep::Permute(s) => cur.permute(s)?,
            };
            seeds.push(next);
        }
        Ok(MutationPath {
            initial,
            steps,
            seeds,
        })
    }

    pub fn flips(initial: Seed, ks: &[usize]) -> Result<MutationPath, SeedError> {
        MutationPath::new(initial, ks.iter().map(|&k| PathStep::Flip(k)).collect())
    }

    pub fn initial(&self) -> &Seed {
        &self.initial
    }

    pub fn last(&self) -> &Seed {
        self.seeds.last().expect("nonempty")
    }

    pub fn steps(&self) -> &[PathStep] {
        &self.steps
    }

    /// Seed before step `i`; index `steps().len()` is the final seed.
    pub fn seed_at(&self, i: usize) -> &Seed {
        &self.seeds[i]
    }

    /// Number of flips, h(γ).
    pub fn horizontal_len(&self) -> usize {
        self.steps
            .iter()
            .filter(|s| matches!(s, PathStep::Flip(_)))
            .count()
    }

    /// `(step position, flipped index)` for every flip, in order.
    pub fn flip_positions(&self) -> Vec<(usize, usize)> {
        self.steps
            .iter()
            .enumerate()
            .filter_map(|(i, s)| match s {
                PathStep::Flip(k) => Some((i, *k)),
                PathStep::Permute(_) => None,
            })
            .collect()
    }

    pub fn seeds(&self) -> &[Seed] {
        &self.seeds
    }

    /// Reversed path; flips are involutions and permutations are inverted.
    pub fn reversed(&self) -> MutationPath {
        let steps: Vec<PathStep> = self
            .steps
            .iter()
            .rev()
            .map(|s| match s {
                PathStep::Flip(k) => PathStep::Flip(*k),
                PathStep::Permute(p) => PathStep::Permute(p.inverse()),
            })
            .collect();
        MutationPath::new(self.last().clone(), steps).expect("reverse of a valid path")
    }

    /// Same steps from a different initial seed (e.g. after freezing).
    pub fn with_initial(&self, initial: Seed) -> Result<MutationPath, SeedError> {
        MutationPath::new(initial, self.steps.clone())
    }

    /// Concatenation of `self` followed by `other`, which must start where
    /// `self` ends.
    pub fn concat(&self, other: &MutationPath) -> Result<MutationPath, SeedError> {
        let mut steps = self.steps.clone();
        steps.extend(other.steps.iter().cloned());
        MutationPath::new(self.initial.clone(), steps)
    }
}

pub fn mutate_b(seed: &Seed, k: usize) -> Result<Seed, SeedError> {
    seed.mutate(k)
}

pub fn apply_perm(seed: &Seed, sigma: &Permutation) -> Result<Seed, SeedError> {
    seed.permute(sigma)
}

/// Seed before each step, followed by the final seed.
pub fn seeds_along(path: &MutationPath) -> Vec<Seed> {
    path.seeds().to_vec()
}

/// True when the final exchange matrix equals the initial one entrywise.
pub fn is_loop(path: &MutationPath) -> bool {
    path.last().b() == path.initial().b() && path.last().unfrozen() == path.initial().unfrozen()
}

fn column_sign(c: &IntMatrix, j: usize) -> Option<Sign> {
    let mut sign = Sign::Zero;
    for i in 0..c.rows() {
        let s = if c[(i, j)].is_positive() {
            Sign::Plus
        } else if c[(i, j)].is_negative() {
            Sign::Minus
        } else {
            continue;
        };
        if sign == Sign::Zero {
            sign = s;
        } else if sign != s {
            return None;
        }
    }
    (sign != Sign::Zero).then_some(sign)
}

/// C- and G-matrices at the end of the path, relative to its start. Both
/// are indexed by unfrozen slots; columns are vectors.
pub fn c_g_matrices(path: &MutationPath) -> Result<(IntMatrix, IntMatrix), SeedError> {
    let r = path.initial().rank();
    let mut c = IntMatrix::identity(r);
    let mut g = IntMatrix::identity(r);
    for (step_no, step) in path.steps().iter().enumerate() {
        let seed = path.seed_at(step_no);
        match step {
            PathStep::Flip(k) => {
                let p = seed.position(*k).expect("validated");
                let eps = column_sign(&c, p).ok_or(SeedError::SignIncoherent {
                    step: step_no,
                    column: p,
                })?;
                let e = BigInt::from(eps.as_i8());
                let uf = seed.unfrozen();
                let ck = c.column(p);
                let gk = g.column(p);
                let mut new_gk: Vec<BigInt> = gk.iter().map(|v| -v).collect();
                for (q, &j) in uf.iter().enumerate() {
                    if q == p {
                        continue;
                    }
                    let fc = int_pos(&(&e * seed.entry(*k, j)));
                    if !fc.is_zero() {
                        for i in 0..r {
                            c[(i, q)] = &c[(i, q)] + &fc * &ck[i];
                        }
                    }
                    let fg = int_pos(&(-&e * seed.entry(j, *k)));
                    if !fg.is_zero() {
                        for i in 0..r {
                            new_gk[i] = &new_gk[i] + &fg * &g[(i, q)];
                        }
                    }
                }
                for i in 0..r {
                    c[(i, p)] = -&ck[i];
                    g[(i, p)] = new_gk[i].clone();
                }
            }
            PathStep::Permute(sigma) => {
                // Column of slot q moves to slot σ(q).
                let slots = seed.slot_permutation(sigma);
                let old_c = c.clone();
                let old_g = g.clone();
                for q in 0..r {
                    for i in 0..r {
                        c[(i, slots[q])] = old_c[(i, q)].clone();
                        g[(i, slots[q])] = old_g[(i, q)].clone();
                    }
                }
            }
        }
    }
    Ok((c, g))
}

pub fn c_matrix(path: &MutationPath) -> Result<IntMatrix, SeedError> {
    c_g_matrices(path).map(|(c, _)| c)
}

pub fn g_matrix(path: &MutationPath) -> Result<IntMatrix, SeedError> {
    c_g_matrices(path).map(|(_, g)| g)
}

/// An ideal triangulation given by its arcs and triangles. Each triangle
/// lists its sides in clockwise order.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Triangulation {
    pub arcs: Vec<String>,
    #[serde(default)]
    pub frozen: Vec<String>,
    pub triangles: Vec<[String; 3]>,
}

impl Triangulation {
    pub fn index_of(&self, label: &str) -> Option<usize> {
        self.arcs.iter().position(|a| a == label)
    }
}

/// Seed of a triangulation. Indices follow the order of `arcs`; unfrozen
/// indices are the arcs not listed as frozen.
pub fn b_from_triangulation(t: &Triangulation) -> Result<Seed, SeedError> {
    let (b, frozen) = triangulation_matrix(t)?;
    let unfrozen = (0..b.rows()).filter(|i| !frozen.contains(i)).collect();
    Seed::new(b, unfrozen)
}

/// Exchange matrix of a triangulation together with the frozen indices:
/// every triangle `(a, b, c)` adds `b_ab = b_bc = b_ca = 1` and the
/// negatives on the transposed entries.
pub fn triangulation_matrix(t: &Triangulation) -> Result<(IntMatrix, BTreeSet<usize>), SeedError> {
    let n = t.arcs.len();
    let mut index = BTreeMap::new();
    for (i, a) in t.arcs.iter().enumerate() {
        if index.insert(a.as_str(), i).is_some() {
            return Err(SeedError::Triangulation(format!("arc {a:?} listed twice")));
        }
    }
    let mut frozen = BTreeSet::new();
    for f in &t.frozen {
        let i = *index
            .get(f.as_str())
            .ok_or_else(|| SeedError::Triangulation(format!("unknown frozen arc {f:?}")))?;
        frozen.insert(i);
    }
    let mut b = IntMatrix::zeros(n, n);
    let mut slots = vec![0usize; n];
    for tri in &t.triangles {
        let mut idx = [0usize; 3];
        for (s, label) in tri.iter().enumerate() {
            idx[s] = *index.get(label.as_str()).ok_or_else(|| {
                SeedError::Triangulation(format!("unknown arc {label:?} in triangle"))
            })?;
        }
        if idx[0] == idx[1] || idx[1] == idx[2] || idx[0] == idx[2] {
            return Err(SeedError::SelfFolded(tri.clone()));
        }
        for s in 0..3 {
            let (a, c) = (idx[s], idx[(s + 1) % 3]);
            b[(a, c)] = &b[(a, c)] + 1;
            b[(c, a)] = &b[(c, a)] - 1;
            slots[a] += 1;
        }
    }
    for (i, &count) in slots.iter().enumerate() {
        let want = if frozen.contains(&i) { 1 } else { 2 };
        if count != want {
            return Err(SeedError::Triangulation(format!(
                "arc {:?} occurs in {count} triangle sides, expected {want}",
                t.arcs[i]
            )));
        }
    }
    Ok((b, frozen))
}
