//! Exact feasibility of homogeneous linear systems with strict, weak and
//! equality constraints.
//!
//! A homogeneous system has a solution with `f·x > 0` iff it has one with
//! `f·x ≥ 1`, so every strict row is rescaled that way and the question
//! becomes ordinary polyhedral feasibility. Two exact backends are
//! provided: Fourier–Motzkin elimination with witness back-substitution,
//! and a phase-one simplex over the rationals with Bland's rule.

use std::collections::BTreeSet;
use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};

use crate::arith::{Rational, Sign, TropScalar};
use crate::matrix::IntMatrix;
use crate::seed::{MutationPath, PathStep};
use crate::trop::{edge_matrix, permutation_step_matrix, SignSeq, TropError, TropPoint};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Relation {
    #[serde(rename = ">")]
    Greater,
    #[serde(rename = ">=")]
    GreaterEq,
    #[serde(rename = "=")]
    Equal,
}

impl fmt::Display for Relation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Relation::Greater => ">",
            Relation::GreaterEq => ">=",
            Relation::Equal => "=",
        })
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Constraint {
    #[serde(with = "crate::matrix::int_vec")]
    pub functional: Vec<BigInt>,
    pub relation: Relation,
}

/// A conjunction of homogeneous constraints `f·x (> | ≥ | =) 0`.
#[derive(Debug, Clone, PartialEq, Eq, Default, Serialize, Deserialize)]
pub struct SignCone {
    pub dim: usize,
    pub constraints: Vec<Constraint>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Backend {
    /// Fourier–Motzkin up to [`FM_MAX_DIM`] variables, simplex above or
    /// when elimination grows past [`FM_MAX_ROWS`] rows.
    #[default]
    Auto,
    FourierMotzkin,
    Simplex,
}

pub const FM_MAX_DIM: usize = 8;
pub const FM_MAX_ROWS: usize = 4096;

impl SignCone {
    pub fn new(dim: usize) -> SignCone {
        SignCone {
            dim,
            constraints: Vec::new(),
        }
    }

    pub fn push(&mut self, functional: Vec<BigInt>, relation: Relation) {
        assert_eq!(functional.len(), self.dim, "functional length");
        self.constraints.push(Constraint {
            functional,
            relation,
        });
    }

    /// Adds `s·f (>|=) 0` for a sign `s`, using equality when `s = 0`.
    pub fn push_signed(&mut self, functional: &[BigInt], s: Sign) {
        match s {
            Sign::Plus => self.push(functional.to_vec(), Relation::Greater),
            Sign::Minus => self.push(functional.iter().map(|v| -v).collect(), Relation::Greater),
            Sign::Zero => self.push(functional.to_vec(), Relation::Equal),
        }
    }

    /// Points whose sign sequence along `path` is `eps`. The functional of
    /// the ν-th flip is the row of the running linear map for the flipped
    /// coordinate.
    pub fn of_sign(path: &MutationPath, eps: &SignSeq) -> Result<SignCone, TropError> {
        let h = path.horizontal_len();
        if eps.len() != h {
            return Err(TropError::Length {
                expected: h,
                found: eps.len(),
            });
        }
        let r = path.initial().rank();
        let mut cone = SignCone::new(r);
        let mut m = IntMatrix::identity(r);
        let mut nu = 0;
        for (i, step) in path.steps().iter().enumerate() {
            let seed = path.seed_at(i);
            let e = match step {
                PathStep::Flip(k) => {
                    let p = seed.position(*k).expect("validated");
                    cone.push_signed(m.row(p), eps[nu]);
                    let s = if eps[nu] == Sign::Zero { Sign::Plus } else { eps[nu] };
                    nu += 1;
                    edge_matrix(seed, *k, s)?
                }
                PathStep::Permute(s) => permutation_step_matrix(seed, s),
            };
            m = &e * &m;
        }
        Ok(cone)
    }

    /// Exact check of a candidate point.
    pub fn contains<S: TropScalar>(&self, x: &TropPoint<S>) -> bool {
        x.dim() == self.dim
            && self.constraints.iter().all(|c| {
                let v = c
                    .functional
                    .iter()
                    .zip(x.coords())
                    .fold(S::zero(), |acc, (a, b)| acc + b.scale_int(a));
                match c.relation {
                    Relation::Greater => v.sign() == Sign::Plus,
                    Relation::GreaterEq => v.sign() != Sign::Minus,
                    Relation::Equal => v.sign() == Sign::Zero,
                }
            })
    }

    pub fn feasible(&self) -> bool {
        self.witness().is_some()
    }

    pub fn witness(&self) -> Option<TropPoint<Rational>> {
        self.witness_with(Backend::Auto)
    }

    /// A rational point satisfying every constraint, or `None` when the
    /// cone is empty. The returned point is always re-checked exactly.
    pub fn witness_with(&self, backend: Backend) -> Option<TropPoint<Rational>> {
        let w = match backend {
            Backend::FourierMotzkin => fourier_motzkin(self, usize::MAX),
            Backend::Simplex => simplex(self),
            Backend::Auto => {
                if self.dim <= FM_MAX_DIM {
                    match fourier_motzkin(self, FM_MAX_ROWS) {
                        FmOutcome::TooLarge => simplex(self),
                        other => other,
                    }
                } else {
                    simplex(self)
                }
            }
        };
        match w {
            FmOutcome::Feasible(x) => {
                let p = TropPoint::new(x);
                assert!(self.contains(&p), "feasibility witness failed its own check");
                Some(p)
            }
            FmOutcome::Infeasible => None,
            FmOutcome::TooLarge => unreachable!("uncapped elimination"),
        }
    }
}

pub fn cone_feasible(cone: &SignCone) -> bool {
    cone.feasible()
}

pub fn cone_witness(cone: &SignCone) -> Option<TropPoint<Rational>> {
    cone.witness()
}

enum FmOutcome {
    Feasible(Vec<Rational>),
    Infeasible,
    TooLarge,
}

/// `a·x ≥ b` with integer data.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
struct Row {
    a: Vec<BigInt>,
    b: BigInt,
}

impl Row {
    fn normalized(mut self) -> Row {
        let g = self
            .a
            .iter()
            .chain(std::iter::once(&self.b))
            .fold(BigInt::zero(), |g, v| g.gcd(v));
        if !g.is_zero() && !g.is_one() {
            for v in &mut self.a {
                *v /= &g;
            }
            self.b /= &g;
        }
        self
    }
}

fn inequality_rows(cone: &SignCone) -> Vec<Row> {
    let mut rows = Vec::new();
    for c in &cone.constraints {
        match c.relation {
            Relation::Greater => rows.push(Row {
                a: c.functional.clone(),
                b: BigInt::one(),
            }),
            Relation::GreaterEq => rows.push(Row {
                a: c.functional.clone(),
                b: BigInt::zero(),
            }),
            Relation::Equal => {
                rows.push(Row {
                    a: c.functional.clone(),
                    b: BigInt::zero(),
                });
                rows.push(Row {
                    a: c.functional.iter().map(|v| -v).collect(),
                    b: BigInt::zero(),
                });
            }
        }
    }
    rows
}

/// Drops trivially true rows and duplicates; reports a trivially false row.
fn prune(rows: Vec<Row>) -> Option<Vec<Row>> {
    let mut set = BTreeSet::new();
    for r in rows {
        if r.a.iter().all(Zero::is_zero) {
            if r.b.is_positive() {
                return None;
            }
            continue;
        }
        set.insert(r.normalized());
    }
    Some(set.into_iter().collect())
}

fn fourier_motzkin(cone: &SignCone, max_rows: usize) -> FmOutcome {
    let d = cone.dim;
    // levels[j] is the system in the variables x_0..x_{j-1}.
    let mut levels: Vec<Vec<Row>> = vec![Vec::new(); d + 1];
    let Some(mut cur) = prune(inequality_rows(cone)) else {
        return FmOutcome::Infeasible;
    };
    for j in (0..d).rev() {
        let (mut pos, mut neg, mut next) = (Vec::new(), Vec::new(), Vec::new());
        for r in &cur {
            match r.a[j].sign() {
                num_bigint::Sign::Plus => pos.push(r),
                num_bigint::Sign::Minus => neg.push(r),
                num_bigint::Sign::NoSign => next.push(r.clone()),
            }
        }
        if next.len() + pos.len() * neg.len() > max_rows {
            return FmOutcome::TooLarge;
        }
        for p in &pos {
            for n in &neg {
                let cp = -&n.a[j];
                let cn = p.a[j].clone();
                let a = p
                    .a
                    .iter()
                    .zip(&n.a)
                    .map(|(x, y)| x * &cp + y * &cn)
                    .collect();
                next.push(Row {
                    a,
                    b: &p.b * &cp + &n.b * &cn,
                });
            }
        }
        levels[j + 1] = cur;
        let Some(pruned) = prune(next) else {
            return FmOutcome::Infeasible;
        };
        cur = pruned;
    }
    // All variables eliminated and every remaining row was 0 ≥ b with b ≤ 0.
    let mut x: Vec<Rational> = Vec::with_capacity(d);
    for j in 0..d {
        let mut lo: Option<Rational> = None;
        let mut hi: Option<Rational> = None;
        for r in &levels[j + 1] {
            if r.a[j].is_zero() {
                continue;
            }
            let rest = x
                .iter()
                .zip(&r.a)
                .fold(Rational::zero(), |acc, (xi, ai)| acc + xi * Rational::from_integer(ai.clone()));
            let bound = (Rational::from_integer(r.b.clone()) - rest) / Rational::from_integer(r.a[j].clone());
            if r.a[j].is_positive() {
                if lo.as_ref().is_none_or(|l| bound > *l) {
                    lo = Some(bound);
                }
            } else if hi.as_ref().is_none_or(|h| bound < *h) {
                hi = Some(bound);
            }
        }
        x.push(match (lo, hi) {
            (Some(l), _) => l,
            (None, Some(h)) => h,
            (None, None) => Rational::zero(),
        });
    }
    FmOutcome::Feasible(x)
}

/// Phase-one simplex on `x = u - v`, `u, v ≥ 0`. Weak rows get a slack as
/// their initial basic variable; strict and equality rows get an
/// artificial.
fn simplex(cone: &SignCone) -> FmOutcome {
    let d = cone.dim;
    let m = cone.constraints.len();
    if m == 0 {
        return FmOutcome::Feasible(vec![Rational::zero(); d]);
    }
    let n_slack = cone
        .constraints
        .iter()
        .filter(|c| c.relation != Relation::Equal)
        .count();
    let n_art = cone
        .constraints
        .iter()
        .filter(|c| c.relation != Relation::GreaterEq)
        .count();
    let art0 = 2 * d + n_slack;
    let ncols = art0 + n_art;
    let q = |v: &BigInt| Rational::from_integer(v.clone());
    let mut t: Vec<Vec<Rational>> = Vec::with_capacity(m);
    let mut rhs: Vec<Rational> = Vec::with_capacity(m);
    let mut basis: Vec<usize> = Vec::with_capacity(m);
    let (mut si, mut ai) = (0, 0);
    for c in &cone.constraints {
        let mut row = vec![Rational::zero(); ncols];
        let flip = c.relation == Relation::GreaterEq;
        for (k, a) in c.functional.iter().enumerate() {
            let a = if flip { -q(a) } else { q(a) };
            row[d + k] = -a.clone();
            row[k] = a;
        }
        match c.relation {
            Relation::GreaterEq => {
                // -a·u + a·v + s = 0
                row[2 * d + si] = Rational::one();
                basis.push(2 * d + si);
                si += 1;
                rhs.push(Rational::zero());
            }
            Relation::Greater => {
                row[2 * d + si] = -Rational::one();
                si += 1;
                row[art0 + ai] = Rational::one();
                basis.push(art0 + ai);
                ai += 1;
                rhs.push(Rational::one());
            }
            Relation::Equal => {
                row[art0 + ai] = Rational::one();
                basis.push(art0 + ai);
                ai += 1;
                rhs.push(Rational::zero());
            }
        }
        t.push(row);
    }
    // Reduced costs of the phase-one objective (sum of artificials).
    let mut cost = vec![Rational::zero(); ncols];
    for c in cost.iter_mut().skip(art0) {
        *c = Rational::one();
    }
    let mut obj = Rational::zero();
    for i in 0..m {
        if basis[i] >= art0 {
            for j in 0..ncols {
                cost[j] -= &t[i][j];
            }
            obj += &rhs[i];
        }
    }
    loop {
        let Some(enter) = (0..ncols).find(|&j| cost[j].is_negative()) else {
            break;
        };
        let mut leave: Option<(usize, Rational)> = None;
        for i in 0..m {
            if t[i][enter].is_positive() {
                let ratio = &rhs[i] / &t[i][enter];
                let better = match &leave {
                    None => true,
                    Some((li, lr)) => ratio < *lr || (ratio == *lr && basis[i] < basis[*li]),
                };
                if better {
                    leave = Some((i, ratio));
                }
            }
        }
        let Some((r, _)) = leave else {
            // The phase-one objective is bounded below by zero.
            unreachable!("unbounded phase-one simplex");
        };
        let piv = t[r][enter].clone();
        for v in t[r].iter_mut() {
            *v /= &piv;
        }
        rhs[r] /= &piv;
        let prow = t[r].clone();
        let prhs = rhs[r].clone();
        for i in 0..m {
            if i == r || t[i][enter].is_zero() {
                continue;
            }
            let f = t[i][enter].clone();
            for j in 0..ncols {
                if !prow[j].is_zero() {
                    t[i][j] -= &f * &prow[j];
                }
            }
            rhs[i] -= &f * &prhs;
        }
        let f = cost[enter].clone();
        for j in 0..ncols {
            if !prow[j].is_zero() {
                cost[j] -= &f * &prow[j];
            }
        }
        obj += &f * &prhs;
        basis[r] = enter;
    }
    if !obj.is_zero() {
        return FmOutcome::Infeasible;
    }
    let mut x = vec![Rational::zero(); d];
    for i in 0..m {
        let b = basis[i];
        if b < d {
            x[b] += &rhs[i];
        } else if b < 2 * d {
            x[b - d] -= &rhs[i];
        }
    }
    FmOutcome::Feasible(x)
}
