//! Forward orbits of a mutation loop and empirical stable signs.

use serde::Serialize;

use super::StabilityError;
use crate::arith::{Sign, TropScalar};
use crate::seed::{is_loop, MutationPath};
use crate::trop::{sign_from_transport, transport, SignSeq, TropPoint};

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct OrbitStep<S> {
    pub sign: SignSeq,
    pub point: TropPoint<S>,
}

/// `iterations[n]` holds the sign of the path at `φⁿ(w)` and `φⁿ(w)`
/// divided by its largest absolute coordinate.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct OrbitReport<S> {
    pub point: TropPoint<S>,
    pub iterations: Vec<OrbitStep<S>>,
}

pub fn iterate_orbit<S: TropScalar>(
    path: &MutationPath,
    w: &TropPoint<S>,
    n_max: usize,
) -> Result<OrbitReport<S>, StabilityError> {
    if !is_loop(path) {
        return Err(StabilityError::NotLoop);
    }
    if n_max == 0 {
        return Err(StabilityError::BadArgument("n_max must be at least 1".into()));
    }
    let mut cur = w.normalized();
    let mut iterations = Vec::with_capacity(n_max);
    for _ in 0..n_max {
        let t = transport(path, &cur)?;
        iterations.push(OrbitStep {
            sign: sign_from_transport(path, &t),
            point: cur,
        });
        cur = t.final_point.normalized();
    }
    Ok(OrbitReport {
        point: w.clone(),
        iterations,
    })
}

fn window<S>(report: &OrbitReport<S>, window: usize) -> Result<Option<&[OrbitStep<S>]>, StabilityError> {
    if window < 2 {
        return Err(StabilityError::BadArgument("window must be at least 2".into()));
    }
    let n = report.iterations.len();
    Ok((n >= window).then(|| &report.iterations[n - window..]))
}

/// The common strict sign of the last `window` iterations, if there is one.
pub fn detect_stable_sign<S>(
    report: &OrbitReport<S>,
    window_len: usize,
) -> Result<Option<SignSeq>, StabilityError> {
    let Some(tail) = window(report, window_len)? else {
        return Ok(None);
    };
    let first = &tail[0].sign;
    Ok((first.is_strict() && tail.iter().all(|s| &s.sign == first)).then(|| first.clone()))
}

/// Entrywise the constant value over the last `window` iterations, and 0
/// wherever the entry changes. `None` when the orbit is shorter than the
/// window.
pub fn detect_weak_stable_sign<S>(
    report: &OrbitReport<S>,
    window_len: usize,
) -> Result<Option<SignSeq>, StabilityError> {
    let Some(tail) = window(report, window_len)? else {
        return Ok(None);
    };
    let h = tail[0].sign.len();
    let entries = (0..h)
        .map(|i| {
            let v = tail[0].sign[i];
            if tail.iter().all(|s| s.sign[i] == v) {
                v
            } else {
                Sign::Zero
            }
        })
        .collect();
    Ok(Some(SignSeq::new(entries)))
}
