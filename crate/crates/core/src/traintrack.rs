//! Local train-track pieces: switch conditions, the pants formulas and the
//! annulus coordinates behind Dehn–Thurston coordinates.

use std::collections::{BTreeMap, BTreeSet};

use serde::{Deserialize, Serialize};

use crate::arith::{Sign, TropScalar};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum TrackError {
    #[error("unknown edge {0:?}")]
    UnknownEdge(String),
    #[error("edge {0:?} is listed twice")]
    DuplicateEdge(String),
    #[error("switch {0} uses edge {1:?} more than once")]
    DegenerateSwitch(usize, String),
    #[error("no weight given for edge {0:?}")]
    MissingWeight(String),
    #[error("edge {0:?} has a negative weight")]
    NegativeWeight(String),
}

/// A trivalent switch: one incoming edge splitting into two outgoing ones.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Switch {
    pub incoming: String,
    pub outgoing: [String; 2],
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct TrainTrack {
    edges: Vec<String>,
    switches: Vec<Switch>,
    boundary_edges: Vec<String>,
}

impl TrainTrack {
    pub fn new(
        edges: Vec<String>,
        switches: Vec<Switch>,
        boundary_edges: Vec<String>,
    ) -> Result<TrainTrack, TrackError> {
        let mut seen = BTreeSet::new();
        for e in &edges {
            if !seen.insert(e.as_str()) {
                return Err(TrackError::DuplicateEdge(e.clone()));
            }
        }
        let known = |e: &String| {
            if seen.contains(e.as_str()) {
                Ok(())
            } else {
                Err(TrackError::UnknownEdge(e.clone()))
            }
        };
        for (i, s) in switches.iter().enumerate() {
            let all = [&s.incoming, &s.outgoing[0], &s.outgoing[1]];
            for (a, e) in all.iter().enumerate() {
                known(e)?;
                if all[..a].contains(e) {
                    return Err(TrackError::DegenerateSwitch(i, (*e).clone()));
                }
            }
        }
        for e in &boundary_edges {
            known(e)?;
        }
        Ok(TrainTrack {
            edges,
            switches,
            boundary_edges,
        })
    }

    pub fn edges(&self) -> &[String] {
        &self.edges
    }

    pub fn switches(&self) -> &[Switch] {
        &self.switches
    }

    pub fn boundary_edges(&self) -> &[String] {
        &self.boundary_edges
    }
}

impl<'de> Deserialize<'de> for TrainTrack {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> Result<TrainTrack, D::Error> {
        #[derive(Deserialize)]
        #[serde(deny_unknown_fields)]
        struct Raw {
            edges: Vec<String>,
            switches: Vec<Switch>,
            #[serde(default)]
            boundary_edges: Vec<String>,
        }
        let raw = Raw::deserialize(d)?;
        TrainTrack::new(raw.edges, raw.switches, raw.boundary_edges).map_err(serde::de::Error::custom)
    }
}

/// Edge weights keyed by label.
pub type Measure<S> = BTreeMap<String, S>;

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct MeasureCheck {
    pub valid: bool,
    /// Indices of the switches where `ν(e₀) ≠ ν(e₁) + ν(e₂)`.
    pub violations: Vec<usize>,
}

pub fn validate_measure<S: TropScalar>(
    track: &TrainTrack,
    m: &Measure<S>,
) -> Result<MeasureCheck, TrackError> {
    if let Some(e) = m.keys().find(|e| !track.edges.contains(e)) {
        return Err(TrackError::UnknownEdge(e.clone()));
    }
    for e in &track.edges {
        let v = m.get(e).ok_or_else(|| TrackError::MissingWeight(e.clone()))?;
        if v.sign() == Sign::Minus {
            return Err(TrackError::NegativeWeight(e.clone()));
        }
    }
    let violations: Vec<usize> = track
        .switches
        .iter()
        .enumerate()
        .filter(|(_, s)| {
            let lhs = m[&s.incoming].clone();
            let rhs = m[&s.outgoing[0]].clone() + m[&s.outgoing[1]].clone();
            (lhs - rhs).sign() != Sign::Zero
        })
        .map(|(i, _)| i)
        .collect();
    Ok(MeasureCheck {
        valid: violations.is_empty(),
        violations,
    })
}

/// Weights of the standard track in a pair of pants: `e_ii` are the loops
/// at boundary `i`, `e_ij` the connectors between boundaries `i` and `j`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct PantsMeasures<S> {
    pub e11: S,
    pub e12: S,
    pub e13: S,
    pub e22: S,
    pub e23: S,
    pub e33: S,
}

impl<S: TropScalar> PantsMeasures<S> {
    /// In the order `e11, e12, e13, e22, e23, e33`.
    pub fn to_vec(&self) -> Vec<S> {
        vec![
            self.e11.clone(),
            self.e12.clone(),
            self.e13.clone(),
            self.e22.clone(),
            self.e23.clone(),
            self.e33.clone(),
        ]
    }
}

/// `2ν(e11) = [m1 - m2 - m3]_+`, `2ν(e12) = [m1 + m2 - m3]_+` and so on.
pub fn pants_measures<S: TropScalar>(m1: &S, m2: &S, m3: &S) -> PantsMeasures<S> {
    let two = S::from_i64(2);
    let half = |a: S, b: S, c: S| (a + b + c).pos_part() / two.clone();
    let (m1, m2, m3) = (m1.clone(), m2.clone(), m3.clone());
    PantsMeasures {
        e11: half(m1.clone(), -m2.clone(), -m3.clone()),
        e12: half(m1.clone(), m2.clone(), -m3.clone()),
        e13: half(m1.clone(), -m2.clone(), m3.clone()),
        e22: half(-m1.clone(), m2.clone(), -m3.clone()),
        e23: half(-m1.clone(), m2.clone(), m3.clone()),
        e33: half(-m1, -m2, m3),
    }
}

/// `(e12 + e13, e12 + e23, e13 + e23)`: the connector weight meeting each
/// boundary.
pub fn pants_boundary_sums<S: TropScalar>(p: &PantsMeasures<S>) -> (S, S, S) {
    (
        p.e12.clone() + p.e13.clone(),
        p.e12.clone() + p.e23.clone(),
        p.e13.clone() + p.e23.clone(),
    )
}

/// Whether `(m1, m2, m3)` satisfy the triangle inequalities, in which case
/// only connectors carry weight.
pub fn is_triangle_regime<S: TropScalar>(m1: &S, m2: &S, m3: &S) -> bool {
    let le = |a: &S, b: &S, c: &S| (b.clone() + c.clone() - a.clone()).sign() != Sign::Minus;
    le(m1, m2, m3) && le(m2, m1, m3) && le(m3, m1, m2)
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct AnnulusPiece<S> {
    /// `+` for the types I/II, `-` for -I/-II.
    pub family: Sign,
    pub e1: S,
    pub e2: S,
}

/// Reads `(m, t)` modulo `(m, t) ~ (-m, -t)` as an annulus piece: the
/// representative has `t ≥ 0` (and `m ≥ 0` when `t = 0`).
pub fn annulus_solve<S: TropScalar>(m: &S, t: &S) -> AnnulusPiece<S> {
    let flip = match t.sign() {
        Sign::Minus => true,
        Sign::Zero => m.sign() == Sign::Minus,
        Sign::Plus => false,
    };
    let (m, t) = if flip {
        (-m.clone(), -t.clone())
    } else {
        (m.clone(), t.clone())
    };
    AnnulusPiece {
        family: if m.sign() == Sign::Minus { Sign::Minus } else { Sign::Plus },
        e1: m.abs_value(),
        e2: t,
    }
}

/// Dehn–Thurston coordinates: `(m_i, t_i)` per pants curve and a signed
/// `m_p` per puncture.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct DTCoords<S> {
    pub curves: Vec<(S, S)>,
    #[serde(default)]
    pub punctures: Vec<S>,
}

impl<S: TropScalar> DTCoords<S> {
    /// Each curve pair replaced by its antipodal representative.
    pub fn canonical(&self) -> DTCoords<S> {
        DTCoords {
            curves: self
                .curves
                .iter()
                .map(|(m, t)| {
                    let a = annulus_solve(m, t);
                    let m = if a.family == Sign::Minus { -a.e1 } else { a.e1 };
                    (m, a.e2)
                })
                .collect(),
            punctures: self.punctures.clone(),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::Rational;

    fn r(n: i64) -> Rational {
        Rational::from_integer(n.into())
    }

    fn one_switch() -> TrainTrack {
        TrainTrack::new(
            vec!["e0".into(), "e1".into(), "e2".into()],
            vec![Switch {
                incoming: "e0".into(),
                outgoing: ["e1".into(), "e2".into()],
            }],
            vec![],
        )
        .unwrap()
    }

    fn measure(v: &[i64]) -> Measure<Rational> {
        ["e0", "e1", "e2"]
            .iter()
            .zip(v)
            .map(|(e, &x)| (e.to_string(), r(x)))
            .collect()
    }

    #[test]
    fn switch_condition() {
        let t = one_switch();
        assert!(validate_measure(&t, &measure(&[0, 0, 0])).unwrap().valid);
        assert!(validate_measure(&t, &measure(&[2, 1, 1])).unwrap().valid);
        let bad = validate_measure(&t, &measure(&[2, 1, 2])).unwrap();
        assert_eq!(bad.violations, vec![0]);
        let mut extra = measure(&[2, 1, 1]);
        extra.insert("e9".into(), r(0));
        assert_eq!(validate_measure(&t, &extra), Err(TrackError::UnknownEdge("e9".into())));
        assert_eq!(
            validate_measure(&t, &measure(&[2, -1, 3])),
            Err(TrackError::NegativeWeight("e1".into()))
        );
        assert!(matches!(
            TrainTrack::new(vec!["a".into()], vec![], vec!["b".into()]),
            Err(TrackError::UnknownEdge(_))
        ));
    }

    #[test]
    fn pants_examples() {
        let p = pants_measures(&r(2), &r(1), &r(1));
        assert_eq!(p.to_vec(), vec![r(0), r(1), r(1), r(0), r(0), r(0)]);
        assert_eq!(pants_boundary_sums(&p), (r(2), r(1), r(1)));
        let p = pants_measures(&r(1), &r(1), &r(0));
        assert_eq!(p.to_vec(), vec![r(0), r(1), r(0), r(0), r(0), r(0)]);
        let p = pants_measures(&r(5), &r(1), &r(1));
        assert!(!is_triangle_regime(&r(5), &r(1), &r(1)));
        assert_eq!(p.e11, Rational::new(3.into(), 2.into()));
        let half5 = Rational::new(5.into(), 2.into());
        assert_eq!(pants_boundary_sums(&p), (r(5), half5.clone(), half5));
    }

    #[test]
    fn annulus_examples() {
        let a = annulus_solve(&r(0), &r(0));
        assert_eq!((a.family, a.e1, a.e2), (Sign::Plus, r(0), r(0)));
        let a = annulus_solve(&r(3), &r(2));
        assert_eq!((a.family, a.e1.clone(), a.e2.clone()), (Sign::Plus, r(3), r(2)));
        let b = annulus_solve(&r(-3), &r(-2));
        assert_eq!(a, b);
        let c = annulus_solve(&r(-3), &r(2));
        assert_eq!((c.family, c.e1, c.e2), (Sign::Minus, r(3), r(2)));
        assert_eq!(annulus_solve(&r(-3), &r(0)), annulus_solve(&r(3), &r(0)));
        let dt = DTCoords {
            curves: vec![(r(-1), r(-4))],
            punctures: vec![r(-2)],
        };
        assert_eq!(dt.canonical().curves, vec![(r(1), r(4))]);
    }
}
