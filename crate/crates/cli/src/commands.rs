use std::path::PathBuf;

use clap::{Args, Subcommand};
use num_bigint::Sign as IntSign;
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde_json::{json, Value};

use signstab::io::{path_spec, read_json};
use signstab::reduction::{block_structure_check, generator_traces, reduced_path, reduced_subsequence};
use signstab::seed::c_g_matrices;
use signstab::stability::{enumerate_realizable_signs_above, EnumerateOptions};
use signstab::traintrack::{is_triangle_regime, pants_boundary_sums, Measure};
use signstab::trop::presentation_matrix_at_point;
use signstab::{
    annulus_solve, char_poly, detect_stable_sign, detect_weak_stable_sign, edge_compatibility,
    hereditary_check, is_loop, iterate_orbit, pants_measures, permutation_factor_check,
    presentation_matrix_for_sign, sign_of_path, spectral_radius, stretch_factor, transport,
    verify_eigenpair, MutationPath, PathStep, Permutation, Scalar, Seed, Sign, SignSeq, TrainTrack,
};

use crate::inputs::{self, check_field, usage, CliError, PathArgs};

pub struct Report {
    pub json: Value,
    pub summary: String,
}

#[derive(Debug, Args)]
pub struct OrbitArgs {
    /// Number of iterations of the loop.
    #[arg(long, default_value_t = 30)]
    pub iters: usize,
    /// Trailing iterations inspected for stabilization (default: half of --iters).
    #[arg(long)]
    pub window: Option<usize>,
}

impl OrbitArgs {
    fn window(&self) -> Result<usize, CliError> {
        let w = self.window.unwrap_or(self.iters / 2);
        if self.iters == 0 {
            return Err(usage("--iters must be at least 1"));
        }
        if w < 2 || w > self.iters {
            return Err(usage(format!("--window must lie in 2..={}", self.iters)));
        }
        Ok(w)
    }
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Mutate the seed along the path; prints every seed and the C, G matrices.
    Mutate {
        #[command(flatten)]
        path: PathArgs,
    },
    /// Transport a point along the path.
    Transport {
        #[command(flatten)]
        path: PathArgs,
        #[arg(long)]
        point: String,
        /// Include the point before every step.
        #[arg(long)]
        trace: bool,
    },
    /// Sign sequence of the path at a point.
    Sign {
        #[command(flatten)]
        path: PathArgs,
        #[arg(long)]
        point: String,
    },
    /// Iterate a mutation loop on a point and detect its stable signs.
    Orbit {
        #[command(flatten)]
        path: PathArgs,
        #[arg(long)]
        point: String,
        #[command(flatten)]
        orbit: OrbitArgs,
    },
    /// Empirical stable and weak stable signs for one or more points.
    StableSign {
        #[command(flatten)]
        path: PathArgs,
        #[arg(long, required = true)]
        point: Vec<String>,
        #[command(flatten)]
        orbit: OrbitArgs,
    },
    /// All realizable strict sign sequences, each with a witness point.
    SignsEnumerate {
        #[command(flatten)]
        path: PathArgs,
        /// Only sequences above this sign (zeros are free).
        #[arg(long, allow_hyphen_values = true)]
        stable: Option<String>,
        #[arg(long)]
        max_branch: Option<usize>,
    },
    /// Presentation matrix for a strict sign, or at a point.
    Presentation {
        #[command(flatten)]
        path: PathArgs,
        #[arg(long, conflicts_with = "point", allow_hyphen_values = true)]
        sign: Option<String>,
        #[arg(long)]
        point: Option<String>,
    },
    /// Characteristic polynomial of a presentation matrix.
    Charpoly {
        #[command(flatten)]
        path: PathArgs,
        #[arg(long, allow_hyphen_values = true)]
        sign: String,
        /// Cycle lengths c whose product of (x^c - 1) should divide the polynomial.
        #[arg(long, value_delimiter = ',')]
        cycles: Vec<usize>,
    },
    /// Stretch factor over the realizable completions of a stable sign.
    Stretch {
        #[command(flatten)]
        path: PathArgs,
        #[arg(long, allow_hyphen_values = true)]
        stable: String,
        #[arg(long)]
        max_branch: Option<usize>,
    },
    /// Exact check of E x = lambda x for every realizable completion.
    Eigencheck {
        #[command(flatten)]
        path: PathArgs,
        #[arg(long, allow_hyphen_values = true)]
        stable: String,
        #[arg(long, allow_hyphen_values = true)]
        lambda: String,
        #[arg(long)]
        point: String,
        #[arg(long)]
        max_branch: Option<usize>,
    },
    /// Which flips keep every cone generator on the wall.
    Compat {
        #[command(flatten)]
        path: PathArgs,
        #[arg(long)]
        cone: PathBuf,
        /// Include the transported generators.
        #[arg(long)]
        trace: bool,
    },
    /// Compatible flips must carry a nonzero stable sign.
    Hereditary {
        #[command(flatten)]
        path: PathArgs,
        #[arg(long)]
        cone: PathBuf,
        #[arg(long, allow_hyphen_values = true)]
        stable: String,
    },
    /// The compatible flips as (position, index) pairs.
    Skeleton {
        #[command(flatten)]
        path: PathArgs,
        #[arg(long)]
        cone: PathBuf,
    },
    /// Freeze indices and check the block form of the presentation matrices.
    Freeze {
        #[command(flatten)]
        path: PathArgs,
        /// Indices to freeze, e.g. 2,3.
        #[arg(long, value_delimiter = ',', required = true)]
        indices: Vec<usize>,
        /// Enumerate realizable signs and compare spectral radii.
        #[arg(long)]
        blocks: bool,
        #[arg(long, default_value_t = 1e-9)]
        tolerance: f64,
    },
    /// G = (C^-1)^T and sign coherence, on a path or on random paths.
    DualityCheck {
        /// Path to check; without one, random seeds and paths are drawn.
        #[command(flatten)]
        path: PathArgs,
        /// Seed of the random generator.
        #[arg(long)]
        seed: Option<u64>,
        #[arg(long, default_value_t = 100)]
        trials: usize,
        #[arg(long, default_value_t = 6)]
        max_rank: usize,
        #[arg(long, default_value_t = 12)]
        max_len: usize,
        #[arg(long, default_value_t = 3)]
        max_entry: i64,
    },
    /// Edge weights of the pants track with boundary lengths m1 m2 m3.
    ///
    /// Negative fractions or surds need a preceding `--`.
    Pants {
        #[arg(num_args = 3, required = true, value_names = ["M1", "M2", "M3"], allow_negative_numbers = true)]
        m: Vec<String>,
    },
    /// Annulus piece for the length and twist (m, t).
    Annulus {
        #[arg(allow_negative_numbers = true)]
        m: String,
        #[arg(allow_negative_numbers = true)]
        t: String,
    },
    /// Check the switch conditions of a measure on a train track.
    TrackValidate {
        #[arg(long)]
        track: PathBuf,
        #[arg(long)]
        measure: PathBuf,
    },
}

fn options(max_branch: Option<usize>) -> EnumerateOptions {
    EnumerateOptions {
        max_branches: max_branch,
    }
}

fn path_input(p: &MutationPath) -> Value {
    json!(path_spec(p))
}

fn require_loop(p: &MutationPath) -> Result<(), CliError> {
    if is_loop(p) {
        Ok(())
    } else {
        Err(signstab::StabilityError::NotLoop.into())
    }
}

fn point_with_field(arg: &str, radicand: Option<u64>) -> Result<signstab::ExactPoint, CliError> {
    let w = inputs::point(arg)?;
    check_field(w.coords(), radicand)?;
    Ok(w)
}

fn flag_all_zero(weak: &Option<SignSeq>) -> bool {
    weak.as_ref().is_some_and(|w| !w.is_empty() && w.is_all_zero())
}

pub fn run(cmd: &Command, radicand: Option<u64>) -> Result<Report, CliError> {
    match cmd {
        Command::Mutate { path } => {
            let p = path.load()?;
            let (c, g) = c_g_matrices(&p)?;
            let closes = is_loop(&p);
            Ok(Report {
                summary: format!(
                    "{} steps; the path {} a loop",
                    p.steps().len(),
                    if closes { "is" } else { "is not" }
                ),
                json: json!({
                    "inputs": { "path": path_input(&p) },
                    "seeds": p.seeds(),
                    "final": p.last(),
                    "is_loop": closes,
                    "c_matrix": c,
                    "g_matrix": g,
                }),
            })
        }
        Command::Transport { path, point, trace } => {
            let p = path.load()?;
            let w = point_with_field(point, radicand)?;
            let t = transport(&p, &w)?;
            let mut out = json!({
                "inputs": { "path": path_input(&p), "point": w },
                "final_point": t.final_point,
            });
            if *trace {
                out["intermediates"] = json!(t.intermediates);
            }
            Ok(Report {
                summary: format!("{w} -> {}", t.final_point),
                json: out,
            })
        }
        Command::Sign { path, point } => {
            let p = path.load()?;
            let w = point_with_field(point, radicand)?;
            let s = sign_of_path(&p, &w)?;
            Ok(Report {
                summary: format!("sign {s}"),
                json: json!({
                    "inputs": { "path": path_input(&p), "point": w },
                    "sign": s,
                    "strict": s.is_strict(),
                }),
            })
        }
        Command::Orbit { path, point, orbit } => {
            let p = path.load()?;
            let w = point_with_field(point, radicand)?;
            let window = orbit.window()?;
            let rep = iterate_orbit(&p, &w, orbit.iters)?;
            let stable = detect_stable_sign(&rep, window)?;
            let weak = detect_weak_stable_sign(&rep, window)?;
            let rows: Vec<Value> = rep
                .iterations
                .iter()
                .enumerate()
                .map(|(n, s)| json!({ "iteration": n, "sign": s.sign, "point": s.point }))
                .collect();
            Ok(Report {
                summary: orbit_summary(&stable, &weak),
                json: json!({
                    "inputs": { "path": path_input(&p), "point": w, "iters": orbit.iters, "window": window },
                    "empirical": true,
                    "orbit": rows,
                    "stable_sign": stable,
                    "weak_stable_sign": weak,
                    "weak_sign_all_zero": flag_all_zero(&weak),
                }),
            })
        }
        Command::StableSign { path, point, orbit } => {
            let p = path.load()?;
            let window = orbit.window()?;
            let points = point
                .iter()
                .map(|a| point_with_field(a, radicand))
                .collect::<Result<Vec<_>, _>>()?;
            let found = points
                .par_iter()
                .map(|w| {
                    let rep = iterate_orbit(&p, w, orbit.iters)?;
                    Ok((detect_stable_sign(&rep, window)?, detect_weak_stable_sign(&rep, window)?))
                })
                .collect::<Result<Vec<_>, signstab::StabilityError>>()?;
            let rows: Vec<Value> = points
                .iter()
                .zip(&found)
                .map(|(w, (s, weak))| {
                    json!({
                        "point": w,
                        "stable_sign": s,
                        "weak_stable_sign": weak,
                        "weak_sign_all_zero": flag_all_zero(weak),
                    })
                })
                .collect();
            let summary = found
                .iter()
                .map(|(s, w)| orbit_summary(s, w))
                .collect::<Vec<_>>()
                .join("\n");
            Ok(Report {
                summary,
                json: json!({
                    "inputs": { "path": path_input(&p), "points": points, "iters": orbit.iters, "window": window },
                    "empirical": true,
                    "results": rows,
                }),
            })
        }
        Command::SignsEnumerate {
            path,
            stable,
            max_branch,
        } => {
            let p = path.load()?;
            let floor = match stable {
                Some(s) => inputs::sign(s)?,
                None => SignSeq::new(vec![Sign::Zero; p.horizontal_len()]),
            };
            let found = enumerate_realizable_signs_above(&p, &floor, &options(*max_branch))?;
            Ok(Report {
                summary: format!("{} realizable sign sequences", found.len()),
                json: json!({
                    "inputs": { "path": path_input(&p), "floor": floor, "max_branch": max_branch },
                    "count": found.len(),
                    "signs": found,
                }),
            })
        }
        Command::Presentation { path, sign, point } => {
            let p = path.load()?;
            let (m, input) = match (sign, point) {
                (Some(s), None) => {
                    let s = inputs::sign(s)?;
                    (presentation_matrix_for_sign(&p, &s)?, json!({ "sign": s }))
                }
                (None, Some(a)) => {
                    let w = point_with_field(a, radicand)?;
                    let s = sign_of_path(&p, &w)?;
                    (
                        presentation_matrix_at_point(&p, &w)?,
                        json!({ "point": w, "sign": s }),
                    )
                }
                _ => return Err(usage("give one of --sign and --point")),
            };
            Ok(Report {
                summary: format!("{}x{} matrix, det {}", m.rows(), m.cols(), m.det()),
                json: json!({
                    "inputs": { "path": path_input(&p), "at": input },
                    "matrix": m,
                    "det": m.det().to_string(),
                }),
            })
        }
        Command::Charpoly { path, sign, cycles } => {
            let p = path.load()?;
            let s = inputs::sign(sign)?;
            let m = presentation_matrix_for_sign(&p, &s)?;
            let poly = char_poly(&m);
            let radius = spectral_radius(&m);
            let factor = (!cycles.is_empty()).then(|| permutation_factor_check(&poly, cycles));
            Ok(Report {
                summary: format!("{poly}; spectral radius {:.10}", radius.value),
                json: json!({
                    "inputs": { "path": path_input(&p), "sign": s, "cycles": cycles },
                    "matrix": m,
                    "char_poly": poly,
                    "char_poly_text": poly.to_string(),
                    "spectral_radius": radius,
                    "cycle_factor_divides": factor,
                }),
            })
        }
        Command::Stretch {
            path,
            stable,
            max_branch,
        } => {
            let p = path.load()?;
            let s = inputs::sign(stable)?;
            let rep = stretch_factor(&p, &s, &options(*max_branch))?;
            let exact = rep
                .lambda_exact
                .as_ref()
                .map(|l| format!(" = {l}"))
                .unwrap_or_default();
            Ok(Report {
                summary: format!(
                    "lambda = {:.10}{exact} over {} realizable completions",
                    rep.lambda,
                    rep.completions.len()
                ),
                json: json!({
                    "inputs": { "path": path_input(&p), "stable_sign": s, "max_branch": max_branch },
                    "report": rep,
                }),
            })
        }
        Command::Eigencheck {
            path,
            stable,
            lambda,
            point,
            max_branch,
        } => {
            let p = path.load()?;
            require_loop(&p)?;
            let s = inputs::sign(stable)?;
            let l = inputs::scalar(lambda)?;
            let w = point_with_field(point, radicand)?;
            check_field(w.coords().iter().chain([&l]), radicand)?;
            let signs = enumerate_realizable_signs_above(&p, &s, &options(*max_branch))?;
            let rows = signs
                .iter()
                .map(|r| {
                    let m = presentation_matrix_for_sign(&p, &r.sign)?;
                    let ok = verify_eigenpair(&m, &l, w.coords())?;
                    Ok(json!({ "sign": r.sign, "eigenpair": ok }))
                })
                .collect::<Result<Vec<_>, CliError>>()?;
            let all = rows.iter().all(|r| r["eigenpair"] == json!(true));
            Ok(Report {
                summary: format!(
                    "eigenpair {} on {} completions",
                    if all { "holds" } else { "fails" },
                    rows.len()
                ),
                json: json!({
                    "inputs": { "path": path_input(&p), "stable_sign": s, "lambda": l, "point": w },
                    "completions": rows,
                    "all_eigenpairs": all,
                }),
            })
        }
        Command::Compat { path, cone, trace } => {
            let p = path.load()?;
            let c = inputs::cone(cone)?;
            check_field(c.generators().iter().flat_map(|g| g.coords()), radicand)?;
            let compat = edge_compatibility(&p, &c)?;
            let mask: String = compat.iter().map(|&b| if b { '1' } else { '0' }).collect();
            let mut out = json!({
                "inputs": { "path": path_input(&p), "cone": c },
                "compatible": compat,
                "mask": mask,
            });
            if *trace {
                let traces = generator_traces(&p, &c)?;
                out["generator_traces"] = json!(traces.iter().map(|t| &t.intermediates).collect::<Vec<_>>());
            }
            Ok(Report {
                summary: format!("compatibility {mask}"),
                json: out,
            })
        }
        Command::Hereditary { path, cone, stable } => {
            let p = path.load()?;
            let c = inputs::cone(cone)?;
            check_field(c.generators().iter().flat_map(|g| g.coords()), radicand)?;
            let s = inputs::sign(stable)?;
            let rep = hereditary_check(&p, &c, &s)?;
            Ok(Report {
                summary: if rep.hereditary {
                    "hereditary".to_string()
                } else {
                    format!("not hereditary at flips {:?}", rep.violations)
                },
                json: json!({
                    "inputs": { "path": path_input(&p), "cone": c, "stable_sign": s },
                    "report": rep,
                }),
            })
        }
        Command::Skeleton { path, cone } => {
            let p = path.load()?;
            let c = inputs::cone(cone)?;
            check_field(c.generators().iter().flat_map(|g| g.coords()), radicand)?;
            let skel = reduced_subsequence(&p, &c)?;
            let rows: Vec<Value> = skel
                .iter()
                .map(|&(nu, k)| json!({ "position": nu, "index": k }))
                .collect();
            Ok(Report {
                summary: format!("{} compatible flips", skel.len()),
                json: json!({
                    "inputs": { "path": path_input(&p), "cone": c },
                    "skeleton": rows,
                }),
            })
        }
        Command::Freeze {
            path,
            indices,
            blocks,
            tolerance,
        } => {
            if tolerance.is_nan() || *tolerance <= 0.0 {
                return Err(usage("--tolerance must be positive"));
            }
            let p = path.load()?;
            let reduced = reduced_path(&p, indices)?;
            let mut out = json!({
                "inputs": { "path": path_input(&p), "indices": indices, "tolerance": tolerance },
                "reduced_path": path_spec(&reduced),
            });
            let mut summary = format!("rank {} after freezing", reduced.initial().rank());
            if *blocks {
                let rep = block_structure_check(&p, indices, *tolerance)?;
                summary.push_str(&format!(
                    "; zero block {}, radii agree {}",
                    rep.zero_block, rep.radii_agree
                ));
                out["blocks"] = json!(rep);
            }
            Ok(Report { summary, json: out })
        }
        Command::DualityCheck {
            path,
            seed,
            trials,
            max_rank,
            max_len,
            max_entry,
        } => {
            let given = path.path.is_some() || path.seed_file.is_some() || path.example.is_some();
            if given {
                let p = path.load()?;
                let row = duality_row(&p)?;
                let ok = row["dual"] == json!(true) && row["sign_coherent"] == json!(true);
                return Ok(Report {
                    summary: format!("duality {}", if ok { "holds" } else { "fails" }),
                    json: json!({ "inputs": { "path": path_input(&p) }, "result": row }),
                });
            }
            let seed = seed.ok_or_else(|| usage("random duality checks need --seed"))?;
            if *max_rank == 0 || *max_entry < 0 {
                return Err(usage("--max-rank must be positive and --max-entry nonnegative"));
            }
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let mut failures = Vec::new();
            for trial in 0..*trials {
                let p = random_path(&mut rng, *max_rank, *max_len, *max_entry);
                let row = duality_row(&p)?;
                if row["dual"] != json!(true) || row["sign_coherent"] != json!(true) {
                    failures.push(json!({ "trial": trial, "path": path_input(&p), "result": row }));
                }
            }
            Ok(Report {
                summary: format!(
                    "random seed {seed}: {} of {trials} trials passed",
                    trials - failures.len()
                ),
                json: json!({
                    "inputs": {
                        "seed": seed, "trials": trials, "max_rank": max_rank,
                        "max_len": max_len, "max_entry": max_entry,
                    },
                    "passed": failures.is_empty(),
                    "failures": failures,
                }),
            })
        }
        Command::Pants { m } => {
            let m = m.iter().map(|a| inputs::scalar(a)).collect::<Result<Vec<_>, _>>()?;
            check_field(&m, radicand)?;
            let p = pants_measures(&m[0], &m[1], &m[2]);
            let sums = pants_boundary_sums(&p);
            let triangle = is_triangle_regime(&m[0], &m[1], &m[2]);
            Ok(Report {
                summary: format!(
                    "e11 {} e12 {} e13 {} e22 {} e23 {} e33 {}",
                    p.e11, p.e12, p.e13, p.e22, p.e23, p.e33
                ),
                json: json!({
                    "inputs": { "m": m },
                    "measures": p,
                    "boundary_sums": [sums.0, sums.1, sums.2],
                    "triangle_regime": triangle,
                }),
            })
        }
        Command::Annulus { m, t } => {
            let m = inputs::scalar(m)?;
            let t = inputs::scalar(t)?;
            check_field([&m, &t], radicand)?;
            let a = annulus_solve(&m, &t);
            Ok(Report {
                summary: format!("family {} e1 {} e2 {}", a.family, a.e1, a.e2),
                json: json!({ "inputs": { "m": m, "t": t }, "piece": a }),
            })
        }
        Command::TrackValidate { track, measure } => {
            let tt: TrainTrack = read_json(track)?;
            let mu: Measure<Scalar> = read_json(measure)?;
            check_field(mu.values(), radicand)?;
            let rep = signstab::validate_measure(&tt, &mu)?;
            Ok(Report {
                summary: if rep.valid {
                    "measure satisfies every switch condition".to_string()
                } else {
                    format!("switch conditions fail at {:?}", rep.violations)
                },
                json: json!({
                    "inputs": { "track": tt, "measure": mu },
                    "report": rep,
                }),
            })
        }
    }
}

fn orbit_summary(stable: &Option<SignSeq>, weak: &Option<SignSeq>) -> String {
    let s = stable.as_ref().map_or("none".to_string(), |s| s.to_string());
    let w = weak.as_ref().map_or("none".to_string(), |s| s.to_string());
    let flag = if flag_all_zero(weak) {
        " (all zero, not a weak stable sign)"
    } else {
        ""
    };
    format!("stable sign {s}, weak stable sign {w}{flag} (empirical)")
}

fn duality_row(p: &MutationPath) -> Result<Value, CliError> {
    let (c, g) = c_g_matrices(p)?;
    let dual = c.unimodular_inverse().map(|inv| inv.transpose() == g).unwrap_or(false);
    let coherent = (0..c.cols()).all(|j| {
        let col = c.column(j);
        col.iter().all(|v| v.sign() != IntSign::Minus) || col.iter().all(|v| v.sign() != IntSign::Plus)
    });
    Ok(json!({ "c_matrix": c, "g_matrix": g, "dual": dual, "sign_coherent": coherent }))
}

fn random_path(rng: &mut ChaCha8Rng, max_rank: usize, max_len: usize, max_entry: i64) -> MutationPath {
    let n = rng.gen_range(1..=max_rank);
    let mut rows = vec![vec![0i64; n]; n];
    for i in 0..n {
        for j in i + 1..n {
            let v = rng.gen_range(-max_entry..=max_entry);
            rows[i][j] = v;
            rows[j][i] = -v;
        }
    }
    let seed = Seed::from_i64(&rows, (0..n).collect()).expect("skew-symmetric");
    let len = rng.gen_range(0..=max_len);
    let steps = (0..len)
        .map(|_| {
            if rng.gen_bool(0.2) {
                let mut images: Vec<usize> = (0..n).collect();
                images.shuffle(rng);
                PathStep::Permute(Permutation::new(images).expect("permutation"))
            } else {
                PathStep::Flip(rng.gen_range(0..n))
            }
        })
        .collect();
    MutationPath::new(seed, steps).expect("valid path")
}
