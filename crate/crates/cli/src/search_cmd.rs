//! The `search` subcommand (minimum saturated/covering sets, maximum free
//! sets) and the `katz-tao` probe report.

use std::collections::BTreeMap;
use std::path::PathBuf;

use serde_json::{json, Value};

use cornerlab_core::extremal::{max_config_free, ExtremalKind, ExtremalMode};
use cornerlab_core::saturation::{
    branch_bound_search, katz_tao_probe, load_checkpoint, min_saturated_search, save_checkpoint,
    CheckpointConfig, SaturationKind, SearchCheckpoint, SearchMode, SearchResult, TORSION_NOTE,
};
use cornerlab_core::{Domain, PointSet};

use crate::manifest::{emit_document, OutTarget};
use crate::{core_usage, domain_from, Failure, ModeArg, SearchKindArg};

pub struct SearchArgs {
    pub kind: SearchKindArg,
    pub p: Option<u32>,
    pub n: Option<u32>,
    pub mode: ModeArg,
    pub budget: Option<u64>,
    pub seed: u64,
    pub canonize: bool,
    pub checkpoint: Option<PathBuf>,
    pub checkpoint_interval: u64,
    pub resume: Option<PathBuf>,
    pub target: OutTarget,
}

pub fn domain_json(d: Domain) -> Value {
    match d {
        Domain::PrimePlane { p } => json!({"kind": "prime_plane", "size": p}),
        Domain::IntegerGrid { n } => json!({"kind": "integer_grid", "size": n}),
    }
}

fn points_json(s: &PointSet) -> Value {
    Value::Array(s.iter().map(|pt| json!([pt.x, pt.y])).collect())
}

fn kind_label(kind: SearchKindArg) -> &'static str {
    match kind {
        SearchKindArg::CornerSat => "corner_sat",
        SearchKindArg::SquareSat => "square_sat",
        SearchKindArg::SquareCover => "square_cover",
        SearchKindArg::CornerFreeMax => "corner_free_max",
        SearchKindArg::SquareFreeMax => "square_free_max",
    }
}

fn mode_label(mode: ModeArg) -> &'static str {
    match mode {
        ModeArg::Exact => "exact",
        ModeArg::BranchBound => "branch_bound",
        ModeArg::Greedy => "greedy",
        ModeArg::Heuristic => "heuristic",
    }
}

/// Writes a checkpoint atomically: full temp-file write, then rename, so an
/// interrupt never leaves a partial file at the target path.
fn write_checkpoint_atomic(path: &PathBuf, cp: &SearchCheckpoint) -> Result<(), String> {
    let text = save_checkpoint(cp);
    let tmp = path.with_extension("tmp");
    std::fs::write(&tmp, &text)
        .and_then(|_| std::fs::rename(&tmp, path))
        .map_err(|e| format!("writing checkpoint {}: {e}", path.display()))
}

fn sat_search(args: &SearchArgs, domain: Domain, kind: SaturationKind) -> Result<SearchResult, Failure> {
    let mode = match args.mode {
        ModeArg::Exact => SearchMode::Exact,
        ModeArg::BranchBound => SearchMode::BranchBound,
        ModeArg::Greedy => SearchMode::Greedy,
        ModeArg::Heuristic => {
            return Err(Failure::Usage(
                "--mode heuristic applies to the *-free-max kinds; use exact, branch-bound, or greedy".into(),
            ))
        }
    };
    let uses_files = args.checkpoint.is_some() || args.resume.is_some();
    if uses_files && mode != SearchMode::BranchBound {
        return Err(Failure::Usage(
            "--checkpoint/--resume require --mode branch-bound".into(),
        ));
    }
    if !uses_files {
        return min_saturated_search(domain, kind, mode, args.budget, args.seed).map_err(core_usage);
    }

    let resume_cp = match args.resume.as_ref() {
        Some(path) => {
            let text = std::fs::read_to_string(path)
                .map_err(|e| Failure::Io(format!("reading {}: {e}", path.display())))?;
            let mut cp = load_checkpoint(&text).map_err(|e| Failure::Io(e.to_string()))?;
            // The stored budget describes the interrupted run; the resumed
            // leg gets whatever budget this invocation asks for.
            cp.budget = args.budget;
            Some(cp)
        }
        None => None,
    };

    if let Some(ck_path) = args.checkpoint.as_ref() {
        let mut write_error: Option<String> = None;
        let mut sink = |cp: &SearchCheckpoint| {
            if write_error.is_none() {
                if let Err(e) = write_checkpoint_atomic(ck_path, cp) {
                    write_error = Some(e);
                }
            }
        };
        let cfg = CheckpointConfig {
            interval: args.checkpoint_interval.max(1),
            sink: &mut sink,
        };
        let result = branch_bound_search(
            domain,
            kind,
            args.budget,
            args.seed,
            args.canonize,
            resume_cp,
            Some(cfg),
        )
        .map_err(core_usage)?;
        if let Some(e) = write_error {
            return Err(Failure::Io(e));
        }
        Ok(result)
    } else {
        branch_bound_search(
            domain,
            kind,
            args.budget,
            args.seed,
            args.canonize,
            resume_cp,
            None,
        )
        .map_err(core_usage)
    }
}

pub fn run(args: SearchArgs) -> Result<(), Failure> {
    let domain = domain_from(args.p, args.n)?;
    let klabel = kind_label(args.kind);
    let mlabel = mode_label(args.mode);

    let mut params = BTreeMap::new();
    params.insert("kind".into(), json!(klabel));
    params.insert("mode".into(), json!(mlabel));
    params.insert("domain".into(), domain_json(domain));
    params.insert("budget".into(), json!(args.budget));
    params.insert("resumed".into(), json!(args.resume.is_some()));

    let results = match args.kind {
        SearchKindArg::CornerSat | SearchKindArg::SquareSat | SearchKindArg::SquareCover => {
            let kind = match args.kind {
                SearchKindArg::CornerSat => SaturationKind::Corner,
                SearchKindArg::SquareSat => SaturationKind::Square,
                _ => SaturationKind::SquareCover,
            };
            params.insert("canonize".into(), json!(args.canonize));
            let res = sat_search(&args, domain, kind)?;
            json!({
                "domain": domain_json(domain),
                "kind": klabel,
                "mode": mlabel,
                "best_size": res.best_size,
                "status": res.status,
                "witness_hex": res.best_set.to_hex(),
                "witness_points": points_json(&res.best_set),
                "nodes_explored": res.nodes_explored,
                "wall_time_ms": res.wall_time.as_millis() as u64,
            })
        }
        SearchKindArg::CornerFreeMax | SearchKindArg::SquareFreeMax => {
            if args.checkpoint.is_some() || args.resume.is_some() {
                return Err(Failure::Usage(
                    "checkpointing is only available for the saturation searches".into(),
                ));
            }
            let kind = if args.kind == SearchKindArg::CornerFreeMax {
                ExtremalKind::Corner
            } else {
                ExtremalKind::Square
            };
            let mode = match args.mode {
                ModeArg::Exact => ExtremalMode::Exact,
                ModeArg::Heuristic => ExtremalMode::Heuristic,
                _ => {
                    return Err(Failure::Usage(
                        "maximum-free searches support --mode exact or heuristic".into(),
                    ))
                }
            };
            let start = std::time::Instant::now();
            let rec = max_config_free(domain, kind, mode, args.budget, args.seed)
                .map_err(core_usage)?;
            json!({
                "domain": domain_json(domain),
                "kind": klabel,
                "mode": mlabel,
                "max_size_found": rec.max_size_found,
                "proved": rec.proved,
                "density": rec.density.to_string(),
                "witness_hex": rec.example_set.to_hex(),
                "witness_points": points_json(&rec.example_set),
                "wall_time_ms": start.elapsed().as_millis() as u64,
            })
        }
    };

    emit_document("search", params, args.seed, "result", results, &args.target)
}

/// The `katz-tao` subcommand: greedily grow a square-covering saturated set
/// and report the partial-sumset statistics of its covering pairs.
pub fn run_katz_tao(p: u32, seed: u64, target: &OutTarget) -> Result<(), Failure> {
    let domain = domain_from(Some(p), None)?;
    let res = min_saturated_search(domain, SaturationKind::SquareCover, SearchMode::Greedy, None, seed)
        .map_err(core_usage)?;
    let probe = katz_tao_probe(&res.best_set).map_err(core_usage)?;
    let mut params = BTreeMap::new();
    params.insert("domain".into(), domain_json(domain));
    let results = json!({
        "domain": domain_json(domain),
        "set_size": res.best_size,
        "set_hex": res.best_set.to_hex(),
        "g_size": probe.g_size,
        "covered": probe.covered,
        "sumset_size": probe.sumset_size,
        "diffset_size": probe.diffset_size,
        "kt_rhs": probe.kt_rhs,
        "note": TORSION_NOTE,
    });
    emit_document("katz-tao", params, seed, "report", results, target)
}
