//! The `density-table` subcommand: maximum-free sizes and densities across
//! a sweep of domain sizes, as JSON (default) or CSV.

use std::collections::BTreeMap;

use serde_json::{json, Value};

use cornerlab_core::extremal::{density_table, density_table_csv, ExtremalKind, ExtremalMode};
use cornerlab_core::Domain;

use crate::manifest::{build_manifest, emit_document, OutTarget};
use crate::{core_usage, domain_from, Failure, FreeKindArg, ModeArg, TableFormat};

#[allow(clippy::too_many_arguments)]
pub fn run(
    kind: FreeKindArg,
    p_list: &[u32],
    n_list: &[u32],
    mode: ModeArg,
    budget: Option<u64>,
    seed: u64,
    format: TableFormat,
    target: &OutTarget,
) -> Result<(), Failure> {
    if p_list.is_empty() && n_list.is_empty() {
        return Err(Failure::Usage(
            "give at least one domain via --p-list or --n-list".into(),
        ));
    }
    let mut domains: Vec<Domain> = Vec::new();
    for &p in p_list {
        domains.push(domain_from(Some(p), None)?);
    }
    for &n in n_list {
        domains.push(domain_from(None, Some(n))?);
    }
    let ex_mode = match mode {
        ModeArg::Exact => ExtremalMode::Exact,
        ModeArg::Heuristic => ExtremalMode::Heuristic,
        _ => {
            return Err(Failure::Usage(
                "density tables support --mode exact or heuristic".into(),
            ))
        }
    };
    let ex_kind = match kind {
        FreeKindArg::Corner => ExtremalKind::Corner,
        FreeKindArg::Square => ExtremalKind::Square,
    };

    let rows = density_table(&ex_kind, &domains, ex_mode, budget, seed).map_err(core_usage)?;

    let mut params = BTreeMap::new();
    params.insert("kind".into(), json!(ex_kind.label()));
    params.insert(
        "mode".into(),
        json!(if ex_mode == ExtremalMode::Exact { "exact" } else { "heuristic" }),
    );
    params.insert("p_list".into(), json!(p_list));
    params.insert("n_list".into(), json!(n_list));
    params.insert("budget".into(), json!(budget));

    let rows_json: Vec<Value> = rows
        .iter()
        .map(|(row, density)| {
            json!({
                "size": row.size,
                "kind": row.kind,
                "max_found": row.max_found,
                "proved": row.proved,
                "density": density.to_string(),
                "witness": row.witness,
            })
        })
        .collect();
    let results = Value::Array(rows_json);

    match format {
        TableFormat::Json => {
            emit_document("density-table", params, seed, "rows", results, target)
        }
        TableFormat::Csv => {
            // CSV body only; the manifest still exists, on stderr.
            let manifest = build_manifest("density-table", params, seed, &results);
            let csv = density_table_csv(&rows);
            target.write(csv.trim_end())?;
            eprintln!(
                "{}",
                serde_json::to_string(&json!({"manifest": manifest}))
                    .expect("manifest serializes")
            );
            Ok(())
        }
    }
}
