//! The `audit-coloring` subcommand: monochromatic corner counts, the exact
//! balanced decomposition, the axis-corner scan, and the optional
//! norm-prescribed collinear-triple search.

use std::collections::BTreeMap;
use std::path::PathBuf;

use serde_json::{json, Value};

use cornerlab_core::configs::rational_to_string;
use cornerlab_core::ramsey::{
    find_mono_axis_corner, find_mono_collinear_triple, mono_corner_counts,
    mono_decomposition_audit, Coloring,
};
use cornerlab_core::{Domain, Error, GridPoint};

use crate::manifest::{emit_document, OutTarget};
use crate::search_cmd::domain_json;
use crate::{domain_from, Failure};

pub struct AuditArgs {
    pub input: Option<PathBuf>,
    pub random: bool,
    pub p: Option<u32>,
    pub n: Option<u32>,
    pub r: Option<u16>,
    pub seed: u64,
    pub c_constant: Option<f64>,
    pub a: Option<u32>,
    pub b: Option<u32>,
    pub force: bool,
    pub target: OutTarget,
}

fn pt(p: GridPoint) -> Value {
    json!([p.x, p.y])
}

fn load_coloring(args: &AuditArgs) -> Result<Coloring, Failure> {
    if let Some(path) = args.input.as_ref() {
        let text = std::fs::read_to_string(path)
            .map_err(|e| Failure::Io(format!("reading {}: {e}", path.display())))?;
        // serde messages carry line/column context for malformed files
        return Coloring::from_json(&text)
            .map_err(|e| Failure::Io(format!("{}: {e}", path.display())));
    }
    if args.random {
        let domain = domain_from(args.p, args.n)?;
        let r = args.r.expect("clap enforces --r with --random");
        return Coloring::random(domain, r, args.seed).map_err(|e| Failure::Usage(e.to_string()));
    }
    Err(Failure::Usage(
        "give --input FILE or --random with --p/--n and --r".into(),
    ))
}

/// Two-color analyses run only where they are defined; elsewhere the report
/// carries an explanation instead of a result.
fn two_color_plane_gate(c: &Coloring) -> Option<&'static str> {
    if !matches!(c.domain(), Domain::PrimePlane { .. }) {
        Some("prime-plane only")
    } else if c.num_colors() != 2 {
        Some("needs exactly two colors")
    } else {
        None
    }
}

pub fn run(args: AuditArgs) -> Result<(), Failure> {
    let coloring = load_coloring(&args)?;
    let domain = coloring.domain();

    let mut params = BTreeMap::new();
    params.insert("domain".into(), domain_json(domain));
    params.insert("colors".into(), json!(coloring.num_colors()));
    params.insert("source".into(), json!(if args.input.is_some() { "file" } else { "random" }));
    if let Some(c) = args.c_constant {
        params.insert("c_constant".into(), json!(c));
    }
    if let (Some(a), Some(b)) = (args.a, args.b) {
        params.insert("collinear_norms".into(), json!([a, b]));
        params.insert("force".into(), json!(args.force));
    }

    let class_sizes: Vec<u32> = (0..coloring.num_colors())
        .map(|k| coloring.class(k).len())
        .collect();

    let counts = match two_color_plane_gate(&coloring) {
        Some(reason) => json!({"skipped": reason}),
        None => {
            let out = mono_corner_counts(&coloring, args.c_constant)
                .map_err(|e| Failure::Usage(e.to_string()))?;
            json!({
                "sigma_r": out.sigma_r,
                "sigma_b": out.sigma_b,
                "bound": out.bound,
                "c_constant": out.c_constant,
                "total_above_bound": (out.sigma_r + out.sigma_b) as f64 >= out.bound,
            })
        }
    };

    let decomposition = match two_color_plane_gate(&coloring) {
        Some(reason) => json!({"skipped": reason}),
        None => {
            let audit = mono_decomposition_audit(&coloring)
                .map_err(|e| Failure::Usage(e.to_string()))?;
            let identity_exact = audit.exact_main.clone() + audit.correction_sum.clone()
                == audit.sigma_total;
            let side = |d: &cornerlab_core::configs::SigmaDecomposition| {
                json!({
                    "main_term": rational_to_string(&d.main_term),
                    "single_f_terms": d.single_f_terms.iter().map(rational_to_string).collect::<Vec<_>>(),
                    "two_f_terms": d.two_f_terms.iter().map(rational_to_string).collect::<Vec<_>>(),
                    "three_f_term": rational_to_string(&d.three_f_term),
                    "total": rational_to_string(&d.total),
                })
            };
            json!({
                "idealized_main": rational_to_string(&audit.idealized_main),
                "exact_main": rational_to_string(&audit.exact_main),
                "correction_sum": rational_to_string(&audit.correction_sum),
                "sigma_total": rational_to_string(&audit.sigma_total),
                "residual_vs_idealized": rational_to_string(&audit.residual_vs_idealized),
                "identity_exact": identity_exact,
                "red": side(&audit.red),
                "blue": side(&audit.blue),
            })
        }
    };

    let axis_corner = match find_mono_axis_corner(&coloring) {
        Some(hit) => json!({
            "apex": pt(hit.apex),
            "arm_x": pt(hit.arm_x),
            "arm_y": pt(hit.arm_y),
            "color": hit.color,
            "d": hit.d,
        }),
        None => Value::Null,
    };

    let collinear = match (args.a, args.b) {
        (Some(a), Some(b)) => {
            let found = find_mono_collinear_triple(&coloring, a, b, args.force).map_err(|e| {
                match e {
                    Error::NotQuadraticResidue { .. }
                    | Error::DomainMismatch(_)
                    | Error::WrongColorCount { .. }
                    | Error::ZeroInput => Failure::Usage(e.to_string()),
                    other => Failure::Usage(other.to_string()),
                }
            })?;
            match found {
                Some(t) => json!({
                    "x": pt(t.x), "y": pt(t.y), "z": pt(t.z), "color": t.color,
                    "norms": [a, b],
                }),
                None => Value::Null,
            }
        }
        _ => Value::Null,
    };

    let mut results = json!({
        "domain": domain_json(domain),
        "colors": coloring.num_colors(),
        "class_sizes": class_sizes,
        "mono_corner_counts": counts,
        "decomposition": decomposition,
        "axis_corner": axis_corner,
    });
    if args.a.is_some() {
        results["collinear_triple"] = collinear;
    }

    emit_document("audit-coloring", params, args.seed, "report", results, &args.target)
}
