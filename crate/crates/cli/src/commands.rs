use std::fs;
use std::path::Path;

use anyhow::{Context, Result};
use sha2::{Digest, Sha256};

use ctxcert_core::assignment;
use ctxcert_core::geometry::{
    disjoint_decomposition, disjoint_decomposition_from, ConvexCombination, Decomposition, PointSet,
};
use ctxcert_core::inequality;
use ctxcert_core::models::OntologicalModel;
use ctxcert_core::numerics::Rational;
use ctxcert_core::quantum;
use ctxcert_core::report::{
    CertificationReport, Method, Preconditions, Provenance, Verdict, Witnesses,
};
use ctxcert_core::scenario::{find_equivalences, ScenarioFile};

fn read_file(path: &Path) -> Result<Vec<u8>> {
    fs::read(path).with_context(|| format!("reading {}", path.display()))
}

fn provenance(input: &[u8]) -> Provenance {
    Provenance {
        input_sha256: hex::encode(Sha256::digest(input)),
        tool_version: env!("CARGO_PKG_VERSION").to_string(),
        generated_at: chrono::Utc::now().to_rfc3339(),
    }
}

fn emit<T: serde::Serialize>(value: &T, report_path: Option<&Path>) -> Result<()> {
    let json = serde_json::to_string_pretty(value)?;
    println!("{json}");
    if let Some(path) = report_path {
        fs::write(path, json.as_bytes()).with_context(|| format!("writing {}", path.display()))?;
    }
    Ok(())
}

fn scenario_file(path: &Path) -> Result<(ScenarioFile, Vec<u8>)> {
    let bytes = read_file(path)?;
    let file: ScenarioFile = serde_json::from_slice(&bytes)
        .with_context(|| format!("parsing scenario {}", path.display()))?;
    Ok((file, bytes))
}

pub fn certify_algorithm(
    path: &Path,
    max_m: usize,
    report_path: Option<&Path>,
    plot_path: Option<&Path>,
) -> Result<u8> {
    let (file, bytes) = scenario_file(path)?;
    let table = file.to_exact()?;
    if table.m() > max_m.min(assignment::MAX_MEASUREMENTS) {
        anyhow::bail!(
            "scenario has {} known measurements, above the guard {}",
            table.m(),
            max_m.min(assignment::MAX_MEASUREMENTS)
        );
    }
    if let Some(plot) = plot_path {
        write_statistics_csv(&table.to_float(), plot)?;
    }
    let scan = assignment::scan(&table)?;
    let report = CertificationReport {
        verdict: scan.verdict,
        method: Method::Algorithm,
        preconditions: Preconditions {
            n: scan.n,
            m: scan.m,
            unknown_count: Some(scan.unknown_count),
            soundness_gate: Some(scan.soundness_gate),
            pairs_tested: Some(scan.pairs_tested),
            quadrilaterals_ok: None,
            tolerance: None,
        },
        witnesses: Witnesses::Intersections(scan.intersections),
        provenance: provenance(&bytes),
    };
    debug_assert!(report.verdict_consistent());
    emit(&report, report_path)?;
    Ok(exit_code(report.verdict))
}

pub fn certify_pentagon(
    path: &Path,
    tolerance: f64,
    report_path: Option<&Path>,
    plot_path: Option<&Path>,
) -> Result<u8> {
    let (file, bytes) = scenario_file(path)?;
    let table = file.to_float()?;
    let result = inequality::certify_pentagon(&table, tolerance)?;
    if let Some(plot) = plot_path {
        write_case_csv(&table, plot)?;
    }
    let report = CertificationReport {
        verdict: result.verdict,
        method: Method::Pentagon,
        preconditions: Preconditions {
            n: table.n(),
            m: table.m(),
            unknown_count: Some(table.unknown_count),
            soundness_gate: None,
            pairs_tested: None,
            quadrilaterals_ok: Some(result.cases.iter().map(|c| c.quadrilateral_ok).collect()),
            tolerance: Some(tolerance),
        },
        witnesses: Witnesses::Cases(result.cases),
        provenance: provenance(&bytes),
    };
    debug_assert!(report.verdict_consistent());
    emit(&report, report_path)?;
    Ok(exit_code(report.verdict))
}

fn exit_code(verdict: Verdict) -> u8 {
    match verdict {
        Verdict::Contextual => 0,
        Verdict::Inconclusive => 1,
    }
}

/// CSV of per-case coordinates, header `case,prep,x,y`.
fn write_case_csv(table: &ctxcert_core::scenario::FloatTable, path: &Path) -> Result<()> {
    let mut out = String::from("case,prep,x,y\n");
    for case in inequality::pentagon_cases() {
        for prep in 0..table.n() {
            let q = inequality::xy_coords(table, &case, prep)?;
            out.push_str(&format!("{},{},{},{}\n", case.anchor, prep, q.x, q.y));
        }
    }
    fs::write(path, out).with_context(|| format!("writing {}", path.display()))?;
    Ok(())
}

/// CSV of raw statistics vectors, one row per preparation.
fn write_statistics_csv(table: &ctxcert_core::scenario::FloatTable, path: &Path) -> Result<()> {
    let mut out = String::from("prep");
    for m in &table.measurements {
        out.push(',');
        out.push_str(m);
    }
    out.push('\n');
    for (i, row) in table.prob0.iter().enumerate() {
        out.push_str(&table.preparations[i]);
        for v in row {
            out.push_str(&format!(",{v}"));
        }
        out.push('\n');
    }
    fs::write(path, out).with_context(|| format!("writing {}", path.display()))?;
    Ok(())
}

pub fn gen_qubit(
    k: Option<u32>,
    pentagon: bool,
    noise: f64,
    denominator_bound: Option<u64>,
    unknown_count: Option<usize>,
    output: Option<&Path>,
) -> Result<u8> {
    let mut table = if pentagon {
        let mut t = quantum::pentagon_ideal();
        if noise > 0.0 {
            t.prob0 = quantum::pentagon_scenario(noise)?.statistics().prob0;
        }
        t
    } else {
        quantum::QubitScenario::equally_spaced(k.unwrap_or(1))?
            .with_noise(noise)?
            .statistics()
    };
    if let Some(u) = unknown_count {
        table.unknown_count = u;
    }
    let scenario = match denominator_bound {
        Some(bound) => {
            let exact = quantum::rationalize(&table, bound)?;
            ScenarioFile::from_table(&exact)
        }
        None => ScenarioFile::from_float_table(&table),
    };
    let json = serde_json::to_string_pretty(&scenario)?;
    match output {
        Some(path) => {
            fs::write(path, json.as_bytes())
                .with_context(|| format!("writing {}", path.display()))?;
        }
        None => println!("{json}"),
    }
    Ok(0)
}

pub fn audit_model(
    scenario_path: &Path,
    model_path: &Path,
    report_path: Option<&Path>,
) -> Result<u8> {
    let (file, scenario_bytes) = scenario_file(scenario_path)?;
    let table = file.to_exact()?;
    let model_bytes = read_file(model_path)?;
    let model: OntologicalModel = serde_json::from_slice(&model_bytes)
        .with_context(|| format!("parsing model {}", model_path.display()))?;
    let outcome = quantum::audit(&table, &model, None)?;

    #[derive(serde::Serialize)]
    struct AuditReport {
        outcome: quantum::AuditOutcome,
        provenance: Provenance,
    }
    let mut digest_input = scenario_bytes.clone();
    digest_input.extend_from_slice(&model_bytes);
    let passed = matches!(
        &outcome,
        quantum::AuditOutcome::Applicable(cert) if cert.vectors_distinct
    );
    emit(
        &AuditReport {
            outcome,
            provenance: provenance(&digest_input),
        },
        report_path,
    )?;
    Ok(if passed { 0 } else { 1 })
}

#[derive(serde::Deserialize)]
struct PointsFile {
    dimension: usize,
    points: Vec<Vec<Rational>>,
    #[serde(default)]
    weights: Option<Vec<Rational>>,
}

pub fn decompose(path: &Path, report_path: Option<&Path>) -> Result<u8> {
    let bytes = read_file(path)?;
    let file: PointsFile = serde_json::from_slice(&bytes)
        .with_context(|| format!("parsing point set {}", path.display()))?;
    let set = PointSet::new(file.dimension, file.points)?;
    let decomposition: Decomposition = match file.weights {
        Some(weights) => {
            let start = ConvexCombination::new((0..set.len()).collect(), weights)?;
            disjoint_decomposition_from(&set, &start)?
        }
        None => disjoint_decomposition(&set)?,
    };

    #[derive(serde::Serialize)]
    struct DecomposeReport {
        left: ConvexCombination,
        right: ConvexCombination,
        point: Vec<Rational>,
        provenance: Provenance,
    }
    emit(
        &DecomposeReport {
            left: decomposition.left,
            right: decomposition.right,
            point: decomposition.point,
            provenance: provenance(&bytes),
        },
        report_path,
    )?;
    Ok(0)
}

pub fn equivalences(
    path: &Path,
    report_path: Option<&Path>,
    plot_path: Option<&Path>,
) -> Result<u8> {
    let (file, bytes) = scenario_file(path)?;
    let table = file.to_exact()?;
    if let Some(plot) = plot_path {
        write_statistics_csv(&table.to_float(), plot)?;
    }
    let pairs = find_equivalences(&table)?;

    #[derive(serde::Serialize)]
    struct EquivalenceReport {
        count: usize,
        pairs: Vec<ctxcert_core::scenario::MixturePair>,
        provenance: Provenance,
    }
    emit(
        &EquivalenceReport {
            count: pairs.len(),
            pairs,
            provenance: provenance(&bytes),
        },
        report_path,
    )?;
    Ok(0)
}
