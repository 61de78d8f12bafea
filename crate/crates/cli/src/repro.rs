use std::path::{Path, PathBuf};

use anyhow::{ensure, Context};
use distill::chain::{ChainPlan, Protocol};
use distill::convergence::iterate;
use distill::hybrid::{checkpoint_scan, scan_table, DEFAULT_BASELINE_YIELD, SCAN_GRID};
use distill::purification::{grid_table, run_from_fidelity, Protocol1G};
use distill::{builtin_polynomial, CodeId, Table};
use serde_json::json;

use crate::commands::{
    checkpoint_table, codes_table, curves_table, efficiency_grid, grid_or, switch_points_table, MAP_GRID, PURIFY_GRID,
};
use crate::output::write_atomic;
use crate::{Common, ReproArgs};

/// Repeater counts for the switching-point table.
pub const SWITCH_REPEATERS: [u32; 9] = [1, 3, 5, 7, 9, 11, 13, 101, 1001];
const CURVE_REPEATERS: [u32; 3] = [1, 3, 5];
const PURIFY_ROUNDS: usize = 5;
const TRACE_STEPS: usize = 50;

struct Bundle {
    dir: PathBuf,
    files: Vec<serde_json::Value>,
}

impl Bundle {
    fn write(&mut self, name: &str, table: &Table, description: &str) -> anyhow::Result<()> {
        let text = table.to_csv();
        write_atomic(&self.dir.join(name), text.as_bytes())?;
        self.files.push(json!({
            "file": name,
            "description": description,
            "rows": table.rows.len(),
            "columns": table.columns,
        }));
        eprintln!("wrote {name} ({} rows)", table.rows.len());
        Ok(())
    }
}

fn depolarizing_start(f: f64) -> [f64; 4] {
    let e = (1.0 - f) / 3.0;
    [f, e, e, e]
}

fn generate(dir: &Path) -> anyhow::Result<(Vec<serde_json::Value>, serde_json::Value)> {
    let mut b = Bundle {
        dir: dir.to_path_buf(),
        files: Vec::new(),
    };
    let map_grid = grid_or(None, MAP_GRID)?;
    let eff_grid = efficiency_grid(None)?;
    let purify_grid = grid_or(None, PURIFY_GRID)?;
    let scan_grid = grid_or(None, SCAN_GRID)?;

    b.write("codes.csv", &codes_table(), "builtin code registry")?;
    for id in CodeId::ALL {
        let poly = builtin_polynomial(id);
        b.write(
            &format!("enumerator_{id}.csv"),
            &poly.to_table(),
            "corrected errors per weight",
        )?;
        b.write(
            &format!("qec_map_{id}.csv"),
            &poly.map_table(map_grid.lo, map_grid.hi, map_grid.points)?,
            "one decoding round, input to output fidelity",
        )?;
    }
    for n in CURVE_REPEATERS {
        for p in Protocol::ALL {
            let plan = p.plan(n)?;
            b.write(
                &format!("chain_{p}_{n}R.csv"),
                &plan.map_table(map_grid.lo, map_grid.hi, map_grid.points)?,
                &format!("{plan}"),
            )?;
        }
    }
    let bare: ChainPlan = "repeaters=1; rounds=skip,skip,skip".parse()?;
    b.write(
        "chain_swap_only_1R.csv",
        &bare.map_table(map_grid.lo, map_grid.hi, map_grid.points)?,
        "entanglement swapping without codes",
    )?;

    let eff = eff_grid.values();
    b.write(
        "efficiency.csv",
        &curves_table(&CURVE_REPEATERS, &Protocol::ALL, &eff, true)?,
        "efficiency curves with optimal envelope",
    )?;
    b.write(
        "switch_points.csv",
        &switch_points_table(&SWITCH_REPEATERS, &Protocol::ALL, &eff)?,
        "input fidelities where the optimal plan changes",
    )?;

    let pg = purify_grid.values();
    for p in Protocol1G::ALL {
        for twirl in [false, true] {
            let tag = if twirl { "twirl" } else { "no_twirl" };
            b.write(
                &format!("purify_{}_{tag}.csv", p.name()),
                &grid_table(p, twirl, PURIFY_ROUNDS, &pg)?,
                "purification rounds over depolarizing inputs",
            )?;
            b.write(
                &format!("trace_{}_{tag}_0.6.csv", p.name()),
                &run_from_fidelity(p, twirl, 0.6, PURIFY_ROUNDS)?.to_table(),
                "purification trace from F = 0.6",
            )?;
        }
    }
    for (p, f) in [(Protocol1G::Bbpssw, 0.6), (Protocol1G::Dejmps, 0.53)] {
        b.write(
            &format!("converge_{}_{f}.csv", p.name()),
            &iterate(p, depolarizing_start(f), TRACE_STEPS)?.to_table(),
            "untwirled recurrence from a depolarizing start",
        )?;
    }

    let rows = checkpoint_scan(CodeId::Nine3, &scan_grid.values(), DEFAULT_BASELINE_YIELD)?;
    b.write(
        "hybrid_933.csv",
        &scan_table(&rows),
        "purification then one [[9,3,3]] round",
    )?;
    b.write(
        "hybrid_933_checkpoints.csv",
        &checkpoint_table(&rows),
        "grid points where round counts drop",
    )?;

    let grids = json!({
        "map": map_grid.to_string(),
        "efficiency": eff_grid.to_string(),
        "purify": purify_grid.to_string(),
        "hybrid": scan_grid.to_string(),
    });
    Ok((b.files, grids))
}

pub fn run(args: ReproArgs, _common: &Common) -> anyhow::Result<()> {
    let parent = args.dir.unwrap_or_else(|| PathBuf::from("."));
    std::fs::create_dir_all(&parent).with_context(|| format!("cannot create {}", parent.display()))?;
    let now = chrono::Utc::now();
    let name = format!("repro-{}", now.format("%Y%m%dT%H%M%SZ"));
    let target = parent.join(&name);
    ensure!(
        !target.exists(),
        "{} already exists; wait a second and rerun",
        target.display()
    );

    let staging = tempfile::Builder::new()
        .prefix(".repro-partial-")
        .tempdir_in(&parent)
        .with_context(|| format!("cannot create a staging directory in {}", parent.display()))?;
    let (files, grids) = generate(staging.path())?;
    let manifest = json!({
        "tool": "distill",
        "version": env!("CARGO_PKG_VERSION"),
        "created": now.to_rfc3339_opts(chrono::SecondsFormat::Secs, true),
        "grids": grids,
        "files": files,
    });
    let text = serde_json::to_string_pretty(&manifest)? + "\n";
    write_atomic(&staging.path().join("manifest.json"), text.as_bytes())?;
    let staged = staging.keep();
    if let Err(e) = std::fs::rename(&staged, &target) {
        let _ = std::fs::remove_dir_all(&staged);
        return Err(e).with_context(|| format!("cannot move results into {}", target.display()));
    }
    println!("{}", target.display());
    Ok(())
}
