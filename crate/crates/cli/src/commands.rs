use std::path::Path;

use anyhow::{bail, ensure, Context};
use distill::chain::{parse_rounds, ChainPlan, Protocol};
use distill::convergence::{check_identities, iterate};
use distill::efficiency::{optimal_envelope, protocol_curves, switch_table, switching_points, DEFAULT_GRID};
use distill::hybrid::{checkpoint_scan, checkpoints, scan_table, CheckpointKind, ScanRow, SCAN_GRID};
use distill::purification::{grid_table, run_from_fidelity, run_rounds, PauliDistribution, Protocol1G};
use distill::{
    builtin_code, builtin_decoder, validate_code, CodeId, Decoder, StabilizerCode, Table, HASHING_THRESHOLD,
};
use num_rational::Ratio;

use crate::grid::GridSpec;
use crate::output::emit;
use crate::{CodesAction, Common, ConvergeArgs, EfficiencyArgs, HybridArgs, MapTarget, PurifyArgs};

pub const MAP_GRID: (f64, f64, usize) = (0.0, 1.0, 1000);
pub const PURIFY_GRID: (f64, f64, usize) = (0.0, 1.0, 10_000);

pub fn grid_or(explicit: Option<GridSpec>, default: (f64, f64, usize)) -> anyhow::Result<GridSpec> {
    match explicit {
        Some(g) => Ok(g),
        None => GridSpec::with_default_points(default.0, default.1, default.2),
    }
}

fn parse_code(name: &str) -> anyhow::Result<CodeId> {
    name.parse().with_context(|| format!("--code {name:?}"))
}

fn load_code_file(path: &Path) -> anyhow::Result<StabilizerCode> {
    let text = std::fs::read_to_string(path).with_context(|| format!("cannot read code file {}", path.display()))?;
    StabilizerCode::from_text(&text).with_context(|| format!("cannot parse code file {}", path.display()))
}

pub fn codes_table() -> Table {
    let mut t = Table::new([
        "code",
        "n",
        "k",
        "d",
        "rate",
        "table_size",
        "max_leader_weight",
        "pseudo_threshold",
    ]);
    for id in CodeId::ALL {
        let d = builtin_decoder(id);
        let c = d.code();
        t.push(vec![
            id.name().into(),
            c.n.into(),
            c.k.into(),
            c.d.into(),
            Ratio::new(c.k, c.n).to_string().into(),
            d.table.len().into(),
            d.table.max_weight().into(),
            d.polynomial.pseudo_threshold::<f64>().into(),
        ]);
    }
    t
}

pub fn codes(action: CodesAction, common: &Common) -> anyhow::Result<()> {
    match action {
        CodesAction::List => emit(&codes_table(), common.out.as_deref(), common.format),
        CodesAction::Validate { file, code, distance } => {
            let targets = match (file, code) {
                (Some(_), Some(_)) => bail!("give either --file or --code, not both"),
                (Some(path), None) => vec![load_code_file(&path)?],
                (None, Some(name)) => vec![builtin_code(parse_code(&name)?)],
                (None, None) => CodeId::ALL.into_iter().map(builtin_code).collect(),
            };
            let mut failed = Vec::new();
            for code in &targets {
                let report = validate_code(code, distance);
                print!("{report}");
                if !report.passed() {
                    failed.push(report.code.clone());
                }
            }
            ensure!(failed.is_empty(), "validation failed for {}", failed.join(", "));
            Ok(())
        }
    }
}

pub fn map(target: MapTarget, common: &Common) -> anyhow::Result<()> {
    let table = match target {
        MapTarget::Qec {
            code,
            code_file,
            grid,
            enumerator,
        } => {
            let owned;
            let decoder = match code_file {
                Some(path) => {
                    let code = load_code_file(&path)?;
                    owned = Decoder::new(&code).with_context(|| format!("cannot build a decoder for {}", code.name))?;
                    &owned
                }
                None => builtin_decoder(parse_code(&code)?),
            };
            if enumerator {
                decoder.polynomial.to_table()
            } else {
                let g = grid_or(grid, MAP_GRID)?;
                decoder.polynomial.map_table(g.lo, g.hi, g.points)?
            }
        }
        MapTarget::Chain {
            repeaters,
            rounds,
            grid,
        } => {
            let plan = ChainPlan::new(
                repeaters,
                parse_rounds(&rounds).with_context(|| format!("--rounds {rounds:?}"))?,
            )?;
            let g = grid_or(grid, MAP_GRID)?;
            plan.map_table(g.lo, g.hi, g.points)?
        }
    };
    emit(&table, common.out.as_deref(), common.format)
}

pub fn parse_protocols(names: &[String]) -> anyhow::Result<Vec<Protocol>> {
    ensure!(!names.is_empty(), "--protocols needs at least one of P1..P4");
    names
        .iter()
        .map(|n| n.parse::<Protocol>().map_err(anyhow::Error::from))
        .collect()
}

pub fn efficiency_grid(explicit: Option<GridSpec>) -> anyhow::Result<GridSpec> {
    let g = grid_or(explicit, DEFAULT_GRID)?;
    if g.lo <= HASHING_THRESHOLD {
        bail!(
            "efficiency is undefined at or below the hashing threshold F = {HASHING_THRESHOLD}; \
             start the grid above it (e.g. --grid 0.85:1:2000), got {g}"
        );
    }
    Ok(g)
}

pub fn switch_points_table(repeaters: &[u32], protocols: &[Protocol], grid: &[f64]) -> anyhow::Result<Table> {
    let rows = repeaters
        .iter()
        .map(|&n| Ok((n, switching_points(&protocol_curves(n, protocols, grid)?)?)))
        .collect::<anyhow::Result<Vec<_>>>()?;
    Ok(switch_table(&rows))
}

pub fn curves_table(repeaters: &[u32], protocols: &[Protocol], grid: &[f64], envelope: bool) -> anyhow::Result<Table> {
    let mut columns = vec!["repeaters".to_string(), "F_in".to_string()];
    columns.extend(protocols.iter().map(|p| format!("E_{p}")));
    if envelope {
        columns.push("E_optimal".into());
    }
    columns.push("active_plan".into());
    let mut t = Table::new(columns);
    for &n in repeaters {
        let curves = protocol_curves(n, protocols, grid)?;
        let env = optimal_envelope(&curves)?;
        for (i, &f) in env.grid.iter().enumerate() {
            let mut row = vec![u64::from(n).into(), f.into()];
            row.extend(curves.iter().map(|c| c.efficiency[i].into()));
            if envelope {
                row.push(env.value[i].into());
            }
            row.push(env.active_label(i).into());
            t.push(row);
        }
    }
    Ok(t)
}

pub fn efficiency(args: EfficiencyArgs, common: &Common) -> anyhow::Result<()> {
    let protocols = parse_protocols(&args.protocols)?;
    ensure!(!args.repeaters.is_empty(), "--repeaters needs at least one count");
    for &n in &args.repeaters {
        ChainPlan::with_codes(n, Protocol::P1.codes()).with_context(|| format!("--repeaters {n}"))?;
    }
    let grid = efficiency_grid(args.grid)?.values();
    let table = if args.switchpoints {
        ensure!(protocols.len() >= 2, "--switchpoints needs at least two protocols");
        switch_points_table(&args.repeaters, &protocols, &grid)?
    } else {
        curves_table(&args.repeaters, &protocols, &grid, args.envelope)?
    };
    emit(&table, common.out.as_deref(), common.format)
}

pub fn purify(args: PurifyArgs, common: &Common) -> anyhow::Result<()> {
    let protocol: Protocol1G = args.protocol.parse()?;
    let twirl = args.twirl && !args.no_twirl;
    let table = if let Some(f) = args.fin {
        run_from_fidelity(protocol, twirl, f, args.rounds)
            .with_context(|| format!("--fin {f}"))?
            .to_table()
    } else if let Some(dist) = &args.input_dist {
        let input: PauliDistribution<f64> = dist.parse().with_context(|| format!("--input-dist {dist:?}"))?;
        run_rounds(protocol, twirl, input, args.rounds).to_table()
    } else {
        ensure!(args.rounds > 0, "a grid sweep needs --rounds of at least 1");
        let g = grid_or(args.grid, PURIFY_GRID)?;
        grid_table(protocol, twirl, args.rounds, &g.values())?
    };
    emit(&table, common.out.as_deref(), common.format)
}

pub fn checkpoint_table(rows: &[ScanRow]) -> Table {
    let mut t = Table::new(["index", "F_in", "kind", "i_pre", "i_match"]);
    for (i, kind) in checkpoints(rows) {
        let h = &rows[i].hybrid;
        let kind = match kind {
            CheckpointKind::Threshold => "threshold",
            CheckpointKind::Match => "match",
        };
        t.push(vec![
            i.into(),
            h.f_in.into(),
            kind.into(),
            h.i_pre.into(),
            h.i_match.into(),
        ]);
    }
    t
}

pub fn hybrid(args: HybridArgs, common: &Common) -> anyhow::Result<()> {
    let code = parse_code(&args.code)?;
    ensure!(
        args.baseline > 0.0 && args.baseline <= 1.0,
        "--baseline must lie in (0, 1], got {}",
        args.baseline
    );
    let g = grid_or(args.grid, SCAN_GRID)?;
    ensure!(g.lo > 0.5, "the hybrid scan needs inputs above 0.5, got grid {g}");
    let rows = checkpoint_scan(code, &g.values(), args.baseline)?;
    let table = if args.checkpoints {
        checkpoint_table(&rows)
    } else {
        scan_table(&rows)
    };
    emit(&table, common.out.as_deref(), common.format)
}

fn parse_start(s: &str) -> anyhow::Result<[f64; 4]> {
    let v = s
        .split(',')
        .map(|p| {
            p.trim()
                .parse::<f64>()
                .with_context(|| format!("--start component {p:?} is not a number"))
        })
        .collect::<anyhow::Result<Vec<_>>>()?;
    v.try_into()
        .map_err(|v: Vec<f64>| anyhow::anyhow!("--start needs four values a,b,c,d, got {}", v.len()))
}

pub fn converge(args: ConvergeArgs, common: &Common) -> anyhow::Result<()> {
    let protocol: Protocol1G = args.protocol.parse()?;
    let trace = iterate(protocol, parse_start(&args.start)?, args.n)?;
    if args.check {
        let report = check_identities(&trace);
        for c in &report.checks {
            eprintln!("{}\t{}\t{}", c.name, if c.passed { "pass" } else { "FAIL" }, c.detail);
        }
        ensure!(report.passed(), "identity checks failed for {}", protocol.name());
    }
    emit(&trace.to_table(), common.out.as_deref(), common.format)
}
