use std::collections::BTreeMap;
use std::io::Write;

use serde::Serialize;
use serde_json::{json, Value};

use scorecast::analysis::{metric_axiom_report, overlap_report, REFERENCE_PAIRS};
use scorecast::model::{MatchRecord, MetricConfig, Score};
use scorecast::simulate::{run_experiment, ForecasterModel, SimConfig};
use scorecast::{classify, forecast_penalty, mean_forecast_penalty, Transform};

use crate::format::{fixed, text_table};
use crate::{dataset, AxiomArgs, CliError, EvaluateArgs, OutputArgs, OutputFormat, OverlapArgs, SimulateArgs};
use crate::{EXIT_OK, EXIT_OVERLAP};

type CmdResult<T = ()> = Result<T, CliError>;

pub const DEFAULT_FORECASTERS: [&str; 5] = ["constant:1-0", "constant:1-1", "constant:0-0", "rounded-mean", "poisson"];

fn csv_writer(out: &mut dyn Write) -> csv::Writer<&mut dyn Write> {
    csv::WriterBuilder::new().from_writer(out)
}

fn csv_err(e: csv::Error) -> CliError {
    CliError::Io(e.to_string())
}

fn write_json(out: &mut dyn Write, value: &impl Serialize) -> CmdResult {
    serde_json::to_writer_pretty(&mut *out, value).map_err(|e| CliError::Io(e.to_string()))?;
    writeln!(out)?;
    Ok(())
}

/// One row of the reference table: L1 and L2 variants side by side.
#[derive(Debug, Clone, Serialize)]
pub struct Table1Row {
    pub ga1: u32,
    pub ga2: u32,
    pub gf1: u32,
    pub gf2: u32,
    pub d1: f64,
    pub d2: f64,
    pub c: f64,
    pub fp1: f64,
    pub fp2: f64,
}

impl Table1Row {
    fn values(&self) -> [f64; 5] {
        [self.d1, self.d2, self.c, self.fp1, self.fp2]
    }
}

pub const TABLE1_COLUMNS: [&str; 9] = ["ga1", "ga2", "gf1", "gf2", "d1", "d2", "c", "fp1", "fp2"];

/// Reference pairs evaluated with Anscombe, c0 = 1 and the symmetric scheme.
pub fn table1_rows() -> Vec<Table1Row> {
    let l2 = MetricConfig::<f64>::default();
    let l1 = l2.with_norm_order(1.0);
    REFERENCE_PAIRS
        .iter()
        .map(|&(a, f)| {
            let p1 = forecast_penalty(a, f, &l1);
            let p2 = forecast_penalty(a, f, &l2);
            Table1Row {
                ga1: a.g1,
                ga2: a.g2,
                gf1: f.g1,
                gf2: f.g2,
                d1: p1.d_term,
                d2: p2.d_term,
                c: p2.c_term,
                fp1: p1.fp,
                fp2: p2.fp,
            }
        })
        .collect()
}

pub fn table1(args: &OutputArgs, out: &mut dyn Write) -> CmdResult {
    let rows = table1_rows();
    let p = args.precision;
    match args.format {
        OutputFormat::Text => {
            let header: Vec<String> = TABLE1_COLUMNS.iter().map(|c| c.to_uppercase()).collect();
            let header: Vec<&str> = header.iter().map(String::as_str).collect();
            let cells: Vec<Vec<String>> = rows
                .iter()
                .map(|r| {
                    let mut v = vec![r.ga1.to_string(), r.ga2.to_string(), r.gf1.to_string(), r.gf2.to_string()];
                    v.extend(r.values().iter().map(|&x| fixed(x, p)));
                    v
                })
                .collect();
            write!(out, "{}", text_table(&header, &cells))?;
        }
        OutputFormat::Csv => {
            let mut w = csv_writer(out);
            w.write_record(TABLE1_COLUMNS).map_err(csv_err)?;
            for r in &rows {
                let mut v = vec![r.ga1.to_string(), r.ga2.to_string(), r.gf1.to_string(), r.gf2.to_string()];
                v.extend(r.values().iter().map(|&x| fixed(x, p)));
                w.write_record(&v).map_err(csv_err)?;
            }
            w.flush()?;
        }
        OutputFormat::Json => {
            let items: Vec<Value> = rows
                .iter()
                .map(|r| {
                    let mut obj = serde_json::to_value(r).expect("plain struct");
                    let display: serde_json::Map<String, Value> = TABLE1_COLUMNS[4..]
                        .iter()
                        .zip(r.values())
                        .map(|(k, v)| (k.to_string(), Value::String(fixed(v, p))))
                        .collect();
                    obj["display"] = Value::Object(display);
                    obj
                })
                .collect();
            write_json(out, &items)?;
        }
    }
    Ok(())
}

/// Per-record penalty breakdown.
#[derive(Debug, Clone, Serialize)]
pub struct OutputRecord {
    pub match_id: String,
    pub forecaster_id: String,
    pub ga1: u32,
    pub ga2: u32,
    pub gf1: u32,
    pub gf2: u32,
    pub wdl_actual: char,
    pub wdl_forecast: char,
    pub c: f64,
    pub d: f64,
    pub fp: f64,
}

pub const OUTPUT_COLUMNS: [&str; 11] =
    ["match_id", "forecaster_id", "ga1", "ga2", "gf1", "gf2", "wdl_actual", "wdl_forecast", "c", "d", "fp"];

impl OutputRecord {
    fn cells(&self, p: usize) -> Vec<String> {
        vec![
            self.match_id.clone(),
            self.forecaster_id.clone(),
            self.ga1.to_string(),
            self.ga2.to_string(),
            self.gf1.to_string(),
            self.gf2.to_string(),
            self.wdl_actual.to_string(),
            self.wdl_forecast.to_string(),
            fixed(self.c, p),
            fixed(self.d, p),
            fixed(self.fp, p),
        ]
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct LeaderboardEntry {
    pub rank: usize,
    pub forecaster_id: String,
    pub matches: usize,
    pub mfp: f64,
}

pub const LEADERBOARD_COLUMNS: [&str; 4] = ["rank", "forecaster_id", "matches", "mfp"];

impl LeaderboardEntry {
    fn cells(&self, p: usize) -> Vec<String> {
        vec![self.rank.to_string(), self.forecaster_id.clone(), self.matches.to_string(), fixed(self.mfp, p)]
    }
}

pub fn score_records(records: &[MatchRecord], config: &MetricConfig<f64>) -> Vec<OutputRecord> {
    records
        .iter()
        .map(|r| {
            let b = forecast_penalty(r.actual, r.forecast, config);
            OutputRecord {
                match_id: r.match_id.clone(),
                forecaster_id: r.forecaster_id.clone(),
                ga1: r.actual.g1,
                ga2: r.actual.g2,
                gf1: r.forecast.g1,
                gf2: r.forecast.g2,
                wdl_actual: classify(r.actual).letter(),
                wdl_forecast: classify(r.forecast).letter(),
                c: b.c_term,
                d: b.d_term,
                fp: b.fp,
            }
        })
        .collect()
}

/// Forecasters by ascending mean penalty, ties by id.
pub fn leaderboard(records: &[MatchRecord], config: &MetricConfig<f64>) -> CmdResult<Vec<LeaderboardEntry>> {
    let mut by_forecaster: BTreeMap<&str, Vec<(Score, Score)>> = BTreeMap::new();
    for r in records {
        by_forecaster.entry(&r.forecaster_id).or_default().push((r.actual, r.forecast));
    }
    let mut entries = by_forecaster
        .into_iter()
        .map(|(id, pairs)| {
            Ok(LeaderboardEntry {
                rank: 0,
                forecaster_id: id.to_string(),
                matches: pairs.len(),
                mfp: mean_forecast_penalty(pairs, config)?,
            })
        })
        .collect::<CmdResult<Vec<_>>>()?;
    entries.sort_by(|a, b| a.mfp.total_cmp(&b.mfp).then_with(|| a.forecaster_id.cmp(&b.forecaster_id)));
    for (i, e) in entries.iter_mut().enumerate() {
        e.rank = i + 1;
    }
    Ok(entries)
}

fn write_leaderboard_csv(entries: &[LeaderboardEntry], p: usize, out: &mut dyn Write) -> CmdResult {
    let mut w = csv_writer(out);
    w.write_record(LEADERBOARD_COLUMNS).map_err(csv_err)?;
    for e in entries {
        w.write_record(e.cells(p)).map_err(csv_err)?;
    }
    w.flush()?;
    Ok(())
}

pub fn evaluate(args: &EvaluateArgs, out: &mut dyn Write) -> CmdResult {
    let config = args.metric.config()?;
    let records = dataset::read_path(&args.input)?;
    let rows = score_records(&records, &config);
    let board = leaderboard(&records, &config)?;
    let p = args.output.precision;

    if let Some(path) = &args.leaderboard {
        let mut file = std::fs::File::create(path)?;
        write_leaderboard_csv(&board, p, &mut file)?;
    }

    match args.output.format {
        OutputFormat::Text => {
            let cells: Vec<Vec<String>> = rows.iter().map(|r| r.cells(p)).collect();
            write!(out, "{}", text_table(&OUTPUT_COLUMNS, &cells))?;
            writeln!(out)?;
            let cells: Vec<Vec<String>> = board.iter().map(|e| e.cells(p)).collect();
            write!(out, "{}", text_table(&LEADERBOARD_COLUMNS, &cells))?;
        }
        OutputFormat::Csv => {
            let mut w = csv_writer(out);
            w.write_record(OUTPUT_COLUMNS).map_err(csv_err)?;
            for r in &rows {
                w.write_record(r.cells(p)).map_err(csv_err)?;
            }
            w.flush()?;
        }
        OutputFormat::Json => {
            let rows: Vec<Value> = rows
                .iter()
                .map(|r| {
                    let mut obj = serde_json::to_value(r).expect("plain struct");
                    obj["display"] = json!({ "c": fixed(r.c, p), "d": fixed(r.d, p), "fp": fixed(r.fp, p) });
                    obj
                })
                .collect();
            let board: Vec<Value> = board
                .iter()
                .map(|e| {
                    let mut obj = serde_json::to_value(e).expect("plain struct");
                    obj["display"] = json!({ "mfp": fixed(e.mfp, p) });
                    obj
                })
                .collect();
            write_json(out, &json!({ "config": config, "rows": rows, "leaderboard": board }))?;
        }
    }
    Ok(())
}

fn describe(config: &MetricConfig<f64>) -> String {
    format!("c0 = {}, r = {}, transform = {}, scheme = {}", config.c0, config.r, config.transform, config.scheme)
}

/// Returns [`EXIT_OVERLAP`] if any pair of consecutive levels overlaps.
pub fn overlap(args: &OverlapArgs, out: &mut dyn Write) -> CmdResult<i32> {
    let config = args.metric.config()?;
    let report = overlap_report(&config, args.grid_max);
    let p = args.output.precision;
    let opt = |x: Option<f64>| x.map_or_else(|| "-".to_string(), |v| fixed(v, p));
    match args.output.format {
        OutputFormat::Text => {
            writeln!(out, "overlap scan over goals 0..={}: {}", report.grid_max, describe(&config))?;
            let cells: Vec<Vec<String>> = report
                .levels
                .iter()
                .map(|l| vec![l.multiplier.to_string(), l.pairs.to_string(), opt(l.fp_min), opt(l.fp_max)])
                .collect();
            write!(out, "{}", text_table(&["level", "pairs", "fp_min", "fp_max"], &cells))?;
            for s in &report.separations {
                let verdict = if s.separated { "separated" } else { "OVERLAP" };
                writeln!(out, "levels {} / {}: {verdict}", s.lower, s.upper)?;
            }
            let verdict = if report.all_separated() { "separated" } else { "overlap detected" };
            writeln!(out, "verdict: {verdict}")?;
        }
        OutputFormat::Csv => {
            let mut w = csv_writer(out);
            w.write_record(["level", "pairs", "fp_min", "fp_max", "separated_from_next"]).map_err(csv_err)?;
            for (i, l) in report.levels.iter().enumerate() {
                let sep = report.separations.get(i).map_or(String::new(), |s| s.separated.to_string());
                w.write_record([l.multiplier.to_string(), l.pairs.to_string(), opt(l.fp_min), opt(l.fp_max), sep])
                    .map_err(csv_err)?;
            }
            w.flush()?;
        }
        OutputFormat::Json => {
            let mut value = serde_json::to_value(&report).expect("plain struct");
            value["all_separated"] = Value::Bool(report.all_separated());
            write_json(out, &value)?;
        }
    }
    Ok(if report.all_separated() { EXIT_OK } else { EXIT_OVERLAP })
}

pub fn axioms(args: &AxiomArgs, out: &mut dyn Write) -> CmdResult {
    let transform: Transform = args.transform.into();
    // norm order is validated through the shared config rules
    let config =
        MetricConfig::<f64>::default().with_transform(transform).with_norm_order(args.norm_order).validate()?;
    let report = metric_axiom_report(transform, config.r, args.grid_max);
    match args.output.format {
        OutputFormat::Text => {
            writeln!(
                out,
                "metric axiom scan over goals 0..={}: transform = {}, r = {}",
                report.grid_max, transform, report.r
            )?;
            writeln!(out, "pairs checked:        {}", report.pairs_checked)?;
            writeln!(out, "triples checked:      {}", report.triples_checked)?;
            writeln!(out, "symmetry violations:  {}", report.symmetry_violations)?;
            writeln!(out, "identity violations:  {}", report.identity_violations)?;
            writeln!(out, "triangle violations:  {}", report.triangle_violations)?;
            writeln!(out, "worst triangle slack: {:.6e}", report.worst_triangle_slack)?;
            let verdict = if report.is_metric() { "metric on this grid" } else { "not a metric on this grid" };
            writeln!(out, "verdict: {verdict}")?;
        }
        OutputFormat::Csv => {
            let mut w = csv_writer(out);
            w.serialize(&report).map_err(csv_err)?;
            w.flush()?;
        }
        OutputFormat::Json => {
            let mut value = serde_json::to_value(&report).expect("plain struct");
            value["is_metric"] = Value::Bool(report.is_metric());
            write_json(out, &value)?;
        }
    }
    Ok(())
}

pub fn simulate(args: &SimulateArgs, out: &mut dyn Write) -> CmdResult {
    let config = args.metric.config()?;
    let specs: Vec<&str> = if args.forecasters.is_empty() {
        DEFAULT_FORECASTERS.to_vec()
    } else {
        args.forecasters.iter().map(String::as_str).collect()
    };
    let models = specs
        .iter()
        .map(|s| s.parse::<ForecasterModel>().map_err(CliError::Forecaster))
        .collect::<CmdResult<Vec<_>>>()?;
    let sim = SimConfig { lambda1: args.lambda1, lambda2: args.lambda2, n_matches: args.n_matches, seed: args.seed };
    let experiment = run_experiment(&sim, &models, &config)?;
    let p = args.output.precision;
    let header = ["forecaster", "matches", "mfp", "mean_se", "mean_mad", "hit_rate"];
    let cells: Vec<Vec<String>> = experiment
        .rows
        .iter()
        .map(|r| {
            vec![
                r.forecaster.clone(),
                r.n_matches.to_string(),
                fixed(r.mfp, p),
                fixed(r.mean_se, p),
                fixed(r.mean_mad, p),
                fixed(r.hit_rate, p),
            ]
        })
        .collect();
    match args.output.format {
        OutputFormat::Text => {
            writeln!(
                out,
                "{} matches, lambda1 = {}, lambda2 = {}, seed = {}; {}",
                sim.n_matches,
                sim.lambda1,
                sim.lambda2,
                sim.seed,
                describe(&config)
            )?;
            write!(out, "{}", text_table(&header, &cells))?;
        }
        OutputFormat::Csv => {
            let mut w = csv_writer(out);
            w.write_record(header).map_err(csv_err)?;
            for row in &cells {
                w.write_record(row).map_err(csv_err)?;
            }
            w.flush()?;
        }
        OutputFormat::Json => write_json(out, &experiment)?,
    }
    Ok(())
}
