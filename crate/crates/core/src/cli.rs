//! Job configuration and the document produced by each subcommand.

use std::fmt;
use std::str::FromStr;

use serde::Serialize;
use serde_json::{json, Value};

use crate::affine_root::{BetaSequence, CartanDatum, CartanType, Root};
use crate::error::{Error, Result};
use crate::gram::{gram_matrix, inner_product_with, Engine, GramMatrix, InnerProductCache};
use crate::monomial::MonomialTable;
use crate::pbw_index::{fiber_with, total_order, ClassOrder, Fiber};
use crate::qfield::{RatFn, TruncSeries};
use crate::solver::{
    decompose, decompose_alternate, resolve_monomials, same_decomposition, verify, Decomposition, Matrix,
    PolyMatrix, Report,
};
use crate::strata::{classify_indecomposable, orientation_from_order, stratum_data_of_index};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Command {
    Roots,
    Index,
    Gram,
    Canon,
    Strata,
    Verify,
}

impl fmt::Display for Command {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Command::Roots => "roots",
            Command::Index => "index",
            Command::Gram => "gram",
            Command::Canon => "canon",
            Command::Strata => "strata",
            Command::Verify => "verify",
        })
    }
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub enum Format {
    #[default]
    Json,
    Csv,
}

impl FromStr for Format {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "json" => Ok(Format::Json),
            "csv" => Ok(Format::Csv),
            other => Err(Error::Config(format!("unknown format {other:?}"))),
        }
    }
}

#[derive(Clone, Debug)]
pub struct JobConfig {
    pub kind: CartanType,
    pub rank: usize,
    pub weight: Option<Vec<i64>>,
    pub command: Command,
    pub order: i64,
    pub engine: Engine,
    pub format: Format,
    /// `|k|` bound of the `roots` table.
    pub bound: i64,
}

impl JobConfig {
    pub fn new(kind: CartanType, rank: usize, command: Command) -> Self {
        JobConfig {
            kind,
            rank,
            weight: None,
            command,
            order: 10,
            engine: Engine::Dp,
            format: Format::Json,
            bound: 12,
        }
    }

    pub fn with_weight(mut self, weight: &[i64]) -> Self {
        self.weight = Some(weight.to_vec());
        self
    }
}

/// The rendered document and, for `verify`, the first failing check.
#[derive(Clone, Debug)]
pub struct Outcome {
    pub output: String,
    pub failure: Option<String>,
}

/// 2 for configuration errors, 3 for everything else.
pub fn exit_code(err: &Error) -> i32 {
    match err {
        Error::Config(_)
        | Error::UnsupportedType { .. }
        | Error::DimensionMismatch { .. }
        | Error::NegativeWeight(_)
        | Error::NotRealRoot(_)
        | Error::NotFiniteVertex(_) => 2,
        _ => 3,
    }
}

/// Parses `"1,1,1"`.
pub fn parse_weight(s: &str) -> Result<Vec<i64>> {
    s.split(',')
        .map(|t| {
            t.trim()
                .parse::<i64>()
                .map_err(|_| Error::Config(format!("bad weight component {t:?}")))
        })
        .collect()
}

struct Job {
    config: JobConfig,
    seq: BetaSequence,
    cache: InnerProductCache,
}

impl Job {
    fn new(config: JobConfig) -> Result<Self> {
        if config.order < 1 {
            return Err(Error::Config("series order must be positive".into()));
        }
        let datum = CartanDatum::new(config.kind, config.rank)?;
        let seq = BetaSequence::build(&datum)?;
        Ok(Job {
            config,
            seq,
            cache: InnerProductCache::new(),
        })
    }

    fn datum(&self) -> &CartanDatum {
        self.seq.datum()
    }

    fn weight(&self) -> Result<Root> {
        let w = self
            .config
            .weight
            .as_ref()
            .ok_or_else(|| Error::Config(format!("{} needs --weight", self.config.command)))?;
        let n = self.datum().num_vertices();
        if w.len() != n {
            return Err(Error::DimensionMismatch { expected: n, got: w.len() });
        }
        let nu = Root(w.clone());
        if !nu.is_nonneg() {
            return Err(Error::NegativeWeight(w.clone()));
        }
        Ok(nu)
    }

    fn table(&self, nu: &Root) -> Result<MonomialTable> {
        resolve_monomials(&self.seq, std::slice::from_ref(nu), self.config.engine, &self.cache, self.config.order)
    }

    fn meta(&self, table: Option<&MonomialTable>) -> Value {
        let c = &self.config;
        let overrides: Vec<Value> = table
            .map(|t| t.iter().map(|(w, m)| json!({"weight": w, "word": m, "text": m.to_string()})).collect())
            .unwrap_or_default();
        json!({
            "type": c.kind.to_string(),
            "rank": c.rank,
            "affine": true,
            "weight": c.weight,
            "command": c.command.to_string(),
            "order": c.order,
            "engine": c.engine,
            "conventions": {
                "word": self.seq.word(),
                "tau": self.seq.tau(),
                "vertex_order": self.seq.vertex_order(),
                "i0_product_order": self.seq.finite_vertex_order(),
                "prec0": "lexicographic: c+ compared from k = 0 downward, c- from k = 1 upward",
                "diagonal_blocks": "H_JJ = Kostka matrix U_J, P_JJ = I, Q_JJ = U_J",
                "translation": "t_lambda(x) = x + (lambda, x) delta",
            },
            "monomial_overrides": overrides,
        })
    }
}

fn index_rows(fiber: &Fiber) -> Vec<Value> {
    let class_of = fiber.class_of();
    fiber
        .indices
        .iter()
        .enumerate()
        .map(|(p, c)| json!({"position": p, "class": class_of[p], "index": c, "text": c.to_string()}))
        .collect()
}

fn classes(fiber: &Fiber) -> Vec<[usize; 2]> {
    fiber.classes.iter().map(|r| [r.start, r.end]).collect()
}

fn report_value(report: &Report) -> Value {
    let checks: Vec<Value> = report
        .checks
        .iter()
        .map(|c| json!({"name": c.name, "passed": c.passed, "detail": c.detail}))
        .collect();
    json!({"passed": report.passed(), "checks": checks})
}

fn to_json<T: Serialize>(v: &T) -> Result<Value> {
    serde_json::to_value(v).map_err(|e| Error::Internal(e.to_string()))
}

fn render_json(doc: &Value) -> Result<String> {
    let mut s = serde_json::to_string_pretty(doc).map_err(|e| Error::Internal(e.to_string()))?;
    s.push('\n');
    Ok(s)
}

fn render_csv(header: &[&str], rows: Vec<Vec<String>>) -> Result<String> {
    let mut w = csv::Writer::from_writer(Vec::new());
    let err = |e: csv::Error| Error::Internal(e.to_string());
    w.write_record(header).map_err(err)?;
    for r in rows {
        w.write_record(&r).map_err(err)?;
    }
    let bytes = w.into_inner().map_err(|e| Error::Internal(e.to_string()))?;
    String::from_utf8(bytes).map_err(|e| Error::Internal(e.to_string()))
}

fn series_text(f: &RatFn, order: i64) -> String {
    TruncSeries::of(f, order).to_string()
}

fn rat_cells(name: &str, m: &Matrix, order: i64, rows: &mut Vec<Vec<String>>) {
    for (a, row) in m.iter().enumerate() {
        for (b, x) in row.iter().enumerate() {
            if !x.is_zero() {
                rows.push(vec![name.into(), a.to_string(), b.to_string(), x.to_string(), series_text(x, order)]);
            }
        }
    }
}

fn poly_cells(name: &str, m: &PolyMatrix, rows: &mut Vec<Vec<String>>) {
    for (a, row) in m.iter().enumerate() {
        for (b, x) in row.iter().enumerate() {
            if !x.is_zero() {
                rows.push(vec![name.into(), a.to_string(), b.to_string(), x.to_string(), x.to_string()]);
            }
        }
    }
}

const CELL_HEADER: [&str; 5] = ["matrix", "row", "col", "value", "series"];

fn roots(job: &Job) -> Result<String> {
    let seq = &job.seq;
    let quiver = orientation_from_order(job.datum(), seq.vertex_order())?;
    let mut rows = Vec::new();
    for (k, beta) in seq.beta_window(-job.config.bound, job.config.bound) {
        let class = classify_indecomposable(seq, &beta)?;
        rows.push((k, beta.clone(), seq.defect(&beta), class));
    }
    match job.config.format {
        Format::Json => {
            let betas: Vec<Value> = rows
                .iter()
                .map(|(k, b, d, c)| json!({"k": k, "root": b, "text": b.to_string(), "defect": d, "class": c}))
                .collect();
            let arrows: Vec<[usize; 2]> = quiver.arrows.iter().map(|&(t, h)| [t, h]).collect();
            render_json(&json!({
                "meta": job.meta(None),
                "word": seq.word(),
                "tau": seq.tau(),
                "alignment": format!("{:?}", seq.alignment()).to_lowercase(),
                "vertex_order": seq.vertex_order(),
                "delta": job.datum().delta(),
                "coxeter_power": seq.coxeter_power(),
                "quiver": arrows,
                "betas": betas,
            }))
        }
        Format::Csv => render_csv(
            &["k", "root", "text", "defect", "class"],
            rows.into_iter()
                .map(|(k, b, d, c)| {
                    let coords: Vec<String> = b.coords().iter().map(i64::to_string).collect();
                    vec![k.to_string(), coords.join(" "), b.to_string(), d.to_string(), c.to_string()]
                })
                .collect(),
        ),
    }
}

fn index(job: &Job) -> Result<String> {
    let fiber = total_order(&job.weight()?, &job.seq)?;
    match job.config.format {
        Format::Json => render_json(&json!({
            "meta": job.meta(None),
            "count": fiber.len(),
            "classes": classes(&fiber),
            "indices": index_rows(&fiber),
        })),
        Format::Csv => {
            let class_of = fiber.class_of();
            let rows = fiber
                .indices
                .iter()
                .enumerate()
                .map(|(p, c)| vec![p.to_string(), class_of[p].to_string(), c.to_string()])
                .collect();
            render_csv(&["position", "class", "index"], rows)
        }
    }
}

fn build_gram(job: &Job) -> Result<(MonomialTable, GramMatrix)> {
    let nu = job.weight()?;
    let table = job.table(&nu)?;
    let fiber = total_order(&nu, &job.seq)?;
    let gram = gram_matrix(&fiber, &job.seq, &table, job.config.engine, &job.cache)?;
    Ok((table, gram))
}

fn gram(job: &Job) -> Result<String> {
    let (table, g) = build_gram(job)?;
    match job.config.format {
        Format::Json => {
            let words: Vec<Value> = g.words.iter().map(|w| json!({"word": w, "text": w.to_string()})).collect();
            render_json(&json!({
                "meta": job.meta(Some(&table)),
                "classes": classes(&g.fiber),
                "indices": index_rows(&g.fiber),
                "words": words,
                "gram": to_json(&g.entries)?,
            }))
        }
        Format::Csv => {
            let mut rows = Vec::new();
            rat_cells("Lambda", &g.entries, job.config.order, &mut rows);
            render_csv(&CELL_HEADER, rows)
        }
    }
}

fn canon_parts(job: &Job) -> Result<(MonomialTable, GramMatrix, Decomposition, Report)> {
    let (table, g) = build_gram(job)?;
    let dec = decompose(&g)?;
    let report = verify(&dec, &g.entries, job.config.order);
    Ok((table, g, dec, report))
}

fn canon(job: &Job) -> Result<String> {
    let (table, g, dec, report) = canon_parts(job)?;
    match job.config.format {
        Format::Json => render_json(&json!({
            "meta": job.meta(Some(&table)),
            "classes": classes(&g.fiber),
            "indices": index_rows(&g.fiber),
            "H": to_json(&dec.h)?,
            "D": to_json(&dec.d)?,
            "P": to_json(&dec.p)?,
            "Q": to_json(&dec.q)?,
            "Qinv": to_json(&dec.q_inv)?,
            "verification": report_value(&report),
        })),
        Format::Csv => {
            let mut rows = Vec::new();
            poly_cells("H", &dec.h, &mut rows);
            rat_cells("D", &dec.d, job.config.order, &mut rows);
            poly_cells("P", &dec.p, &mut rows);
            poly_cells("Q", &dec.q, &mut rows);
            poly_cells("Qinv", &dec.q_inv, &mut rows);
            render_csv(&CELL_HEADER, rows)
        }
    }
}

fn strata(job: &Job) -> Result<String> {
    let seq = &job.seq;
    let nu = job.weight()?;
    let fiber = total_order(&nu, seq)?;
    let quiver = orientation_from_order(job.datum(), seq.vertex_order())?;
    let data = fiber
        .indices
        .iter()
        .map(|c| stratum_data_of_index(c, seq))
        .collect::<Result<Vec<_>>>()?;
    match job.config.format {
        Format::Json => {
            let rows: Vec<Value> = fiber
                .indices
                .iter()
                .zip(&data)
                .map(|(c, s)| json!({"index": c, "text": c.to_string(), "stratum": s, "stratum_text": s.to_string()}))
                .collect();
            let arrows: Vec<[usize; 2]> = quiver.arrows.iter().map(|&(t, h)| [t, h]).collect();
            render_json(&json!({"meta": job.meta(None), "quiver": arrows, "rows": rows}))
        }
        Format::Csv => render_csv(
            &["index", "stratum"],
            fiber.indices.iter().zip(&data).map(|(c, s)| vec![c.to_string(), s.to_string()]).collect(),
        ),
    }
}

/// Inner products on every pair of fiber words with all three evaluators,
/// the full decomposition report, schedule independence and stratum
/// dimensions.
fn verify_suite(job: &Job) -> Result<(MonomialTable, Report)> {
    let seq = &job.seq;
    let (table, g, dec, mut report) = canon_parts(job)?;
    let mut oracle = None;
    'outer: for (a, w1) in g.words.iter().enumerate() {
        for w2 in &g.words[a..] {
            if let Err(e) = inner_product_with(job.datum(), Engine::OracleCheck, w1, w2) {
                oracle = Some(e.to_string());
                break 'outer;
            }
        }
    }
    report.push("inner product oracles agree", oracle);
    let alt = fiber_with(&g.fiber.nu, seq, ClassOrder::MinusFirst)?;
    let unique = match decompose_alternate(&g, &alt) {
        Ok(other) => (!same_decomposition(&dec, &other)).then(|| "alternate schedule differs".to_string()),
        Err(e) => Some(e.to_string()),
    };
    report.push("alternate schedule agrees", unique);
    let mut strata = None;
    for c in &g.fiber.indices {
        match stratum_data_of_index(c, seq) {
            Ok(s) if s.dim(job.datum()) == g.fiber.nu => {}
            Ok(_) => strata = Some(format!("dimension mismatch at {c}")),
            Err(e) => strata = Some(e.to_string()),
        }
    }
    report.push("stratum data dimensions", strata);
    Ok((table, report))
}

fn verify_cmd(job: &Job) -> Result<Outcome> {
    let (table, report) = verify_suite(job)?;
    let failure = report.failures().next().map(|c| match &c.detail {
        Some(d) => format!("{}: {d}", c.name),
        None => c.name.clone(),
    });
    let output = match job.config.format {
        Format::Json => render_json(&json!({"meta": job.meta(Some(&table)), "verification": report_value(&report)}))?,
        Format::Csv => render_csv(
            &["check", "passed", "detail"],
            report
                .checks
                .iter()
                .map(|c| vec![c.name.clone(), c.passed.to_string(), c.detail.clone().unwrap_or_default()])
                .collect(),
        )?,
    };
    Ok(Outcome { output, failure })
}

/// Runs one job and renders its document.
pub fn run(config: JobConfig) -> Result<Outcome> {
    let job = Job::new(config)?;
    let output = match job.config.command {
        Command::Roots => roots(&job)?,
        Command::Index => index(&job)?,
        Command::Gram => gram(&job)?,
        Command::Canon => canon(&job)?,
        Command::Strata => strata(&job)?,
        Command::Verify => return verify_cmd(&job),
    };
    Ok(Outcome { output, failure: None })
}

/// [`run`] on a dedicated pool of `jobs` workers.
pub fn run_with_jobs(config: JobConfig, jobs: Option<usize>) -> Result<Outcome> {
    match jobs {
        None => run(config),
        Some(0) => Err(Error::Config("--jobs must be positive".into())),
        Some(n) => {
            let pool = rayon::ThreadPoolBuilder::new()
                .num_threads(n)
                .build()
                .map_err(|e| Error::Internal(e.to_string()))?;
            pool.install(|| run(config))
        }
    }
}
