//! Configuration-driven experiments behind the `loopcocycle` binary.

mod config;

pub use config::{
    AlgebraForm, AlgebraSpec, AutomorphismForm, AutomorphismSpec, DensityConfig, DensityMode, InnerDiag,
    MatrixAutomorphism, RunConfig, ScalarText, StructureConstants, VerifyConfig, WeightSpec, SCHEMA,
};

use std::fmt::Write as _;
use std::str::FromStr;
use std::sync::Arc;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;

use crate::cocycle::{antisymmetry_witness, check_equivariance, cocycle_defect, factorize, kappa_d, omega_alg};
use crate::cohomology::{ce_h2_weight, target_dim};
use crate::density::{
    ck_error, fourier_truncate, interval_error, weierstrass_integrate_approx, ApproxReport, IntervalFunction,
    SmoothTestFunction,
};
use crate::eqmap::{random_element, EqMapElement, MultiloopAlgebra};
use crate::error::{Error, Result};
use crate::exactnum::Scalar;
use crate::laurent::{exterior_d, omegabar_invariants, omegabar_weight_dim, reduce_mod_exact, LaurentPoly, Multidegree};
use crate::liealg::killing_form;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Command {
    Construct,
    Verify,
    H2Scan,
    DensityDemo,
}

impl Command {
    pub const ALL: [Command; 4] = [Command::Construct, Command::Verify, Command::H2Scan, Command::DensityDemo];

    pub fn name(&self) -> &'static str {
        match self {
            Command::Construct => "construct",
            Command::Verify => "verify",
            Command::H2Scan => "h2-scan",
            Command::DensityDemo => "density-demo",
        }
    }
}

impl FromStr for Command {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Command::ALL.into_iter().find(|c| c.name() == s).ok_or_else(|| Error::UnknownPreset(s.to_string()))
    }
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct RunOptions {
    /// Worker threads; `None` uses the global rayon pool.
    pub jobs: Option<usize>,
    pub seed: u64,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Table {
    pub name: String,
    pub columns: Vec<String>,
    pub rows: Vec<Vec<String>>,
}

impl Table {
    fn new(name: &str, columns: &[&str]) -> Self {
        Table { name: name.into(), columns: columns.iter().map(|c| c.to_string()).collect(), rows: Vec::new() }
    }

    fn push(&mut self, row: Vec<String>) {
        debug_assert_eq!(row.len(), self.columns.len());
        self.rows.push(row);
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Check {
    pub name: String,
    pub passed: bool,
    pub detail: String,
}

fn check(name: &str, passed: bool, detail: impl Into<String>) -> Check {
    Check { name: name.into(), passed, detail: detail.into() }
}

/// Deterministic result of one command: identical inputs give identical bytes.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Report {
    pub command: String,
    pub version: String,
    pub seed: u64,
    pub config: RunConfig,
    pub tables: Vec<Table>,
    pub checks: Vec<Check>,
    pub verdict: String,
    pub passed: bool,
}

impl Report {
    fn new(command: Command, cfg: &RunConfig, opts: &RunOptions, tables: Vec<Table>, checks: Vec<Check>, verdict: String) -> Self {
        let passed = checks.iter().all(|c| c.passed);
        Report {
            command: command.name().into(),
            version: env!("CARGO_PKG_VERSION").into(),
            seed: opts.seed,
            config: cfg.clone(),
            tables,
            checks,
            verdict,
            passed,
        }
    }

    pub fn table(&self, name: &str) -> Option<&Table> {
        self.tables.iter().find(|t| t.name == name)
    }

    /// Tables as `# name` blocks of tab-separated rows, then the checks.
    pub fn to_tsv(&self) -> String {
        let mut out = String::new();
        let checks = Table {
            name: "checks".into(),
            columns: vec!["check".into(), "passed".into(), "detail".into()],
            rows: self.checks.iter().map(|c| vec![c.name.clone(), c.passed.to_string(), c.detail.clone()]).collect(),
        };
        for t in self.tables.iter().chain(std::iter::once(&checks)) {
            let _ = writeln!(out, "# {}", t.name);
            let _ = writeln!(out, "{}", t.columns.join("\t"));
            for row in &t.rows {
                let _ = writeln!(out, "{}", row.join("\t"));
            }
            out.push('\n');
        }
        let _ = writeln!(out, "# verdict\t{}", self.verdict);
        out
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serializes")
    }
}

/// Run `command` on a validated configuration.
pub fn run(command: Command, cfg: &RunConfig, opts: &RunOptions) -> Result<Report> {
    match opts.jobs {
        Some(jobs) => {
            let pool = rayon::ThreadPoolBuilder::new()
                .num_threads(jobs.max(1))
                .build()
                .map_err(|e| Error::Io(e.to_string()))?;
            pool.install(|| dispatch(command, cfg, opts))
        }
        None => dispatch(command, cfg, opts),
    }
}

fn dispatch(command: Command, cfg: &RunConfig, opts: &RunOptions) -> Result<Report> {
    match command {
        Command::Construct => construct(cfg, opts),
        Command::Verify => verify(cfg, opts),
        Command::H2Scan => h2_scan(cfg, opts),
        Command::DensityDemo => density_demo(cfg, opts),
    }
}

fn join_u32(v: &[u32]) -> String {
    v.iter().map(u32::to_string).collect::<Vec<_>>().join(",")
}

fn construct(cfg: &RunConfig, opts: &RunOptions) -> Result<Report> {
    let m = cfg.build_multiloop()?;
    let g = m.algebra();
    let mut summary = Table::new("algebra", &["key", "value"]);
    for (k, v) in [
        ("name", g.name().to_string()),
        ("dim", g.dim().to_string()),
        ("field_order", m.field().order().to_string()),
        ("n", m.n().to_string()),
        ("r", join_u32(m.action().orders())),
        ("orders", m.automorphisms().iter().map(|a| a.order().to_string()).collect::<Vec<_>>().join(",")),
        ("dim_V", m.v_dim().to_string()),
    ] {
        summary.push(vec![k.into(), v]);
    }

    let mut pieces = Table::new("eigenspaces", &["residue", "dim", "basis"]);
    let mut total = 0;
    for p in m.pieces() {
        total += p.dim();
        let basis: Vec<String> = p.basis.iter().map(|b| g.format_vector(b)).collect();
        pieces.push(vec![join_u32(&p.residue), p.dim().to_string(), basis.join("; ")]);
    }

    let names = g.basis_names();
    let mut cols: Vec<&str> = vec![""];
    cols.extend(names.iter().map(String::as_str));
    let mut killing = Table::new("killing_form", &cols);
    let kf = killing_form(g);
    for (i, name) in names.iter().enumerate() {
        let mut row = vec![name.clone()];
        row.extend(kf.row(i).iter().map(Scalar::to_string));
        killing.push(row);
    }

    let mut targets = Table::new(
        "targets",
        &["weight", "slice_dim", "omegabar_dim", "omegabar_invariant_dim", "V_invariant_dim", "target_dim"],
    );
    for w in cfg.weights() {
        targets.push(vec![
            w.to_string(),
            m.slice_dim(&w).to_string(),
            omegabar_weight_dim(m.n(), &w).to_string(),
            omegabar_invariants(m.action(), &w, m.field()).dim.to_string(),
            m.v_invariants(&w).len().to_string(),
            target_dim(&m, &w).to_string(),
        ]);
    }

    let checks = vec![check(
        "eigenspace_dims_sum",
        total == g.dim(),
        format!("sum of eigenspace dims {total}, dim g {}", g.dim()),
    )];
    let verdict = format!("constructed {} multiloop algebra with {} graded pieces", g.name(), m.pieces().len());
    Ok(Report::new(Command::Construct, cfg, opts, vec![summary, pieces, killing, targets], checks, verdict))
}

fn random_poly(rng: &mut ChaCha8Rng, m: &MultiloopAlgebra, terms: usize, max_degree: i64) -> Result<LaurentPoly> {
    let mut p = LaurentPoly::zero(m.n(), m.field());
    for _ in 0..terms {
        let a = Multidegree((0..m.n()).map(|_| rng.gen_range(-max_degree..=max_degree)).collect());
        let c = Scalar::from_int(m.field(), rng.gen_range(-3..=3));
        p = p.add(&LaurentPoly::monomial(a, c, m.cap())?)?;
    }
    Ok(p)
}

struct Sample {
    x: EqMapElement,
    y: EqMapElement,
    z: EqMapElement,
    p: LaurentPoly,
    q: LaurentPoly,
}

const VERIFY_CHECKS: [&str; 7] = [
    "jacobi",
    "bracket_antisymmetry",
    "omega_antisymmetry",
    "kappa_d_antisymmetry",
    "omega_cocycle",
    "kappa_d_equivariance",
    "leibniz",
];

/// `None` when the identity holds, else the counterexample.
fn verify_sample(m: &MultiloopAlgebra, s: &Sample) -> Result<Vec<Option<String>>> {
    let (x, y, z) = (&s.x, &s.y, &s.z);
    let inputs = || format!("x = {x}; y = {y}; z = {z}");
    let fail = |bad: bool, what: String| if bad { Some(what) } else { None };

    let jac = x.bracket(&y.bracket(z)?)?.add(&y.bracket(&z.bracket(x)?)?)?.add(&z.bracket(&x.bracket(y)?)?)?;
    let anti = x.bracket(y)?.add(&y.bracket(x)?)?;
    let om = omega_alg(x, y)?.add(&omega_alg(y, x)?);
    let wit = antisymmetry_witness(x, y)?;
    let defect = cocycle_defect(x, y, z)?;
    let equiv = check_equivariance(m, &kappa_d(x, y)?);

    let dpq = exterior_d(&s.p.mul(&s.q, m.cap())?);
    let rhs = exterior_d(&s.q).mul_poly(&s.p, m.cap())?.add(&exterior_d(&s.p).mul_poly(&s.q, m.cap())?);
    let leib = dpq.sub(&rhs);

    Ok(vec![
        fail(!jac.is_zero(), format!("{}: cyclic sum {jac}", inputs())),
        fail(!anti.is_zero(), format!("{}: [x,y] + [y,x] = {anti}", inputs())),
        fail(!om.is_zero(), format!("{}: ω(x,y) + ω(y,x) = {om}", inputs())),
        fail(!wit.is_zero(), format!("{}: witness {wit}", inputs())),
        fail(!defect.is_zero(), format!("{}: defect {defect}", inputs())),
        equiv.err().map(|e| format!("{}: {e}", inputs())),
        fail(!leib.is_zero(), format!("p = {}; q = {}: d(pq) - p dq - q dp = {leib}", s.p, s.q)),
    ])
}

fn verify(cfg: &RunConfig, opts: &RunOptions) -> Result<Report> {
    let m = cfg.build_multiloop()?;
    let v = &cfg.verify;
    let mut rng = ChaCha8Rng::seed_from_u64(opts.seed);
    let mut samples = Vec::with_capacity(v.triples);
    for _ in 0..v.triples {
        let x = random_element(&m, &mut rng, v.terms, v.max_degree);
        let y = random_element(&m, &mut rng, v.terms, v.max_degree);
        let z = random_element(&m, &mut rng, v.terms, v.max_degree);
        let p = random_poly(&mut rng, &m, v.terms, v.max_degree)?;
        let q = random_poly(&mut rng, &m, v.terms, v.max_degree)?;
        samples.push(Sample { x, y, z, p, q });
    }
    let outcomes = samples.par_iter().map(|s| verify_sample(&m, s)).collect::<Result<Vec<_>>>()?;

    // exact forms vanish in the quotient, one weight at a time
    let mut exact_fail = None;
    let mut exact_count = 0;
    for w in cfg.weights() {
        let f = exterior_d(&LaurentPoly::monomial(w.clone(), Scalar::one(m.field()), m.cap())?);
        let class = reduce_mod_exact(&f, &w)?;
        exact_count += 1;
        if !class.is_zero() && exact_fail.is_none() {
            exact_fail = Some(format!("d(t^{w}) reduces to {class}"));
        }
    }

    let mut table = Table::new("identities", &["identity", "samples", "failures"]);
    let mut checks = Vec::new();
    for (idx, name) in VERIFY_CHECKS.iter().enumerate() {
        let failures: Vec<&String> = outcomes.iter().filter_map(|o| o[idx].as_ref()).collect();
        table.push(vec![name.to_string(), outcomes.len().to_string(), failures.len().to_string()]);
        let detail = match failures.first() {
            Some(c) => format!("counterexample: {c}"),
            None => format!("{} samples", outcomes.len()),
        };
        checks.push(check(name, failures.is_empty(), detail));
    }
    table.push(vec!["exact_forms_vanish".into(), exact_count.to_string(), usize::from(exact_fail.is_some()).to_string()]);
    checks.push(check(
        "exact_forms_vanish",
        exact_fail.is_none(),
        exact_fail.unwrap_or_else(|| format!("{exact_count} weights")),
    ));
    let verdict = if checks.iter().all(|c| c.passed) {
        format!("all identities hold on {} random samples", outcomes.len())
    } else {
        "identity failures found".to_string()
    };
    Ok(Report::new(Command::Verify, cfg, opts, vec![table], checks, verdict))
}

/// One row of `h2-scan`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ScanRow {
    pub weight: Multidegree,
    pub cutoff: u32,
    pub dim_z: usize,
    pub dim_b: usize,
    pub dim_h2: usize,
    pub dim_h2_next: usize,
    pub target: usize,
    pub factorizable: bool,
    pub phis: Vec<String>,
}

impl ScanRow {
    pub fn stable(&self) -> bool {
        self.dim_h2 == self.dim_h2_next
    }

    pub fn matches(&self) -> bool {
        self.stable() && self.dim_h2 == self.target
    }
}

/// `H²` at `w` for cutoffs `D` and `D + 1`, the target, and the factorization
/// of every representative.
pub fn scan_weight(m: &MultiloopAlgebra, w: &Multidegree, cutoff: u32) -> Result<ScanRow> {
    let low = ce_h2_weight(m, w, cutoff)?;
    let high = ce_h2_weight(m, w, cutoff + 1)?;
    let mut factorizable = true;
    let mut phis = Vec::new();
    for psi in &low.representatives {
        match factorize(m, psi) {
            Ok(f) => phis.push(format!("[{}]", f.phi.coeffs.iter().map(Scalar::to_string).collect::<Vec<_>>().join(", "))),
            Err(Error::Inconsistent { .. }) | Err(Error::NotACocycle { .. }) => factorizable = false,
            Err(e) => return Err(e),
        }
    }
    Ok(ScanRow {
        weight: w.clone(),
        cutoff,
        dim_z: low.dim_z,
        dim_b: low.dim_b,
        dim_h2: low.dim_h2,
        dim_h2_next: high.dim_h2,
        target: target_dim(m, w),
        factorizable,
        phis,
    })
}

fn h2_scan(cfg: &RunConfig, opts: &RunOptions) -> Result<Report> {
    let m: Arc<MultiloopAlgebra> = cfg.build_multiloop()?;
    let mut weights = cfg.weights();
    weights.sort();
    weights.dedup();
    let rows = weights.par_iter().map(|w| scan_weight(&m, w, cfg.cutoff)).collect::<Result<Vec<_>>>()?;

    let mut table = Table::new(
        "h2",
        &["weight", "D", "dim Z", "dim B", "dim H²", "dim H² (D+1)", "target", "stable", "match", "factorizable", "phi"],
    );
    for r in &rows {
        table.push(vec![
            r.weight.to_string(),
            r.cutoff.to_string(),
            r.dim_z.to_string(),
            r.dim_b.to_string(),
            r.dim_h2.to_string(),
            r.dim_h2_next.to_string(),
            r.target.to_string(),
            r.stable().to_string(),
            r.matches().to_string(),
            r.factorizable.to_string(),
            r.phis.join(" "),
        ]);
    }
    let list = |pred: &dyn Fn(&ScanRow) -> bool| -> String {
        let bad: Vec<String> = rows.iter().filter(|r| !pred(r)).map(|r| r.weight.to_string()).collect();
        if bad.is_empty() {
            format!("{} weights", rows.len())
        } else {
            format!("fails at {}", bad.join(" "))
        }
    };
    let checks = vec![
        check("stable", rows.iter().all(ScanRow::stable), list(&ScanRow::stable)),
        check("matches_target", rows.iter().all(ScanRow::matches), list(&ScanRow::matches)),
        check("factorizable", rows.iter().all(|r| r.factorizable), list(&|r| r.factorizable)),
    ];
    let verdict = if checks.iter().all(|c| c.passed) {
        format!("universality holds degree-wise at cutoff {} on all scanned weights", cfg.cutoff)
    } else {
        format!("universality not established at cutoff {}", cfg.cutoff)
    };
    Ok(Report::new(Command::H2Scan, cfg, opts, vec![table], checks, verdict))
}

fn sci(x: f64) -> String {
    format!("{x:.6e}")
}

fn strictly_decreasing(v: &[f64]) -> bool {
    v.windows(2).all(|w| w[1] < w[0])
}

fn density_demo(cfg: &RunConfig, opts: &RunOptions) -> Result<Report> {
    let d = &cfg.density;
    let reports: Vec<ApproxReport> = match d.mode {
        DensityMode::Fourier => {
            let f = SmoothTestFunction::by_name(&d.function)?;
            d.ladder.par_iter().map(|&n| ck_error(&f, &fourier_truncate(&f, n), d.k, d.grid)).collect()
        }
        DensityMode::Weierstrass => {
            let f = IntervalFunction::by_name(&d.function)?;
            d.ladder
                .par_iter()
                .map(|&n| interval_error(f, &weierstrass_integrate_approx(f, d.mu, n), d.k, d.grid))
                .collect()
        }
    };
    let mut cols = vec!["N".to_string(), "grid".to_string()];
    cols.extend((0..=d.k).map(|j| format!("C{j} error")));
    let mut table = Table { name: "errors".into(), columns: cols, rows: Vec::new() };
    for r in &reports {
        let mut row = vec![r.parameter.to_string(), r.grid.to_string()];
        row.extend((0..=d.k).map(|j| sci(r.ck(j))));
        table.push(row);
    }
    let c0: Vec<f64> = reports.iter().map(|r| r.ck(0)).collect();
    let ck: Vec<f64> = reports.iter().map(|r| r.ck(d.k)).collect();
    let checks = match d.mode {
        DensityMode::Fourier => {
            let last = *c0.last().expect("nonempty ladder");
            vec![
                check("c0_strictly_decreasing", strictly_decreasing(&c0), c0.iter().map(|x| sci(*x)).collect::<Vec<_>>().join(" ")),
                check("final_c0_below_1e-8", last <= 1e-8, sci(last)),
            ]
        }
        DensityMode::Weierstrass => vec![check(
            &format!("c{}_strictly_decreasing", d.k),
            strictly_decreasing(&ck),
            ck.iter().map(|x| sci(*x)).collect::<Vec<_>>().join(" "),
        )],
    };
    let verdict = format!(
        "{} approximation of {}: final C{} error {}",
        match d.mode {
            DensityMode::Fourier => "Fourier",
            DensityMode::Weierstrass => "Bernstein",
        },
        d.function,
        d.k,
        sci(*ck.last().expect("nonempty ladder"))
    );
    Ok(Report::new(Command::DensityDemo, cfg, opts, vec![table], checks, verdict))
}
