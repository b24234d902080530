//! Command bodies. Each returns the full stdout payload as a string so the
//! binary prints exactly once, keeping output byte-stable.

use rayon::prelude::*;
use serde::Serialize;
use std::fmt::Write as _;
use thetalab_core::asympt::{constant_product_identity, def_bound, exact_theta_singleton, leading_constant, rcw_bound};
use thetalab_core::combinat::{binom, factorial, LSpec};
use thetalab_core::graphs::{build_graph, gap_report, sandwich_check};
use thetalab_core::lp;
use thetalab_core::rational::{int, rat, rat_int, rational_pow, to_decimal_string, to_exact_string};
use thetalab_core::scheme::JohnsonScheme;
use thetalab_core::{Error, Int, Rational};

pub struct Options {
    pub format: OutputFormat,
    pub precision: usize,
    pub cap: u64,
}

#[derive(Copy, Clone, PartialEq, Eq)]
pub enum OutputFormat {
    Default,
    Csv,
    Json,
}

pub struct SpecInput {
    pub n: u64,
    pub k: u64,
    pub ell: String,
}

pub enum Failure {
    Input(String),
    Core(Error),
    /// Core error plus a usage hint printed after it.
    CoreWithHint(Error, String),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure::Core(e)
    }
}

pub struct Output {
    pub stdout: String,
    pub code: u8,
}

impl Output {
    fn ok(stdout: String) -> Result<Output, Failure> {
        Ok(Output { stdout, code: 0 })
    }
}

/// Comma-separated intersection sizes. Duplicates and junk are rejected
/// here rather than canonicalized away.
fn parse_ell(raw: &str) -> Result<Vec<u64>, Failure> {
    let raw = raw.trim();
    if raw.is_empty() {
        return Ok(Vec::new());
    }
    let mut out = Vec::new();
    for tok in raw.split(',') {
        let v: u64 = tok
            .trim()
            .parse()
            .map_err(|_| Failure::Input(format!("L entry is not a nonnegative integer: {tok:?}")))?;
        if out.contains(&v) {
            return Err(Failure::Input(format!("L lists {v} twice")));
        }
        out.push(v);
    }
    Ok(out)
}

impl SpecInput {
    fn build(&self) -> Result<LSpec, Failure> {
        let ell = parse_ell(&self.ell)?;
        Ok(LSpec::new(self.n, self.k, ell)?)
    }
}

/// An exact rational paired with its decimal rendering.
#[derive(Serialize)]
struct Exact {
    exact: String,
    approx: String,
}

fn exact(r: &Rational, precision: usize) -> Exact {
    Exact {
        exact: to_exact_string(r),
        approx: to_decimal_string(r, precision),
    }
}

fn ell_set(ell: &[u64]) -> String {
    let inner: Vec<String> = ell.iter().map(|l| l.to_string()).collect();
    format!("{{{}}}", inner.join(","))
}

fn json_line<T: Serialize>(value: &T) -> String {
    let mut s = serde_json::to_string_pretty(value).expect("serializable report");
    s.push('\n');
    s
}

#[derive(Serialize)]
struct BoundValue {
    exact: String,
    approx: String,
    valid: bool,
}

#[derive(Serialize)]
struct ThetaReport {
    command: &'static str,
    n: u64,
    k: u64,
    #[serde(rename = "L")]
    ell: Vec<u64>,
    theta: Exact,
    #[serde(skip_serializing_if = "Option::is_none")]
    sigma: Option<Exact>,
    def_bound: BoundValue,
    rcw_bound: String,
    theta_le_def_bound: bool,
    theta_le_rcw_bound: bool,
}

fn theta_report(
    opts: &Options,
    spec: &LSpec,
    command: &'static str,
    with_sigma: bool,
) -> Result<ThetaReport, Failure> {
    let th = lp::theta(spec)?;
    let sig = if with_sigma { Some(lp::sigma(spec)?) } else { None };
    let def = def_bound(spec);
    let rcw = rcw_bound(spec);
    Ok(ThetaReport {
        command,
        n: spec.n(),
        k: spec.k(),
        ell: spec.ell().to_vec(),
        theta_le_def_bound: th <= def.value,
        theta_le_rcw_bound: th <= rat_int(rcw.clone()),
        theta: exact(&th, opts.precision),
        sigma: sig.map(|s| exact(&s, opts.precision)),
        def_bound: BoundValue {
            exact: to_exact_string(&def.value),
            approx: to_decimal_string(&def.value, opts.precision),
            valid: def.valid,
        },
        rcw_bound: rcw.to_string(),
    })
}

fn render_theta_text(r: &ThetaReport, spec: &LSpec) -> String {
    let mut out = String::new();
    let _ = writeln!(out, "{} {}", r.command, spec);
    let _ = writeln!(out, "theta = {} ~ {}", r.theta.exact, r.theta.approx);
    if let Some(s) = &r.sigma {
        let _ = writeln!(out, "sigma = {} ~ {}", s.exact, s.approx);
    }
    let _ = writeln!(
        out,
        "def_bound = {} ~ {} (valid at this n: {})",
        r.def_bound.exact,
        r.def_bound.approx,
        if r.def_bound.valid { "yes" } else { "no" }
    );
    let _ = writeln!(out, "rcw_bound = {}", r.rcw_bound);
    let _ = writeln!(
        out,
        "theta <= def_bound: {}",
        if r.theta_le_def_bound { "yes" } else { "no" }
    );
    let _ = writeln!(
        out,
        "theta <= rcw_bound: {}",
        if r.theta_le_rcw_bound { "yes" } else { "no" }
    );
    out
}

pub fn theta(opts: &Options, input: &SpecInput, with_sigma: bool) -> Result<Output, Failure> {
    let spec = input.build()?;
    let report = theta_report(opts, &spec, "theta", with_sigma)?;
    match opts.format {
        OutputFormat::Json => Output::ok(json_line(&report)),
        OutputFormat::Csv => Err(Failure::Input(
            "theta prints a report; csv applies to sweep and gap".into(),
        )),
        OutputFormat::Default => Output::ok(render_theta_text(&report, &spec)),
    }
}

pub fn sigma(opts: &Options, input: &SpecInput) -> Result<Output, Failure> {
    let spec = input.build()?;
    let report = theta_report(opts, &spec, "sigma", true)?;
    match opts.format {
        OutputFormat::Json => Output::ok(json_line(&report)),
        OutputFormat::Csv => Err(Failure::Input(
            "sigma prints a report; csv applies to sweep and gap".into(),
        )),
        OutputFormat::Default => Output::ok(render_theta_text(&report, &spec)),
    }
}

#[derive(Serialize)]
struct SweepRow {
    n: u64,
    theta: Exact,
    sigma: Exact,
    leading: Exact,
    residual: Exact,
    def_bound: BoundValue,
    rcw_bound: String,
}

pub fn sweep(
    opts: &Options,
    k: u64,
    ell_raw: &str,
    from: u64,
    to: u64,
    step: u64,
) -> Result<Output, Failure> {
    let ell = parse_ell(ell_raw)?;
    if step == 0 {
        return Err(Failure::Input("step must be positive".into()));
    }
    if from < 2 * k {
        return Err(Failure::Input(format!(
            "sweep starts below the scheme threshold: from = {from} < 2k = {}",
            2 * k
        )));
    }
    if to < from {
        return Err(Failure::Input(format!("empty range: to = {to} < from = {from}")));
    }
    // leading term; an empty L means theta = 1 = n^0
    let (constant, s) = match leading_constant(k, &ell) {
        Ok(t) => (t.constant, t.exponent),
        Err(Error::EmptyL) => (rat(1, 1), 0),
        Err(e) => return Err(e.into()),
    };

    let ns: Vec<u64> = (from..=to).step_by(step as usize).collect();
    let rows: Vec<Result<SweepRow, Error>> = ns
        .par_iter()
        .map(|&n| {
            let spec = LSpec::new(n, k, ell.iter().copied())?;
            let th = lp::theta(&spec)?;
            let sig = lp::sigma(&spec)?;
            let lead = constant.clone() * rational_pow(&Int::from(n), s as i64);
            let residual = (th.clone() - lead.clone()) / rational_pow(&Int::from(n), s as i64 - 1);
            let def = def_bound(&spec);
            Ok(SweepRow {
                n,
                theta: exact(&th, opts.precision),
                sigma: exact(&sig, opts.precision),
                leading: exact(&lead, opts.precision),
                residual: exact(&residual, opts.precision),
                def_bound: BoundValue {
                    exact: to_exact_string(&def.value),
                    approx: to_decimal_string(&def.value, opts.precision),
                    valid: def.valid,
                },
                rcw_bound: rcw_bound(&spec).to_string(),
            })
        })
        .collect();
    let mut table = Vec::with_capacity(rows.len());
    for row in rows {
        table.push(row?);
    }

    match opts.format {
        OutputFormat::Json => Output::ok(json_line(&table)),
        OutputFormat::Csv | OutputFormat::Default => {
            let mut out = String::from("n,theta,sigma,leading,residual,def_bound,rcw_bound\n");
            for r in &table {
                let _ = writeln!(
                    out,
                    "{},{},{},{},{},{},{}",
                    r.n,
                    r.theta.exact,
                    r.sigma.exact,
                    r.leading.exact,
                    r.residual.exact,
                    r.def_bound.exact,
                    r.rcw_bound
                );
            }
            Output::ok(out)
        }
    }
}

#[derive(Serialize)]
struct Check {
    name: &'static str,
    pass: bool,
    cases: u64,
    #[serde(skip_serializing_if = "Option::is_none")]
    counterexample: Option<String>,
}

impl Check {
    fn run(name: &'static str, mut body: impl FnMut() -> (u64, Option<String>)) -> Check {
        let (cases, counterexample) = body();
        Check {
            name,
            pass: counterexample.is_none(),
            cases,
            counterexample,
        }
    }
}

fn masks(k: u64) -> impl Iterator<Item = Vec<u64>> {
    (0u64..1 << k).map(move |mask| (0..k).filter(|l| mask >> l & 1 == 1).collect())
}

#[derive(Serialize)]
struct VerifyReport {
    command: &'static str,
    k_max: u64,
    checks: Vec<Check>,
    pass: bool,
}

pub fn verify(opts: &Options, k_max: u64, corrupt: bool) -> Result<Output, Failure> {
    if k_max == 0 || k_max > 10 {
        return Err(Failure::Input(format!(
            "k-max must be between 1 and 10, got {k_max}"
        )));
    }

    let mut checks = Vec::new();

    // product of the leading constants of L and its complement is 1/k!
    checks.push(Check::run("constant-product", || {
        let mut cases = 0;
        let mut first = true;
        for k in 1..=k_max {
            let want = Rational::new(int(1), factorial(k));
            for ell in masks(k) {
                cases += 1;
                let mut got = constant_product_identity(k, &ell).expect("identity total");
                if corrupt && first {
                    // deliberate off-by-one to prove failures surface
                    got += rat(1, 1);
                }
                first = false;
                if got != want {
                    return (
                        cases,
                        Some(format!(
                            "k={k} L={}: got {}, want {}",
                            ell_set(&ell),
                            to_exact_string(&got),
                            to_exact_string(&want)
                        )),
                    );
                }
            }
        }
        (cases, None)
    }));

    // theta(G) theta(G complement) = C(n,k) on a small exhaustive grid
    checks.push(Check::run("complement-product", || {
        let mut cases = 0;
        for k in 2..=k_max.min(5) {
            for n in [2 * k, 2 * k + 2] {
                for ell in masks(k) {
                    cases += 1;
                    let spec = LSpec::new(n, k, ell.iter().copied()).expect("grid spec");
                    let product = lp::theta(&spec).expect("theta")
                        * lp::theta(&spec.complement()).expect("complement theta");
                    let want = rat_int(binom(n as i64, k as i64));
                    if product != want {
                        return (
                            cases,
                            Some(format!(
                                "n={n} k={k} L={}: got {}, want {}",
                                ell_set(&ell),
                                to_exact_string(&product),
                                to_exact_string(&want)
                            )),
                        );
                    }
                }
            }
        }
        (cases, None)
    }));

    // the one-element closed form agrees with the LP once n is large;
    // n = 35 clears every threshold observed for k <= 6
    checks.push(Check::run("singleton-closed-form", || {
        let mut cases = 0;
        for k in 2..=k_max.min(6) {
            for l in 0..k {
                for n in [35u64, 36] {
                    cases += 1;
                    let spec = LSpec::new(n, k, [l]).expect("singleton spec");
                    let closed = exact_theta_singleton(n, k, l).expect("closed form");
                    let lp_value = lp::theta(&spec).expect("theta");
                    if closed != lp_value {
                        return (
                            cases,
                            Some(format!(
                                "n={n} k={k} l={l}: closed {}, lp {}",
                                to_exact_string(&closed),
                                to_exact_string(&lp_value)
                            )),
                        );
                    }
                }
            }
        }
        (cases, None)
    }));

    // eigenvalue table row sums: valencies at u=0, zero elsewhere
    checks.push(Check::run("scheme-row-sums", || {
        let mut cases = 0;
        for k in 1..=k_max.min(8) {
            for n in [2 * k, 2 * k + 3] {
                let scheme = JohnsonScheme::build(n, k).expect("scheme");
                for u in 0..=k as usize {
                    cases += 1;
                    let total: Int = (0..=k as usize).map(|i| scheme.p[i][u].clone()).sum();
                    let want = if u == 0 {
                        binom(n as i64, k as i64)
                    } else {
                        int(0)
                    };
                    if total != want {
                        return (cases, Some(format!("n={n} k={k} u={u}: row sum {total}")));
                    }
                }
            }
        }
        (cases, None)
    }));

    let pass = checks.iter().all(|c| c.pass);
    let report = VerifyReport {
        command: "verify",
        k_max,
        checks,
        pass,
    };
    let stdout = match opts.format {
        OutputFormat::Json => json_line(&report),
        OutputFormat::Csv => {
            return Err(Failure::Input(
                "verify prints a report; csv applies to sweep and gap".into(),
            ))
        }
        OutputFormat::Default => {
            let mut out = String::new();
            let _ = writeln!(out, "verify (k_max={k_max})");
            for c in &report.checks {
                match &c.counterexample {
                    None => {
                        let _ = writeln!(out, "check {}: pass ({} cases)", c.name, c.cases);
                    }
                    Some(ce) => {
                        let _ = writeln!(out, "check {}: FAIL at {ce}", c.name);
                    }
                }
            }
            let _ = writeln!(out, "result: {}", if report.pass { "pass" } else { "FAIL" });
            out
        }
    };
    Ok(Output {
        stdout,
        code: if report.pass { 0 } else { 3 },
    })
}

#[derive(Serialize)]
struct GapRow {
    q: u64,
    n: u64,
    k: u64,
    theta: Exact,
    sigma: Exact,
    minrank_bound: String,
    vertex_count: String,
    def_bound: BoundValue,
    rcw_bound: String,
    alpha: Option<u64>,
    alpha_exact: Option<bool>,
    exponent_estimate: f64,
    exponent_target: f64,
}

pub fn gap(opts: &Options, q: u64, n_raw: &str, budget: u64) -> Result<Output, Failure> {
    let ns = parse_ell(n_raw).map_err(|_| {
        Failure::Input(format!("n must be a comma-separated list of sizes: {n_raw:?}"))
    })?;
    if ns.is_empty() {
        return Err(Failure::Input("n list is empty".into()));
    }
    let mut rows = Vec::new();
    for &n in &ns {
        let r = gap_report(q, n, opts.cap, budget)?;
        rows.push(GapRow {
            q: r.q,
            n: r.n,
            k: r.k,
            theta: exact(&r.theta, opts.precision),
            sigma: exact(&r.sigma, opts.precision),
            minrank_bound: r.minrank_bound.to_string(),
            vertex_count: r.vertex_count.to_string(),
            def_bound: BoundValue {
                exact: to_exact_string(&r.def_bound.value),
                approx: to_decimal_string(&r.def_bound.value, opts.precision),
                valid: r.def_bound.valid,
            },
            rcw_bound: r.rcw_bound.to_string(),
            alpha: r.alpha.as_ref().map(|a| a.size),
            alpha_exact: r.alpha.as_ref().map(|a| a.exact),
            exponent_estimate: r.exponent_estimate,
            exponent_target: r.exponent_target,
        });
    }

    match opts.format {
        OutputFormat::Json => Output::ok(json_line(&rows)),
        OutputFormat::Csv | OutputFormat::Default => {
            let mut out = String::from(
                "q,n,k,theta,sigma,minrank_bound,vertex_count,def_bound,rcw_bound,alpha,alpha_exact,exponent_estimate,exponent_target\n",
            );
            for r in &rows {
                let _ = writeln!(
                    out,
                    "{},{},{},{},{},{},{},{},{},{},{},{},{}",
                    r.q,
                    r.n,
                    r.k,
                    r.theta.exact,
                    r.sigma.exact,
                    r.minrank_bound,
                    r.vertex_count,
                    r.def_bound.exact,
                    r.rcw_bound,
                    r.alpha.map_or(String::new(), |a| a.to_string()),
                    r.alpha_exact.map_or(String::new(), |e| e.to_string()),
                    r.exponent_estimate,
                    r.exponent_target
                );
            }
            Output::ok(out)
        }
    }
}

#[derive(Serialize)]
struct AlphaReport {
    command: &'static str,
    n: u64,
    k: u64,
    #[serde(rename = "L")]
    ell: Vec<u64>,
    alpha: u64,
    exact: bool,
    nodes: u64,
    witness: Vec<usize>,
    sigma: Exact,
    theta: Exact,
}

pub fn alpha(opts: &Options, input: &SpecInput, budget: u64) -> Result<Output, Failure> {
    let spec = input.build()?;
    let report = match sandwich_check(&spec, opts.cap, budget) {
        Ok(r) => r,
        Err(e @ Error::CapExceeded { .. }) => {
            return Err(Failure::CoreWithHint(
                e,
                "run `theta --sigma` for bounds without the graph, \
                 or raise --cap / THETALAB_CAP"
                    .into(),
            ))
        }
        Err(e) => return Err(e.into()),
    };
    let out = AlphaReport {
        command: "alpha",
        n: spec.n(),
        k: spec.k(),
        ell: spec.ell().to_vec(),
        alpha: report.alpha.size,
        exact: report.alpha.exact,
        nodes: report.alpha.nodes,
        witness: report.alpha.witness.clone(),
        sigma: exact(&report.sigma, opts.precision),
        theta: exact(&report.theta, opts.precision),
    };
    match opts.format {
        OutputFormat::Json => Output::ok(json_line(&out)),
        OutputFormat::Csv => Err(Failure::Input(
            "alpha prints a report; csv applies to sweep and gap".into(),
        )),
        OutputFormat::Default => {
            let mut text = String::new();
            let _ = writeln!(text, "alpha {}", spec);
            if out.exact {
                let _ = writeln!(text, "alpha = {} (exact, {} nodes)", out.alpha, out.nodes);
            } else {
                let _ = writeln!(
                    text,
                    "alpha >= {} (lower bound, node budget exhausted)",
                    out.alpha
                );
            }
            let witness: Vec<String> = out.witness.iter().map(|v| v.to_string()).collect();
            let _ = writeln!(text, "witness = {}", witness.join(" "));
            let _ = writeln!(text, "sigma = {} ~ {}", out.sigma.exact, out.sigma.approx);
            let _ = writeln!(text, "theta = {} ~ {}", out.theta.exact, out.theta.approx);
            let _ = writeln!(text, "sandwich alpha <= sigma <= theta: ok");
            Output::ok(text)
        }
    }
}

pub fn dump_graph(opts: &Options, input: &SpecInput) -> Result<Output, Failure> {
    if opts.format != OutputFormat::Default {
        return Err(Failure::Input("dump-graph prints plain text only".into()));
    }
    let spec = input.build()?;
    let graph = build_graph(&spec, opts.cap)?;
    let mut out = String::new();
    for v in 0..graph.vertex_count() {
        let subset: Vec<String> = graph.vertices[v].iter().map(|x| x.to_string()).collect();
        let neighbors: Vec<String> = graph.neighbors(v).iter().map(|w| w.to_string()).collect();
        if neighbors.is_empty() {
            let _ = writeln!(out, "{}:", subset.join(","));
        } else {
            let _ = writeln!(out, "{}: {}", subset.join(","), neighbors.join(" "));
        }
    }
    Output::ok(out)
}
